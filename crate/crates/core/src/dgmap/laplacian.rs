use alloc::vec;
use alloc::vec::Vec;

use crate::cube::HyperCube;
use crate::error::{Error, Result};
use crate::linalg::{householder_r, upper_triangular_inverse};
use crate::matrix::Matrix;

/// Symmetric sparse matrix in compressed-row form.
///
/// Built by [`build_matting_laplacian`]; `value(i, j)` and `value(j, i)` are
/// accumulated from identical terms in identical order, so the symmetry is
/// exact rather than approximate.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseLaplacian {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    windows: usize,
}

impl SparseLaplacian {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Number of window placements that contributed.
    pub fn windows(&self) -> usize {
        self.windows
    }

    /// Column indices (ascending) and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |p| vals[p])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `out = L x`
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *o = cols.iter().zip(vals).map(|(&j, v)| v * x[j]).sum();
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| v.abs().max(m))
    }

    pub fn to_dense(&self) -> Matrix {
        let mut d = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                d[(i, j)] = v;
            }
        }
        d
    }
}

/// `Ȳᵀ(ȲȲᵀ + εI)⁻¹Ȳ` for one window, `Ȳ` being the window spectra
/// (`L x n`, one pixel per column) with their mean removed.
///
/// Works in the `n x n` pixel space through `I - ε(ȲᵀȲ + εI)⁻¹`, with the
/// inverse taken from a QR factorization of `[Ȳ; √ε I]` so the Gram matrix
/// `ȲᵀȲ` is never formed.
pub fn window_projection(window: &Matrix, epsilon: f64) -> Matrix {
    let w = whitened_inverse_factor(window, epsilon);
    let n = w.rows();
    let mut x = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = (if a == b { 1.0 } else { 0.0 }) - row_dot(&w, a, b);
            x[(a, b)] = v;
            x[(b, a)] = v;
        }
    }
    x
}

/// The local block `GᵢGᵢ` with `Gᵢ = P - Ȳᵀ(ȲȲᵀ + εI)⁻¹Ȳ` and `P` the
/// centering matrix. Exactly symmetric.
pub fn window_affinity(window: &Matrix, epsilon: f64) -> Matrix {
    let w = whitened_inverse_factor(window, epsilon);
    let n = w.rows();
    let inv_n = 1.0 / n as f64;
    // G = P - (I - WWᵀ) = WWᵀ - 11ᵀ/n
    let mut g = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = row_dot(&w, a, b) - inv_n;
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    let mut block = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = row_dot(&g, a, b);
            block[(a, b)] = v;
            block[(b, a)] = v;
        }
    }
    block
}

/// `√ε R⁻¹` where `RᵀR = ȲᵀȲ + εI`.
fn whitened_inverse_factor(window: &Matrix, epsilon: f64) -> Matrix {
    let (l, n) = window.shape();
    let mut mean = vec![0.0; l];
    for j in 0..n {
        for (m, v) in mean.iter_mut().zip(window.col(j)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let root_eps = libm::sqrt(epsilon);
    let aug = Matrix::from_fn(l + n, n, |r, c| {
        if r < l {
            window[(r, c)] - mean[r]
        } else if r - l == c {
            root_eps
        } else {
            0.0
        }
    });
    let mut w = upper_triangular_inverse(&householder_r(aug));
    w.scale(root_eps);
    w
}

#[inline]
fn row_dot(m: &Matrix, a: usize, b: usize) -> f64 {
    (0..m.cols()).map(|c| m[(a, c)] * m[(b, c)]).sum()
}

/// Top-left pixel of every fully contained `window x window` placement,
/// in row-major order.
pub fn window_origins(width: usize, height: usize, window: usize) -> impl Iterator<Item = (usize, usize)> {
    let rows = (height + 1).saturating_sub(window);
    let cols = (width + 1).saturating_sub(window);
    (0..rows).flat_map(move |r| (0..cols).map(move |c| (r, c)))
}

/// Matting Laplacian `Σᵢ SᵢᵀGᵢGᵢSᵢ` over all fully contained windows.
pub fn build_matting_laplacian(
    cube: &HyperCube,
    epsilon: f64,
    window: usize,
) -> Result<SparseLaplacian> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name: "window",
            value: window as f64,
        });
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
        });
    }
    let (width, height) = (cube.width(), cube.height());
    if width < window || height < window {
        return Err(Error::ImageTooSmall {
            width,
            height,
            window,
        });
    }
    let n = cube.pixels();
    let l = cube.channels();
    let span = 2 * window - 1;
    let slots = span * span;
    let mut acc = vec![0.0; n * slots];
    let mut touched = vec![false; n * slots];
    let slot = |dr: usize, dc: usize| dr * span + dc;

    let wp = window * window;
    let mut members = Vec::with_capacity(wp);
    let mut patch = Matrix::zeros(l, wp);
    let mut windows = 0;
    for (r0, c0) in window_origins(width, height, window) {
        members.clear();
        for r in r0..r0 + window {
            for c in c0..c0 + window {
                members.push((r, c));
            }
        }
        for (j, &(r, c)) in members.iter().enumerate() {
            patch.col_mut(j).copy_from_slice(cube.spectrum(r * width + c));
        }
        let block = window_affinity(&patch, epsilon);
        for (a, &(ra, ca)) in members.iter().enumerate() {
            let base = (ra * width + ca) * slots;
            for (b, &(rb, cb)) in members.iter().enumerate() {
                let s = base + slot(rb + window - 1 - ra, cb + window - 1 - ca);
                acc[s] += block[(a, b)];
                touched[s] = true;
            }
        }
        windows += 1;
    }

    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    row_ptr.push(0);
    for i in 0..n {
        let (r, c) = (i / width, i % width);
        for dr in 0..span {
            for dc in 0..span {
                let s = i * slots + slot(dr, dc);
                if touched[s] {
                    let j = (r + dr + 1 - window) * width + (c + dc + 1 - window);
                    col_idx.push(j);
                    values.push(acc[s]);
                }
            }
        }
        row_ptr.push(values.len());
    }
    Ok(SparseLaplacian {
        n,
        row_ptr,
        col_idx,
        values,
        windows,
    })
}
