#![allow(dead_code)]

use dgsnmf_core::{HyperCube, Matrix};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(lo..hi))
}

pub fn random_cube(rng: &mut ChaCha8Rng, width: usize, height: usize, channels: usize) -> HyperCube {
    HyperCube::new(random_matrix(rng, channels, width * height, 0.0, 1.0), width, height).unwrap()
}

pub fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_column_slice(m.rows(), m.cols(), m.as_slice())
}

/// Dense matting Laplacian assembled literally: explicit selection matrices,
/// the `L x L` inverse inside every window, full `N x N` accumulation.
pub fn dense_laplacian_oracle(cube: &HyperCube, epsilon: f64, window: usize) -> DMatrix<f64> {
    let (w, h) = (cube.width(), cube.height());
    let n = cube.pixels();
    let l = cube.channels();
    let y = to_na(cube.data());
    let wp = window * window;
    let mut lap = DMatrix::<f64>::zeros(n, n);
    let centering = DMatrix::<f64>::identity(wp, wp) - DMatrix::from_element(wp, wp, 1.0 / wp as f64);
    for r0 in 0..=h - window {
        for c0 in 0..=w - window {
            let mut select = DMatrix::<f64>::zeros(wp, n);
            let mut j = 0;
            for r in r0..r0 + window {
                for c in c0..c0 + window {
                    select[(j, r * w + c)] = 1.0;
                    j += 1;
                }
            }
            let yi = &y * select.transpose();
            let ybar = &yi * &centering;
            let gram = &ybar * ybar.transpose() + DMatrix::<f64>::identity(l, l) * epsilon;
            let inv = gram.try_inverse().expect("regularized Gram is invertible");
            let g = &centering - ybar.transpose() * inv * &ybar;
            lap += select.transpose() * (&g * &g) * &select;
        }
    }
    lap
}

pub fn dense_solve(a: DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let x = a.lu().solve(&DVector::from_column_slice(b)).expect("nonsingular");
    x.iter().copied().collect()
}
