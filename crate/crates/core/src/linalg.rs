//! Small dense kernels for the per-window matting algebra.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::Matrix;

/// Upper-triangular `R` (`n x n`) of a Householder QR of the `m x n`
/// column-major matrix `a`, `m >= n`. Only `R` is kept.
pub(crate) fn householder_r(mut a: Matrix) -> Matrix {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut v = vec![0.0; m];
    for j in 0..n {
        let col = a.col(j);
        let norm = libm::sqrt(col[j..].iter().map(|x| x * x).sum::<f64>());
        if norm == 0.0 {
            continue;
        }
        let alpha = if col[j] > 0.0 { -norm } else { norm };
        v[j..].copy_from_slice(&col[j..]);
        v[j] -= alpha;
        let vnorm2: f64 = v[j..].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in j..n {
            let col = a.col_mut(c);
            let proj: f64 = v[j..].iter().zip(&col[j..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * proj / vnorm2;
            for (ci, vi) in col[j..].iter_mut().zip(&v[j..]) {
                *ci -= f * vi;
            }
        }
    }
    Matrix::from_fn(n, n, |r, c| if r <= c { a[(r, c)] } else { 0.0 })
}

/// Inverse of a nonsingular upper-triangular matrix by back substitution.
pub(crate) fn upper_triangular_inverse(r: &Matrix) -> Matrix {
    let n = r.rows();
    let mut inv = Matrix::zeros(n, n);
    let mut x: Vec<f64> = vec![0.0; n];
    for j in 0..n {
        x.iter_mut().for_each(|v| *v = 0.0);
        for i in (0..=j).rev() {
            let mut s = if i == j { 1.0 } else { 0.0 };
            for p in i + 1..=j {
                s -= r[(i, p)] * x[p];
            }
            x[i] = s / r[(i, i)];
        }
        inv.col_mut(j).copy_from_slice(&x);
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_reproduces_gram() {
        let a = Matrix::from_rows(&[
            [1.0, 2.0, 0.5],
            [0.0, 1.0, -1.0],
            [3.0, -2.0, 4.0],
            [1.0, 1.0, 1.0],
        ])
        .unwrap();
        let r = householder_r(a.clone());
        let rtr = r.tr_matmul(&r).unwrap();
        let ata = a.tr_matmul(&a).unwrap();
        assert!(rtr.max_abs_diff(&ata) < 1e-12);
        let rinv = upper_triangular_inverse(&r);
        let eye = r.matmul(&rinv).unwrap();
        assert!(eye.max_abs_diff(&Matrix::identity(3)) < 1e-12);
    }
}
