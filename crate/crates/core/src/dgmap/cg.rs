use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, norm2};

/// A symmetric positive definite operator with an accessible diagonal.
pub trait SpdOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
    fn diagonal(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgOutput {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// `‖b - Ax‖ / ‖b‖`, recomputed from the returned solution.
    pub relative_residual: f64,
}

/// Jacobi-preconditioned conjugate gradient started from `x0`.
///
/// Convergence is declared on the true residual, not the recursively
/// updated one; when the two drift apart the iteration restarts from the
/// current iterate.
pub fn pcg<O: SpdOperator + ?Sized>(
    op: &O,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    max_iters: usize,
) -> Result<CgOutput> {
    let n = op.dim();
    assert_eq!(b.len(), n);
    assert_eq!(x0.len(), n);
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return Ok(CgOutput {
            solution: vec![0.0; n],
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let inv_diag: Vec<f64> = op
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let target = tol * b_norm;

    let mut x = x0.to_vec();
    let mut r = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ap = vec![0.0; n];
    let mut iterations = 0;

    let true_residual = |x: &[f64], r: &mut [f64], scratch: &mut [f64]| {
        op.apply(x, scratch);
        for ((ri, bi), ai) in r.iter_mut().zip(b).zip(scratch.iter()) {
            *ri = bi - ai;
        }
        norm2(r)
    };

    let mut res = true_residual(&x, &mut r, &mut ap);
    'restart: loop {
        if res <= target {
            return Ok(CgOutput {
                solution: x,
                iterations,
                relative_residual: res / b_norm,
            });
        }
        for ((zi, ri), di) in z.iter_mut().zip(&r).zip(&inv_diag) {
            *zi = ri * di;
        }
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        while iterations < max_iters {
            iterations += 1;
            op.apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                break;
            }
            let step = rz / pap;
            axpy(step, &p, &mut x);
            axpy(-step, &ap, &mut r);
            if norm2(&r) <= target {
                res = true_residual(&x, &mut r, &mut ap);
                continue 'restart;
            }
            for ((zi, ri), di) in z.iter_mut().zip(&r).zip(&inv_diag) {
                *zi = ri * di;
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for (pi, zi) in p.iter_mut().zip(&z) {
                *pi = zi + beta * *pi;
            }
        }
        res = true_residual(&x, &mut r, &mut ap);
        if res <= target {
            continue 'restart;
        }
        return Err(Error::NoConvergence {
            iterations,
            residual: res / b_norm,
        });
    }
}
