use alloc::format;

use super::Regularizer;
use crate::cube::HyperCube;
use crate::error::{Error, Result};
use crate::factors::FactorPair;
use crate::matrix::{axpy, Matrix};

/// Added to every multiplicative-update denominator.
pub const DENOMINATOR_GUARD: f64 = 1e-12;

fn check_shapes(cube: &HyperCube, factors: &FactorPair) -> Result<()> {
    let (l, k) = factors.endmembers.shape();
    let (ka, n) = factors.abundances.shape();
    if l != cube.channels() || n != cube.pixels() || k != ka {
        return Err(Error::ShapeMismatch(format!(
            "cube {}x{} against factors {l}x{k} . {ka}x{n}",
            cube.channels(),
            cube.pixels()
        )));
    }
    Ok(())
}

/// `½‖Y - MA‖²_F` without materializing `MA`.
pub fn reconstruction_error(cube: &HyperCube, factors: &FactorPair) -> Result<f64> {
    check_shapes(cube, factors)?;
    let m = &factors.endmembers;
    let a = &factors.abundances;
    let mut fitted = alloc::vec![0.0; cube.channels()];
    let mut total = 0.0;
    for n in 0..cube.pixels() {
        fitted.iter_mut().for_each(|v| *v = 0.0);
        for (k, &akn) in a.col(n).iter().enumerate() {
            axpy(akn, m.col(k), &mut fitted);
        }
        total += cube
            .spectrum(n)
            .iter()
            .zip(&fitted)
            .map(|(y, f)| (y - f) * (y - f))
            .sum::<f64>();
    }
    Ok(0.5 * total)
}

/// `½‖Y - MA‖²_F + λ · penalty(A)`.
pub fn objective(cube: &HyperCube, factors: &FactorPair, reg: &Regularizer) -> Result<f64> {
    reg.check_pixels(factors.pixels())?;
    Ok(reconstruction_error(cube, factors)? + reg.value(&factors.abundances))
}

/// `M ← M ∘ (YAᵀ) / (MAAᵀ + δ)`
pub fn update_endmembers(cube: &HyperCube, factors: &FactorPair) -> Result<Matrix> {
    check_shapes(cube, factors)?;
    let m = &factors.endmembers;
    let a = &factors.abundances;
    let numer = cube.data().matmul_tr(a)?;
    let denom = m.matmul(&a.matmul_tr(a)?)?;
    Ok(multiplicative(m, &numer, &denom))
}

/// `A ← A ∘ (MᵀY) / (MᵀMA + penalty gradient + δ)`
pub fn update_abundances(cube: &HyperCube, factors: &FactorPair, reg: &Regularizer) -> Result<Matrix> {
    check_shapes(cube, factors)?;
    reg.check_pixels(factors.pixels())?;
    let m = &factors.endmembers;
    let a = &factors.abundances;
    let numer = m.tr_matmul(cube.data())?;
    let mut denom = m.tr_matmul(m)?.matmul(a)?;
    reg.add_gradient(a, &mut denom);
    Ok(multiplicative(a, &numer, &denom))
}

fn multiplicative(base: &Matrix, numer: &Matrix, denom: &Matrix) -> Matrix {
    let mut out = base.clone();
    for ((o, n), d) in out
        .as_mut_slice()
        .iter_mut()
        .zip(numer.as_slice())
        .zip(denom.as_slice())
    {
        *o *= n / (d + DENOMINATOR_GUARD);
    }
    out
}

/// Moves each abundance row's ℓ1 mass into the matching endmember column:
/// `M_lk ← M_lk Σₙ A_kn`, `A_kn ← A_kn / Σₙ A_kn`. The product `MA` is
/// unchanged up to rounding.
pub fn rescale_factors(factors: &FactorPair) -> Result<FactorPair> {
    let mut out = factors.clone();
    let k = factors.k();
    let n = factors.pixels();
    let mut sums = alloc::vec![0.0; k];
    for p in 0..n {
        for (s, a) in sums.iter_mut().zip(factors.abundances.col(p)) {
            *s += a.abs();
        }
    }
    if let Some(row) = sums.iter().position(|&s| !(s > 0.0)) {
        return Err(Error::DegenerateRow(row));
    }
    for (kk, &s) in sums.iter().enumerate() {
        out.endmembers.col_mut(kk).iter_mut().for_each(|v| *v *= s);
    }
    for p in 0..n {
        for (a, s) in out.abundances.col_mut(p).iter_mut().zip(&sums) {
            *a /= s;
        }
    }
    Ok(out)
}
