//! Unmixing quality metrics.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::factors::FactorPair;
use crate::matrix::{dot, norm2, Matrix};

/// Spectral angle distance in radians, `arccos(mᵀm̂ / (‖m‖‖m̂‖))`.
pub fn sad(m: &[f64], m_hat: &[f64]) -> Result<f64> {
    if m.len() != m_hat.len() {
        return Err(Error::ShapeMismatch(format!(
            "spectra of length {} and {}",
            m.len(),
            m_hat.len()
        )));
    }
    let (a, b) = (norm2(m), norm2(m_hat));
    if a == 0.0 || b == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let cos = (dot(m, m_hat) / (a * b)).clamp(-1.0, 1.0);
    Ok(libm::acos(cos))
}

/// `sqrt(‖z - ẑ‖² / N)`
pub fn rmse(z: &[f64], z_hat: &[f64]) -> Result<f64> {
    if z.is_empty() {
        return Err(Error::EmptyInput);
    }
    if z.len() != z_hat.len() {
        return Err(Error::ShapeMismatch(format!(
            "rows of length {} and {}",
            z.len(),
            z_hat.len()
        )));
    }
    let ss: f64 = z.iter().zip(z_hat).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(libm::sqrt(ss / z.len() as f64))
}

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method with potentials, `O(n³)`). Returns `assignment[row] = col`.
///
/// Ties resolve toward the lowest column index.
pub fn optimal_assignment(cost: &Matrix) -> Vec<usize> {
    let n = cost.rows();
    assert_eq!(n, cost.cols(), "assignment needs a square cost matrix");
    // 1-based arrays; index 0 is the virtual start column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut min_v = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if reduced < min_v[j] {
                    min_v[j] = reduced;
                    way[j] = j0;
                }
                if min_v[j] < delta {
                    delta = min_v[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    assignment
}

/// Pairs every estimated endmember with a ground-truth one so the total
/// spectral angle is minimal. Returns `matching[k_hat] = k_true`.
pub fn match_endmembers(m_hat: &Matrix, m_true: &Matrix) -> Result<Vec<usize>> {
    if m_hat.shape() != m_true.shape() {
        return Err(Error::ShapeMismatch(format!(
            "estimated endmembers {:?} against truth {:?}",
            m_hat.shape(),
            m_true.shape()
        )));
    }
    let k = m_hat.cols();
    let mut cost = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            cost[(i, j)] = sad(m_true.col(j), m_hat.col(i))?;
        }
    }
    Ok(optimal_assignment(&cost))
}

/// Per-pixel Hoyer sparsity `(√K - ‖aₙ‖₁/‖aₙ‖₂) / (√K - 1)`: 1 for a
/// one-hot column, 0 for a uniform one.
pub fn hoyer_sparsity_map(abundances: &Matrix) -> Result<Vec<f64>> {
    let k = abundances.rows();
    if k < 2 {
        return Err(Error::TooFewEndmembers(k));
    }
    let root_k = libm::sqrt(k as f64);
    (0..abundances.cols())
        .map(|n| {
            let col = abundances.col(n);
            let l2 = norm2(col);
            if l2 == 0.0 {
                return Err(Error::ZeroColumn(n));
            }
            let l1: f64 = col.iter().map(|a| a.abs()).sum();
            Ok(((root_k - l1 / l2) / (root_k - 1.0)).clamp(0.0, 1.0))
        })
        .collect()
}

/// Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!("{} and {} samples", x.len(), y.len())));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(sxy / libm::sqrt(sxx * syy))
}

/// Per-endmember errors after optimal matching. Per-entry vectors are
/// indexed by estimated endmember.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// `matching[k_hat] = k_true`
    pub matching: Vec<usize>,
    /// Radians.
    pub sad_per_endmember: Vec<f64>,
    pub rmse_per_abundance: Vec<f64>,
    pub mean_sad: f64,
    pub mean_rmse: f64,
}

/// Matches endmembers, then scores each matched pair: SAD between spectra,
/// RMSE between abundance rows, both as given.
pub fn evaluate(estimate: &FactorPair, truth: &FactorPair) -> Result<EvalReport> {
    if estimate.endmembers.shape() != truth.endmembers.shape()
        || estimate.abundances.shape() != truth.abundances.shape()
    {
        return Err(Error::ShapeMismatch(format!(
            "estimate L={} K={} N={} against truth L={} K={} N={}",
            estimate.channels(),
            estimate.k(),
            estimate.pixels(),
            truth.channels(),
            truth.k(),
            truth.pixels()
        )));
    }
    let matching = match_endmembers(&estimate.endmembers, &truth.endmembers)?;
    let mut sad_per_endmember = Vec::with_capacity(matching.len());
    let mut rmse_per_abundance = Vec::with_capacity(matching.len());
    for (k_hat, &k_true) in matching.iter().enumerate() {
        sad_per_endmember.push(sad(truth.endmembers.col(k_true), estimate.endmembers.col(k_hat))?);
        rmse_per_abundance.push(rmse(
            &truth.abundances.row(k_true),
            &estimate.abundances.row(k_hat),
        )?);
    }
    let k = matching.len() as f64;
    Ok(EvalReport {
        mean_sad: sad_per_endmember.iter().sum::<f64>() / k,
        mean_rmse: rmse_per_abundance.iter().sum::<f64>() / k,
        matching,
        sad_per_endmember,
        rmse_per_abundance,
    })
}
