use crate::error::{Error, Result};
use crate::matrix::{dot, norm2};

/// Pairwise spectral similarity used to seed the guidance map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimilarityMeasure {
    /// Cosine of the spectral angle. Nearly constant on real scenes.
    Dot,
    /// `exp(-‖y_j - y_i‖² / σ)`
    #[default]
    Heat,
}

/// Cosine similarity `yiᵀyj / (‖yi‖ ‖yj‖)`.
pub fn dot_similarity(yi: &[f64], yj: &[f64]) -> Result<f64> {
    debug_assert_eq!(yi.len(), yj.len());
    let (ni, nj) = (norm2(yi), norm2(yj));
    if ni == 0.0 || nj == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((dot(yi, yj) / (ni * nj)).min(1.0))
}

/// Heat-kernel similarity `exp(-‖yj - yi‖² / σ)`.
pub fn heat_similarity(yi: &[f64], yj: &[f64], sigma: f64) -> Result<f64> {
    debug_assert_eq!(yi.len(), yj.len());
    if !(sigma > 0.0) {
        return Err(Error::InvalidBandwidth(sigma));
    }
    let d2: f64 = yi.iter().zip(yj).map(|(a, b)| (b - a) * (b - a)).sum();
    Ok(libm::exp(-d2 / sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dot_examples() {
        assert_abs_diff_eq!(dot_similarity(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(dot_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(
            dot_similarity(&[1.0, 1.0], &[1.0, 0.0]).unwrap(),
            core::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_eq!(dot_similarity(&[0.0, 0.0], &[1.0, 0.0]), Err(Error::ZeroNorm));
    }

    #[test]
    fn heat_examples() {
        assert_eq!(heat_similarity(&[0.3, 0.7], &[0.3, 0.7], 0.01).unwrap(), 1.0);
        assert_abs_diff_eq!(
            heat_similarity(&[1.0, 0.0], &[0.0, 1.0], 2.0).unwrap(),
            libm::exp(-1.0),
            epsilon = 1e-15
        );
        assert_eq!(heat_similarity(&[1.0], &[0.0], 0.0), Err(Error::InvalidBandwidth(0.0)));
    }
}
