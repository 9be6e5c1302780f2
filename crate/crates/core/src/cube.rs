use alloc::format;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Hyperspectral image cube: an `L x N` nonnegative matrix of pixel spectra
/// laid out on a `width x height` grid.
///
/// Pixel `n` sits at grid `(row, col) = (n / width, n % width)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperCube {
    data: Matrix,
    width: usize,
    height: usize,
}

/// Checks the cube invariants on raw parts: `width * height == N`,
/// `L >= 1`, `N >= 1`, every entry finite and nonnegative.
///
/// Reflectances above 1 are accepted.
pub fn validate_cube(data: &Matrix, width: usize, height: usize) -> Result<()> {
    let n = data.cols();
    if data.rows() == 0 || n == 0 || width.checked_mul(height) != Some(n) {
        return Err(Error::ShapeMismatch(format!(
            "{width}x{height} grid with {} channels cannot hold {n} pixels",
            data.rows()
        )));
    }
    data.check_nonnegative()
}

impl HyperCube {
    pub fn new(data: Matrix, width: usize, height: usize) -> Result<Self> {
        validate_cube(&data, width, height)?;
        Ok(Self {
            data,
            width,
            height,
        })
    }

    /// Builds a cube from pixel-major samples (all channels of pixel 0, then
    /// pixel 1, ...), which is exactly the column-major layout.
    pub fn from_pixel_major(
        width: usize,
        height: usize,
        channels: usize,
        samples: alloc::vec::Vec<f64>,
    ) -> Result<Self> {
        let pixels = width.checked_mul(height).ok_or_else(|| {
            Error::ShapeMismatch(format!("{width}x{height} grid overflows"))
        })?;
        Self::new(
            Matrix::from_column_major(channels, pixels, samples)?,
            width,
            height,
        )
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.data.rows()
    }

    pub fn pixels(&self) -> usize {
        self.data.cols()
    }

    pub fn spectrum(&self, n: usize) -> &[f64] {
        self.data.col(n)
    }

    pub fn index_to_grid(&self, n: usize) -> (usize, usize) {
        (n / self.width, n % self.width)
    }

    pub fn grid_to_index(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    pub fn validate(&self) -> Result<()> {
        validate_cube(&self.data, self.width, self.height)
    }

    pub fn into_data(self) -> Matrix {
        self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_cube_is_valid() {
        let data = Matrix::filled(3, 4, 0.5);
        assert!(HyperCube::new(data, 2, 2).is_ok());
    }

    #[test]
    fn wrong_pixel_count() {
        let data = Matrix::filled(3, 3, 0.5);
        assert!(matches!(validate_cube(&data, 2, 2), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn negative_entry() {
        let mut data = Matrix::filled(3, 4, 0.5);
        data[(1, 2)] = -0.1;
        assert_eq!(validate_cube(&data, 2, 2), Err(Error::Negative { index: 7 }));
    }

    #[test]
    fn non_finite_entry() {
        let mut data = Matrix::filled(3, 4, 0.5);
        data[(0, 0)] = f64::NAN;
        assert_eq!(validate_cube(&data, 2, 2), Err(Error::NonFinite { index: 0 }));
    }

    #[test]
    fn reflectance_above_one_is_allowed() {
        assert!(validate_cube(&Matrix::filled(2, 1, 1.7), 1, 1).is_ok());
    }

    #[test]
    fn empty_cube_rejected() {
        assert!(validate_cube(&Matrix::zeros(0, 4), 2, 2).is_err());
        assert!(validate_cube(&Matrix::zeros(3, 0), 0, 0).is_err());
    }

    proptest! {
        #[test]
        fn grid_index_round_trip(w in 1usize..40, h in 1usize..40, seed in any::<usize>()) {
            let cube = HyperCube::new(Matrix::zeros(1, w * h), w, h).unwrap();
            let n = seed % (w * h);
            let (r, c) = cube.index_to_grid(n);
            prop_assert!(r < h && c < w);
            prop_assert_eq!(cube.grid_to_index(r, c), n);
        }
    }
}
