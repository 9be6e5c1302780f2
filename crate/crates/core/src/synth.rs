//! Synthetic scenes with known endmembers and abundances.
//!
//! Endmembers are smooth spectra built from Gaussian bumps over the channel
//! index. The grid is split into `K` regions (vertical strips for `K <= 4`,
//! a block grid otherwise). Pixels inside a region are pure; pixels in the
//! bands between regions blend their neighbours linearly, so every
//! abundance column sums to one.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::cube::HyperCube;
use crate::error::{Error, Result};
use crate::factors::FactorPair;
use crate::matrix::Matrix;
use crate::metrics::sad;

/// Minimum pairwise spectral angle between generated endmembers.
pub const MIN_ENDMEMBER_SAD: f64 = 0.2;

const BUMPS_PER_SPECTRUM: usize = 3;
const SPECTRUM_BASELINE: f64 = 0.05;
const MAX_SPECTRUM_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MixingProfile {
    /// Pure regions separated by linear bands `transition_width` pixels wide.
    #[default]
    HardRegions,
    /// Abundances ramp linearly between neighbouring region centres; only
    /// the outer margins stay pure.
    LinearGradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub endmembers: usize,
    pub transition_width: usize,
    /// Standard deviation of the additive Gaussian noise.
    pub noise_sigma: f64,
    pub seed: u64,
    pub profile: MixingProfile,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            width: 20,
            height: 20,
            channels: 30,
            endmembers: 3,
            transition_width: 3,
            noise_sigma: 0.01,
            seed: 0,
            profile: MixingProfile::HardRegions,
        }
    }
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.endmembers < 2 {
            return Err(Error::InfeasibleSpec(format!(
                "need at least 2 endmembers, got {}",
                self.endmembers
            )));
        }
        if self.transition_width == 0 {
            return Err(Error::InfeasibleSpec("transition width must be at least 1".into()));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "noise_sigma",
                value: self.noise_sigma,
            });
        }
        if self.width == 0 || self.height == 0 || self.channels == 0 {
            return Err(Error::InfeasibleSpec("empty grid or spectrum".into()));
        }
        Ok(())
    }

    /// Region grid as `(rows, cols)`.
    fn layout(&self) -> (usize, usize) {
        let k = self.endmembers;
        if k <= 4 {
            (1, k)
        } else {
            let cols = (1..).find(|c| c * c >= k).unwrap_or(k);
            (k.div_ceil(cols), cols)
        }
    }
}

/// Builds a scene and its ground truth. Deterministic in `spec.seed`.
pub fn generate(spec: &SceneSpec) -> Result<(HyperCube, FactorPair)> {
    spec.validate()?;
    let (rows, cols) = spec.layout();
    let row_profile = axis_profile(spec.height, rows, spec, "height")?;
    let col_profile = axis_profile(spec.width, cols, spec, "width")?;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let endmembers = endmember_spectra(&mut rng, spec.channels, spec.endmembers)?;

    let n = spec.width * spec.height;
    let mut abundances = Matrix::zeros(spec.endmembers, n);
    for (r, row_weights) in row_profile.iter().enumerate() {
        for (c, col_weights) in col_profile.iter().enumerate() {
            let column = abundances.col_mut(r * spec.width + c);
            for &(rc, wr) in row_weights {
                for &(cc, wc) in col_weights {
                    column[(rc * cols + cc) % spec.endmembers] += wr * wc;
                }
            }
        }
    }

    let truth = FactorPair::new(endmembers, abundances)?;
    let mut data = truth.reconstruct();
    if spec.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, spec.noise_sigma).map_err(|_| Error::InvalidParameter {
            name: "noise_sigma",
            value: spec.noise_sigma,
        })?;
        for v in data.as_mut_slice() {
            *v = (*v + noise.sample(&mut rng)).max(0.0);
        }
    }
    let cube = HyperCube::new(data, spec.width, spec.height)?;
    Ok((cube, truth))
}

fn endmember_spectra(rng: &mut ChaCha8Rng, channels: usize, k: usize) -> Result<Matrix> {
    let mut spectra: Vec<Vec<f64>> = Vec::with_capacity(k);
    let span = channels as f64;
    while spectra.len() < k {
        let mut accepted = false;
        for _ in 0..MAX_SPECTRUM_ATTEMPTS {
            let mut s = vec![SPECTRUM_BASELINE; channels];
            for _ in 0..BUMPS_PER_SPECTRUM {
                let centre = rng.random_range(0.0..=(span - 1.0).max(0.0));
                let width = rng.random_range(0.08..0.25) * span;
                let height = rng.random_range(0.2..0.8);
                for (l, v) in s.iter_mut().enumerate() {
                    let z = (l as f64 - centre) / width;
                    *v += height * libm::exp(-0.5 * z * z);
                }
            }
            let distinct = spectra
                .iter()
                .all(|other| sad(other, &s).is_ok_and(|angle| angle >= MIN_ENDMEMBER_SAD));
            if distinct {
                spectra.push(s);
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::InfeasibleSpec(format!(
                "could not draw {k} spectra over {channels} channels with pairwise angle >= {MIN_ENDMEMBER_SAD}"
            )));
        }
    }
    Ok(Matrix::from_fn(channels, k, |l, j| spectra[j][l]))
}

/// For each position along an axis of `len` pixels split into `cells`
/// regions, the `(cell, weight)` pairs that make up that position.
fn axis_profile(len: usize, cells: usize, spec: &SceneSpec, axis: &str) -> Result<Vec<Vec<(usize, f64)>>> {
    if cells == 1 {
        return Ok(vec![vec![(0, 1.0)]; len]);
    }
    if len < cells {
        return Err(Error::InfeasibleSpec(format!(
            "{axis} {len} cannot hold {cells} regions"
        )));
    }
    match spec.profile {
        MixingProfile::HardRegions => hard_profile(len, cells, spec.transition_width, axis),
        MixingProfile::LinearGradient => Ok(gradient_profile(len, cells)),
    }
}

fn hard_profile(len: usize, cells: usize, band: usize, axis: &str) -> Result<Vec<Vec<(usize, f64)>>> {
    let bounds: Vec<usize> = (0..=cells)
        .map(|i| libm::round((len * i) as f64 / cells as f64) as usize)
        .collect();
    let (left, right) = (band / 2, band - band / 2);
    for i in 0..cells {
        let width = bounds[i + 1] - bounds[i];
        let used = (if i > 0 { right } else { 0 }) + (if i + 1 < cells { left } else { 0 });
        if width <= used {
            return Err(Error::InfeasibleSpec(format!(
                "region {i} along {axis} is {width} px wide, too narrow for {band}-px transition bands"
            )));
        }
    }
    let mut profile = Vec::with_capacity(len);
    for x in 0..len {
        let cell = bounds[1..cells].iter().filter(|&&b| b <= x).count();
        profile.push(vec![(cell, 1.0)]);
    }
    for (i, &b) in bounds[1..cells].iter().enumerate() {
        let start = b - left;
        for j in 0..band {
            let t = (j + 1) as f64 / (band + 1) as f64;
            profile[start + j] = vec![(i, 1.0 - t), (i + 1, t)];
        }
    }
    Ok(profile)
}

fn gradient_profile(len: usize, cells: usize) -> Vec<Vec<(usize, f64)>> {
    let centre = |i: usize| (i as f64 + 0.5) * len as f64 / cells as f64;
    (0..len)
        .map(|x| {
            let pos = x as f64 + 0.5;
            if pos <= centre(0) {
                return vec![(0, 1.0)];
            }
            if pos >= centre(cells - 1) {
                return vec![(cells - 1, 1.0)];
            }
            let i = (0..cells - 1)
                .find(|&i| pos < centre(i + 1))
                .unwrap_or(cells - 2);
            let t = (pos - centre(i)) / (centre(i + 1) - centre(i));
            vec![(i, 1.0 - t), (i + 1, t)]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::hoyer_sparsity_map;

    fn spec(k: usize) -> SceneSpec {
        SceneSpec {
            endmembers: k,
            ..Default::default()
        }
    }

    #[test]
    fn noiseless_cube_equals_product() {
        let s = SceneSpec { noise_sigma: 0.0, ..spec(3) };
        let (cube, truth) = generate(&s).unwrap();
        assert_eq!(cube.data(), &truth.reconstruct());
        assert!(cube.validate().is_ok());
    }

    #[test]
    fn columns_sum_to_one() {
        for k in [2, 3, 4, 5, 7] {
            for profile in [MixingProfile::HardRegions, MixingProfile::LinearGradient] {
                let s = SceneSpec { profile, ..spec(k) };
                let (_, truth) = generate(&s).unwrap();
                for n in 0..truth.pixels() {
                    let sum: f64 = truth.abundances.col(n).iter().sum();
                    assert!((sum - 1.0).abs() <= 1e-12, "k={k} pixel {n}: {sum}");
                }
            }
        }
    }

    #[test]
    fn single_pixel_bands_on_10x10() {
        let s = SceneSpec {
            width: 10,
            height: 10,
            endmembers: 2,
            transition_width: 1,
            noise_sigma: 0.0,
            ..Default::default()
        };
        let (_, truth) = generate(&s).unwrap();
        let hoyer = hoyer_sparsity_map(&truth.abundances).unwrap();
        for (n, &h) in hoyer.iter().enumerate() {
            if n % 10 == 5 {
                assert!(h < 1.0, "boundary pixel {n}");
            } else {
                assert!((h - 1.0).abs() < 1e-15, "pure pixel {n}: {h}");
            }
        }
    }

    #[test]
    fn endmembers_are_distinct() {
        let s = SceneSpec { channels: 40, ..spec(6) };
        let (_, truth) = generate(&s).unwrap();
        let m = &truth.endmembers;
        for i in 0..6 {
            for j in i + 1..6 {
                assert!(sad(m.col(i), m.col(j)).unwrap() >= MIN_ENDMEMBER_SAD);
            }
        }
    }

    #[test]
    fn infeasible_specs() {
        assert!(matches!(generate(&SceneSpec { width: 2, ..spec(3) }), Err(Error::InfeasibleSpec(_))));
        assert!(matches!(
            generate(&SceneSpec { transition_width: 7, ..spec(3) }),
            Err(Error::InfeasibleSpec(_))
        ));
        assert!(generate(&spec(1)).is_err());
        assert!(generate(&SceneSpec { transition_width: 0, ..spec(2) }).is_err());
        assert!(matches!(generate(&SceneSpec { channels: 1, ..spec(2) }), Err(Error::InfeasibleSpec(_))));
    }

    #[test]
    fn same_seed_same_scene() {
        let a = generate(&spec(3)).unwrap();
        let b = generate(&spec(3)).unwrap();
        assert_eq!(a, b);
        let c = generate(&SceneSpec { seed: 1, ..spec(3) }).unwrap();
        assert_ne!(a.0, c.0);
    }
}
