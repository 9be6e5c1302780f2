mod common;

use common::*;
use dgsnmf_core::dgmap::{
    build_matting_laplacian, estimate_dgmap, fine_tune, initial_dgmap, rescale, window_projection,
    DgMapParams, SimilarityMeasure,
};
use dgsnmf_core::metrics::hoyer_sparsity_map;
use dgsnmf_core::synth::{generate, SceneSpec};
use dgsnmf_core::{HyperCube, Matrix};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

#[test]
fn single_window_matches_dense_oracle() {
    let data = Matrix::from_column_major(1, 9, (1..=9).map(f64::from).collect()).unwrap();
    let cube = HyperCube::new(data, 3, 3).unwrap();
    let lap = build_matting_laplacian(&cube, 1e-5, 3).unwrap();
    let oracle = dense_laplacian_oracle(&cube, 1e-5, 3);
    let dense = to_na(&lap.to_dense());
    let diff = (&dense - &oracle).abs().max();
    assert!(diff <= 1e-12, "max diff {diff:e}");
    assert_eq!(lap.windows(), 1);
}

#[test]
fn random_cubes_match_dense_oracle() {
    let mut rng = rng(11);
    for (w, h, l) in [(3, 4, 1), (5, 5, 2), (6, 4, 5), (8, 8, 3), (7, 5, 4)] {
        let cube = random_cube(&mut rng, w, h, l);
        for eps in [1e-7, 1e-5, 1e-4] {
            let lap = build_matting_laplacian(&cube, eps, 3).unwrap();
            let oracle = dense_laplacian_oracle(&cube, eps, 3);
            let diff = (&to_na(&lap.to_dense()) - &oracle).abs().max();
            assert!(diff <= 1e-12, "{w}x{h} L={l} eps={eps}: {diff:e}");
        }
    }
}

#[test]
fn five_by_five_window_matches_oracle() {
    let mut rng = rng(5);
    let cube = random_cube(&mut rng, 7, 6, 3);
    let lap = build_matting_laplacian(&cube, 1e-5, 5).unwrap();
    assert_eq!(lap.windows(), 3 * 2);
    let diff = (&to_na(&lap.to_dense()) - &dense_laplacian_oracle(&cube, 1e-5, 5)).abs().max();
    assert!(diff <= 1e-12, "{diff:e}");
}

#[test]
fn laplacian_is_psd_with_zero_row_sums() {
    let mut rng = rng(3);
    for _ in 0..5 {
        let cube = random_cube(&mut rng, 8, 8, 4);
        let lap = build_matting_laplacian(&cube, 1e-5, 3).unwrap();
        let tol = 1e-9 * lap.max_abs();
        for i in 0..lap.dim() {
            let sum: f64 = lap.row(i).1.iter().sum();
            assert!(sum.abs() <= tol, "row {i} sums to {sum:e}");
        }
        let eig = SymmetricEigen::new(to_na(&lap.to_dense()));
        assert!(eig.eigenvalues.min() >= -1e-9, "{}", eig.eigenvalues.min());
    }
}

#[test]
fn push_through_agrees_with_direct_inverse() {
    let mut rng = rng(17);
    for l in [2, 9, 50] {
        for _ in 0..20 {
            let patch = random_matrix(&mut rng, l, 9, 0.0, 1.0);
            let fast = to_na(&window_projection(&patch, 1e-5));
            let y = to_na(&patch);
            let centering = DMatrix::<f64>::identity(9, 9) - DMatrix::from_element(9, 9, 1.0 / 9.0);
            let ybar = &y * &centering;
            let gram = &ybar * ybar.transpose() + DMatrix::<f64>::identity(l, l) * 1e-5;
            let direct = ybar.transpose() * gram.lu().solve(&ybar).unwrap();
            let diff = (&fast - &direct).abs().max();
            assert!(diff <= 1e-10, "L={l}: {diff:e}");
        }
    }
}

#[test]
fn fine_tune_matches_dense_solve() {
    let mut rng = rng(23);
    for (w, ht) in [(5, 5), (10, 10), (7, 9)] {
        let cube = random_cube(&mut rng, w, ht, 4);
        let h0 = initial_dgmap(&cube, 0.5, SimilarityMeasure::Heat).unwrap();
        let lap = build_matting_laplacian(&cube, 1e-5, 3).unwrap();
        for alpha in [1e-6, 1e-5, 1e-4, 1.0] {
            let h = fine_tune(&lap, &h0, alpha, 1e-8, None).unwrap();
            let n = lap.dim();
            let system = to_na(&lap.to_dense()) + DMatrix::<f64>::identity(n, n) * alpha;
            let rhs: Vec<f64> = h0.iter().map(|v| alpha * v).collect();
            let exact = dense_solve(system.clone(), &rhs);
            let err = h.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err <= 1e-6, "{w}x{ht} alpha={alpha}: {err:e}");

            let resid = &system * nalgebra::DVector::from_column_slice(&h) - nalgebra::DVector::from_column_slice(&rhs);
            let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(resid.norm() <= 1e-8 * rhs_norm);
        }
    }
}

#[test]
fn fine_tune_is_linear_in_the_initial_map() {
    let mut rng = rng(29);
    let cube = random_cube(&mut rng, 6, 6, 3);
    let lap = build_matting_laplacian(&cube, 1e-5, 3).unwrap();
    let h0 = initial_dgmap(&cube, 0.3, SimilarityMeasure::Heat).unwrap();
    let base = fine_tune(&lap, &h0, 1e-4, 1e-10, None).unwrap();
    let scaled = |c: f64| -> Vec<f64> {
        let h0c: Vec<f64> = h0.iter().map(|v| c * v).collect();
        fine_tune(&lap, &h0c, 1e-4, 1e-10, None).unwrap()
    };
    // power-of-two scalings are exact in floating point, so the whole solve is
    for c in [0.25, 2.0, 64.0] {
        for (a, b) in scaled(c).iter().zip(&base) {
            assert_eq!(*a, c * b);
        }
    }
    for c in [0.3, 3.0, 41.0] {
        for (a, b) in scaled(c).iter().zip(&base) {
            assert!((a - c * b).abs() <= 1e-8 * (c * b).abs().max(1.0), "{a} vs {}", c * b);
        }
    }
}

#[test]
fn dot_measure_concentrates_near_the_top_on_smooth_scenes() {
    let spec = SceneSpec {
        width: 20,
        height: 20,
        channels: 30,
        endmembers: 3,
        transition_width: 5,
        noise_sigma: 0.0,
        ..Default::default()
    };
    let (cube, _) = generate(&spec).unwrap();
    let raw = initial_dgmap(&cube, 1.0, SimilarityMeasure::Dot).unwrap();
    let n = cube.pixels();
    let near_top = (0..n)
        .filter(|&i| {
            let (r, c) = cube.index_to_grid(i);
            let neighbours = [r > 0, r + 1 < 20, c > 0, c + 1 < 20].iter().filter(|b| **b).count();
            raw[i] / neighbours as f64 >= 0.95
        })
        .count();
    assert!(near_top as f64 >= 0.9 * n as f64, "{near_top}/{n}");
}

#[test]
fn pure_regions_score_above_transition_bands() {
    for seed in 0..5 {
        let spec = SceneSpec { seed, ..Default::default() };
        let (cube, truth) = generate(&spec).unwrap();
        let map = estimate_dgmap(&cube, &DgMapParams::default()).unwrap();
        let hoyer = hoyer_sparsity_map(&truth.abundances).unwrap();
        let (mut pure, mut mixed) = (Vec::new(), Vec::new());
        for (h, s) in map.scaled().iter().zip(&hoyer) {
            if *s > 0.999 { pure.push(*h) } else { mixed.push(*h) }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean(&pure) > mean(&mixed), "seed {seed}: {} vs {}", mean(&pure), mean(&mixed));
        assert!(map.scaled().iter().all(|v| (0.0..1.0).contains(v)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rescale_ignores_affine_maps(
        h in prop::collection::vec(0.0f64..10.0, 2..40),
        a in 0.1f64..100.0,
        b in -50.0f64..50.0,
    ) {
        let lo = h.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assume!(hi - lo > 1e-2);
        let base = rescale(&h, 1e-8);
        let moved: Vec<f64> = h.iter().map(|v| a * v + b).collect();
        let other = rescale(&moved, 1e-8);
        for (x, y) in base.iter().zip(&other) {
            prop_assert!((x - y).abs() <= 1e-6);
        }
        prop_assert!(base.iter().all(|v| (0.0..1.0).contains(v)));
        prop_assert!(base.contains(&0.0));
    }

    #[test]
    fn laplacian_symmetric_and_annihilates_constants(seed in any::<u64>(), w in 3usize..8, h in 3usize..8, l in 1usize..6) {
        let mut rng = rng(seed);
        let cube = random_cube(&mut rng, w, h, l);
        let lap = build_matting_laplacian(&cube, 1e-5, 3).unwrap();
        let ones = vec![1.0; lap.dim()];
        let mut out = vec![0.0; lap.dim()];
        lap.mul_vec(&ones, &mut out);
        let tol = 1e-9 * lap.max_abs();
        prop_assert!(out.iter().all(|v| v.abs() <= tol));
        for i in 0..lap.dim() {
            let (cols, vals) = lap.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                prop_assert_eq!(v.to_bits(), lap.get(j, i).to_bits());
            }
        }
    }
}
