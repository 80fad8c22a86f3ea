//! Cross-module invariants at moderate scale.

use deconv_core::bandwidth::{
    build_lambda_grid, select_lambda1_rot_unsquared, LambdaSearchSpec, SCOTT_A0,
};
use deconv_core::fourier::{adjusted_dke_estimate, dke_estimate, Bandwidth};
use deconv_core::kernels::{deconv_kernel, supersmooth_cf, supersmooth_kernel, QuadratureSpec};
use deconv_core::model::{ContaminatedSample, EvaluationGrid};
use deconv_core::rng::Stream;
use deconv_core::simex::{build_plan, pseudo_density, simex_estimate, LambdaGrid};
use deconv_core::simlab::{contaminate, ise, ErrorConfig, TrueDensity};

fn trapezoid(ts: &[f64], values: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..ts.len() {
        acc += 0.5 * (values[i] + values[i - 1]) * (ts[i] - ts[i - 1]);
    }
    acc
}

fn random_sample(rng: &mut Stream, n: usize) -> ContaminatedSample {
    let y: Vec<f64> = (0..n)
        .map(|_| rng.normal() * rng.uniform_in(0.5, 2.0))
        .collect();
    let sigma: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.2, 1.0)).collect();
    ContaminatedSample::new(y, sigma).unwrap()
}

#[test]
fn simex_estimates_integrate_to_one() {
    // Mass check on grids padded 12 combined spreads past the data, for
    // random samples of both sizes; the weight row sums to one and every
    // mixture row integrates to one, so the estimate must too.
    let mut rng = Stream::from_seed(2024);
    for trial in 0..10 {
        let n = if trial % 2 == 0 { 10 } else { 100 };
        let sample = random_sample(&mut rng, n);
        let lambda1 = select_lambda1_rot_unsquared(&sample, SCOTT_A0).unwrap();
        let grid = build_lambda_grid(lambda1, &LambdaSearchSpec::default()).unwrap();
        let lo = sample.y().iter().copied().fold(f64::MAX, f64::min);
        let hi = sample.y().iter().copied().fold(f64::MIN, f64::max);
        let pad = 12.0 * sample.max_sigma().max(hi - lo);
        let eval = EvaluationGrid::linspace(lo - pad, hi + pad, 4096).unwrap();
        let est = simex_estimate(&sample, &grid, &eval).unwrap();
        let mass = trapezoid(eval.points(), est.values());
        assert!(
            (mass - 1.0).abs() < 1e-4,
            "trial {trial}: mass {mass} (lambda1 {lambda1})"
        );
    }
}

#[test]
fn pseudo_density_integrates_to_one_and_is_positive() {
    let mut rng = Stream::from_seed(31);
    let sample = random_sample(&mut rng, 25);
    for lambda in [0.4, 1.0, 3.7] {
        let eval = EvaluationGrid::linspace(-40.0, 40.0, 8001).unwrap();
        let values: Vec<f64> = eval
            .points()
            .iter()
            .map(|t| pseudo_density(*t, lambda, &sample))
            .collect();
        // Nonnegative everywhere; strictly positive wherever the Gaussian
        // tails are still representable (they underflow past ~27 scale
        // units, which is mathematical positivity lost to f64 range).
        assert!(values.iter().all(|v| *v >= 0.0));
        for (t, v) in eval.points().iter().zip(&values) {
            if t.abs() < 8.0 {
                assert!(*v > 0.0, "t={t}");
            }
        }
        let mass = trapezoid(eval.points(), &values);
        assert!((mass - 1.0).abs() < 1e-6, "lambda {lambda}: mass {mass}");
    }
}

#[test]
fn weight_row_reproduces_the_three_monomials() {
    let mut rng = Stream::from_seed(55);
    for _ in 0..100 {
        let lambda1 = rng.uniform_in(0.05, 6.0);
        let s = 3 + (rng.next_u64() % 57) as usize;
        let span = rng.uniform_in(0.5, 9.0);
        let spec = LambdaSearchSpec::new(1e-3, 20.0, 1e-4, s, span).unwrap();
        let grid = build_lambda_grid(lambda1, &spec).unwrap();
        let plan = build_plan(&grid).unwrap();
        let c = plan.weights();
        let l = grid.values();
        let s0: f64 = c.iter().sum();
        let s1: f64 = c.iter().zip(l).map(|(ci, li)| ci * li).sum();
        let s2: f64 = c.iter().zip(l).map(|(ci, li)| ci * li * li).sum();
        assert!((s0 - 1.0).abs() < 1e-10);
        assert!((s1 + 1.0).abs() < 1e-8);
        assert!((s2 - 1.0).abs() < 1e-8);
    }
}

#[test]
fn adjusted_dke_equals_plain_dke_on_random_homoscedastic_samples() {
    let quad = QuadratureSpec::default();
    let mut rng = Stream::from_seed(77);
    for _ in 0..5 {
        let n = 5 + (rng.next_u64() % 20) as usize;
        let sigma = rng.uniform_in(0.1, 0.6);
        let y: Vec<f64> = (0..n).map(|_| rng.normal() * 1.5).collect();
        let sample = ContaminatedSample::with_common_sigma(y, sigma).unwrap();
        let h = Bandwidth::new(rng.uniform_in(sigma * 0.7, sigma * 2.0).max(0.15)).unwrap();
        let eval = EvaluationGrid::linspace(-4.0, 4.0, 20).unwrap();
        let plain = dke_estimate(&sample, h, sigma, &eval, &quad).unwrap();
        let adjusted = adjusted_dke_estimate(&sample, h, &eval, &quad).unwrap();
        for (a, b) in plain.values().iter().zip(adjusted.values()) {
            assert!((a - b).abs() < quad.abs_tol(), "{a} vs {b}");
        }
    }
}

#[test]
fn deconv_kernel_with_zero_sigma_matches_smoothing_kernel_on_random_points() {
    let quad = QuadratureSpec::default();
    let mut rng = Stream::from_seed(91);
    for _ in 0..100 {
        let z = rng.uniform_in(-20.0, 20.0);
        let k = deconv_kernel(z, 1.0, 0.0, &quad).unwrap();
        assert!((k - supersmooth_kernel(z)).abs() < quad.abs_tol(), "z={z}");
    }
}

#[test]
fn deconv_kernel_mass_approaches_one_on_widening_grids() {
    // For fixed h and sigma with sigma/h <= 1 the deconvoluting kernel
    // integrates to cf(0) = 1; the oscillating tails mean slow convergence,
    // so successive truncations must approach 1.
    let quad = QuadratureSpec::default();
    let h = 0.5;
    let sigma = 0.4;
    let mut errors = Vec::new();
    for half_width in [20.0, 60.0, 180.0] {
        let n = (half_width * 40.0) as usize | 1;
        let eval = EvaluationGrid::linspace(-half_width, half_width, n).unwrap();
        let values: Vec<f64> = eval
            .points()
            .iter()
            .map(|z| deconv_kernel(*z, h, sigma, &quad).unwrap())
            .collect();
        errors.push((trapezoid(eval.points(), &values) - 1.0).abs());
    }
    assert!(errors[2] < errors[0], "{errors:?}");
    assert!(errors[2] < 1e-3, "{errors:?}");
    assert_eq!(supersmooth_cf(0.0), 1.0);
}

#[test]
fn dke_estimates_integrate_close_to_one() {
    // sigma/h <= 1: mass within 2e-2 on a wide padded grid (the kernel's
    // oscillating tails keep this looser than the extrapolation estimator).
    let quad = QuadratureSpec::default();
    let mut rng = Stream::from_seed(1001);
    let y: Vec<f64> = (0..30).map(|_| rng.normal()).collect();
    let sigma = 0.3;
    let sample = ContaminatedSample::with_common_sigma(y, sigma).unwrap();
    let h = Bandwidth::new(0.35).unwrap();
    let eval = EvaluationGrid::linspace(-30.0, 30.0, 4001).unwrap();
    let est = dke_estimate(&sample, h, sigma, &eval, &quad).unwrap();
    let mass = trapezoid(eval.points(), est.values());
    assert!((mass - 1.0).abs() < 2e-2, "mass {mass}");
}

#[test]
fn simex_mean_ise_decreases_with_sample_size() {
    // Statistical consistency at desk scale: mean ISE over replicates
    // drops monotonically as n grows.
    use deconv_core::simlab::{
        run_experiment, EstimatorKind, ExperimentPlan, GridSpec, LambdaConfig,
    };
    let mut means = Vec::new();
    for n in [50, 250, 1000] {
        let plan = ExperimentPlan {
            density: TrueDensity::StdNormal,
            errors: ErrorConfig::Homoscedastic { sigma: 0.4 },
            n,
            replicates: 60,
            seed: 4242,
            estimators: vec![EstimatorKind::Simex],
            grid: GridSpec {
                points: 256,
                range: None,
            },
            lambda: LambdaConfig::default(),
        };
        let table = run_experiment(&plan).unwrap();
        means.push(table.rows[0].mean_ise);
    }
    assert!(
        means[0] > means[1] && means[1] > means[2],
        "mean ISE not decreasing: {means:?}"
    );
}

#[test]
fn contaminated_larger_error_larger_naive_ise() {
    // Naive estimation degrades monotonically as contamination grows.
    use deconv_core::bandwidth::rot_bandwidth;
    use deconv_core::fourier::gaussian_kde;
    let mut prev = 0.0;
    for sigma in [0.2, 0.4, 0.6, 0.8] {
        let mut total = 0.0;
        for rep in 0..40 {
            let mut s1 = Stream::substream(31337, rep, 1);
            let mut s2 = Stream::substream(31337, rep, 2);
            let mut s3 = Stream::substream(31337, rep, 3);
            let x = TrueDensity::StdNormal.sample(1000, &mut s1);
            let sample =
                contaminate(&x, &ErrorConfig::Homoscedastic { sigma }, &mut s2, &mut s3).unwrap();
            let h = Bandwidth::new(rot_bandwidth(sample.y(), SCOTT_A0).unwrap()).unwrap();
            let eval = EvaluationGrid::linspace(-8.0, 8.0, 256).unwrap();
            let est = gaussian_kde(sample.y(), h, &eval).unwrap();
            total += ise(&est, &TrueDensity::StdNormal).value;
        }
        let mean = total / 40.0;
        assert!(mean > prev, "sigma {sigma}: {mean} <= {prev}");
        prev = mean;
    }
}

#[test]
fn standard_error_scales_with_replicate_count() {
    // Quadrupling replicates roughly halves the standard error of the mean.
    use deconv_core::simlab::{
        run_experiment, EstimatorKind, ExperimentPlan, GridSpec, LambdaConfig,
    };
    let base = ExperimentPlan {
        density: TrueDensity::StdNormal,
        errors: ErrorConfig::Homoscedastic { sigma: 0.3 },
        n: 40,
        replicates: 30,
        seed: 555,
        estimators: vec![EstimatorKind::Naive],
        grid: GridSpec {
            points: 128,
            range: None,
        },
        lambda: LambdaConfig::default(),
    };
    let small = run_experiment(&base).unwrap().rows[0].se_ise;
    let big = run_experiment(&ExperimentPlan {
        replicates: 120,
        ..base
    })
    .unwrap()
    .rows[0]
        .se_ise;
    let ratio = small / big;
    assert!(
        (2.0 / 1.5..=2.0 * 1.5).contains(&ratio),
        "SE ratio {ratio} not within a factor 1.5 of 2"
    );
}

#[test]
fn bypass_oracle_quick_check() {
    // Scaled-down version of the simulation-bypass verification: the
    // analytic pseudo-density must sit within Monte Carlo error (plus the
    // finite-bandwidth allowance) of the brute-force average it replaces.
    use deconv_testkit::mc_simulation_oracle;
    let mut rng = Stream::from_seed(6);
    let sample = random_sample(&mut rng, 15);
    let levels = LambdaGrid::new(vec![0.6, 1.4, 2.8]).unwrap();
    let probes = EvaluationGrid::linspace(-2.5, 2.5, 5).unwrap();
    let h = 0.05;
    let mc = mc_simulation_oracle(&sample, &levels, &probes, 4000, h, 99);
    for (l, lambda) in levels.values().iter().enumerate() {
        for (i, t) in probes.points().iter().enumerate() {
            let exact = pseudo_density(*t, *lambda, &sample);
            let tol = 3.0 * mc.se[l][i] + 0.5 * h * h; // 3 SEs + O(h^2) bias
            assert!(
                (exact - mc.mean[l][i]).abs() < tol,
                "lambda {lambda}, t {t}: exact {exact} vs mc {} (tol {tol})",
                mc.mean[l][i]
            );
        }
    }
}
