//! Test-only oracles for the deconvolution workspace.
//!
//! The centerpiece is the brute-force simulation oracle: the pseudo-density
//! used in production is the analytic `h -> 0, m -> infinity` limit of
//! averaging kernel estimates over `m` error-inflated pseudo data sets.
//! That expensive average is reproduced here literally, so tests can verify
//! the analytic shortcut against the simulation it replaces. It must stay
//! independent of the production evaluation path; keep it brute force.

use deconv_core::kernels::gaussian_pdf;
use deconv_core::model::{ContaminatedSample, EvaluationGrid};
use deconv_core::rng::Stream;
use deconv_core::simex::LambdaGrid;

/// Monte Carlo mean and its standard error per `(level, grid point)`.
#[derive(Debug, Clone)]
pub struct McEstimate {
    /// `mean[l][i]`: average kernel estimate at level `l`, point `i`.
    pub mean: Vec<Vec<f64>>,
    /// Standard error of each mean over the `m` replicates.
    pub se: Vec<Vec<f64>>,
}

/// Average of `m` Gaussian-kernel estimates on error-inflated pseudo data:
/// `(1/m) sum_r (1/n) sum_j K_h(t - y_j - sqrt(lambda) sigma_j z_jr)` with
/// standard normal `z_jr` drawn once per `(j, r)` and shared across levels.
///
/// Deterministic given `seed`; replicate `r` draws from the substream
/// `(seed, r, 0)`.
pub fn mc_simulation_oracle(
    sample: &ContaminatedSample,
    levels: &LambdaGrid,
    eval: &EvaluationGrid,
    m: usize,
    h: f64,
    seed: u64,
) -> McEstimate {
    assert!(m >= 1, "need at least one pseudo replicate");
    assert!(h > 0.0, "kernel bandwidth must be positive");
    let n = sample.len();
    let ts = eval.points();
    let lambdas = levels.values();

    let mut sum = vec![vec![0.0; ts.len()]; lambdas.len()];
    let mut sumsq = vec![vec![0.0; ts.len()]; lambdas.len()];
    let mut z = vec![0.0; n];

    for r in 0..m {
        let mut stream = Stream::substream(seed, r as u64, 0);
        for zj in z.iter_mut() {
            *zj = stream.normal();
        }
        for (l, lambda) in lambdas.iter().enumerate() {
            let sqrt_l = lambda.sqrt();
            for (i, t) in ts.iter().enumerate() {
                let mut acc = 0.0;
                for ((y, sig), zj) in sample.y().iter().zip(sample.sigma()).zip(&z) {
                    let pseudo = y + sig * sqrt_l * zj;
                    acc += gaussian_pdf((t - pseudo) / h);
                }
                let value = acc / (n as f64 * h);
                sum[l][i] += value;
                sumsq[l][i] += value * value;
            }
        }
    }

    let mf = m as f64;
    let mean: Vec<Vec<f64>> = sum
        .iter()
        .map(|row| row.iter().map(|s| s / mf).collect())
        .collect();
    let se: Vec<Vec<f64>> = sumsq
        .iter()
        .zip(mean.iter())
        .map(|(sq_row, mean_row)| {
            sq_row
                .iter()
                .zip(mean_row)
                .map(|(sq, mu)| {
                    if m < 2 {
                        0.0
                    } else {
                        let var = (sq - mf * mu * mu) / (mf - 1.0);
                        (var.max(0.0) / mf).sqrt()
                    }
                })
                .collect()
        })
        .collect();

    McEstimate { mean, se }
}
