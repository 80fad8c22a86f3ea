//! Command implementations.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use deconv_core::bandwidth::{
    build_lambda_grid, minimize_mise_objective, rot_bandwidth_y, sample_sd, select_lambda1_mise,
    select_lambda1_rot, select_lambda1_rot_unsquared, LambdaSearchSpec,
};
use deconv_core::fourier::{
    adjusted_dke_estimate, dke_estimate, dke_plugin_bandwidth, naive_kde, Bandwidth,
};
use deconv_core::kernels::QuadratureSpec;
use deconv_core::model::{ContaminatedSample, DensityEstimate, EvaluationGrid, HOMOSCEDASTIC_TOL};
use deconv_core::simex::{build_plan, simex_confidence_band, simex_estimate, simex_variance};
use deconv_core::simlab::{
    default_grid, run_replicate, summarize, ExperimentPlan, ReplicateRecord, SummaryTable,
};

use crate::args::{BandwidthArgs, Cli, Command, EstimateArgs, LambdaRuleArg, Method, SimulateArgs};
use crate::error::CliError;
use crate::io::{atomic_write, estimate_to_csv, read_sample};
use crate::plan::load_plan;

/// Dispatch a parsed command line.
pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate(args) => cmd_estimate(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Bandwidth(args) => cmd_bandwidth(&args),
    }
}

/// Everything that went into one estimation run, written alongside the
/// output so the run is reconstructible.
#[derive(Debug, Serialize)]
struct Manifest {
    command: &'static str,
    input: PathBuf,
    output: PathBuf,
    method: String,
    observations: usize,
    sigma_global: Option<f64>,
    grid_points: usize,
    grid_min: f64,
    grid_max: f64,
    lambda_rule: Option<String>,
    lambda1: Option<f64>,
    s: Option<usize>,
    span: Option<f64>,
    bandwidth: Option<f64>,
    level: Option<f64>,
    seed: u64,
    a0: f64,
    c0: f64,
    quadrature_nodes: usize,
    quadrature_abs_tol: f64,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Simex => "simex",
        Method::Dke => "dke",
        Method::AdjustedDke => "adjusted-dke",
        Method::Naive => "naive",
    }
}

fn resolve_grid(
    args: &EstimateArgs,
    sample: &ContaminatedSample,
) -> Result<EvaluationGrid, CliError> {
    match (args.grid_min, args.grid_max) {
        (Some(lo), Some(hi)) => {
            EvaluationGrid::linspace(lo, hi, args.grid_points).map_err(CliError::from)
        }
        (None, None) => default_grid(sample, args.grid_points).map_err(CliError::from),
        _ => Err(CliError::input(
            "--grid-min and --grid-max must be given together",
        )),
    }
}

fn cmd_estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let sample = read_sample(&args.input, args.sigma)?;
    let eval = resolve_grid(args, &sample)?;
    let quad = QuadratureSpec::default();

    let mut lambda1 = None;
    let mut lambda_rule = None;
    let mut bandwidth = None;
    let mut level = None;

    let estimate: DensityEstimate = match args.method {
        Method::Simex => {
            let spec = LambdaSearchSpec {
                s: args.s,
                span: args.span,
                ..LambdaSearchSpec::default()
            };
            let l1 = match args.lambda_rule {
                LambdaRuleArg::Rot => select_lambda1_rot_unsquared(&sample, args.a0)?,
                LambdaRuleArg::RotSquared => select_lambda1_rot(&sample, args.a0)?,
                LambdaRuleArg::Mise => select_lambda1_mise(&spec)?,
                LambdaRuleArg::Explicit => args
                    .lambda1
                    .ok_or_else(|| CliError::input("--lambda-rule explicit needs --lambda1"))?,
            };
            lambda1 = Some(l1);
            lambda_rule = Some(
                match args.lambda_rule {
                    LambdaRuleArg::Rot => "rot",
                    LambdaRuleArg::RotSquared => "rot_squared",
                    LambdaRuleArg::Mise => "mise",
                    LambdaRuleArg::Explicit => "explicit",
                }
                .to_string(),
            );
            level = Some(args.level);
            let grid = build_lambda_grid(l1, &spec)?;
            let plan = build_plan(&grid)?;
            let est = simex_estimate(&sample, &grid, &eval)?;
            let variance = simex_variance(est.values(), &sample, &plan);
            let est = est.with_variance(variance)?;
            simex_confidence_band(est, args.level)?
        }
        Method::Dke => {
            let sigma = match args.sigma {
                Some(s) => s,
                None => {
                    if !sample.is_homoscedastic(HOMOSCEDASTIC_TOL) {
                        return Err(CliError::from(deconv_core::Error::HeteroscedasticSample));
                    }
                    sample.sigma()[0]
                }
            };
            let h = match args.bandwidth {
                Some(h) => Bandwidth::new(h)?,
                None => dke_plugin_bandwidth(&sample, args.c0)?,
            };
            bandwidth = Some(h.get());
            dke_estimate(&sample, h, sigma, &eval, &quad)?
        }
        Method::AdjustedDke => {
            let h = match args.bandwidth {
                Some(h) => Bandwidth::new(h)?,
                None => dke_plugin_bandwidth(&sample, args.c0)?,
            };
            bandwidth = Some(h.get());
            adjusted_dke_estimate(&sample, h, &eval, &quad)?
        }
        Method::Naive => {
            let h = match args.bandwidth {
                Some(h) => Bandwidth::new(h)?,
                None => Bandwidth::new(rot_bandwidth_y(&sample, args.a0)?)?,
            };
            bandwidth = Some(h.get());
            naive_kde(&sample, h, &eval)?
        }
    };

    let manifest = Manifest {
        command: "estimate",
        input: args.input.clone(),
        output: args.output.clone(),
        method: method_name(args.method).to_string(),
        observations: sample.len(),
        sigma_global: args.sigma,
        grid_points: eval.len(),
        grid_min: eval.points()[0],
        grid_max: *eval.points().last().expect("grid has points"),
        lambda_rule,
        lambda1,
        s: (args.method == Method::Simex).then_some(args.s),
        span: (args.method == Method::Simex).then_some(args.span),
        bandwidth,
        level,
        seed: args.seed,
        a0: args.a0,
        c0: args.c0,
        quadrature_nodes: quad.nodes(),
        quadrature_abs_tol: quad.abs_tol(),
    };

    atomic_write(&args.output, &estimate_to_csv(&estimate))?;
    let manifest_path = manifest_path(&args.output);
    let manifest_json =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::internal(e.to_string()))?;
    atomic_write(&manifest_path, &manifest_json)?;
    Ok(())
}

/// Manifest lives next to the output as `<output>.manifest.json`.
fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Run a plan's replicates on a thread pool and fold them in index order.
///
/// Every replicate derives its own random streams from
/// `(seed, replicate, purpose)`, so the result is byte-identical for any
/// thread count, including one.
pub fn run_plan_parallel(
    plan: &ExperimentPlan,
    threads: Option<usize>,
) -> Result<SummaryTable, CliError> {
    let violations = plan.violations();
    if !violations.is_empty() {
        return Err(CliError::from(deconv_core::Error::InvalidPlan {
            violations,
        }));
    }
    let map = || -> Vec<ReplicateRecord> {
        (0..plan.replicates as u64)
            .into_par_iter()
            .map(|r| run_replicate(plan, r))
            .collect()
    };
    let records = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::internal(e.to_string()))?
            .install(map),
        None => map(),
    };
    summarize(plan, &records).map_err(CliError::from)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let mut plan = load_plan(&args.plan)?;
    if let Some(seed) = args.seed {
        plan.seed = seed;
    }
    let table = run_plan_parallel(&plan, args.threads)?;
    atomic_write(&args.output, &table.to_csv())?;
    atomic_write(&args.output.with_extension("txt"), &table.to_text())?;
    Ok(())
}

fn cmd_bandwidth(args: &BandwidthArgs) -> Result<(), CliError> {
    let sample = read_sample(&args.input, args.sigma)?;
    let spec = LambdaSearchSpec {
        s: args.s,
        span: args.span,
        ..LambdaSearchSpec::default()
    };

    let h_rot = rot_bandwidth_y(&sample, args.a0)?;
    let lambda1_rot = select_lambda1_rot_unsquared(&sample, args.a0)?;
    let lambda1_rot_squared = select_lambda1_rot(&sample, args.a0)?;
    let (lambda1_mise, _) = minimize_mise_objective(&spec)?;
    let mise_boundary = select_lambda1_mise(&spec).is_err();
    let grid = build_lambda_grid(lambda1_rot, &spec)?;

    let mut report = String::new();
    report.push_str(&format!("n={}\n", sample.len()));
    report.push_str(&format!("a0={}\n", args.a0));
    report.push_str(&format!("h_rot={h_rot}\n"));
    report.push_str(&format!("sigma_y={}\n", sample_sd(sample.y())));
    report.push_str(&format!("sigma_u_bar={}\n", sample.mean_sigma()));
    report.push_str(&format!("sigma_h={}\n", sample.harmonic_mean_sigma()));
    report.push_str(&format!("lambda1_rot={lambda1_rot}\n"));
    report.push_str(&format!("lambda1_rot_squared={lambda1_rot_squared}\n"));
    report.push_str(&format!("lambda1_mise={lambda1_mise}\n"));
    report.push_str(&format!("lambda1_mise_boundary={mise_boundary}\n"));
    report.push_str(&format!("lambda_grid_s={}\n", spec.s));
    report.push_str(&format!("lambda_grid_span={}\n", spec.span));
    let rendered: Vec<String> = grid.values().iter().map(|l| l.to_string()).collect();
    report.push_str(&format!("lambda_grid={}\n", rendered.join(",")));

    match &args.output {
        Some(path) => atomic_write(path, &report)?,
        None => print!("{report}"),
    }
    Ok(())
}
