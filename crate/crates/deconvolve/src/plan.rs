//! JSON experiment-plan files and their conversion into library plans.
//!
//! Validation is collected, not fail-fast: a bad plan reports every violated
//! invariant at once.

use std::path::Path;

use serde::Deserialize;

use deconv_core::simlab::{
    ErrorConfig, EstimatorKind, ExperimentPlan, GridSpec, LambdaConfig, LambdaRule, TrueDensity,
};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    density: DensityDto,
    errors: ErrorsDto,
    n: usize,
    replicates: usize,
    seed: u64,
    estimators: Vec<String>,
    #[serde(default)]
    grid: Option<GridDto>,
    #[serde(default)]
    lambda: Option<LambdaDto>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityDto {
    kind: String,
    #[serde(default)]
    params: Option<DensityParams>,
}

/// Optional density parameters; the lab supports exactly the fixed target
/// configurations, so anything supplied must match them.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityParams {
    mean: Option<f64>,
    sd: Option<f64>,
    shape: Option<f64>,
    scale: Option<f64>,
    weight: Option<f64>,
    means: Option<[f64; 2]>,
    sds: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ErrorsDto {
    mode: String,
    params: ErrorParams,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ErrorParams {
    sigma: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDto {
    points: Option<usize>,
    range: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LambdaDto {
    rule: String,
    s: Option<usize>,
    span: Option<f64>,
    explicit: Option<f64>,
}

impl PlanFile {
    /// Convert into a library plan, collecting every violation.
    pub fn into_plan(self) -> Result<ExperimentPlan, Vec<String>> {
        let mut violations = Vec::new();

        let density = match self.density.kind.as_str() {
            "normal" => Some(TrueDensity::StdNormal),
            "gamma" => Some(TrueDensity::GammaTwoOne),
            "mixture" => Some(TrueDensity::BimodalMixture),
            other => {
                violations.push(format!(
                    "density.kind must be normal, gamma or mixture, got `{other}`"
                ));
                None
            }
        };
        if let (Some(d), Some(p)) = (density, self.density.params.as_ref()) {
            validate_density_params(d, p, &mut violations);
        }

        let errors = match self.errors.mode.as_str() {
            "homoscedastic" => match self.errors.params.sigma {
                Some(sigma) => Some(ErrorConfig::Homoscedastic { sigma }),
                None => {
                    violations
                        .push("errors.params.sigma is required for homoscedastic mode".into());
                    None
                }
            },
            "hetero_uniform" => {
                match (self.errors.params.a, self.errors.params.b) {
                    (Some(a), Some(b)) => Some(ErrorConfig::HeteroUniform { a, b }),
                    _ => {
                        violations
                        .push("errors.params.a and errors.params.b are required for hetero_uniform mode".into());
                        None
                    }
                }
            }
            other => {
                violations.push(format!(
                    "errors.mode must be homoscedastic or hetero_uniform, got `{other}`"
                ));
                None
            }
        };

        let mut estimators = Vec::new();
        for name in &self.estimators {
            match name.as_str() {
                "simex" => estimators.push(EstimatorKind::Simex),
                "dke" => estimators.push(EstimatorKind::Dke),
                "naive" => estimators.push(EstimatorKind::Naive),
                "oracle_kde" => estimators.push(EstimatorKind::OracleKde),
                other => violations.push(format!(
                    "estimators entries must be simex, dke, naive or oracle_kde, got `{other}`"
                )),
            }
        }

        let grid = match self.grid {
            Some(g) => GridSpec {
                points: g.points.unwrap_or(512),
                range: g.range.map(|[lo, hi]| (lo, hi)),
            },
            None => GridSpec::default(),
        };

        let lambda = match self.lambda {
            Some(l) => {
                let rule = match l.rule.as_str() {
                    "rot" => Some(LambdaRule::Rot),
                    "rot_squared" => Some(LambdaRule::RotSquared),
                    "mise" => Some(LambdaRule::Mise),
                    "explicit" => match l.explicit {
                        Some(v) => Some(LambdaRule::Explicit(v)),
                        None => {
                            violations.push(
                                "lambda.explicit is required when lambda.rule is explicit".into(),
                            );
                            None
                        }
                    },
                    other => {
                        violations.push(format!(
                            "lambda.rule must be rot, rot_squared, mise or explicit, got `{other}`"
                        ));
                        None
                    }
                };
                rule.map(|rule| LambdaConfig {
                    rule,
                    s: l.s.unwrap_or(50),
                    span: l.span.unwrap_or(3.0),
                })
            }
            None => Some(LambdaConfig::default()),
        };

        let (density, errors, lambda) = match (density, errors, lambda) {
            (Some(d), Some(e), Some(l)) if violations.is_empty() => (d, e, l),
            _ => return Err(violations),
        };

        let plan = ExperimentPlan {
            density,
            errors,
            n: self.n,
            replicates: self.replicates,
            seed: self.seed,
            estimators,
            grid,
            lambda,
        };
        let more = plan.violations();
        if more.is_empty() {
            Ok(plan)
        } else {
            Err(more)
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

fn validate_density_params(d: TrueDensity, p: &DensityParams, violations: &mut Vec<String>) {
    let ok = match d {
        TrueDensity::StdNormal => {
            p.mean.is_none_or(|v| close(v, 0.0)) && p.sd.is_none_or(|v| close(v, 1.0))
        }
        TrueDensity::GammaTwoOne => {
            p.shape.is_none_or(|v| close(v, 2.0)) && p.scale.is_none_or(|v| close(v, 1.0))
        }
        TrueDensity::BimodalMixture => {
            p.weight.is_none_or(|v| close(v, 0.5))
                && p.means
                    .is_none_or(|m| close(m[0], -2.0) && close(m[1], 2.0))
                && p.sds.is_none_or(|s| close(s[0], 1.0) && close(s[1], 1.0))
        }
    };
    if !ok {
        violations.push(format!(
            "density.params must match the supported {} configuration \
             (normal: mean 0, sd 1; gamma: shape 2, scale 1; mixture: weight 0.5, means [-2, 2], sds [1, 1])",
            match d {
                TrueDensity::StdNormal => "normal",
                TrueDensity::GammaTwoOne => "gamma",
                TrueDensity::BimodalMixture => "mixture",
            }
        ));
    }
}

/// Load and convert a plan file; validation failures list every violation.
pub fn load_plan(path: &Path) -> Result<ExperimentPlan, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let file: PlanFile = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    file.into_plan().map_err(|violations| {
        CliError::input(format!(
            "{}: invalid plan: {}",
            path.display(),
            violations.join("; ")
        ))
    })
}
