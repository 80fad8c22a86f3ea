//! Sample parsing and atomic file output.

use std::fs;
use std::path::Path;

use deconv_core::model::{ContaminatedSample, DensityEstimate};

use crate::error::CliError;

/// Parse a `y,sigma` CSV into a sample.
///
/// The header row is optional and detected by a non-numeric first field.
/// Single-column files are accepted only when a global `sigma` is supplied.
/// Malformed rows and non-positive scales are reported with their line
/// number.
pub fn read_sample(path: &Path, global_sigma: Option<f64>) -> Result<ContaminatedSample, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;

    let mut y = Vec::new();
    let mut sigma = Vec::new();
    let mut saw_data_row = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let first: Result<f64, _> = fields[0].parse();
        if first.is_err() && !saw_data_row {
            // Header row.
            continue;
        }
        saw_data_row = true;
        let y_val: f64 = first.map_err(|_| {
            CliError::input(format!(
                "{}: line {line_no}: cannot parse `{}` as a number",
                path.display(),
                fields[0]
            ))
        })?;
        let sigma_val = match fields.len() {
            1 => global_sigma.ok_or_else(|| {
                CliError::input(format!(
                    "{}: line {line_no}: single-column input needs --sigma for the common error scale",
                    path.display()
                ))
            })?,
            2 => fields[1].parse().map_err(|_| {
                CliError::input(format!(
                    "{}: line {line_no}: cannot parse `{}` as a number",
                    path.display(),
                    fields[1]
                ))
            })?,
            n => {
                return Err(CliError::input(format!(
                    "{}: line {line_no}: expected 1 or 2 fields, got {n}",
                    path.display()
                )))
            }
        };
        if sigma_val <= 0.0 || !sigma_val.is_finite() {
            return Err(CliError::input(format!(
                "{}: line {line_no}: sigma must be > 0, got {sigma_val}",
                path.display()
            )));
        }
        if !y_val.is_finite() {
            return Err(CliError::input(format!(
                "{}: line {line_no}: y must be finite",
                path.display()
            )));
        }
        y.push(y_val);
        sigma.push(sigma_val);
    }

    if y.is_empty() {
        return Err(CliError::input(format!("{}: no data rows", path.display())));
    }
    ContaminatedSample::new(y, sigma).map_err(CliError::from)
}

/// Write a file atomically: temp file in the same directory, then rename.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|e| CliError::input(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Render an estimate as `t,fhat,variance,lo,hi` CSV with full-precision
/// (shortest round-trip) numbers; variance and band columns are empty when
/// the estimate does not carry them.
pub fn estimate_to_csv(est: &DensityEstimate) -> String {
    let mut out = String::from("t,fhat,variance,lo,hi\n");
    let ts = est.grid().points();
    for i in 0..ts.len() {
        let var = est.variance().map(|v| v[i].to_string()).unwrap_or_default();
        let (lo, hi) = est
            .band()
            .map(|b| (b.lower[i].to_string(), b.upper[i].to_string()))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            ts[i],
            est.values()[i],
            var,
            lo,
            hi
        ));
    }
    out
}
