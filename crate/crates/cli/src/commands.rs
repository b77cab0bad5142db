//! The five subcommands. Each returns the process exit code on its success
//! path; failures come back as [`CliError`] with the code implied by the
//! error class. Diagnostics go to the error stream; machine-readable
//! output goes to files or standard output only.

use std::path::Path;

use serde::Serialize;
use unipar::decompose::{decompose_raw_with_tolerance, decompose_with_tolerance};
use unipar::gauge::compose_parameters;
use unipar::toolkit::{fit, sample_parameters, verify, FitConfig};
use unipar::Error;

use crate::files::{MatrixFile, ParameterFile, RawParameterFile};
use crate::CliError;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("cannot encode output: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn check_tolerance(tolerance: f64) -> Result<(), CliError> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(CliError::Malformed(format!(
            "tolerance must be positive and finite, got {tolerance}"
        )));
    }
    Ok(())
}

fn warn_beta_shift(shift: Option<f64>) {
    if let Some(s) = shift {
        eprintln!(
            "warning: beta[0] = {s} is not 0; shifted the common phase into alpha \
             (the composed matrix is unchanged)"
        );
    }
}

/// Parameters to matrix.
pub fn cmd_compose(in_params: &Path, out_matrix: &Path) -> Result<i32, CliError> {
    let file: ParameterFile = read_json(in_params)?;
    let (params, shift) = file.to_params()?;
    warn_beta_shift(shift);
    let x = compose_parameters(&params).map_err(|e| CliError::Malformed(e.to_string()))?;
    let deviation = x
        .unitarity_deviation()
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    eprintln!("unitarity deviation: {deviation:e}");
    write_json(out_matrix, &MatrixFile::from_matrix(&x))?;
    Ok(0)
}

/// Matrix to parameters, canonical by default, raw with `raw = true`.
pub fn cmd_decompose(
    in_matrix: &Path,
    out_params: &Path,
    tolerance: f64,
    raw: bool,
) -> Result<i32, CliError> {
    check_tolerance(tolerance)?;
    let file: MatrixFile = read_json(in_matrix)?;
    let x = file.to_matrix()?;
    let map_err = |e: Error| match e {
        Error::NotUnitary {
            deviation,
            tolerance,
        } => CliError::Verification(format!(
            "input is not unitary: deviation {deviation:e} exceeds tolerance {tolerance:e}"
        )),
        other => CliError::Malformed(other.to_string()),
    };
    if raw {
        let decomposition = decompose_raw_with_tolerance(&x, tolerance).map_err(map_err)?;
        write_json(out_params, &RawParameterFile::from_raw(&decomposition))?;
    } else {
        let params = decompose_with_tolerance(&x, tolerance).map_err(map_err)?;
        write_json(out_params, &ParameterFile::from_params(&params))?;
    }
    Ok(0)
}

/// Random canonical parameters, optionally with the composed matrix.
pub fn cmd_sample(
    out_params: &Path,
    n: usize,
    seed: u64,
    matrix_out: Option<&Path>,
) -> Result<i32, CliError> {
    if n == 0 {
        return Err(CliError::Malformed("n must be at least 1".into()));
    }
    let params = sample_parameters(n, seed).map_err(|e| CliError::Malformed(e.to_string()))?;
    write_json(out_params, &ParameterFile::from_params(&params))?;
    if let Some(path) = matrix_out {
        let x = compose_parameters(&params).map_err(|e| CliError::Malformed(e.to_string()))?;
        write_json(path, &MatrixFile::from_matrix(&x))?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    deviation: f64,
    det_modulus_error: f64,
    tolerance: f64,
    pass: bool,
}

/// Unitarity report to standard output; exit 0 on pass, 3 on fail.
pub fn cmd_verify(in_matrix: &Path, tolerance: f64) -> Result<i32, CliError> {
    check_tolerance(tolerance)?;
    let file: MatrixFile = read_json(in_matrix)?;
    let x = file.to_matrix()?;
    let report = verify(&x, tolerance).map_err(|e| CliError::Malformed(e.to_string()))?;
    let out = VerifyReport {
        n: report.n,
        deviation: report.deviation,
        det_modulus_error: report.det_modulus_error,
        tolerance: report.tolerance,
        pass: report.pass,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&out)
            .map_err(|e| CliError::Io(format!("cannot encode report: {e}")))?
    );
    Ok(if report.pass { 0 } else { 3 })
}

#[derive(Serialize)]
struct FitReport {
    distance: f64,
}

/// Reads a fit target. Structural problems stay malformed, but numbers
/// that overflow the 64-bit float range are a numeric-input failure: the
/// document shape is fine, the entry just is not a finite number.
fn read_fit_target(path: &Path) -> Result<MatrixFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        if e.to_string().contains("number out of range") {
            CliError::NumericInput(msg)
        } else {
            CliError::Malformed(msg)
        }
    })
}

/// Closest-unitary fit; writes the best parameters and prints the final
/// distance as JSON on standard output.
pub fn cmd_fit(in_target: &Path, out_params: &Path, config: FitConfig) -> Result<i32, CliError> {
    let file = read_fit_target(in_target)?;
    let target = file.to_matrix_numeric()?;
    let result = fit(&target, &config).map_err(|e| match e {
        Error::NonFiniteEntry { .. } | Error::NonFinite { .. } => {
            CliError::NumericInput(e.to_string())
        }
        other => CliError::Malformed(other.to_string()),
    })?;
    write_json(out_params, &ParameterFile::from_params(&result.parameters))?;
    println!(
        "{}",
        serde_json::to_string(&FitReport {
            distance: result.distance
        })
        .map_err(|e| CliError::Io(format!("cannot encode report: {e}")))?
    );
    Ok(0)
}
