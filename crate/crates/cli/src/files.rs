//! JSON document formats and their validation.
//!
//! Matrices travel as split real/imaginary rectangular arrays; parameters
//! as plain angle lists in radians. Validation failures always name the
//! offending field. Numbers are written with enough digits to round-trip
//! 64-bit floats exactly.

use serde::{Deserialize, Serialize};
use unipar::{Complex64, ComplexMatrix, LevelParams, ParameterSet, SphericalCoords};

use crate::CliError;

/// Square complex matrix: `re[i][j] + i * im[i][j]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.n_rows();
        let mut re = vec![vec![0.0; m.n_cols()]; n];
        let mut im = vec![vec![0.0; m.n_cols()]; n];
        for i in 0..n {
            for j in 0..m.n_cols() {
                let z = m.get(i, j);
                re[i][j] = z.re;
                im[i][j] = z.im;
            }
        }
        MatrixFile { n, re, im }
    }

    /// Checks shape and finiteness, then builds the matrix.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        if self.n == 0 {
            return Err(CliError::Malformed("n must be at least 1".into()));
        }
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != self.n {
                return Err(CliError::Malformed(format!(
                    "{name} must have {} rows, got {}",
                    self.n,
                    part.len()
                )));
            }
            for (i, row) in part.iter().enumerate() {
                if row.len() != self.n {
                    return Err(CliError::Malformed(format!(
                        "{name}[{i}] must have {} entries, got {}",
                        self.n,
                        row.len()
                    )));
                }
                for (j, value) in row.iter().enumerate() {
                    if !value.is_finite() {
                        return Err(CliError::Malformed(format!(
                            "{name}[{i}][{j}] must be finite, got {value}"
                        )));
                    }
                }
            }
        }
        let mut m = ComplexMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, Complex64::new(self.re[i][j], self.im[i][j]));
            }
        }
        Ok(m)
    }

    /// Like [`to_matrix`](Self::to_matrix) but reports non-finite entries as
    /// a numeric-input failure instead of a malformed document. Used by
    /// commands that accept arbitrary matrices and reserve a separate exit
    /// code for bad numbers.
    pub fn to_matrix_numeric(&self) -> Result<ComplexMatrix, CliError> {
        match self.to_matrix() {
            Err(CliError::Malformed(msg)) if msg.contains("must be finite") => {
                Err(CliError::NumericInput(msg))
            }
            other => other,
        }
    }
}

/// One recursion level: the rotation angle and the spherical angles of the
/// level direction. Level `j` (1-based position in `levels`) carries `j-1`
/// entries in each angle list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelEntry {
    pub theta: f64,
    pub gammas: Vec<f64>,
    pub deltas: Vec<f64>,
}

/// Canonical parameters of an order-`n` unitary, all angles in radians.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterFile {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub levels: Vec<LevelEntry>,
}

impl ParameterFile {
    pub fn from_params(p: &ParameterSet) -> Self {
        ParameterFile {
            n: p.n(),
            alpha: p.alpha().to_vec(),
            beta: p.beta().to_vec(),
            levels: p
                .levels()
                .iter()
                .map(|lv| LevelEntry {
                    theta: lv.theta(),
                    gammas: lv.coords().gammas.clone(),
                    deltas: lv.coords().deltas.clone(),
                })
                .collect(),
        }
    }

    /// Validates the document and builds the parameter set.
    ///
    /// A non-zero `beta[0]` is accepted and normalised away by the shift
    /// `alpha += beta[0]`, `beta -= beta[0]` (the composed matrix is
    /// unchanged); the applied shift is returned so callers can warn.
    pub fn to_params(&self) -> Result<(ParameterSet, Option<f64>), CliError> {
        if self.n == 0 {
            return Err(CliError::Malformed("n must be at least 1".into()));
        }
        let n = self.n;
        for (name, list) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if list.len() != n {
                return Err(CliError::Malformed(format!(
                    "{name} must have length {n}, got {}",
                    list.len()
                )));
            }
            for (k, value) in list.iter().enumerate() {
                if !value.is_finite() {
                    return Err(CliError::Malformed(format!(
                        "{name}[{k}] must be finite, got {value}"
                    )));
                }
            }
        }
        if self.levels.len() != n - 1 {
            return Err(CliError::Malformed(format!(
                "levels must have {} entries for n = {n}, got {}",
                n - 1,
                self.levels.len()
            )));
        }
        for (idx, entry) in self.levels.iter().enumerate() {
            let j = idx + 1;
            if !entry.theta.is_finite() {
                return Err(CliError::Malformed(format!(
                    "levels[{idx}].theta must be finite, got {}",
                    entry.theta
                )));
            }
            for (name, list) in [("gammas", &entry.gammas), ("deltas", &entry.deltas)] {
                if list.len() != j - 1 {
                    return Err(CliError::Malformed(format!(
                        "levels[{idx}].{name} must have length {}, got {}",
                        j - 1,
                        list.len()
                    )));
                }
                for (k, value) in list.iter().enumerate() {
                    if !value.is_finite() {
                        return Err(CliError::Malformed(format!(
                            "levels[{idx}].{name}[{k}] must be finite, got {value}"
                        )));
                    }
                }
            }
        }
        let shift = if self.beta[0] != 0.0 {
            Some(self.beta[0])
        } else {
            None
        };
        let alpha: Vec<f64> = match shift {
            Some(s) => self.alpha.iter().map(|a| a + s).collect(),
            None => self.alpha.clone(),
        };
        let mut beta: Vec<f64> = match shift {
            Some(s) => self.beta.iter().map(|b| b - s).collect(),
            None => self.beta.clone(),
        };
        beta[0] = 0.0;
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(idx, entry)| {
                LevelParams::new(
                    idx + 1,
                    entry.theta,
                    SphericalCoords::new(entry.gammas.clone(), entry.deltas.clone()),
                )
            })
            .collect::<unipar::Result<Vec<_>>>()
            .map_err(|e| CliError::Malformed(format!("levels: {e}")))?;
        let params = ParameterSet::new(n, alpha, beta, levels)
            .map_err(|e| CliError::Malformed(e.to_string()))?;
        Ok((params, shift))
    }
}

/// One not-yet-canonical level: rotation angle plus the complex direction
/// as split real/imaginary lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLevelEntry {
    pub level: usize,
    pub theta: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Decomposition before gauge fixing: complex level directions and the
/// residual diagonal phases `psi`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParameterFile {
    pub n: usize,
    pub levels: Vec<RawLevelEntry>,
    pub psi: Vec<f64>,
}

impl RawParameterFile {
    pub fn from_raw(raw: &unipar::RawDecomposition) -> Self {
        RawParameterFile {
            n: raw.n,
            levels: raw
                .levels
                .iter()
                .map(|lv| RawLevelEntry {
                    level: lv.level,
                    theta: lv.theta,
                    re: lv.vector.as_slice().iter().map(|z| z.re).collect(),
                    im: lv.vector.as_slice().iter().map(|z| z.im).collect(),
                })
                .collect(),
            psi: raw.psi.clone(),
        }
    }
}
