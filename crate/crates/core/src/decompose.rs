//! Inverse of the recursion: from a unitary matrix back to angles.
//!
//! Works corner first. For an order-`n` unitary `x`, the modulus of the
//! last diagonal entry fixes the top-level rotation angle, the rest of the
//! last column fixes the top-level direction, and applying the adjoint of
//! that factor leaves an order-`n-1` problem plus one accumulated phase.
//! Repeating down to order 1 yields a raw decomposition; a gauge pass then
//! moves every level-vector phase into the outer phase lists, producing the
//! unique canonical parameter set.

use crate::cxcore::{Complex64, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::gauge::{
    canonicalize_vector, vector_to_spherical, wrap_angle, LevelParams, ParameterSet,
};
use crate::recursion::{a_factor_block, embed_factor};

/// Default gate on the unitarity deviation of matrices being decomposed.
pub const DEFAULT_INPUT_TOLERANCE: f64 = 1e-8;

/// Below this sine the level is treated as exactly degenerate: the angle is
/// set to 0 and the direction to the first basis vector. Keeps every
/// division well away from 0/0 and makes diagonal input decompose to all
/// zero angles without any small-divisor path.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Outcome of removing the outermost level of a unitary matrix.
#[derive(Debug, Clone)]
pub struct PeelStep {
    /// Rotation angle in `[0, pi/2]`.
    pub theta: f64,
    /// Unit direction of length `n-1`.
    pub vector: ComplexVector,
    /// Phase absorbed from the last diagonal entry.
    pub psi: f64,
    /// Remaining order-`n-1` problem; unitary to roughly the precision of
    /// the input.
    pub reduced: ComplexMatrix,
}

/// One level of a raw (not yet gauge-fixed) decomposition.
#[derive(Debug, Clone)]
pub struct RawLevel {
    /// Level index `j`; the vector has length `j`.
    pub level: usize,
    /// Rotation angle in `[0, pi/2]`.
    pub theta: f64,
    /// Unit direction, phases not yet normalised.
    pub vector: ComplexVector,
}

/// Angles and directions exactly as peeled, plus the accumulated diagonal
/// phases. The product of the embedded level factors (descending level)
/// times `diag(e^{i psi_k})` reconstructs the decomposed matrix.
#[derive(Debug, Clone)]
pub struct RawDecomposition {
    pub n: usize,
    /// Levels `1..n-1` in ascending order.
    pub levels: Vec<RawLevel>,
    /// Length `n`.
    pub psi: Vec<f64>,
}

impl RawDecomposition {
    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::DimensionTooSmall { n: 0, min: 1 });
        }
        if self.psi.len() != self.n {
            return Err(Error::PhaseCount {
                name: "psi",
                expected: self.n,
                got: self.psi.len(),
            });
        }
        if self.levels.len() != self.n - 1 {
            return Err(Error::LevelCount {
                n: self.n,
                expected: self.n - 1,
                got: self.levels.len(),
            });
        }
        for (idx, lv) in self.levels.iter().enumerate() {
            if lv.level != idx + 1 {
                return Err(Error::LevelOutOfOrder {
                    expected: idx + 1,
                    got: lv.level,
                });
            }
            if lv.vector.len() != lv.level {
                return Err(Error::SizeMismatch {
                    matrix: lv.level,
                    vector: lv.vector.len(),
                });
            }
            if !lv.theta.is_finite() || !lv.vector.is_finite() {
                return Err(Error::NonFinite {
                    context: "raw decomposition level",
                });
            }
        }
        if self.psi.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite {
                context: "raw decomposition phases",
            });
        }
        Ok(())
    }

    /// Rebuilds the matrix this decomposition came from: the embedded level
    /// factors multiplied descending, then the diagonal phases.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        let n = self.n;
        let mut acc: Option<ComplexMatrix> = None;
        for lv in self.levels.iter().rev() {
            let factor = embed_factor(&a_factor_block(lv.theta, &lv.vector)?, n)?;
            acc = Some(match acc {
                None => factor,
                Some(m) => m.matmul(&factor)?,
            });
        }
        let v = acc.unwrap_or_else(|| ComplexMatrix::identity(n));
        Ok(v.scale_cols_by_phases(&self.psi))
    }
}

fn gate_input(x: &ComplexMatrix, tolerance: f64) -> Result<()> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            rows: x.n_rows(),
            cols: x.n_cols(),
        });
    }
    if let Some((row, col)) = x.first_non_finite() {
        return Err(Error::NonFiniteEntry { row, col });
    }
    let deviation = x.unitarity_deviation()?;
    if deviation > tolerance {
        return Err(Error::NotUnitary {
            deviation,
            tolerance,
        });
    }
    Ok(())
}

/// Peel assuming the input is already gated: square, finite, near unitary.
fn peel_core(x: &ComplexMatrix) -> Result<PeelStep> {
    let n = x.n_rows();
    let corner = x.get(n - 1, n - 1);
    let c = corner.norm().clamp(0.0, 1.0);
    let s = (1.0 - c * c).sqrt();
    let mut tail = ComplexVector::zeros(n - 1);
    for i in 0..n - 1 {
        tail.set(i, x.get(i, n - 1));
    }
    let tail_norm = tail.norm();
    let (theta, psi, vector) = if s <= DEGENERACY_THRESHOLD || tail_norm <= DEGENERACY_THRESHOLD {
        // Last column already lies on the last axis to working precision.
        (0.0, corner.arg(), ComplexVector::basis(n - 1, 0))
    } else {
        let theta = c.acos();
        let psi = if corner.norm() > DEGENERACY_THRESHOLD {
            corner.arg()
        } else {
            0.0
        };
        let scaled = tail.scale(Complex64::from_polar(1.0 / s, -psi));
        // Renormalise so the factor gate never trips on accumulated error.
        let direction = scaled.scale(Complex64::new(1.0 / scaled.norm(), 0.0));
        (theta, psi, direction)
    };
    let factor = embed_factor(&a_factor_block(theta, &vector)?, n)?;
    let cleared = factor.adjoint().matmul(x)?;
    let reduced = cleared.block(0, 0, n - 1, n - 1);
    Ok(PeelStep {
        theta,
        vector,
        psi,
        reduced,
    })
}

/// Removes the outermost level of `x` with the default input gate.
///
/// After the step, `adjoint(F) * x` equals `diag(reduced, e^{i psi})` with
/// off-block entries at rounding scale for input that is unitary to near
/// machine precision; off-block residue grows in proportion to the input's
/// own unitarity deviation.
pub fn peel_last(x: &ComplexMatrix) -> Result<PeelStep> {
    peel_last_with_tolerance(x, DEFAULT_INPUT_TOLERANCE)
}

/// [`peel_last`] with an explicit unitarity gate.
pub fn peel_last_with_tolerance(x: &ComplexMatrix, tolerance: f64) -> Result<PeelStep> {
    if x.is_square() && x.n_rows() < 2 {
        return Err(Error::DimensionTooSmall {
            n: x.n_rows(),
            min: 2,
        });
    }
    gate_input(x, tolerance)?;
    peel_core(x)
}

/// Peels `x` down to order 1 with the default input gate.
pub fn decompose_raw(x: &ComplexMatrix) -> Result<RawDecomposition> {
    decompose_raw_with_tolerance(x, DEFAULT_INPUT_TOLERANCE)
}

/// [`decompose_raw`] with an explicit unitarity gate. The gate applies to
/// the input once; the intermediate reduced matrices inherit its quality.
pub fn decompose_raw_with_tolerance(x: &ComplexMatrix, tolerance: f64) -> Result<RawDecomposition> {
    gate_input(x, tolerance)?;
    let n = x.n_rows();
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    let mut psi = vec![0.0f64; n];
    let mut levels: Vec<RawLevel> = Vec::with_capacity(n - 1);
    let mut current = x.clone();
    for order in (2..=n).rev() {
        let step = peel_core(&current)?;
        psi[order - 1] = step.psi;
        levels.push(RawLevel {
            level: order - 1,
            theta: step.theta,
            vector: step.vector,
        });
        current = step.reduced;
    }
    psi[0] = current.get(0, 0).arg();
    levels.reverse();
    Ok(RawDecomposition { n, levels, psi })
}

/// Gauge-fixes a raw decomposition into the canonical parameter set.
///
/// Bottom up, each level vector's leading phase `eta_j` moves out of the
/// factor: it lands as `-eta_j` on `alpha_{j+1}`, adds to `psi_{j+1}`, and
/// multiplies component `j+1` of every higher level vector by `e^{i eta_j}`
/// on its way through. A final common shift zeroes `beta_1`; all phases are
/// wrapped to `[-pi, pi)`. The composed matrix is unchanged throughout.
pub fn canonicalize(raw: &RawDecomposition) -> Result<ParameterSet> {
    raw.validate()?;
    let n = raw.n;
    let mut work: Vec<ComplexVector> = raw.levels.iter().map(|lv| lv.vector.clone()).collect();
    let mut alpha = vec![0.0f64; n];
    let mut psi = raw.psi.clone();
    for idx in 0..n.saturating_sub(1) {
        let (canon, eta) = canonicalize_vector(&work[idx])?;
        work[idx] = canon;
        alpha[idx + 1] = -eta;
        psi[idx + 1] += eta;
        let phase = Complex64::from_polar(1.0, eta);
        for higher in work.iter_mut().skip(idx + 1) {
            let value = higher.get(idx + 1) * phase;
            higher.set(idx + 1, value);
        }
    }
    let shift = psi[0];
    let alpha_out: Vec<f64> = alpha.iter().map(|&a| wrap_angle(a + shift)).collect();
    let mut beta_out: Vec<f64> = psi.iter().map(|&p| wrap_angle(p - shift)).collect();
    beta_out[0] = 0.0;
    let levels = work
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let coords = vector_to_spherical(v)?;
            LevelParams::new(idx + 1, raw.levels[idx].theta, coords)
        })
        .collect::<Result<Vec<_>>>()?;
    ParameterSet::new(n, alpha_out, beta_out, levels)
}

/// Full inverse with the default input gate: peel, then gauge-fix.
pub fn decompose(x: &ComplexMatrix) -> Result<ParameterSet> {
    decompose_with_tolerance(x, DEFAULT_INPUT_TOLERANCE)
}

/// [`decompose`] with an explicit unitarity gate.
pub fn decompose_with_tolerance(x: &ComplexMatrix, tolerance: f64) -> Result<ParameterSet> {
    canonicalize(&decompose_raw_with_tolerance(x, tolerance)?)
}
