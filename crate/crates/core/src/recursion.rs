//! The recursive structure of a unitary matrix.
//!
//! Every `n x n` unitary factors as `X = Phi(alpha) * V * Phi(beta)` where
//! `Phi` is a diagonal phase matrix and `V` is built level by level: the
//! order-`j+1` core extends the order-`j` one with a rotation angle
//! `theta` and a unit vector of length `j`. One level can be written three
//! equivalent ways:
//!
//! * mixed form: blocks of `V_prev`, the pair `(a, b)` with
//!   `b = -adjoint(V_prev) * a`, and `(sin theta, cos theta)` entries;
//! * `V = A(theta, a) * diag(V_prev, 1)` with the rank-one update sitting
//!   on the left ("a-form");
//! * `V = diag(V_prev, 1) * B(theta, b)` with it on the right ("b-form").
//!
//! Chaining either factor shape over levels `1..n-1` gives the ordered
//! product forms [`compose_a`] and [`compose_b`]. All five routes agree to
//! rounding error; the unit tests and the property suite pin that down.

use crate::cxcore::{Complex64, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Tolerance on `| |a| - 1 |` for vectors that must be unit norm.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Default gate on the unitarity deviation of matrices taken as input.
pub const UNITARITY_TOL: f64 = 1e-8;

/// Which side of `diag(V_prev, 1)` a level factor multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// Left factor, carrying the vector `a`.
    AForm,
    /// Right factor, carrying the vector `b`.
    BForm,
}

impl FactorKind {
    fn name(self) -> &'static str {
        match self {
            FactorKind::AForm => "a-form",
            FactorKind::BForm => "b-form",
        }
    }
}

/// One level of the recursion: an angle and a unit vector of length `level`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSpec {
    level: usize,
    theta: f64,
    vector: ComplexVector,
    kind: FactorKind,
}

impl FactorSpec {
    /// Validates and wraps a level description.
    ///
    /// `vector` must have length `level` (so level `j` extends an order-`j`
    /// core to order `j+1`) and unit norm within [`UNIT_NORM_TOL`];
    /// `theta` must be finite.
    pub fn new(level: usize, theta: f64, vector: ComplexVector, kind: FactorKind) -> Result<Self> {
        if level == 0 {
            return Err(Error::DimensionTooSmall { n: 0, min: 1 });
        }
        if vector.len() != level {
            return Err(Error::SizeMismatch {
                matrix: level,
                vector: vector.len(),
            });
        }
        if !theta.is_finite() {
            return Err(Error::NonFinite {
                context: "factor angle",
            });
        }
        if !vector.is_finite() {
            return Err(Error::NonFinite {
                context: "factor vector",
            });
        }
        let norm = vector.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnitNorm {
                norm,
                tolerance: UNIT_NORM_TOL,
            });
        }
        Ok(FactorSpec {
            level,
            theta,
            vector,
            kind,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.vector
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }
}

/// Diagonal matrix `diag(e^{i phases_1}, ..., e^{i phases_n})`.
pub fn phase_matrix(phases: &[f64]) -> ComplexMatrix {
    let diag: Vec<Complex64> = phases
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();
    ComplexMatrix::diagonal(&diag)
}

fn check_unit(vector: &ComplexVector) -> Result<()> {
    let norm = vector.norm();
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NotUnitNorm {
            norm,
            tolerance: UNIT_NORM_TOL,
        });
    }
    Ok(())
}

fn check_square_of(v: &ComplexMatrix, len: usize) -> Result<()> {
    if !v.is_square() {
        return Err(Error::NotSquare {
            rows: v.n_rows(),
            cols: v.n_cols(),
        });
    }
    if v.n_rows() != len {
        return Err(Error::SizeMismatch {
            matrix: v.n_rows(),
            vector: len,
        });
    }
    Ok(())
}

/// Partner vector `b = -adjoint(v) * a` for a unit `a`.
///
/// Unitarity of `v` makes the result unit norm again; `v` is gated at
/// [`UNITARITY_TOL`].
pub fn b_from_a(v: &ComplexMatrix, a: &ComplexVector) -> Result<ComplexVector> {
    check_square_of(v, a.len())?;
    check_unit(a)?;
    let deviation = v.unitarity_deviation()?;
    if deviation > UNITARITY_TOL {
        return Err(Error::NotUnitary {
            deviation,
            tolerance: UNITARITY_TOL,
        });
    }
    let minus_one = Complex64::new(-1.0, 0.0);
    Ok(v.adjoint().mul_vector(a)?.scale(minus_one))
}

/// Inverse partner map `a = -v * b`; same gates as [`b_from_a`].
pub fn a_from_b(v: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    check_square_of(v, b.len())?;
    check_unit(b)?;
    let deviation = v.unitarity_deviation()?;
    if deviation > UNITARITY_TOL {
        return Err(Error::NotUnitary {
            deviation,
            tolerance: UNITARITY_TOL,
        });
    }
    let minus_one = Complex64::new(-1.0, 0.0);
    Ok(v.mul_vector(b)?.scale(minus_one))
}

/// One extension level written directly in block form.
///
/// For an order-`j` unitary `v_prev`, angle `theta` and unit vector `a` of
/// length `j`, the order-`j+1` result is
///
/// ```text
/// [ v_prev + (1-cos)*|a><b|   sin*a ]        b = -adjoint(v_prev)*a
/// [       sin*<b|              cos  ]
/// ```
///
/// where `<b|` is the conjugated row. Output is unitary to rounding error.
pub fn mixed_form(v_prev: &ComplexMatrix, theta: f64, a: &ComplexVector) -> Result<ComplexMatrix> {
    if !theta.is_finite() {
        return Err(Error::NonFinite {
            context: "extension angle",
        });
    }
    let j = a.len();
    let b = b_from_a(v_prev, a)?;
    let c = theta.cos();
    let s = theta.sin();
    let one_minus_c = Complex64::new(1.0 - c, 0.0);
    let update = a.outer(&b);
    let mut out = ComplexMatrix::zeros(j + 1, j + 1);
    for row in 0..j {
        for col in 0..j {
            out.set(row, col, v_prev.get(row, col) + one_minus_c * update.get(row, col));
        }
    }
    for row in 0..j {
        out.set(row, j, Complex64::new(s, 0.0) * a.get(row));
    }
    for col in 0..j {
        out.set(j, col, Complex64::new(s, 0.0) * b.get(col).conj());
    }
    out.set(j, j, Complex64::new(c, 0.0));
    Ok(out)
}

fn rank_one_rotation(
    theta: f64,
    w: &ComplexVector,
    sign_top: f64,
) -> Result<ComplexMatrix> {
    if !theta.is_finite() {
        return Err(Error::NonFinite {
            context: "factor angle",
        });
    }
    check_unit(w)?;
    let j = w.len();
    let c = theta.cos();
    let s = theta.sin();
    let cos = Complex64::new(c, 0.0);
    let mut out = ComplexMatrix::zeros(j + 1, j + 1);
    for row in 0..j {
        for col in 0..j {
            let delta = if row == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            // Grouped as (I - |w><w|) + cos*|w><w| rather than
            // I - (1-cos)*|w><w| so a basis-vector diagonal reproduces
            // cos(theta) bit for bit.
            let projector = w.get(row) * w.get(col).conj();
            out.set(row, col, (delta - projector) + cos * projector);
        }
    }
    let st = Complex64::new(sign_top * s, 0.0);
    let sb = Complex64::new(-sign_top * s, 0.0);
    for row in 0..j {
        out.set(row, j, st * w.get(row));
    }
    for col in 0..j {
        out.set(j, col, sb * w.get(col).conj());
    }
    out.set(j, j, Complex64::new(c, 0.0));
    Ok(out)
}

/// Left-side level factor of order `j+1`:
///
/// ```text
/// [ I - (1-cos)*|a><a|    sin*a ]
/// [     -sin*<a|           cos  ]
/// ```
///
/// Unitary for any finite `theta` and unit `a`.
pub fn a_factor_block(theta: f64, a: &ComplexVector) -> Result<ComplexMatrix> {
    rank_one_rotation(theta, a, 1.0)
}

/// Right-side level factor of order `j+1`:
///
/// ```text
/// [ I - (1-cos)*|b><b|   -sin*b ]
/// [      sin*<b|           cos  ]
/// ```
pub fn b_factor_block(theta: f64, b: &ComplexVector) -> Result<ComplexMatrix> {
    rank_one_rotation(theta, b, -1.0)
}

/// Places `block` in the top-left corner of an order-`n` identity.
pub fn embed_factor(block: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    if !block.is_square() {
        return Err(Error::NotSquare {
            rows: block.n_rows(),
            cols: block.n_cols(),
        });
    }
    let m = block.n_rows();
    if m > n {
        return Err(Error::BlockTooLarge { block: m, n });
    }
    let mut out = ComplexMatrix::identity(n);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, block.get(i, j));
        }
    }
    Ok(out)
}

/// One extension level via the left factor: `A(theta, a) * diag(v_prev, 1)`.
pub fn step_a(v_prev: &ComplexMatrix, theta: f64, a: &ComplexVector) -> Result<ComplexMatrix> {
    check_square_of(v_prev, a.len())?;
    let n = a.len() + 1;
    let factor = a_factor_block(theta, a)?;
    factor.matmul(&embed_factor(v_prev, n)?)
}

/// One extension level via the right factor: `diag(v_prev, 1) * B(theta, b)`.
pub fn step_b(v_prev: &ComplexMatrix, theta: f64, b: &ComplexVector) -> Result<ComplexMatrix> {
    check_square_of(v_prev, b.len())?;
    let n = b.len() + 1;
    let factor = b_factor_block(theta, b)?;
    embed_factor(v_prev, n)?.matmul(&factor)
}

fn check_levels(levels: &[FactorSpec], n: usize, kind: FactorKind) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    if levels.len() != n - 1 {
        return Err(Error::LevelCount {
            n,
            expected: n - 1,
            got: levels.len(),
        });
    }
    for (idx, spec) in levels.iter().enumerate() {
        if spec.level() != idx + 1 {
            return Err(Error::LevelOutOfOrder {
                expected: idx + 1,
                got: spec.level(),
            });
        }
        if spec.kind() != kind {
            return Err(Error::FactorKindMismatch {
                level: spec.level(),
                expected: kind.name(),
            });
        }
    }
    Ok(())
}

/// Core matrix as the descending product of embedded left factors:
/// `V = A_{n-1} * A_{n-2} * ... * A_1`, each factor of order `level+1`
/// embedded into order `n`. `levels` must hold a-form factors for levels
/// `1..n-1` in ascending order; `n = 1` gives the `1 x 1` identity.
pub fn compose_a(levels: &[FactorSpec], n: usize) -> Result<ComplexMatrix> {
    check_levels(levels, n, FactorKind::AForm)?;
    let mut acc: Option<ComplexMatrix> = None;
    for spec in levels.iter().rev() {
        let factor = embed_factor(&a_factor_block(spec.theta(), spec.vector())?, n)?;
        acc = Some(match acc {
            None => factor,
            Some(m) => m.matmul(&factor)?,
        });
    }
    Ok(acc.unwrap_or_else(|| ComplexMatrix::identity(n)))
}

/// Core matrix as the ascending product of embedded right factors:
/// `V = B_1 * B_2 * ... * B_{n-1}`.
pub fn compose_b(levels: &[FactorSpec], n: usize) -> Result<ComplexMatrix> {
    check_levels(levels, n, FactorKind::BForm)?;
    let mut acc: Option<ComplexMatrix> = None;
    for spec in levels.iter() {
        let factor = embed_factor(&b_factor_block(spec.theta(), spec.vector())?, n)?;
        acc = Some(match acc {
            None => factor,
            Some(m) => m.matmul(&factor)?,
        });
    }
    Ok(acc.unwrap_or_else(|| ComplexMatrix::identity(n)))
}

/// Both sides of the similarity between the two factor shapes at level `j`
/// inside order `n`:
///
/// * left: the embedded a-form factor for `(theta, a)`;
/// * right: `diag(v_j, I) * B(theta, b) * diag(adjoint(v_j), I)` with
///   `b = -adjoint(v_j) * a`.
///
/// The two returned matrices agree to rounding error whenever `v_j` is the
/// order-`j` core the level extends. Callers compare them; nothing is
/// asserted here.
pub fn factor_conjugation(
    j: usize,
    n: usize,
    v_j: &ComplexMatrix,
    theta: f64,
    a: &ComplexVector,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if j == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    if j + 1 > n {
        return Err(Error::BlockTooLarge { block: j + 1, n });
    }
    if a.len() != j {
        return Err(Error::SizeMismatch {
            matrix: j,
            vector: a.len(),
        });
    }
    let left = embed_factor(&a_factor_block(theta, a)?, n)?;
    let b = b_from_a(v_j, a)?;
    let v_emb = embed_factor(v_j, n)?;
    let b_emb = embed_factor(&b_factor_block(theta, &b)?, n)?;
    let right = v_emb.matmul(&b_emb)?.matmul(&embed_factor(&v_j.adjoint(), n)?)?;
    Ok((left, right))
}

/// Full matrix `Phi(alpha) * V * Phi(beta)` from phase lists and a-form
/// levels. `alpha` and `beta` must both have length `n`; `levels` follows
/// the [`compose_a`] contract. For `n = 1` the result is the scalar
/// `e^{i(alpha_1 + beta_1)}`.
pub fn compose_full(alpha: &[f64], beta: &[f64], levels: &[FactorSpec]) -> Result<ComplexMatrix> {
    let n = alpha.len();
    if beta.len() != n {
        return Err(Error::PhaseCount {
            name: "beta",
            expected: n,
            got: beta.len(),
        });
    }
    for (name, list) in [("alpha", alpha), ("beta", beta)] {
        if list.iter().any(|x| !x.is_finite()) {
            let _ = name;
            return Err(Error::NonFinite { context: "phase list" });
        }
    }
    let v = compose_a(levels, n)?;
    Ok(v.scale_rows_by_phases(alpha).scale_cols_by_phases(beta))
}
