//! Canonical coordinates and gauge fixing.
//!
//! The level vectors admit a phase freedom: multiplying a level's vector by
//! `e^{i eta}` can be absorbed into neighbouring phase matrices without
//! changing the full product. This module fixes that freedom. A vector is
//! in canonical form when its first component of modulus above
//! [`PHASE_THRESHOLD`] is real and positive; such a vector is then encoded
//! losslessly by real spherical angles. A full parameter set is canonical
//! when every level vector is canonical, angles sit in their stated
//! domains, and `beta[0] = 0`.
//!
//! Degenerate directions (a vanishing trailing sine product) leave some
//! downstream angles undetermined; those are pinned to 0 so every matrix
//! maps to exactly one parameter list.

use crate::cxcore::{Complex64, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::recursion::{self, FactorKind, FactorSpec};

/// Components at or below this modulus are treated as zero when choosing
/// the leading phase and when reading azimuthal angles off a vector.
pub const PHASE_THRESHOLD: f64 = 1e-12;

/// Norm gate for vectors entering gauge operations. Looser than the factor
/// gate because decomposition residue accumulates across levels.
pub const NORM_TOL: f64 = 1e-10;

/// Wraps an angle to the principal interval `[-pi, pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let w = x.rem_euclid(two_pi);
    if w >= std::f64::consts::PI {
        w - two_pi
    } else {
        w
    }
}

/// Real angles encoding a canonical unit vector of length `j`: `j-1` polar
/// angles in `[0, pi/2]` and `j-1` azimuthal phases in `[-pi, pi)`.
/// Both lists are empty for `j = 1` (the vector `(1)` carries no freedom).
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCoords {
    pub gammas: Vec<f64>,
    pub deltas: Vec<f64>,
}

impl SphericalCoords {
    pub fn new(gammas: Vec<f64>, deltas: Vec<f64>) -> Self {
        SphericalCoords { gammas, deltas }
    }

    pub fn empty() -> Self {
        SphericalCoords {
            gammas: Vec::new(),
            deltas: Vec::new(),
        }
    }

    fn is_finite(&self) -> bool {
        self.gammas.iter().chain(&self.deltas).all(|x| x.is_finite())
    }
}

/// Canonical unit vector from spherical angles, for level `j` (vector
/// length `j`). Component `k` (1-based) is
///
/// ```text
/// a_k = sin(g_1) * ... * sin(g_{k-1}) * cos(g_k) * e^{i d_{k-1}}
/// ```
///
/// with `cos(g_j)` read as 1 and no phase on the first component. Angles in
/// the canonical domain give a canonical vector; any finite angles give a
/// unit vector.
pub fn spherical_to_vector(coords: &SphericalCoords, j: usize) -> Result<ComplexVector> {
    if j == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    if coords.gammas.len() != j - 1 || coords.deltas.len() != j - 1 {
        return Err(Error::CoordCount {
            level: j,
            expected: j - 1,
            gammas: coords.gammas.len(),
            deltas: coords.deltas.len(),
        });
    }
    if !coords.is_finite() {
        return Err(Error::NonFinite {
            context: "spherical coordinates",
        });
    }
    let mut out = ComplexVector::zeros(j);
    let mut sine_product = 1.0f64;
    for k in 0..j {
        let radial = if k < j - 1 {
            sine_product * coords.gammas[k].cos()
        } else {
            sine_product
        };
        let phase = if k == 0 { 0.0 } else { coords.deltas[k - 1] };
        out.set(k, Complex64::from_polar(radial, phase));
        if k < j - 1 {
            sine_product *= coords.gammas[k].sin();
        }
    }
    Ok(out)
}

/// Spherical angles of a canonical unit vector; inverse of
/// [`spherical_to_vector`] on the canonical domain.
///
/// Polar angles come from `atan2(tail norm, |a_k|)`, which stays stable as
/// components vanish; azimuthal angles are the component arguments, read as
/// 0 below [`PHASE_THRESHOLD`]. Errors when the norm is off by more than
/// [`NORM_TOL`] or the first component is not real non-negative within
/// [`NORM_TOL`].
pub fn vector_to_spherical(a: &ComplexVector) -> Result<SphericalCoords> {
    let norm = a.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotUnitNorm {
            norm,
            tolerance: NORM_TOL,
        });
    }
    let first = a.get(0);
    if first.im.abs() > NORM_TOL || first.re < -NORM_TOL {
        return Err(Error::FirstComponentNotCanonical {
            re: first.re,
            im: first.im,
            tolerance: NORM_TOL,
        });
    }
    let j = a.len();
    let mut gammas = Vec::with_capacity(j.saturating_sub(1));
    let mut deltas = Vec::with_capacity(j.saturating_sub(1));
    // Tail norms computed back to front so each atan2 sees an exact pair.
    let mut tail = vec![0.0f64; j + 1];
    for k in (0..j).rev() {
        tail[k] = (tail[k + 1] * tail[k + 1] + a.get(k).norm_sqr()).sqrt();
    }
    for k in 0..j - 1 {
        gammas.push(tail[k + 1].atan2(a.get(k).norm()));
        let next = a.get(k + 1);
        let delta = if next.norm() > PHASE_THRESHOLD {
            next.arg()
        } else {
            0.0
        };
        deltas.push(delta);
    }
    Ok(SphericalCoords { gammas, deltas })
}

/// Strips the leading phase: returns `(a * e^{-i eta}, eta)` where `eta` is
/// the argument of the first component of modulus above [`PHASE_THRESHOLD`].
/// The returned vector has that component real and positive.
pub fn canonicalize_vector(a: &ComplexVector) -> Result<(ComplexVector, f64)> {
    let norm = a.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotUnitNorm {
            norm,
            tolerance: NORM_TOL,
        });
    }
    let lead = a
        .as_slice()
        .iter()
        .find(|z| z.norm() > PHASE_THRESHOLD)
        .ok_or(Error::ZeroVector {
            threshold: PHASE_THRESHOLD,
        })?;
    let eta = lead.arg();
    Ok((a.scale(Complex64::from_polar(1.0, -eta)), eta))
}

/// What a parameter count covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountScope {
    /// The core matrix alone: `(n-1)^2` real angles.
    Core,
    /// Core plus both phase lists with the single redundancy removed: `n^2`.
    Full,
}

/// Number of real parameters for order `n` under the given scope.
pub fn parameter_count(n: usize, scope: CountScope) -> Result<usize> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    Ok(match scope {
        CountScope::Core => (n - 1) * (n - 1),
        CountScope::Full => n * n,
    })
}

/// Angles for one level: the rotation angle and the spherical encoding of
/// the level vector. Canonical domain: `theta` in `[0, pi/2]`, polar angles
/// in `[0, pi/2]`, azimuthal in `[-pi, pi)`. Construction requires finite
/// values and consistent counts; the domain itself is a convention of
/// canonical output, not a constructor constraint, so intermediate values
/// produced by optimisation may leave it.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelParams {
    level: usize,
    theta: f64,
    coords: SphericalCoords,
}

impl LevelParams {
    pub fn new(level: usize, theta: f64, coords: SphericalCoords) -> Result<Self> {
        if level == 0 {
            return Err(Error::DimensionTooSmall { n: 0, min: 1 });
        }
        if coords.gammas.len() != level - 1 || coords.deltas.len() != level - 1 {
            return Err(Error::CoordCount {
                level,
                expected: level - 1,
                gammas: coords.gammas.len(),
                deltas: coords.deltas.len(),
            });
        }
        if !theta.is_finite() {
            return Err(Error::NonFinite {
                context: "level angle",
            });
        }
        if !coords.is_finite() {
            return Err(Error::NonFinite {
                context: "spherical coordinates",
            });
        }
        Ok(LevelParams {
            level,
            theta,
            coords,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn coords(&self) -> &SphericalCoords {
        &self.coords
    }

    pub(crate) fn theta_mut(&mut self) -> &mut f64 {
        &mut self.theta
    }

    pub(crate) fn coords_mut(&mut self) -> &mut SphericalCoords {
        &mut self.coords
    }
}

/// Complete real-angle description of an order-`n` unitary: phase lists
/// `alpha` and `beta` (length `n` each, `beta[0]` pinned to exactly 0) and
/// one [`LevelParams`] per level `1..n-1`. Total stored angle count is
/// `n^2`, matching the dimension of the unitary group.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    n: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    levels: Vec<LevelParams>,
}

impl ParameterSet {
    pub fn new(
        n: usize,
        alpha: Vec<f64>,
        beta: Vec<f64>,
        levels: Vec<LevelParams>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { n: 0, min: 1 });
        }
        if alpha.len() != n {
            return Err(Error::PhaseCount {
                name: "alpha",
                expected: n,
                got: alpha.len(),
            });
        }
        if beta.len() != n {
            return Err(Error::PhaseCount {
                name: "beta",
                expected: n,
                got: beta.len(),
            });
        }
        if alpha.iter().chain(&beta).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "phase list",
            });
        }
        if beta[0] != 0.0 {
            return Err(Error::BetaNotPinned { got: beta[0] });
        }
        if levels.len() != n - 1 {
            return Err(Error::LevelCount {
                n,
                expected: n - 1,
                got: levels.len(),
            });
        }
        for (idx, level) in levels.iter().enumerate() {
            if level.level() != idx + 1 {
                return Err(Error::LevelOutOfOrder {
                    expected: idx + 1,
                    got: level.level(),
                });
            }
        }
        Ok(ParameterSet {
            n,
            alpha,
            beta,
            levels,
        })
    }

    /// All angles zero: composes to the identity.
    pub fn zero(n: usize) -> Result<Self> {
        let levels = (1..n)
            .map(|j| {
                LevelParams::new(
                    j,
                    0.0,
                    SphericalCoords::new(vec![0.0; j - 1], vec![0.0; j - 1]),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        ParameterSet::new(n, vec![0.0; n], vec![0.0; n], levels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn levels(&self) -> &[LevelParams] {
        &self.levels
    }

    pub(crate) fn alpha_mut(&mut self) -> &mut [f64] {
        &mut self.alpha
    }

    pub(crate) fn beta_mut(&mut self) -> &mut [f64] {
        &mut self.beta
    }

    pub(crate) fn levels_mut(&mut self) -> &mut [LevelParams] {
        &mut self.levels
    }

    /// True when every angle lies in the canonical domain.
    pub fn is_canonical_domain(&self) -> bool {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let pi = std::f64::consts::PI;
        let in_phase = |x: f64| (-pi..pi).contains(&x);
        self.alpha.iter().all(|&x| in_phase(x))
            && self.beta.iter().all(|&x| in_phase(x))
            && self.beta[0] == 0.0
            && self.levels.iter().all(|lv| {
                (0.0..=half_pi).contains(&lv.theta())
                    && lv.coords().gammas.iter().all(|&g| (0.0..=half_pi).contains(&g))
                    && lv.coords().deltas.iter().all(|&d| in_phase(d))
            })
    }
}

/// Expands each level's spherical angles into an a-form factor.
pub fn levels_to_factor_specs(params: &ParameterSet) -> Result<Vec<FactorSpec>> {
    params
        .levels()
        .iter()
        .map(|lv| {
            let vector = spherical_to_vector(lv.coords(), lv.level())?;
            FactorSpec::new(lv.level(), lv.theta(), vector, FactorKind::AForm)
        })
        .collect()
}

/// Full matrix described by a parameter set:
/// `Phi(alpha) * V(levels) * Phi(beta)`.
pub fn compose_parameters(params: &ParameterSet) -> Result<ComplexMatrix> {
    let specs = levels_to_factor_specs(params)?;
    recursion::compose_full(params.alpha(), params.beta(), &specs)
}
