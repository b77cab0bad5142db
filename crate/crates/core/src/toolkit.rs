//! Sampling, verification and fitting built on top of the recursion.
//!
//! Randomness is always explicit: every entry point takes a seed and runs a
//! counter-based generator (ChaCha with 8 rounds), so identical calls give
//! identical results on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cxcore::{Complex64, ComplexMatrix, ComplexVector};
use crate::decompose::{decompose_with_tolerance, DEFAULT_INPUT_TOLERANCE};
use crate::error::{Error, Result};
use crate::gauge::{
    compose_parameters, parameter_count, CountScope, ParameterSet, SphericalCoords,
};

/// Result of a unitarity check; informational, never an error path.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryCheckReport {
    pub n: usize,
    /// Max-modulus deviation of the Gram matrix from the identity.
    pub deviation: f64,
    /// Distance of the determinant modulus from 1.
    pub det_modulus_error: f64,
    /// Gate the deviation was compared against.
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks `x` against the unitary gate and reports the measurements.
/// Non-unitary input is a normal outcome (`pass: false`), not an error;
/// only structural problems (non-square, non-finite, bad tolerance) fail.
pub fn verify(x: &ComplexMatrix, tolerance: f64) -> Result<UnitaryCheckReport> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidConfig {
            detail: format!("tolerance must be positive and finite, got {tolerance}"),
        });
    }
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
    let det = x.determinant()?;
    let det_modulus_error = (det.norm() - 1.0).abs();
    Ok(UnitaryCheckReport {
        n: x.n_rows(),
        deviation,
        det_modulus_error,
        tolerance,
        pass: deviation <= tolerance,
    })
}

/// Draws a canonical parameter set with every angle uniform over its
/// domain. Draw order is fixed: all alphas, then the free betas
/// (`beta[0]` stays 0), then per level ascending its rotation angle, its
/// polar angles, its azimuthal angles.
///
/// Uniform angles are convenient and reproducible but do not give
/// uniformly (Haar) distributed matrices; use [`haar_unitary`] for that.
pub fn sample_parameters(n: usize, rng_seed: u64) -> Result<ParameterSet> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let pi = std::f64::consts::PI;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let alpha: Vec<f64> = (0..n).map(|_| rng.random_range(-pi..pi)).collect();
    let mut beta = vec![0.0f64];
    beta.extend((1..n).map(|_| rng.random_range(-pi..pi)));
    let levels = (1..n)
        .map(|j| {
            let theta = rng.random_range(0.0..half_pi);
            let gammas: Vec<f64> = (1..j).map(|_| rng.random_range(0.0..half_pi)).collect();
            let deltas: Vec<f64> = (1..j).map(|_| rng.random_range(-pi..pi)).collect();
            crate::gauge::LevelParams::new(j, theta, SphericalCoords::new(gammas, deltas))
        })
        .collect::<Result<Vec<_>>>()?;
    ParameterSet::new(n, alpha, beta, levels)
}

/// Gram-Schmidt with a second pass, normalising in place. The implied
/// triangular factor has a positive real diagonal, which is exactly what
/// makes the Ginibre-to-unitary map measure preserving.
fn orthonormalize_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.n_rows();
    let mut cols: Vec<ComplexVector> = (0..m.n_cols()).map(|j| m.column(j)).collect();
    for k in 0..cols.len() {
        for _pass in 0..2 {
            for prev in 0..k {
                let proj = cols[prev].inner(&cols[k])?;
                let adjusted: Vec<Complex64> = (0..n)
                    .map(|i| cols[k].get(i) - proj * cols[prev].get(i))
                    .collect();
                cols[k] = ComplexVector::new(adjusted);
            }
        }
        let r = cols[k].norm();
        if r <= f64::MIN_POSITIVE.sqrt() {
            return Err(Error::NonFinite {
                context: "column normalisation",
            });
        }
        cols[k] = cols[k].scale(Complex64::new(1.0 / r, 0.0));
    }
    let mut out = ComplexMatrix::zeros(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            out.set(i, j, col.get(i));
        }
    }
    Ok(out)
}

/// Haar-distributed unitary of order `n`: a complex Gaussian matrix made
/// unitary by [`orthonormalize_columns`]. Entries are drawn row-major,
/// real part before imaginary part, each `N(0, 1)/sqrt(2)`.
pub fn haar_unitary(n: usize, rng_seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut ginibre = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            ginibre.set(i, j, Complex64::new(re * scale, im * scale));
        }
    }
    orthonormalize_columns(&ginibre)
}

/// Settings for [`fit`]. Defaults suit orders up to about 8; larger
/// problems mainly want more iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Gradient steps per start.
    pub max_iterations: usize,
    /// Initial step scale; adapted multiplicatively as steps succeed or fail.
    pub learning_rate: f64,
    /// Offset for central finite differences.
    pub gradient_step: f64,
    /// Stop once an accepted step improves the squared distance by less
    /// than this.
    pub convergence_tol: f64,
    /// Random restarts run in addition to the warm start.
    pub seed_count: usize,
    /// Seed for the restart draws.
    pub rng_seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_iterations: 400,
            learning_rate: 0.15,
            gradient_step: 1e-6,
            convergence_tol: 1e-13,
            seed_count: 4,
            rng_seed: 7,
        }
    }
}

impl FitConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig {
                detail: "max_iterations must be at least 1".into(),
            });
        }
        for (name, value) in [
            ("learning_rate", self.learning_rate),
            ("gradient_step", self.gradient_step),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig {
                    detail: format!("{name} must be positive and finite, got {value}"),
                });
            }
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol >= 0.0) {
            return Err(Error::InvalidConfig {
                detail: format!(
                    "convergence_tol must be non-negative and finite, got {}",
                    self.convergence_tol
                ),
            });
        }
        Ok(())
    }
}

/// Best parameters found by [`fit`] and the Frobenius distance they attain.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub parameters: ParameterSet,
    pub distance: f64,
}

/// Flat angle layout used by the optimiser: alphas, free betas, then per
/// level its rotation angle, polar angles, azimuthal angles.
fn pack(p: &ParameterSet) -> Vec<f64> {
    let mut x = Vec::with_capacity(parameter_count(p.n(), CountScope::Full).unwrap_or(0));
    x.extend_from_slice(p.alpha());
    x.extend_from_slice(&p.beta()[1..]);
    for lv in p.levels() {
        x.push(lv.theta());
        x.extend_from_slice(&lv.coords().gammas);
        x.extend_from_slice(&lv.coords().deltas);
    }
    x
}

fn unpack(x: &[f64], p: &mut ParameterSet) {
    let n = p.n();
    let mut pos = 0;
    p.alpha_mut().copy_from_slice(&x[..n]);
    pos += n;
    p.beta_mut()[1..].copy_from_slice(&x[pos..pos + n - 1]);
    pos += n - 1;
    for lv in p.levels_mut() {
        let j = lv.level();
        *lv.theta_mut() = x[pos];
        pos += 1;
        lv.coords_mut().gammas.copy_from_slice(&x[pos..pos + j - 1]);
        pos += j - 1;
        lv.coords_mut().deltas.copy_from_slice(&x[pos..pos + j - 1]);
        pos += j - 1;
    }
    debug_assert_eq!(pos, x.len());
}

struct Objective<'a> {
    target: &'a ComplexMatrix,
    scratch: ParameterSet,
}

impl Objective<'_> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        unpack(x, &mut self.scratch);
        let composed = compose_parameters(&self.scratch)?;
        Ok(composed.frobenius_distance(self.target)?.powi(2))
    }
}

fn gradient(obj: &mut Objective, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut g = vec![0.0f64; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let f_plus = obj.eval(&probe)?;
        probe[i] = x[i] - h;
        let f_minus = obj.eval(&probe)?;
        probe[i] = x[i];
        g[i] = (f_plus - f_minus) / (2.0 * h);
    }
    Ok(g)
}

/// Gradient descent with backtracking from one start; returns the best
/// point seen and its squared distance.
fn descend(
    obj: &mut Objective,
    start: Vec<f64>,
    config: &FitConfig,
) -> Result<(Vec<f64>, f64)> {
    let mut x = start;
    let mut fx = obj.eval(&x)?;
    let mut rate = config.learning_rate;
    for _ in 0..config.max_iterations {
        let g = gradient(obj, &x, config.gradient_step)?;
        if g.iter().all(|&gi| gi == 0.0) {
            break;
        }
        let mut step = rate;
        let mut accepted = None;
        for _ in 0..60 {
            let cand: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let fc = obj.eval(&cand)?;
            if fc < fx {
                accepted = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc)) = accepted else { break };
        let delta = fx - fc;
        x = cand;
        fx = fc;
        rate = (step * 2.0).min(config.learning_rate * 16.0);
        if delta < config.convergence_tol {
            break;
        }
    }
    Ok((x, fx))
}

/// Squared distance below which further starts cannot observably improve.
const FIT_FLOOR: f64 = 1e-22;

/// Finds the canonical parameters whose composition is closest to `target`
/// in Frobenius distance.
///
/// Starts from the decomposition of `target` itself when `target` is
/// numerically unitary, otherwise from the decomposition of its
/// orthonormalised columns; then runs `seed_count` random restarts. All
/// starts share one deterministic seed stream. The best squared distance
/// wins, ties going to the earliest start; remaining starts are skipped
/// once a start lands at rounding scale, which no later start could beat
/// observably. The winner is re-canonicalised through decompose/compose;
/// if that worsens the distance the raw winner is returned instead.
pub fn fit(target: &ComplexMatrix, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    if !target.is_square() {
        return Err(Error::NotSquare {
            rows: target.n_rows(),
            cols: target.n_cols(),
        });
    }
    if let Some((row, col)) = target.first_non_finite() {
        return Err(Error::NonFiniteEntry { row, col });
    }
    let n = target.n_rows();
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }

    let warm = warm_start(target);
    let mut obj = Objective {
        target,
        scratch: ParameterSet::zero(n)?,
    };
    let mut seed_rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for start_idx in 0..=config.seed_count {
        let start = if start_idx == 0 {
            pack(&warm)
        } else {
            pack(&sample_parameters(n, seed_rng.random())?)
        };
        let (x, f) = descend(&mut obj, start, config)?;
        let better = match &best {
            None => true,
            Some((_, bf)) => f < *bf,
        };
        if better {
            best = Some((x, f));
        }
        if best.as_ref().map(|(_, bf)| *bf <= FIT_FLOOR).unwrap_or(false) {
            break;
        }
    }
    let (best_x, best_f) = best.expect("at least the warm start ran");

    let mut winner = ParameterSet::zero(n)?;
    unpack(&best_x, &mut winner);
    let composed = compose_parameters(&winner)?;
    if let Ok(canon) = decompose_with_tolerance(&composed, 1e-6) {
        let f_canon = compose_parameters(&canon)?
            .frobenius_distance(target)?
            .powi(2);
        if f_canon <= best_f {
            return Ok(FitResult {
                parameters: canon,
                distance: f_canon.sqrt(),
            });
        }
    }
    Ok(FitResult {
        parameters: winner,
        distance: best_f.sqrt(),
    })
}

/// Initial guess for [`fit`]: decompose the target when it is numerically
/// unitary, else project it onto the unitary group first; fall back to all
/// zero angles if even the projection is degenerate.
fn warm_start(target: &ComplexMatrix) -> ParameterSet {
    let n = target.n_rows();
    let zero = ParameterSet::zero(n).expect("n >= 1 checked by caller");
    let deviation = match target.unitarity_deviation() {
        Ok(d) => d,
        Err(_) => return zero,
    };
    if deviation <= 1e-10 {
        if let Ok(p) = decompose_with_tolerance(target, DEFAULT_INPUT_TOLERANCE) {
            return p;
        }
    }
    if let Ok(projected) = orthonormalize_columns(target) {
        if let Ok(p) = decompose_with_tolerance(&projected, 1e-6) {
            return p;
        }
    }
    zero
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn verify_reports_identity_as_clean() {
        let report = verify(&ComplexMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(report.n, 3);
        assert_eq!(report.deviation, 0.0);
        assert_eq!(report.det_modulus_error, 0.0);
        assert!(report.pass);
    }

    #[test]
    fn verify_measures_a_stretched_diagonal() {
        // diag(1, 1.01): worst Gram deviation 1.01^2 - 1, det error 0.01.
        let m = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(1.01, 0.0)]);
        let report = verify(&m, 1e-8).unwrap();
        assert!((report.deviation - 0.0201).abs() < 1e-15);
        assert!((report.det_modulus_error - 0.01).abs() < 1e-15);
        assert!(!report.pass);
        assert!(verify(&m, 0.05).unwrap().pass);
    }

    #[test]
    fn verify_rejects_structural_problems_only() {
        assert!(matches!(
            verify(&ComplexMatrix::zeros(2, 3), 1e-8),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            verify(&ComplexMatrix::identity(2), 0.0),
            Err(Error::InvalidConfig { .. })
        ));
        let mut bad = ComplexMatrix::identity(2);
        bad.set(0, 0, c(f64::INFINITY, 0.0));
        assert!(matches!(
            verify(&bad, 1e-8),
            Err(Error::NonFiniteEntry { row: 0, col: 0 })
        ));
        // Wildly non-unitary input still reports instead of failing.
        let zero = ComplexMatrix::zeros(2, 2);
        let report = verify(&zero, 1e-8).unwrap();
        assert!(!report.pass);
        assert_eq!(report.deviation, 1.0);
    }

    #[test]
    fn sample_parameters_is_deterministic_and_canonical() {
        let a = sample_parameters(5, 42).unwrap();
        let b = sample_parameters(5, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.is_canonical_domain());
        let other = sample_parameters(5, 43).unwrap();
        assert_ne!(a, other);
        let x = compose_parameters(&a).unwrap();
        assert!(x.unitarity_deviation().unwrap() < 1e-13);
    }

    #[test]
    fn haar_unitary_is_deterministic_and_unitary() {
        let a = haar_unitary(6, 9).unwrap();
        let b = haar_unitary(6, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, haar_unitary(6, 10).unwrap());
        assert!(a.unitarity_deviation().unwrap() < 1e-13);
        assert!((a.determinant().unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_a_composed_target_through_the_warm_start() {
        let p = sample_parameters(3, 11).unwrap();
        let target = compose_parameters(&p).unwrap();
        let config = FitConfig::default();
        let result = fit(&target, &config).unwrap();
        assert!(result.distance < 1e-10, "distance {}", result.distance);
        assert!(result.parameters.is_canonical_domain());
    }

    #[test]
    fn fit_improves_a_perturbed_target() {
        let p = sample_parameters(2, 3).unwrap();
        let clean = compose_parameters(&p).unwrap();
        let mut noisy = clean.clone();
        noisy.set(0, 0, noisy.get(0, 0) + c(0.02, -0.01));
        noisy.set(1, 0, noisy.get(1, 0) + c(-0.015, 0.0));
        let config = FitConfig {
            seed_count: 2,
            ..FitConfig::default()
        };
        let result = fit(&noisy, &config).unwrap();
        // The best unitary cannot be further than the perturbation itself.
        let perturbation = clean.frobenius_distance(&noisy).unwrap();
        assert!(result.distance <= perturbation + 1e-9);
    }

    #[test]
    fn fit_validates_inputs() {
        let bad_config = FitConfig {
            learning_rate: 0.0,
            ..FitConfig::default()
        };
        assert!(matches!(
            fit(&ComplexMatrix::identity(2), &bad_config),
            Err(Error::InvalidConfig { .. })
        ));
        assert!(matches!(
            fit(&ComplexMatrix::zeros(2, 3), &FitConfig::default()),
            Err(Error::NotSquare { .. })
        ));
        let mut bad = ComplexMatrix::identity(2);
        bad.set(1, 1, c(f64::NAN, 0.0));
        assert!(matches!(
            fit(&bad, &FitConfig::default()),
            Err(Error::NonFiniteEntry { row: 1, col: 1 })
        ));
    }

    #[test]
    fn fit_is_deterministic() {
        let target = haar_unitary(3, 21).unwrap();
        let config = FitConfig::default();
        let a = fit(&target, &config).unwrap();
        let b = fit(&target, &config).unwrap();
        assert_eq!(a.parameters, b.parameters);
        assert_eq!(a.distance, b.distance);
    }
}
