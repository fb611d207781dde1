//! Capon (MVDR) and MSPR-Capon beamformers.
//!
//! The MSPR-Capon weights minimize
//!
//! ```text
//! w^H R w + γ [ (‖w^H A_M‖² − 1)² + ‖w^H A_S‖² ]   s.t.  w^H a0 = 1
//! ```
//!
//! The stationarity condition of the Lagrangian is `B(w) w = −μ a0` with
//!
//! ```text
//! B(w) = R + γ (2 w^H A_M A_M^H w − 2) A_M A_M^H + γ A_S A_S^H
//! ```
//!
//! which is solved by the fixed-point map `w ← B(w)⁻¹a0 / (a0^H B(w)⁻¹a0)`.
//! Every iterate satisfies the constraint exactly up to round-off because
//! the normalization is `a0^H B⁻¹ a0` and `B` is Hermitian.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_hermitian, hermitian_form, inner, solve_hermitian, CMatrix, CVector};
use crate::manifold::ManifoldPartition;
use crate::scene::SnapshotBatch;

/// Tolerance on `|w^H a0 − 1|` for a [`WeightVector`].
pub const CONSTRAINT_TOL: f64 = 1e-8;

/// Beamformer weights together with the steering vector they are
/// distortionless towards.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: CVector,
    steering: CVector,
}

impl WeightVector {
    /// Fails unless `|w^H a0 − 1| < 1e−8`.
    pub fn new(weights: CVector, steering: CVector) -> Result<Self> {
        if weights.len() != steering.len() {
            return Err(Error::DimensionMismatch {
                expected: steering.len(),
                found: weights.len(),
            });
        }
        let residual = constraint_residual(&weights, &steering);
        if residual.is_nan() || residual >= CONSTRAINT_TOL {
            return Err(Error::ConstraintViolated { residual });
        }
        Ok(Self { weights, steering })
    }

    pub fn weights(&self) -> &CVector {
        &self.weights
    }

    pub fn steering(&self) -> &CVector {
        &self.steering
    }

    /// `|w^H a0 − 1|`.
    pub fn constraint_residual(&self) -> f64 {
        constraint_residual(&self.weights, &self.steering)
    }

    pub fn into_weights(self) -> CVector {
        self.weights
    }
}

fn constraint_residual(w: &CVector, a0: &CVector) -> f64 {
    (inner(w, a0) - Complex64::new(1.0, 0.0)).norm()
}

fn check_square(r: &CMatrix, m: usize) -> Result<()> {
    if r.nrows() != m || r.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: if r.nrows() != m { r.nrows() } else { r.ncols() },
        });
    }
    Ok(())
}

fn check_len(v: &CVector, m: usize) -> Result<()> {
    if v.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: v.len(),
        });
    }
    Ok(())
}

/// Distortionless solution of `min w^H B w` for Hermitian `B`:
/// `w = B⁻¹a0 / (a0^H B⁻¹a0)`.
fn distortionless_solve(b: &CMatrix, a0: &CVector) -> Result<CVector> {
    let x = solve_hermitian(b, a0)?;
    let denom = inner(a0, &x);
    if denom.norm() == 0.0 || !denom.re.is_finite() {
        return Err(Error::Singular { iteration: None });
    }
    // Dividing by a0^H x (not its conjugate) makes w^H a0 = 1 exactly.
    Ok(x / denom)
}

/// `w = R⁻¹a0 / (a0^H R⁻¹a0)`, the minimizer of `w^H R w` subject to
/// `w^H a0 = 1`.
pub fn capon_weights(r: &CMatrix, a0: &CVector) -> Result<WeightVector> {
    check_square(r, a0.len())?;
    ensure_hermitian(r)?;
    let w = distortionless_solve(r, a0)?;
    WeightVector::new(w, a0.clone())
}

/// Settings for the MSPR fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MsprConfig {
    /// Weight γ of the mainlobe/sidelobe regularizer.
    pub gamma: f64,
    pub max_iterations: usize,
    /// Stop once `‖w(i+1) − w(i)‖ / ‖w(i+1)‖` drops below this.
    pub rel_tolerance: f64,
    /// Mixing factor in (0, 1]; 1 is the plain fixed-point map.
    pub relaxation: f64,
}

impl Default for MsprConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            max_iterations: 200,
            rel_tolerance: 1e-8,
            relaxation: 1.0,
        }
    }
}

impl MsprConfig {
    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("must be nonnegative and finite, got {}", self.gamma),
            });
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iterations",
                reason: "must be at least 1".into(),
            });
        }
        if !(self.rel_tolerance.is_finite() && self.rel_tolerance > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rel_tolerance",
                reason: format!("must be positive, got {}", self.rel_tolerance),
            });
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "relaxation",
                reason: format!("must lie in (0, 1], got {}", self.relaxation),
            });
        }
        Ok(())
    }
}

fn check_partition(w: &CVector, r: &CMatrix, partition: &ManifoldPartition) -> Result<()> {
    let m = partition.num_sensors();
    check_len(w, m)?;
    check_square(r, m)
}

/// `w^H R w + γ[(‖w^H A_M‖² − 1)² + ‖w^H A_S‖²]`.
pub fn mspr_objective(
    w: &CVector,
    r: &CMatrix,
    partition: &ManifoldPartition,
    gamma: f64,
) -> Result<f64> {
    check_partition(w, r, partition)?;
    let output_power = hermitian_form(w, r)?;
    let mainlobe = hermitian_form(w, partition.mainlobe_gram())?;
    let sidelobe = hermitian_form(w, partition.sidelobe_gram())?;
    Ok(output_power + gamma * ((mainlobe - 1.0).powi(2) + sidelobe))
}

/// `∂f/∂w^H = Rw + γ(w^H A_M A_M^H w − 1)(2 A_M A_M^H w) + γ A_S A_S^H w + μ a0`
/// with `a0` the partition's steering vector.
pub fn lagrangian_gradient(
    w: &CVector,
    mu: Complex64,
    r: &CMatrix,
    partition: &ManifoldPartition,
    gamma: f64,
) -> Result<CVector> {
    check_partition(w, r, partition)?;
    let pm_w = partition.mainlobe_gram() * w;
    let mainlobe = crate::linalg::real_part_checked(inner(w, &pm_w))?;
    let ps_w = partition.sidelobe_gram() * w;
    let g = Complex64::new(gamma, 0.0);
    Ok(r * w
        + pm_w * Complex64::new(2.0 * gamma * (mainlobe - 1.0), 0.0)
        + ps_w * g
        + partition.steering() * mu)
}

/// `B(w) = R + γ(2 w^H A_M A_M^H w − 2) A_M A_M^H + γ A_S A_S^H`.
pub fn regularized_matrix(
    w: &CVector,
    r: &CMatrix,
    partition: &ManifoldPartition,
    gamma: f64,
) -> Result<CMatrix> {
    check_partition(w, r, partition)?;
    let mainlobe = hermitian_form(w, partition.mainlobe_gram())?;
    let coeff = gamma * (2.0 * mainlobe - 2.0);
    Ok(r + partition.mainlobe_gram() * Complex64::new(coeff, 0.0)
        + partition.sidelobe_gram() * Complex64::new(gamma, 0.0))
}

fn step_at(
    w: &CVector,
    r: &CMatrix,
    partition: &ManifoldPartition,
    gamma: f64,
    a0: &CVector,
    iteration: Option<usize>,
) -> Result<CVector> {
    check_len(a0, partition.num_sensors())?;
    let b = regularized_matrix(w, r, partition, gamma)?;
    distortionless_solve(&b, a0).map_err(|e| match e {
        Error::Singular { .. } => Error::Singular { iteration },
        other => other,
    })
}

/// One application of the fixed-point map,
/// `w(i+1) = B(w_i)⁻¹a0 / (a0^H B(w_i)⁻¹a0)`.
pub fn mspr_step(
    w: &CVector,
    r: &CMatrix,
    partition: &ManifoldPartition,
    gamma: f64,
    a0: &CVector,
) -> Result<CVector> {
    step_at(w, r, partition, gamma, a0, None)
}

/// Lagrange multiplier implied by `w`: `μ = −1 / (a0^H B(w)⁻¹ a0)`.
pub fn implied_multiplier(
    w: &CVector,
    r: &CMatrix,
    partition: &ManifoldPartition,
    gamma: f64,
    a0: &CVector,
) -> Result<Complex64> {
    let b = regularized_matrix(w, r, partition, gamma)?;
    let x = solve_hermitian(&b, a0)?;
    Ok(-Complex64::new(1.0, 0.0) / inner(a0, &x))
}

/// Outcome of [`mspr_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct MsprSolveReport {
    pub weights: WeightVector,
    pub iterations_used: usize,
    pub converged: bool,
    /// `|w^H a0 − 1|` at the returned weights.
    pub constraint_residual: f64,
    /// `‖∂f/∂w^H‖` at the returned weights with the implied `μ`.
    pub stationarity_residual: f64,
    pub mu: Complex64,
    /// `‖w(i+1) − w(i)‖` for every step taken.
    pub iterate_deltas: Vec<f64>,
}

/// Iterates the fixed-point map from `w_init` (Capon weights by default)
/// until the relative iterate change drops below `config.rel_tolerance`.
///
/// Running out of iterations is not an error: the report comes back with
/// `converged = false` and the visited iterate of lowest objective.
pub fn mspr_solve(
    r: &CMatrix,
    partition: &ManifoldPartition,
    config: &MsprConfig,
    a0: &CVector,
    w_init: Option<&WeightVector>,
) -> Result<MsprSolveReport> {
    config.validate()?;
    check_square(r, partition.num_sensors())?;
    check_len(a0, partition.num_sensors())?;
    ensure_hermitian(r)?;

    let mut w = match w_init {
        Some(init) => {
            check_len(init.weights(), a0.len())?;
            init.weights().clone()
        }
        None => capon_weights(r, a0)?.into_weights(),
    };
    let gamma = config.gamma;
    let mut best = (mspr_objective(&w, r, partition, gamma)?, w.clone());
    let mut deltas = Vec::new();
    let mut converged = false;

    for i in 1..=config.max_iterations {
        let stepped = step_at(&w, r, partition, gamma, a0, Some(i))?;
        let next = if config.relaxation < 1.0 {
            &w * Complex64::new(1.0 - config.relaxation, 0.0)
                + stepped * Complex64::new(config.relaxation, 0.0)
        } else {
            stepped
        };
        let delta = (&next - &w).norm();
        deltas.push(delta);
        w = next;
        let objective = mspr_objective(&w, r, partition, gamma)?;
        if objective < best.0 {
            best = (objective, w.clone());
        }
        if delta < config.rel_tolerance * w.norm() {
            converged = true;
            break;
        }
    }

    let final_w = if converged { w } else { best.1 };
    let mu = implied_multiplier(&final_w, r, partition, gamma, a0)?;
    let stationarity_residual = lagrangian_gradient(&final_w, mu, r, partition, gamma)?.norm();
    let constraint_residual = constraint_residual(&final_w, a0);
    Ok(MsprSolveReport {
        weights: WeightVector::new(final_w, a0.clone())?,
        iterations_used: deltas.len(),
        converged,
        constraint_residual,
        stationarity_residual,
        mu,
        iterate_deltas: deltas,
    })
}

/// `y(k) = w^H x(k)` for every snapshot.
pub fn beamformer_output(w: &WeightVector, batch: &SnapshotBatch) -> Result<CVector> {
    let x = batch.samples();
    check_len(w.weights(), x.nrows())?;
    Ok(CVector::from_iterator(
        x.ncols(),
        x.column_iter().map(|col| w.weights().dotc(&col)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{build_manifold, partition_manifold, steering_vector, AngleGrid, ArrayGeometry};
    use crate::scene::{analytic_covariance, generate_snapshots, sample_covariance, Interferer, Scene};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn paper_scene() -> Scene {
        Scene::new(
            0.0,
            10.0,
            vec![
                Interferer { doa_deg: -30.0, power: 100.0 },
                Interferer { doa_deg: 30.0, power: 100.0 },
                Interferer { doa_deg: 70.0, power: 10_000.0 },
            ],
            1.0,
            100,
        )
        .unwrap()
    }

    fn paper_partition(geometry: &ArrayGeometry) -> ManifoldPartition {
        let man = build_manifold(geometry, &AngleGrid::full(1.0).unwrap()).unwrap();
        partition_manifold(&man, 0.0, 12).unwrap()
    }

    #[test]
    fn capon_with_identity_covariance() {
        let r = CMatrix::identity(8, 8);
        let a0 = CVector::from_element(8, c(1.0));
        let w = capon_weights(&r, &a0).unwrap();
        for z in w.weights().iter() {
            assert!((z - c(0.125)).norm() < 1e-15);
        }
        let power = hermitian_form(w.weights(), &r).unwrap();
        assert!((power - 0.125).abs() < 1e-15);
    }

    #[test]
    fn capon_with_diagonal_covariance() {
        let r = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(2.0)]));
        let a0 = CVector::from_vec(vec![c(1.0), c(1.0)]);
        let w = capon_weights(&r, &a0).unwrap();
        assert!((w.weights()[0] - c(2.0 / 3.0)).norm() < 1e-15);
        assert!((w.weights()[1] - c(1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn capon_rejects_bad_covariances() {
        let a0 = CVector::from_element(3, c(1.0));
        let v = CVector::from_vec(vec![c(1.0), c(2.0), c(-1.0)]);
        let singular = &v * v.adjoint();
        assert!(matches!(
            capon_weights(&singular, &a0),
            Err(Error::Singular { .. })
        ));
        let mut skew = CMatrix::identity(3, 3);
        skew[(0, 1)] = c(0.5);
        assert!(matches!(
            capon_weights(&skew, &a0),
            Err(Error::NotHermitian { .. })
        ));
        assert!(capon_weights(&CMatrix::identity(4, 4), &a0).is_err());
    }

    #[test]
    fn capon_nulls_paper_interferers() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let r = analytic_covariance(&paper_scene(), &g).unwrap();
        let a0 = steering_vector(&g, 0.0).unwrap();
        let w = capon_weights(r.matrix(), &a0).unwrap();
        for doa in [-30.0, 30.0, 70.0] {
            let gain = inner(w.weights(), &steering_vector(&g, doa).unwrap()).norm();
            assert!(gain <= 1e-2, "gain {gain} at {doa}°");
        }
    }

    #[test]
    fn objective_without_regularizer_is_output_power() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let r = analytic_covariance(&paper_scene(), &g).unwrap();
        let w = capon_weights(r.matrix(), p.steering()).unwrap();
        let f = mspr_objective(w.weights(), r.matrix(), &p, 0.0).unwrap();
        let power = hermitian_form(w.weights(), r.matrix()).unwrap();
        assert_eq!(f, power);
    }

    #[test]
    fn objective_with_vanishing_regularizer() {
        // Single-column mainlobe, no sidelobe energy reachable: use a grid of
        // exactly one angle so A_S is empty and ‖w^H A_M‖² = |w^H a0|² = 1.
        let g = ArrayGeometry::half_wavelength(4).unwrap();
        let grid = AngleGrid::from_angles(vec![10.0], 1.0).unwrap();
        let p = partition_manifold(&build_manifold(&g, &grid).unwrap(), 10.0, 0).unwrap();
        assert_eq!(p.sidelobe().ncols(), 0);
        let r = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(2.0), c(3.0), c(4.0)]));
        let w = capon_weights(&r, p.steering()).unwrap();
        let f = mspr_objective(w.weights(), &r, &p, 5.0).unwrap();
        let power = hermitian_form(w.weights(), &r).unwrap();
        assert!((f - power).abs() < 1e-14 * power.max(1.0));
    }

    #[test]
    fn gradient_without_regularizer_or_multiplier() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let r = analytic_covariance(&paper_scene(), &g).unwrap();
        let w = CVector::from_fn(8, |i, _| Complex64::new(i as f64 * 0.1, 0.3 - i as f64 * 0.05));
        let grad = lagrangian_gradient(&w, c(0.0), r.matrix(), &p, 0.0).unwrap();
        assert_eq!(grad, r.matrix() * &w);
    }

    #[test]
    fn zero_gamma_step_is_capon() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let batch = generate_snapshots(&paper_scene(), &g, 7).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        let capon = capon_weights(r.matrix(), p.steering()).unwrap();
        let start = CVector::from_element(8, c(0.125));
        let stepped = mspr_step(&start, r.matrix(), &p, 0.0, p.steering()).unwrap();
        assert!((&stepped - capon.weights()).norm() < 1e-12 * capon.weights().norm());
    }

    #[test]
    fn zero_gamma_solve_converges_in_one_step() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let batch = generate_snapshots(&paper_scene(), &g, 8).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        let cfg = MsprConfig::default().with_gamma(0.0);
        let report = mspr_solve(r.matrix(), &p, &cfg, p.steering(), None).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterations_used, 1);
        let capon = capon_weights(r.matrix(), p.steering()).unwrap();
        assert!((report.weights.weights() - capon.weights()).norm() < 1e-8);
    }

    #[test]
    fn step_preserves_constraint_from_any_start() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let r = analytic_covariance(&paper_scene(), &g).unwrap();
        let start = CVector::from_fn(8, |i, _| Complex64::new(1.0 + i as f64, -0.5 * i as f64));
        let w = mspr_step(&start, r.matrix(), &p, 1.0, p.steering()).unwrap();
        assert!(constraint_residual(&w, p.steering()) < 1e-10);
    }

    #[test]
    fn solve_report_on_sample_covariance() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let batch = generate_snapshots(&paper_scene(), &g, 21).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        let report = mspr_solve(r.matrix(), &p, &MsprConfig::default(), p.steering(), None).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterate_deltas.len(), report.iterations_used);
        let last = *report.iterate_deltas.last().unwrap();
        assert!(last / report.weights.weights().norm() < 1e-8);
        assert!(report.constraint_residual < 1e-10);
        assert!(report.stationarity_residual < 1e-6 * r.matrix().norm());
        assert!(report.mu.im.abs() < 1e-10 * report.mu.re.abs());

        // Re-applying the map at the fixed point leaves it in place.
        let again = mspr_step(report.weights.weights(), r.matrix(), &p, 1.0, p.steering()).unwrap();
        let w = report.weights.weights();
        assert!((&again - w).norm() / w.norm() < 1e-8);

        let capon = capon_weights(r.matrix(), p.steering()).unwrap();
        let f_capon = mspr_objective(capon.weights(), r.matrix(), &p, 1.0).unwrap();
        let f_mspr = mspr_objective(w, r.matrix(), &p, 1.0).unwrap();
        assert!(f_mspr < f_capon, "{f_mspr} !< {f_capon}");
    }

    #[test]
    fn relaxed_iteration_reaches_same_fixed_point() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let batch = generate_snapshots(&paper_scene(), &g, 4).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        let plain = mspr_solve(r.matrix(), &p, &MsprConfig::default(), p.steering(), None).unwrap();
        let cfg = MsprConfig {
            relaxation: 0.5,
            max_iterations: 500,
            ..MsprConfig::default()
        };
        let damped = mspr_solve(r.matrix(), &p, &cfg, p.steering(), None).unwrap();
        assert!(damped.converged);
        assert!(damped.iterations_used > plain.iterations_used);
        let a = plain.weights.weights();
        assert!((damped.weights.weights() - a).norm() / a.norm() < 1e-6);
    }

    #[test]
    fn iteration_budget_exhaustion_is_reported() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let batch = generate_snapshots(&paper_scene(), &g, 4).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        let cfg = MsprConfig {
            max_iterations: 1,
            ..MsprConfig::default()
        };
        let report = mspr_solve(r.matrix(), &p, &cfg, p.steering(), None).unwrap();
        assert!(!report.converged);
        assert_eq!(report.iterations_used, 1);
        assert!(report.constraint_residual < 1e-10);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for cfg in [
            MsprConfig { gamma: -1.0, ..MsprConfig::default() },
            MsprConfig { max_iterations: 0, ..MsprConfig::default() },
            MsprConfig { rel_tolerance: 0.0, ..MsprConfig::default() },
            MsprConfig { relaxation: 0.0, ..MsprConfig::default() },
            MsprConfig { relaxation: 1.5, ..MsprConfig::default() },
        ] {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn singular_step_carries_iteration_index() {
        // K < M without loading and γ = 0 leaves B = R singular.
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let p = paper_partition(&g);
        let scene = paper_scene().with_num_snapshots(2).unwrap();
        let batch = generate_snapshots(&scene, &g, 1).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        let init = WeightVector::new(CVector::from_element(8, c(0.125)), p.steering().clone()).unwrap();
        let cfg = MsprConfig::default().with_gamma(0.0);
        let err = mspr_solve(r.matrix(), &p, &cfg, p.steering(), Some(&init)).unwrap_err();
        assert_eq!(err, Error::Singular { iteration: Some(1) });
    }

    #[test]
    fn output_of_first_sensor_selector() {
        let g = ArrayGeometry::half_wavelength(4).unwrap();
        let batch = generate_snapshots(&paper_scene(), &g, 3).unwrap();
        let a0 = steering_vector(&g, 0.0).unwrap();
        let mut e1 = CVector::zeros(4);
        e1[0] = c(1.0);
        let w = WeightVector::new(e1, a0).unwrap();
        let y = beamformer_output(&w, &batch).unwrap();
        for k in 0..batch.num_snapshots() {
            assert_eq!(y[k], batch.samples()[(0, k)]);
        }
    }

    #[test]
    fn matched_filter_recovers_noiseless_waveform() {
        let g = ArrayGeometry::half_wavelength(8).unwrap();
        let scene = Scene::new(20.0, 1.0, vec![], 1.0, 16).unwrap();
        let a0 = steering_vector(&g, 20.0).unwrap();
        let s: Vec<Complex64> = (0..16).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let x = CMatrix::from_fn(8, 16, |m, k| a0[m] * s[k]);
        let batch = SnapshotBatch::from_samples(x, scene, 0).unwrap();
        let w = WeightVector::new(&a0 / c(8.0), a0.clone()).unwrap();
        let y = beamformer_output(&w, &batch).unwrap();
        for k in 0..16 {
            assert!((y[k] - s[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn output_dimension_mismatch() {
        let g = ArrayGeometry::half_wavelength(4).unwrap();
        let batch = generate_snapshots(&paper_scene(), &g, 3).unwrap();
        let a0 = CVector::from_element(8, c(1.0));
        let w = WeightVector::new(&a0 / c(8.0), a0.clone()).unwrap();
        assert!(matches!(
            beamformer_output(&w, &batch),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weight_vector_enforces_constraint() {
        let a0 = CVector::from_element(4, c(1.0));
        assert!(matches!(
            WeightVector::new(CVector::from_element(4, c(1.0)), a0),
            Err(Error::ConstraintViolated { .. })
        ));
    }
}
