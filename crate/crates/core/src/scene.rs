//! Narrowband far-field scene: one signal of interest plus independent
//! interferers in spatially white noise, snapshot generation and covariance
//! estimation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_part, CMatrix, CVector};
use crate::manifold::{steering_vector, ArrayGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interferer {
    pub doa_deg: f64,
    /// Linear power σ_j².
    pub power: f64,
}

/// Source directions and powers. All powers are linear; noise power is per
/// sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    soi_doa_deg: f64,
    soi_power: f64,
    interferers: Vec<Interferer>,
    noise_power: f64,
    num_snapshots: usize,
}

fn check_doa(name: &'static str, doa: f64) -> Result<()> {
    if doa.is_finite() && (-90.0..=90.0).contains(&doa) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("DOA {doa}° outside [-90°, 90°]"),
        })
    }
}

fn check_power(name: &'static str, p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("power must be positive and finite, got {p}"),
        })
    }
}

impl Scene {
    pub fn new(
        soi_doa_deg: f64,
        soi_power: f64,
        interferers: Vec<Interferer>,
        noise_power: f64,
        num_snapshots: usize,
    ) -> Result<Self> {
        check_doa("soi_doa_deg", soi_doa_deg)?;
        check_power("soi_power", soi_power)?;
        for i in &interferers {
            check_doa("interferer.doa_deg", i.doa_deg)?;
            check_power("interferer.power", i.power)?;
        }
        check_power("noise_power", noise_power)?;
        if num_snapshots == 0 {
            return Err(Error::InvalidParameter {
                name: "num_snapshots",
                reason: "need at least one snapshot".into(),
            });
        }
        Ok(Self {
            soi_doa_deg,
            soi_power,
            interferers,
            noise_power,
            num_snapshots,
        })
    }

    pub fn soi_doa_deg(&self) -> f64 {
        self.soi_doa_deg
    }

    pub fn soi_power(&self) -> f64 {
        self.soi_power
    }

    pub fn interferers(&self) -> &[Interferer] {
        &self.interferers
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn num_snapshots(&self) -> usize {
        self.num_snapshots
    }

    /// Same sources with the SOI moved to another direction.
    pub fn with_soi_doa(&self, soi_doa_deg: f64) -> Result<Self> {
        check_doa("soi_doa_deg", soi_doa_deg)?;
        Ok(Self {
            soi_doa_deg,
            ..self.clone()
        })
    }

    pub fn with_num_snapshots(&self, num_snapshots: usize) -> Result<Self> {
        Self::new(
            self.soi_doa_deg,
            self.soi_power,
            self.interferers.clone(),
            self.noise_power,
            num_snapshots,
        )
    }
}

/// Received data `x(k)` for `k = 0..K`, one column per snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotBatch {
    samples: CMatrix,
    scene: Scene,
    seed: u64,
}

impl SnapshotBatch {
    /// Wraps externally produced samples (M×K).
    pub fn from_samples(samples: CMatrix, scene: Scene, seed: u64) -> Result<Self> {
        if samples.ncols() != scene.num_snapshots() {
            return Err(Error::DimensionMismatch {
                expected: scene.num_snapshots(),
                found: samples.ncols(),
            });
        }
        Ok(Self {
            samples,
            scene,
            seed,
        })
    }

    pub fn samples(&self) -> &CMatrix {
        &self.samples
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn num_sensors(&self) -> usize {
        self.samples.nrows()
    }

    pub fn num_snapshots(&self) -> usize {
        self.samples.ncols()
    }
}

/// Zero-mean circular complex Gaussian with variance `power`.
fn circular_gaussian<R: Rng>(rng: &mut R, power: f64) -> Complex64 {
    let scale = (power / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// Draws `x(k) = s(k)a(θ0) + Σ_j β_j(k)a(θ_j) + n(k)`.
///
/// Draw order is fixed (SOI waveform, then each interferer waveform, then
/// noise column by column), so a seed identifies a batch exactly.
pub fn generate_snapshots(
    scene: &Scene,
    geometry: &ArrayGeometry,
    seed: u64,
) -> Result<SnapshotBatch> {
    let m = geometry.num_sensors();
    let k = scene.num_snapshots();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = CMatrix::zeros(m, k);

    let sources = std::iter::once((scene.soi_doa_deg, scene.soi_power)).chain(
        scene
            .interferers
            .iter()
            .map(|i| (i.doa_deg, i.power)),
    );
    for (doa, power) in sources {
        let a = steering_vector(geometry, doa)?;
        for col in 0..k {
            let amp = circular_gaussian(&mut rng, power);
            for row in 0..m {
                samples[(row, col)] += a[row] * amp;
            }
        }
    }
    for col in 0..k {
        for row in 0..m {
            samples[(row, col)] += circular_gaussian(&mut rng, scene.noise_power);
        }
    }
    Ok(SnapshotBatch {
        samples,
        scene: scene.clone(),
        seed,
    })
}

/// Hermitian covariance estimate or model, with any diagonal loading already
/// applied.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    matrix: CMatrix,
    loading: f64,
}

impl CovarianceMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn loading(&self) -> f64 {
        self.loading
    }

    pub fn num_sensors(&self) -> usize {
        self.matrix.nrows()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Adds `delta·I` on top of whatever loading is already present.
    pub fn with_loading(&self, delta: f64) -> Result<Self> {
        check_loading(delta)?;
        let mut matrix = self.matrix.clone();
        for i in 0..matrix.nrows() {
            matrix[(i, i)] += Complex64::new(delta, 0.0);
        }
        Ok(Self {
            matrix,
            loading: self.loading + delta,
        })
    }

    /// Loading of `factor · trace(R) / M`.
    pub fn trace_scaled_loading(&self, factor: f64) -> f64 {
        factor * self.trace() / self.num_sensors() as f64
    }
}

fn check_loading(delta: f64) -> Result<()> {
    if delta.is_finite() && delta >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "loading",
            reason: format!("must be nonnegative and finite, got {delta}"),
        })
    }
}

/// `R = (1/K) Σ_k x(k)x(k)^H + loading·I`.
pub fn sample_covariance(batch: &SnapshotBatch, loading: f64) -> Result<CovarianceMatrix> {
    check_loading(loading)?;
    let x = &batch.samples;
    let k = x.ncols();
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "num_snapshots",
            reason: "need at least one snapshot".into(),
        });
    }
    let unloaded = CovarianceMatrix {
        matrix: hermitian_part(&(x * x.adjoint() / Complex64::new(k as f64, 0.0))),
        loading: 0.0,
    };
    if loading > 0.0 {
        unloaded.with_loading(loading)
    } else {
        Ok(unloaded)
    }
}

/// `σ_s² a(θ0)a(θ0)^H + Σ_j σ_j² a(θ_j)a(θ_j)^H + σ_n² I`.
pub fn analytic_covariance(scene: &Scene, geometry: &ArrayGeometry) -> Result<CovarianceMatrix> {
    let m = geometry.num_sensors();
    let mut matrix = interference_plus_noise(scene, geometry)?;
    let a0 = steering_vector(geometry, scene.soi_doa_deg)?;
    matrix += &a0 * a0.adjoint() * Complex64::new(scene.soi_power, 0.0);
    debug_assert_eq!(matrix.nrows(), m);
    Ok(CovarianceMatrix {
        matrix: hermitian_part(&matrix),
        loading: 0.0,
    })
}

/// `Σ_j σ_j² a(θ_j)a(θ_j)^H + σ_n² I`, the SINR denominator kernel.
pub fn interference_plus_noise(scene: &Scene, geometry: &ArrayGeometry) -> Result<CMatrix> {
    let m = geometry.num_sensors();
    let mut matrix = CMatrix::identity(m, m) * Complex64::new(scene.noise_power, 0.0);
    for i in &scene.interferers {
        let a: CVector = steering_vector(geometry, i.doa_deg)?;
        matrix += &a * a.adjoint() * Complex64::new(i.power, 0.0);
    }
    Ok(hermitian_part(&matrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_residual;

    fn paper_scene(k: usize) -> Scene {
        Scene::new(
            0.0,
            10.0,
            vec![
                Interferer { doa_deg: -30.0, power: 100.0 },
                Interferer { doa_deg: 30.0, power: 100.0 },
                Interferer { doa_deg: 70.0, power: 10_000.0 },
            ],
            1.0,
            k,
        )
        .unwrap()
    }

    fn geom() -> ArrayGeometry {
        ArrayGeometry::half_wavelength(8).unwrap()
    }

    fn rel_frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn scene_validation() {
        assert!(Scene::new(95.0, 1.0, vec![], 1.0, 10).is_err());
        assert!(Scene::new(0.0, 0.0, vec![], 1.0, 10).is_err());
        assert!(Scene::new(0.0, 1.0, vec![], -1.0, 10).is_err());
        assert!(Scene::new(0.0, 1.0, vec![], 1.0, 0).is_err());
        let bad = Interferer { doa_deg: 10.0, power: 0.0 };
        assert!(Scene::new(0.0, 1.0, vec![bad], 1.0, 10).is_err());
    }

    #[test]
    fn paper_batch_shape() {
        let batch = generate_snapshots(&paper_scene(100), &geom(), 3).unwrap();
        assert_eq!(batch.samples().shape(), (8, 100));
        assert_eq!(batch.seed(), 3);
    }

    #[test]
    fn same_seed_same_batch() {
        let a = generate_snapshots(&paper_scene(100), &geom(), 42).unwrap();
        let b = generate_snapshots(&paper_scene(100), &geom(), 42).unwrap();
        let c = generate_snapshots(&paper_scene(100), &geom(), 43).unwrap();
        assert_eq!(a.samples().as_slice(), b.samples().as_slice());
        assert_ne!(a.samples().as_slice(), c.samples().as_slice());
    }

    #[test]
    fn single_snapshot_outer_product() {
        let scene = Scene::new(0.0, 1.0, vec![], 1.0, 1).unwrap();
        let x = CMatrix::from_column_slice(2, 1, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        let batch = SnapshotBatch::from_samples(x, scene, 0).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        let expected = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert_eq!(r.matrix(), &expected);
    }

    #[test]
    fn loading_shifts_eigenvalues() {
        let batch = generate_snapshots(&paper_scene(20), &geom(), 9).unwrap();
        let r0 = sample_covariance(&batch, 0.0).unwrap();
        let r1 = sample_covariance(&batch, 0.75).unwrap();
        assert_eq!(r1.loading(), 0.75);
        for (e0, e1) in r0.eigenvalues().iter().zip(r1.eigenvalues()) {
            assert!((e1 - e0 - 0.75).abs() < 1e-8 * r0.trace(), "{e0} {e1}");
        }
        assert!(sample_covariance(&batch, -1.0).is_err());
    }

    #[test]
    fn produced_covariances_are_hermitian_psd() {
        for seed in 0..5 {
            let batch = generate_snapshots(&paper_scene(4), &geom(), seed).unwrap();
            let r = sample_covariance(&batch, 0.0).unwrap();
            assert_eq!(hermitian_residual(r.matrix()), 0.0);
            let ev = r.eigenvalues();
            assert!(ev[0] >= -1e-10 * r.matrix().norm());
            let loaded = sample_covariance(&batch, 1e-3).unwrap();
            assert!(loaded.eigenvalues()[0] > 0.0);
        }
    }

    #[test]
    fn analytic_covariance_identities() {
        let g = geom();
        // Vanishing SOI, no interferers, unit noise: identity.
        let quiet = Scene::new(0.0, 1e-300, vec![], 1.0, 1).unwrap();
        let r = analytic_covariance(&quiet, &g).unwrap();
        assert!((r.matrix() - CMatrix::identity(8, 8)).norm() < 1e-12);

        // Rank-one plus identity: {pM + 1, 1, ...}.
        let p = 3.5;
        let single = Scene::new(20.0, p, vec![], 1.0, 1).unwrap();
        let ev = analytic_covariance(&single, &g).unwrap().eigenvalues();
        assert!((ev[7] - (p * 8.0 + 1.0)).abs() < 1e-10);
        for e in &ev[..7] {
            assert!((e - 1.0).abs() < 1e-10);
        }

        // Trace identity M·(σ_s² + Σσ_j² + σ_n²) = 8·10211.
        let r = analytic_covariance(&paper_scene(100), &g).unwrap();
        assert!((r.trace() - 8.0 * 10_211.0).abs() < 1e-8);
        assert_eq!(hermitian_residual(r.matrix()), 0.0);
    }

    #[test]
    fn single_source_sample_covariance_converges() {
        let g = geom();
        let scene = Scene::new(10.0, 1.0, vec![], 1e-9, 20_000).unwrap();
        let batch = generate_snapshots(&scene, &g, 5).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        let a0 = steering_vector(&g, 10.0).unwrap();
        let rank_one = &a0 * a0.adjoint();
        assert!(rel_frobenius(r.matrix(), &rank_one) < 0.03);
    }

    #[test]
    fn paper_scene_estimate_is_reasonable_at_k100() {
        let g = geom();
        let truth = analytic_covariance(&paper_scene(100), &g).unwrap();
        let mut errors: Vec<f64> = (0..50)
            .map(|seed| {
                let b = generate_snapshots(&paper_scene(100), &g, seed).unwrap();
                rel_frobenius(sample_covariance(&b, 0.0).unwrap().matrix(), truth.matrix())
            })
            .collect();
        errors.sort_by(|a, b| a.total_cmp(b));
        assert!(errors[25] < 0.5, "median relative error {}", errors[25]);
    }

    #[test]
    fn law_of_large_numbers() {
        let g = geom();
        let scene = paper_scene(100_000);
        let truth = analytic_covariance(&scene, &g).unwrap();
        let batch = generate_snapshots(&scene, &g, 11).unwrap();
        let r = sample_covariance(&batch, 0.0).unwrap();
        assert!(rel_frobenius(r.matrix(), truth.matrix()) < 0.05);
    }

    #[test]
    fn snapshots_are_circular() {
        let g = geom();
        let scene = paper_scene(50_000);
        let batch = generate_snapshots(&scene, &g, 2).unwrap();
        let x = batch.samples();
        let k = x.ncols() as f64;
        let power = analytic_covariance(&scene, &g).unwrap().trace() / 8.0;
        for row in 0..8 {
            let mean: Complex64 = x.row(row).iter().sum::<Complex64>() / k;
            let pseudo: Complex64 = x.row(row).iter().map(|z| z * z).sum::<Complex64>() / k;
            assert!(mean.norm() < 0.05 * power.sqrt(), "mean {mean}");
            assert!(pseudo.norm() < 0.05 * power, "pseudo-covariance {pseudo}");
        }
    }
}
