//! Beam patterns, output SINR and the Monte Carlo campaign harness.

mod campaign;

pub use campaign::{
    run_campaign, single_trial_patterns, trial_seed, CampaignConfig, CampaignResult, MethodSummary, TrialOutcome,
    TrialRecord,
};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_form, CVector};
use crate::manifold::{steering_vector, AngleGrid, ArrayGeometry, Manifold};
use crate::scene::{interference_plus_noise, Scene};

/// Floor applied to every dB value that would otherwise be −∞.
pub const DB_FLOOR: f64 = -300.0;

fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        (10.0 * ratio.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Normalized power pattern `|w^H a(α_n)|²` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamPattern {
    grid: AngleGrid,
    gains_db: Vec<f64>,
    raw_gains: Vec<f64>,
}

impl BeamPattern {
    /// Normalizes linear gains to a 0 dB peak.
    pub fn from_raw_gains(grid: AngleGrid, raw_gains: Vec<f64>) -> Result<Self> {
        if raw_gains.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: raw_gains.len(),
            });
        }
        let peak = raw_gains.iter().cloned().fold(0.0, f64::max);
        let gains_db = raw_gains
            .iter()
            .map(|&g| if g == peak && peak > 0.0 { 0.0 } else { to_db(g / peak) })
            .collect();
        Ok(Self {
            grid,
            gains_db,
            raw_gains,
        })
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn angles_deg(&self) -> &[f64] {
        self.grid.angles_deg()
    }

    pub fn gains_db(&self) -> &[f64] {
        &self.gains_db
    }

    pub fn raw_gains(&self) -> &[f64] {
        &self.raw_gains
    }

    pub fn gain_db_at(&self, angle_deg: f64) -> Result<f64> {
        Ok(self.gains_db[self.grid.index_of(angle_deg)?])
    }

    /// Angle of the peak.
    pub fn peak_deg(&self) -> f64 {
        self.extreme_deg(|a, b| a > b)
    }

    /// Angle of the global minimum.
    pub fn null_deg(&self) -> f64 {
        self.extreme_deg(|a, b| a < b)
    }

    fn extreme_deg(&self, better: impl Fn(f64, f64) -> bool) -> f64 {
        let mut best = 0;
        for (i, &g) in self.gains_db.iter().enumerate() {
            if better(g, self.gains_db[best]) {
                best = i;
            }
        }
        self.angles_deg()[best]
    }

    /// Mean of the normalized linear gain over grid points farther than
    /// `half_width_deg` from `center_deg`, in dB.
    pub fn mean_gain_db_outside(&self, center_deg: f64, half_width_deg: f64) -> f64 {
        let peak = self.raw_gains.iter().cloned().fold(0.0, f64::max);
        let (sum, count) = self
            .angles_deg()
            .iter()
            .zip(&self.raw_gains)
            .filter(|(a, _)| (*a - center_deg).abs() > half_width_deg)
            .fold((0.0, 0usize), |(s, n), (_, g)| (s + g / peak, n + 1));
        to_db(sum / count as f64)
    }
}

/// Linear gains `|w^H a(α_n)|²` for every manifold column.
pub fn raw_gains(w: &CVector, manifold: &Manifold) -> Result<Vec<f64>> {
    let a = manifold.matrix();
    if w.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: w.len(),
        });
    }
    Ok(a.column_iter().map(|col| w.dotc(&col).norm_sqr()).collect())
}

pub fn beam_pattern(w: &CVector, manifold: &Manifold) -> Result<BeamPattern> {
    BeamPattern::from_raw_gains(manifold.grid().clone(), raw_gains(w, manifold)?)
}

/// Output SINR in dB. `clamped` is set when the value hit [`DB_FLOOR`],
/// which happens when `w` is orthogonal to the SOI steering vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinr {
    pub db: f64,
    pub clamped: bool,
}

/// `σ_s² |w^H a(θ0)|² / w^H (Σ_j σ_j² a(θ_j)a(θ_j)^H + σ_n² I) w` using the
/// true scene directions and powers.
pub fn sinr_db(w: &CVector, scene: &Scene, geometry: &ArrayGeometry) -> Result<Sinr> {
    if w.len() != geometry.num_sensors() {
        return Err(Error::DimensionMismatch {
            expected: geometry.num_sensors(),
            found: w.len(),
        });
    }
    let a0 = steering_vector(geometry, scene.soi_doa_deg())?;
    let numerator = scene.soi_power() * w.dotc(&a0).norm_sqr();
    let kernel = interference_plus_noise(scene, geometry)?;
    let denominator = hermitian_form(w, &kernel)?;
    if denominator.is_nan() || denominator <= 0.0 {
        return Err(Error::ZeroDenominator { value: denominator });
    }
    let ratio = numerator / denominator;
    let db = to_db(ratio);
    Ok(Sinr {
        db,
        clamped: db <= DB_FLOOR,
    })
}

/// Mean and sample standard deviation (zero for a single value).
pub(crate) fn mean_and_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
