//! Steering vectors, the sampled array manifold and its mainlobe/sidelobe
//! partition for a uniform linear array.
//!
//! Angles are in degrees everywhere on the public surface, measured from
//! broadside, and converted to radians once inside [`steering_vector`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gram, CMatrix, CVector};

/// Tolerance used when matching an angle against grid points, in degrees.
const GRID_MATCH_TOL_DEG: f64 = 1e-9;

/// Uniform linear array: sensor count and spacing in wavelengths (d/λ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    num_sensors: usize,
    spacing_wavelengths: f64,
}

impl ArrayGeometry {
    pub fn new(num_sensors: usize, spacing_wavelengths: f64) -> Result<Self> {
        if num_sensors < 2 {
            return Err(Error::InvalidParameter {
                name: "num_sensors",
                reason: format!("need at least 2 sensors, got {num_sensors}"),
            });
        }
        if !(spacing_wavelengths.is_finite() && spacing_wavelengths > 0.0) {
            return Err(Error::InvalidParameter {
                name: "spacing_wavelengths",
                reason: format!("must be positive and finite, got {spacing_wavelengths}"),
            });
        }
        Ok(Self {
            num_sensors,
            spacing_wavelengths,
        })
    }

    /// `num_sensors` sensors at half-wavelength spacing.
    pub fn half_wavelength(num_sensors: usize) -> Result<Self> {
        Self::new(num_sensors, 0.5)
    }

    pub fn num_sensors(&self) -> usize {
        self.num_sensors
    }

    pub fn spacing_wavelengths(&self) -> f64 {
        self.spacing_wavelengths
    }
}

/// Uniformly spaced, strictly increasing angles inside [-90°, 90°].
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    angles_deg: Vec<f64>,
    step_deg: f64,
}

impl AngleGrid {
    /// The full grid from -90° to +90° inclusive. `180 / step_deg` must be a
    /// whole number.
    pub fn full(step_deg: f64) -> Result<Self> {
        if !(step_deg.is_finite() && step_deg > 0.0) {
            return Err(Error::InvalidParameter {
                name: "step_deg",
                reason: format!("must be positive and finite, got {step_deg}"),
            });
        }
        let intervals = 180.0 / step_deg;
        let n = intervals.round();
        if (intervals - n).abs() > 1e-9 || n < 1.0 {
            return Err(Error::InvalidParameter {
                name: "step_deg",
                reason: format!("{step_deg}° does not divide 180° evenly"),
            });
        }
        let n = n as usize;
        let mut angles_deg: Vec<f64> = (0..=n).map(|i| -90.0 + i as f64 * step_deg).collect();
        angles_deg[n] = 90.0;
        Ok(Self {
            angles_deg,
            step_deg,
        })
    }

    /// An arbitrary uniformly spaced sub-grid. A single angle is allowed, in
    /// which case `step_deg` is recorded as given.
    pub fn from_angles(angles_deg: Vec<f64>, step_deg: f64) -> Result<Self> {
        if angles_deg.is_empty() {
            return Err(Error::InvalidParameter {
                name: "angles_deg",
                reason: "grid is empty".into(),
            });
        }
        if !(step_deg.is_finite() && step_deg > 0.0) {
            return Err(Error::InvalidParameter {
                name: "step_deg",
                reason: format!("must be positive and finite, got {step_deg}"),
            });
        }
        for &a in &angles_deg {
            check_angle(a)?;
        }
        for pair in angles_deg.windows(2) {
            if ((pair[1] - pair[0]) - step_deg).abs() > GRID_MATCH_TOL_DEG {
                return Err(Error::InvalidParameter {
                    name: "angles_deg",
                    reason: format!(
                        "not uniformly spaced by {step_deg}° between {}° and {}°",
                        pair[0], pair[1]
                    ),
                });
            }
        }
        Ok(Self {
            angles_deg,
            step_deg,
        })
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    pub fn step_deg(&self) -> f64 {
        self.step_deg
    }

    pub fn len(&self) -> usize {
        self.angles_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles_deg.is_empty()
    }

    /// Index of the grid point equal to `angle_deg`. Off-grid angles are an
    /// error; there is no snapping.
    pub fn index_of(&self, angle_deg: f64) -> Result<usize> {
        let first = self.angles_deg[0];
        let guess = ((angle_deg - first) / self.step_deg).round();
        let idx = guess.clamp(0.0, (self.len() - 1) as f64) as usize;
        let nearest_deg = self.angles_deg[idx];
        if (nearest_deg - angle_deg).abs() <= GRID_MATCH_TOL_DEG {
            Ok(idx)
        } else {
            Err(Error::OffGrid {
                angle_deg,
                nearest_deg,
            })
        }
    }
}

fn check_angle(angle_deg: f64) -> Result<()> {
    if angle_deg.is_finite() && (-90.0..=90.0).contains(&angle_deg) {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange { angle_deg })
    }
}

/// `a(θ)`: element `m` is `exp(j·m·2π·(d/λ)·sin θ)`, element 0 is exactly 1.
pub fn steering_vector(geometry: &ArrayGeometry, angle_deg: f64) -> Result<CVector> {
    check_angle(angle_deg)?;
    let phase = 2.0 * PI * geometry.spacing_wavelengths * angle_deg.to_radians().sin();
    Ok(CVector::from_fn(geometry.num_sensors, |m, _| {
        if m == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, m as f64 * phase)
        }
    }))
}

/// Steering matrix sampled on an angle grid; column `n` is `a(α_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifold {
    geometry: ArrayGeometry,
    grid: AngleGrid,
    matrix: CMatrix,
}

impl Manifold {
    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    /// The M×N steering matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

pub fn build_manifold(geometry: &ArrayGeometry, grid: &AngleGrid) -> Result<Manifold> {
    let m = geometry.num_sensors();
    let mut matrix = CMatrix::zeros(m, grid.len());
    for (n, &angle) in grid.angles_deg().iter().enumerate() {
        matrix.set_column(n, &steering_vector(geometry, angle)?);
    }
    Ok(Manifold {
        geometry: *geometry,
        grid: grid.clone(),
        matrix,
    })
}

/// Mainlobe (`A_M`) and sidelobe (`A_S`) split of a manifold around the
/// steered direction, with their Gram matrices `A_M A_M^H` and `A_S A_S^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPartition {
    mainlobe: CMatrix,
    sidelobe: CMatrix,
    mainlobe_gram: CMatrix,
    sidelobe_gram: CMatrix,
    steering: CVector,
    soi_index: usize,
    half_width_bins: usize,
}

impl ManifoldPartition {
    /// `A_M`, M×(2b+1).
    pub fn mainlobe(&self) -> &CMatrix {
        &self.mainlobe
    }

    /// `A_S`, M×(N−2b−1), grid order.
    pub fn sidelobe(&self) -> &CMatrix {
        &self.sidelobe
    }

    pub fn mainlobe_gram(&self) -> &CMatrix {
        &self.mainlobe_gram
    }

    pub fn sidelobe_gram(&self) -> &CMatrix {
        &self.sidelobe_gram
    }

    /// The steering vector of the partition center, `a(θ0)`.
    pub fn steering(&self) -> &CVector {
        &self.steering
    }

    pub fn soi_index(&self) -> usize {
        self.soi_index
    }

    pub fn half_width_bins(&self) -> usize {
        self.half_width_bins
    }

    pub fn num_sensors(&self) -> usize {
        self.steering.len()
    }
}

pub fn partition_manifold(
    manifold: &Manifold,
    soi_angle_deg: f64,
    half_width_bins: usize,
) -> Result<ManifoldPartition> {
    check_angle(soi_angle_deg)?;
    let soi_index = manifold.grid.index_of(soi_angle_deg)?;
    let n = manifold.grid.len();
    let lo = soi_index as i64 - half_width_bins as i64;
    let hi = soi_index as i64 + half_width_bins as i64;
    if lo < 0 || hi > n as i64 - 1 {
        return Err(Error::WindowOutOfBounds {
            lo,
            hi,
            last: n - 1,
        });
    }
    let (lo, hi) = (lo as usize, hi as usize);
    let a = &manifold.matrix;
    let mainlobe = a.columns(lo, hi - lo + 1).into_owned();
    let side_idx: Vec<usize> = (0..lo).chain(hi + 1..n).collect();
    let sidelobe = a.select_columns(side_idx.iter());
    Ok(ManifoldPartition {
        mainlobe_gram: gram(&mainlobe),
        sidelobe_gram: gram(&sidelobe),
        steering: a.column(soi_index).into_owned(),
        mainlobe,
        sidelobe,
        soi_index,
        half_width_bins,
    })
}
