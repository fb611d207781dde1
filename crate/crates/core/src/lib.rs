//! Capon (MVDR) and MSPR-Capon adaptive beamforming for uniform linear
//! arrays.
//!
//! The MSPR-Capon beamformer adds a mainlobe-to-sidelobe power ratio
//! regularizer to the Capon criterion and is solved by a Lagrangian
//! fixed-point iteration. The crate also carries the scene model, SINR and
//! beam-pattern metrics and a reproducible Monte Carlo harness.

pub mod beamformers;
pub mod error;
pub mod linalg;
pub mod manifold;
pub mod metrics;
pub mod scene;

pub use beamformers::{
    beamformer_output, capon_weights, lagrangian_gradient, mspr_objective, mspr_solve, mspr_step,
    MsprConfig, MsprSolveReport, WeightVector,
};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use manifold::{
    build_manifold, partition_manifold, steering_vector, AngleGrid, ArrayGeometry, Manifold,
    ManifoldPartition,
};
pub use metrics::{
    beam_pattern, run_campaign, sinr_db, BeamPattern, CampaignConfig, CampaignResult, Sinr,
};
pub use scene::{
    analytic_covariance, generate_snapshots, sample_covariance, CovarianceMatrix, Interferer, Scene,
    SnapshotBatch,
};
