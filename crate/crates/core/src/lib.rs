//! Pedestrian trajectory analytics.
//!
//! The crate turns tracker output into world-coordinate trajectories, rejects
//! clips recorded with a moving camera, computes crowd-dynamics statistics and
//! distributions, and compares candidate trajectory sets against a reference.
//!
//! Module map:
//!
//! * [`geometry`] and [`trajectory`]: points, boxes, homography projection,
//!   per-track kinematics.
//! * [`ingest`]: MOT / ETH-UCY / homography / PGM readers and track assembly.
//! * [`camfilter`]: Shi-Tomasi corners, pyramidal Lucas-Kanade flow and the
//!   static/moving camera classifier.
//! * [`dynamics`]: stationary fraction, speeds, passing distance, Voronoi
//!   densities, fundamental diagram and the distribution estimators.
//! * [`compare`]: scene reports, closest-to-reference tables and histogram
//!   distances.
//! * [`synth`]: deterministic synthetic scenes and frame sequences used for
//!   fixtures and self-checks.

pub mod camfilter;
pub mod compare;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod synth;
pub mod trajectory;

pub use error::{Error, Result};
pub use geometry::{BoundingBox, PixelPoint, SceneCalibration, WorldPoint};
pub use trajectory::{Trajectory, TrajectorySet};

/// Version of the JSON interchange schema written by this crate.
pub const SCHEMA_VERSION: u32 = 1;
