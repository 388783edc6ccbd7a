//! Crowd-dynamics statistics and distributions over a [`TrajectorySet`].

mod density;
mod histogram;
mod motion;
mod neighbors;
mod stats;
mod voronoi;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::{smoothed_velocity_series, Trajectory, TrajectorySet, Velocity};

pub use density::{fundamental_diagram, scene_boundary, FundamentalDiagram};
pub use histogram::{GaussianFit, Histogram1D, Histogram2D, PolarHistogram};
pub use motion::{longitudinal_samples, longitudinal_velocity_distribution, primary_axis, Axis};
pub use neighbors::{nearest_neighbor_polar, position_heatmap, Extent};
pub use stats::{average_speed, mean_distance_traveled, passing_distance, stationary_fraction, is_stationary};
pub use voronoi::{separate_coincident, signed_area, voronoi_cells, ConvexPolygon, VoronoiCell, COINCIDENT_OFFSET_M};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    /// Start-to-finish displacement below which a pedestrian counts as stationary.
    pub stationary_thresh_m: f64,
    /// Pairs must come closer than this to count as a passing encounter.
    pub passing_radius_m: f64,
    /// Passing pairs must be mutual nearest neighbors at closest approach.
    pub passing_require_mutual_nn: bool,
    /// Passing pairs must start farther apart than their closest approach.
    pub passing_require_approach: bool,
    pub heatmap_bin_m: f64,
    pub fd_density_bins: usize,
    pub polar_r_max_m: f64,
    pub polar_r_bins: usize,
    pub polar_theta_bins: usize,
    pub velocity_hist_bins: usize,
    /// Longitudinal histogram spans `[-max, max]`; faster samples land in the outer bins.
    pub velocity_hist_max_mps: f64,
    /// Headings are undefined below this speed; such samples are skipped.
    pub min_speed_for_heading_mps: f64,
    /// Odd moving-average window applied to velocity series; 1 disables smoothing.
    pub velocity_smoothing_window: usize,
    /// Outward dilation of the observed-position hull used to bound Voronoi cells.
    pub boundary_margin_m: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            stationary_thresh_m: 0.2,
            passing_radius_m: 10.0,
            passing_require_mutual_nn: true,
            passing_require_approach: true,
            heatmap_bin_m: 0.5,
            fd_density_bins: 12,
            polar_r_max_m: 5.0,
            polar_r_bins: 20,
            polar_theta_bins: 36,
            velocity_hist_bins: 40,
            velocity_hist_max_mps: 3.0,
            min_speed_for_heading_mps: 0.1,
            velocity_smoothing_window: 1,
            boundary_margin_m: 1.0,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("stationary_thresh_m", self.stationary_thresh_m),
            ("passing_radius_m", self.passing_radius_m),
            ("heatmap_bin_m", self.heatmap_bin_m),
            ("polar_r_max_m", self.polar_r_max_m),
            ("velocity_hist_max_mps", self.velocity_hist_max_mps),
            ("min_speed_for_heading_mps", self.min_speed_for_heading_mps),
            ("boundary_margin_m", self.boundary_margin_m),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
        }
        let counts = [
            ("fd_density_bins", self.fd_density_bins),
            ("polar_r_bins", self.polar_r_bins),
            ("polar_theta_bins", self.polar_theta_bins),
            ("velocity_hist_bins", self.velocity_hist_bins),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
        }
        if self.velocity_smoothing_window.is_multiple_of(2) {
            return Err(Error::InvalidConfig("velocity_smoothing_window must be odd".into()));
        }
        Ok(())
    }
}

/// Velocity at every sample of every trajectory; `None` for single-sample tracks.
pub(crate) fn all_velocities(set: &TrajectorySet, cfg: &DynamicsConfig) -> Vec<Option<Vec<Velocity>>> {
    set.trajectories()
        .iter()
        .map(|t| trajectory_velocities(t, set.fps(), cfg))
        .collect()
}

fn trajectory_velocities(t: &Trajectory, fps: f64, cfg: &DynamicsConfig) -> Option<Vec<Velocity>> {
    smoothed_velocity_series(t, fps, cfg.velocity_smoothing_window)
        .ok()
        .map(|v| v.into_iter().map(|(_, v)| v).collect())
}
