//! Primary direction of motion and the longitudinal velocity distribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::{TrajectorySet, Velocity};

use super::histogram::{GaussianFit, Histogram1D};
use super::stats::is_stationary;
use super::{all_velocities, DynamicsConfig};

/// Unit vector in the ground plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub x: f64,
    pub y: f64,
}

impl Axis {
    pub fn project(&self, v: &Velocity) -> f64 {
        v.vx * self.x + v.vy * self.y
    }

    pub fn flipped(&self) -> Axis {
        Axis { x: -self.x, y: -self.y }
    }
}

/// Velocity samples of every non-stationary pedestrian with at least two samples.
fn mover_velocities(set: &TrajectorySet, cfg: &DynamicsConfig) -> Vec<Velocity> {
    set.trajectories()
        .iter()
        .zip(all_velocities(set, cfg))
        .filter(|(t, _)| !is_stationary(t, cfg))
        .filter_map(|(_, v)| v)
        .flatten()
        .collect()
}

/// Principal axis of the pooled mover velocities.
///
/// Uses the uncentered second-moment matrix so that a crowd walking one way
/// at a uniform speed still yields its walking direction. The sign is chosen
/// with nonnegative x, or nonnegative y when x vanishes.
pub fn primary_axis(set: &TrajectorySet, cfg: &DynamicsConfig) -> Result<Axis> {
    axis_of(&mover_velocities(set, cfg))
}

fn axis_of(velocities: &[Velocity]) -> Result<Axis> {
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for v in velocities {
        sxx += v.vx * v.vx;
        sxy += v.vx * v.vy;
        syy += v.vy * v.vy;
    }
    if !(sxx + syy > 0.0) {
        return Err(Error::NoMovers);
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (mut x, mut y) = (theta.cos(), theta.sin());
    if x.abs() < 1e-12 {
        x = 0.0;
        y = y.abs();
    } else if x < 0.0 {
        x = -x;
        y = -y;
    }
    Ok(Axis { x, y })
}

/// Signed speeds of movers along `axis`.
pub fn longitudinal_samples(set: &TrajectorySet, cfg: &DynamicsConfig, axis: Axis) -> Vec<f64> {
    mover_velocities(set, cfg).iter().map(|v| axis.project(v)).collect()
}

/// Histogram of mover speeds along the primary axis plus a normal fit.
pub fn longitudinal_velocity_distribution(
    set: &TrajectorySet,
    cfg: &DynamicsConfig,
) -> Result<(Histogram1D, GaussianFit)> {
    let axis = primary_axis(set, cfg)?;
    let samples = longitudinal_samples(set, cfg, axis);
    let fit = GaussianFit::from_samples(&samples).ok_or(Error::NoMovers)?;
    let mut hist = Histogram1D::new(-cfg.velocity_hist_max_mps, cfg.velocity_hist_max_mps, cfg.velocity_hist_bins);
    samples.iter().for_each(|&s| hist.add(s));
    Ok((hist, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Trajectory;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    fn cfg() -> DynamicsConfig {
        DynamicsConfig::default()
    }

    fn walker(id: i64, n: u64, step: (f64, f64)) -> Trajectory {
        let pts: Vec<_> = (0..n).map(|k| (k, step.0 * k as f64, step.1 * k as f64)).collect();
        Trajectory::from_points(id, &pts).unwrap()
    }

    #[test]
    fn axis_along_x_for_bidirectional_flow() {
        let set = TrajectorySet::new("t", 1.0, vec![walker(0, 5, (1.0, 0.0)), walker(1, 5, (-1.3, 0.0))]).unwrap();
        assert_eq!(primary_axis(&set, &cfg()).unwrap(), Axis { x: 1.0, y: 0.0 });
    }

    #[test]
    fn axis_sign_rule_for_negative_y() {
        let set = TrajectorySet::new("t", 1.0, vec![walker(0, 5, (0.0, -1.0))]).unwrap();
        assert_eq!(primary_axis(&set, &cfg()).unwrap(), Axis { x: 0.0, y: 1.0 });
    }

    #[test]
    fn only_stationary_pedestrians_means_no_movers() {
        let set = TrajectorySet::new("t", 1.0, vec![walker(0, 5, (0.01, 0.0))]).unwrap();
        assert_eq!(primary_axis(&set, &cfg()), Err(Error::NoMovers));
        assert!(longitudinal_velocity_distribution(&set, &cfg()).is_err());
    }

    #[test]
    fn axis_matches_closed_form_eigenvector() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        // covariance with dominant direction at 30 degrees
        let (major, minor, angle) = (1.2f64, 0.3f64, 30f64.to_radians());
        let na = Normal::new(0.0, major).unwrap();
        let nb = Normal::new(0.0, minor).unwrap();
        let vs: Vec<Velocity> = (0..20_000)
            .map(|_| {
                let (a, b) = (na.sample(&mut rng), nb.sample(&mut rng));
                Velocity::new(a * angle.cos() - b * angle.sin(), a * angle.sin() + b * angle.cos())
            })
            .collect();
        let got = axis_of(&vs).unwrap();
        let m = vs.iter().fold(nalgebra::Matrix2::zeros(), |m, v| {
            m + nalgebra::Matrix2::new(v.vx * v.vx, v.vx * v.vy, v.vx * v.vy, v.vy * v.vy)
        });
        let eig = m.symmetric_eigen();
        let k = if eig.eigenvalues[0] > eig.eigenvalues[1] { 0 } else { 1 };
        let e = eig.eigenvectors.column(k);
        let cos = (got.x * e[0] + got.y * e[1]).abs();
        assert!(cos.min(1.0).acos() < 1f64.to_radians());
        assert!((got.y.atan2(got.x) - angle).abs() < 2f64.to_radians());
    }

    #[test]
    fn constant_speed_fit_and_histogram() {
        let set = TrajectorySet::new("t", 10.0, vec![walker(0, 20, (0.125, 0.0))]).unwrap();
        let (h, fit) = longitudinal_velocity_distribution(&set, &cfg()).unwrap();
        assert!((fit.mean - 1.25).abs() < 1e-12);
        assert!(fit.std < 1e-12);
        assert_eq!(h.total(), 20.0);
        assert_eq!(h.counts[h.bin_of(1.25)], 20.0);
    }

    #[test]
    fn symmetric_bidirectional_flow_has_zero_mean() {
        let set = TrajectorySet::new("t", 1.0, vec![walker(0, 6, (1.0, 0.0)), walker(1, 6, (-1.0, 0.0))]).unwrap();
        let (_, fit) = longitudinal_velocity_distribution(&set, &cfg()).unwrap();
        assert_eq!(fit.mean, 0.0);
        assert_eq!(fit.std, 1.0);
    }

    #[test]
    fn flipped_axis_mirrors_histogram() {
        let set = crate::synth::random_scene(&crate::synth::SceneSpec::default(), 12);
        let axis = primary_axis(&set, &cfg()).unwrap();
        let fwd = longitudinal_samples(&set, &cfg(), axis);
        let bwd = longitudinal_samples(&set, &cfg(), axis.flipped());
        assert!(fwd.iter().zip(&bwd).all(|(a, b)| *a == -*b));
        let mut hf = Histogram1D::new(-3.0, 3.0, 40);
        let mut hb = hf.clone();
        fwd.iter().for_each(|&s| hf.add(s));
        bwd.iter().for_each(|&s| hb.add(s));
        let mirrored: Vec<f64> = hb.counts.iter().rev().cloned().collect();
        assert_eq!(hf.counts, mirrored);
    }
}
