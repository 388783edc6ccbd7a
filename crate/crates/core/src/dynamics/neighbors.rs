//! Spatial distributions: nearest-neighbor polar histogram and position heatmap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::TrajectorySet;

use super::histogram::{Histogram2D, PolarHistogram};
use super::{all_velocities, DynamicsConfig};

/// Position of each pedestrian's nearest neighbor in the pedestrian's own
/// heading frame, pooled over all frames with two or more people.
///
/// Samples whose speed is below `min_speed_for_heading_mps` are skipped.
/// Nearest-neighbor ties go to the earlier trajectory.
pub fn nearest_neighbor_polar(set: &TrajectorySet, cfg: &DynamicsConfig) -> Result<PolarHistogram> {
    let trajs = set.trajectories();
    let velocities = all_velocities(set, cfg);
    let mut hist = PolarHistogram::new(cfg.polar_r_max_m, cfg.polar_r_bins, cfg.polar_theta_bins);
    let mut crowded_frames = 0usize;
    for visible in set.frame_index().values().filter(|v| v.len() >= 2) {
        crowded_frames += 1;
        for &(ti, si) in visible {
            let Some(v) = velocities[ti].as_ref().map(|v| v[si]) else {
                continue;
            };
            let speed = v.speed();
            if speed < cfg.min_speed_for_heading_mps {
                continue;
            }
            let p = trajs[ti].samples()[si].position;
            let nearest = visible
                .iter()
                .filter(|&&(tj, _)| tj != ti)
                .map(|&(tj, sj)| trajs[tj].samples()[sj].position)
                .min_by(|a, b| p.distance(a).total_cmp(&p.distance(b)))
                .expect("at least two visible");
            let (dx, dy) = (nearest.x - p.x, nearest.y - p.y);
            let (hx, hy) = (v.vx / speed, v.vy / speed);
            let ahead = dx * hx + dy * hy;
            let left = hx * dy - hy * dx;
            hist.add(dx.hypot(dy), left.atan2(ahead));
        }
    }
    if crowded_frames == 0 {
        return Err(Error::InsufficientData("no frame with two or more pedestrians".into()));
    }
    if hist.total() == 0.0 {
        return Err(Error::InsufficientData(
            "no pedestrian in a shared frame moves fast enough to define a heading".into(),
        ));
    }
    Ok(hist)
}

/// Axis-aligned region in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl Extent {
    pub fn of(set: &TrajectorySet) -> Option<Extent> {
        set.bounds().map(|(min_x, max_x, min_y, max_y)| Extent {
            min_x,
            max_x,
            min_y,
            max_y,
        })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.min_x..=self.max_x).contains(&x) && (self.min_y..=self.max_y).contains(&y)
    }
}

/// Counts of positions in `heatmap_bin_m` squares tiling `extent` from its
/// lower-left corner. Positions outside the extent are ignored. The extent
/// defaults to the set's own bounding box.
pub fn position_heatmap(set: &TrajectorySet, cfg: &DynamicsConfig, extent: Option<Extent>) -> Result<Histogram2D> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let e = match extent {
        Some(e) => e,
        None => Extent::of(set).ok_or(Error::EmptySet)?,
    };
    let bin = cfg.heatmap_bin_m;
    let n_of = |lo: f64, hi: f64| (((hi - lo) / bin).ceil() as usize).max(1);
    let (nx, ny) = (n_of(e.min_x, e.max_x), n_of(e.min_y, e.max_y));
    let mut counts = vec![0.0; nx * ny];
    for s in set.trajectories().iter().flat_map(|t| t.samples()) {
        let (x, y) = (s.position.x, s.position.y);
        if !e.contains(x, y) {
            continue;
        }
        let ix = (((x - e.min_x) / bin).floor() as usize).min(nx - 1);
        let iy = (((y - e.min_y) / bin).floor() as usize).min(ny - 1);
        counts[iy * nx + ix] += 1.0;
    }
    Ok(Histogram2D {
        x_edges: (0..=nx).map(|k| e.min_x + bin * k as f64).collect(),
        y_edges: (0..=ny).map(|k| e.min_y + bin * k as f64).collect(),
        counts,
        normalized: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Trajectory;
    use rand::{Rng, SeedableRng};

    fn cfg() -> DynamicsConfig {
        DynamicsConfig::default()
    }

    #[test]
    fn follower_behind_leader() {
        let leader = Trajectory::from_points(0, &[(0, 1.0, 0.0), (1, 2.0, 0.0), (2, 3.0, 0.0)]).unwrap();
        let follower = Trajectory::from_points(1, &[(0, 0.0, 0.0), (1, 1.0, 0.0), (2, 2.0, 0.0)]).unwrap();
        let set = TrajectorySet::new("t", 1.0, vec![leader, follower]).unwrap();
        let h = nearest_neighbor_polar(&set, &cfg()).unwrap();
        assert_eq!(h.total(), 6.0);
        // r = 1 lies in ring 4; behind is bearing bin 0, ahead is bin 18
        assert_eq!(h.at(4, 0), 3.0);
        assert_eq!(h.at(4, 18), 3.0);
    }

    #[test]
    fn lone_frames_contribute_nothing() {
        let a = Trajectory::from_points(0, &[(0, 0.0, 0.0), (1, 1.0, 0.0), (5, 5.0, 0.0), (6, 6.0, 0.0)]).unwrap();
        let b = Trajectory::from_points(1, &[(5, 5.0, 1.0), (6, 6.0, 1.0)]).unwrap();
        let set = TrajectorySet::new("t", 1.0, vec![a.clone(), b]).unwrap();
        assert_eq!(nearest_neighbor_polar(&set, &cfg()).unwrap().total(), 4.0);
        let alone = TrajectorySet::new("t", 1.0, vec![a]).unwrap();
        assert!(matches!(nearest_neighbor_polar(&alone, &cfg()), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn side_by_side_pair_peaks_in_half_meter_band() {
        let a = Trajectory::from_points(0, &[(0, 0.0, 0.0), (1, 1.3, 0.0), (2, 2.6, 0.0)]).unwrap();
        let b = Trajectory::from_points(1, &[(0, 0.0, 0.6), (1, 1.3, 0.6), (2, 2.6, 0.6)]).unwrap();
        let set = TrajectorySet::new("t", 1.0, vec![a, b]).unwrap();
        let h = nearest_neighbor_polar(&set, &cfg()).unwrap();
        let ring2: f64 = (0..36).map(|k| h.at(2, k)).sum();
        assert_eq!(ring2, h.total());
        // a sees b on its left (+90 deg), b sees a on its right (-90 deg)
        assert_eq!(h.at(2, 27), 3.0);
        assert_eq!(h.at(2, 9), 3.0);
    }

    #[test]
    fn slow_samples_are_skipped() {
        let a = Trajectory::from_points(0, &[(0, 0.0, 0.0), (1, 0.01, 0.0)]).unwrap();
        let b = Trajectory::from_points(1, &[(0, 1.0, 0.0), (1, 1.0, 0.0)]).unwrap();
        let set = TrajectorySet::new("t", 1.0, vec![a, b]).unwrap();
        assert!(matches!(nearest_neighbor_polar(&set, &cfg()), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn heatmap_single_point() {
        let t = Trajectory::from_points(0, &[(0, 2.0, 3.0), (1, 2.0, 3.0), (2, 2.0, 3.0)]).unwrap();
        let set = TrajectorySet::new("t", 1.0, vec![t]).unwrap();
        let h = position_heatmap(&set, &cfg(), None).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0.0).count(), 1);
        assert_eq!(h.total(), 3.0);
    }

    #[test]
    fn heatmap_uniform_grid() {
        let mut pts = Vec::new();
        let mut f = 0;
        for iy in 0..4 {
            for ix in 0..6 {
                for _ in 0..2 {
                    pts.push((f, 0.25 + 0.5 * ix as f64, 0.25 + 0.5 * iy as f64));
                    f += 1;
                }
            }
        }
        let set = TrajectorySet::new("t", 1.0, vec![Trajectory::from_points(0, &pts).unwrap()]).unwrap();
        let extent = Extent { min_x: 0.0, max_x: 3.0, min_y: 0.0, max_y: 2.0 };
        let h = position_heatmap(&set, &cfg(), Some(extent)).unwrap();
        assert_eq!((h.nx(), h.ny()), (6, 4));
        assert!(h.counts.iter().all(|&c| c == 2.0));
        let n = h.to_normalized().unwrap();
        assert!((n.counts.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heatmap_counts_only_samples_inside_extent() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        let pts: Vec<_> = (0..500u64)
            .map(|f| (f, rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
            .collect();
        let set = TrajectorySet::new("t", 1.0, vec![Trajectory::from_points(0, &pts).unwrap()]).unwrap();
        let extent = Extent { min_x: -2.0, max_x: 3.0, min_y: -1.0, max_y: 4.0 };
        let inside = pts.iter().filter(|p| extent.contains(p.1, p.2)).count();
        let h = position_heatmap(&set, &cfg(), Some(extent)).unwrap();
        assert_eq!(h.total(), inside as f64);
        let full = position_heatmap(&set, &cfg(), None).unwrap();
        assert_eq!(full.total(), 500.0);
    }
}
