//! Scalar statistics: stationary share, average speed, distance traveled,
//! passing distance.

use crate::error::{Error, Result};
use crate::trajectory::{displacement, path_length, Trajectory, TrajectorySet};

use super::{all_velocities, DynamicsConfig};

/// Strict: a pedestrian displaced by exactly the threshold is moving.
pub fn is_stationary(t: &Trajectory, cfg: &DynamicsConfig) -> bool {
    displacement(t) < cfg.stationary_thresh_m
}

/// Percentage of pedestrians whose start-to-finish displacement is below the threshold.
pub fn stationary_fraction(set: &TrajectorySet, cfg: &DynamicsConfig) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let still = set
        .trajectories()
        .iter()
        .filter(|t| is_stationary(t, cfg))
        .count();
    Ok(100.0 * still as f64 / set.len() as f64)
}

/// Mean speed over every velocity sample of every pedestrian, stationary ones included.
pub fn average_speed(set: &TrajectorySet, cfg: &DynamicsConfig) -> Result<f64> {
    let (sum, n) = all_velocities(set, cfg)
        .iter()
        .flatten()
        .flatten()
        .fold((0.0, 0usize), |(s, n), v| (s + v.speed(), n + 1));
    if n == 0 {
        return Err(Error::NoVelocitySamples);
    }
    Ok(sum / n as f64)
}

/// Mean path length per pedestrian.
pub fn mean_distance_traveled(set: &TrajectorySet) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let total: f64 = set.trajectories().iter().map(path_length).sum();
    Ok(total / set.len() as f64)
}

/// Closest approach of one pair over their co-visible frames.
struct Encounter {
    first: f64,
    min: f64,
    min_frame: u64,
}

fn encounter(a: &Trajectory, b: &Trajectory) -> Option<Encounter> {
    let (sa, sb) = (a.samples(), b.samples());
    let (mut i, mut j) = (0, 0);
    let mut enc: Option<Encounter> = None;
    while i < sa.len() && j < sb.len() {
        match sa[i].frame.cmp(&sb[j].frame) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let d = sa[i].position.distance(&sb[j].position);
                match &mut enc {
                    None => {
                        enc = Some(Encounter {
                            first: d,
                            min: d,
                            min_frame: sa[i].frame,
                        })
                    }
                    Some(e) if d < e.min => {
                        e.min = d;
                        e.min_frame = sa[i].frame;
                    }
                    _ => {}
                }
                i += 1;
                j += 1;
            }
        }
    }
    enc
}

/// Mean closest-approach distance over qualifying pedestrian pairs.
///
/// A pair qualifies when its minimum co-visible distance is below
/// `passing_radius_m`, the two are mutual nearest neighbors in the frame of
/// closest approach (ties allowed), and they started farther apart than that
/// minimum. The last two gates can be switched off in the config. The
/// earliest frame wins when the minimum repeats.
pub fn passing_distance(set: &TrajectorySet, cfg: &DynamicsConfig) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let trajs = set.trajectories();
    let frames = set.frame_index();
    let position = |ti: usize, si: usize| trajs[ti].samples()[si].position;

    let mut qualifying: Vec<((i64, i64), f64)> = Vec::new();
    for a in 0..trajs.len() {
        for b in a + 1..trajs.len() {
            let Some(enc) = encounter(&trajs[a], &trajs[b]) else {
                continue;
            };
            if enc.min >= cfg.passing_radius_m {
                continue;
            }
            if cfg.passing_require_approach && enc.first <= enc.min {
                continue;
            }
            if cfg.passing_require_mutual_nn {
                let visible = &frames[&enc.min_frame];
                let pa = visible.iter().find(|(t, _)| *t == a).map(|&(t, s)| position(t, s));
                let pb = visible.iter().find(|(t, _)| *t == b).map(|&(t, s)| position(t, s));
                let (Some(pa), Some(pb)) = (pa, pb) else {
                    continue;
                };
                let closer_exists = visible
                    .iter()
                    .filter(|(t, _)| *t != a && *t != b)
                    .any(|&(t, s)| {
                        let pk = position(t, s);
                        pa.distance(&pk) < enc.min || pb.distance(&pk) < enc.min
                    });
                if closer_exists {
                    continue;
                }
            }
            let (ia, ib) = (trajs[a].id(), trajs[b].id());
            qualifying.push(((ia.min(ib), ia.max(ib)), enc.min));
        }
    }
    if qualifying.is_empty() {
        return Err(Error::NoQualifyingPairs);
    }
    // id order keeps the floating-point sum independent of list order
    qualifying.sort_by_key(|q| q.0);
    let sum: f64 = qualifying.iter().map(|(_, d)| d).sum();
    Ok(sum / qualifying.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> DynamicsConfig {
        DynamicsConfig::default()
    }

    fn set(tracks: Vec<Trajectory>, fps: f64) -> TrajectorySet {
        TrajectorySet::new("t", fps, tracks).unwrap()
    }

    fn line(id: i64, frames: std::ops::Range<u64>, start: (f64, f64), step: (f64, f64)) -> Trajectory {
        let pts: Vec<_> = frames
            .enumerate()
            .map(|(k, f)| (f, start.0 + step.0 * k as f64, start.1 + step.1 * k as f64))
            .collect();
        Trajectory::from_points(id, &pts).unwrap()
    }

    #[test]
    fn stationary_counts() {
        let singles: Vec<_> = (0..4).map(|i| Trajectory::from_points(i, &[(0, i as f64, 0.0)]).unwrap()).collect();
        assert_eq!(stationary_fraction(&set(singles, 10.0), &cfg()).unwrap(), 100.0);
        let mut tracks = vec![Trajectory::from_points(0, &[(0, 0.0, 0.0), (5, 0.05, 0.0)]).unwrap()];
        for i in 1..4 {
            tracks.push(Trajectory::from_points(i, &[(0, 0.0, 0.0), (5, 3.0, 4.0)]).unwrap());
        }
        assert_eq!(stationary_fraction(&set(tracks, 10.0), &cfg()).unwrap(), 25.0);
        assert_eq!(stationary_fraction(&set(vec![], 10.0), &cfg()), Err(Error::EmptySet));
    }

    #[test]
    fn threshold_displacement_is_not_stationary() {
        let t = Trajectory::from_points(0, &[(0, 0.0, 0.0), (3, 0.2, 0.0)]).unwrap();
        assert_eq!(displacement(&t), 0.2);
        assert!(!is_stationary(&t, &cfg()));
    }

    #[test]
    fn average_speed_pooling() {
        let uniform = line(0, 0..10, (0.0, 0.0), (0.13, 0.0));
        let s = average_speed(&set(vec![uniform], 10.0), &cfg()).unwrap();
        assert!((s - 1.3).abs() < 1e-12);
        let slow = line(0, 0..5, (0.0, 0.0), (1.0, 0.0));
        let fast = line(1, 0..5, (0.0, 5.0), (0.0, 2.0));
        assert_eq!(average_speed(&set(vec![slow, fast], 1.0), &cfg()).unwrap(), 1.5);
        let single = Trajectory::from_points(0, &[(0, 0.0, 0.0)]).unwrap();
        assert_eq!(average_speed(&set(vec![single], 1.0), &cfg()), Err(Error::NoVelocitySamples));
    }

    #[test]
    fn distance_traveled() {
        let l = Trajectory::from_points(0, &[(0, 0.0, 0.0), (1, 3.0, 0.0), (2, 3.0, 4.0)]).unwrap();
        assert_eq!(mean_distance_traveled(&set(vec![l], 1.0)).unwrap(), 7.0);
        let a = line(0, 0..3, (0.0, 0.0), (1.0, 0.0));
        let b = line(1, 0..3, (0.0, 0.0), (2.0, 0.0));
        assert_eq!(mean_distance_traveled(&set(vec![a, b], 1.0)).unwrap(), 3.0);
        assert_eq!(mean_distance_traveled(&set(vec![], 1.0)), Err(Error::EmptySet));
    }

    #[test]
    fn antiparallel_crossing() {
        // cross x = 0 together at frame 5
        let a = line(0, 0..11, (-5.0, 1.0), (1.0, 0.0));
        let b = line(1, 0..11, (5.0, -1.0), (-1.0, 0.0));
        assert_eq!(passing_distance(&set(vec![a, b], 1.0), &cfg()).unwrap(), 2.0);
    }

    #[test]
    fn far_apart_pair_does_not_qualify() {
        let a = line(0, 0..10, (0.0, 0.0), (1.0, 0.0));
        let b = line(1, 0..10, (0.0, 10.5), (1.0, 0.0));
        assert_eq!(passing_distance(&set(vec![a, b], 1.0), &cfg()), Err(Error::NoQualifyingPairs));
        assert_eq!(passing_distance(&set(vec![], 1.0), &cfg()), Err(Error::EmptySet));
    }

    #[test]
    fn receding_pair_needs_approach() {
        let a = line(0, 0..10, (0.0, 0.0), (-0.5, 0.0));
        let b = line(1, 0..10, (1.0, 0.0), (0.5, 0.0));
        let s = set(vec![a, b], 1.0);
        assert_eq!(passing_distance(&s, &cfg()), Err(Error::NoQualifyingPairs));
        let relaxed = DynamicsConfig { passing_require_approach: false, ..cfg() };
        assert_eq!(passing_distance(&s, &relaxed).unwrap(), 1.0);
    }

    #[test]
    fn third_agent_breaks_mutual_nearest() {
        let a = line(0, 0..11, (-5.0, 1.0), (1.0, 0.0));
        let b = line(1, 0..11, (5.0, -1.0), (-1.0, 0.0));
        // parked right next to `a` at the crossing frame only
        let c = Trajectory::from_points(2, &[(5, 0.0, 1.5)]).unwrap();
        let s = set(vec![a, b, c], 1.0);
        // a-b blocked by c; a-c has a single co-visible frame so never approaches
        assert_eq!(passing_distance(&s, &cfg()), Err(Error::NoQualifyingPairs));
        let relaxed = DynamicsConfig { passing_require_mutual_nn: false, ..cfg() };
        assert_eq!(passing_distance(&s, &relaxed).unwrap(), 2.0);
    }
}
