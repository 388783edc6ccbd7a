//! World-coordinate tracks and per-track kinematics.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WorldPoint;
use crate::SCHEMA_VERSION;

/// One tracked position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub frame: u64,
    pub position: WorldPoint,
}

/// Planar velocity in m/s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Velocity {
    pub vx: f64,
    pub vy: f64,
}

impl Velocity {
    pub fn new(vx: f64, vy: f64) -> Self {
        Self { vx, vy }
    }

    pub fn speed(&self) -> f64 {
        self.vx.hypot(self.vy)
    }
}

/// A single pedestrian's track. Frames are strictly increasing and the track is never empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrajectoryRepr", into = "TrajectoryRepr")]
pub struct Trajectory {
    pedestrian_id: i64,
    samples: Vec<Sample>,
}

impl Trajectory {
    pub fn new(pedestrian_id: i64, samples: Vec<Sample>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidTrajectory {
            id: pedestrian_id,
            reason,
        };
        if samples.is_empty() {
            return Err(invalid("no samples".into()));
        }
        for pair in samples.windows(2) {
            if pair[1].frame <= pair[0].frame {
                return Err(invalid(format!(
                    "frame {} follows frame {}",
                    pair[1].frame, pair[0].frame
                )));
            }
        }
        if let Some(s) = samples.iter().find(|s| !s.position.is_finite()) {
            return Err(invalid(format!("non-finite position at frame {}", s.frame)));
        }
        Ok(Self {
            pedestrian_id,
            samples,
        })
    }

    /// Builds a track from `(frame, x, y)` triples.
    pub fn from_points(pedestrian_id: i64, points: &[(u64, f64, f64)]) -> Result<Self> {
        Self::new(
            pedestrian_id,
            points
                .iter()
                .map(|&(frame, x, y)| Sample {
                    frame,
                    position: WorldPoint::new(x, y),
                })
                .collect(),
        )
    }

    pub fn id(&self) -> i64 {
        self.pedestrian_id
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    /// Same track with every position passed through `f`.
    pub fn map_positions(&self, f: impl Fn(WorldPoint) -> WorldPoint) -> Result<Self> {
        Self::new(
            self.pedestrian_id,
            self.samples
                .iter()
                .map(|s| Sample {
                    frame: s.frame,
                    position: f(s.position),
                })
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct TrajectoryRepr {
    id: i64,
    samples: Vec<(u64, f64, f64)>,
}

impl From<Trajectory> for TrajectoryRepr {
    fn from(t: Trajectory) -> Self {
        TrajectoryRepr {
            id: t.pedestrian_id,
            samples: t
                .samples
                .iter()
                .map(|s| (s.frame, s.position.x, s.position.y))
                .collect(),
        }
    }
}

impl TryFrom<TrajectoryRepr> for Trajectory {
    type Error = Error;

    fn try_from(r: TrajectoryRepr) -> Result<Self> {
        Trajectory::from_points(r.id, &r.samples)
    }
}

/// All tracks of one scene or clip, with the frame rate their frame indices refer to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrajectorySetRepr", into = "TrajectorySetRepr")]
pub struct TrajectorySet {
    pub scene_id: String,
    fps: f64,
    trajectories: Vec<Trajectory>,
}

impl TrajectorySet {
    pub fn new(scene_id: impl Into<String>, fps: f64, trajectories: Vec<Trajectory>) -> Result<Self> {
        if !(fps.is_finite() && fps > 0.0) {
            return Err(Error::InvalidConfig(format!("fps must be positive, got {fps}")));
        }
        let mut seen = HashSet::with_capacity(trajectories.len());
        for t in &trajectories {
            if !seen.insert(t.id()) {
                return Err(Error::DuplicateId { id: t.id() });
            }
        }
        Ok(Self {
            scene_id: scene_id.into(),
            fps,
            trajectories,
        })
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn total_samples(&self) -> usize {
        self.trajectories.iter().map(Trajectory::len).sum()
    }

    /// Frame -> `(trajectory index, sample index)` for every visible pedestrian,
    /// in trajectory order.
    pub fn frame_index(&self) -> BTreeMap<u64, Vec<(usize, usize)>> {
        let mut frames: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
        for (ti, t) in self.trajectories.iter().enumerate() {
            for (si, s) in t.samples().iter().enumerate() {
                frames.entry(s.frame).or_default().push((ti, si));
            }
        }
        frames
    }

    /// Same set with every position passed through `f`.
    pub fn map_positions(&self, f: impl Fn(WorldPoint) -> WorldPoint) -> Result<Self> {
        let trajectories = self
            .trajectories
            .iter()
            .map(|t| t.map_positions(&f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.scene_id.clone(), self.fps, trajectories)
    }

    /// Positional bounding box `(min_x, max_x, min_y, max_y)`; `None` when empty.
    pub fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let mut it = self
            .trajectories
            .iter()
            .flat_map(|t| t.samples().iter().map(|s| s.position));
        let p = it.next()?;
        Some(it.fold((p.x, p.x, p.y, p.y), |(x0, x1, y0, y1), q| {
            (x0.min(q.x), x1.max(q.x), y0.min(q.y), y1.max(q.y))
        }))
    }
}

#[derive(Serialize, Deserialize)]
struct TrajectorySetRepr {
    schema_version: u32,
    scene_id: String,
    fps: f64,
    trajectories: Vec<Trajectory>,
}

impl From<TrajectorySet> for TrajectorySetRepr {
    fn from(s: TrajectorySet) -> Self {
        TrajectorySetRepr {
            schema_version: SCHEMA_VERSION,
            scene_id: s.scene_id,
            fps: s.fps,
            trajectories: s.trajectories,
        }
    }
}

impl TryFrom<TrajectorySetRepr> for TrajectorySet {
    type Error = Error;

    fn try_from(r: TrajectorySetRepr) -> Result<Self> {
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported schema_version {}",
                r.schema_version
            )));
        }
        TrajectorySet::new(r.scene_id, r.fps, r.trajectories)
    }
}

/// Finite-difference velocity at every sample.
///
/// Interior samples use central differences, the endpoints one-sided ones.
/// The time step comes from the actual frame gap, so missing frames are
/// bridged without inventing positions.
pub fn velocity_series(traj: &Trajectory, fps: f64) -> Result<Vec<(u64, Velocity)>> {
    let s = traj.samples();
    if s.len() < 2 {
        return Err(Error::TooShort {
            id: traj.id(),
            samples: s.len(),
        });
    }
    let diff = |a: &Sample, b: &Sample| {
        let dt = (b.frame - a.frame) as f64 / fps;
        Velocity::new(
            (b.position.x - a.position.x) / dt,
            (b.position.y - a.position.y) / dt,
        )
    };
    let n = s.len();
    Ok((0..n)
        .map(|k| {
            let v = match k {
                0 => diff(&s[0], &s[1]),
                k if k == n - 1 => diff(&s[n - 2], &s[n - 1]),
                k => diff(&s[k - 1], &s[k + 1]),
            };
            (s[k].frame, v)
        })
        .collect())
}

/// [`velocity_series`] followed by a centered moving average of odd `window`
/// length, truncated at the track ends. `window == 1` is a no-op.
pub fn smoothed_velocity_series(
    traj: &Trajectory,
    fps: f64,
    window: usize,
) -> Result<Vec<(u64, Velocity)>> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!(
            "smoothing window must be odd, got {window}"
        )));
    }
    let raw = velocity_series(traj, fps)?;
    if window == 1 {
        return Ok(raw);
    }
    let half = window / 2;
    let n = raw.len();
    Ok((0..n)
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half).min(n - 1);
            let m = (hi - lo + 1) as f64;
            let (sx, sy) = raw[lo..=hi]
                .iter()
                .fold((0.0, 0.0), |(sx, sy), (_, v)| (sx + v.vx, sy + v.vy));
            (raw[k].0, Velocity::new(sx / m, sy / m))
        })
        .collect())
}

/// Straight-line distance from the first to the last position.
pub fn displacement(traj: &Trajectory) -> f64 {
    traj.first().position.distance(&traj.last().position)
}

/// Sum of distances between consecutive positions.
pub fn path_length(traj: &Trajectory) -> f64 {
    traj.samples()
        .windows(2)
        .map(|w| w[0].position.distance(&w[1].position))
        .sum()
}
