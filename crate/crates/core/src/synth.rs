//! Deterministic synthetic inputs: textured frames, camera pans and
//! pedestrian scenes. Everything is seeded so fixtures are reproducible.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

use crate::ingest::{GrayFrame, GrayFrameSequence};
use crate::trajectory::{Trajectory, TrajectorySet};

/// Large random image made of overlapping Gaussian blobs; crops of it give
/// textured, non-periodic frames with well-defined corners.
#[derive(Debug, Clone)]
pub struct TextureCanvas {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl TextureCanvas {
    pub fn new(width: usize, height: usize, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut acc = vec![128.0f32; width * height];
        let blobs = (width * height) / 150 + 1;
        for _ in 0..blobs {
            let cx = rng.random_range(0.0..width as f32);
            let cy = rng.random_range(0.0..height as f32);
            let sigma = rng.random_range(2.5f32..6.0);
            let amp = rng.random_range(40.0f32..110.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let reach = (3.5 * sigma).ceil() as isize;
            let (ix, iy) = (cx as isize, cy as isize);
            let inv = 1.0 / (2.0 * sigma * sigma);
            for y in (iy - reach).max(0)..=(iy + reach).min(height as isize - 1) {
                for x in (ix - reach).max(0)..=(ix + reach).min(width as isize - 1) {
                    let dx = x as f32 - cx;
                    let dy = y as f32 - cy;
                    acc[y as usize * width + x as usize] += amp * (-(dx * dx + dy * dy) * inv).exp();
                }
            }
        }
        let data = acc.iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect();
        Self { width, height, data }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// `w x h` window whose top-left corner sits at `(x0, y0)`; outside pixels replicate the edge.
    pub fn crop(&self, x0: isize, y0: isize, w: usize, h: usize, timestamp: f64) -> GrayFrame {
        GrayFrame::from_fn(w, h, timestamp, |x, y| {
            let sx = (x0 + x as isize).clamp(0, self.width as isize - 1) as usize;
            let sy = (y0 + y as isize).clamp(0, self.height as isize - 1) as usize;
            self.data[sy * self.width + sx]
        })
    }
}

/// Fixed camera over a textured scene, with independent Gaussian pixel noise
/// of `noise_sigma` gray levels per frame.
pub fn static_sequence(
    width: usize,
    height: usize,
    frames: usize,
    fps: f64,
    noise_sigma: f64,
    seed: u64,
) -> GrayFrameSequence {
    let canvas = TextureCanvas::new(width + 40, height + 40, seed);
    let base = canvas.crop(20, 20, width, height, 0.0);
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let noise = Normal::new(0.0, noise_sigma.max(0.0)).expect("finite sigma");
    let seq = (0..frames)
        .map(|_| GrayFrame {
            data: base
                .data
                .iter()
                .map(|&v| (f64::from(v) + noise.sample(&mut rng)).round().clamp(0.0, 255.0) as u8)
                .collect(),
            ..base.clone()
        })
        .collect();
    GrayFrameSequence::from_frames_at(seq, fps).expect("valid synthetic sequence")
}

/// Camera panning so that scene content moves `velocity_px` pixels per frame
/// (rounded to whole pixels per frame index).
pub fn pan_sequence(
    width: usize,
    height: usize,
    frames: usize,
    fps: f64,
    velocity_px: (f64, f64),
    seed: u64,
) -> GrayFrameSequence {
    let span = |v: f64| (v.abs() * frames as f64).ceil() as usize + 40;
    let canvas = TextureCanvas::new(width + span(velocity_px.0), height + span(velocity_px.1), seed);
    let ox = if velocity_px.0 > 0.0 { span(velocity_px.0) as isize - 20 } else { 20 };
    let oy = if velocity_px.1 > 0.0 { span(velocity_px.1) as isize - 20 } else { 20 };
    let seq = (0..frames)
        .map(|k| {
            let sx = (velocity_px.0 * k as f64).round() as isize;
            let sy = (velocity_px.1 * k as f64).round() as isize;
            canvas.crop(ox - sx, oy - sy, width, height, 0.0)
        })
        .collect();
    GrayFrameSequence::from_frames_at(seq, fps).expect("valid synthetic sequence")
}

/// Parameters of a random pedestrian scene.
#[derive(Debug, Clone)]
pub struct SceneSpec {
    pub agents: usize,
    pub frames: u64,
    pub fps: f64,
    /// Side of the square walking area in meters.
    pub extent_m: f64,
    /// Fraction of agents that stand still.
    pub stationary_share: f64,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            agents: 12,
            frames: 120,
            fps: 10.0,
            extent_m: 20.0,
            stationary_share: 0.25,
        }
    }
}

/// Random walkers with staggered entry and exit times, mostly heading along
/// the x axis in both directions, plus a share of standing pedestrians.
pub fn random_scene(spec: &SceneSpec, seed: u64) -> TrajectorySet {
    let mut rng = StdRng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, 0.02).expect("finite sigma");
    let dt = 1.0 / spec.fps;
    let mut trajectories = Vec::with_capacity(spec.agents);
    for id in 0..spec.agents {
        let start = rng.random_range(0..spec.frames.max(2) / 2);
        let len = rng.random_range(1..=spec.frames - start);
        let mut x = rng.random_range(0.0..spec.extent_m);
        let mut y = rng.random_range(0.0..spec.extent_m);
        let standing = rng.random_bool(spec.stationary_share.clamp(0.0, 1.0));
        let (vx, vy) = if standing {
            (0.0, 0.0)
        } else {
            let speed = rng.random_range(0.6..2.0);
            let dir = if rng.random_bool(0.5) { 0.0 } else { std::f64::consts::PI };
            let heading = dir + rng.random_range(-0.4..0.4);
            (speed * heading.cos(), speed * heading.sin())
        };
        let mut pts = Vec::with_capacity(len as usize);
        for f in start..start + len {
            pts.push((f, x, y));
            if standing {
                x += jitter.sample(&mut rng) * 0.1;
                y += jitter.sample(&mut rng) * 0.1;
            } else {
                x += vx * dt + jitter.sample(&mut rng);
                y += vy * dt + jitter.sample(&mut rng);
            }
        }
        trajectories.push(Trajectory::from_points(id as i64, &pts).expect("increasing frames"));
    }
    TrajectorySet::new("synthetic", spec.fps, trajectories).expect("unique ids")
}
