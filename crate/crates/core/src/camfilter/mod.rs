//! Static vs. moving camera classification from sparse optical flow.
//!
//! Reference frames are sampled at `sample_hz`. Corners detected on each
//! reference frame are tracked into the next sampled frame, and the clip is
//! labelled moving when enough of the pooled tracked features moved farther
//! than `disp_thresh_px`.

mod corners;
mod flow;
mod image;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{GrayFrame, GrayFrameSequence};

pub use corners::{min_eigenvalue, shi_tomasi, FeaturePoint};
pub use flow::{pyramidal_lk, FeatureFlow, FlowResult, TrackStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraMotionConfig {
    /// Reference frames per second of video.
    pub sample_hz: f64,
    pub disp_thresh_px: f64,
    /// Fraction of tracked features that must exceed the threshold for "moving".
    pub moving_frac: f64,
    pub max_features: usize,
    /// Corner acceptance as a fraction of the strongest response in the frame.
    pub quality_level: f64,
    pub min_corner_distance_px: f64,
    /// Side of the square LK window, odd.
    pub lk_window: usize,
    /// Number of 2x-downsampled levels above full resolution.
    pub pyramid_levels: usize,
    pub lk_max_iters: usize,
    pub lk_epsilon: f64,
    /// Below this many pooled tracked features the verdict is indeterminate.
    pub min_valid_features: usize,
}

impl Default for CameraMotionConfig {
    fn default() -> Self {
        Self {
            sample_hz: 2.0,
            disp_thresh_px: 10.0,
            moving_frac: 0.85,
            max_features: 200,
            quality_level: 0.01,
            min_corner_distance_px: 7.0,
            lk_window: 21,
            pyramid_levels: 3,
            lk_max_iters: 30,
            lk_epsilon: 0.01,
            min_valid_features: 10,
        }
    }
}

impl CameraMotionConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_owned()));
        if !(self.moving_frac > 0.0 && self.moving_frac <= 1.0) {
            return bad("moving_frac must lie in (0, 1]");
        }
        if !(self.disp_thresh_px > 0.0 && self.disp_thresh_px.is_finite()) {
            return bad("disp_thresh_px must be positive");
        }
        if !(self.sample_hz > 0.0 && self.sample_hz.is_finite()) {
            return bad("sample_hz must be positive");
        }
        if self.lk_window < 3 || self.lk_window.is_multiple_of(2) {
            return bad("lk_window must be odd and at least 3");
        }
        if !(self.quality_level > 0.0 && self.quality_level <= 1.0) {
            return bad("quality_level must lie in (0, 1]");
        }
        if !(self.lk_epsilon > 0.0) || self.lk_max_iters == 0 {
            return bad("LK termination criteria must be positive");
        }
        if self.max_features == 0 {
            return bad("max_features must be at least 1");
        }
        if !(self.min_corner_distance_px >= 0.0) {
            return bad("min_corner_distance_px must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CameraLabel {
    Static,
    Moving,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraVerdict {
    pub label: CameraLabel,
    pub moving_feature_fraction: f64,
    pub features_tracked: usize,
    pub pairs_evaluated: usize,
}

/// Verdict from pooled displacement magnitudes of tracked features.
pub fn verdict_from_displacements(
    displacements: &[f64],
    pairs_evaluated: usize,
    cfg: &CameraMotionConfig,
) -> CameraVerdict {
    let tracked = displacements.len();
    let moving = displacements
        .iter()
        .filter(|&&d| d > cfg.disp_thresh_px)
        .count();
    let fraction = if tracked == 0 {
        0.0
    } else {
        moving as f64 / tracked as f64
    };
    let label = if tracked < cfg.min_valid_features {
        CameraLabel::Indeterminate
    } else if fraction >= cfg.moving_frac {
        CameraLabel::Moving
    } else {
        CameraLabel::Static
    };
    CameraVerdict {
        label,
        moving_feature_fraction: fraction,
        features_tracked: tracked,
        pairs_evaluated,
    }
}

/// Indices of the reference frames: the first frame at or after each
/// multiple of `1 / sample_hz` seconds from the clip start.
pub fn sample_reference_frames(frames: &[GrayFrame], sample_hz: f64) -> Vec<usize> {
    let Some(first) = frames.first() else {
        return Vec::new();
    };
    let t0 = first.timestamp;
    let last = frames[frames.len() - 1].timestamp;
    let eps = 1e-9;
    let mut picked: Vec<usize> = Vec::new();
    let mut cursor = 0;
    for m in 0.. {
        let target = t0 + m as f64 / sample_hz;
        if target > last + eps {
            break;
        }
        while cursor < frames.len() && frames[cursor].timestamp < target - eps {
            cursor += 1;
        }
        if cursor == frames.len() {
            break;
        }
        if picked.last() != Some(&cursor) {
            picked.push(cursor);
        }
    }
    picked
}

/// Labels a clip as static, moving, or indeterminate.
pub fn classify_camera(seq: &GrayFrameSequence, cfg: &CameraMotionConfig) -> Result<CameraVerdict> {
    cfg.validate()?;
    let refs = sample_reference_frames(seq.frames(), cfg.sample_hz);
    if refs.len() < 2 {
        return Err(Error::SequenceTooShort { sampled: refs.len() });
    }
    let frames = seq.frames();
    let per_pair = refs
        .par_windows(2)
        .map(|w| {
            let (a, b) = (&frames[w[0]], &frames[w[1]]);
            let feats = shi_tomasi(a, cfg)?;
            let flow = pyramidal_lk(a, b, &feats, cfg)?;
            Ok(flow.tracked().map(FeatureFlow::displacement).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let pooled: Vec<f64> = per_pair.concat();
    Ok(verdict_from_displacements(&pooled, refs.len() - 1, cfg))
}
