//! Sparse coarse-to-fine Lucas-Kanade tracking.

use serde::{Deserialize, Serialize};

use super::corners::{min_eigenvalue, FeaturePoint};
use super::image::Plane;
use super::CameraMotionConfig;
use crate::error::{Error, Result};
use crate::geometry::PixelPoint;
use crate::ingest::GrayFrame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrackStatus {
    Tracked,
    Lost,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureFlow {
    pub start: PixelPoint,
    /// Equal to `start` when the feature is lost.
    pub end: PixelPoint,
    pub status: TrackStatus,
}

impl FeatureFlow {
    pub fn flow(&self) -> (f64, f64) {
        (self.end.u - self.start.u, self.end.v - self.start.v)
    }

    /// Displacement magnitude in pixels.
    pub fn displacement(&self) -> f64 {
        let (dx, dy) = self.flow();
        dx.hypot(dy)
    }

    pub fn is_tracked(&self) -> bool {
        self.status == TrackStatus::Tracked
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FlowResult {
    pub features: Vec<FeatureFlow>,
}

impl FlowResult {
    pub fn tracked(&self) -> impl Iterator<Item = &FeatureFlow> {
        self.features.iter().filter(|f| f.is_tracked())
    }
}

/// Per-level image, gradients of the reference image, and the target image.
struct Level {
    a: Plane,
    gx: Plane,
    gy: Plane,
    b: Plane,
}

/// Smallest pyramid level kept: the LK window must still fit.
fn build_levels(a: &GrayFrame, b: &GrayFrame, cfg: &CameraMotionConfig) -> Vec<Level> {
    let mut pa = Plane::from_frame(a);
    let mut pb = Plane::from_frame(b);
    let mut levels = Vec::with_capacity(cfg.pyramid_levels + 1);
    for l in 0..=cfg.pyramid_levels {
        if l > 0 {
            let (na, nb) = (pa.pyr_down(), pb.pyr_down());
            if na.width.min(na.height) < cfg.lk_window {
                break;
            }
            pa = na;
            pb = nb;
        }
        let (gx, gy) = pa.sobel();
        levels.push(Level {
            a: pa.clone(),
            gx,
            gy,
            b: pb.clone(),
        });
    }
    levels
}

fn window_inside(p: (f64, f64), half: f64, w: usize, h: usize) -> bool {
    p.0 - half >= 0.0 && p.1 - half >= 0.0 && p.0 + half <= (w - 1) as f64 && p.1 + half <= (h - 1) as f64
}

/// Tracks each feature of `frame_a` into `frame_b`.
///
/// `pyramid_levels` counts the 2x-downsampled levels stacked on the full
/// resolution image; levels too small for the window are dropped. At every
/// level the 2x2 system `G d = e` is solved iteratively with bilinear
/// sampling. A feature is lost when its window leaves the full-resolution
/// frame or `G` is ill-conditioned there.
pub fn pyramidal_lk(
    frame_a: &GrayFrame,
    frame_b: &GrayFrame,
    features: &[FeaturePoint],
    cfg: &CameraMotionConfig,
) -> Result<FlowResult> {
    if frame_a.dims() != frame_b.dims() {
        return Err(Error::DimensionMismatch {
            expected: frame_a.dims(),
            found: frame_b.dims(),
        });
    }
    cfg.validate()?;
    let levels = build_levels(frame_a, frame_b, cfg);
    let features = features
        .iter()
        .map(|f| track_one(&levels, f.position, cfg))
        .collect();
    Ok(FlowResult { features })
}

fn track_one(levels: &[Level], start: PixelPoint, cfg: &CameraMotionConfig) -> FeatureFlow {
    let lost = FeatureFlow {
        start,
        end: start,
        status: TrackStatus::Lost,
    };
    let half = (cfg.lk_window / 2) as isize;
    let halff = half as f64;
    let area = (cfg.lk_window * cfg.lk_window) as f64;
    let min_eig = 1e-4 * area;
    let n = ((2 * half + 1) * (2 * half + 1)) as usize;

    let (w0, h0) = (levels[0].a.width, levels[0].a.height);
    if !window_inside((start.u, start.v), halff, w0, h0) {
        return lost;
    }

    let mut guess = (0.0f64, 0.0f64);
    let mut patch = Vec::with_capacity(n);
    for (l, level) in levels.iter().enumerate().rev() {
        let scale = (1u32 << l) as f64;
        let p = (start.u / scale, start.v / scale);
        let is_base = l == 0;

        patch.clear();
        let (mut gxx, mut gxy, mut gyy) = (0.0, 0.0, 0.0);
        for j in -half..=half {
            for i in -half..=half {
                let (x, y) = (p.0 + i as f64, p.1 + j as f64);
                let ix = level.gx.sample(x, y);
                let iy = level.gy.sample(x, y);
                gxx += ix * ix;
                gxy += ix * iy;
                gyy += iy * iy;
                patch.push((level.a.sample(x, y), ix, iy));
            }
        }
        if min_eigenvalue(gxx, gxy, gyy) < min_eig {
            if is_base {
                return lost;
            }
            guess = (2.0 * guess.0, 2.0 * guess.1);
            continue;
        }
        let det = gxx * gyy - gxy * gxy;

        let mut nu = (0.0f64, 0.0f64);
        for _ in 0..cfg.lk_max_iters {
            let q = (p.0 + guess.0 + nu.0, p.1 + guess.1 + nu.1);
            if is_base && !window_inside(q, halff, w0, h0) {
                return lost;
            }
            let (mut ex, mut ey) = (0.0, 0.0);
            let mut k = 0;
            for j in -half..=half {
                for i in -half..=half {
                    let (va, ix, iy) = patch[k];
                    k += 1;
                    let diff = va - level.b.sample(q.0 + i as f64, q.1 + j as f64);
                    ex += diff * ix;
                    ey += diff * iy;
                }
            }
            let step = ((gyy * ex - gxy * ey) / det, (gxx * ey - gxy * ex) / det);
            nu.0 += step.0;
            nu.1 += step.1;
            if step.0.hypot(step.1) < cfg.lk_epsilon {
                break;
            }
        }
        if is_base {
            guess = (guess.0 + nu.0, guess.1 + nu.1);
        } else {
            guess = (2.0 * (guess.0 + nu.0), 2.0 * (guess.1 + nu.1));
        }
    }

    let end = PixelPoint::new(start.u + guess.0, start.v + guess.1);
    if !guess.0.is_finite() || !guess.1.is_finite() || !window_inside((end.u, end.v), halff, w0, h0) {
        return lost;
    }
    FeatureFlow {
        start,
        end,
        status: TrackStatus::Tracked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camfilter::shi_tomasi;
    use crate::synth::TextureCanvas;

    fn cfg() -> CameraMotionConfig {
        CameraMotionConfig::default()
    }

    #[test]
    fn identical_frames_give_zero_flow() {
        let canvas = TextureCanvas::new(200, 160, 5);
        let a = canvas.crop(0, 0, 160, 120, 0.0);
        let feats = shi_tomasi(&a, &cfg()).unwrap();
        assert!(feats.len() > 20);
        let res = pyramidal_lk(&a, &a, &feats, &cfg()).unwrap();
        assert!(res.features.iter().all(|f| f.is_tracked() && f.displacement() < 1e-9));
    }

    #[test]
    fn integer_translation_recovered() {
        let canvas = TextureCanvas::new(240, 200, 9);
        // content moves by (+3, 0) when the crop window slides by -3
        let a = canvas.crop(20, 20, 160, 120, 0.0);
        let b = canvas.crop(17, 20, 160, 120, 0.1);
        let feats = shi_tomasi(&a, &cfg()).unwrap();
        let res = pyramidal_lk(&a, &b, &feats, &cfg()).unwrap();
        let tracked: Vec<_> = res.tracked().collect();
        assert!(tracked.len() > 20);
        for f in tracked {
            let (dx, dy) = f.flow();
            assert!((dx - 3.0).abs() < 0.25 && dy.abs() < 0.25, "{:?}", f);
        }
    }

    #[test]
    fn feature_near_border_is_lost() {
        let canvas = TextureCanvas::new(240, 200, 2);
        let a = canvas.crop(20, 20, 160, 120, 0.0);
        let b = canvas.crop(28, 20, 160, 120, 0.1);
        let near_border = FeaturePoint {
            position: PixelPoint::new(2.0, 60.0),
            response: 1.0,
        };
        let res = pyramidal_lk(&a, &b, &[near_border], &cfg()).unwrap();
        assert_eq!(res.features[0].status, TrackStatus::Lost);
    }

    #[test]
    fn flat_patch_is_lost() {
        let a = GrayFrame::from_fn(100, 100, 0.0, |_, _| 128);
        let f = FeaturePoint {
            position: PixelPoint::new(50.0, 50.0),
            response: 0.0,
        };
        let res = pyramidal_lk(&a, &a, &[f], &cfg()).unwrap();
        assert_eq!(res.features[0].status, TrackStatus::Lost);
    }

    #[test]
    fn size_mismatch_rejected() {
        let a = GrayFrame::from_fn(64, 48, 0.0, |_, _| 0);
        let b = GrayFrame::from_fn(48, 64, 0.0, |_, _| 0);
        assert!(matches!(pyramidal_lk(&a, &b, &[], &cfg()), Err(Error::DimensionMismatch { .. })));
    }
}
