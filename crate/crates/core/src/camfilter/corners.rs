//! Shi-Tomasi "good features to track".

use serde::{Deserialize, Serialize};

use super::image::Plane;
use super::CameraMotionConfig;
use crate::error::{Error, Result};
use crate::geometry::PixelPoint;
use crate::ingest::GrayFrame;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeaturePoint {
    pub position: PixelPoint,
    /// Smaller eigenvalue of the structure tensor.
    pub response: f64,
}

/// Smaller eigenvalue of the symmetric tensor `[[a, b], [b, c]]`.
///
/// Same value as `(a+c)/2 - sqrt(((a-c)/2)^2 + b^2)`, evaluated as
/// `det / lambda_max` to avoid cancellation when the eigenvalues differ by
/// orders of magnitude.
pub fn min_eigenvalue(a: f64, b: f64, c: f64) -> f64 {
    let mean = 0.5 * (a + c);
    let radius = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let max = mean + radius;
    if mean > 0.0 && max > 0.0 {
        (a * c - b * b) / max
    } else {
        mean - radius
    }
}

/// 3x3 Gaussian weights of the structure-tensor window.
const TENSOR_WEIGHTS: [[f64; 3]; 3] = [
    [1.0 / 16.0, 2.0 / 16.0, 1.0 / 16.0],
    [2.0 / 16.0, 4.0 / 16.0, 2.0 / 16.0],
    [1.0 / 16.0, 2.0 / 16.0, 1.0 / 16.0],
];

/// Min-eigenvalue response at every pixel (zero outside the half-window margin).
pub(crate) fn response_map(frame: &GrayFrame, margin: usize) -> Vec<f64> {
    let (w, h) = frame.dims();
    let (gx, gy) = Plane::from_frame(frame).sobel();
    let mut out = vec![0.0; w * h];
    if w <= 2 * margin || h <= 2 * margin {
        return out;
    }
    let margin = margin.max(1);
    for y in margin..h - margin {
        for x in margin..w - margin {
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for (j, row) in TENSOR_WEIGHTS.iter().enumerate() {
                for (i, wgt) in row.iter().enumerate() {
                    let (px, py) = (x + i - 1, y + j - 1);
                    let ix = gx.at(px, py);
                    let iy = gy.at(px, py);
                    a += wgt * ix * ix;
                    b += wgt * ix * iy;
                    c += wgt * iy * iy;
                }
            }
            out[y * w + x] = min_eigenvalue(a, b, c).max(0.0);
        }
    }
    out
}

/// Strongest well-separated corners of `frame`, in descending response order.
///
/// Candidates sit at least half an LK window from the border, reach
/// `quality_level` times the strongest response, and are thinned greedily so
/// no two kept corners are closer than `min_corner_distance_px`.
pub fn shi_tomasi(frame: &GrayFrame, cfg: &CameraMotionConfig) -> Result<Vec<FeaturePoint>> {
    let half = cfg.lk_window / 2;
    let min = 2 * half + 1;
    if frame.width < min || frame.height < min {
        return Err(Error::FrameTooSmall {
            width: frame.width,
            height: frame.height,
            min,
        });
    }
    let resp = response_map(frame, half);
    let max = resp.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return Ok(Vec::new());
    }
    let floor = cfg.quality_level * max;
    let candidates: Vec<FeaturePoint> = resp
        .iter()
        .enumerate()
        .filter(|(_, &r)| r > 0.0 && r >= floor)
        .map(|(i, &r)| FeaturePoint {
            position: PixelPoint::new((i % frame.width) as f64, (i / frame.width) as f64),
            response: r,
        })
        .collect();
    Ok(select_corners(candidates, cfg.min_corner_distance_px, cfg.max_features))
}

/// Greedy non-maximum suppression. Input order is irrelevant: candidates are
/// ranked by response, then row, then column.
pub(crate) fn select_corners(
    mut candidates: Vec<FeaturePoint>,
    min_distance: f64,
    max_features: usize,
) -> Vec<FeaturePoint> {
    candidates.sort_by(|p, q| {
        q.response
            .total_cmp(&p.response)
            .then(p.position.v.total_cmp(&q.position.v))
            .then(p.position.u.total_cmp(&q.position.u))
    });
    let cell = min_distance.max(1.0);
    let mut grid: std::collections::HashMap<(i64, i64), Vec<PixelPoint>> = Default::default();
    let mut kept = Vec::new();
    let key = |p: &PixelPoint| ((p.u / cell).floor() as i64, (p.v / cell).floor() as i64);
    for cand in candidates {
        if kept.len() >= max_features {
            break;
        }
        let (cx, cy) = key(&cand.position);
        let crowded = (cx - 1..=cx + 1).any(|gx| {
            (cy - 1..=cy + 1).any(|gy| {
                grid.get(&(gx, gy)).is_some_and(|pts| {
                    pts.iter().any(|p| {
                        (p.u - cand.position.u).hypot(p.v - cand.position.v) < min_distance
                    })
                })
            })
        });
        if !crowded {
            grid.entry((cx, cy)).or_default().push(cand.position);
            kept.push(cand);
        }
    }
    kept
}
