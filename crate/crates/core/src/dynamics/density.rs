//! Voronoi local density and the fundamental diagram.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WorldPoint;
use crate::trajectory::TrajectorySet;

use super::voronoi::{voronoi_cells, ConvexPolygon};
use super::{all_velocities, DynamicsConfig};

/// Mean speed per local-density bin. Empty bins carry `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDiagram {
    /// Bin edges in persons per square meter.
    pub density_edges: Vec<f64>,
    pub density_centers: Vec<f64>,
    pub mean_speed: Vec<Option<f64>>,
    pub counts: Vec<usize>,
}

impl FundamentalDiagram {
    pub fn total_pairs(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Least-squares slope of mean speed against density over non-empty bins.
    pub fn trend_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .density_centers
            .iter()
            .zip(&self.mean_speed)
            .filter_map(|(&x, s)| s.map(|s| (x, s)))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

/// Convex hull of every observed position, each vertex pushed outward by
/// `margin` from the hull centroid. Sets whose positions span no area get
/// their bounding box grown by `margin` instead.
pub fn scene_boundary(set: &TrajectorySet, margin: f64) -> Result<ConvexPolygon> {
    let pts: Vec<WorldPoint> = set
        .trajectories()
        .iter()
        .flat_map(|t| t.samples().iter().map(|s| s.position))
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptySet);
    }
    match ConvexPolygon::hull(&pts) {
        Some(h) => Ok(h.dilated(margin)),
        None => {
            let (x0, x1, y0, y1) = set.bounds().ok_or(Error::EmptySet)?;
            ConvexPolygon::rectangle(x0 - margin, y0 - margin, x1 + margin, y1 + margin)
        }
    }
}

/// `(density, speed)` pairs of one frame.
fn frame_pairs(
    set: &TrajectorySet,
    velocities: &[Option<Vec<crate::trajectory::Velocity>>],
    visible: &[(usize, usize)],
    boundary: &ConvexPolygon,
) -> Result<Vec<(f64, f64)>> {
    let trajs = set.trajectories();
    let inside: Vec<(usize, usize)> = visible
        .iter()
        .copied()
        .filter(|&(t, s)| boundary.contains_strictly(trajs[t].samples()[s].position))
        .collect();
    if inside.len() < 2 {
        return Ok(Vec::new());
    }
    let seeds: Vec<(i64, WorldPoint)> = inside
        .iter()
        .map(|&(t, s)| (t as i64, trajs[t].samples()[s].position))
        .collect();
    let cells = voronoi_cells(&seeds, boundary)?;
    Ok(inside
        .iter()
        .zip(&cells)
        .filter(|(_, c)| c.area > 0.0)
        .filter_map(|(&(t, s), c)| {
            velocities[t]
                .as_ref()
                .map(|v| (1.0 / c.area, v[s].speed()))
        })
        .collect())
}

/// Local density (inverse Voronoi cell area) against speed, pooled over every
/// frame with at least two pedestrians inside `boundary`, binned by density.
///
/// `boundary` defaults to [`scene_boundary`] with `boundary_margin_m`.
pub fn fundamental_diagram(
    set: &TrajectorySet,
    cfg: &DynamicsConfig,
    boundary: Option<&ConvexPolygon>,
) -> Result<FundamentalDiagram> {
    let owned;
    let boundary = match boundary {
        Some(b) => b,
        None => {
            owned = scene_boundary(set, cfg.boundary_margin_m)
                .map_err(|_| Error::InsufficientData("no positions".into()))?;
            &owned
        }
    };
    let velocities = all_velocities(set, cfg);
    let frames: Vec<Vec<(usize, usize)>> = set
        .frame_index()
        .into_values()
        .filter(|v| v.len() >= 2)
        .collect();
    let per_frame = frames
        .par_iter()
        .map(|visible| frame_pairs(set, &velocities, visible, boundary))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(f64, f64)> = per_frame.concat();
    if pairs.is_empty() {
        return Err(Error::InsufficientData(
            "no frame with two or more pedestrians that have velocities".into(),
        ));
    }

    let (mut lo, mut hi) = pairs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    if hi <= lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let bins = cfg.fd_density_bins;
    let width = (hi - lo) / bins as f64;
    let mut sums = vec![0.0; bins];
    let mut counts = vec![0usize; bins];
    for &(rho, speed) in &pairs {
        let k = (((rho - lo) / width).floor().max(0.0) as usize).min(bins - 1);
        sums[k] += speed;
        counts[k] += 1;
    }
    let density_edges: Vec<f64> = (0..=bins).map(|k| lo + width * k as f64).collect();
    Ok(FundamentalDiagram {
        density_centers: density_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
        density_edges,
        mean_speed: sums
            .iter()
            .zip(&counts)
            .map(|(s, &n)| (n > 0).then(|| s / n as f64))
            .collect(),
        counts,
    })
}
