//! Per-scene metric reports and reference-vs-candidate comparison tables.

mod distance;
mod table;

use serde::{Deserialize, Serialize};

use crate::camfilter::{CameraLabel, CameraVerdict};
use crate::dynamics::{
    self, Axis, ConvexPolygon, DynamicsConfig, Extent, FundamentalDiagram, GaussianFit, Histogram1D, Histogram2D,
    PolarHistogram,
};
use crate::error::{Error, Result};
use crate::ingest::CoverageReport;
use crate::trajectory::TrajectorySet;
use crate::SCHEMA_VERSION;

pub use distance::{histogram_distance, HistogramDistance};
pub use table::{compare_reports, Cell, ComparisonRow, ComparisonTable, RowKind};

/// Structured form of an [`Error`] as stored in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        Self {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

/// A metric value or the reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome<T> {
    Ok(T),
    Err(ErrorInfo),
}

impl<T> Outcome<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(v) => Some(v),
            Outcome::Err(_) => None,
        }
    }

    pub fn err(&self) -> Option<&ErrorInfo> {
        match self {
            Outcome::Ok(_) => None,
            Outcome::Err(e) => Some(e),
        }
    }

    pub fn not_computed(what: &str) -> Self {
        Outcome::from(Err(Error::NotComputed(what.to_string())))
    }
}

impl<T> From<Result<T>> for Outcome<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Err(ErrorInfo::from(&e)),
        }
    }
}

/// The four tabulated scene statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    StationaryPct,
    AvgSpeed,
    DistTraveled,
    PassingDist,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::StationaryPct,
        Statistic::AvgSpeed,
        Statistic::DistTraveled,
        Statistic::PassingDist,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Statistic::StationaryPct => "stationary_pct",
            Statistic::AvgSpeed => "avg_speed",
            Statistic::DistTraveled => "dist_traveled",
            Statistic::PassingDist => "passing_dist",
        }
    }

    pub fn title(&self) -> &'static str {
        match self {
            Statistic::StationaryPct => "% Stationary",
            Statistic::AvgSpeed => "Avg Speed",
            Statistic::DistTraveled => "Dist Traveled",
            Statistic::PassingDist => "Passing Dist",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneStatistics {
    /// Percent of pedestrians.
    pub stationary_pct: Outcome<f64>,
    /// m/s
    pub avg_speed: Outcome<f64>,
    /// m per pedestrian
    pub dist_traveled: Outcome<f64>,
    /// m
    pub passing_dist: Outcome<f64>,
}

impl SceneStatistics {
    pub fn get(&self, s: Statistic) -> &Outcome<f64> {
        match s {
            Statistic::StationaryPct => &self.stationary_pct,
            Statistic::AvgSpeed => &self.avg_speed,
            Statistic::DistTraveled => &self.dist_traveled,
            Statistic::PassingDist => &self.passing_dist,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongitudinalDistribution {
    pub axis: Axis,
    pub histogram: Histogram1D,
    pub fit: GaussianFit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClipCounts {
    pub total: usize,
    #[serde(rename = "static")]
    pub static_: usize,
    pub moving: usize,
    pub indeterminate: usize,
}

impl ClipCounts {
    pub fn from_verdicts<'a>(verdicts: impl IntoIterator<Item = &'a CameraVerdict>) -> Self {
        let mut c = ClipCounts::default();
        for v in verdicts {
            c.total += 1;
            match v.label {
                CameraLabel::Static => c.static_ += 1,
                CameraLabel::Moving => c.moving += 1,
                CameraLabel::Indeterminate => c.indeterminate += 1,
            }
        }
        c
    }
}

/// Every metric for one trajectory set, each present or carrying its error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneReport {
    pub schema_version: u32,
    pub scene_id: String,
    pub label: String,
    pub statistics: SceneStatistics,
    pub longitudinal_velocity: Outcome<LongitudinalDistribution>,
    pub fundamental_diagram: Outcome<FundamentalDiagram>,
    pub nearest_neighbor: Outcome<PolarHistogram>,
    pub position_heatmap: Outcome<Histogram2D>,
    pub coverage: Option<CoverageReport>,
    pub clips: Option<ClipCounts>,
}

/// Overrides for the spatial binning used by [`scene_report_with`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportOptions {
    /// Heatmap extent; pass the reference set's extent so grids line up.
    pub heatmap_extent: Option<Extent>,
    /// Voronoi clipping region for the fundamental diagram.
    pub boundary: Option<ConvexPolygon>,
}

pub fn scene_report(set: &TrajectorySet, cfg: &DynamicsConfig, label: &str) -> Result<SceneReport> {
    scene_report_with(set, cfg, label, &ReportOptions::default())
}

/// Runs every dynamics estimator. Only an empty set is fatal; every other
/// failure is recorded against its metric.
pub fn scene_report_with(
    set: &TrajectorySet,
    cfg: &DynamicsConfig,
    label: &str,
    opts: &ReportOptions,
) -> Result<SceneReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let longitudinal = dynamics::primary_axis(set, cfg).and_then(|axis| {
        let (histogram, fit) = dynamics::longitudinal_velocity_distribution(set, cfg)?;
        Ok(LongitudinalDistribution { axis, histogram, fit })
    });
    Ok(SceneReport {
        schema_version: SCHEMA_VERSION,
        scene_id: set.scene_id.clone(),
        label: label.to_string(),
        statistics: SceneStatistics {
            stationary_pct: dynamics::stationary_fraction(set, cfg).into(),
            avg_speed: dynamics::average_speed(set, cfg).into(),
            dist_traveled: dynamics::mean_distance_traveled(set).into(),
            passing_dist: dynamics::passing_distance(set, cfg).into(),
        },
        longitudinal_velocity: longitudinal.into(),
        fundamental_diagram: dynamics::fundamental_diagram(set, cfg, opts.boundary.as_ref()).into(),
        nearest_neighbor: dynamics::nearest_neighbor_polar(set, cfg).into(),
        position_heatmap: dynamics::position_heatmap(set, cfg, opts.heatmap_extent).into(),
        coverage: None,
        clips: None,
    })
}

impl SceneReport {
    /// Report carrying only the four statistics, e.g. values quoted from a
    /// published table. Distributions are marked as not computed.
    pub fn from_statistics(scene_id: &str, label: &str, values: [f64; 4]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scene_id: scene_id.to_string(),
            label: label.to_string(),
            statistics: SceneStatistics {
                stationary_pct: Outcome::Ok(values[0]),
                avg_speed: Outcome::Ok(values[1]),
                dist_traveled: Outcome::Ok(values[2]),
                passing_dist: Outcome::Ok(values[3]),
            },
            longitudinal_velocity: Outcome::not_computed("longitudinal_velocity"),
            fundamental_diagram: Outcome::not_computed("fundamental_diagram"),
            nearest_neighbor: Outcome::not_computed("nearest_neighbor"),
            position_heatmap: Outcome::not_computed("position_heatmap"),
            coverage: None,
            clips: None,
        }
    }
}
