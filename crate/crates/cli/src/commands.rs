use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use pedeval_core::camfilter::{classify_camera, CameraLabel, CameraMotionConfig, CameraVerdict};
use pedeval_core::compare::{compare_reports, scene_report_with, ClipCounts, ComparisonTable, ReportOptions, SceneReport};
use pedeval_core::dynamics::{DynamicsConfig, Extent};
use pedeval_core::geometry::Homography;
use pedeval_core::ingest::{
    load_frames, parse_ethucy, parse_homography, parse_mot, tracks_from_detections, validate_coverage,
    DEFAULT_COVERAGE_THRESHOLD,
};
use pedeval_core::{Error, SceneCalibration, TrajectorySet};

use crate::svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Ok = 0,
    InputError = 2,
    CoverageFailure = 3,
    Moving = 4,
    Indeterminate = 5,
}

pub type CmdResult = Result<Status, String>;

fn with_path(path: &Path) -> impl Fn(Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn open(path: &Path) -> Result<BufReader<File>, String> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, String> {
    serde_json::from_reader(open(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes to `path`, or standard output when absent.
fn emit(path: Option<&Path>, contents: &str) -> Result<(), String> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// MOTChallenge tracker output in pixels; projected through --homography.
    Mot,
    /// ETH/UCY `frame id x y` annotations already in meters.
    Ethucy,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, value_enum)]
    pub format: InputFormat,
    /// Detection or annotation file.
    #[arg(long)]
    pub detections: PathBuf,
    /// 3x3 image-to-ground homography, nine numbers row-major (MOT only; identity if omitted).
    #[arg(long)]
    pub homography: Option<PathBuf>,
    /// Video frame rate.
    #[arg(long, default_value_t = 16.0)]
    pub fps: f64,
    /// Scene identifier; defaults to the detection file stem.
    #[arg(long)]
    pub scene_id: Option<String>,
    /// Output trajectory JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Exit 3 when fewer detections than the coverage threshold were ingested.
    #[arg(long)]
    pub require_coverage: bool,
    #[arg(long, default_value_t = DEFAULT_COVERAGE_THRESHOLD)]
    pub coverage_threshold: usize,
}

pub fn ingest(a: &IngestArgs) -> CmdResult {
    let scene_id = match &a.scene_id {
        Some(s) => s.clone(),
        None => a
            .detections
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scene".to_string()),
    };
    let set = match a.format {
        InputFormat::Mot => {
            let homography = match &a.homography {
                Some(p) => parse_homography(open(p)?).map_err(with_path(p))?,
                None => Homography::IDENTITY,
            };
            let calib = SceneCalibration::new(homography, a.fps, scene_id).map_err(|e| e.to_string())?;
            let source = a.detections.display().to_string();
            let table = parse_mot(open(&a.detections)?, &source).map_err(with_path(&a.detections))?;
            tracks_from_detections(&table, &calib).map_err(with_path(&a.detections))?
        }
        InputFormat::Ethucy => {
            if a.homography.is_some() {
                return Err("--homography applies to MOT input only; ETH/UCY files are in meters".into());
            }
            parse_ethucy(open(&a.detections)?, &scene_id, a.fps).map_err(with_path(&a.detections))?
        }
    };
    write_file(&a.out, &to_json(&set))?;
    let coverage = validate_coverage(&set, a.coverage_threshold);
    print!("{}", to_json(&coverage));
    if a.require_coverage && !coverage.satisfied {
        eprintln!(
            "error: coverage not met: {} detections, need {}",
            coverage.detection_count, coverage.threshold
        );
        return Ok(Status::CoverageFailure);
    }
    Ok(Status::Ok)
}

#[derive(Debug, Args)]
pub struct CameraCheckArgs {
    /// Directory of binary PGM frames, read in file-name order.
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long, default_value_t = 16.0)]
    pub fps: f64,
    /// Reference frames sampled per second.
    #[arg(long)]
    pub sample_hz: Option<f64>,
    /// Feature displacement (px) above which a feature counts as moving.
    #[arg(long)]
    pub disp_thresh: Option<f64>,
    /// Fraction of moving features at or above which the camera is moving.
    #[arg(long)]
    pub moving_frac: Option<f64>,
    #[arg(long)]
    pub max_features: Option<usize>,
    #[arg(long)]
    pub quality_level: Option<f64>,
    #[arg(long)]
    pub min_corner_distance: Option<f64>,
    #[arg(long)]
    pub lk_window: Option<usize>,
    #[arg(long)]
    pub pyramid_levels: Option<usize>,
    #[arg(long)]
    pub lk_max_iters: Option<usize>,
    #[arg(long)]
    pub lk_epsilon: Option<f64>,
    #[arg(long)]
    pub min_valid_features: Option<usize>,
    /// Verdict JSON; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CameraCheckArgs {
    fn config(&self) -> CameraMotionConfig {
        let d = CameraMotionConfig::default();
        CameraMotionConfig {
            sample_hz: self.sample_hz.unwrap_or(d.sample_hz),
            disp_thresh_px: self.disp_thresh.unwrap_or(d.disp_thresh_px),
            moving_frac: self.moving_frac.unwrap_or(d.moving_frac),
            max_features: self.max_features.unwrap_or(d.max_features),
            quality_level: self.quality_level.unwrap_or(d.quality_level),
            min_corner_distance_px: self.min_corner_distance.unwrap_or(d.min_corner_distance_px),
            lk_window: self.lk_window.unwrap_or(d.lk_window),
            pyramid_levels: self.pyramid_levels.unwrap_or(d.pyramid_levels),
            lk_max_iters: self.lk_max_iters.unwrap_or(d.lk_max_iters),
            lk_epsilon: self.lk_epsilon.unwrap_or(d.lk_epsilon),
            min_valid_features: self.min_valid_features.unwrap_or(d.min_valid_features),
        }
    }
}

pub fn camera_check(a: &CameraCheckArgs) -> CmdResult {
    let cfg = a.config();
    cfg.validate().map_err(|e| e.to_string())?;
    let seq = load_frames(&a.frames, a.fps).map_err(with_path(&a.frames))?;
    let verdict = match classify_camera(&seq, &cfg) {
        Ok(v) => v,
        Err(e @ Error::SequenceTooShort { .. }) => {
            eprintln!("error: {}: {e}", a.frames.display());
            return Ok(Status::Indeterminate);
        }
        Err(e) => return Err(with_path(&a.frames)(e)),
    };
    emit(a.out.as_deref(), &to_json(&verdict))?;
    Ok(match verdict.label {
        CameraLabel::Static => Status::Ok,
        CameraLabel::Moving => Status::Moving,
        CameraLabel::Indeterminate => Status::Indeterminate,
    })
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Trajectory JSON written by `ingest`.
    #[arg(long)]
    pub trajectories: PathBuf,
    /// Model or source label stored in the report.
    #[arg(long, default_value = "gt")]
    pub label: String,
    /// Report JSON; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for heatmap.svg, velocity.svg, fundamental.svg and polar.svg.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Heatmap extent as min_x,max_x,min_y,max_y in meters.
    #[arg(long, value_parser = parse_extent, conflicts_with = "extent_from")]
    pub extent: Option<Extent>,
    /// Use the bounding box of this trajectory file as heatmap extent.
    #[arg(long)]
    pub extent_from: Option<PathBuf>,
    /// Camera verdict files of the clips behind this set, tallied into the report.
    #[arg(long)]
    pub verdict: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_COVERAGE_THRESHOLD)]
    pub coverage_threshold: usize,
    #[arg(long)]
    pub stationary_thresh: Option<f64>,
    #[arg(long)]
    pub passing_radius: Option<f64>,
    /// Count every close pair, not only mutual nearest neighbors.
    #[arg(long)]
    pub no_mutual_nn: bool,
    /// Count pairs that never approached each other.
    #[arg(long)]
    pub no_approach: bool,
    #[arg(long)]
    pub heatmap_bin: Option<f64>,
    #[arg(long)]
    pub fd_density_bins: Option<usize>,
    #[arg(long)]
    pub polar_r_max: Option<f64>,
    #[arg(long)]
    pub polar_r_bins: Option<usize>,
    #[arg(long)]
    pub polar_theta_bins: Option<usize>,
    #[arg(long)]
    pub velocity_bins: Option<usize>,
    #[arg(long)]
    pub velocity_max: Option<f64>,
    #[arg(long)]
    pub min_heading_speed: Option<f64>,
    #[arg(long)]
    pub smoothing_window: Option<usize>,
    #[arg(long)]
    pub boundary_margin: Option<f64>,
}

fn parse_extent(s: &str) -> Result<Extent, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [min_x, max_x, min_y, max_y] if min_x < max_x && min_y < max_y => Ok(Extent { min_x, max_x, min_y, max_y }),
        [_, _, _, _] => Err("extent needs min < max on both axes".into()),
        _ => Err("expected four comma-separated numbers".into()),
    }
}

impl MetricsArgs {
    fn config(&self) -> DynamicsConfig {
        let d = DynamicsConfig::default();
        DynamicsConfig {
            stationary_thresh_m: self.stationary_thresh.unwrap_or(d.stationary_thresh_m),
            passing_radius_m: self.passing_radius.unwrap_or(d.passing_radius_m),
            passing_require_mutual_nn: !self.no_mutual_nn,
            passing_require_approach: !self.no_approach,
            heatmap_bin_m: self.heatmap_bin.unwrap_or(d.heatmap_bin_m),
            fd_density_bins: self.fd_density_bins.unwrap_or(d.fd_density_bins),
            polar_r_max_m: self.polar_r_max.unwrap_or(d.polar_r_max_m),
            polar_r_bins: self.polar_r_bins.unwrap_or(d.polar_r_bins),
            polar_theta_bins: self.polar_theta_bins.unwrap_or(d.polar_theta_bins),
            velocity_hist_bins: self.velocity_bins.unwrap_or(d.velocity_hist_bins),
            velocity_hist_max_mps: self.velocity_max.unwrap_or(d.velocity_hist_max_mps),
            min_speed_for_heading_mps: self.min_heading_speed.unwrap_or(d.min_speed_for_heading_mps),
            velocity_smoothing_window: self.smoothing_window.unwrap_or(d.velocity_smoothing_window),
            boundary_margin_m: self.boundary_margin.unwrap_or(d.boundary_margin_m),
        }
    }
}

pub fn metrics(a: &MetricsArgs) -> CmdResult {
    let cfg = a.config();
    cfg.validate().map_err(|e| e.to_string())?;
    let set: TrajectorySet = read_json(&a.trajectories)?;
    let heatmap_extent = match (&a.extent, &a.extent_from) {
        (Some(e), _) => Some(*e),
        (None, Some(p)) => {
            let reference: TrajectorySet = read_json(p)?;
            Some(Extent::of(&reference).ok_or_else(|| format!("{}: no positions to take an extent from", p.display()))?)
        }
        (None, None) => None,
    };
    let opts = ReportOptions {
        heatmap_extent,
        boundary: None,
    };
    let mut report = scene_report_with(&set, &cfg, &a.label, &opts).map_err(with_path(&a.trajectories))?;
    report.coverage = Some(validate_coverage(&set, a.coverage_threshold));
    if !a.verdict.is_empty() {
        let verdicts: Vec<CameraVerdict> = a.verdict.iter().map(|p| read_json(p)).collect::<Result<_, _>>()?;
        report.clips = Some(ClipCounts::from_verdicts(&verdicts));
    }
    emit(a.out.as_deref(), &to_json(&report))?;
    if let Some(dir) = &a.svg {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        for (name, doc) in svg::render_all(&report) {
            write_file(&dir.join(name), &doc)?;
        }
    }
    Ok(Status::Ok)
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Reference report, one per scene.
    #[arg(long, required = true)]
    pub gt: Vec<PathBuf>,
    /// Candidate report as LABEL=PATH; repeat per model and scene.
    #[arg(long, required = true, value_parser = parse_candidate)]
    pub candidate: Vec<(String, PathBuf)>,
    /// Output path stem; writes STEM.json and STEM.txt.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write STEM.csv.
    #[arg(long)]
    pub csv: bool,
}

fn parse_candidate(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((label, path)) if !label.is_empty() && !path.is_empty() => Ok((label.to_string(), PathBuf::from(path))),
        _ => Err(format!("expected LABEL=PATH, got {s:?}")),
    }
}

fn build_tables(gts: &[SceneReport], candidates: &[SceneReport]) -> Result<Vec<ComparisonTable>, Error> {
    if let Some(c) = candidates.iter().find(|c| !gts.iter().any(|g| g.scene_id == c.scene_id)) {
        let expected: Vec<&str> = gts.iter().map(|g| g.scene_id.as_str()).collect();
        return Err(Error::SceneMismatch {
            expected: expected.join(","),
            found: c.scene_id.clone(),
        });
    }
    gts.iter()
        .map(|g| {
            let mine: Vec<SceneReport> = candidates.iter().filter(|c| c.scene_id == g.scene_id).cloned().collect();
            compare_reports(g, &mine)
        })
        .collect()
}

pub fn compare(a: &CompareArgs) -> CmdResult {
    let gts: Vec<SceneReport> = a.gt.iter().map(|p| read_json(p)).collect::<Result<_, _>>()?;
    let candidates: Vec<SceneReport> = a
        .candidate
        .iter()
        .map(|(label, p)| {
            read_json::<SceneReport>(p).map(|mut r| {
                r.label = label.clone();
                r
            })
        })
        .collect::<Result<_, _>>()?;
    let tables = build_tables(&gts, &candidates).map_err(|e| e.to_string())?;
    write_file(&a.out.with_extension("json"), &to_json(&tables))?;
    let text = tables.iter().map(|t| t.render_text()).collect::<Vec<_>>().join("\n");
    write_file(&a.out.with_extension("txt"), &text)?;
    if a.csv {
        let mut csv = String::new();
        for (k, t) in tables.iter().enumerate() {
            let rendered = t.render_csv();
            // one header for the whole file
            let body = if k == 0 { rendered.as_str() } else { rendered.split_once('\n').map_or("", |(_, b)| b) };
            csv.push_str(body);
        }
        write_file(&a.out.with_extension("csv"), &csv)?;
    }
    print!("{text}");
    Ok(Status::Ok)
}
