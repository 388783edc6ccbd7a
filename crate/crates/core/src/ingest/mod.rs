//! Readers for tracker output, benchmark annotations, homographies and frames,
//! plus assembly of detections into world-coordinate trajectories.

mod ethucy;
mod frames;
mod homography;
mod mot;

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ground_contact, BoundingBox, SceneCalibration};
use crate::trajectory::{Sample, Trajectory, TrajectorySet};

pub use ethucy::parse_ethucy;
pub use frames::{load_frames, parse_pgm, write_pgm, GrayFrame, GrayFrameSequence};
pub use homography::parse_homography;
pub use mot::{parse_mot, write_mot};

/// Minimum number of detections a scene needs before its statistics are trusted.
pub const DEFAULT_COVERAGE_THRESHOLD: usize = 1000;

/// One tracker output row. `frame_index` is 0-based in memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub frame_index: u64,
    pub pedestrian_id: i64,
    pub bbox: BoundingBox,
    pub confidence: Option<f64>,
}

impl Detection {
    /// Detection score, 1.0 when the source did not provide one.
    pub fn score(&self) -> f64 {
        self.confidence.unwrap_or(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectionTable {
    pub source: String,
    pub detections: Vec<Detection>,
}

impl DetectionTable {
    pub fn len(&self) -> usize {
        self.detections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detections.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub scene_id: String,
    pub detection_count: usize,
    pub threshold: usize,
    pub satisfied: bool,
}

/// Ground-contact projection of every detection, grouped by pedestrian id.
///
/// Trajectories come out in ascending id order. Two detections of the same
/// pedestrian in the same frame reject the whole table.
pub fn tracks_from_detections(
    table: &DetectionTable,
    calib: &SceneCalibration,
) -> Result<TrajectorySet> {
    let mut by_id: BTreeMap<i64, Vec<Sample>> = BTreeMap::new();
    for d in &table.detections {
        let px = ground_contact(&d.bbox);
        let position = calib.homography.apply(px).map_err(|e| match e {
            Error::DegenerateProjection { u, v, w } => Error::DetectionNotProjectable {
                id: d.pedestrian_id,
                frame: d.frame_index,
                u,
                v,
                w,
            },
            other => other,
        })?;
        by_id.entry(d.pedestrian_id).or_default().push(Sample {
            frame: d.frame_index,
            position,
        });
    }
    let trajectories = by_id
        .into_iter()
        .map(|(id, mut samples)| {
            samples.sort_by_key(|s| s.frame);
            if let Some(w) = samples.windows(2).find(|w| w[0].frame == w[1].frame) {
                return Err(Error::DuplicateSample {
                    id,
                    frame: w[0].frame,
                });
            }
            Trajectory::new(id, samples)
        })
        .collect::<Result<Vec<_>>>()?;
    TrajectorySet::new(calib.scene_id.clone(), calib.fps, trajectories)
}

/// Counts samples across all trajectories against the coverage threshold.
pub fn validate_coverage(set: &TrajectorySet, threshold: usize) -> CoverageReport {
    let detection_count = set.total_samples();
    CoverageReport {
        scene_id: set.scene_id.clone(),
        detection_count,
        threshold,
        satisfied: detection_count >= threshold,
    }
}

/// Numbered text lines with `\r\n` stripped. Non-UTF-8 content is a parse error.
pub(crate) fn numbered_lines<R: BufRead>(
    mut reader: R,
) -> impl Iterator<Item = Result<(usize, String)>> {
    let mut line_no = 0usize;
    let mut buf = Vec::new();
    std::iter::from_fn(move || {
        buf.clear();
        line_no += 1;
        match reader.read_until(b'\n', &mut buf) {
            Ok(0) => None,
            Ok(_) => {
                while matches!(buf.last(), Some(b'\n' | b'\r')) {
                    buf.pop();
                }
                Some(match std::str::from_utf8(&buf) {
                    Ok(s) => Ok((line_no, s.to_owned())),
                    Err(_) => Err(Error::Parse {
                        line: line_no,
                        message: "invalid UTF-8".into(),
                    }),
                })
            }
            Err(e) => Some(Err(Error::Parse {
                line: line_no,
                message: e.to_string(),
            })),
        }
    })
}

/// True for lines that carry no data.
pub(crate) fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

pub(crate) fn parse_f64(field: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("{what}: expected a number, found {:?}", field.trim()),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("{what}: non-finite value"),
        });
    }
    Ok(v)
}

/// Integer field; integral floats such as `780.0` are accepted.
pub(crate) fn parse_int(field: &str, line: usize, what: &str) -> Result<i64> {
    let t = field.trim();
    if let Ok(v) = t.parse::<i64>() {
        return Ok(v);
    }
    let v = parse_f64(t, line, what)?;
    if v.fract() != 0.0 || v.abs() > 9.0e15 {
        return Err(Error::Parse {
            line,
            message: format!("{what}: expected an integer, found {t:?}"),
        });
    }
    Ok(v as i64)
}
