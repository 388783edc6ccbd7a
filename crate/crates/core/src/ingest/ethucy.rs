//! Processed ETH/UCY annotations: `frame_id ped_id x y`, positions already in meters.

use std::collections::BTreeMap;
use std::io::BufRead;

use super::{is_skippable, numbered_lines, parse_f64, parse_int};
use crate::error::{Error, Result};
use crate::geometry::WorldPoint;
use crate::trajectory::{Sample, Trajectory, TrajectorySet};

pub fn parse_ethucy<R: BufRead>(reader: R, scene_id: &str, fps: f64) -> Result<TrajectorySet> {
    let mut by_id: BTreeMap<i64, Vec<(Sample, usize)>> = BTreeMap::new();
    for item in numbered_lines(reader) {
        let (line, text) = item?;
        if is_skippable(&text) {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line,
                message: format!("expected 4 whitespace-separated fields, found {}", fields.len()),
            });
        }
        let frame = parse_int(fields[0], line, "frame_id")?;
        if frame < 0 {
            return Err(Error::Parse {
                line,
                message: format!("negative frame_id {frame}"),
            });
        }
        let id = parse_int(fields[1], line, "ped_id")?;
        let x = parse_f64(fields[2], line, "x")?;
        let y = parse_f64(fields[3], line, "y")?;
        by_id.entry(id).or_default().push((
            Sample {
                frame: frame as u64,
                position: WorldPoint::new(x, y),
            },
            line,
        ));
    }
    let trajectories = by_id
        .into_iter()
        .map(|(id, mut rows)| {
            rows.sort_by_key(|(s, line)| (s.frame, *line));
            if let Some(w) = rows.windows(2).find(|w| w[0].0.frame == w[1].0.frame) {
                return Err(Error::DuplicateSample {
                    id,
                    frame: w[0].0.frame,
                });
            }
            Trajectory::new(id, rows.into_iter().map(|(s, _)| s).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    TrajectorySet::new(scene_id, fps, trajectories)
}
