//! Reference-vs-candidate comparison tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SCHEMA_VERSION;

use super::distance::histogram_distance;
use super::{ErrorInfo, Outcome, SceneReport, Statistic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// Candidate value compared against the reference value.
    Statistic,
    /// Candidate value is its distribution's distance to the reference one.
    Distance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    pub value: Option<f64>,
    /// Absolute difference from the reference; for distance rows, the distance itself.
    pub delta: Option<f64>,
    pub error: Option<ErrorInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub metric: String,
    pub scene_id: String,
    pub kind: RowKind,
    pub reference: Option<f64>,
    pub reference_error: Option<ErrorInfo>,
    pub cells: Vec<Cell>,
    /// Index into `cells` of the smallest delta; earlier candidates win ties.
    pub closest: Option<usize>,
    /// Some cell or the reference itself is missing.
    pub partial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub schema_version: u32,
    pub scene_id: String,
    pub reference_label: String,
    pub candidates: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn row(&self, metric: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    /// Label of the closest candidate for `metric`.
    pub fn closest_label(&self, metric: &str) -> Option<&str> {
        let row = self.row(metric)?;
        row.closest.map(|k| row.cells[k].label.as_str())
    }
}

impl ComparisonRow {
    fn format(&self, v: Option<f64>) -> String {
        match (v, self.kind) {
            (None, _) => "-".to_string(),
            (Some(x), RowKind::Statistic) => format!("{x:.2}"),
            (Some(x), RowKind::Distance) => format!("{x:.4}"),
        }
    }

    /// Reference column followed by one column per candidate, closest starred.
    fn text_cells(&self) -> Vec<String> {
        let reference = match self.kind {
            RowKind::Statistic => self.format(self.reference),
            RowKind::Distance => "-".to_string(),
        };
        std::iter::once(reference)
            .chain(self.cells.iter().enumerate().map(|(k, c)| {
                let star = if self.closest == Some(k) { "*" } else { "" };
                format!("{}{star}", self.format(c.value))
            }))
            .collect()
    }
}

impl ComparisonTable {
    /// Fixed-width text rendering; the closest candidate in each row carries a `*`.
    pub fn render_text(&self) -> String {
        let mut lines: Vec<Vec<String>> = vec![std::iter::once("metric".to_string())
            .chain(std::iter::once("scene".to_string()))
            .chain(std::iter::once(self.reference_label.clone()))
            .chain(self.candidates.iter().cloned())
            .collect()];
        for row in &self.rows {
            let mut line = vec![row.metric.clone(), row.scene_id.clone()];
            line.extend(row.text_cells());
            if row.partial {
                line.push("(partial)".to_string());
            }
            lines.push(line);
        }
        let ncols = lines.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..ncols)
            .map(|c| lines.iter().filter_map(|l| l.get(c)).map(String::len).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in &lines {
            let padded: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(c, s)| if c < 2 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    /// One line per row: metric, scene, reference, each candidate value, closest label.
    pub fn render_csv(&self) -> String {
        let mut out = format!("metric,scene,{}", self.reference_label);
        for c in &self.candidates {
            out.push_str(&format!(",{c}"));
        }
        out.push_str(",closest,partial\n");
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &self.rows {
            out.push_str(&format!("{},{},{}", row.metric, row.scene_id, num(row.reference)));
            for c in &row.cells {
                out.push_str(&format!(",{}", num(c.value)));
            }
            let closest = row.closest.map(|k| row.cells[k].label.as_str()).unwrap_or("");
            out.push_str(&format!(",{closest},{}\n", row.partial));
        }
        out
    }
}

fn argmin(cells: &[Cell]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (k, c) in cells.iter().enumerate() {
        if let Some(d) = c.delta {
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((k, d));
            }
        }
    }
    best.map(|(k, _)| k)
}

fn finish_row(metric: &str, scene_id: &str, kind: RowKind, reference: &Outcome<f64>, cells: Vec<Cell>) -> ComparisonRow {
    let closest = argmin(&cells);
    ComparisonRow {
        metric: metric.to_string(),
        scene_id: scene_id.to_string(),
        kind,
        reference: reference.ok().copied(),
        reference_error: reference.err().cloned(),
        partial: reference.err().is_some() || cells.iter().any(|c| c.delta.is_none()),
        closest,
        cells,
    }
}

fn statistic_row(gt: &SceneReport, candidates: &[SceneReport], s: Statistic) -> ComparisonRow {
    let reference = gt.statistics.get(s);
    let cells = candidates
        .iter()
        .map(|c| {
            let v = c.statistics.get(s);
            Cell {
                label: c.label.clone(),
                value: v.ok().copied(),
                delta: match (reference.ok(), v.ok()) {
                    (Some(r), Some(x)) => Some((x - r).abs()),
                    _ => None,
                },
                error: v.err().cloned(),
            }
        })
        .collect();
    finish_row(s.key(), &gt.scene_id, RowKind::Statistic, reference, cells)
}

fn distance_row<T, H>(
    gt: &SceneReport,
    candidates: &[SceneReport],
    metric: &str,
    field: impl Fn(&SceneReport) -> &Outcome<T>,
    hist: impl Fn(&T) -> &H,
) -> ComparisonRow
where
    H: super::HistogramDistance,
{
    let zero: Outcome<f64> = match field(gt) {
        Outcome::Ok(_) => Outcome::Ok(0.0),
        Outcome::Err(e) => Outcome::Err(e.clone()),
    };
    let cells = candidates
        .iter()
        .map(|c| {
            let d: Result<f64> = match (field(gt), field(c)) {
                (Outcome::Ok(g), Outcome::Ok(x)) => histogram_distance(hist(x), hist(g)),
                (_, Outcome::Err(e)) => Err(Error::NotComputed(format!("{}: {}", e.kind, e.message))),
                (Outcome::Err(_), _) => Err(Error::NotComputed("reference distribution missing".into())),
            };
            let error = d.as_ref().err().map(ErrorInfo::from);
            Cell {
                label: c.label.clone(),
                value: d.as_ref().ok().copied(),
                delta: d.ok(),
                error,
            }
        })
        .collect();
    finish_row(metric, &gt.scene_id, RowKind::Distance, &zero, cells)
}

/// One row per statistic, then one row per comparable distribution, with the
/// candidate closest to the reference flagged in each.
pub fn compare_reports(gt: &SceneReport, candidates: &[SceneReport]) -> Result<ComparisonTable> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    if let Some(c) = candidates.iter().find(|c| c.scene_id != gt.scene_id) {
        return Err(Error::SceneMismatch {
            expected: gt.scene_id.clone(),
            found: c.scene_id.clone(),
        });
    }
    let mut rows: Vec<ComparisonRow> = Statistic::ALL
        .iter()
        .map(|&s| statistic_row(gt, candidates, s))
        .collect();
    rows.push(distance_row(gt, candidates, "longitudinal_velocity_emd", |r| &r.longitudinal_velocity, |l| &l.histogram));
    rows.push(distance_row(gt, candidates, "nearest_neighbor_l1", |r| &r.nearest_neighbor, |h| h));
    rows.push(distance_row(gt, candidates, "position_heatmap_l1", |r| &r.position_heatmap, |h| h));
    Ok(ComparisonTable {
        schema_version: SCHEMA_VERSION,
        scene_id: gt.scene_id.clone(),
        reference_label: gt.label.clone(),
        candidates: candidates.iter().map(|c| c.label.clone()).collect(),
        rows,
    })
}
