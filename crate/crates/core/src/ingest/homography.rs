use std::io::BufRead;

use super::{is_skippable, numbered_lines, parse_f64};
use crate::error::{Error, Result};
use crate::geometry::Homography;

/// Reads nine whitespace-separated numbers (three rows) into a row-major homography.
pub fn parse_homography<R: BufRead>(reader: R) -> Result<Homography> {
    let mut values = Vec::with_capacity(9);
    let mut last_line = 0;
    for item in numbered_lines(reader) {
        let (line, text) = item?;
        last_line = line;
        if is_skippable(&text) {
            continue;
        }
        for tok in text.split_whitespace() {
            if values.len() == 9 {
                return Err(Error::Parse {
                    line,
                    message: "more than 9 values".into(),
                });
            }
            values.push(parse_f64(tok, line, "homography entry")?);
        }
    }
    if values.len() != 9 {
        return Err(Error::Parse {
            line: last_line,
            message: format!("expected 9 values, found {}", values.len()),
        });
    }
    let mut m = [[0.0; 3]; 3];
    for (k, v) in values.into_iter().enumerate() {
        m[k / 3][k % 3] = v;
    }
    Homography::new(m)
}
