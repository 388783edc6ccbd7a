//! MOTChallenge-style tracker output.
//!
//! `frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z` per line. Frames
//! are 1-based on disk and re-based to 0 in memory. The trailing world
//! coordinates are ignored; a confidence of `-1` (or a missing column) means
//! "not provided".

use std::io::{BufRead, Write};

use super::{is_skippable, numbered_lines, parse_f64, parse_int, Detection, DetectionTable};
use crate::error::{Error, Result};
use crate::geometry::BoundingBox;

const MIN_FIELDS: usize = 6;
const MAX_FIELDS: usize = 10;

pub fn parse_mot<R: BufRead>(reader: R, source: &str) -> Result<DetectionTable> {
    let mut detections = Vec::new();
    for item in numbered_lines(reader) {
        let (line, text) = item?;
        if is_skippable(&text) {
            continue;
        }
        detections.push(parse_row(&text, line)?);
    }
    Ok(DetectionTable {
        source: source.to_owned(),
        detections,
    })
}

fn parse_row(text: &str, line: usize) -> Result<Detection> {
    let fields: Vec<&str> = text.split(',').collect();
    if !(MIN_FIELDS..=MAX_FIELDS).contains(&fields.len()) {
        return Err(Error::Parse {
            line,
            message: format!(
                "expected {MAX_FIELDS} comma-separated fields, found {}",
                fields.len()
            ),
        });
    }
    let frame = parse_int(fields[0], line, "frame")?;
    if frame < 1 {
        return Err(Error::Parse {
            line,
            message: format!("frame numbers start at 1, found {frame}"),
        });
    }
    let pedestrian_id = parse_int(fields[1], line, "id")?;
    let left = parse_f64(fields[2], line, "bb_left")?;
    let top = parse_f64(fields[3], line, "bb_top")?;
    let width = parse_f64(fields[4], line, "bb_width")?;
    let height = parse_f64(fields[5], line, "bb_height")?;
    let bbox = BoundingBox::new(left, top, width, height).ok_or(Error::InvalidBox {
        line,
        width,
        height,
    })?;
    let confidence = match fields.get(6) {
        None => None,
        Some(f) => {
            let c = parse_f64(f, line, "conf")?;
            if c == -1.0 {
                None
            } else if (0.0..=1.0).contains(&c) {
                Some(c)
            } else {
                return Err(Error::Parse {
                    line,
                    message: format!("conf must lie in [0, 1] or be -1, found {c}"),
                });
            }
        }
    };
    // remaining columns only need to be numeric
    for (k, f) in fields.iter().enumerate().skip(7) {
        parse_f64(f, line, ["x", "y", "z"][k - 7])?;
    }
    Ok(Detection {
        frame_index: frame as u64 - 1,
        pedestrian_id,
        bbox,
        confidence,
    })
}

/// Writes the table back in 10-column form with 1-based frames.
pub fn write_mot<W: Write>(table: &DetectionTable, mut out: W) -> std::io::Result<()> {
    for d in &table.detections {
        writeln!(
            out,
            "{},{},{},{},{},{},{},-1,-1,-1",
            d.frame_index + 1,
            d.pedestrian_id,
            d.bbox.left,
            d.bbox.top,
            d.bbox.width,
            d.bbox.height,
            d.confidence.unwrap_or(-1.0)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> Result<DetectionTable> {
        parse_mot(s.as_bytes(), "test")
    }

    #[test]
    fn direct_field_mapping() {
        let t = parse("1,3,10,20,4,6,0.9,-1,-1,-1\n").unwrap();
        assert_eq!(
            t.detections,
            vec![Detection {
                frame_index: 0,
                pedestrian_id: 3,
                bbox: BoundingBox::new(10.0, 20.0, 4.0, 6.0).unwrap(),
                confidence: Some(0.9),
            }]
        );
    }

    #[test]
    fn empty_and_comment_lines() {
        assert!(parse("").unwrap().is_empty());
        let t = parse("# header\n\n2,1,0,0,1,1,1,-1,-1,-1\r\n\r\n").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.detections[0].frame_index, 1);
    }

    #[test]
    fn missing_confidence_defaults_to_one() {
        let t = parse("5,2,1,1,2,2\n5,3,1,1,2,2,-1,-1,-1,-1\n").unwrap();
        assert!(t.detections.iter().all(|d| d.confidence.is_none() && d.score() == 1.0));
    }

    #[test]
    fn wrong_field_count_names_line() {
        let err = parse("1,1,0,0,1,1,1,-1,-1,-1\n1,2,3,4,5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn non_numeric_and_bad_boxes() {
        assert!(matches!(parse("1,a,0,0,1,1,1,-1,-1,-1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("1,1,0,0,0,1,1,-1,-1,-1"), Err(Error::InvalidBox { line: 1, .. })));
        assert!(matches!(parse("1,1,0,0,1,-3,1,-1,-1,-1"), Err(Error::InvalidBox { .. })));
        assert!(matches!(parse("0,1,0,0,1,1,1,-1,-1,-1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1,1,0,0,1,1,1.5,-1,-1,-1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1,1,0,0,1,1,1,-1,-1,nan"), Err(Error::Parse { .. })));
    }

    #[test]
    fn invalid_utf8_is_a_parse_error() {
        let bytes = b"1,1,0,0,1,1,1,-1,-1,-1\n\xff\xfe,1\n";
        assert!(matches!(parse_mot(&bytes[..], "x"), Err(Error::Parse { line: 2, .. })));
    }

    fn arb_detection() -> impl Strategy<Value = Detection> {
        (
            0u64..100_000,
            -5i64..10_000,
            -1e4f64..1e4,
            -1e4f64..1e4,
            1e-3f64..500.0,
            1e-3f64..500.0,
            prop::option::of(0.0f64..=1.0),
        )
            .prop_map(|(frame_index, pedestrian_id, l, t, w, h, confidence)| Detection {
                frame_index,
                pedestrian_id,
                bbox: BoundingBox::new(l, t, w, h).unwrap(),
                confidence,
            })
    }

    proptest! {
        #[test]
        fn write_then_parse_round_trips(dets in prop::collection::vec(arb_detection(), 0..50)) {
            let table = DetectionTable { source: "rt".into(), detections: dets };
            let mut buf = Vec::new();
            write_mot(&table, &mut buf).unwrap();
            prop_assert_eq!(parse_mot(&buf[..], "rt").unwrap(), table);
        }

        #[test]
        fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
            let _ = parse_mot(&bytes[..], "fuzz");
        }

        #[test]
        fn near_miss_text_never_panics(s in "[0-9,.\\-e \n#a]{0,200}") {
            let _ = parse_mot(s.as_bytes(), "fuzz");
        }
    }
}
