//! Binary PGM (`P5`, maxval 255) frames.
//!
//! Video is converted to numbered PGM files outside the toolkit, e.g.
//! `ffmpeg -i clip.mp4 -pix_fmt gray frames/%05d.pgm`. Lexicographic file
//! order is temporal order.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayFrame {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
    pub timestamp: f64,
}

impl GrayFrame {
    pub fn new(width: usize, height: usize, data: Vec<u8>, timestamp: f64) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Format {
                path: String::new(),
                message: format!(
                    "buffer holds {} bytes, expected {}x{} = {}",
                    data.len(),
                    width,
                    height,
                    width * height
                ),
            });
        }
        Ok(Self {
            width,
            height,
            data,
            timestamp,
        })
    }

    pub fn from_fn(width: usize, height: usize, timestamp: f64, f: impl Fn(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
            timestamp,
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Frames of one clip, equally sized, with strictly increasing timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayFrameSequence {
    frames: Vec<GrayFrame>,
    fps: f64,
}

impl GrayFrameSequence {
    pub fn new(frames: Vec<GrayFrame>, fps: f64) -> Result<Self> {
        if !(fps.is_finite() && fps > 0.0) {
            return Err(Error::InvalidConfig(format!("fps must be positive, got {fps}")));
        }
        if let Some(first) = frames.first() {
            if let Some(bad) = frames.iter().find(|f| f.dims() != first.dims()) {
                return Err(Error::DimensionMismatch {
                    expected: first.dims(),
                    found: bad.dims(),
                });
            }
        }
        if frames.windows(2).any(|w| w[1].timestamp <= w[0].timestamp) {
            return Err(Error::InvalidConfig("frame timestamps must strictly increase".into()));
        }
        Ok(Self { frames, fps })
    }

    /// Stamps frame `k` with `k / fps`.
    pub fn from_frames_at(frames: Vec<GrayFrame>, fps: f64) -> Result<Self> {
        let frames = frames
            .into_iter()
            .enumerate()
            .map(|(k, f)| GrayFrame {
                timestamp: k as f64 / fps,
                ..f
            })
            .collect();
        Self::new(frames, fps)
    }

    pub fn frames(&self) -> &[GrayFrame] {
        &self.frames
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Decodes a binary PGM. `label` only appears in error messages.
pub fn parse_pgm(bytes: &[u8], label: &str) -> Result<GrayFrame> {
    let fail = |message: String| Error::Format {
        path: label.to_owned(),
        message,
    };
    let mut pos = 0usize;
    let token = |pos: &mut usize| -> Option<String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
            *pos += 1;
        }
        (start < *pos).then(|| String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };

    let magic = token(&mut pos).ok_or_else(|| fail("empty file".into()))?;
    if magic != "P5" {
        return Err(fail(format!("expected binary PGM magic P5, found {magic:?}")));
    }
    let mut header = [0usize; 3];
    for (slot, name) in header.iter_mut().zip(["width", "height", "maxval"]) {
        let tok = token(&mut pos).ok_or_else(|| fail(format!("missing {name}")))?;
        *slot = tok
            .parse()
            .map_err(|_| fail(format!("invalid {name} {tok:?}")))?;
    }
    let [width, height, maxval] = header;
    if maxval != 255 {
        return Err(fail(format!("maxval must be 255, found {maxval}")));
    }
    if width == 0 || height == 0 {
        return Err(fail("zero-sized image".into()));
    }
    // exactly one whitespace byte separates the header from the raster
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(fail("missing raster".into()));
    }
    pos += 1;
    let n = width
        .checked_mul(height)
        .ok_or_else(|| fail("image dimensions overflow".into()))?;
    let raster = bytes
        .get(pos..)
        .filter(|r| r.len() >= n)
        .ok_or_else(|| fail(format!("raster truncated: need {n} bytes")))?;
    Ok(GrayFrame {
        width,
        height,
        data: raster[..n].to_vec(),
        timestamp: 0.0,
    })
}

pub fn write_pgm<W: Write>(frame: &GrayFrame, mut out: W) -> std::io::Result<()> {
    write!(out, "P5\n{} {}\n255\n", frame.width, frame.height)?;
    out.write_all(&frame.data)
}

/// Loads every `*.pgm` in `dir` in lexicographic order, stamping frame `k` with `k / fps`.
pub fn load_frames(dir: &Path, fps: f64) -> Result<GrayFrameSequence> {
    let io_err = |p: &Path, e: std::io::Error| Error::Io {
        path: p.display().to_string(),
        message: e.to_string(),
    };
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| io_err(dir, e))? {
        let path = entry.map_err(|e| io_err(dir, e))?.path();
        let is_pgm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
        if is_pgm && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    let mut frames: Vec<GrayFrame> = Vec::with_capacity(paths.len());
    for path in &paths {
        let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
        let frame = parse_pgm(&bytes, &path.display().to_string())?;
        if let Some(first) = frames.first() {
            if first.dims() != frame.dims() {
                return Err(Error::DimensionMismatch {
                    expected: first.dims(),
                    found: frame.dims(),
                });
            }
        }
        frames.push(frame);
    }
    GrayFrameSequence::from_frames_at(frames, fps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(w: usize, h: usize) -> GrayFrame {
        GrayFrame::from_fn(w, h, 0.0, |x, y| ((x * 7 + y * 3) % 256) as u8)
    }

    fn save(dir: &Path, name: &str, f: &GrayFrame) {
        let mut buf = Vec::new();
        write_pgm(f, &mut buf).unwrap();
        fs::write(dir.join(name), buf).unwrap();
    }

    #[test]
    fn pgm_round_trip_with_comments() {
        let f = frame(5, 3);
        let mut buf = b"P5\n# produced by a test\n5 3\n# more\n255\n".to_vec();
        buf.extend_from_slice(&f.data);
        assert_eq!(parse_pgm(&buf, "mem").unwrap(), f);
    }

    #[test]
    fn rejects_ascii_and_deep_pgm() {
        assert!(matches!(parse_pgm(b"P2\n2 1\n255\n0 0\n", "a"), Err(Error::Format { .. })));
        assert!(matches!(parse_pgm(b"P5\n1 1\n65535\n\0\0", "b"), Err(Error::Format { .. })));
        assert!(matches!(parse_pgm(b"P5\n4 4\n255\n\0\0", "c"), Err(Error::Format { .. })));
        assert!(matches!(parse_pgm(b"", "d"), Err(Error::Format { .. })));
    }

    #[test]
    fn loads_sorted_and_timestamped() {
        let dir = tempfile::tempdir().unwrap();
        for k in [2, 0, 1] {
            let f = GrayFrame::from_fn(64, 48, 0.0, move |_, _| k as u8 * 10);
            save(dir.path(), &format!("{k:03}.pgm"), &f);
        }
        fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        let seq = load_frames(dir.path(), 16.0).unwrap();
        let ts: Vec<f64> = seq.frames().iter().map(|f| f.timestamp).collect();
        assert_eq!(ts, vec![0.0, 0.0625, 0.125]);
        let firsts: Vec<u8> = seq.frames().iter().map(|f| f.data[0]).collect();
        assert_eq!(firsts, vec![0, 10, 20]);
    }

    #[test]
    fn mixed_sizes_rejected() {
        let dir = tempfile::tempdir().unwrap();
        save(dir.path(), "a.pgm", &frame(64, 48));
        save(dir.path(), "b.pgm", &frame(32, 24));
        assert!(matches!(load_frames(dir.path(), 16.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn ascii_file_in_directory_is_format_error() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.pgm"), "P2\n2 1\n255\n0 0\n").unwrap();
        assert!(matches!(load_frames(dir.path(), 16.0), Err(Error::Format { .. })));
    }
}
