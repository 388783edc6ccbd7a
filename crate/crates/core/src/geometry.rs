//! Image-plane and ground-plane primitives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Determinants below this magnitude are treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;
/// Homogeneous scales below this magnitude cannot be dehomogenized.
pub const DEGENERATE_SCALE: f64 = 1e-12;

/// Continuous pixel coordinates: `u` grows along columns, `v` along rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelPoint {
    pub u: f64,
    pub v: f64,
}

impl PixelPoint {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }
}

/// Ground-plane position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WorldPoint {
    pub x: f64,
    pub y: f64,
}

impl WorldPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &WorldPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Axis-aligned pixel box in `left, top, width, height` form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl BoundingBox {
    /// Returns `None` unless every field is finite and the box has positive extent.
    pub fn new(left: f64, top: f64, width: f64, height: f64) -> Option<Self> {
        let finite = [left, top, width, height].iter().all(|v| v.is_finite());
        (finite && width > 0.0 && height > 0.0).then_some(Self {
            left,
            top,
            width,
            height,
        })
    }

    pub fn translated(&self, du: f64, dv: f64) -> Self {
        Self {
            left: self.left + du,
            top: self.top + dv,
            ..*self
        }
    }
}

/// Bottom midpoint of the box: where the pedestrian touches the ground.
pub fn ground_contact(bbox: &BoundingBox) -> PixelPoint {
    PixelPoint::new(bbox.left + bbox.width / 2.0, bbox.top + bbox.height)
}

/// Row-major 3x3 projective transform mapping pixels to world meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Homography(pub [[f64; 3]; 3]);

impl Homography {
    pub const IDENTITY: Homography =
        Homography([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// Validates invertibility.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let h = Homography(m);
        let det = h.determinant();
        if !det.is_finite() || det.abs() < SINGULAR_DET {
            return Err(Error::SingularMatrix { det });
        }
        Ok(h)
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|v| *v *= c);
        Homography(m)
    }

    /// Applies the transform and dehomogenizes.
    pub fn apply(&self, p: PixelPoint) -> Result<WorldPoint> {
        let m = &self.0;
        let x = m[0][0] * p.u + m[0][1] * p.v + m[0][2];
        let y = m[1][0] * p.u + m[1][1] * p.v + m[1][2];
        let w = m[2][0] * p.u + m[2][1] * p.v + m[2][2];
        if !w.is_finite() || w.abs() < DEGENERATE_SCALE {
            return Err(Error::DegenerateProjection { u: p.u, v: p.v, w });
        }
        Ok(WorldPoint::new(x / w, y / w))
    }
}

/// Per-scene camera model: pixel-to-ground homography and video frame rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneCalibration {
    pub homography: Homography,
    pub fps: f64,
    pub scene_id: String,
}

impl SceneCalibration {
    pub fn new(homography: Homography, fps: f64, scene_id: impl Into<String>) -> Result<Self> {
        let det = homography.determinant();
        if !det.is_finite() || det.abs() < SINGULAR_DET {
            return Err(Error::SingularMatrix { det });
        }
        if !(fps.is_finite() && fps > 0.0) {
            return Err(Error::InvalidConfig(format!("fps must be positive, got {fps}")));
        }
        Ok(Self {
            homography,
            fps,
            scene_id: scene_id.into(),
        })
    }
}

/// Maps a pixel to the ground plane through the scene homography.
pub fn project(calib: &SceneCalibration, p: PixelPoint) -> Result<WorldPoint> {
    calib.homography.apply(p)
}
