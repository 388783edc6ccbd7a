//! Float raster helpers for corner detection and optical flow.

use crate::ingest::GrayFrame;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    pub fn from_frame(frame: &GrayFrame) -> Self {
        Plane {
            width: frame.width,
            height: frame.height,
            data: frame.data.iter().map(|&v| f64::from(v)).collect(),
        }
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Replicate-border access.
    #[inline]
    pub fn at_clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.at(x, y)
    }

    /// Bilinear interpolation, coordinates clamped to the raster.
    #[inline]
    pub fn sample(&self, x: f64, y: f64) -> f64 {
        let x = x.clamp(0.0, (self.width - 1) as f64);
        let y = y.clamp(0.0, (self.height - 1) as f64);
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let top = self.at(x0, y0) * (1.0 - fx) + self.at(x1, y0) * fx;
        let bottom = self.at(x0, y1) * (1.0 - fx) + self.at(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Sobel derivatives scaled by 1/8 so they estimate intensity change per pixel.
    pub fn sobel(&self) -> (Plane, Plane) {
        let (w, h) = (self.width, self.height);
        let mut gx = vec![0.0; w * h];
        let mut gy = vec![0.0; w * h];
        for y in 0..h as isize {
            for x in 0..w as isize {
                let p = |dx: isize, dy: isize| self.at_clamped(x + dx, y + dy);
                let sx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
                let sy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
                let i = y as usize * w + x as usize;
                gx[i] = sx / 8.0;
                gy[i] = sy / 8.0;
            }
        }
        (
            Plane { width: w, height: h, data: gx },
            Plane { width: w, height: h, data: gy },
        )
    }

    /// 5-tap binomial blur followed by 2x decimation.
    pub fn pyr_down(&self) -> Plane {
        const K: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];
        let (w, h) = (self.width, self.height);
        let mut horiz = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w as isize {
                horiz[y * w + x as usize] = K
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * self.at_clamped(x + k as isize - 2, y as isize))
                    .sum();
            }
        }
        let tmp = Plane { width: w, height: h, data: horiz };
        let (nw, nh) = (w.div_ceil(2), h.div_ceil(2));
        let mut out = Vec::with_capacity(nw * nh);
        for y in 0..nh {
            for x in 0..nw {
                let sy = (2 * y) as isize;
                out.push(
                    K.iter()
                        .enumerate()
                        .map(|(k, c)| c * tmp.at_clamped(2 * x as isize, sy + k as isize - 2))
                        .sum(),
                );
            }
        }
        Plane { width: nw, height: nh, data: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> Plane {
        Plane {
            width: w,
            height: h,
            data: (0..w * h).map(|i| (i % w) as f64 * 2.0 + (i / w) as f64 * 0.5).collect(),
        }
    }

    #[test]
    fn sobel_recovers_linear_gradient_in_interior() {
        let p = ramp(8, 6);
        let (gx, gy) = p.sobel();
        assert_eq!(gx.at(3, 3), 2.0);
        assert_eq!(gy.at(3, 3), 0.5);
        // replicate border halves the one-sided difference
        assert_eq!(gx.at(0, 3), 1.0);
    }

    #[test]
    fn bilinear_is_exact_on_linear_images() {
        let p = ramp(8, 6);
        assert!((p.sample(2.25, 3.5) - (4.5 + 1.75)).abs() < 1e-12);
        assert_eq!(p.sample(7.0, 5.0), p.at(7, 5));
        assert_eq!(p.sample(-3.0, 0.0), p.at(0, 0));
    }

    #[test]
    fn pyr_down_halves_size_and_preserves_constants() {
        let p = Plane { width: 9, height: 4, data: vec![7.0; 36] };
        let d = p.pyr_down();
        assert_eq!((d.width, d.height), (5, 2));
        assert!(d.data.iter().all(|&v| (v - 7.0).abs() < 1e-12));
    }
}
