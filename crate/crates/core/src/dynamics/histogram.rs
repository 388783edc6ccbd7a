//! Binned distributions shared by the dynamics estimators.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum-likelihood normal fit: sample mean and population (1/N) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianFit {
    pub mean: f64,
    pub std: f64,
    pub sample_count: usize,
}

impl GaussianFit {
    /// Two-pass fit; `None` for an empty sample.
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
        Some(Self {
            mean,
            std: var.sqrt(),
            sample_count: samples.len(),
        })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if self.std == 0.0 {
            return if x == self.mean { f64::INFINITY } else { 0.0 };
        }
        let z = (x - self.mean) / self.std;
        (-0.5 * z * z).exp() / (self.std * (2.0 * PI).sqrt())
    }
}

fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let w = (hi - lo) / bins as f64;
    (0..=bins).map(|k| lo + w * k as f64).collect()
}

/// Index of `x` among `bins` equal-width bins starting at `lo`, clamped to the outer bins.
fn clamped_bin(x: f64, lo: f64, width: f64, bins: usize) -> usize {
    let k = ((x - lo) / width).floor();
    if k < 0.0 {
        0
    } else {
        (k as usize).min(bins - 1)
    }
}

/// Equal-width 1D histogram. Samples beyond the range fall into the outer bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram1D {
    pub edges: Vec<f64>,
    pub counts: Vec<f64>,
    /// When set, `counts` hold probability densities (sum of density x width = 1).
    pub normalized: bool,
}

impl Histogram1D {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Self {
            edges: uniform_edges(lo, hi, bins),
            counts: vec![0.0; bins],
            normalized: false,
        }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self, k: usize) -> f64 {
        self.edges[k + 1] - self.edges[k]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn bin_of(&self, x: f64) -> usize {
        let n = self.bins();
        clamped_bin(x, self.edges[0], (self.edges[n] - self.edges[0]) / n as f64, n)
    }

    pub fn add(&mut self, x: f64) {
        let k = self.bin_of(x);
        self.counts[k] += 1.0;
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    /// Probability mass per bin.
    pub fn masses(&self) -> Result<Vec<f64>> {
        let per_bin: Vec<f64> = if self.normalized {
            (0..self.bins()).map(|k| self.counts[k] * self.bin_width(k)).collect()
        } else {
            self.counts.clone()
        };
        normalize(per_bin)
    }

    /// Density-normalized copy.
    pub fn to_normalized(&self) -> Result<Self> {
        let masses = self.masses()?;
        Ok(Self {
            edges: self.edges.clone(),
            counts: masses
                .iter()
                .enumerate()
                .map(|(k, m)| m / self.bin_width(k))
                .collect(),
            normalized: true,
        })
    }
}

/// 2D histogram over an axis-aligned extent, counts row-major by y then x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2D {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    pub counts: Vec<f64>,
    /// When set, `counts` hold per-bin probability mass summing to 1.
    pub normalized: bool,
}

impl Histogram2D {
    pub fn nx(&self) -> usize {
        self.x_edges.len() - 1
    }

    pub fn ny(&self) -> usize {
        self.y_edges.len() - 1
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.counts[iy * self.nx() + ix]
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn masses(&self) -> Result<Vec<f64>> {
        normalize(self.counts.clone())
    }

    pub fn to_normalized(&self) -> Result<Self> {
        Ok(Self {
            counts: self.masses()?,
            normalized: true,
            ..self.clone()
        })
    }
}

/// Radius x bearing histogram in an agent's heading frame.
///
/// Bearing 0 is straight ahead, counterclockwise positive. Bearing bins are
/// centered on `-pi + k * 2pi / n`, so bin 0 straddles +-pi (directly
/// behind) and bin `n / 2` is centered on "ahead" for even `n`. Radii beyond
/// the last edge are counted in the outermost ring. Counts are row-major by
/// radius then bearing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarHistogram {
    pub r_edges: Vec<f64>,
    /// `n + 1` edges starting at `-pi - pi/n`; the last bin wraps.
    pub theta_edges: Vec<f64>,
    pub counts: Vec<f64>,
    /// When set, `counts` hold per-bin probability mass summing to 1.
    pub normalized: bool,
}

impl PolarHistogram {
    pub fn new(r_max: f64, r_bins: usize, theta_bins: usize) -> Self {
        let half = PI / theta_bins as f64;
        Self {
            r_edges: uniform_edges(0.0, r_max, r_bins),
            theta_edges: uniform_edges(-PI - half, PI - half, theta_bins),
            counts: vec![0.0; r_bins * theta_bins],
            normalized: false,
        }
    }

    pub fn r_bins(&self) -> usize {
        self.r_edges.len() - 1
    }

    pub fn theta_bins(&self) -> usize {
        self.theta_edges.len() - 1
    }

    pub fn theta_center(&self, k: usize) -> f64 {
        -PI + 2.0 * PI * k as f64 / self.theta_bins() as f64
    }

    pub fn bin_of(&self, r: f64, theta: f64) -> (usize, usize) {
        let nr = self.r_bins();
        let nt = self.theta_bins();
        let dr = self.r_edges[nr] / nr as f64;
        let dt = 2.0 * PI / nt as f64;
        let ir = clamped_bin(r, 0.0, dr, nr);
        let shifted = (theta + PI + 0.5 * dt).rem_euclid(2.0 * PI);
        let it = ((shifted / dt).floor() as usize) % nt;
        (ir, it)
    }

    pub fn add(&mut self, r: f64, theta: f64) {
        let (ir, it) = self.bin_of(r, theta);
        let nt = self.theta_bins();
        self.counts[ir * nt + it] += 1.0;
    }

    pub fn at(&self, ir: usize, it: usize) -> f64 {
        self.counts[ir * self.theta_bins() + it]
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn masses(&self) -> Result<Vec<f64>> {
        normalize(self.counts.clone())
    }

    pub fn to_normalized(&self) -> Result<Self> {
        Ok(Self {
            counts: self.masses()?,
            normalized: true,
            ..self.clone()
        })
    }
}

fn normalize(mut v: Vec<f64>) -> Result<Vec<f64>> {
    let total: f64 = v.iter().sum();
    if !(total > 0.0) {
        return Err(Error::EmptyHistogram);
    }
    v.iter_mut().for_each(|x| *x /= total);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_fit_two_pass() {
        let f = GaussianFit::from_samples(&[1.2; 5]).unwrap();
        assert_eq!((f.mean, f.std, f.sample_count), (1.2, 0.0, 5));
        let f = GaussianFit::from_samples(&[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert_eq!((f.mean, f.std), (0.0, 1.0));
        assert!(GaussianFit::from_samples(&[]).is_none());
    }

    #[test]
    fn one_d_binning_and_clipping() {
        let mut h = Histogram1D::new(-1.0, 1.0, 4);
        for x in [-5.0, -0.75, -0.5, 0.0, 0.49, 0.5, 1.0, 9.0] {
            h.add(x);
        }
        assert_eq!(h.counts, vec![2.0, 1.0, 2.0, 3.0]);
        let n = h.to_normalized().unwrap();
        let integral: f64 = (0..4).map(|k| n.counts[k] * n.bin_width(k)).sum();
        assert!((integral - 1.0).abs() < 1e-12);
        assert_eq!(n.masses().unwrap(), h.masses().unwrap());
        assert!(Histogram1D::new(0.0, 1.0, 3).masses().is_err());
    }

    #[test]
    fn polar_bins_center_on_ahead_and_behind() {
        let p = PolarHistogram::new(5.0, 20, 36);
        assert_eq!(p.bin_of(1.0, PI), (4, 0));
        assert_eq!(p.bin_of(1.0, -PI), (4, 0));
        assert_eq!(p.bin_of(1.0, 0.0), (4, 18));
        assert_eq!(p.bin_of(1.0, -1e-9), (4, 18));
        assert_eq!(p.bin_of(0.6, PI / 2.0), (2, 27));
        assert_eq!(p.bin_of(42.0, -PI / 2.0), (19, 9));
        assert!((p.theta_center(18)).abs() < 1e-15);
    }
}
