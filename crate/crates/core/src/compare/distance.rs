//! Distances between histograms with identical binning.

use crate::dynamics::{Histogram1D, Histogram2D, PolarHistogram};
use crate::error::{Error, Result};

pub trait HistogramDistance {
    /// Distance between the normalized forms of `self` and `other`.
    fn distance(&self, other: &Self) -> Result<f64>;
}

pub fn histogram_distance<H: HistogramDistance>(a: &H, b: &H) -> Result<f64> {
    a.distance(b)
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Earth mover's distance between bin masses located at the bin centers.
impl HistogramDistance for Histogram1D {
    fn distance(&self, other: &Self) -> Result<f64> {
        if self.edges != other.edges {
            return Err(Error::BinningMismatch);
        }
        let (a, b) = (self.masses()?, other.masses()?);
        let centers = self.centers();
        // greedy transport, left to right
        let (mut supply, mut demand) = (a.clone(), b.clone());
        let (mut i, mut j) = (0, 0);
        let mut cost = 0.0;
        while i < supply.len() && j < demand.len() {
            let moved = supply[i].min(demand[j]);
            cost += moved * (centers[i] - centers[j]).abs();
            supply[i] -= moved;
            demand[j] -= moved;
            if supply[i] <= demand[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(cost)
    }
}

/// L1 distance between per-bin probability masses.
impl HistogramDistance for Histogram2D {
    fn distance(&self, other: &Self) -> Result<f64> {
        if self.x_edges != other.x_edges || self.y_edges != other.y_edges {
            return Err(Error::BinningMismatch);
        }
        Ok(l1(&self.masses()?, &other.masses()?))
    }
}

/// L1 distance between per-bin probability masses.
impl HistogramDistance for PolarHistogram {
    fn distance(&self, other: &Self) -> Result<f64> {
        if self.r_edges != other.r_edges || self.theta_edges != other.theta_edges {
            return Err(Error::BinningMismatch);
        }
        Ok(l1(&self.masses()?, &other.masses()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(counts: &[f64]) -> Histogram1D {
        let mut h = Histogram1D::new(-1.0, 1.0, counts.len());
        h.counts = counts.to_vec();
        h
    }

    /// Sum over bins of |CDF_a - CDF_b| times the bin width.
    fn cdf_emd(a: &Histogram1D, b: &Histogram1D) -> f64 {
        let (ma, mb) = (a.masses().unwrap(), b.masses().unwrap());
        let w = a.bin_width(0);
        let (mut ca, mut cb, mut acc) = (0.0, 0.0, 0.0);
        for k in 0..ma.len() - 1 {
            ca += ma[k];
            cb += mb[k];
            acc += (ca - cb).abs() * w;
        }
        acc
    }

    #[test]
    fn adjacent_point_masses() {
        let a = hist(&[0.0, 3.0, 0.0, 0.0]);
        let b = hist(&[0.0, 0.0, 5.0, 0.0]);
        assert!((histogram_distance(&a, &b).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(histogram_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn density_form_matches_counts() {
        let a = hist(&[1.0, 2.0, 3.0, 4.0]);
        let b = hist(&[4.0, 0.0, 1.0, 1.0]);
        let d = histogram_distance(&a, &b).unwrap();
        let dn = histogram_distance(&a.to_normalized().unwrap(), &b).unwrap();
        assert!((d - dn).abs() < 1e-12);
    }

    #[test]
    fn mismatched_bins() {
        let a = hist(&[1.0, 1.0]);
        let b = hist(&[1.0, 1.0, 1.0]);
        assert_eq!(histogram_distance(&a, &b), Err(Error::BinningMismatch));
        let p = PolarHistogram::new(5.0, 20, 36);
        let q = PolarHistogram::new(5.0, 20, 18);
        assert_eq!(histogram_distance(&p, &q), Err(Error::BinningMismatch));
        assert_eq!(histogram_distance(&p, &p), Err(Error::EmptyHistogram));
    }

    #[test]
    fn disjoint_heatmaps_are_two_apart() {
        let mut a = Histogram2D {
            x_edges: vec![0.0, 1.0, 2.0],
            y_edges: vec![0.0, 1.0],
            counts: vec![1.0, 0.0],
            normalized: false,
        };
        let mut b = a.clone();
        b.counts = vec![0.0, 7.0];
        assert_eq!(histogram_distance(&a, &b).unwrap(), 2.0);
        a.y_edges = vec![0.0, 2.0];
        assert_eq!(histogram_distance(&a, &b), Err(Error::BinningMismatch));
    }

    fn counts(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0u32..20, n)
            .prop_filter("nonempty", |v| v.iter().any(|&c| c > 0))
            .prop_map(|v| v.into_iter().map(f64::from).collect())
    }

    proptest! {
        #[test]
        fn emd_matches_cdf_oracle(a in counts(12), b in counts(12)) {
            let (ha, hb) = (hist(&a), hist(&b));
            let d = histogram_distance(&ha, &hb).unwrap();
            prop_assert!((d - cdf_emd(&ha, &hb)).abs() < 1e-12);
        }

        #[test]
        fn emd_is_a_metric(a in counts(8), b in counts(8), c in counts(8)) {
            let (ha, hb, hc) = (hist(&a), hist(&b), hist(&c));
            let ab = histogram_distance(&ha, &hb).unwrap();
            let ba = histogram_distance(&hb, &ha).unwrap();
            let ac = histogram_distance(&ha, &hc).unwrap();
            let cb = histogram_distance(&hc, &hb).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!(ab <= ac + cb + 1e-12);
            let same = ha.masses().unwrap().iter().zip(hb.masses().unwrap()).all(|(x, y)| (x - y).abs() < 1e-15);
            prop_assert_eq!(ab < 1e-12, same);
        }

        #[test]
        fn l1_is_a_metric(a in counts(6), b in counts(6), c in counts(6)) {
            let mk = |v: &Vec<f64>| Histogram2D { x_edges: vec![0.0, 1.0, 2.0, 3.0], y_edges: vec![0.0, 1.0, 2.0], counts: v.clone(), normalized: false };
            let (ha, hb, hc) = (mk(&a), mk(&b), mk(&c));
            let ab = histogram_distance(&ha, &hb).unwrap();
            prop_assert!((0.0..=2.0 + 1e-12).contains(&ab));
            prop_assert_eq!(ab, histogram_distance(&hb, &ha).unwrap());
            prop_assert!(ab <= histogram_distance(&ha, &hc).unwrap() + histogram_distance(&hc, &hb).unwrap() + 1e-12);
        }
    }
}
