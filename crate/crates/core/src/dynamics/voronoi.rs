//! Bounded Voronoi cells by successive half-plane clipping of a convex region.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WorldPoint;

/// Offset applied to coincident seeds before tessellation.
pub const COINCIDENT_OFFSET_M: f64 = 1e-6;

/// Convex polygon with counterclockwise vertices and positive area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<WorldPoint>,
}

fn cross(o: WorldPoint, a: WorldPoint, b: WorldPoint) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Signed shoelace area (positive for counterclockwise order).
pub fn signed_area(vertices: &[WorldPoint]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        twice += p.x * q.y - q.x * p.y;
    }
    0.5 * twice
}

impl ConvexPolygon {
    /// Accepts either orientation; rejects non-convex or zero-area input.
    pub fn new(mut vertices: Vec<WorldPoint>) -> Result<Self> {
        if vertices.len() < 3 || vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateBoundary);
        }
        let area = signed_area(&vertices);
        if area.abs() < 1e-12 {
            return Err(Error::DegenerateBoundary);
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        let scale = vertices
            .iter()
            .map(|v| v.x.abs().max(v.y.abs()))
            .fold(1.0, f64::max);
        for i in 0..n {
            let turn = cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if turn < -1e-12 * scale * scale {
                return Err(Error::DegenerateBoundary);
            }
        }
        Ok(Self { vertices })
    }

    pub fn rectangle(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        Self::new(vec![
            WorldPoint::new(min_x, min_y),
            WorldPoint::new(max_x, min_y),
            WorldPoint::new(max_x, max_y),
            WorldPoint::new(min_x, max_y),
        ])
    }

    pub fn vertices(&self) -> &[WorldPoint] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> WorldPoint {
        let n = self.vertices.len() as f64;
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((0.0, 0.0), |(sx, sy), v| (sx + v.x, sy + v.y));
        WorldPoint::new(sx / n, sy / n)
    }

    /// Strictly inside: on the left of every edge by more than a rounding margin.
    pub fn contains_strictly(&self, p: WorldPoint) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let len = a.distance(&b);
            cross(a, b, p) > 1e-12 * len.max(1.0)
        })
    }

    /// Inside or within `tol` meters of the boundary.
    pub fn contains(&self, p: WorldPoint, tol: f64) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            cross(a, b, p) / a.distance(&b) >= -tol
        })
    }

    /// Convex hull (Andrew's monotone chain); `None` when the points span no area.
    pub fn hull(points: &[WorldPoint]) -> Option<Self> {
        let mut pts: Vec<WorldPoint> = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 3 {
            return None;
        }
        let mut lower: Vec<WorldPoint> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<WorldPoint> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::new(lower).ok()
    }

    /// Each vertex pushed `margin` meters further from the vertex centroid.
    pub fn dilated(&self, margin: f64) -> Self {
        let c = self.centroid();
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let d = c.distance(v);
                if d == 0.0 {
                    *v
                } else {
                    WorldPoint::new(v.x + margin * (v.x - c.x) / d, v.y + margin * (v.y - c.y) / d)
                }
            })
            .collect();
        Self { vertices }
    }
}

/// Sutherland-Hodgman step against the half-plane `n . p <= offset`.
fn clip_halfplane(poly: &[WorldPoint], n: (f64, f64), offset: f64) -> Vec<WorldPoint> {
    let side = |p: &WorldPoint| n.0 * p.x + n.1 * p.y - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (sp, sq) = (side(&p), side(&q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push(WorldPoint::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiCell {
    pub owner: i64,
    /// Counterclockwise.
    pub vertices: Vec<WorldPoint>,
    pub area: f64,
}

impl VoronoiCell {
    pub fn contains(&self, p: WorldPoint, tol: f64) -> bool {
        let n = self.vertices.len();
        n >= 3
            && (0..n).all(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let len = a.distance(&b);
                len == 0.0 || cross(a, b, p) / len >= -tol
            })
    }
}

/// Moves repeated positions apart by [`COINCIDENT_OFFSET_M`] along
/// golden-angle directions, in input order; the first occurrence stays put.
pub fn separate_coincident(points: &[(i64, WorldPoint)]) -> Vec<(i64, WorldPoint)> {
    const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
    let mut out: Vec<(i64, WorldPoint)> = Vec::with_capacity(points.len());
    for (i, &(id, p)) in points.iter().enumerate() {
        let repeats = points[..i].iter().filter(|(_, q)| *q == p).count();
        if repeats == 0 {
            out.push((id, p));
        } else {
            let a = GOLDEN_ANGLE * repeats as f64;
            let r = COINCIDENT_OFFSET_M * repeats as f64;
            out.push((id, WorldPoint::new(p.x + r * a.cos(), p.y + r * a.sin())));
        }
    }
    out
}

/// Voronoi cell of every seed, clipped to `boundary`.
///
/// Each cell starts as the boundary and is cut by the perpendicular bisector
/// with every other seed, nearest first; once the remaining seeds are farther
/// than twice the cell's radius they cannot cut it and are skipped.
pub fn voronoi_cells(points: &[(i64, WorldPoint)], boundary: &ConvexPolygon) -> Result<Vec<VoronoiCell>> {
    if let Some((_, p)) = points.iter().find(|(_, p)| !boundary.contains_strictly(*p)) {
        return Err(Error::PointOutsideBoundary { x: p.x, y: p.y });
    }
    let seeds = separate_coincident(points);
    let mut cells = Vec::with_capacity(seeds.len());
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(seeds.len());
    for (i, &(owner, p)) in seeds.iter().enumerate() {
        order.clear();
        order.extend(
            seeds
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, (_, q))| ((q.x - p.x).powi(2) + (q.y - p.y).powi(2), j)),
        );
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut poly = boundary.vertices.clone();
        for &(d2, j) in &order {
            let radius2 = poly
                .iter()
                .map(|v| (v.x - p.x).powi(2) + (v.y - p.y).powi(2))
                .fold(0.0, f64::max);
            if d2 > 4.0 * radius2 {
                break;
            }
            let q = seeds[j].1;
            let n = (q.x - p.x, q.y - p.y);
            let offset = 0.5 * ((q.x * q.x + q.y * q.y) - (p.x * p.x + p.y * p.y));
            poly = clip_halfplane(&poly, n, offset);
            if poly.len() < 3 {
                break;
            }
        }
        let area = signed_area(&poly);
        cells.push(VoronoiCell {
            owner,
            vertices: poly,
            area,
        });
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn single_point_owns_boundary() {
        let cells = voronoi_cells(&[(7, WorldPoint::new(0.3, 0.6))], &unit_square()).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].owner, 7);
        assert!((cells[0].area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_pair_splits_square() {
        let pts = [(1, WorldPoint::new(0.25, 0.5)), (2, WorldPoint::new(0.75, 0.5))];
        let cells = voronoi_cells(&pts, &unit_square()).unwrap();
        assert!((cells[0].area - 0.5).abs() < 1e-12);
        assert!((cells[1].area - 0.5).abs() < 1e-12);
        assert!(cells[0].vertices.iter().all(|v| v.x <= 0.5 + 1e-12));
    }

    #[test]
    fn outside_point_rejected() {
        let err = voronoi_cells(&[(1, WorldPoint::new(1.0, 0.5))], &unit_square()).unwrap_err();
        assert!(matches!(err, Error::PointOutsideBoundary { .. }));
    }

    #[test]
    fn coincident_seeds_are_separated() {
        let p = WorldPoint::new(0.5, 0.5);
        let cells = voronoi_cells(&[(1, p), (2, p), (3, p)], &unit_square()).unwrap();
        let total: f64 = cells.iter().map(|c| c.area).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(cells.iter().all(|c| c.area > 0.0));
    }

    #[test]
    fn polygon_validation_and_orientation() {
        let cw = vec![
            WorldPoint::new(0.0, 0.0),
            WorldPoint::new(0.0, 2.0),
            WorldPoint::new(2.0, 2.0),
            WorldPoint::new(2.0, 0.0),
        ];
        let p = ConvexPolygon::new(cw).unwrap();
        assert_eq!(p.area(), 4.0);
        let dart = vec![
            WorldPoint::new(0.0, 0.0),
            WorldPoint::new(2.0, 1.0),
            WorldPoint::new(0.0, 2.0),
            WorldPoint::new(0.5, 1.0),
        ];
        assert!(ConvexPolygon::new(dart).is_err());
        assert!(ConvexPolygon::hull(&[WorldPoint::new(0.0, 0.0), WorldPoint::new(1.0, 1.0), WorldPoint::new(2.0, 2.0)]).is_none());
    }

    #[test]
    fn hull_and_dilation() {
        let pts: Vec<WorldPoint> = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (1.0, 1.0), (1.0, 0.0)]
            .iter()
            .map(|&(x, y)| WorldPoint::new(x, y))
            .collect();
        let hull = ConvexPolygon::hull(&pts).unwrap();
        assert_eq!(hull.vertices().len(), 4);
        assert_eq!(hull.area(), 4.0);
        let grown = hull.dilated(2f64.sqrt());
        assert!((grown.area() - 16.0).abs() < 1e-9);
        assert!(pts.iter().all(|&p| grown.contains_strictly(p)));
    }

    #[test]
    fn cell_areas_match_monte_carlo_rasterization() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        let boundary = ConvexPolygon::rectangle(0.0, 0.0, 10.0, 10.0).unwrap();
        let seeds: Vec<(i64, WorldPoint)> = (0..25)
            .map(|i| (i, WorldPoint::new(rng.random_range(0.1..9.9), rng.random_range(0.1..9.9))))
            .collect();
        let cells = voronoi_cells(&seeds, &boundary).unwrap();
        let samples = 1_000_000;
        let mut hits = vec![0usize; seeds.len()];
        for _ in 0..samples {
            let p = WorldPoint::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
            let nearest = (0..seeds.len())
                .min_by(|&a, &b| seeds[a].1.distance(&p).total_cmp(&seeds[b].1.distance(&p)))
                .unwrap();
            hits[nearest] += 1;
        }
        for (cell, &h) in cells.iter().zip(&hits) {
            let estimate = 100.0 * h as f64 / samples as f64;
            assert!((cell.area - estimate).abs() < 0.005 * 100.0, "{} vs {}", cell.area, estimate);
            assert!((cell.area - signed_area(&cell.vertices)).abs() <= 1e-9 * cell.area);
        }
    }
}
