//! Independent reference computations used to validate the engine.
//!
//! Nothing here calls the boolean kernel. The analytical solver works from
//! closed-form circle/line and circle/circle intersections and classifies
//! points with exact distance tests; the raster oracles count grid samples.

use crate::engagement::AngularInterval;
use crate::error::ValidationError;
use crate::geom2d::{point_segment_distance, BBox, Capsule, Circle, Point2, PointClass, Region2D, SNAP};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported scene: {0}")]
    UnsupportedScene(String),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// Intersections of circle `c` with the infinite line through `p` and `q`.
/// A tangent line (distance within [`SNAP`] of the radius) gives none.
pub fn circle_line_intersections(c: &Circle, p: Point2, q: Point2) -> Result<Vec<Point2>, ValidationError> {
    let d = q - p;
    let len = d.norm();
    if len == 0.0 {
        return Err(ValidationError::new("line", "line points must be distinct"));
    }
    let u = d * (1.0 / len);
    let foot = p + u * (c.center - p).dot(u);
    let h = foot.dist(c.center);
    if h > c.radius || (c.radius - h).abs() <= SNAP {
        return Ok(Vec::new());
    }
    let w = (c.radius * c.radius - h * h).sqrt();
    Ok(vec![foot - u * w, foot + u * w])
}

/// Intersections of two circles. Tangent circles give none; identical
/// circles are an error.
pub fn circle_circle_intersections(a: &Circle, b: &Circle) -> Result<Vec<Point2>, OracleError> {
    let delta = b.center - a.center;
    let d = delta.norm();
    if d == 0.0 {
        if a.radius == b.radius {
            return Err(OracleError::Degenerate(format!(
                "coincident circles at {} with radius {}",
                a.center, a.radius
            )));
        }
        return Ok(Vec::new());
    }
    let (ra, rb) = (a.radius, b.radius);
    if (d - (ra + rb)).abs() <= SNAP || (d - (ra - rb).abs()).abs() <= SNAP {
        return Ok(Vec::new());
    }
    if d > ra + rb || d < (ra - rb).abs() {
        return Ok(Vec::new());
    }
    let along = (d * d + ra * ra - rb * rb) / (2.0 * d);
    let h = (ra * ra - along * along).max(0.0).sqrt();
    let u = delta * (1.0 / d);
    let n = Point2::new(-u.y, u.x);
    let m = a.center + u * along;
    Ok(vec![m + n * h, m - n * h])
}

/// Rectangular stock with straight prior passes removed, and a tool query.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticalScene {
    pub stock_min: Point2,
    pub stock_max: Point2,
    pub passes: Vec<Capsule>,
    pub cl: Point2,
    pub radius: f64,
}

impl AnalyticalScene {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.stock_max.x > self.stock_min.x && self.stock_max.y > self.stock_min.y) {
            return Err(ValidationError::new("stock", "rectangle must have positive extent"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(ValidationError::new("radius", format!("must be positive, got {}", self.radius)));
        }
        Ok(())
    }

    /// Exact membership: strictly inside the rectangle and farther than the
    /// pass radius from every pass centreline.
    pub fn in_material(&self, p: Point2) -> bool {
        p.x > self.stock_min.x
            && p.x < self.stock_max.x
            && p.y > self.stock_min.y
            && p.y < self.stock_max.y
            && self.passes.iter().all(|c| point_segment_distance(p, c.a, c.b) > c.radius)
    }

    pub fn tool(&self) -> Circle {
        Circle {
            center: self.cl,
            radius: self.radius,
        }
    }

    /// Rectangle as a kernel region, for feeding the same scene to the engine.
    pub fn stock_region(&self) -> Region2D {
        Region2D::rect(self.stock_min, self.stock_max)
    }
}

fn angle_of(c: &Circle, p: Point2) -> f64 {
    let a = (p.y - c.center.y).atan2(p.x - c.center.x).to_degrees();
    let a = a.rem_euclid(360.0);
    if a >= 360.0 {
        0.0
    } else {
        a
    }
}

/// Engaged arcs of the scene's tool circle, from trigonometry alone.
pub fn analytical_engagement(scene: &AnalyticalScene) -> Result<Vec<AngularInterval>, OracleError> {
    scene.validate()?;
    let tool = scene.tool();
    let mut pts: Vec<Point2> = Vec::new();

    let (lo, hi) = (scene.stock_min, scene.stock_max);
    let corners = [lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
    for k in 0..4 {
        let (p, q) = (corners[k], corners[(k + 1) % 4]);
        for x in circle_line_intersections(&tool, p, q)? {
            if on_segment(x, p, q) {
                pts.push(x);
            }
        }
    }

    for (i, cap) in scene.passes.iter().enumerate() {
        let end_circles = [Circle { center: cap.a, radius: cap.radius }, Circle { center: cap.b, radius: cap.radius }];
        for ec in &end_circles {
            if ec.center == tool.center && ec.radius == tool.radius {
                return Err(OracleError::UnsupportedScene(format!(
                    "tool circle coincides with an end of pass {i}"
                )));
            }
        }
        let len = cap.length();
        if len <= SNAP {
            pts.extend(circle_circle_intersections(&tool, &end_circles[0])?);
            continue;
        }
        let u = (cap.b - cap.a) * (1.0 / len);
        let n = Point2::new(-u.y, u.x);
        for side in [1.0, -1.0] {
            let (p, q) = (cap.a + n * (side * cap.radius), cap.b + n * (side * cap.radius));
            for x in circle_line_intersections(&tool, p, q)? {
                if on_segment(x, p, q) {
                    pts.push(x);
                }
            }
        }
        // Each end circle contributes only its outer half.
        for x in circle_circle_intersections(&tool, &end_circles[0])? {
            if (x - cap.a).dot(u) <= 0.0 {
                pts.push(x);
            }
        }
        for x in circle_circle_intersections(&tool, &end_circles[1])? {
            if (x - cap.b).dot(u) >= 0.0 {
                pts.push(x);
            }
        }
    }

    let mut angles: Vec<f64> = pts.iter().map(|&p| angle_of(&tool, p)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|b, a| *b - *a < 1e-9);
    if angles.len() > 1 && angles[0] + 360.0 - angles[angles.len() - 1] < 1e-9 {
        angles.pop();
    }
    let inside = |deg: f64| scene.in_material(tool.point_at_deg(deg));
    Ok(runs_to_intervals(&angles, inside))
}

fn on_segment(x: Point2, p: Point2, q: Point2) -> bool {
    let d = q - p;
    let t = (x - p).dot(d) / d.dot(d);
    (-1e-12..=1.0 + 1e-12).contains(&t)
}

/// Classifies the arcs between consecutive crossing angles and joins
/// adjacent engaged arcs.
fn runs_to_intervals(angles: &[f64], inside: impl Fn(f64) -> bool) -> Vec<AngularInterval> {
    if angles.is_empty() {
        return if inside(0.0) || inside(180.0) {
            vec![AngularInterval::FULL]
        } else {
            Vec::new()
        };
    }
    let n = angles.len();
    let arcs: Vec<(f64, f64, bool)> = (0..n)
        .map(|i| {
            let s = angles[i];
            let e = if i + 1 < n { angles[i + 1] } else { angles[0] + 360.0 };
            (s, e, inside(0.5 * (s + e)))
        })
        .collect();
    let Some(first_out) = arcs.iter().position(|a| !a.2) else {
        return vec![AngularInterval::FULL];
    };
    let mut out = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for k in 1..=n {
        let (s, e, ins) = arcs[(first_out + k) % n];
        if ins {
            open = Some(open.map_or((s, e), |(os, _)| (os, e)));
        } else if let Some((os, oe)) = open.take() {
            out.push(AngularInterval::new(os, oe));
        }
    }
    if let Some((os, oe)) = open {
        out.push(AngularInterval::new(os, oe));
    }
    out.sort_by(|a, b| a.entry.total_cmp(&b.entry));
    out
}

/// What [`raster_area`] measures.
#[derive(Clone, Copy, Debug)]
pub enum RasterTarget<'a> {
    Region(&'a Region2D),
    Circle(Circle),
    Capsule(Capsule),
    Scene(&'a AnalyticalScene),
}

/// Cell-centre count × grid². Regions are scanned row by row with their own
/// even-odd crossing rule; shapes and scenes use exact membership tests.
pub fn raster_area(target: RasterTarget, grid: f64) -> Result<f64, ValidationError> {
    if !(grid > 0.0 && grid.is_finite()) {
        return Err(ValidationError::new("grid", format!("must be positive, got {grid}")));
    }
    let count = match target {
        RasterTarget::Region(r) => match r.bbox() {
            Some(bb) => scan_region(r, bb, grid),
            None => 0,
        },
        RasterTarget::Circle(c) => count_cells(c.bbox(), grid, |p| p.dist(c.center) < c.radius),
        RasterTarget::Capsule(c) => count_cells(c.bbox(), grid, |p| c.contains(p)),
        RasterTarget::Scene(s) => {
            let bb = BBox {
                min: s.stock_min,
                max: s.stock_max,
            };
            count_cells(bb, grid, |p| s.in_material(p))
        }
    };
    Ok(count as f64 * grid * grid)
}

fn grid_dims(bb: BBox, grid: f64) -> (usize, usize) {
    ((bb.width() / grid).ceil() as usize + 1, (bb.height() / grid).ceil() as usize + 1)
}

fn count_cells(bb: BBox, grid: f64, inside: impl Fn(Point2) -> bool) -> u64 {
    let (nx, ny) = grid_dims(bb, grid);
    let mut n = 0u64;
    for j in 0..ny {
        let y = bb.min.y + (j as f64 + 0.5) * grid;
        for i in 0..nx {
            if inside(Point2::new(bb.min.x + (i as f64 + 0.5) * grid, y)) {
                n += 1;
            }
        }
    }
    n
}

fn scan_region(r: &Region2D, bb: BBox, grid: f64) -> u64 {
    let edges: Vec<(Point2, Point2)> = r.contours().flat_map(|(c, _)| c.edges()).collect();
    let (_, ny) = grid_dims(bb, grid);
    let x0 = bb.min.x;
    // Number of cell centres x0 + (i + 0.5)·grid that are < x.
    let below = |x: f64| ((x - x0) / grid - 0.5).ceil().max(0.0) as i64;
    let mut n = 0u64;
    let mut xs: Vec<f64> = Vec::new();
    for j in 0..ny {
        let y = bb.min.y + (j as f64 + 0.5) * grid;
        xs.clear();
        for &(a, b) in &edges {
            if (a.y > y) != (b.y > y) {
                xs.push(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            n += (below(pair[1]) - below(pair[0])).max(0) as u64;
        }
    }
    n
}

/// Brute-force engaged arcs: `n_samples` equally spaced points on the
/// circle classified with [`Region2D::point_in`]. Bounds fall half-way
/// between samples, so the resolution is `360 / n_samples` degrees.
pub fn raster_intervals(c: &Circle, region: &Region2D, n_samples: usize) -> Result<Vec<AngularInterval>, ValidationError> {
    if n_samples < 3600 {
        return Err(ValidationError::new("n_samples", format!("must be at least 3600, got {n_samples}")));
    }
    let step = 360.0 / n_samples as f64;
    let inside: Vec<bool> = (0..n_samples)
        .map(|k| region.point_in(c.point_at_deg(k as f64 * step)) == PointClass::Inside)
        .collect();
    let Some(first_out) = inside.iter().position(|&v| !v) else {
        return Ok(vec![AngularInterval::FULL]);
    };
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for k in 1..=n_samples {
        let i = first_out + k;
        if inside[i % n_samples] {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            out.push(AngularInterval::new((s as f64 - 0.5) * step, (i as f64 - 0.5) * step));
        }
    }
    out.sort_by(|a, b| a.entry.total_cmp(&b.entry));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn unit(r: f64) -> Circle {
        Circle::new(Point2::new(0.0, 0.0), r).unwrap()
    }

    #[test]
    fn circle_line_examples() {
        let c = unit(5.0);
        let mut v = circle_line_intersections(&c, Point2::new(3.0, -10.0), Point2::new(3.0, 10.0)).unwrap();
        v.sort_by(|a, b| b.y.total_cmp(&a.y));
        assert!(close(v[0].x, 3.0, 1e-12) && close(v[0].y, 4.0, 1e-12));
        assert!(close(v[1].x, 3.0, 1e-12) && close(v[1].y, -4.0, 1e-12));
        assert!(circle_line_intersections(&c, Point2::new(5.0, 0.0), Point2::new(5.0, 1.0)).unwrap().is_empty());
        assert!(circle_line_intersections(&c, Point2::new(7.0, 0.0), Point2::new(7.0, 1.0)).unwrap().is_empty());
        assert!(circle_line_intersections(&c, Point2::new(1.0, 1.0), Point2::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn circle_circle_examples() {
        let a = unit(5.0);
        let b = Circle::new(Point2::new(8.0, 0.0), 5.0).unwrap();
        let mut v = circle_circle_intersections(&a, &b).unwrap();
        v.sort_by(|p, q| q.y.total_cmp(&p.y));
        assert!(close(v[0].x, 4.0, 1e-12) && close(v[0].y, 3.0, 1e-12));
        assert!(close(v[1].x, 4.0, 1e-12) && close(v[1].y, -3.0, 1e-12));
        let t = Circle::new(Point2::new(10.0, 0.0), 5.0).unwrap();
        assert!(circle_circle_intersections(&a, &t).unwrap().is_empty());
        let f = Circle::new(Point2::new(11.0, 0.0), 5.0).unwrap();
        assert!(circle_circle_intersections(&a, &f).unwrap().is_empty());
        assert!(matches!(circle_circle_intersections(&a, &a), Err(OracleError::Degenerate(_))));
    }

    fn scene(cl: Point2, passes: Vec<Capsule>) -> AnalyticalScene {
        AnalyticalScene {
            stock_min: Point2::new(0.0, 0.0),
            stock_max: Point2::new(100.0, 60.0),
            passes,
            cl,
            radius: 5.0,
        }
    }

    #[test]
    fn analytical_examples() {
        let full = analytical_engagement(&scene(Point2::new(50.0, 30.0), vec![])).unwrap();
        assert_eq!(full, vec![AngularInterval::FULL]);

        // a_e = R against the top edge: half immersion.
        let half = analytical_engagement(&scene(Point2::new(50.0, 60.0), vec![])).unwrap();
        assert_eq!(half.len(), 1);
        assert!(close(half[0].width(), 180.0, 1e-9));
        assert!(close(half[0].entry, 180.0, 1e-9));

        let prior = Capsule::new(Point2::new(-10.0, 30.0), Point2::new(45.0, 30.0), 5.0).unwrap();
        let slot = analytical_engagement(&scene(Point2::new(50.0, 30.0), vec![prior])).unwrap();
        assert_eq!(slot.len(), 1);
        assert!(close(slot[0].width(), 240.0, 1e-9), "{slot:?}");
    }

    #[test]
    fn coincident_end_is_unsupported() {
        let prior = Capsule::new(Point2::new(10.0, 30.0), Point2::new(50.0, 30.0), 5.0).unwrap();
        let err = analytical_engagement(&scene(Point2::new(50.0, 30.0), vec![prior])).unwrap_err();
        assert!(matches!(err, OracleError::UnsupportedScene(_)));
    }

    #[test]
    fn raster_area_examples() {
        let sq = Region2D::rect(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
        assert!(close(raster_area(RasterTarget::Region(&sq), 0.01).unwrap(), 1.0, 0.04));
        let cap = Capsule::new(Point2::new(0.0, 0.0), Point2::new(10.0, 0.0), 5.0).unwrap();
        let exact = PI * 25.0 + 100.0;
        let perim = 2.0 * PI * 5.0 + 20.0;
        assert!(close(raster_area(RasterTarget::Capsule(cap), 0.02).unwrap(), exact, 0.02 * perim));
        assert_eq!(raster_area(RasterTarget::Region(&Region2D::empty()), 0.1).unwrap(), 0.0);
    }

    #[test]
    fn raster_interval_examples() {
        let big = Region2D::rect(Point2::new(-50.0, -50.0), Point2::new(50.0, 50.0));
        assert_eq!(raster_intervals(&unit(5.0), &big, 3600).unwrap(), vec![AngularInterval::FULL]);
        let edge = Circle::new(Point2::new(50.0, 0.0), 5.0).unwrap();
        let v = raster_intervals(&edge, &big, 3600).unwrap();
        assert_eq!(v.len(), 1);
        assert!(close(v[0].width(), 180.0, 0.1 + 1e-9));
        assert!(raster_intervals(&edge, &big, 100).is_err());
    }
}
