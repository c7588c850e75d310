use std::f64::consts::PI;

use super::{Capsule, Circle, Contour, Point2, Region2D};
use crate::error::ValidationError;

/// Curved shapes accepted by [`polygonize`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shape {
    Circle(Circle),
    Capsule(Capsule),
}

impl From<Circle> for Shape {
    fn from(c: Circle) -> Self {
        Shape::Circle(c)
    }
}

impl From<Capsule> for Shape {
    fn from(c: Capsule) -> Self {
        Shape::Capsule(c)
    }
}

/// Number of chords per half turn for a circle of `radius` so that no chord
/// strays further than `chord_tol` from the arc. Never fewer than 8.
pub fn vertices_per_semicircle(radius: f64, chord_tol: f64) -> Result<usize, ValidationError> {
    if !(chord_tol > 0.0 && chord_tol.is_finite()) {
        return Err(ValidationError::new("chord_tol", format!("must be positive, got {chord_tol}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(ValidationError::new("radius", format!("must be positive, got {radius}")));
    }
    if chord_tol >= radius {
        return Err(ValidationError::new(
            "chord_tol",
            format!("chord tolerance {chord_tol} must be smaller than the radius {radius}"),
        ));
    }
    let n = (PI / (1.0 - chord_tol / radius).acos()).ceil();
    Ok((n as usize).max(8))
}

/// Inscribed polygon of a circle or capsule, counter-clockwise.
///
/// Circle vertices sit at angles `k·π/n` from +X, so polygonized circles of
/// equal radius and tolerance are translates of one another.
pub fn polygonize(shape: impl Into<Shape>, chord_tol: f64) -> Result<Region2D, ValidationError> {
    let pts = match shape.into() {
        Shape::Circle(c) => circle_points(c.center, c.radius, chord_tol)?,
        Shape::Capsule(cap) if cap.is_disk() => circle_points(cap.a, cap.radius, chord_tol)?,
        Shape::Capsule(cap) => {
            let n = vertices_per_semicircle(cap.radius, chord_tol)?;
            let d = cap.b - cap.a;
            let phi = d.y.atan2(d.x);
            let step = PI / n as f64;
            let mut pts = Vec::with_capacity(2 * n + 2);
            for k in 0..=n {
                pts.push(Point2::from_polar(cap.b, cap.radius, phi - PI / 2.0 + k as f64 * step));
            }
            for k in 0..=n {
                pts.push(Point2::from_polar(cap.a, cap.radius, phi + PI / 2.0 + k as f64 * step));
            }
            pts
        }
    };
    Ok(Region2D::from_parts_unchecked(vec![Contour::from_vertices_unchecked(pts)], Vec::new()))
}

fn circle_points(center: Point2, radius: f64, chord_tol: f64) -> Result<Vec<Point2>, ValidationError> {
    if !center.is_finite() {
        return Err(ValidationError::new("center", "non-finite coordinate"));
    }
    let n = vertices_per_semicircle(radius, chord_tol)?;
    let step = PI / n as f64;
    Ok((0..2 * n)
        .map(|k| Point2::from_polar(center, radius, k as f64 * step))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::point_segment_distance;

    #[test]
    fn vertex_count_rule() {
        assert_eq!(vertices_per_semicircle(5.0, 1.0).unwrap(), 8);
        let n = vertices_per_semicircle(5.0, 1e-3).unwrap();
        assert_eq!(n, (PI / (1.0f64 - 2e-4).acos()).ceil() as usize);
        assert!(vertices_per_semicircle(5.0, 5.0).is_err());
        assert!(vertices_per_semicircle(5.0, 0.0).is_err());
    }

    #[test]
    fn circle_area_within_bound() {
        let c = Circle::new(Point2::new(1.0, -2.0), 5.0).unwrap();
        let r = polygonize(c, 1e-3).unwrap();
        let exact = PI * 25.0;
        assert!(r.area() < exact);
        assert!(exact - r.area() <= 2.0 * 1e-3 * 2.0 * PI * 5.0);
        assert!(r.outers()[0].signed_area() > 0.0);
    }

    #[test]
    fn degenerate_capsule_is_circle() {
        let p = Point2::new(3.0, 4.0);
        let cap = Capsule::new(p, p, 5.0).unwrap();
        let a = polygonize(cap, 1e-3).unwrap();
        let b = polygonize(Circle::new(p, 5.0).unwrap(), 1e-3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn capsule_area_within_bound() {
        let cap = Capsule::new(Point2::new(0.0, 0.0), Point2::new(6.0, 8.0), 5.0).unwrap();
        let r = polygonize(cap, 1e-3).unwrap();
        let exact = PI * 25.0 + 100.0;
        assert!((178.54 - exact).abs() < 5e-3);
        assert!(r.area() < exact && exact - r.area() <= 2.0 * 1e-3 * (2.0 * PI * 5.0 + 20.0));
        r.validate().unwrap();
    }

    #[test]
    fn deviation_within_tolerance() {
        for &(radius, tol) in &[(5.0, 1e-3), (0.5, 1e-4), (12.0, 0.05)] {
            let c = Circle::new(Point2::new(0.0, 0.0), radius).unwrap();
            let r = polygonize(c, tol).unwrap();
            let verts = r.outers()[0].vertices();
            let mut worst = 0.0f64;
            for k in 0..20_000 {
                let p = c.point_at_deg(k as f64 * 360.0 / 20_000.0);
                let d = verts
                    .iter()
                    .zip(verts.iter().cycle().skip(1))
                    .map(|(&a, &b)| point_segment_distance(p, a, b))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
            assert!(worst <= tol, "R={radius} tol={tol}: {worst}");
        }
    }
}
