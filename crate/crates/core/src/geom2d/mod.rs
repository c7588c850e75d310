//! Planar geometry kernel.
//!
//! A [`Region2D`] is a set of counter-clockwise outer contours and clockwise
//! holes. Boolean operations run on an integer snap grid (see [`SNAP`]) and
//! return regions whose vertices lie on that grid; curved shapes are
//! linearised by [`polygonize`] with an explicit chord tolerance.

mod boolean;
mod circle;
mod polygonize;
pub(crate) mod snap;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, ValidationError};

pub use boolean::{boolean, difference, intersection, union, union_all, BoolOp};
pub use circle::{circle_boundary_angles, segment_circle_params};
pub use polygonize::{polygonize, vertices_per_semicircle, Shape};

/// Kernel coordinate tolerance in millimetres (grid pitch of the snap grid).
pub const SNAP: f64 = 1e-7;

/// Default linearisation tolerance for arcs, millimetres.
pub const DEFAULT_CHORD_TOL: f64 = 1e-3;

/// Crossing angles closer than this (degrees) are treated as one.
pub const ANGLE_SNAP_DEG: f64 = 1e-7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(center: Point2, radius: f64, angle_rad: f64) -> Self {
        Self::new(
            center.x + radius * angle_rad.cos(),
            center.y + radius * angle_rad.sin(),
        )
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotation about the origin by `angle_rad`.
    pub fn rotated(self, angle_rad: f64) -> Point2 {
        let (s, c) = angle_rad.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Distance from `p` to the closed segment `a`-`b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point2,
    pub max: Point2,
}

impl BBox {
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point2>) -> Option<BBox> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut b = BBox {
            min: first,
            max: first,
        };
        for p in it {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        Some(b)
    }

    pub fn intersects(&self, o: &BBox) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    pub fn intersection(&self, o: &BBox) -> Option<BBox> {
        if !self.intersects(o) {
            return None;
        }
        Some(BBox {
            min: Point2::new(self.min.x.max(o.min.x), self.min.y.max(o.min.y)),
            max: Point2::new(self.max.x.min(o.max.x), self.max.y.min(o.max.y)),
        })
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox {
            min: Point2::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Point2::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }

    pub fn inflate(&self, r: f64) -> BBox {
        BBox {
            min: Point2::new(self.min.x - r, self.min.y - r),
            max: Point2::new(self.max.x + r, self.max.y + r),
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// Closed polyline; the edge from the last vertex back to the first is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    vertices: Vec<Point2>,
    bbox: BBox,
}

impl Contour {
    /// Builds a contour, dropping consecutive vertices closer than [`SNAP`].
    pub fn new(vertices: Vec<Point2>) -> Result<Self, ValidationError> {
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(ValidationError::new(
                format!("vertices[{i}]"),
                "non-finite coordinate",
            ));
        }
        let mut clean: Vec<Point2> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if clean.last().map_or(true, |q| q.dist(p) > SNAP) {
                clean.push(p);
            }
        }
        while clean.len() > 1 && clean[0].dist(*clean.last().unwrap()) <= SNAP {
            clean.pop();
        }
        if clean.len() < 3 {
            return Err(ValidationError::new(
                "vertices",
                format!("contour needs at least 3 distinct vertices, got {}", clean.len()),
            ));
        }
        Ok(Self::from_vertices_unchecked(clean))
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<Point2>) -> Self {
        let bbox = BBox::from_points(&vertices).expect("contour has vertices");
        Self { vertices, bbox }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    /// Iterates over `(start, end)` of every edge including the closing one.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area; positive for counter-clockwise contours.
    pub fn signed_area(&self) -> f64 {
        let o = self.vertices[0];
        let mut acc = 0.0;
        for w in self.vertices[1..].windows(2) {
            acc += (w[0] - o).cross(w[1] - o);
        }
        0.5 * acc
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn reversed(&self) -> Contour {
        let mut v = self.vertices.clone();
        v.reverse();
        Contour::from_vertices_unchecked(v)
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Contour {
        Contour::from_vertices_unchecked(self.vertices.iter().map(|&p| f(p)).collect())
    }

    /// Even-odd crossing parity of `p` against this contour alone.
    fn crosses_odd(&self, p: Point2) -> bool {
        let mut odd = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if x > p.x {
                    odd = !odd;
                }
            }
        }
        odd
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Inside,
    Outside,
    OnBoundary,
}

/// Material cross-section: counter-clockwise outers and clockwise holes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Region2D {
    outers: Vec<Contour>,
    holes: Vec<Contour>,
}

impl Region2D {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validated constructor. Orientation is normalised (outers CCW, holes
    /// CW); contours must not cross, every hole must lie inside an outer and
    /// outers must not nest directly inside one another.
    pub fn new(outers: Vec<Contour>, holes: Vec<Contour>) -> Result<Self, ValidationError> {
        let outers: Vec<Contour> = outers
            .into_iter()
            .map(|c| if c.signed_area() < 0.0 { c.reversed() } else { c })
            .collect();
        let holes: Vec<Contour> = holes
            .into_iter()
            .map(|c| if c.signed_area() > 0.0 { c.reversed() } else { c })
            .collect();
        let region = Self { outers, holes };
        region.validate()?;
        Ok(region)
    }

    /// Single-contour region (orientation normalised).
    pub fn from_polygon(vertices: Vec<Point2>) -> Result<Self, ValidationError> {
        Self::new(vec![Contour::new(vertices)?], Vec::new())
    }

    pub fn rect(min: Point2, max: Point2) -> Self {
        let c = Contour::from_vertices_unchecked(vec![
            min,
            Point2::new(max.x, min.y),
            max,
            Point2::new(min.x, max.y),
        ]);
        Self {
            outers: vec![c],
            holes: Vec::new(),
        }
    }

    pub(crate) fn from_parts_unchecked(outers: Vec<Contour>, holes: Vec<Contour>) -> Self {
        Self { outers, holes }
    }

    pub fn outers(&self) -> &[Contour] {
        &self.outers
    }

    pub fn holes(&self) -> &[Contour] {
        &self.holes
    }

    /// All contours, outers first, with a hole flag.
    pub fn contours(&self) -> impl Iterator<Item = (&Contour, bool)> {
        self.outers
            .iter()
            .map(|c| (c, false))
            .chain(self.holes.iter().map(|c| (c, true)))
    }

    pub fn is_empty(&self) -> bool {
        self.outers.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.contours().map(|(c, _)| c.len()).sum()
    }

    pub fn bbox(&self) -> Option<BBox> {
        self.outers
            .iter()
            .map(Contour::bbox)
            .reduce(|a, b| a.union(&b))
    }

    pub fn area(&self) -> f64 {
        let outer: f64 = self.outers.iter().map(|c| c.signed_area().abs()).sum();
        let holes: f64 = self.holes.iter().map(|c| c.signed_area().abs()).sum();
        (outer - holes).max(0.0)
    }

    pub fn perimeter(&self) -> f64 {
        self.contours().map(|(c, _)| c.perimeter()).sum()
    }

    /// Even-odd classification; points within [`SNAP`] of an edge are on
    /// the boundary.
    pub fn point_in(&self, p: Point2) -> PointClass {
        let mut odd = false;
        for (c, _) in self.contours() {
            let bb = c.bbox().inflate(SNAP);
            if p.y < bb.min.y || p.y > bb.max.y || p.x > bb.max.x {
                continue;
            }
            for (a, b) in c.edges() {
                if point_segment_distance(p, a, b) <= SNAP {
                    return PointClass::OnBoundary;
                }
            }
            if c.crosses_odd(p) {
                odd = !odd;
            }
        }
        if odd {
            PointClass::Inside
        } else {
            PointClass::Outside
        }
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2 + Copy) -> Region2D {
        Region2D {
            outers: self.outers.iter().map(|c| c.map(f)).collect(),
            holes: self.holes.iter().map(|c| c.map(f)).collect(),
        }
    }

    pub fn translated(&self, d: Point2) -> Region2D {
        self.map(|p| p + d)
    }

    /// Rotation about the origin. Orientation is preserved.
    pub fn rotated(&self, angle_rad: f64) -> Region2D {
        self.map(|p| p.rotated(angle_rad))
    }

    pub fn difference(&self, other: &Region2D) -> Result<Region2D, GeometryError> {
        difference(self, other)
    }

    pub fn intersection(&self, other: &Region2D) -> Result<Region2D, GeometryError> {
        intersection(self, other)
    }

    pub fn union(&self, other: &Region2D) -> Result<Region2D, GeometryError> {
        union(self, other)
    }

    /// Checks the structural invariants. Crossing detection runs on the
    /// snap grid, so contacts closer than [`SNAP`] count as touching.
    pub fn validate(&self) -> Result<(), ValidationError> {
        for (kind, list) in [("outers", &self.outers), ("holes", &self.holes)] {
            for (i, c) in list.iter().enumerate() {
                if c.len() < 3 {
                    return Err(ValidationError::new(format!("{kind}[{i}]"), "fewer than 3 vertices"));
                }
                if let Some(j) = c.vertices().iter().position(|p| !p.is_finite()) {
                    return Err(ValidationError::new(
                        format!("{kind}[{i}].vertices[{j}]"),
                        "non-finite coordinate",
                    ));
                }
            }
        }
        if let Some((x, y)) = boolean::first_crossing(self).map_err(|e| ValidationError::new("region", e.to_string()))? {
            return Err(ValidationError::new(
                "region",
                format!("contours self-intersect near ({x:.9}, {y:.9})"),
            ));
        }
        for (kind, list, want_positive) in [("outers", &self.outers, true), ("holes", &self.holes, false)] {
            for (i, c) in list.iter().enumerate() {
                let a = c.signed_area();
                if (a > 0.0) != want_positive || a == 0.0 {
                    return Err(ValidationError::new(
                        format!("{kind}[{i}]"),
                        format!("wrong orientation or zero area (signed area {a})"),
                    ));
                }
            }
        }
        let all: Vec<&Contour> = self.contours().map(|(c, _)| c).collect();
        let parity_excluding = |skip: usize, p: Point2| -> bool {
            all.iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .fold(false, |odd, (_, c)| odd ^ c.crosses_odd(p))
        };
        for (k, (c, is_hole)) in self.contours().enumerate() {
            // Probe with the midpoint of the first edge; vertices may be shared
            // with a touching contour.
            let p = c.vertices()[0].lerp(c.vertices()[1], 0.5);
            let inside_other = parity_excluding(k, p);
            if is_hole && !inside_other {
                return Err(ValidationError::new(
                    format!("holes[{}]", k - self.outers.len()),
                    "hole is not inside any outer contour",
                ));
            }
            if !is_hole && inside_other {
                return Err(ValidationError::new(
                    format!("outers[{k}]"),
                    "outer contour lies inside material of another contour",
                ));
            }
        }
        Ok(())
    }
}

/// Free-function form of [`Region2D::area`].
pub fn area(region: &Region2D) -> f64 {
    region.area()
}

/// Free-function form of [`Region2D::point_in`].
pub fn point_in(region: &Region2D, p: Point2) -> PointClass {
    region.point_in(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Result<Self, ValidationError> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(ValidationError::new("radius", format!("circle radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn point_at_deg(&self, deg: f64) -> Point2 {
        Point2::from_polar(self.center, self.radius, deg.to_radians())
    }

    pub fn bbox(&self) -> BBox {
        BBox {
            min: Point2::new(self.center.x - self.radius, self.center.y - self.radius),
            max: Point2::new(self.center.x + self.radius, self.center.y + self.radius),
        }
    }
}

/// Stadium swept by a disk of `radius` translating from `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Capsule {
    pub a: Point2,
    pub b: Point2,
    pub radius: f64,
}

impl Capsule {
    pub fn new(a: Point2, b: Point2, radius: f64) -> Result<Self, ValidationError> {
        if !(radius > 0.0 && radius.is_finite()) || !a.is_finite() || !b.is_finite() {
            return Err(ValidationError::new("radius", format!("capsule radius must be positive, got {radius}")));
        }
        Ok(Self { a, b, radius })
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn is_disk(&self) -> bool {
        self.length() <= SNAP
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius + 2.0 * self.radius * self.length()
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_segment_distance(p, self.a, self.b) < self.radius
    }

    pub fn bbox(&self) -> BBox {
        BBox {
            min: Point2::new(self.a.x.min(self.b.x), self.a.y.min(self.b.y)),
            max: Point2::new(self.a.x.max(self.b.x), self.a.y.max(self.b.y)),
        }
        .inflate(self.radius)
    }

    pub fn translated(&self, d: Point2) -> Capsule {
        Capsule {
            a: self.a + d,
            b: self.b + d,
            radius: self.radius,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Region2D {
        Region2D::rect(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0))
    }

    fn square_with_hole() -> Region2D {
        let outer = Contour::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(10.0, 0.0),
            Point2::new(10.0, 10.0),
            Point2::new(0.0, 10.0),
        ])
        .unwrap();
        let hole = Contour::new(vec![
            Point2::new(4.0, 4.0),
            Point2::new(6.0, 4.0),
            Point2::new(6.0, 6.0),
            Point2::new(4.0, 6.0),
        ])
        .unwrap();
        Region2D::new(vec![outer], vec![hole]).unwrap()
    }

    #[test]
    fn area_examples() {
        assert_eq!(area(&unit_square()), 1.0);
        assert_eq!(area(&square_with_hole()), 96.0);
        assert_eq!(area(&Region2D::empty()), 0.0);
    }

    #[test]
    fn point_in_examples() {
        assert_eq!(point_in(&unit_square(), Point2::new(0.5, 0.5)), PointClass::Inside);
        assert_eq!(point_in(&unit_square(), Point2::new(5.0, 5.0)), PointClass::Outside);
        assert_eq!(point_in(&square_with_hole(), Point2::new(5.0, 5.0)), PointClass::Outside);
        assert_eq!(point_in(&unit_square(), Point2::new(1.0, 0.5)), PointClass::OnBoundary);
        assert_eq!(point_in(&unit_square(), Point2::new(0.5, 1.0 + 5e-8)), PointClass::OnBoundary);
    }

    #[test]
    fn orientation_is_normalised() {
        let cw = vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 2.0),
            Point2::new(2.0, 2.0),
            Point2::new(2.0, 0.0),
        ];
        let r = Region2D::from_polygon(cw).unwrap();
        assert!(r.outers()[0].signed_area() > 0.0);
    }

    #[test]
    fn bowtie_is_rejected() {
        let bowtie = vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 2.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 2.0),
        ];
        let err = Region2D::from_polygon(bowtie).unwrap_err();
        assert!(err.message.contains("self-intersect"), "{err}");
    }

    #[test]
    fn hole_outside_outer_is_rejected() {
        let outer = Contour::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
        ])
        .unwrap();
        let hole = Contour::new(vec![
            Point2::new(5.0, 5.0),
            Point2::new(6.0, 5.0),
            Point2::new(6.0, 6.0),
        ])
        .unwrap();
        assert!(Region2D::new(vec![outer], vec![hole]).is_err());
    }

    #[test]
    fn degenerate_contours_are_rejected() {
        assert!(Contour::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]).is_err());
        assert!(Contour::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(f64::NAN, 1.0)
        ])
        .is_err());
        assert!(Circle::new(Point2::default(), 0.0).is_err());
    }
}
