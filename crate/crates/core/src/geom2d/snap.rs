//! Integer snap grid and exact orientation predicates.
//!
//! Every boolean operation first rounds its operands onto a fixed grid of
//! `SNAP` millimetres. On the grid all predicates are evaluated exactly in
//! `i128`, so topology decisions never depend on floating-point rounding.

use super::{Point2, SNAP};
use crate::error::GeometryError;

pub(crate) const UNITS_PER_MM: f64 = 1.0 / SNAP;

/// Largest coordinate magnitude (in grid units) accepted by the kernel.
/// Doubled coordinates stay below 2^52 so all cross products fit in i128.
pub(crate) const MAX_UNITS: i64 = 1 << 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct IPoint {
    pub x: i64,
    pub y: i64,
}

impl IPoint {
    pub fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

pub(crate) fn snap_coord(v: f64) -> Result<i64, GeometryError> {
    let u = (v * UNITS_PER_MM).round();
    if !u.is_finite() || u.abs() > MAX_UNITS as f64 {
        return Err(GeometryError::OutOfRange { value: v });
    }
    Ok(u as i64)
}

pub(crate) fn snap(p: Point2) -> Result<IPoint, GeometryError> {
    Ok(IPoint::new(snap_coord(p.x)?, snap_coord(p.y)?))
}

pub(crate) fn unsnap(p: IPoint) -> Point2 {
    Point2::new(p.x as f64 * SNAP, p.y as f64 * SNAP)
}

/// `(a - o) x (b - o)`, exact.
#[inline]
pub(crate) fn cross(o: IPoint, a: IPoint, b: IPoint) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * by - ay * bx
}

/// `(a - o) . (b - o)`, exact.
#[inline]
pub(crate) fn dot(o: IPoint, a: IPoint, b: IPoint) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * bx + ay * by
}

#[inline]
pub(crate) fn orient(a: IPoint, b: IPoint, c: IPoint) -> i8 {
    cross(a, b, c).signum() as i8
}

/// Twice the signed area of a closed ring.
pub(crate) fn ring_area2(ring: &[IPoint]) -> i128 {
    if ring.len() < 3 {
        return 0;
    }
    let o = ring[0];
    let mut acc = 0i128;
    for w in ring[1..].windows(2) {
        acc += cross(o, w[0], w[1]);
    }
    acc
}

/// Snaps a contour onto the grid, dropping consecutive duplicates (including
/// the closing pair).
pub(crate) fn snap_ring(points: &[Point2]) -> Result<Vec<IPoint>, GeometryError> {
    let mut ring: Vec<IPoint> = Vec::with_capacity(points.len());
    for &p in points {
        let q = snap(p)?;
        if ring.last() != Some(&q) {
            ring.push(q);
        }
    }
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    Ok(ring)
}

/// Rounded intersection of two properly crossing segments.
pub(crate) fn crossing_point(a0: IPoint, a1: IPoint, b0: IPoint, b1: IPoint) -> IPoint {
    let rx = (a1.x - a0.x) as i128;
    let ry = (a1.y - a0.y) as i128;
    let sx = (b1.x - b0.x) as i128;
    let sy = (b1.y - b0.y) as i128;
    let qx = (b0.x - a0.x) as i128;
    let qy = (b0.y - a0.y) as i128;
    let den = rx * sy - ry * sx;
    let num = qx * sy - qy * sx;
    let t = num as f64 / den as f64;
    let x = a0.x as f64 + rx as f64 * t;
    let y = a0.y as f64 + ry as f64 * t;
    IPoint::new(x.round() as i64, y.round() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_roundtrip_is_stable() {
        for v in [0.0, 1.0, -3.25, 99.999_999_9, 1e-7, 12345.678_901_2] {
            let i = snap_coord(v).unwrap();
            let back = i as f64 * SNAP;
            assert_eq!(snap_coord(back).unwrap(), i);
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(snap_coord(f64::NAN).is_err());
        assert!(snap_coord(1e12).is_err());
    }

    #[test]
    fn crossing_point_of_diagonals() {
        let p = crossing_point(
            IPoint::new(0, 0),
            IPoint::new(10, 10),
            IPoint::new(0, 10),
            IPoint::new(10, 0),
        );
        assert_eq!(p, IPoint::new(5, 5));
    }

    #[test]
    fn orientation_signs() {
        let a = IPoint::new(0, 0);
        let b = IPoint::new(4, 0);
        assert_eq!(orient(a, b, IPoint::new(1, 1)), 1);
        assert_eq!(orient(a, b, IPoint::new(1, -1)), -1);
        assert_eq!(orient(a, b, IPoint::new(9, 0)), 0);
    }
}
