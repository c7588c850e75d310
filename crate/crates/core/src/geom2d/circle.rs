use super::{Circle, Point2, Region2D, ANGLE_SNAP_DEG, SNAP};

/// Slack on the segment parameter so crossings exactly at a vertex are not
/// lost to rounding.
const PARAM_SLACK: f64 = 1e-12;

/// Parameters `t` in `[0, 1]` where segment `p`-`q` crosses the circle.
/// Tangent contact (line distance within [`SNAP`] of the radius) yields none.
pub fn segment_circle_params(c: &Circle, p: Point2, q: Point2) -> Vec<f64> {
    let d = q - p;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return Vec::new();
    }
    let len = len2.sqrt();
    let h = d.cross(c.center - p).abs() / len;
    if (h - c.radius).abs() <= SNAP || h > c.radius {
        return Vec::new();
    }
    let t0 = (c.center - p).dot(d) / len2;
    let dt = (c.radius * c.radius - h * h).max(0.0).sqrt() / len;
    [t0 - dt, t0 + dt]
        .into_iter()
        .filter(|t| (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(t))
        .collect()
}

fn angle_deg(c: &Circle, p: Point2) -> f64 {
    let a = (p.y - c.center.y).atan2(p.x - c.center.x).to_degrees();
    let a = if a < 0.0 { a + 360.0 } else { a };
    if a >= 360.0 {
        0.0
    } else {
        a
    }
}

/// Sorted angles (degrees in `[0, 360)`, counter-clockwise from +X) at which
/// the circle crosses the region boundary. Angles closer than
/// [`ANGLE_SNAP_DEG`] are merged, including across 0/360.
pub fn circle_boundary_angles(c: &Circle, region: &Region2D) -> Vec<f64> {
    let cb = c.bbox();
    let mut out = Vec::new();
    for (contour, _) in region.contours() {
        if !contour.bbox().intersects(&cb) {
            continue;
        }
        for (p, q) in contour.edges() {
            for t in segment_circle_params(c, p, q) {
                out.push(angle_deg(c, p.lerp(q, t.clamp(0.0, 1.0))));
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| *b - *a < ANGLE_SNAP_DEG);
    if out.len() > 1 && out[0] + 360.0 - out[out.len() - 1] < ANGLE_SNAP_DEG {
        out.pop();
    }
    out
}
