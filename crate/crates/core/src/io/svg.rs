//! Top-view engagement plot for one CL and one slice.
//!
//! World +Y points up in the drawing. Coordinates are written with four
//! decimals so identical inputs give identical documents.

use std::fmt::Write;

use crate::engagement::{AngularInterval, CWERecord};
use crate::geom2d::{Point2, Region2D};

fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Screen coordinates: y is negated.
fn xy(p: Point2) -> String {
    format!("{},{}", num(p.x), num(-p.y))
}

fn region_path(region: &Region2D) -> String {
    let mut d = String::new();
    for (c, _) in region.contours() {
        for (i, p) in c.vertices().iter().enumerate() {
            d.push_str(if i == 0 { "M" } else { "L" });
            d.push_str(&xy(*p));
        }
        d.push('Z');
    }
    d
}

fn arc_path(center: Point2, r: f64, iv: &AngularInterval) -> String {
    let a = Point2::from_polar(center, r, iv.entry.to_radians());
    let b = Point2::from_polar(center, r, iv.exit_unwrapped().to_radians());
    let large = if iv.width() > 180.0 { 1 } else { 0 };
    // Counter-clockwise in the world is counter-clockwise on screen after the
    // y flip, which SVG calls sweep-flag 0.
    format!("M{}A{},{} 0 {large} 0 {}", xy(a), num(r), num(r), xy(b))
}

/// SVG document showing `pre_region`, the tool circle of radius `radius` at
/// the record's CL, the given engaged `intervals` in red, entry/exit ticks
/// with labels and the feed direction.
pub fn emit_svg_topview(
    record: &CWERecord,
    radius: f64,
    intervals: &[AngularInterval],
    pre_region: &Region2D,
) -> String {
    let c = record.end.xy();
    let r = radius;
    let margin = 0.35 * r;
    let mut lo = Point2::new(c.x - r, c.y - r);
    let mut hi = Point2::new(c.x + r, c.y + r);
    if let Some(bb) = pre_region.bbox() {
        lo = Point2::new(lo.x.min(bb.min.x), lo.y.min(bb.min.y));
        hi = Point2::new(hi.x.max(bb.max.x), hi.y.max(bb.max.y));
    }
    let (x0, y0) = (lo.x - margin, -hi.y - margin);
    let (w, h) = (hi.x - lo.x + 2.0 * margin, hi.y - lo.y + 2.0 * margin);
    let stroke = num(r * 0.02);
    let font = num(r * 0.12);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        num(x0),
        num(y0),
        num(w),
        num(h)
    );
    let _ = writeln!(
        s,
        r#"<defs><marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0L10,5L0,10Z" fill="blue"/></marker></defs>"#
    );
    let _ = writeln!(
        s,
        r#"<title>CL {} at ({}, {}, {})</title>"#,
        record.cl_index,
        num(record.end.x),
        num(record.end.y),
        num(record.end.z)
    );
    if !pre_region.is_empty() {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="#d8d8d8" fill-rule="evenodd" stroke="black" stroke-width="{stroke}"/>"##,
            region_path(pre_region)
        );
    }
    let _ = writeln!(
        s,
        r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="gray" stroke-width="{stroke}"/>"#,
        num(c.x),
        num(-c.y),
        num(r)
    );
    let arc_w = num(r * 0.06);
    for iv in intervals {
        if iv.is_full() {
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="red" stroke-width="{arc_w}"/>"#,
                num(c.x),
                num(-c.y),
                num(r)
            );
            continue;
        }
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="none" stroke="red" stroke-width="{arc_w}"/>"#,
            arc_path(c, r, iv)
        );
        for (label, deg) in [("entry", iv.entry), ("exit", iv.exit)] {
            let t = deg.to_radians();
            let a = Point2::from_polar(c, 0.85 * r, t);
            let b = Point2::from_polar(c, 1.15 * r, t);
            let l = Point2::from_polar(c, 1.3 * r, t);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="red" stroke-width="{stroke}"/>"#,
                num(a.x),
                num(-a.y),
                num(b.x),
                num(-b.y)
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="{font}" text-anchor="middle" class="{label}">{}&#176;</text>"#,
                num(l.x),
                num(-l.y),
                num((deg * 100.0).round() / 100.0)
            );
        }
    }
    let tip = Point2::from_polar(c, 0.7 * r, record.feed_angle.to_radians());
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="blue" stroke-width="{stroke}" marker-end="url(#head)"/>"#,
        num(c.x),
        num(-c.y),
        num(tip.x),
        num(-tip.y)
    );
    s.push_str("</svg>\n");
    s
}
