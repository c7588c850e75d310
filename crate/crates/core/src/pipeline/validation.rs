//! Engine-versus-oracle comparison cases behind `cwe validate`.
//!
//! Every case is an [`AnalyticalScene`]. The engine side builds the scene
//! with the boolean kernel and polygonized passes, then extracts intervals
//! with [`engagement_intervals`]; the oracle side uses
//! [`analytical_engagement`].

use std::io::{self, Write};

use crate::engagement::{engagement_intervals, AngularInterval};
use crate::error::GeometryError;
use crate::geom2d::{difference, polygonize, Capsule, Point2};
use crate::io::fmt_g6;
use crate::oracle::{analytical_engagement, AnalyticalScene, OracleError};

/// Bound tolerance for straight mid-pass cuts, degrees.
pub const MID_PASS_TOL_DEG: f64 = 0.02;
/// Bound tolerance for corner-exit scenes, degrees.
pub const CORNER_TOL_DEG: f64 = 0.25;
/// Slot width tolerance against the closed-form law, degrees.
pub const SLOT_TOL_DEG: f64 = 0.05;
/// Chord tolerance the engine side is run at.
pub const VALIDATION_CHORD_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseKind {
    MidPass,
    Corner,
    Slot,
}

impl CaseKind {
    pub fn name(self) -> &'static str {
        match self {
            CaseKind::MidPass => "mid_pass",
            CaseKind::Corner => "corner",
            CaseKind::Slot => "slot",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationCase {
    pub name: String,
    pub kind: CaseKind,
    pub scene: AnalyticalScene,
    pub threshold_deg: f64,
    /// Closed-form engaged width for slot cases.
    pub expected_width_deg: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub case: ValidationCase,
    pub oracle: Vec<AngularInterval>,
    pub engine: Vec<AngularInterval>,
    /// Largest bound difference in degrees, infinite on an interval count
    /// mismatch. For slot cases the width error against the law is included.
    pub max_delta_deg: f64,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.max_delta_deg <= self.case.threshold_deg
    }
}

fn dir(deg: f64) -> Point2 {
    let t = deg.to_radians();
    Point2::new(t.cos(), t.sin())
}

fn big_stock(cl: Point2, half: f64) -> (Point2, Point2) {
    (Point2::new(cl.x - half, cl.y - half), Point2::new(cl.x + half, cl.y + half))
}

/// Trail of the tool's own pass ending `step` behind `cl`.
fn trail(cl: Point2, u: Point2, step: f64, r: f64) -> Capsule {
    Capsule {
        a: cl - u * (30.0 * r),
        b: cl - u * step,
        radius: r,
    }
}

/// Straight side-milling cuts in open material: the tool advances along
/// `feed` next to a parallel earlier pass that leaves a strip `a_e` wide.
pub fn mid_pass_cases() -> Vec<ValidationCase> {
    let radii = [3.0, 5.0, 8.0, 10.0];
    let immersions = [0.2, 0.5, 1.0, 1.5];
    let feeds = [0.0, 30.0, 75.0, 135.0, 210.0, 300.0];
    let mut out = Vec::new();
    for (i, &ae_frac) in immersions.iter().enumerate() {
        for (j, &feed) in feeds.iter().enumerate() {
            let r = radii[(i + j) % radii.len()];
            let a_e = ae_frac * r;
            let cl = Point2::new(50.0 + 3.0 * j as f64, 40.0 - 2.0 * i as f64);
            let u = dir(feed);
            let n = dir(feed + 90.0);
            let prior = Capsule {
                a: cl - u * (30.0 * r) + n * a_e,
                b: cl + u * (30.0 * r) + n * a_e,
                radius: r,
            };
            let (stock_min, stock_max) = big_stock(cl, 60.0 * r);
            out.push(ValidationCase {
                name: format!("mid_R{}_ae{}_feed{}", fmt_g6(r), fmt_g6(a_e), fmt_g6(feed)),
                kind: CaseKind::MidPass,
                scene: AnalyticalScene {
                    stock_min,
                    stock_max,
                    passes: vec![trail(cl, u, 0.25 * r, r), prior],
                    cl,
                    radius: r,
                },
                threshold_deg: MID_PASS_TOL_DEG,
                expected_width_deg: None,
            });
        }
    }
    out
}

/// Tool cutting along the top edge of a plate towards a narrow slot that
/// crosses the edge. The front contact is split by the slot into two arcs.
pub fn corner_cases() -> Vec<ValidationCase> {
    let r = 5.0;
    let params = [
        // (a_e, step, slot offset ahead of the CL, slot radius)
        (3.0, 2.5, 1.5, 1.5),
        (3.0, 2.5, 1.8, 1.5),
        (2.5, 2.5, 1.5, 1.2),
        (3.5, 2.5, 1.6, 1.5),
        (3.0, 3.0, 1.4, 1.2),
        (3.5, 3.0, 2.0, 1.6),
    ];
    params
        .iter()
        .enumerate()
        .map(|(k, &(a_e, step, offset, slot_r))| {
            let top = 60.0;
            let cl = Point2::new(40.0 + 5.0 * k as f64, top + r - a_e);
            let slot_x = cl.x + offset;
            let slot = Capsule {
                a: Point2::new(slot_x, 30.0),
                b: Point2::new(slot_x, 80.0),
                radius: slot_r,
            };
            ValidationCase {
                name: format!("corner_{k}_ae{a_e}_step{step}_slot{offset}"),
                kind: CaseKind::Corner,
                scene: AnalyticalScene {
                    stock_min: Point2::new(0.0, 0.0),
                    stock_max: Point2::new(120.0, top),
                    passes: vec![trail(cl, Point2::new(1.0, 0.0), step, r), slot],
                    cl,
                    radius: r,
                },
                threshold_deg: CORNER_TOL_DEG,
                expected_width_deg: None,
            }
        })
        .collect()
}

/// Engaged width of a full slot with feed per step `s`:
/// `360 - 2 acos(s / 2R)` degrees.
pub fn slot_width_law(s: f64, r: f64) -> f64 {
    360.0 - 2.0 * (s / (2.0 * r)).acos().to_degrees()
}

/// Steady-state slots in open material for `s` in {0.1R, 0.5R, R}.
pub fn slot_cases() -> Vec<ValidationCase> {
    let mut out = Vec::new();
    for (i, &r) in [4.0, 6.0].iter().enumerate() {
        for &frac in &[0.1, 0.5, 1.0] {
            let s = frac * r;
            let feed = 20.0 + 65.0 * i as f64;
            let cl = Point2::new(30.0, 30.0);
            let (stock_min, stock_max) = big_stock(cl, 60.0 * r);
            out.push(ValidationCase {
                name: format!("slot_R{}_s{}", fmt_g6(r), fmt_g6(s)),
                kind: CaseKind::Slot,
                scene: AnalyticalScene {
                    stock_min,
                    stock_max,
                    passes: vec![trail(cl, dir(feed), s, r)],
                    cl,
                    radius: r,
                },
                threshold_deg: SLOT_TOL_DEG,
                expected_width_deg: Some(slot_width_law(s, r)),
            });
        }
    }
    out
}

pub fn all_cases() -> Vec<ValidationCase> {
    let mut v = mid_pass_cases();
    v.extend(corner_cases());
    v.extend(slot_cases());
    v
}

/// The scene built with the kernel: rectangle minus polygonized passes.
pub fn engine_intervals(scene: &AnalyticalScene, chord_tol: f64) -> Result<Vec<AngularInterval>, GeometryError> {
    let mut region = scene.stock_region();
    for pass in &scene.passes {
        let fp = polygonize(*pass, chord_tol).map_err(|e| GeometryError::Degenerate(e.to_string()))?;
        region = difference(&region, &fp)?;
    }
    Ok(engagement_intervals(&scene.tool(), &region))
}

fn circ_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Largest bound difference between two interval lists, matched in order.
/// Infinite when the counts differ or only one side is a full circle.
pub fn interval_delta(a: &[AngularInterval], b: &[AngularInterval]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        match (x.is_full(), y.is_full()) {
            (true, true) => {}
            (false, false) => {
                worst = worst.max(circ_diff(x.entry, y.entry)).max(circ_diff(x.exit, y.exit));
            }
            _ => return f64::INFINITY,
        }
    }
    worst
}

#[derive(Debug, thiserror::Error)]
pub enum ValidationRunError {
    #[error("case {case}: {source}")]
    Oracle { case: String, source: OracleError },
    #[error("case {case}: {source}")]
    Engine { case: String, source: GeometryError },
}

pub fn run_case(case: &ValidationCase, chord_tol: f64) -> Result<CaseResult, ValidationRunError> {
    let oracle = analytical_engagement(&case.scene).map_err(|source| ValidationRunError::Oracle {
        case: case.name.clone(),
        source,
    })?;
    let engine = engine_intervals(&case.scene, chord_tol).map_err(|source| ValidationRunError::Engine {
        case: case.name.clone(),
        source,
    })?;
    let mut delta = interval_delta(&oracle, &engine);
    if let Some(w) = case.expected_width_deg {
        let width: f64 = engine.iter().map(AngularInterval::width).sum();
        delta = delta.max((width - w).abs());
    }
    Ok(CaseResult {
        case: case.clone(),
        oracle,
        engine,
        max_delta_deg: delta,
    })
}

pub fn run_all(chord_tol: f64) -> Result<Vec<CaseResult>, ValidationRunError> {
    all_cases().iter().map(|c| run_case(c, chord_tol)).collect()
}

fn bounds(ivs: &[AngularInterval]) -> String {
    ivs.iter()
        .map(|iv| format!("{}:{}", fmt_g6(iv.entry), fmt_g6(iv.exit)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// One CSV row per case.
pub fn write_results_csv<W: Write>(mut w: W, results: &[CaseResult]) -> io::Result<()> {
    writeln!(w, "case,kind,n_oracle,n_engine,oracle_bounds_deg,engine_bounds_deg,max_delta_deg,threshold_deg,pass")?;
    for r in results {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.case.name,
            r.case.kind.name(),
            r.oracle.len(),
            r.engine.len(),
            bounds(&r.oracle),
            bounds(&r.engine),
            if r.max_delta_deg.is_finite() {
                format!("{:.6}", r.max_delta_deg)
            } else {
                "inf".into()
            },
            fmt_g6(r.case.threshold_deg),
            r.passed(),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_counts_and_topology() {
        assert!(mid_pass_cases().len() >= 20);
        let corners = corner_cases();
        assert!(corners.len() >= 5);
        for c in &corners {
            let ivs = analytical_engagement(&c.scene).unwrap();
            assert_eq!(ivs.len(), 2, "{}: {ivs:?}", c.name);
        }
        for c in &mid_pass_cases() {
            let ivs = analytical_engagement(&c.scene).unwrap();
            assert_eq!(ivs.len(), 1, "{}: {ivs:?}", c.name);
        }
    }

    #[test]
    fn slot_law_values() {
        assert!((slot_width_law(5.0, 5.0) - 240.0).abs() < 1e-12);
        assert!((slot_width_law(0.0, 5.0) - 180.0).abs() < 1e-12);
    }

    #[test]
    fn delta_matching() {
        let a = [AngularInterval::new(359.99, 90.0)];
        let b = [AngularInterval::new(0.01, 90.0)];
        assert!((interval_delta(&a, &b) - 0.02).abs() < 1e-9);
        assert_eq!(interval_delta(&a, &[]), f64::INFINITY);
    }
}
