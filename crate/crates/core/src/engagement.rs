//! Cutter-workpiece engagement at the end CL of a segment.
//!
//! Angles are degrees, counter-clockwise from the workpiece +X axis unless
//! converted with [`feed_relative`].

use rayon::prelude::*;

use crate::error::{GeometryError, ValidationError};
use crate::geom2d::{circle_boundary_angles, intersection, polygonize, Circle, PointClass, Region2D};
use crate::ipw::SliceStack;
use crate::sweep::{CLSegment, CutterLocation, Z_EPS};

/// Gaps narrower than this between two engaged arcs are closed, degrees.
pub const MERGE_GAP_DEG: f64 = 0.01;

/// Chip areas below this are treated as no contact, mm².
pub const MIN_CHIP_AREA: f64 = 1e-9;

/// Arc of the tool circumference in contact with material, traversed
/// counter-clockwise from `entry` to `exit`. Both bounds lie in `[0, 360)`
/// except for full engagement, encoded as `(0, 360)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularInterval {
    pub entry: f64,
    pub exit: f64,
}

impl AngularInterval {
    pub const FULL: AngularInterval = AngularInterval { entry: 0.0, exit: 360.0 };

    pub fn new(entry: f64, exit: f64) -> Self {
        Self {
            entry: norm_deg(entry),
            exit: norm_deg(exit),
        }
    }

    pub fn is_full(&self) -> bool {
        self.entry == 0.0 && self.exit == 360.0
    }

    pub fn width(&self) -> f64 {
        if self.is_full() {
            360.0
        } else {
            (self.exit - self.entry).rem_euclid(360.0)
        }
    }

    /// Exit bound measured past `entry`, so that `exit - entry` is the width.
    pub fn exit_unwrapped(&self) -> f64 {
        self.entry + self.width()
    }

    pub fn mid_deg(&self) -> f64 {
        norm_deg(self.entry + 0.5 * self.width())
    }
}

pub(crate) fn norm_deg(a: f64) -> f64 {
    let r = a.rem_euclid(360.0);
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

fn is_inside(region: &Region2D, c: &Circle, deg: f64) -> bool {
    region.point_in(c.point_at_deg(deg)) == PointClass::Inside
}

/// Engaged arcs of the tool circle `c` against the material `pre_region`.
///
/// Crossing angles split the circle into gaps; a gap is engaged when its
/// midpoint lies inside the material. Engaged gaps separated by less than
/// [`MERGE_GAP_DEG`] are joined.
pub fn engagement_intervals(c: &Circle, pre_region: &Region2D) -> Vec<AngularInterval> {
    if pre_region.bbox().is_none_or(|bb| !bb.intersects(&c.bbox())) {
        return Vec::new();
    }
    let angles = circle_boundary_angles(c, pre_region);
    if angles.is_empty() {
        // No crossings: the circle is wholly inside or wholly outside. A
        // single probe can land on a vertex that merely touches the circle,
        // so try a second one.
        let inside = match pre_region.point_in(c.point_at_deg(0.0)) {
            PointClass::OnBoundary => is_inside(pre_region, c, 180.0),
            k => k == PointClass::Inside,
        };
        return if inside { vec![AngularInterval::FULL] } else { Vec::new() };
    }
    let n = angles.len();
    let gaps: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let s = angles[i];
            let e = if i + 1 < n { angles[i + 1] } else { angles[0] + 360.0 };
            (s, e)
        })
        .collect();
    let mut inside: Vec<bool> = gaps.iter().map(|&(s, e)| is_inside(pre_region, c, 0.5 * (s + e))).collect();
    let closing: Vec<usize> = (0..n)
        .filter(|&i| {
            !inside[i] && gaps[i].1 - gaps[i].0 < MERGE_GAP_DEG && inside[(i + n - 1) % n] && inside[(i + 1) % n]
        })
        .collect();
    for i in closing {
        inside[i] = true;
    }
    let Some(first_out) = inside.iter().position(|&v| !v) else {
        return vec![AngularInterval::FULL];
    };
    let mut out = Vec::new();
    let mut run: Option<(f64, f64)> = None;
    for step in 1..=n {
        let i = (first_out + step) % n;
        let (s, e) = gaps[i];
        if inside[i] {
            run = Some(match run {
                Some((rs, _)) => (rs, e),
                None => (s, e),
            });
        } else if let Some((rs, re)) = run.take() {
            out.push(AngularInterval::new(rs, re));
        }
    }
    if let Some((rs, re)) = run {
        out.push(AngularInterval::new(rs, re));
    }
    out.sort_by(|a, b| a.entry.total_cmp(&b.entry));
    out
}

/// Re-references interval bounds to the feed direction: each bound becomes
/// `(bound - feed_angle) mod 360`. Widths are preserved.
pub fn feed_relative(intervals: &[AngularInterval], feed_angle_deg: f64) -> Vec<AngularInterval> {
    let mut out: Vec<AngularInterval> = intervals
        .iter()
        .map(|iv| {
            if iv.is_full() {
                *iv
            } else {
                AngularInterval::new(iv.entry - feed_angle_deg, iv.entry - feed_angle_deg + iv.width())
            }
        })
        .collect();
    out.sort_by(|a, b| a.entry.total_cmp(&b.entry));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngagementSlice {
    pub z_mid: f64,
    pub intervals: Vec<AngularInterval>,
    /// Area of tool disk ∩ material, mm².
    pub chip_area: f64,
}

impl EngagementSlice {
    pub fn is_engaged(&self) -> bool {
        !self.intervals.is_empty() || self.chip_area > MIN_CHIP_AREA
    }

    pub fn total_width_deg(&self) -> f64 {
        self.intervals.iter().map(AngularInterval::width).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CWERecord {
    /// Index of the CL the record describes (the segment's end CL).
    pub cl_index: usize,
    pub end: CutterLocation,
    pub engagement_volume: f64,
    pub flank_contact_area: f64,
    pub bottom_contact_area: f64,
    pub removed_volume: f64,
    pub n_slices_engaged: usize,
    pub min_entry: f64,
    pub max_exit: f64,
    pub feed_angle: f64,
    /// Set when the segment had no XY direction and none could be inherited;
    /// `feed_angle` is then 0.
    pub feed_angle_defaulted: bool,
    pub slices: Vec<EngagementSlice>,
    pub segment_time_ms: f64,
}

impl CWERecord {
    pub fn is_engaged(&self) -> bool {
        self.n_slices_engaged > 0
    }

    /// Bounds over all slices: smallest entry and largest unwrapped exit,
    /// optionally after re-referencing to the feed direction.
    fn angle_bounds(slices: &[EngagementSlice], feed: Option<f64>) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in slices {
            let ivs = match feed {
                Some(f) => feed_relative(&s.intervals, f),
                None => s.intervals.clone(),
            };
            for iv in ivs {
                lo = lo.min(iv.entry);
                hi = hi.max(iv.exit_unwrapped());
            }
        }
        if lo.is_finite() {
            (lo, hi)
        } else {
            (0.0, 0.0)
        }
    }

    /// `(min_entry, max_exit)` with bounds measured from the feed direction.
    pub fn feed_relative_bounds(&self) -> (f64, f64) {
        Self::angle_bounds(&self.slices, Some(self.feed_angle))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngagementOptions {
    pub chord_tol: f64,
    pub parallel: bool,
}

impl Default for EngagementOptions {
    fn default() -> Self {
        Self {
            chord_tol: crate::geom2d::DEFAULT_CHORD_TOL,
            parallel: true,
        }
    }
}

/// Feed angle of `seg`, falling back to `previous` for moves without XY
/// travel. The flag is set when neither is available.
pub fn resolve_feed_angle(seg: &CLSegment, previous: Option<f64>) -> (f64, bool) {
    match seg.feed_angle_deg().or(previous) {
        Some(a) => (a, false),
        None => (0.0, true),
    }
}

/// Engagement at the end CL of `seg`, measured against the stack before the
/// segment's material is removed. `removed_volume` is left at 0 for the
/// caller to fill in.
pub fn cwe_for_segment(
    pre_stack: &SliceStack,
    seg: &CLSegment,
    previous_feed: Option<f64>,
    opts: &EngagementOptions,
) -> Result<CWERecord, GeometryError> {
    let r = seg.tool.radius();
    let circle = Circle::new(seg.end.xy(), r).map_err(|e| GeometryError::Degenerate(e.to_string()))?;
    let z = seg.end.z;
    let range = pre_stack.slices_between(z - Z_EPS, z + seg.tool.flute_length + Z_EPS);
    let disk = polygonize(circle, opts.chord_tol).map_err(validation_to_geometry)?;
    let cb = circle.bbox();
    let work = |k: usize| -> Result<EngagementSlice, GeometryError> {
        let s = &pre_stack.slices()[k];
        let touches = s.region.bbox().is_some_and(|bb| bb.intersects(&cb));
        if !touches {
            return Ok(EngagementSlice {
                z_mid: s.z_mid,
                intervals: Vec::new(),
                chip_area: 0.0,
            });
        }
        let intervals = engagement_intervals(&circle, &s.region);
        let chip_area = intersection(&disk, &s.region)?.area();
        Ok(EngagementSlice {
            z_mid: s.z_mid,
            intervals,
            chip_area,
        })
    };
    let slices: Vec<EngagementSlice> = if opts.parallel {
        range.into_par_iter().map(work).collect::<Result<_, _>>()?
    } else {
        range.map(work).collect::<Result<_, _>>()?
    };

    let dz = pre_stack.dz();
    let engagement_volume = slices.iter().map(|s| s.chip_area).sum::<f64>() * dz;
    let flank_contact_area = slices
        .iter()
        .map(|s| r * s.total_width_deg().to_radians() * dz)
        .sum();
    let bottom_contact_area = match slices.first() {
        Some(s) if s.is_engaged() => s.chip_area,
        _ => 0.0,
    };
    let n_slices_engaged = slices.iter().filter(|s| s.is_engaged()).count();
    let (min_entry, max_exit) = CWERecord::angle_bounds(&slices, None);
    let (feed_angle, feed_angle_defaulted) = resolve_feed_angle(seg, previous_feed);
    Ok(CWERecord {
        cl_index: seg.index + 1,
        end: seg.end,
        engagement_volume,
        flank_contact_area,
        bottom_contact_area,
        removed_volume: 0.0,
        n_slices_engaged,
        min_entry,
        max_exit,
        feed_angle,
        feed_angle_defaulted,
        slices,
        segment_time_ms: 0.0,
    })
}

fn validation_to_geometry(e: ValidationError) -> GeometryError {
    GeometryError::Degenerate(e.to_string())
}
