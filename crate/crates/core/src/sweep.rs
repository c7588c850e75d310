//! Per-slice material-removal footprints of straight CL moves.

use crate::error::{GeometryError, ValidationError};
use crate::geom2d::{polygonize, union_all, Capsule, Circle, Point2, Region2D, SNAP};

/// Tolerance on z comparisons between slice planes and tool extents, mm.
/// Slice planes and CL heights are both decimal inputs; this absorbs the
/// rounding in `z_bottom + dz/2 + k*dz`.
pub const Z_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToolKind {
    FlatEndMill,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToolDefinition {
    pub id: String,
    pub kind: ToolKind,
    pub diameter: f64,
    pub flute_length: f64,
}

impl ToolDefinition {
    pub fn flat_end_mill(id: impl Into<String>, diameter: f64, flute_length: f64) -> Result<Self, ValidationError> {
        if !(diameter > 0.0 && diameter.is_finite()) {
            return Err(ValidationError::new("diameter_mm", format!("must be positive and finite, got {diameter}")));
        }
        if !(flute_length > 0.0 && flute_length.is_finite()) {
            return Err(ValidationError::new(
                "flute_length_mm",
                format!("must be positive and finite, got {flute_length}"),
            ));
        }
        Ok(Self {
            id: id.into(),
            kind: ToolKind::FlatEndMill,
            diameter,
            flute_length,
        })
    }

    pub fn radius(&self) -> f64 {
        0.5 * self.diameter
    }
}

/// Tool-tip position in the workpiece frame, mm.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CutterLocation {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CutterLocation {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn xy(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for CutterLocation {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

/// One straight move between consecutive cutter locations.
#[derive(Clone, Copy, Debug)]
pub struct CLSegment<'a> {
    pub index: usize,
    pub start: CutterLocation,
    pub end: CutterLocation,
    pub tool: &'a ToolDefinition,
}

impl<'a> CLSegment<'a> {
    pub fn new(
        index: usize,
        start: CutterLocation,
        end: CutterLocation,
        tool: &'a ToolDefinition,
    ) -> Result<Self, ValidationError> {
        for (name, cl) in [("start", start), ("end", end)] {
            if !cl.is_finite() {
                return Err(ValidationError::new(
                    format!("segments[{index}].{name}"),
                    "non-finite cutter location",
                ));
            }
        }
        Ok(Self { index, start, end, tool })
    }

    /// Segments of a CL list: `cls[i] -> cls[i+1]`.
    pub fn chain(cls: &[CutterLocation], tool: &'a ToolDefinition) -> Result<Vec<Self>, ValidationError> {
        cls.windows(2)
            .enumerate()
            .map(|(i, w)| Self::new(i, w[0], w[1], tool))
            .collect()
    }

    pub fn xy_length(&self) -> f64 {
        self.start.xy().dist(self.end.xy())
    }

    /// Start and end coincide: the tool rests in place.
    pub fn is_dwell(&self) -> bool {
        self.xy_length() <= SNAP && (self.end.z - self.start.z).abs() <= SNAP
    }

    /// Direction of XY travel in degrees, `None` when there is none.
    pub fn feed_angle_deg(&self) -> Option<f64> {
        if self.xy_length() <= SNAP {
            return None;
        }
        let d = self.end.xy() - self.start.xy();
        Some(d.y.atan2(d.x).to_degrees())
    }

    pub fn is_constant_z(&self) -> bool {
        (self.end.z - self.start.z).abs() <= SNAP
    }

    /// Lowest and highest z reached by the cutting part of the tool.
    pub fn z_extent(&self) -> (f64, f64) {
        let lo = self.start.z.min(self.end.z);
        let hi = self.start.z.max(self.end.z) + self.tool.flute_length;
        (lo, hi)
    }

    /// Axis-aligned XY box of everything the tool sweeps.
    pub fn xy_bbox(&self) -> crate::geom2d::BBox {
        crate::geom2d::BBox::from_points(&[self.start.xy(), self.end.xy()])
            .expect("two points")
            .inflate(self.tool.radius())
    }
}

/// Footprint of a constant-z move.
pub fn capsule_for_segment(seg: &CLSegment) -> Result<Capsule, ValidationError> {
    if !seg.is_constant_z() {
        return Err(ValidationError::new(
            format!("segments[{}]", seg.index),
            format!(
                "capsule_for_segment needs constant z, got {} -> {}; use footprint_at_slice",
                seg.start.z, seg.end.z
            ),
        ));
    }
    Capsule::new(seg.start.xy(), seg.end.xy(), seg.tool.radius())
}

/// Parameter range `[t0, t1]` of the move during which the flutes span `z`.
fn cut_params(seg: &CLSegment, z: f64) -> Option<(f64, f64)> {
    let (z0, z1) = (seg.start.z, seg.end.z);
    let f = seg.tool.flute_length;
    let (lo, hi) = (z - f - Z_EPS, z + Z_EPS);
    if seg.is_constant_z() {
        return (lo <= z0 && z0 <= hi).then_some((0.0, 1.0));
    }
    let dz = z1 - z0;
    let (ta, tb) = ((lo - z0) / dz, (hi - z0) / dz);
    let (t0, t1) = (ta.min(tb).max(0.0), ta.max(tb).min(1.0));
    (t0 <= t1).then_some((t0, t1))
}

/// Capsule removed from the slice at height `z`, or `None` if the tool never
/// reaches that height during the move.
pub fn footprint_at_slice(seg: &CLSegment, z: f64) -> Option<Capsule> {
    let (t0, t1) = cut_params(seg, z)?;
    let (a, b) = (seg.start.xy(), seg.end.xy());
    Some(Capsule {
        a: a.lerp(b, t0),
        b: a.lerp(b, t1),
        radius: seg.tool.radius(),
    })
}

/// Default spacing between sampled tool positions: a quarter radius.
pub fn default_spacing(tool: &ToolDefinition) -> f64 {
    0.25 * tool.radius()
}

/// Union of polygonized tool disks at evenly spaced positions no further
/// apart than `spacing` along the cut part of the move, both ends included.
pub fn sampled_union_footprint(
    seg: &CLSegment,
    z: f64,
    spacing: f64,
    chord_tol: f64,
) -> Result<Region2D, SweepError> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(ValidationError::new("spacing", format!("must be positive, got {spacing}")).into());
    }
    let Some(cap) = footprint_at_slice(seg, z) else {
        return Ok(Region2D::empty());
    };
    let n = if cap.is_disk() {
        0
    } else {
        (cap.length() / spacing).ceil().max(1.0) as usize
    };
    let disks = (0..=n)
        .map(|k| {
            let t = if n == 0 { 0.0 } else { k as f64 / n as f64 };
            polygonize(Circle::new(cap.a.lerp(cap.b, t), cap.radius)?, chord_tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(union_all(disks)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepMode {
    /// Exact capsule footprint per slice.
    Exact,
    /// Union of sampled tool positions, `spacing` mm apart.
    SampledUnion { spacing: f64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Polygonal footprint for the slice at `z` in the given mode.
pub fn footprint_region(
    seg: &CLSegment,
    z: f64,
    mode: SweepMode,
    chord_tol: f64,
) -> Result<Option<Region2D>, SweepError> {
    match mode {
        SweepMode::Exact => match footprint_at_slice(seg, z) {
            Some(cap) => Ok(Some(polygonize(cap, chord_tol)?)),
            None => Ok(None),
        },
        SweepMode::SampledUnion { spacing } => {
            if footprint_at_slice(seg, z).is_none() {
                return Ok(None);
            }
            sampled_union_footprint(seg, z, spacing, chord_tol).map(Some)
        }
    }
}
