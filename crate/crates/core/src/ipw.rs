//! In-process workpiece as a stack of axial slices.

use rayon::prelude::*;

use crate::error::{Error, GeometryError, ValidationError};
use crate::geom2d::{difference, intersection, BBox, Point2, Region2D};
use crate::sweep::{footprint_region, CLSegment, SweepError, SweepMode};

#[derive(Clone, Debug, PartialEq)]
pub enum StockDefinition {
    Box { min: [f64; 3], max: [f64; 3] },
    ExtrudedPolygon { base: Region2D, z_bottom: f64, z_top: f64 },
}

impl StockDefinition {
    pub fn validate(&self) -> Result<(), ValidationError> {
        match self {
            StockDefinition::Box { min, max } => {
                for k in 0..3 {
                    if !(min[k].is_finite() && max[k].is_finite()) {
                        return Err(ValidationError::new(format!("min[{k}]"), "non-finite coordinate"));
                    }
                    if max[k] <= min[k] {
                        return Err(ValidationError::new(
                            format!("max[{k}]"),
                            format!("box extent must be positive, got {} .. {}", min[k], max[k]),
                        ));
                    }
                }
                Ok(())
            }
            StockDefinition::ExtrudedPolygon { base, z_bottom, z_top } => {
                if !(z_bottom.is_finite() && z_top.is_finite()) || z_top <= z_bottom {
                    return Err(ValidationError::new(
                        "z_top_mm",
                        format!("extrusion height must be positive, got {z_bottom} .. {z_top}"),
                    ));
                }
                if base.is_empty() {
                    return Err(ValidationError::new("outers", "base region is empty"));
                }
                base.validate()
            }
        }
    }

    pub fn z_range(&self) -> (f64, f64) {
        match self {
            StockDefinition::Box { min, max } => (min[2], max[2]),
            StockDefinition::ExtrudedPolygon { z_bottom, z_top, .. } => (*z_bottom, *z_top),
        }
    }

    pub fn height(&self) -> f64 {
        let (lo, hi) = self.z_range();
        hi - lo
    }

    pub fn cross_section(&self) -> Region2D {
        match self {
            StockDefinition::Box { min, max } => {
                Region2D::rect(Point2::new(min[0], min[1]), Point2::new(max[0], max[1]))
            }
            StockDefinition::ExtrudedPolygon { base, .. } => base.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    pub z_mid: f64,
    pub region: Region2D,
}

/// Slabs of thickness `dz`; each slab is represented by its midline section.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceStack {
    dz: f64,
    slices: Vec<Slice>,
}

/// Outcome of subtracting one segment from the stack.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RemovalReport {
    /// `(slice index, removed area mm²)` for every slice the footprint reached.
    pub removed_areas: Vec<(usize, f64)>,
    pub removed_volume: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubtractOptions {
    pub mode: SweepMode,
    pub chord_tol: f64,
    /// Process slices on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for SubtractOptions {
    fn default() -> Self {
        Self {
            mode: SweepMode::Exact,
            chord_tol: crate::geom2d::DEFAULT_CHORD_TOL,
            parallel: true,
        }
    }
}

impl SliceStack {
    /// Slices centred at `z_bottom + dz/2 + k*dz`. The slice count is the
    /// stock height over `dz`, rounded to the nearest integer, so every
    /// midline lies inside the stock.
    pub fn init_from_stock(stock: &StockDefinition, dz: f64) -> Result<Self, ValidationError> {
        stock.validate()?;
        let h = stock.height();
        if !(dz > 0.0 && dz.is_finite()) {
            return Err(ValidationError::new("dz", format!("must be positive, got {dz}")));
        }
        if dz >= h {
            return Err(ValidationError::new(
                "dz",
                format!("slice thickness {dz} must be smaller than the stock height {h}"),
            ));
        }
        let n = ((h / dz).round() as usize).max(1);
        let (z0, _) = stock.z_range();
        let section = stock.cross_section();
        let slices = (0..n)
            .map(|k| Slice {
                z_mid: z0 + 0.5 * dz + k as f64 * dz,
                region: section.clone(),
            })
            .collect();
        Ok(Self { dz, slices })
    }

    /// Stack from explicit slices (e.g. a snapshot). Slices must be strictly
    /// increasing in z and uniformly `dz` apart.
    pub fn from_slices(dz: f64, slices: Vec<Slice>) -> Result<Self, ValidationError> {
        if !(dz > 0.0 && dz.is_finite()) {
            return Err(ValidationError::new("dz", format!("must be positive, got {dz}")));
        }
        for (k, w) in slices.windows(2).enumerate() {
            if ((w[1].z_mid - w[0].z_mid) - dz).abs() > 1e-6 * dz.max(1.0) {
                return Err(ValidationError::new(
                    format!("slices[{}]", k + 1),
                    format!("slices must be {dz} apart, got {} -> {}", w[0].z_mid, w[1].z_mid),
                ));
            }
        }
        for (k, s) in slices.iter().enumerate() {
            s.region
                .validate()
                .map_err(|e| ValidationError::new(format!("slices[{k}].{}", e.path), e.message))?;
        }
        Ok(Self { dz, slices })
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Σ area·dz.
    pub fn volume(&self) -> f64 {
        self.slices.iter().map(|s| s.region.area()).sum::<f64>() * self.dz
    }

    /// XY bounding box over all remaining material.
    pub fn bbox(&self) -> Option<BBox> {
        self.slices
            .iter()
            .filter_map(|s| s.region.bbox())
            .reduce(|a, b| a.union(&b))
    }

    /// Indices of slices whose midline lies in `[z_lo, z_hi]`.
    pub fn slices_between(&self, z_lo: f64, z_hi: f64) -> std::ops::Range<usize> {
        let lo = self.slices.partition_point(|s| s.z_mid < z_lo);
        let hi = self.slices.partition_point(|s| s.z_mid <= z_hi);
        lo..hi.max(lo)
    }

    /// Removes the segment's footprint from every slice it reaches.
    ///
    /// Either all affected slices are updated or, on error, none are.
    pub fn subtract_segment(&mut self, seg: &CLSegment, opts: &SubtractOptions) -> Result<RemovalReport, Error> {
        let (z_lo, z_hi) = seg.z_extent();
        let range = self.slices_between(z_lo - crate::sweep::Z_EPS, z_hi + crate::sweep::Z_EPS);
        let seg_box = seg.xy_bbox();
        let work = |k: usize| -> Result<Option<(usize, Region2D, f64)>, SweepError> {
            let slice = &self.slices[k];
            match slice.region.bbox() {
                Some(bb) if bb.intersects(&seg_box) => {}
                _ => return Ok(None),
            }
            let Some(fp) = footprint_region(seg, slice.z_mid, opts.mode, opts.chord_tol)? else {
                return Ok(None);
            };
            let removed = intersection(&slice.region, &fp)?.area();
            let next = difference(&slice.region, &fp)?;
            Ok(Some((k, next, removed)))
        };
        let results: Vec<_> = if opts.parallel {
            range.clone().into_par_iter().map(work).collect()
        } else {
            range.clone().map(work).collect()
        };
        let mut updates = Vec::with_capacity(results.len());
        for r in results {
            match r {
                Ok(Some(u)) => updates.push(u),
                Ok(None) => {}
                Err(SweepError::Validation(v)) => return Err(v.into()),
                Err(SweepError::Geometry(g)) => return Err(segment_error(seg, g)),
            }
        }
        let mut report = RemovalReport::default();
        for (k, region, removed) in updates {
            self.slices[k].region = region;
            report.removed_areas.push((k, removed));
            report.removed_volume += removed * self.dz;
        }
        Ok(report)
    }
}

pub(crate) fn segment_error(seg: &CLSegment, source: GeometryError) -> Error {
    Error::Segment {
        segment: seg.index,
        cl: seg.end.to_array(),
        source,
        snapshot: None,
    }
}

/// Free-function form of [`SliceStack::init_from_stock`].
pub fn init_from_stock(stock: &StockDefinition, dz: f64) -> Result<SliceStack, ValidationError> {
    SliceStack::init_from_stock(stock, dz)
}

/// Free-function form of [`SliceStack::volume`].
pub fn volume(stack: &SliceStack) -> f64 {
    stack.volume()
}
