//! Sequential simulation loop: engagement against the current stock, then
//! material removal, one CL segment at a time.

pub mod synthetic;
pub mod validation;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::engagement::{cwe_for_segment, AngularInterval, CWERecord, EngagementOptions};
use crate::error::{Error, ValidationError};
use crate::geom2d::{Region2D, DEFAULT_CHORD_TOL};
use crate::io::{self, AngleOutput, Toolpath};
use crate::ipw::{segment_error, SliceStack, StockDefinition, SubtractOptions};
use crate::sweep::{CLSegment, SweepMode, ToolDefinition, Z_EPS};

/// A segment counts as processed only if it removes or engages more than
/// this (mm³ for removal, mm² for the engaged chip area).
pub const EFFECT_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub dz: f64,
    pub chord_tol: f64,
    pub mode: SweepMode,
    /// Where periodic and failure snapshots go. Nothing is written when unset.
    pub output_dir: Option<PathBuf>,
    /// Write an IPW snapshot after every N-th segment (0 disables).
    pub snapshot_every: usize,
    /// Keep an SVG top view for every N-th segment (0 disables).
    pub svg_every: usize,
    pub angle_output: AngleOutput,
    /// Per-slice work on the rayon pool. Outputs do not depend on it.
    pub parallel: bool,
    /// Measure wall time. When off, every time field is written as 0 so
    /// whole output directories can be compared byte for byte.
    pub timing: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            dz: 1.0,
            chord_tol: DEFAULT_CHORD_TOL,
            mode: SweepMode::Exact,
            output_dir: None,
            snapshot_every: 0,
            svg_every: 0,
            angle_output: AngleOutput::Raw,
            parallel: true,
            timing: true,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.dz > 0.0 && self.dz.is_finite()) {
            return Err(ValidationError::new("dz", format!("must be positive, got {}", self.dz)));
        }
        if !(self.chord_tol > 0.0 && self.chord_tol.is_finite()) {
            return Err(ValidationError::new(
                "chord_tol",
                format!("must be positive, got {}", self.chord_tol),
            ));
        }
        if let SweepMode::SampledUnion { spacing } = self.mode {
            if !(spacing > 0.0 && spacing.is_finite()) {
                return Err(ValidationError::new("spacing", format!("must be positive, got {spacing}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerfRecord {
    pub operation: String,
    /// CL segments in the toolpath.
    pub n_cls_scheduled: usize,
    /// Segments that overlapped the stock and engaged or removed material.
    pub n_cls_processed: usize,
    /// Wall time of the whole segment loop, seconds.
    pub total_time_s: f64,
    /// Sum of processed segment times over the processed count, ms.
    pub avg_time_per_processed_cl_ms: f64,
    pub median_time_per_processed_cl_ms: f64,
}

/// Top view kept for one segment.
#[derive(Clone, Debug, PartialEq)]
pub struct SvgFrame {
    pub cl_index: usize,
    pub document: String,
}

#[derive(Clone, Debug)]
pub struct SimulationOutput {
    pub records: Vec<CWERecord>,
    pub perf: PerfRecord,
    pub initial_volume: f64,
    pub final_stack: SliceStack,
    pub frames: Vec<SvgFrame>,
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Slice drawn in the top view: the lowest engaged one, else the one at the
/// tool tip.
fn frame_slice(stack: &SliceStack, rec: &CWERecord) -> (Vec<AngularInterval>, Region2D) {
    let pick = rec
        .slices
        .iter()
        .find(|s| s.is_engaged())
        .or_else(|| rec.slices.first());
    match pick {
        Some(s) => {
            let range = stack.slices_between(s.z_mid - Z_EPS, s.z_mid + Z_EPS);
            let region = stack.slices()[range.start].region.clone();
            (s.intervals.clone(), region)
        }
        None => (Vec::new(), Region2D::empty()),
    }
}

fn write_snapshot_file(dir: &Path, name: &str, stack: &SliceStack) -> Result<PathBuf, Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    io::save_snapshot(&path, stack)?;
    Ok(path)
}

/// Runs every segment of `toolpath` against a fresh stack built from `stock`.
///
/// On a kernel failure the stack as it was before the failing segment is
/// written to `output_dir` (when set) and its path is reported in the error.
pub fn run_simulation(
    config: &SimulationConfig,
    tool: &ToolDefinition,
    stock: &StockDefinition,
    toolpath: &Toolpath,
) -> Result<SimulationOutput, Error> {
    config.validate()?;
    if toolpath.tool_id != tool.id {
        return Err(ValidationError::new(
            "$.tool_id",
            format!("toolpath uses tool '{}' but tool file defines '{}'", toolpath.tool_id, tool.id),
        )
        .into());
    }
    let mut stack = SliceStack::init_from_stock(stock, config.dz)?;
    let initial_volume = stack.volume();
    let segments = CLSegment::chain(&toolpath.cls, tool)?;
    let eopts = EngagementOptions {
        chord_tol: config.chord_tol,
        parallel: config.parallel,
    };
    let sopts = SubtractOptions {
        mode: config.mode,
        chord_tol: config.chord_tol,
        parallel: config.parallel,
    };

    let mut records = Vec::with_capacity(segments.len());
    let mut frames = Vec::new();
    let mut processed_times = Vec::new();
    let mut previous_feed: Option<f64> = None;
    let loop_start = Instant::now();

    for seg in &segments {
        let overlaps = stack.bbox().is_some_and(|bb| bb.intersects(&seg.xy_bbox()));
        let t0 = Instant::now();
        let mut rec = match cwe_for_segment(&stack, seg, previous_feed, &eopts) {
            Ok(r) => r,
            Err(g) => return Err(attach_snapshot(segment_error(seg, g), config, &stack)),
        };
        let engage_ms = t0.elapsed().as_secs_f64() * 1e3;
        // The top view needs the stack before removal; build it outside the
        // timed stages.
        if config.svg_every > 0 && (seg.index + 1) % config.svg_every == 0 {
            let (ivs, region) = frame_slice(&stack, &rec);
            frames.push(SvgFrame {
                cl_index: rec.cl_index,
                document: io::emit_svg_topview(&rec, tool.radius(), &ivs, &region),
            });
        }
        let t1 = Instant::now();
        let report = match stack.subtract_segment(seg, &sopts) {
            Ok(r) => r,
            Err(e) => return Err(attach_snapshot(e, config, &stack)),
        };
        let elapsed_ms = engage_ms + t1.elapsed().as_secs_f64() * 1e3;

        rec.removed_volume = report.removed_volume;
        rec.segment_time_ms = if config.timing { elapsed_ms } else { 0.0 };
        if !rec.feed_angle_defaulted {
            previous_feed = Some(rec.feed_angle);
        }
        let effect = rec.removed_volume > EFFECT_EPS || rec.slices.iter().any(|s| s.chip_area > EFFECT_EPS);
        if overlaps && effect {
            processed_times.push(rec.segment_time_ms);
        }
        if config.snapshot_every > 0 && (seg.index + 1) % config.snapshot_every == 0 {
            if let Some(dir) = &config.output_dir {
                write_snapshot_file(dir, &format!("ipw_after_cl_{:06}.txt", rec.cl_index), &stack)?;
            }
        }
        records.push(rec);
    }

    let total_time_s = if config.timing {
        loop_start.elapsed().as_secs_f64()
    } else {
        0.0
    };
    let n_processed = processed_times.len();
    let avg = if n_processed == 0 {
        0.0
    } else {
        processed_times.iter().sum::<f64>() / n_processed as f64
    };
    let perf = PerfRecord {
        operation: toolpath.operation.clone(),
        n_cls_scheduled: segments.len(),
        n_cls_processed: n_processed,
        total_time_s,
        avg_time_per_processed_cl_ms: avg,
        median_time_per_processed_cl_ms: median(&mut processed_times),
    };
    Ok(SimulationOutput {
        records,
        perf,
        initial_volume,
        final_stack: stack,
        frames,
    })
}

fn attach_snapshot(e: Error, config: &SimulationConfig, stack: &SliceStack) -> Error {
    match e {
        Error::Segment {
            segment,
            cl,
            source,
            snapshot: None,
        } => {
            let snapshot = config.output_dir.as_ref().and_then(|dir| {
                write_snapshot_file(dir, &format!("ipw_error_segment_{segment:06}.txt"), stack).ok()
            });
            Error::Segment {
                segment,
                cl,
                source,
                snapshot,
            }
        }
        other => other,
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, Error> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, r: std::io::Result<()>, mut w: BufWriter<fs::File>) -> Result<(), Error> {
    r.and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// Writes `perf.csv` into `dir`.
pub fn write_perf(dir: &Path, perf: &PerfRecord) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join("perf.csv");
    let mut w = create(&path)?;
    let r = io::write_perf_csv(&mut w, perf);
    finish(&path, r, w)
}

/// Writes `cwe.csv`, `slices.csv`, `perf.csv`, the feed-relative slice file
/// when requested, and `svg/cl_NNNNNN.svg` for every kept frame.
pub fn write_outputs(dir: &Path, out: &SimulationOutput, angles: AngleOutput) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let path = dir.join("cwe.csv");
    let mut w = create(&path)?;
    let r = io::write_cwe_csv(&mut w, &out.records, angles);
    finish(&path, r, w)?;

    let path = dir.join("slices.csv");
    let mut w = create(&path)?;
    let r = io::write_slice_csv(&mut w, &out.records, angles == AngleOutput::FeedRelative);
    finish(&path, r, w)?;

    if angles == AngleOutput::Both {
        let path = dir.join("slices_feed_relative.csv");
        let mut w = create(&path)?;
        let r = io::write_slice_csv(&mut w, &out.records, true);
        finish(&path, r, w)?;
    }

    write_perf(dir, &out.perf)?;

    if !out.frames.is_empty() {
        let svg_dir = dir.join("svg");
        fs::create_dir_all(&svg_dir).map_err(|e| Error::io(&svg_dir, e))?;
        for f in &out.frames {
            let path = svg_dir.join(format!("cl_{:06}.svg", f.cl_index));
            fs::write(&path, &f.document).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}
