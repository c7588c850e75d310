//! Python bindings: `import pycwe`.
//!
//! Points are `(x, y)` tuples, cutter locations `(x, y, z)` tuples and
//! angular intervals `(entry_deg, exit_deg)` tuples with the exit wrapped
//! into `[0, 360]`.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cwe_core::engagement::{self, AngularInterval, CWERecord};
use cwe_core::error::{Error, GeometryError as CoreGeometryError, ValidationError as CoreValidationError};
use cwe_core::geom2d::{self, Capsule, Circle, Contour, Point2, PointClass, Region2D};
use cwe_core::io::{self, AngleOutput, Toolpath};
use cwe_core::ipw::StockDefinition;
use cwe_core::oracle::{self, AnalyticalScene, OracleError};
use cwe_core::pipeline::{self, validation, SimulationConfig, SimulationOutput};
use cwe_core::sweep::{default_spacing, CutterLocation, SweepMode, ToolDefinition};

create_exception!(pycwe, ValidationError, PyValueError, "Input violates a documented contract.");
create_exception!(pycwe, GeometryError, PyRuntimeError, "The planar kernel failed.");

fn verr(e: CoreValidationError) -> PyErr {
    ValidationError::new_err(e.to_string())
}

fn gerr(e: CoreGeometryError) -> PyErr {
    GeometryError::new_err(e.to_string())
}

fn core_err(e: Error) -> PyErr {
    match e {
        Error::Validation(v) => verr(v),
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::Geometry(_) | Error::Segment { .. } => GeometryError::new_err(e.to_string()),
    }
}

fn oracle_err(e: OracleError) -> PyErr {
    match e {
        OracleError::Validation(v) => verr(v),
        other => GeometryError::new_err(other.to_string()),
    }
}

fn pt(p: (f64, f64)) -> Point2 {
    Point2::new(p.0, p.1)
}

fn tuples(ivs: &[AngularInterval]) -> Vec<(f64, f64)> {
    ivs.iter().map(|iv| (iv.entry, iv.exit)).collect()
}

fn points(c: &Contour) -> Vec<(f64, f64)> {
    c.vertices().iter().map(|p| (p.x, p.y)).collect()
}

fn contour(raw: Vec<(f64, f64)>) -> PyResult<Contour> {
    Contour::new(raw.into_iter().map(pt).collect()).map_err(verr)
}

fn angle_output(name: &str) -> PyResult<AngleOutput> {
    match name {
        "raw" => Ok(AngleOutput::Raw),
        "feed_relative" => Ok(AngleOutput::FeedRelative),
        "both" => Ok(AngleOutput::Both),
        _ => Err(ValidationError::new_err(format!(
            "angles must be 'raw', 'feed_relative' or 'both', got '{name}'"
        ))),
    }
}

/// Flat end mill.
#[pyclass(frozen, name = "Tool")]
struct PyTool(ToolDefinition);

#[pymethods]
impl PyTool {
    #[new]
    fn new(id: String, diameter: f64, flute_length: f64) -> PyResult<Self> {
        ToolDefinition::flat_end_mill(id, diameter, flute_length)
            .map(Self)
            .map_err(verr)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_tool(text).map(Self).map_err(verr)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        io::load_tool(path).map(Self).map_err(core_err)
    }

    fn to_json(&self) -> String {
        io::tool_to_json(&self.0)
    }

    #[getter]
    fn id(&self) -> String {
        self.0.id.clone()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.0.diameter
    }

    #[getter]
    fn flute_length(&self) -> f64 {
        self.0.flute_length
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.0.radius()
    }

    fn __repr__(&self) -> String {
        format!(
            "Tool(id={:?}, diameter={}, flute_length={})",
            self.0.id, self.0.diameter, self.0.flute_length
        )
    }
}

/// Box or extruded-polygon stock.
#[pyclass(frozen, name = "Stock")]
struct PyStock(StockDefinition);

#[pymethods]
impl PyStock {
    #[staticmethod]
    #[pyo3(name = "box")]
    fn new_box(min: [f64; 3], max: [f64; 3]) -> PyResult<Self> {
        let s = StockDefinition::Box { min, max };
        s.validate().map_err(verr)?;
        Ok(Self(s))
    }

    #[staticmethod]
    #[pyo3(signature = (outers, holes, z_bottom, z_top))]
    fn extruded(outers: Vec<Vec<(f64, f64)>>, holes: Vec<Vec<(f64, f64)>>, z_bottom: f64, z_top: f64) -> PyResult<Self> {
        let base = PyRegion::new(outers, holes)?.0;
        let s = StockDefinition::ExtrudedPolygon { base, z_bottom, z_top };
        s.validate().map_err(verr)?;
        Ok(Self(s))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_stock(text).map(Self).map_err(verr)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        io::load_stock(path).map(Self).map_err(core_err)
    }

    fn to_json(&self) -> String {
        io::stock_to_json(&self.0)
    }

    #[getter]
    fn height(&self) -> f64 {
        self.0.height()
    }

    #[getter]
    fn z_range(&self) -> (f64, f64) {
        self.0.z_range()
    }

    fn cross_section(&self) -> PyRegion {
        PyRegion(self.0.cross_section())
    }
}

/// Planar material region: counter-clockwise outers, clockwise holes.
#[pyclass(frozen, name = "Region")]
struct PyRegion(Region2D);

#[pymethods]
impl PyRegion {
    #[new]
    #[pyo3(signature = (outers, holes = Vec::new()))]
    fn new(outers: Vec<Vec<(f64, f64)>>, holes: Vec<Vec<(f64, f64)>>) -> PyResult<Self> {
        let outers = outers.into_iter().map(contour).collect::<PyResult<Vec<_>>>()?;
        let holes = holes.into_iter().map(contour).collect::<PyResult<Vec<_>>>()?;
        Region2D::new(outers, holes).map(Self).map_err(verr)
    }

    #[staticmethod]
    fn rect(min: (f64, f64), max: (f64, f64)) -> Self {
        Self(Region2D::rect(pt(min), pt(max)))
    }

    #[staticmethod]
    fn empty() -> Self {
        Self(Region2D::empty())
    }

    fn area(&self) -> f64 {
        self.0.area()
    }

    fn perimeter(&self) -> f64 {
        self.0.perimeter()
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn outers(&self) -> Vec<Vec<(f64, f64)>> {
        self.0.outers().iter().map(points).collect()
    }

    fn holes(&self) -> Vec<Vec<(f64, f64)>> {
        self.0.holes().iter().map(points).collect()
    }

    /// `"inside"`, `"outside"` or `"boundary"`.
    fn point_in(&self, x: f64, y: f64) -> &'static str {
        match self.0.point_in(Point2::new(x, y)) {
            PointClass::Inside => "inside",
            PointClass::Outside => "outside",
            PointClass::OnBoundary => "boundary",
        }
    }

    fn difference(&self, other: &PyRegion) -> PyResult<PyRegion> {
        self.0.difference(&other.0).map(PyRegion).map_err(gerr)
    }

    fn intersection(&self, other: &PyRegion) -> PyResult<PyRegion> {
        self.0.intersection(&other.0).map(PyRegion).map_err(gerr)
    }

    fn union(&self, other: &PyRegion) -> PyResult<PyRegion> {
        self.0.union(&other.0).map(PyRegion).map_err(gerr)
    }

    fn translated(&self, dx: f64, dy: f64) -> PyRegion {
        PyRegion(self.0.translated(Point2::new(dx, dy)))
    }

    fn __repr__(&self) -> String {
        format!(
            "Region(outers={}, holes={}, area={})",
            self.0.outers().len(),
            self.0.holes().len(),
            self.0.area()
        )
    }
}

/// Polygon of a disk with chord deviation at most `chord_tol`.
#[pyfunction]
#[pyo3(signature = (center, radius, chord_tol = geom2d::DEFAULT_CHORD_TOL))]
fn polygonize_circle(center: (f64, f64), radius: f64, chord_tol: f64) -> PyResult<PyRegion> {
    let c = Circle::new(pt(center), radius).map_err(verr)?;
    geom2d::polygonize(c, chord_tol).map(PyRegion).map_err(verr)
}

/// Polygon of the region swept by a disk moving from `a` to `b`.
#[pyfunction]
#[pyo3(signature = (a, b, radius, chord_tol = geom2d::DEFAULT_CHORD_TOL))]
fn polygonize_capsule(a: (f64, f64), b: (f64, f64), radius: f64, chord_tol: f64) -> PyResult<PyRegion> {
    let c = Capsule::new(pt(a), pt(b), radius).map_err(verr)?;
    geom2d::polygonize(c, chord_tol).map(PyRegion).map_err(verr)
}

/// Arcs of the circle lying in material, counter-clockwise from +X.
#[pyfunction]
fn engagement_intervals(center: (f64, f64), radius: f64, region: &PyRegion) -> PyResult<Vec<(f64, f64)>> {
    let c = Circle::new(pt(center), radius).map_err(verr)?;
    Ok(tuples(&engagement::engagement_intervals(&c, &region.0)))
}

/// Closed-form engaged arcs for a rectangle minus straight passes.
/// `passes` holds `((ax, ay), (bx, by), radius)` triples.
#[pyfunction]
fn analytical_engagement(
    stock_min: (f64, f64),
    stock_max: (f64, f64),
    passes: Vec<((f64, f64), (f64, f64), f64)>,
    cl: (f64, f64),
    radius: f64,
) -> PyResult<Vec<(f64, f64)>> {
    let passes = passes
        .into_iter()
        .map(|(a, b, r)| Capsule::new(pt(a), pt(b), r).map_err(verr))
        .collect::<PyResult<Vec<_>>>()?;
    let scene = AnalyticalScene {
        stock_min: pt(stock_min),
        stock_max: pt(stock_max),
        passes,
        cl: pt(cl),
        radius,
    };
    oracle::analytical_engagement(&scene).map(|v| tuples(&v)).map_err(oracle_err)
}

/// Six-significant-digit number formatting used in the CSV outputs.
#[pyfunction]
fn fmt_g6(v: f64) -> String {
    io::fmt_g6(v)
}

/// Per-CL engagement result.
#[pyclass(frozen, name = "Record")]
struct PyRecord(CWERecord);

#[pymethods]
impl PyRecord {
    #[getter]
    fn cl_index(&self) -> usize {
        self.0.cl_index
    }

    #[getter]
    fn end(&self) -> (f64, f64, f64) {
        let e = self.0.end;
        (e.x, e.y, e.z)
    }

    #[getter]
    fn feed_angle(&self) -> f64 {
        self.0.feed_angle
    }

    #[getter]
    fn removed_volume(&self) -> f64 {
        self.0.removed_volume
    }

    #[getter]
    fn engagement_volume(&self) -> f64 {
        self.0.engagement_volume
    }

    #[getter]
    fn flank_contact_area(&self) -> f64 {
        self.0.flank_contact_area
    }

    #[getter]
    fn bottom_contact_area(&self) -> f64 {
        self.0.bottom_contact_area
    }

    #[getter]
    fn n_slices_engaged(&self) -> usize {
        self.0.n_slices_engaged
    }

    #[getter]
    fn min_entry(&self) -> f64 {
        self.0.min_entry
    }

    /// Largest exit, unwrapped (may exceed 360).
    #[getter]
    fn max_exit(&self) -> f64 {
        self.0.max_exit
    }

    #[getter]
    fn segment_time_ms(&self) -> f64 {
        self.0.segment_time_ms
    }

    /// `(z_mid, [(entry, exit), ...], chip_area)` per slice in the tool span.
    #[getter]
    fn slices(&self) -> Vec<(f64, Vec<(f64, f64)>, f64)> {
        self.0
            .slices
            .iter()
            .map(|s| (s.z_mid, tuples(&s.intervals), s.chip_area))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Record(cl_index={}, removed_volume={}, n_slices_engaged={})",
            self.0.cl_index, self.0.removed_volume, self.0.n_slices_engaged
        )
    }
}

/// Result of [`simulate`].
#[pyclass(frozen, name = "Simulation")]
struct PySimulation(SimulationOutput);

fn to_string(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> PyResult<String> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| PyOSError::new_err(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("writers emit ASCII"))
}

#[pymethods]
impl PySimulation {
    #[getter]
    fn records(&self) -> Vec<PyRecord> {
        self.0.records.iter().cloned().map(PyRecord).collect()
    }

    #[getter]
    fn initial_volume(&self) -> f64 {
        self.0.initial_volume
    }

    #[getter]
    fn final_volume(&self) -> f64 {
        self.0.final_stack.volume()
    }

    #[getter]
    fn perf<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = &self.0.perf;
        let d = PyDict::new(py);
        d.set_item("operation", &p.operation)?;
        d.set_item("n_cls_scheduled", p.n_cls_scheduled)?;
        d.set_item("n_cls_processed", p.n_cls_processed)?;
        d.set_item("total_time_s", p.total_time_s)?;
        d.set_item("avg_time_per_processed_cl_ms", p.avg_time_per_processed_cl_ms)?;
        d.set_item("median_time_per_processed_cl_ms", p.median_time_per_processed_cl_ms)?;
        Ok(d)
    }

    /// Material left in each slice as `(z_mid, Region)`.
    fn final_slices(&self) -> Vec<(f64, PyRegion)> {
        self.0
            .final_stack
            .slices()
            .iter()
            .map(|s| (s.z_mid, PyRegion(s.region.clone())))
            .collect()
    }

    #[pyo3(signature = (angles = "raw"))]
    fn cwe_csv(&self, angles: &str) -> PyResult<String> {
        let a = angle_output(angles)?;
        to_string(|b| io::write_cwe_csv(b, &self.0.records, a))
    }

    #[pyo3(signature = (feed_relative = false))]
    fn slices_csv(&self, feed_relative: bool) -> PyResult<String> {
        to_string(|b| io::write_slice_csv(b, &self.0.records, feed_relative))
    }

    fn perf_csv(&self) -> PyResult<String> {
        to_string(|b| io::write_perf_csv(b, &self.0.perf))
    }

    #[pyo3(signature = (out_dir, angles = "raw"))]
    fn write_outputs(&self, out_dir: PathBuf, angles: &str) -> PyResult<()> {
        pipeline::write_outputs(&out_dir, &self.0, angle_output(angles)?).map_err(core_err)
    }
}

/// Runs a toolpath given as a list of `(x, y, z)` cutter locations.
#[pyfunction]
#[pyo3(signature = (
    tool, stock, cls, operation = "op".to_string(), dz = 1.0,
    chord_tol = geom2d::DEFAULT_CHORD_TOL, mode = "exact", spacing = None,
    parallel = true, timing = true, svg_every = 0
))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    tool: &PyTool,
    stock: &PyStock,
    cls: Vec<(f64, f64, f64)>,
    operation: String,
    dz: f64,
    chord_tol: f64,
    mode: &str,
    spacing: Option<f64>,
    parallel: bool,
    timing: bool,
    svg_every: usize,
) -> PyResult<PySimulation> {
    let mode = match mode {
        "exact" => SweepMode::Exact,
        "sampled" => SweepMode::SampledUnion {
            spacing: spacing.unwrap_or_else(|| default_spacing(&tool.0)),
        },
        other => {
            return Err(ValidationError::new_err(format!(
                "mode must be 'exact' or 'sampled', got '{other}'"
            )))
        }
    };
    let cfg = SimulationConfig {
        dz,
        chord_tol,
        mode,
        parallel,
        timing,
        svg_every,
        ..Default::default()
    };
    let toolpath = Toolpath {
        operation,
        tool_id: tool.0.id.clone(),
        cls: cls.into_iter().map(|(x, y, z)| CutterLocation::new(x, y, z)).collect(),
    };
    let (t, s) = (&tool.0, &stock.0);
    py.detach(|| pipeline::run_simulation(&cfg, t, s, &toolpath))
        .map(PySimulation)
        .map_err(core_err)
}

/// Loads a toolpath file: `(operation, tool_id, [(x, y, z), ...])`.
#[pyfunction]
fn load_toolpath(path: PathBuf) -> PyResult<(String, String, Vec<(f64, f64, f64)>)> {
    let tp = io::load_toolpath(path).map_err(core_err)?;
    Ok((tp.operation, tp.tool_id, tp.cls.iter().map(|c| (c.x, c.y, c.z)).collect()))
}

/// Engine-versus-oracle cases; one dict per case.
#[pyfunction]
#[pyo3(signature = (chord_tol = validation::VALIDATION_CHORD_TOL))]
fn validate<'py>(py: Python<'py>, chord_tol: f64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let results = validation::run_all(chord_tol).map_err(|e| GeometryError::new_err(e.to_string()))?;
    results
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("case", &r.case.name)?;
            d.set_item("kind", r.case.kind.name())?;
            d.set_item("oracle", tuples(&r.oracle))?;
            d.set_item("engine", tuples(&r.engine))?;
            d.set_item("max_delta_deg", r.max_delta_deg)?;
            d.set_item("threshold_deg", r.case.threshold_deg)?;
            d.set_item("passed", r.passed())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn pycwe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ValidationError", m.py().get_type::<ValidationError>())?;
    m.add("GeometryError", m.py().get_type::<GeometryError>())?;
    m.add_class::<PyTool>()?;
    m.add_class::<PyStock>()?;
    m.add_class::<PyRegion>()?;
    m.add_class::<PyRecord>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(polygonize_circle, m)?)?;
    m.add_function(wrap_pyfunction!(polygonize_capsule, m)?)?;
    m.add_function(wrap_pyfunction!(engagement_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(analytical_engagement, m)?)?;
    m.add_function(wrap_pyfunction!(fmt_g6, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(load_toolpath, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
