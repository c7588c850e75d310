//! File formats: JSON inputs, CSV and SVG outputs, IPW snapshots.

pub mod csv;
pub mod json;
pub mod snapshot;
pub mod svg;

pub use self::csv::{fmt_g6, write_cwe_csv, write_perf_csv, write_slice_csv, AngleOutput};
pub use self::json::{
    load_stock, load_tool, load_toolpath, parse_stock, parse_tool, parse_toolpath, stock_to_json,
    tool_to_json, toolpath_to_json, Toolpath,
};
pub use self::snapshot::{load_snapshot, read_snapshot, save_snapshot, write_snapshot};
pub use self::svg::emit_svg_topview;
