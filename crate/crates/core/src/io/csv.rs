//! CSV outputs. Numbers use six significant digits (C `%g` style), `.` as
//! decimal separator and LF line endings.

use std::io::{self, Write};

use crate::engagement::{feed_relative, CWERecord};
use crate::pipeline::PerfRecord;

pub const CWE_HEADER: &str = "cl_index,x_mm,y_mm,z_mm,feed_angle_deg,removed_volume_mm3,engagement_volume_mm3,flank_contact_area_mm2,bottom_contact_area_mm2,n_slices_engaged,min_entry_deg,max_exit_deg,segment_time_ms";
pub const SLICES_HEADER: &str = "cl_index,z_mm,interval_index,entry_deg,exit_deg,chip_area_mm2";
pub const PERF_HEADER: &str = "operation,n_cls_scheduled,n_cls_processed,total_time_s,avg_time_per_processed_cl_ms";

/// Which angle reference the CSV files use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AngleOutput {
    /// Counter-clockwise from workpiece +X.
    #[default]
    Raw,
    /// Counter-clockwise from the feed direction.
    FeedRelative,
    /// Raw angles in the main files plus `slices_feed_relative.csv`.
    Both,
}

/// Formats `v` like C's `%g`: six significant digits, trailing zeros
/// removed, exponent form outside `1e-4 <= |v| < 1e6`.
pub fn fmt_g6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v.is_infinite() {
            if v > 0.0 { "inf" } else { "-inf" }.into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_cwe_csv<W: Write>(mut w: W, records: &[CWERecord], angles: AngleOutput) -> io::Result<()> {
    writeln!(w, "{CWE_HEADER}")?;
    for r in records {
        let (min_entry, max_exit) = match angles {
            AngleOutput::FeedRelative => r.feed_relative_bounds(),
            AngleOutput::Raw | AngleOutput::Both => (r.min_entry, r.max_exit),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.cl_index,
            fmt_g6(r.end.x),
            fmt_g6(r.end.y),
            fmt_g6(r.end.z),
            fmt_g6(r.feed_angle),
            fmt_g6(r.removed_volume),
            fmt_g6(r.engagement_volume),
            fmt_g6(r.flank_contact_area),
            fmt_g6(r.bottom_contact_area),
            r.n_slices_engaged,
            fmt_g6(min_entry),
            fmt_g6(max_exit),
            fmt_g6(r.segment_time_ms),
        )?;
    }
    Ok(())
}

/// One row per engaged interval. `exit_deg` is written as `entry + width`,
/// so it may exceed 360 for arcs that wrap past +X.
pub fn write_slice_csv<W: Write>(mut w: W, records: &[CWERecord], feed_rel: bool) -> io::Result<()> {
    writeln!(w, "{SLICES_HEADER}")?;
    for r in records {
        for s in &r.slices {
            let ivs = if feed_rel {
                feed_relative(&s.intervals, r.feed_angle)
            } else {
                s.intervals.clone()
            };
            for (k, iv) in ivs.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.cl_index,
                    fmt_g6(s.z_mid),
                    k,
                    fmt_g6(iv.entry),
                    fmt_g6(iv.exit_unwrapped()),
                    fmt_g6(s.chip_area),
                )?;
            }
        }
    }
    Ok(())
}

/// Header, one data row, then `#` comment lines with run metadata.
pub fn write_perf_csv<W: Write>(mut w: W, perf: &PerfRecord) -> io::Result<()> {
    writeln!(w, "{PERF_HEADER}")?;
    writeln!(
        w,
        "{},{},{},{},{}",
        csv_field(&perf.operation),
        perf.n_cls_scheduled,
        perf.n_cls_processed,
        fmt_g6(perf.total_time_s),
        fmt_g6(perf.avg_time_per_processed_cl_ms),
    )?;
    writeln!(w, "# timing_scope=engagement+ipw_update per segment; excludes file I/O")?;
    writeln!(w, "# median_time_per_processed_cl_ms={}", fmt_g6(perf.median_time_per_processed_cl_ms))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g6_matches_printf() {
        let cases = [
            (240.0, "240"),
            (15.707963, "15.708"),
            (200000.0, "200000"),
            (1234567.0, "1.23457e+06"),
            (999999.5, "1e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-36.869897, "-36.8699"),
            (0.1, "0.1"),
            (-0.0, "0"),
            (357.0796, "357.08"),
            (1e100, "1e+100"),
            (9.999995, "10"),
        ];
        for (v, want) in cases {
            assert_eq!(fmt_g6(v), want, "{v}");
        }
    }

    #[test]
    fn g6_round_trips_to_six_digits() {
        for &v in &[std::f64::consts::PI, 1.0 / 3.0, 123456.7, 9.87654e-3, 2.5e7] {
            let s = fmt_g6(v);
            let back: f64 = s.parse().unwrap();
            let canonical: f64 = format!("{v:.5e}").parse().unwrap();
            assert_eq!(back, canonical, "{v} -> {s}");
        }
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("Face1"), "Face1");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
