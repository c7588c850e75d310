use cwe_core::engagement::AngularInterval;
use cwe_core::io::{
    fmt_g6, parse_stock, parse_tool, parse_toolpath, stock_to_json, tool_to_json, toolpath_to_json, write_cwe_csv,
    write_perf_csv, write_slice_csv, AngleOutput, Toolpath,
};
use cwe_core::ipw::StockDefinition;
use cwe_core::pipeline::synthetic::{adaptive_path, face_path};
use cwe_core::pipeline::{run_simulation, SimulationConfig};
use cwe_core::sweep::{CutterLocation, ToolDefinition};

fn csv<F: FnOnce(&mut Vec<u8>)>(f: F) -> String {
    let mut buf = Vec::new();
    f(&mut buf);
    String::from_utf8(buf).unwrap()
}

#[test]
fn face_job_reports_352_of_361() {
    let job = face_path();
    for dz in [1.0, 0.2] {
        let cfg = SimulationConfig {
            dz,
            timing: false,
            ..Default::default()
        };
        let out = run_simulation(&cfg, &job.tool, &job.stock, &job.toolpath).unwrap();
        let perf = csv(|b| write_perf_csv(b, &out.perf).unwrap());
        assert_eq!(perf.lines().nth(1).unwrap(), "Face1,361,352,0,0");
        // A 1 mm facing pass over the full top removes the whole top layer.
        let removed: f64 = out.records.iter().map(|r| r.removed_volume).sum();
        assert!((removed - 10_000.0).abs() < 1e-6 * 10_000.0, "{removed}");
    }
}

#[test]
fn steady_slot_rows_have_240_degree_width() {
    let tool = ToolDefinition::flat_end_mill("T1", 10.0, 30.0).unwrap();
    let stock = StockDefinition::Box {
        min: [0.0, 0.0, 0.0],
        max: [60.0, 40.0, 10.0],
    };
    let cls = (0..=12).map(|k| CutterLocation::new(-10.0 + 5.0 * k as f64, 20.0, 8.0)).collect();
    let tp = Toolpath {
        operation: "Slot".into(),
        tool_id: "T1".into(),
        cls,
    };
    let cfg = SimulationConfig {
        chord_tol: 1e-4,
        timing: false,
        ..Default::default()
    };
    let out = run_simulation(&cfg, &tool, &stock, &tp).unwrap();
    let text = csv(|b| write_slice_csv(b, &out.records, false).unwrap());
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .filter(|r: &Vec<f64>| r[0] == 8.0)
        .collect();
    assert_eq!(rows.len(), 2, "{text}");
    for r in rows {
        assert!((r[4] - r[3] - 240.0).abs() < 0.01, "{r:?}");
    }
}

#[test]
fn zero_engagement_record_is_a_row_of_zeros() {
    let tool = ToolDefinition::flat_end_mill("T1", 10.0, 30.0).unwrap();
    let stock = StockDefinition::Box {
        min: [0.0, 0.0, 0.0],
        max: [10.0, 10.0, 5.0],
    };
    let tp = Toolpath {
        operation: "Air".into(),
        tool_id: "T1".into(),
        cls: vec![CutterLocation::new(50.0, 50.0, 10.0), CutterLocation::new(60.0, 50.0, 10.0)],
    };
    let cfg = SimulationConfig {
        timing: false,
        ..Default::default()
    };
    let out = run_simulation(&cfg, &tool, &stock, &tp).unwrap();
    let text = csv(|b| write_cwe_csv(b, &out.records, AngleOutput::Raw).unwrap());
    assert_eq!(text.lines().nth(1).unwrap(), "1,60,50,10,0,0,0,0,0,0,0,0,0");
    let slices = csv(|b| write_slice_csv(b, &out.records, false).unwrap());
    assert_eq!(slices.lines().count(), 1);
}

#[test]
fn conservation_and_timing_sanity() {
    let job = adaptive_path(150);
    let out = run_simulation(&SimulationConfig::default(), &job.tool, &job.stock, &job.toolpath).unwrap();
    let lost = out.initial_volume - out.final_stack.volume();
    let summed: f64 = out.records.iter().map(|r| r.removed_volume).sum();
    assert!(lost > 0.0);
    assert!((summed - lost).abs() <= 1e-3 * out.initial_volume);

    let p = &out.perf;
    assert!(p.n_cls_processed <= p.n_cls_scheduled);
    let seg_sum: f64 = out.records.iter().map(|r| r.segment_time_ms).sum();
    assert!(p.total_time_s * 1e3 >= seg_sum);
    assert!(p.avg_time_per_processed_cl_ms > 0.0);
}

#[test]
fn csv_numbers_parse_back_to_six_digits() {
    let job = adaptive_path(60);
    let out = run_simulation(&SimulationConfig::default(), &job.tool, &job.stock, &job.toolpath).unwrap();
    let text = csv(|b| write_cwe_csv(b, &out.records, AngleOutput::Raw).unwrap());
    for (line, r) in text.lines().skip(1).zip(&out.records) {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let exact = [r.end.x, r.end.y, r.end.z, r.feed_angle, r.removed_volume, r.engagement_volume];
        for (parsed, v) in fields[1..7].iter().zip(exact) {
            let six: f64 = format!("{v:.5e}").parse().unwrap();
            assert_eq!(*parsed, six, "{line}");
        }
    }
}

#[test]
fn feed_relative_outputs_shift_by_feed_angle() {
    let tool = ToolDefinition::flat_end_mill("T1", 10.0, 30.0).unwrap();
    let stock = StockDefinition::Box {
        min: [0.0, 0.0, 0.0],
        max: [100.0, 100.0, 10.0],
    };
    // Moving +Y along the left edge with half the tool in material.
    let tp = Toolpath {
        operation: "Edge".into(),
        tool_id: "T1".into(),
        cls: vec![CutterLocation::new(0.0, 20.0, 8.0), CutterLocation::new(0.0, 30.0, 8.0)],
    };
    let cfg = SimulationConfig {
        timing: false,
        ..Default::default()
    };
    let out = run_simulation(&cfg, &tool, &stock, &tp).unwrap();
    let rec = &out.records[0];
    assert_eq!(rec.feed_angle, 90.0);
    assert_eq!(rec.slices[0].intervals, vec![AngularInterval::new(270.0, 90.0)]);
    let raw = csv(|b| write_cwe_csv(b, &out.records, AngleOutput::Raw).unwrap());
    let rel = csv(|b| write_cwe_csv(b, &out.records, AngleOutput::FeedRelative).unwrap());
    let last = |t: &str| t.lines().nth(1).unwrap().split(',').map(str::to_string).collect::<Vec<_>>();
    assert_eq!(&last(&raw)[10..12], &["270", "450"]);
    assert_eq!(&last(&rel)[10..12], &["180", "360"]);
    assert_eq!(fmt_g6(rec.max_exit), "450");
}

#[test]
fn json_round_trips() {
    let job = adaptive_path(20);
    assert_eq!(parse_tool(&tool_to_json(&job.tool)).unwrap(), job.tool);
    assert_eq!(parse_stock(&stock_to_json(&job.stock)).unwrap(), job.stock);
    assert_eq!(parse_toolpath(&toolpath_to_json(&job.toolpath)).unwrap(), job.toolpath);
}
