//! Synthetic jobs for benchmarks and conservation checks.

use crate::io::Toolpath;
use crate::ipw::StockDefinition;
use crate::sweep::{CutterLocation, ToolDefinition};

/// Tool, stock and toolpath of one generated job.
#[derive(Clone, Debug)]
pub struct Job {
    pub tool: ToolDefinition,
    pub stock: StockDefinition,
    pub toolpath: Toolpath,
}

fn box_100() -> StockDefinition {
    StockDefinition::Box {
        min: [0.0, 0.0, 0.0],
        max: [100.0, 100.0, 20.0],
    }
}

const SAFE_Z: f64 = 25.0;

/// Zigzag facing pass, 1 mm deep, with a 20 mm tool over a 100x100x20 box.
///
/// Ten rows 10 mm apart. Each row ramps down from the safe height outside
/// the stock, crosses in uniform steps and runs out past the far edge (the
/// last row stops stepping 9.5 mm from the edge). The
/// nine row changes happen entirely outside the stock, so the job has 361
/// segments of which 352 touch material.
pub fn face_path() -> Job {
    let tool = ToolDefinition::flat_end_mill("T20", 20.0, 30.0).expect("valid tool");
    let z = 19.0;
    let mut cls = Vec::new();
    for row in 0..10 {
        let y = 5.0 + 10.0 * row as f64;
        let forward = row % 2 == 0;
        let (outside, inside, mut far_in, far_out) = if forward {
            (-11.0, 1.0, 99.0, 111.0)
        } else {
            (111.0, 99.0, 1.0, -11.0)
        };
        if row == 9 {
            // Against the top edge the disk clears the last 8.66 mm early;
            // stop stepping there so every step still removes material.
            far_in = 9.5;
        }
        if row == 0 {
            cls.push(CutterLocation::new(outside, y, SAFE_Z));
        }
        cls.push(CutterLocation::new(inside, y, z));
        let steps = if row < 2 { 34 } else { 33 };
        for k in 1..=steps {
            let x = inside + (far_in - inside) * k as f64 / steps as f64;
            cls.push(CutterLocation::new(x, y, z));
        }
        cls.push(CutterLocation::new(far_out, y, z));
        if row < 9 {
            cls.push(CutterLocation::new(far_out, y + 10.0, SAFE_Z));
        }
    }
    Job {
        tool,
        stock: box_100(),
        toolpath: Toolpath {
            operation: "Face1".into(),
            tool_id: "T20".into(),
            cls,
        },
    }
}

/// Trochoidal roughing with a 10 mm tool over a 100x100x20 box, truncated
/// to exactly `n_segments` segments.
///
/// Rows 5 mm apart; along each row the tool circles with a 3 mm loop radius
/// (30 degrees per CL) while advancing 0.6 mm per CL. Depth steps down 4 mm
/// per level from z = 16 and stays at z = 0 once reached. Row changes lift
/// to the safe height and ramp back down outside the stock.
pub fn adaptive_path(n_segments: usize) -> Job {
    let tool = ToolDefinition::flat_end_mill("T10", 10.0, 30.0).expect("valid tool");
    let loop_r = 3.0;
    let advance: f64 = 0.6;
    let (x_lo, x_hi): (f64, f64) = (-8.0, 108.0);
    let per_row = ((x_hi - x_lo) / advance).round() as usize;
    let mut cls = vec![CutterLocation::new(x_lo, 5.0, SAFE_Z)];
    let mut level = 0usize;
    'outer: loop {
        let z = (16.0 - 4.0 * level as f64).max(0.0);
        for row in 0..19 {
            let y = 5.0 + 5.0 * row as f64;
            let forward = row % 2 == 0;
            let (x0, dir) = if forward { (x_lo, 1.0) } else { (x_hi, -1.0) };
            cls.push(CutterLocation::new(x0 + dir * loop_r, y, z));
            for k in 1..=per_row {
                let theta = (30.0 * k as f64).to_radians();
                let cx = x0 + dir * advance * k as f64;
                cls.push(CutterLocation::new(
                    cx + dir * loop_r * theta.cos(),
                    y + loop_r * theta.sin(),
                    z,
                ));
                if cls.len() > n_segments {
                    break 'outer;
                }
            }
            let last = *cls.last().expect("non-empty");
            cls.push(CutterLocation::new(last.x, last.y, SAFE_Z));
            let (nx, ny) = if row < 18 {
                (x0 + dir * advance * per_row as f64, y + 5.0)
            } else {
                (x_lo, 5.0)
            };
            cls.push(CutterLocation::new(nx, ny, SAFE_Z));
            if cls.len() > n_segments {
                break 'outer;
            }
        }
        level += 1;
    }
    cls.truncate(n_segments + 1);
    Job {
        tool,
        stock: box_100(),
        toolpath: Toolpath {
            operation: "Adaptive1".into(),
            tool_id: "T10".into(),
            cls,
        },
    }
}
