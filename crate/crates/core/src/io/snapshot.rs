//! Plain-text IPW snapshot.
//!
//! ```text
//! # cwe ipw snapshot
//! # dz=1
//! 0.5,0,0,100,0,100,100,0,100
//! 1.5
//! ```
//!
//! Each data line is one closed contour: the slice midline z, then x,y
//! pairs. Counter-clockwise contours are material, clockwise ones holes. A
//! line with only z marks an empty slice. Numbers use the shortest form that
//! parses back to the same `f64`.

use std::io::{self, BufRead, Write};
use std::path::Path;

use crate::error::{Error, ValidationError};
use crate::geom2d::{Contour, Point2, Region2D};
use crate::ipw::{Slice, SliceStack};

pub fn write_snapshot<W: Write>(mut w: W, stack: &SliceStack) -> io::Result<()> {
    writeln!(w, "# cwe ipw snapshot")?;
    writeln!(w, "# dz={}", stack.dz())?;
    for s in stack.slices() {
        if s.region.is_empty() {
            writeln!(w, "{}", s.z_mid)?;
            continue;
        }
        for (c, _) in s.region.contours() {
            write!(w, "{}", s.z_mid)?;
            for p in c.vertices() {
                write!(w, ",{},{}", p.x, p.y)?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn save_snapshot(path: impl AsRef<Path>, stack: &SliceStack) -> Result<(), Error> {
    let path = path.as_ref();
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = io::BufWriter::new(f);
    write_snapshot(&mut w, stack)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

struct Pending {
    z: f64,
    outers: Vec<Contour>,
    holes: Vec<Contour>,
}

pub fn read_snapshot<R: BufRead>(r: R) -> Result<SliceStack, ValidationError> {
    let mut dz = None;
    let mut slices: Vec<Pending> = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line_no = n + 1;
        let at = || format!("line {line_no}");
        let line = line.map_err(|e| ValidationError::new(at(), e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("dz=") {
                dz = Some(
                    v.parse::<f64>()
                        .map_err(|e| ValidationError::new(at(), format!("bad dz: {e}")))?,
                );
            }
            continue;
        }
        let nums = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ValidationError::new(at(), e.to_string()))?;
        if nums.len() % 2 == 0 {
            return Err(ValidationError::new(at(), "expected z followed by x,y pairs"));
        }
        let z = nums[0];
        if slices.last().map_or(true, |p| p.z != z) {
            if slices.iter().any(|p| p.z == z) {
                return Err(ValidationError::new(at(), format!("slice z={z} is not contiguous")));
            }
            slices.push(Pending {
                z,
                outers: Vec::new(),
                holes: Vec::new(),
            });
        }
        if nums.len() == 1 {
            continue;
        }
        let pts = nums[1..].chunks(2).map(|c| Point2::new(c[0], c[1])).collect();
        let c = Contour::new(pts).map_err(|e| ValidationError::new(at(), e.message))?;
        let pending = slices.last_mut().expect("pushed above");
        if c.signed_area() > 0.0 {
            pending.outers.push(c);
        } else {
            pending.holes.push(c);
        }
    }
    let dz = dz.ok_or_else(|| ValidationError::new("header", "missing '# dz=' line"))?;
    let slices = slices
        .into_iter()
        .map(|p| {
            let region = Region2D::new(p.outers, p.holes)
                .map_err(|e| ValidationError::new(format!("slice z={}", p.z), e.to_string()))?;
            Ok(Slice { z_mid: p.z, region })
        })
        .collect::<Result<Vec<_>, ValidationError>>()?;
    SliceStack::from_slices(dz, slices)
}

pub fn load_snapshot(path: impl AsRef<Path>) -> Result<SliceStack, Error> {
    let path = path.as_ref();
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_snapshot(io::BufReader::new(f))
        .map_err(|e| ValidationError::new(format!("{}: {}", path.display(), e.path), e.message).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipw::{StockDefinition, SubtractOptions};
    use crate::sweep::{CLSegment, CutterLocation, ToolDefinition};

    #[test]
    fn round_trip_with_holes_and_empty_slices() {
        let stock = StockDefinition::Box {
            min: [0.0, 0.0, 0.0],
            max: [20.0, 20.0, 4.0],
        };
        let mut stack = SliceStack::init_from_stock(&stock, 1.0).unwrap();
        let tool = ToolDefinition::flat_end_mill("T", 4.0, 10.0).unwrap();
        // Pocket through the middle leaves a hole in every slice.
        let seg = CLSegment::new(
            0,
            CutterLocation::new(8.0, 10.0, -1.0),
            CutterLocation::new(12.0, 10.0, -1.0),
            &tool,
        )
        .unwrap();
        stack.subtract_segment(&seg, &SubtractOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &stack).unwrap();
        let back = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(back, stack);
        assert!(back.slices()[0].region.holes().len() == 1);

        let empty = SliceStack::from_slices(
            1.0,
            vec![
                Slice { z_mid: 0.5, region: Region2D::empty() },
                Slice {
                    z_mid: 1.5,
                    region: Region2D::rect(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)),
                },
            ],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &empty).unwrap();
        assert_eq!(read_snapshot(buf.as_slice()).unwrap(), empty);
    }

    #[test]
    fn rejects_malformed_lines() {
        let e = read_snapshot("# dz=1\n0.5,1,2\n".as_bytes()).unwrap_err();
        assert_eq!(e.path, "line 2");
        assert!(read_snapshot("0.5\n".as_bytes()).is_err());
    }
}
