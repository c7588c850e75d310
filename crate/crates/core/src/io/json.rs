//! JSON input files: tool, stock and toolpath.
//!
//! ```json
//! {"id": "T1", "type": "flat_end_mill", "diameter_mm": 12.0, "flute_length_mm": 26.0}
//! {"type": "box", "min": [0, 0, 0], "max": [100, 100, 20]}
//! {"type": "extruded_polygon", "outers": [[[0, 0], [10, 0], [0, 10]]], "holes": [],
//!  "z_bottom_mm": 0, "z_top_mm": 5}
//! {"operation": "Face1", "tool_id": "T1", "cls": [[0, 0, 25], [10, 0, 19]]}
//! ```
//!
//! Unknown fields are rejected. Errors name the JSON path of the offending
//! value.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ValidationError};
use crate::geom2d::{Contour, Point2, Region2D};
use crate::ipw::StockDefinition;
use crate::sweep::{CutterLocation, ToolDefinition, ToolKind};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ToolKindJson {
    FlatEndMill,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToolJson {
    id: String,
    #[serde(rename = "type")]
    kind: ToolKindJson,
    diameter_mm: f64,
    flute_length_mm: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum StockJson {
    Box {
        min: [f64; 3],
        max: [f64; 3],
    },
    ExtrudedPolygon {
        outers: Vec<Vec<[f64; 2]>>,
        #[serde(default)]
        holes: Vec<Vec<[f64; 2]>>,
        z_bottom_mm: f64,
        z_top_mm: f64,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToolpathJson {
    operation: String,
    tool_id: String,
    cls: Vec<[f64; 3]>,
}

/// A named sequence of cutter locations for one tool.
#[derive(Clone, Debug, PartialEq)]
pub struct Toolpath {
    pub operation: String,
    pub tool_id: String,
    pub cls: Vec<CutterLocation>,
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, ValidationError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "$".to_string() } else { format!("$.{path}") };
        ValidationError::new(path, e.into_inner().to_string())
    })
}

fn finite(path: impl FnOnce() -> String, v: f64) -> Result<f64, ValidationError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ValidationError::new(path(), "non-finite number"))
    }
}

fn rooted(e: ValidationError) -> ValidationError {
    ValidationError::new(format!("$.{}", e.path), e.message)
}

pub fn parse_tool(text: &str) -> Result<ToolDefinition, ValidationError> {
    let j: ToolJson = parse(text)?;
    let ToolKindJson::FlatEndMill = j.kind;
    let d = finite(|| "$.diameter_mm".into(), j.diameter_mm)?;
    let f = finite(|| "$.flute_length_mm".into(), j.flute_length_mm)?;
    ToolDefinition::flat_end_mill(j.id, d, f).map_err(rooted)
}

fn contour(raw: &[[f64; 2]], path: &str) -> Result<Contour, ValidationError> {
    for (i, p) in raw.iter().enumerate() {
        for (k, v) in p.iter().enumerate() {
            finite(|| format!("{path}[{i}][{k}]"), *v)?;
        }
    }
    Contour::new(raw.iter().map(|p| Point2::new(p[0], p[1])).collect())
        .map_err(|e| ValidationError::new(path.to_string(), e.message))
}

pub fn parse_stock(text: &str) -> Result<StockDefinition, ValidationError> {
    let stock = match parse::<StockJson>(text)? {
        StockJson::Box { min, max } => {
            for (name, v) in [("min", min), ("max", max)] {
                for (k, x) in v.iter().enumerate() {
                    finite(|| format!("$.{name}[{k}]"), *x)?;
                }
            }
            StockDefinition::Box { min, max }
        }
        StockJson::ExtrudedPolygon {
            outers,
            holes,
            z_bottom_mm,
            z_top_mm,
        } => {
            let outers = outers
                .iter()
                .enumerate()
                .map(|(i, c)| contour(c, &format!("$.outers[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let holes = holes
                .iter()
                .enumerate()
                .map(|(i, c)| contour(c, &format!("$.holes[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let base = Region2D::new(outers, holes).map_err(rooted)?;
            StockDefinition::ExtrudedPolygon {
                base,
                z_bottom: finite(|| "$.z_bottom_mm".into(), z_bottom_mm)?,
                z_top: finite(|| "$.z_top_mm".into(), z_top_mm)?,
            }
        }
    };
    stock.validate().map_err(rooted)?;
    Ok(stock)
}

pub fn parse_toolpath(text: &str) -> Result<Toolpath, ValidationError> {
    let j: ToolpathJson = parse(text)?;
    let mut cls = Vec::with_capacity(j.cls.len());
    for (i, c) in j.cls.iter().enumerate() {
        for (k, v) in c.iter().enumerate() {
            finite(|| format!("$.cls[{i}][{k}]"), *v)?;
        }
        cls.push(CutterLocation::from(*c));
    }
    Ok(Toolpath {
        operation: j.operation,
        tool_id: j.tool_id,
        cls,
    })
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn in_file(path: &Path, e: ValidationError) -> Error {
    ValidationError::new(format!("{}: {}", path.display(), e.path), e.message).into()
}

pub fn load_tool(path: impl AsRef<Path>) -> Result<ToolDefinition, Error> {
    let path = path.as_ref();
    parse_tool(&read(path)?).map_err(|e| in_file(path, e))
}

pub fn load_stock(path: impl AsRef<Path>) -> Result<StockDefinition, Error> {
    let path = path.as_ref();
    parse_stock(&read(path)?).map_err(|e| in_file(path, e))
}

pub fn load_toolpath(path: impl AsRef<Path>) -> Result<Toolpath, Error> {
    let path = path.as_ref();
    parse_toolpath(&read(path)?).map_err(|e| in_file(path, e))
}

fn points(c: &Contour) -> Vec<[f64; 2]> {
    c.vertices().iter().map(|p| [p.x, p.y]).collect()
}

pub fn tool_to_json(tool: &ToolDefinition) -> String {
    let ToolKind::FlatEndMill = tool.kind;
    let j = ToolJson {
        id: tool.id.clone(),
        kind: ToolKindJson::FlatEndMill,
        diameter_mm: tool.diameter,
        flute_length_mm: tool.flute_length,
    };
    serde_json::to_string_pretty(&j).expect("plain data serializes")
}

pub fn stock_to_json(stock: &StockDefinition) -> String {
    let j = match stock {
        StockDefinition::Box { min, max } => StockJson::Box { min: *min, max: *max },
        StockDefinition::ExtrudedPolygon { base, z_bottom, z_top } => StockJson::ExtrudedPolygon {
            outers: base.outers().iter().map(points).collect(),
            holes: base.holes().iter().map(points).collect(),
            z_bottom_mm: *z_bottom,
            z_top_mm: *z_top,
        },
    };
    serde_json::to_string_pretty(&j).expect("plain data serializes")
}

pub fn toolpath_to_json(tp: &Toolpath) -> String {
    let j = ToolpathJson {
        operation: tp.operation.clone(),
        tool_id: tp.tool_id.clone(),
        cls: tp.cls.iter().map(|c| c.to_array()).collect(),
    };
    serde_json::to_string(&j).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tool_example() {
        let t = parse_tool(r#"{"id":"T1","type":"flat_end_mill","diameter_mm":12.0,"flute_length_mm":26.0}"#).unwrap();
        assert_eq!(t.radius(), 6.0);
        assert_eq!(t.id, "T1");
        assert_eq!(parse_tool(&tool_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn tool_errors_name_the_path() {
        let e = parse_tool(r#"{"id":"T1","type":"ball_end_mill","diameter_mm":12.0,"flute_length_mm":26.0}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.type");
        let e = parse_tool(r#"{"id":"T1","type":"flat_end_mill","diameter_mm":12.0}"#).unwrap_err();
        assert!(e.message.contains("flute_length_mm"), "{e}");
        let e = parse_tool(r#"{"id":"T1","type":"flat_end_mill","diameter_mm":12.0,"flute_length_mm":2,"x":1}"#)
            .unwrap_err();
        assert!(e.message.contains("unknown field"), "{e}");
        let e = parse_tool(r#"{"id":"T1","type":"flat_end_mill","diameter_mm":-1.0,"flute_length_mm":2}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.diameter_mm");
        let e = parse_tool(r#"{"id":"T1","type":"flat_end_mill","diameter_mm":"a","flute_length_mm":2}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.diameter_mm");
    }

    #[test]
    fn box_stock_example() {
        let s = parse_stock(r#"{"type":"box","min":[0,0,0],"max":[100,100,20]}"#).unwrap();
        assert_eq!(s.height(), 20.0);
        assert_eq!(parse_stock(&stock_to_json(&s)).unwrap(), s);
        let e = parse_stock(r#"{"type":"box","min":[0,0,0],"max":[100,100,-20]}"#).unwrap_err();
        assert_eq!(e.path, "$.max[2]");
    }

    #[test]
    fn extruded_stock_round_trip() {
        let text = r#"{"type":"extruded_polygon","outers":[[[0,0],[30,0],[30,10],[10,10],[10,30],[0,30]]],
            "holes":[[[2,2],[2,4],[4,4],[4,2]]],"z_bottom_mm":-5,"z_top_mm":5}"#;
        let s = parse_stock(text).unwrap();
        match &s {
            StockDefinition::ExtrudedPolygon { base, .. } => assert_eq!(base.area(), 496.0),
            _ => panic!("wrong kind"),
        }
        assert_eq!(parse_stock(&stock_to_json(&s)).unwrap(), s);
        let e = parse_stock(r#"{"type":"extruded_polygon","outers":[[[0,0],[1,0]]],"z_bottom_mm":0,"z_top_mm":1}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.outers[0]");
    }

    #[test]
    fn toolpath_with_single_cl() {
        let tp = parse_toolpath(r#"{"operation":"Face1","tool_id":"T1","cls":[[1,2,3]]}"#).unwrap();
        assert_eq!(tp.cls.len(), 1);
        assert_eq!(parse_toolpath(&toolpath_to_json(&tp)).unwrap(), tp);
        let e = parse_toolpath(r#"{"operation":"F","tool_id":"T1","cls":[[1,2,3],[1,2]]}"#).unwrap_err();
        assert_eq!(e.path, "$.cls[1]");
    }
}
