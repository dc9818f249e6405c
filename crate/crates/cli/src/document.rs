//! File format for point sets and the structure of command results.
//!
//! Point sets are JSON documents with fields `dim`, `points` and optional
//! `meta`. Coordinates are exact: strings holding integers, fractions
//! (`"p/q"`) or finite decimals, or plain JSON integers. JSON floats are
//! rejected so that no coordinate ever passes through machine precision;
//! quote decimals instead. Serialization always emits canonical strings,
//! and parsing a serialized document reproduces it bit for bit.

use serde_json::{json, Map, Value};
use tukey_core::{format_rational, parse_rational, Error, Point, PointSet, Rational, Result};

#[derive(Debug, Clone)]
pub struct PointSetDocument {
    pub set: PointSet,
    pub meta: Option<Value>,
}

fn coordinate_from_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                Err(Error::Input(format!(
                    "coordinate {n} is not an exact integer; quote decimals as strings"
                )))
            }
        }
        other => Err(Error::Input(format!("coordinate must be a string or integer, got {other}"))),
    }
}

impl PointSetDocument {
    pub fn new(set: PointSet, meta: Option<Value>) -> Self {
        PointSetDocument { set, meta }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Input("document must be a JSON object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Input("missing or invalid \"dim\" field".into()))?;
        if dim == 0 {
            return Err(Error::Input("\"dim\" must be at least 1".into()));
        }
        let raw_points = obj
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Input("missing or invalid \"points\" field".into()))?;
        let mut points = Vec::with_capacity(raw_points.len());
        for (i, row) in raw_points.iter().enumerate() {
            let coords = row
                .as_array()
                .ok_or_else(|| Error::Input(format!("point {i} must be an array")))?;
            if coords.len() != dim as usize {
                return Err(Error::Input(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    coords.len()
                )));
            }
            let parsed: Result<Vec<Rational>> = coords.iter().map(coordinate_from_value).collect();
            points.push(Point::new(parsed?));
        }
        let set = PointSet::new(dim as usize, points)?;
        let meta = obj.get("meta").cloned();
        Ok(PointSetDocument { set, meta })
    }

    pub fn to_value(&self) -> Value {
        let points: Vec<Value> = self
            .set
            .points()
            .iter()
            .map(|p| {
                Value::Array(
                    p.coords()
                        .iter()
                        .map(|c| Value::String(format_rational(c)))
                        .collect(),
                )
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("dim".into(), json!(self.set.dim()));
        obj.insert("points".into(), Value::Array(points));
        if let Some(meta) = &self.meta {
            obj.insert("meta".into(), meta.clone());
        }
        Value::Object(obj)
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("document serializes")
    }
}

/// Machine-readable result of one command invocation. Counts are decimal
/// strings, rationals are exact strings, and nothing time-dependent is
/// included, so outputs are byte-identical across runs.
pub fn result_document(command: &str, inputs: Value, outputs: Value, status: &str) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "status": status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_serialize_roundtrip_is_exact() {
        let text = r#"{
            "dim": 2,
            "points": [["1/2", "-3"], [4, "0.25"], ["-7/3", 9]],
            "meta": {"seed": 11}
        }"#;
        let doc = PointSetDocument::parse(text).unwrap();
        let once = doc.serialize();
        let doc2 = PointSetDocument::parse(&once).unwrap();
        assert_eq!(once, doc2.serialize());
        assert_eq!(doc.set, doc2.set);
        assert_eq!(doc.meta, doc2.meta);
    }

    #[test]
    fn rejects_floats_and_bad_shapes() {
        assert!(PointSetDocument::parse(r#"{"dim": 2, "points": [[0.5, 1]]}"#).is_err());
        assert!(PointSetDocument::parse(r#"{"dim": 2, "points": [["1/0", "1"]]}"#).is_err());
        assert!(PointSetDocument::parse(r#"{"dim": 2, "points": [["1"]]}"#).is_err());
        assert!(PointSetDocument::parse(r#"{"dim": 0, "points": []}"#).is_err());
        assert!(PointSetDocument::parse("[]").is_err());
    }
}
