//! JSON input and output of cones and polyhedral divisors.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::convex::{Cone, TailedPolyhedron};
use crate::error::{Error, Result};
use crate::exact::RatVec;
use crate::pdivisor::{BasePoint, PolyhedralDivisor};
use crate::stability::FanoCone;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeIn {
    rank: usize,
    rays: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyhedronIn {
    vertices: Vec<RatVec>,
    tail: Option<ConeIn>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SupportIn {
    label: String,
    coordinate: Option<Value>,
    coefficient: PolyhedronIn,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum InputIn {
    Toric { rank: usize, rays: Vec<Vec<i64>> },
    Pdivisor { rank: usize, tail: ConeIn, support: Vec<SupportIn> },
}

fn cone(c: ConeIn) -> Result<Cone> {
    if let Some(r) = c.rays.iter().find(|r| r.len() != c.rank) {
        return Err(Error::DimensionMismatch { expected: c.rank, found: r.len() });
    }
    Cone::new(c.rank, &c.rays)
}

fn coordinate(v: Option<Value>) -> Result<Option<String>> {
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(Value::Number(n)) => Ok(Some(n.to_string())),
        Some(other) => Err(Error::Parse(format!("coordinate must be a string or number, got {other}"))),
    }
}

/// Parses `{"type": "toric", ...}` or `{"type": "pdivisor", ...}`.
pub fn parse_input(text: &str) -> Result<FanoCone> {
    let input: InputIn = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match input {
        InputIn::Toric { rank, rays } => Ok(FanoCone::Toric(cone(ConeIn { rank, rays })?)),
        InputIn::Pdivisor { rank, tail, support } => {
            if rank != 2 {
                return Err(Error::InvalidDivisor(format!("only rank 2 is supported, got {rank}")));
            }
            let tail = cone(tail)?;
            let mut entries = Vec::new();
            for s in support {
                let t = match s.coefficient.tail {
                    Some(c) => cone(c)?,
                    None => tail.clone(),
                };
                let point = BasePoint { label: s.label, coordinate: coordinate(s.coordinate)? };
                entries.push((point, TailedPolyhedron::new(s.coefficient.vertices, t)?));
            }
            Ok(FanoCone::Divisor(PolyhedralDivisor::new(tail, entries)?))
        }
    }
}

pub fn divisor_to_json(d: &PolyhedralDivisor) -> Value {
    let support: Vec<Value> = d
        .support()
        .iter()
        .map(|(p, c)| {
            let mut entry = json!({ "label": p.label, "coefficient": c });
            if let Some(coord) = &p.coordinate {
                entry["coordinate"] = json!(coord);
            }
            entry
        })
        .collect();
    json!({ "type": "pdivisor", "rank": d.rank(), "tail": d.tail(), "support": support })
}

pub fn to_json(f: &FanoCone) -> Value {
    match f {
        FanoCone::Toric(c) => json!({ "type": "toric", "rank": c.rank(), "rays": c.rays() }),
        FanoCone::Divisor(d) => divisor_to_json(d),
    }
}
