//! JSON text format for fans, maps, divisors and exponent sets.
//!
//! Rationals are written as `"p/q"` strings (or `"p"` when integral) and
//! read back from strings or JSON integers.
//!
//! ```text
//! fan      {"rank": 2, "rays": [[1,0],[0,1]], "cones": [[0,1]]}
//! map      {"matrix": [[1,0],[0,1]], "source": "x.json", "target": {...}}
//! divisor  {"coeffs": ["1", "-1/2"]}   or   "K"
//! ```
//!
//! Map sources and targets are fan objects or paths relative to the map file.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::divisor::InvariantDivisor;
use crate::error::{Error, Result};
use crate::exactlin::{IntVector, Rat};
use crate::fan::{Fan, FanMap};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanText {
    rank: usize,
    rays: Vec<IntVector>,
    cones: Vec<Vec<usize>>,
}

fn malformed(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Malformed(format!("{what}: {e}"))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| malformed(&format!("cannot read {}", path.display()), e))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| malformed("invalid JSON", e))
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn rat_to_json(x: &Rat) -> Value {
    Value::String(x.to_string())
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| malformed(&format!("bad rational {s:?}"), e))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => rat_from_str(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rat::from_integer(i.into()))
            .ok_or_else(|| Error::Malformed(format!("bad rational {n}"))),
        _ => Err(Error::Malformed(format!("bad rational {v}"))),
    }
}

pub fn fan_to_json(f: &Fan) -> Value {
    serde_json::to_value(FanText { rank: f.rank(), rays: f.rays().to_vec(), cones: f.cones().to_vec() })
        .expect("fans serialize")
}

pub fn fan_from_json(v: &Value) -> Result<Fan> {
    let t: FanText = serde_json::from_value(v.clone()).map_err(|e| malformed("bad fan", e))?;
    Fan::new(t.rank, t.rays, t.cones)
}

pub fn read_fan(path: &Path) -> Result<Fan> {
    fan_from_json(&parse_json(&read_text(path)?)?)
}

pub fn divisor_to_json(d: &InvariantDivisor) -> Value {
    json!({ "coeffs": d.coeffs.iter().map(rat_to_json).collect::<Vec<_>>() })
}

/// `"K"` is the canonical divisor of `fan`.
pub fn divisor_from_json(v: &Value, fan: &Fan) -> Result<InvariantDivisor> {
    let d = match v {
        Value::String(s) if s == "K" => InvariantDivisor::canonical(fan),
        Value::Object(o) => {
            if let Some(k) = o.keys().find(|k| *k != "coeffs") {
                return Err(Error::Malformed(format!("unknown divisor field {k:?}")));
            }
            let Some(Value::Array(cs)) = o.get("coeffs") else {
                return Err(Error::Malformed("divisor needs a coeffs list".into()));
            };
            InvariantDivisor::new(cs.iter().map(rat_from_json).collect::<Result<_>>()?)
        }
        _ => return Err(Error::Malformed(format!("bad divisor {v}"))),
    };
    d.check_len(fan)?;
    Ok(d)
}

/// A divisor given as `K`, a path to a divisor file, or a comma separated
/// coefficient list such as `1,-1/2,0`.
pub fn read_divisor(arg: &str, fan: &Fan) -> Result<InvariantDivisor> {
    if arg == "K" {
        return divisor_from_json(&Value::String("K".into()), fan);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return divisor_from_json(&parse_json(&read_text(path)?)?, fan);
    }
    let d = InvariantDivisor::new(arg.split(',').map(rat_from_str).collect::<Result<_>>()?);
    d.check_len(fan)?;
    Ok(d)
}

pub fn map_to_json(m: &FanMap) -> Value {
    json!({ "matrix": m.matrix, "source": fan_to_json(&m.source), "target": fan_to_json(&m.target) })
}

/// Paths inside the map are resolved against `dir`.
pub fn map_from_json(v: &Value, dir: &Path) -> Result<FanMap> {
    let Value::Object(o) = v else {
        return Err(Error::Malformed("map must be an object".into()));
    };
    if let Some(k) = o.keys().find(|k| !["matrix", "source", "target"].contains(&k.as_str())) {
        return Err(Error::Malformed(format!("unknown map field {k:?}")));
    }
    let side = |key: &str| -> Result<Fan> {
        match o.get(key) {
            Some(Value::String(p)) => read_fan(&dir.join(p)),
            Some(f @ Value::Object(_)) => fan_from_json(f),
            _ => Err(Error::Malformed(format!("map needs a {key} fan"))),
        }
    };
    let matrix: Vec<IntVector> = serde_json::from_value(o.get("matrix").cloned().unwrap_or(Value::Null))
        .map_err(|e| malformed("bad map matrix", e))?;
    FanMap::new(matrix, side("source")?, side("target")?)
}

pub fn read_map(path: &Path) -> Result<FanMap> {
    let dir = path.parent().unwrap_or(Path::new("."));
    map_from_json(&parse_json(&read_text(path)?)?, dir)
}

/// Exponent vectors from a JSON file holding a list of integer lists, or
/// inline as `2,0,0;0,2,0;0,0,2`.
pub fn read_exponents(arg: &str) -> Result<Vec<IntVector>> {
    let path = Path::new(arg);
    if path.is_file() {
        return serde_json::from_value(parse_json(&read_text(path)?)?).map_err(|e| malformed("bad exponent list", e));
    }
    arg.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| malformed(&format!("bad exponent {x:?}"), e)))
                .collect()
        })
        .collect()
}
