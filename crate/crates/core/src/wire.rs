//! JSON encodings shared by the CLI and the audit reports.
//!
//! Every object carries its field as a spec string under `"field"`, so a
//! reader can resolve the field first and then decode elements against it.

use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::code::LinearCode;
use crate::field::{Field, FieldDescriptor, FieldError};
use crate::level::{LevelError, LevelStructure, Points, ProjPoint, RawLevelStructure};
use crate::linalg::Matrix;
use crate::pluecker::PlueckerVector;

/// Bumped whenever an encoding below changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("missing or malformed key `{0}`")]
    Key(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error("shape error: {0}")]
    Shape(String),
}

pub fn parse(text: &str) -> Result<Value, WireError> {
    serde_json::from_str(text).map_err(|e| WireError::Json(e.to_string()))
}

/// Reads the `"field"` key.
pub fn field_of(v: &Value) -> Result<FieldDescriptor, WireError> {
    let spec = v.get("field").and_then(Value::as_str).ok_or(WireError::Key("field"))?;
    Ok(FieldDescriptor::parse(spec)?)
}

fn get<'a>(v: &'a Value, key: &'static str) -> Result<&'a Value, WireError> {
    v.get(key).ok_or(WireError::Key(key))
}

fn get_usize(v: &Value, key: &'static str) -> Result<usize, WireError> {
    get(v, key)?
        .as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or(WireError::Key(key))
}

fn get_i64(v: &Value, key: &'static str) -> Result<i64, WireError> {
    get(v, key)?.as_i64().ok_or(WireError::Key(key))
}

fn elems_from<F: Field>(f: &F, v: &Value, key: &'static str) -> Result<Vec<F::Elem>, WireError> {
    get(v, key)?
        .as_array()
        .ok_or(WireError::Key(key))?
        .iter()
        .map(|x| f.elem_from_json(x).map_err(WireError::from))
        .collect()
}

pub fn elems_to_json<F: Field>(f: &F, xs: &[F::Elem]) -> Value {
    Value::Array(xs.iter().map(|x| f.elem_to_json(x)).collect())
}

pub fn matrix_to_json<F: Field>(m: &Matrix<F>) -> Value {
    let f = m.field();
    json!({
        "field": f.spec(),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.row_vecs().map(|r| elems_to_json(f, r)).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json<F: Field>(f: &F, v: &Value) -> Result<Matrix<F>, WireError> {
    let rows = get_usize(v, "rows")?;
    let cols = get_usize(v, "cols")?;
    let entries = get(v, "entries")?.as_array().ok_or(WireError::Key("entries"))?;
    if entries.len() != rows {
        return Err(WireError::Shape(format!("{} rows listed, {rows} declared", entries.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in entries {
        let row = row.as_array().ok_or(WireError::Key("entries"))?;
        if row.len() != cols {
            return Err(WireError::Shape(format!("row of length {}, {cols} declared", row.len())));
        }
        for x in row {
            data.push(f.elem_from_json(x)?);
        }
    }
    Matrix::new(f.clone(), rows, cols, data).map_err(|e| WireError::Shape(e.to_string()))
}

pub fn code_to_json<F: Field>(c: &LinearCode<F>) -> Value {
    json!({
        "field": c.field().spec(),
        "n": c.n(),
        "k": c.k(),
        "generator": matrix_to_json(c.generator()),
    })
}

/// Accepts any generator; the result is re-canonicalized.
pub fn code_from_json<F: Field>(f: &F, v: &Value) -> Result<LinearCode<F>, WireError> {
    let m = matrix_from_json(f, get(v, "generator")?)?;
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n as usize != m.cols() {
            return Err(WireError::Shape(format!("n = {n} but generator has {} columns", m.cols())));
        }
    }
    Ok(LinearCode::from_generator(m))
}

pub fn level_to_json<F: Field>(g: &LevelStructure<F>) -> Value {
    let f = g.field();
    json!({
        "field": f.spec(),
        "n": g.n(),
        "d": g.d(),
        "alphas": elems_to_json(f, g.alphas()),
        "scalars": elems_to_json(f, g.scalars()),
    })
}

pub fn level_from_json<F: Field>(f: &F, v: &Value) -> Result<LevelStructure<F>, WireError> {
    let n = get_usize(v, "n")?;
    let d = get_i64(v, "d")?;
    let alphas = elems_from(f, v, "alphas")?;
    let scalars = elems_from(f, v, "scalars")?;
    let points = Arc::new(Points::new(f.clone(), n, alphas)?);
    Ok(LevelStructure::on(&points, d, scalars)?)
}

pub fn point_to_json<F: Field>(f: &F, p: &ProjPoint<F::Elem>) -> Value {
    match p {
        ProjPoint::Infinity => Value::from("inf"),
        ProjPoint::Finite(a) => f.elem_to_json(a),
    }
}

pub fn point_from_json<F: Field>(f: &F, v: &Value) -> Result<ProjPoint<F::Elem>, WireError> {
    if v.as_str() == Some("inf") {
        return Ok(ProjPoint::Infinity);
    }
    Ok(ProjPoint::Finite(f.elem_from_json(v)?))
}

pub fn raw_to_json<F: Field>(raw: &RawLevelStructure<F>) -> Value {
    let f = raw.field();
    json!({
        "field": f.spec(),
        "points": raw.points().iter().map(|p| point_to_json(f, p)).collect::<Vec<_>>(),
        "divisor": raw
            .divisor()
            .iter()
            .map(|(p, m)| json!([point_to_json(f, p), m]))
            .collect::<Vec<_>>(),
        "scalars": elems_to_json(f, raw.scalars()),
    })
}

pub fn raw_from_json<F: Field>(f: &F, v: &Value) -> Result<RawLevelStructure<F>, WireError> {
    let points = get(v, "points")?
        .as_array()
        .ok_or(WireError::Key("points"))?
        .iter()
        .map(|p| point_from_json(f, p))
        .collect::<Result<Vec<_>, _>>()?;
    let divisor = get(v, "divisor")?
        .as_array()
        .ok_or(WireError::Key("divisor"))?
        .iter()
        .map(|entry| {
            let pair = entry.as_array().filter(|a| a.len() == 2).ok_or(WireError::Key("divisor"))?;
            let m = pair[1].as_i64().ok_or(WireError::Key("divisor"))?;
            Ok((point_from_json(f, &pair[0])?, m))
        })
        .collect::<Result<Vec<_>, WireError>>()?;
    let scalars = elems_from(f, v, "scalars")?;
    Ok(RawLevelStructure::new(f.clone(), points, divisor, scalars)?)
}

pub fn pluecker_to_json<F: Field>(p: &PlueckerVector<F>) -> Value {
    let f = p.field();
    json!({
        "field": f.spec(),
        "n": p.n(),
        "k": p.k(),
        "coords": elems_to_json(f, p.coords()),
        "tuples": p.tuples(),
    })
}

/// Merges extra keys into a JSON object.
pub fn with(mut base: Value, extra: &[(&str, Value)]) -> Value {
    if let Value::Object(map) = &mut base {
        for (k, v) in extra {
            map.insert((*k).to_string(), v.clone());
        }
    }
    base
}

pub fn object(pairs: &[(&str, Value)]) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert((*k).to_string(), v.clone());
    }
    Value::Object(map)
}
