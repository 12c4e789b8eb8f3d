//! JSON encoding of algebras, elements and maps.
//!
//! ```text
//! algebra = {"dims": [n1, ...]}
//! element = {"algebra": algebra, "blocks": [[[[re, im], ...], ...], ...]}
//! map     = {"dom": algebra, "cod": algebra, "images": [element, ...]}
//! ```
//!
//! Floats are written in the shortest form that parses back to the same
//! double; integral values are written without a fractional part.

use num_complex::Complex64;
use serde_json::{json, Map, Number, Value};

use crate::algebra::{Element, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::maps::LinMap;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// A float as a JSON number. Non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if x.is_finite() && x == x.trunc() && x.abs() < 9.0e15 {
        Value::Number(Number::from(x as i64))
    } else {
        Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    }
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn as_f64(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| parse_err(format!("expected a number, found {v}")))
}

pub fn complex_from(v: &Value) -> Result<Complex64> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(Complex64::new(as_f64(&a[0])?, as_f64(&a[1])?)),
        Value::Number(_) => Ok(Complex64::new(as_f64(v)?, 0.0)),
        _ => Err(parse_err(format!("expected [re, im], found {v}"))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))
}

pub fn algebra_to_json(a: &FdAlgebra) -> Value {
    json!({ "dims": a.dims() })
}

pub fn algebra_from_json(v: &Value) -> Result<FdAlgebra> {
    let dims = array(field(v, "dims")?, "dims")?
        .iter()
        .map(|d| d.as_i64().ok_or_else(|| parse_err("dims must be integers")))
        .collect::<Result<Vec<i64>>>()?;
    FdAlgebra::from_signed(&dims)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value, n: usize) -> Result<Matrix> {
    let rows = array(v, "matrix")?;
    if rows.len() != n {
        return Err(parse_err(format!("expected {n} rows, found {}", rows.len())));
    }
    let mut m = Matrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = array(row, "matrix row")?;
        if row.len() != n {
            return Err(parse_err(format!("expected {n} columns, found {}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            m[(i, j)] = complex_from(z)?;
        }
    }
    Ok(m)
}

pub fn element_to_json(x: &Element) -> Value {
    json!({
        "algebra": algebra_to_json(x.algebra()),
        "blocks": x.blocks().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn element_from_json(v: &Value) -> Result<Element> {
    let alg = algebra_from_json(field(v, "algebra")?)?;
    let blocks = array(field(v, "blocks")?, "blocks")?;
    if blocks.len() != alg.num_blocks() {
        return Err(parse_err(format!(
            "expected {} blocks, found {}",
            alg.num_blocks(),
            blocks.len()
        )));
    }
    let ms = blocks
        .iter()
        .zip(alg.dims())
        .map(|(b, &n)| matrix_from_json(b, n))
        .collect::<Result<Vec<_>>>()?;
    Element::new(alg, ms)
}

pub fn map_to_json(f: &LinMap) -> Value {
    json!({
        "dom": algebra_to_json(f.dom()),
        "cod": algebra_to_json(f.cod()),
        "images": f.images().iter().map(element_to_json).collect::<Vec<_>>(),
    })
}

pub fn map_from_json(v: &Value) -> Result<LinMap> {
    let dom = algebra_from_json(field(v, "dom")?)?;
    let cod = algebra_from_json(field(v, "cod")?)?;
    let images = array(field(v, "images")?, "images")?
        .iter()
        .map(element_from_json)
        .collect::<Result<Vec<_>>>()?;
    if images.len() != dom.dim() {
        return Err(parse_err(format!(
            "expected {} images, found {}",
            dom.dim(),
            images.len()
        )));
    }
    if let Some(bad) = images.iter().find(|x| x.algebra() != &cod) {
        return Err(parse_err(format!(
            "image has dims {:?}, codomain is {:?}",
            bad.algebra().dims(),
            cod.dims()
        )));
    }
    LinMap::from_images(&dom, &cod, &images)
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

/// `{"error": name, "message": ...}` plus extra fields.
pub fn error_object(name: &str, message: &str, extra: Option<Value>) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), Value::String(name.into()));
    m.insert("message".into(), Value::String(message.into()));
    if let Some(Value::Object(e)) = extra {
        m.extend(e);
    }
    Value::Object(m)
}
