//! JSON file formats. Scalars are decimal strings, keys are emitted in a
//! fixed order so identical inputs give byte-identical output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::quiver::{Delta0Rep, DeltaRep};

/// Arrow names in rep files: generator letter plus source vertex.
pub const LOWER_NAMES: [&str; 3] = ["Xm2", "Ym2", "Zm2"];
pub const UPPER_NAMES: [&str; 3] = ["Xm1", "Ym1", "Zm1"];

/// Validates a deserialized field description.
pub fn check_field(f: FieldSpec) -> Result<FieldSpec> {
    match f {
        FieldSpec::Prime { p } => FieldSpec::prime(p),
        FieldSpec::Rational => Ok(f),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(Scalar::to_decimal).collect())
        .collect()
}

pub fn parse_scalar(field: FieldSpec, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| field.from_i64(i))
            .ok_or_else(|| Error::InvalidInput(format!("not an integer: {n}"))),
        other => Err(Error::InvalidInput(format!("expected a scalar, got {other}"))),
    }
}

pub fn matrix_from_json(field: FieldSpec, rows: usize, cols: usize, v: &Value) -> Result<Matrix> {
    let bad = || Error::ShapeMismatch(format!("expected a {rows}x{cols} matrix"));
    let arr = v.as_array().ok_or_else(bad)?;
    if arr.len() != rows {
        return Err(bad());
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in arr {
        let r = r.as_array().ok_or_else(bad)?;
        if r.len() != cols {
            return Err(bad());
        }
        for x in r {
            data.push(parse_scalar(field, x)?);
        }
    }
    Ok(Matrix::new(field, rows, cols, data))
}

pub fn parse_vector(field: FieldSpec, v: &Value) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidInput("expected an array of scalars".into()))?
        .iter()
        .map(|x| parse_scalar(field, x))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct RepFile {
    quiver: String,
    dims: Vec<usize>,
    maps: BTreeMap<String, Value>,
    field: FieldSpec,
}

/// Either kind of representation, as read from a rep file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyRep {
    Delta(DeltaRep),
    Delta0(Delta0Rep),
}

impl AnyRep {
    pub fn field(&self) -> FieldSpec {
        match self {
            AnyRep::Delta(r) => r.field(),
            AnyRep::Delta0(r) => r.field(),
        }
    }

    /// The restriction to the subquiver (identity on subquiver reps).
    pub fn to_delta0(&self) -> Delta0Rep {
        match self {
            AnyRep::Delta(r) => crate::quiver::res(r),
            AnyRep::Delta0(r) => r.clone(),
        }
    }
}

fn maps_value(names: &[&str], ms: &[Matrix]) -> BTreeMap<String, Value> {
    names
        .iter()
        .zip(ms)
        .map(|(n, m)| (n.to_string(), serde_json::to_value(matrix_to_json(m)).unwrap()))
        .collect()
}

impl Serialize for DeltaRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut maps = maps_value(&LOWER_NAMES, self.lower());
        maps.extend(maps_value(&UPPER_NAMES, self.upper()));
        RepFile {
            quiver: "delta".into(),
            dims: self.dims().to_vec(),
            maps,
            field: self.field(),
        }
        .serialize(s)
    }
}

impl Serialize for Delta0Rep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepFile {
            quiver: "delta0".into(),
            dims: self.dims().to_vec(),
            maps: maps_value(&LOWER_NAMES, self.maps()),
            field: self.field(),
        }
        .serialize(s)
    }
}

fn take_maps(f: FieldSpec, maps: &BTreeMap<String, Value>, names: &[&str; 3], rows: usize, cols: usize) -> Result<[Matrix; 3]> {
    let get = |n: &str| {
        let v = maps
            .get(n)
            .ok_or_else(|| Error::InvalidInput(format!("rep file is missing map {n}")))?;
        matrix_from_json(f, rows, cols, v)
    };
    Ok([get(names[0])?, get(names[1])?, get(names[2])?])
}

pub fn rep_from_value(v: Value) -> Result<AnyRep> {
    let file: RepFile = serde_json::from_value(v)?;
    let f = check_field(file.field)?;
    match (file.quiver.as_str(), file.dims.as_slice()) {
        ("delta", &[d0, d1, d2]) => {
            let lower = take_maps(f, &file.maps, &LOWER_NAMES, d1, d0)?;
            let upper = take_maps(f, &file.maps, &UPPER_NAMES, d2, d1)?;
            Ok(AnyRep::Delta(DeltaRep::new(f, [d0, d1, d2], lower, upper)?))
        }
        ("delta0", &[d0, d1]) => {
            let maps = take_maps(f, &file.maps, &LOWER_NAMES, d1, d0)?;
            Ok(AnyRep::Delta0(Delta0Rep::new(f, [d0, d1], maps)?))
        }
        (q, d) => Err(Error::InvalidInput(format!(
            "unknown quiver {q:?} with {} dimensions",
            d.len()
        ))),
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_rep(path: &Path) -> Result<AnyRep> {
    rep_from_value(read_json(path)?)
}

/// Serializes to a JSON string with a trailing newline.
pub fn to_json_string<T: Serialize>(v: &T, pretty: bool) -> Result<String> {
    let mut s = if pretty {
        serde_json::to_string_pretty(v)?
    } else {
        serde_json::to_string(v)?
    };
    s.push('\n');
    Ok(s)
}
