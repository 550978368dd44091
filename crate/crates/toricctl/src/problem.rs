//! The problem file: one JSON object per problem, rationals as strings.

use serde_json::{Map, Value};
use thiserror::Error;

use toric_core::exactnum::{parse_rational, Rational};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl InputError {
    fn schema(path: &str, message: impl Into<String>) -> Self {
        InputError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSpec {
    pub dim: usize,
    pub labels: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSpec {
    pub constant: Vec<Rational>,
    /// Rows of the linear part.
    pub linear: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationSpec {
    pub g: Vec<Vec<Rational>>,
    pub lambda: Vec<Rational>,
    pub psi: Vec<PsiSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilSpec {
    pub ell: usize,
    pub m: usize,
    pub matrices: Vec<Vec<Vec<Rational>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub lambda: Option<Vec<Rational>>,
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub schema: u64,
    pub description: Option<String>,
    pub torus: Option<TorusSpec>,
    /// Rows of `L: t → h`; its columns are the polytope's labels.
    pub l_map: Option<Vec<Vec<Rational>>>,
    pub epsilon: Option<Vec<Rational>>,
    /// Explicit face sets for label checks when no polytope is given.
    pub faces: Option<Vec<Vec<usize>>>,
    pub presentation: Option<PresentationSpec>,
    pub pencil: Option<PencilSpec>,
    pub options: Options,
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>, InputError> {
    let obj = v.as_object().ok_or_else(|| InputError::schema(path, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(InputError::schema(&join(path, k), "unknown field"));
    }
    Ok(obj)
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn required<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, InputError> {
    field(obj, key).ok_or_else(|| InputError::schema(&join(path, key), "missing field"))
}

fn count(v: &Value, path: &str) -> Result<usize, InputError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| InputError::schema(path, "expected a non-negative integer"))
}

fn rational(v: &Value, path: &str) -> Result<Rational, InputError> {
    let s = v
        .as_str()
        .ok_or_else(|| InputError::schema(path, "expected a rational as a string such as \"3/4\""))?;
    parse_rational(s).map_err(|e| InputError::schema(path, e.to_string()))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array().ok_or_else(|| InputError::schema(path, "expected an array"))
}

fn vector(v: &Value, path: &str) -> Result<Vec<Rational>, InputError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn matrix(v: &Value, path: &str, cols: Option<usize>) -> Result<Vec<Vec<Rational>>, InputError> {
    let rows: Vec<Vec<Rational>> = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| vector(r, &format!("{path}[{i}]")))
        .collect::<Result<_, _>>()?;
    let width = cols.or_else(|| rows.first().map(Vec::len));
    if let Some(w) = width {
        if let Some(i) = rows.iter().position(|r| r.len() != w) {
            return Err(InputError::schema(
                &format!("{path}[{i}]"),
                format!("expected {w} entries, found {}", rows[i].len()),
            ));
        }
    }
    Ok(rows)
}

fn index_sets(v: &Value, path: &str) -> Result<Vec<Vec<usize>>, InputError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = format!("{path}[{i}]");
            array(s, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| count(x, &format!("{p}[{j}]")))
                .collect()
        })
        .collect()
}

/// Parses and validates a problem file.
pub fn parse(text: &str) -> Result<ProblemFile, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_value(&value)
}

pub fn from_value(value: &Value) -> Result<ProblemFile, InputError> {
    let top = object(
        value,
        "",
        &["schema", "description", "torus", "L_map", "epsilon", "faces", "presentation", "pencil", "options"],
    )?;
    let schema = count(required(top, "", "schema")?, "schema")? as u64;
    if schema != SCHEMA_VERSION {
        return Err(InputError::schema("schema", format!("unsupported version {schema}, expected {SCHEMA_VERSION}")));
    }
    let description = match field(top, "description") {
        Some(d) => Some(
            d.as_str()
                .ok_or_else(|| InputError::schema("description", "expected a string"))?
                .to_string(),
        ),
        None => None,
    };
    let torus = match field(top, "torus") {
        Some(t) => {
            let obj = object(t, "torus", &["dim", "labels"])?;
            let dim = count(required(obj, "torus", "dim")?, "torus.dim")?;
            if dim == 0 {
                return Err(InputError::schema("torus.dim", "must be at least 1"));
            }
            let labels = matrix(required(obj, "torus", "labels")?, "torus.labels", Some(dim))?;
            Some(TorusSpec { dim, labels })
        }
        None => None,
    };
    let l_map = field(top, "L_map").map(|v| matrix(v, "L_map", None)).transpose()?;
    let epsilon = field(top, "epsilon").map(|v| vector(v, "epsilon")).transpose()?;
    match (&l_map, &epsilon) {
        (Some(l), Some(e)) => {
            if l.len() != e.len() {
                return Err(InputError::schema(
                    "epsilon",
                    format!("expected {} entries to match the rows of L_map, found {}", l.len(), e.len()),
                ));
            }
            if let Some(t) = &torus {
                if l.first().map_or(0, Vec::len) != t.dim {
                    return Err(InputError::schema("L_map", format!("expected {} columns to match torus.dim", t.dim)));
                }
            }
        }
        (Some(_), None) => return Err(InputError::schema("epsilon", "missing field (required with L_map)")),
        (None, Some(_)) => return Err(InputError::schema("L_map", "missing field (required with epsilon)")),
        (None, None) => {}
    }
    let faces = field(top, "faces").map(|v| index_sets(v, "faces")).transpose()?;
    if let Some(fs) = &faces {
        let n = torus.as_ref().map(|t| t.labels.len()).unwrap_or(0);
        for (i, f) in fs.iter().enumerate() {
            if let Some(j) = f.iter().position(|&s| s >= n) {
                return Err(InputError::schema(
                    &format!("faces[{i}][{j}]"),
                    format!("label index {} out of range for {n} labels", f[j]),
                ));
            }
        }
    }
    let presentation = match field(top, "presentation") {
        Some(p) => {
            let obj = object(p, "presentation", &["g", "lambda", "psi"])?;
            let dim = torus
                .as_ref()
                .map(|t| t.dim)
                .ok_or_else(|| InputError::schema("torus", "missing field (required with presentation)"))?;
            let g = matrix(required(obj, "presentation", "g")?, "presentation.g", Some(dim))?;
            let lambda = vector(required(obj, "presentation", "lambda")?, "presentation.lambda")?;
            if lambda.len() != g.len() {
                return Err(InputError::schema(
                    "presentation.lambda",
                    format!("expected {} entries to match presentation.g", g.len()),
                ));
            }
            let psi = match field(obj, "psi") {
                Some(v) => array(v, "presentation.psi")?
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let path = format!("presentation.psi[{i}]");
                        let o = object(c, &path, &["constant", "linear"])?;
                        let constant = match field(o, "constant") {
                            Some(v) => vector(v, &join(&path, "constant"))?,
                            None => vec![Rational::from_integer(0.into()); dim],
                        };
                        if constant.len() != dim {
                            return Err(InputError::schema(&join(&path, "constant"), format!("expected {dim} entries")));
                        }
                        let linear = matrix(required(o, &path, "linear")?, &join(&path, "linear"), Some(dim))?;
                        if linear.len() != dim {
                            return Err(InputError::schema(&join(&path, "linear"), format!("expected {dim} rows")));
                        }
                        Ok(PsiSpec { constant, linear })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            Some(PresentationSpec { g, lambda, psi })
        }
        None => None,
    };
    let pencil = match field(top, "pencil") {
        Some(p) => {
            let obj = object(p, "pencil", &["ell", "m", "matrices"])?;
            let ell = count(required(obj, "pencil", "ell")?, "pencil.ell")?;
            let m = count(required(obj, "pencil", "m")?, "pencil.m")?;
            let mats = array(required(obj, "pencil", "matrices")?, "pencil.matrices")?;
            if mats.len() != ell {
                return Err(InputError::schema("pencil.matrices", format!("expected {ell} matrices, found {}", mats.len())));
            }
            let matrices = mats
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let path = format!("pencil.matrices[{i}]");
                    let rows = matrix(w, &path, Some(2 * m))?;
                    if rows.len() != 2 * m {
                        return Err(InputError::schema(&path, format!("expected {} rows", 2 * m)));
                    }
                    Ok(rows)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(PencilSpec { ell, m, matrices })
        }
        None => None,
    };
    let options = match field(top, "options") {
        Some(o) => {
            let obj = object(o, "options", &["lambda", "samples"])?;
            Options {
                lambda: field(obj, "lambda").map(|v| vector(v, "options.lambda")).transpose()?,
                samples: field(obj, "samples").map(|v| count(v, "options.samples")).transpose()?,
            }
        }
        None => Options::default(),
    };
    Ok(ProblemFile {
        schema,
        description,
        torus,
        l_map,
        epsilon,
        faces,
        presentation,
        pencil,
        options,
    })
}

pub fn rational_value(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn vector_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn matrix_value(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| vector_value(r)).collect())
}

pub fn sets_value(sets: &[Vec<usize>]) -> Value {
    Value::Array(sets.iter().map(|s| Value::from(s.clone())).collect())
}

/// The canonical JSON form of a problem file.
pub fn to_value(p: &ProblemFile) -> Value {
    let mut top = Map::new();
    top.insert("schema".into(), Value::from(p.schema));
    if let Some(d) = &p.description {
        top.insert("description".into(), Value::String(d.clone()));
    }
    if let Some(t) = &p.torus {
        let mut o = Map::new();
        o.insert("dim".into(), Value::from(t.dim));
        o.insert("labels".into(), matrix_value(&t.labels));
        top.insert("torus".into(), Value::Object(o));
    }
    if let Some(l) = &p.l_map {
        top.insert("L_map".into(), matrix_value(l));
    }
    if let Some(e) = &p.epsilon {
        top.insert("epsilon".into(), vector_value(e));
    }
    if let Some(f) = &p.faces {
        top.insert("faces".into(), sets_value(f));
    }
    if let Some(pr) = &p.presentation {
        let mut o = Map::new();
        o.insert("g".into(), matrix_value(&pr.g));
        o.insert("lambda".into(), vector_value(&pr.lambda));
        let psi = pr
            .psi
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("constant".into(), vector_value(&c.constant));
                m.insert("linear".into(), matrix_value(&c.linear));
                Value::Object(m)
            })
            .collect();
        o.insert("psi".into(), Value::Array(psi));
        top.insert("presentation".into(), Value::Object(o));
    }
    if let Some(pe) = &p.pencil {
        let mut o = Map::new();
        o.insert("ell".into(), Value::from(pe.ell));
        o.insert("m".into(), Value::from(pe.m));
        o.insert("matrices".into(), Value::Array(pe.matrices.iter().map(|w| matrix_value(w)).collect()));
        top.insert("pencil".into(), Value::Object(o));
    }
    if p.options != Options::default() {
        let mut o = Map::new();
        if let Some(l) = &p.options.lambda {
            o.insert("lambda".into(), vector_value(l));
        }
        if let Some(s) = p.options.samples {
            o.insert("samples".into(), Value::from(s));
        }
        top.insert("options".into(), Value::Object(o));
    }
    Value::Object(top)
}

/// Deterministic text: sorted keys, two-space indent, arrays of scalars on
/// one line, trailing newline.
pub fn emit(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !(v.is_array() || v.is_object())
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            // serde_json's map is ordered by key
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
