//! JSON encodings of fields, series and reports.
//!
//! Integers and rationals are written as decimal strings so that values of any
//! size round-trip exactly.
//!
//! ```json
//! {"field": {"minpoly": ["3", "0", "1"]},
//!  "order": 2,
//!  "coeffs": [[["1","1"], ["0","1"]], [["0","1"], ["1","4"]]]}
//! ```
//!
//! `coeffs[k-1]` holds the power-basis coordinates of the coefficient of `z^k`
//! as `[numerator, denominator]` pairs. A field may also be given as a path to a
//! file holding the field object, resolved relative to the series file.
//! Series in several variables carry `"nvars"` and a `"terms"` list of
//! `{"exp": [k_1, …, k_n], "coeff": […]}`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mseries::MSeries;
use crate::numfield::{make_field, FieldElem, NumberField, Rational};
use crate::series::Series;
use crate::sfunc::SReport;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_integer(s: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|_| perr(format!("bad integer {s:?}")))
}

/// `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_integer(s)?)),
        Some((n, d)) => {
            let d = parse_integer(d)?;
            if d.is_zero() {
                return Err(perr(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_integer(n)?, d))
        }
    }
}

fn integer_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => parse_integer(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_integer(&n.to_string()),
        _ => Err(perr(format!("expected an integer, found {v}"))),
    }
}

fn rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(Rational::from_integer(integer_value(v)?)),
        Value::Array(pair) if pair.len() == 2 => {
            let d = integer_value(&pair[1])?;
            if d.is_zero() {
                return Err(perr("zero denominator"));
            }
            Ok(Rational::new(integer_value(&pair[0])?, d))
        }
        _ => Err(perr(format!("expected a rational, found {v}"))),
    }
}

fn usize_value(v: Option<&Value>, what: &str) -> Result<usize> {
    v.and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| perr(format!("missing or invalid {what:?}")))
}

pub fn field_to_json(field: &NumberField) -> Value {
    json!({ "minpoly": field.minpoly().iter().map(BigInt::to_string).collect::<Vec<_>>() })
}

/// A field object, or a string path to a file holding one (relative to `base`).
pub fn field_from_json(v: &Value, base: Option<&Path>) -> Result<Arc<NumberField>> {
    match v {
        Value::String(path) => {
            let path = resolve(base, path);
            let text = std::fs::read_to_string(&path).map_err(|e| perr(format!("{}: {e}", path.display())))?;
            let inner: Value = serde_json::from_str(&text).map_err(|e| perr(format!("{}: {e}", path.display())))?;
            field_from_json(&inner, path.parent())
        }
        Value::Object(m) => {
            let coeffs = m
                .get("minpoly")
                .and_then(Value::as_array)
                .ok_or_else(|| perr("field needs a \"minpoly\" array"))?
                .iter()
                .map(integer_value)
                .collect::<Result<Vec<_>>>()?;
            make_field(&coeffs)
        }
        Value::Array(_) => field_from_json(&json!({ "minpoly": v }), base),
        _ => Err(perr("invalid field spec")),
    }
}

fn resolve(base: Option<&Path>, path: &str) -> PathBuf {
    let p = Path::new(path);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

pub fn elem_to_json(a: &FieldElem) -> Value {
    Value::Array(
        a.coords()
            .iter()
            .map(|c| json!([c.numer().to_string(), c.denom().to_string()]))
            .collect(),
    )
}

/// A coordinate list (each entry a `[num, den]` pair or a rational string);
/// a bare rational string is read as a constant.
pub fn elem_from_json(v: &Value, field: &Arc<NumberField>) -> Result<FieldElem> {
    match v {
        Value::Array(items) if items.len() == field.degree() => {
            let coords = items.iter().map(rational_value).collect::<Result<Vec<_>>>()?;
            FieldElem::from_coords(field, &coords)
        }
        Value::Array(items) => Err(perr(format!(
            "coefficient has {} coordinates, field has degree {}",
            items.len(),
            field.degree()
        ))),
        _ => Ok(FieldElem::from_rational(field, &rational_value(v)?)),
    }
}

pub fn series_to_json(v: &Series) -> Value {
    let mut obj = json!({
        "field": field_to_json(v.field()),
        "order": v.order(),
        "coeffs": v.coeffs().iter().map(elem_to_json).collect::<Vec<_>>(),
    });
    if !v.const_term().is_zero() {
        obj["const"] = elem_to_json(v.const_term());
    }
    obj
}

pub fn mseries_to_json(v: &MSeries) -> Value {
    let terms: Vec<Value> = v
        .terms()
        .iter()
        .map(|(e, c)| json!({ "exp": e, "coeff": elem_to_json(c) }))
        .collect();
    json!({
        "field": field_to_json(v.field()),
        "nvars": v.nvars(),
        "order": v.order(),
        "terms": terms,
    })
}

/// A parsed series file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesData {
    Uni(Series),
    Multi(MSeries),
}

impl SeriesData {
    pub fn to_json(&self) -> Value {
        match self {
            SeriesData::Uni(v) => series_to_json(v),
            SeriesData::Multi(v) => mseries_to_json(v),
        }
    }
}

/// Parses a series object. `field_override` replaces a missing `"field"` entry.
pub fn series_from_json(v: &Value, base: Option<&Path>, field_override: Option<&Arc<NumberField>>) -> Result<SeriesData> {
    let obj = v.as_object().ok_or_else(|| perr("series must be a JSON object"))?;
    let field = match (obj.get("field"), field_override) {
        (_, Some(f)) => f.clone(),
        (Some(f), None) => field_from_json(f, base)?,
        (None, None) => return Err(perr("series has no \"field\"")),
    };
    if obj.contains_key("nvars") {
        let nvars = usize_value(obj.get("nvars"), "nvars")?;
        let order = usize_value(obj.get("order"), "order")?;
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| perr("multivariate series needs a \"terms\" array"))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let exp = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| perr("term needs an \"exp\" array"))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as u32).ok_or_else(|| perr("bad exponent")))
                .collect::<Result<Vec<_>>>()?;
            let exp_degree: u64 = exp.iter().map(|&x| x as u64).sum();
            if exp_degree > order as u64 {
                return Err(perr(format!("term {exp:?} exceeds order {order}")));
            }
            let c = elem_from_json(t.get("coeff").ok_or_else(|| perr("term needs \"coeff\""))?, &field)?;
            parsed.push((exp, c));
        }
        return Ok(SeriesData::Multi(MSeries::from_terms(&field, nvars, order, parsed)?));
    }
    let coeffs = obj
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("series needs a \"coeffs\" array"))?;
    let order = match obj.get("order") {
        Some(o) => usize_value(Some(o), "order")?,
        None => coeffs.len(),
    };
    if coeffs.len() != order {
        return Err(perr(format!("order is {order} but {} coefficients are given", coeffs.len())));
    }
    let coeffs = coeffs.iter().map(|c| elem_from_json(c, &field)).collect::<Result<Vec<_>>>()?;
    let constant = match obj.get("const") {
        Some(c) => elem_from_json(c, &field)?,
        None => FieldElem::zero(&field),
    };
    Ok(SeriesData::Uni(Series::new(constant, coeffs)?))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| perr(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| perr(format!("{}: {e}", path.display())))
}

pub fn load_series(path: &Path, field_override: Option<&Arc<NumberField>>) -> Result<SeriesData> {
    series_from_json(&read_json(path)?, path.parent(), field_override)
}

pub fn load_field(path: &Path) -> Result<Arc<NumberField>> {
    field_from_json(&read_json(path)?, path.parent())
}

/// A field element stored on its own: `{"field": …, "value": [...]}` or a bare coordinate list.
pub fn elem_from_file(path: &Path, field: Option<&Arc<NumberField>>) -> Result<FieldElem> {
    let v = read_json(path)?;
    match (&v, field) {
        (Value::Object(m), _) => {
            let f = match (m.get("field"), field) {
                (_, Some(f)) => f.clone(),
                (Some(f), None) => field_from_json(f, path.parent())?,
                (None, None) => return Err(perr("element has no field")),
            };
            elem_from_json(m.get("value").ok_or_else(|| perr("element needs \"value\""))?, &f)
        }
        (_, Some(f)) => elem_from_json(&v, f),
        (_, None) => Err(perr("element has no field")),
    }
}

pub fn report_to_json(r: &SReport) -> Value {
    let violations: Vec<Value> = r
        .violations()
        .map(|c| json!({ "k": c.k, "p": c.p, "required": c.required, "valuation": c.valuation, "kind": c.kind }))
        .collect();
    let mut obj = json!({
        "s": r.s,
        "order": r.order,
        "pass": r.pass,
        "checked": r.checks.len(),
        "violations": violations,
        "skipped_primes": r.skipped_primes,
    });
    if !r.extra.is_empty() {
        obj["extra"] = Value::Array(
            r.extra
                .iter()
                .map(|c| json!({ "k": c.k, "p": c.p, "valuation": c.valuation, "integral": c.pass }))
                .collect(),
        );
    }
    obj
}
