//! Deterministic JSON encoding of the domain types and the report envelope
//! used by the CLI: rationals as "p/q" strings, field elements as
//! {"a","b","D"} objects, matrices as row arrays, sorted keys throughout.

use crate::exactnum::{fmt_rat, parse_quad, parse_rational, ParseNumError, QuadNum, Rat};
use crate::fillings::SlopePair;
use crate::funceq::{HomPoly, ThetaPair};
use crate::linalg::{Mat2Q, Mat4, Poly};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("{0}")]
    Num(#[from] ParseNumError),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Shape(String),
}

pub fn rat_value(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn quad_value(q: &QuadNum) -> Value {
    json!({
        "a": fmt_rat(&q.a),
        "b": fmt_rat(&q.b),
        "D": q.d,
    })
}

pub fn mat2_value(m: &Mat2Q) -> Value {
    json!({
        "rows": [
            [fmt_rat(&m.e[0][0]), fmt_rat(&m.e[0][1])],
            [fmt_rat(&m.e[1][0]), fmt_rat(&m.e[1][1])],
        ]
    })
}

pub fn mat4_value(m: &Mat4) -> Value {
    let rows: Vec<Value> = m
        .e
        .iter()
        .map(|row| Value::Array(row.iter().map(rat_value).collect()))
        .collect();
    json!({ "rows": rows })
}

/// Polynomials serialize as ascending coefficient arrays of rational strings.
pub fn poly_value(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(rat_value).collect())
}

/// Homogeneous polynomials list u1-descending coefficients.
pub fn hompoly_value(p: &HomPoly) -> Value {
    json!({
        "degree": p.degree,
        "coeffs": p.coeffs.iter().rev().map(quad_value).collect::<Vec<_>>(),
    })
}

pub fn theta_pair_value(p: &ThetaPair) -> Value {
    json!({
        "theta1": hompoly_value(&p.theta1),
        "theta2": hompoly_value(&p.theta2),
    })
}

pub fn pair_value(p: &SlopePair) -> Value {
    json!([p.0.to_string(), p.1.to_string()])
}

fn expect_str(v: &Value, what: &str) -> Result<String, DecodeError> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| DecodeError::Shape(format!("{what} must be a string")))
}

pub fn decode_rat(v: &Value) -> Result<Rat, DecodeError> {
    Ok(parse_rational(&expect_str(v, "rational")?)?)
}

pub fn decode_quad(v: &Value) -> Result<QuadNum, DecodeError> {
    match v {
        Value::String(s) => Ok(parse_quad(s)?),
        Value::Object(map) => {
            let a = decode_rat(map.get("a").ok_or_else(|| DecodeError::Shape("missing a".into()))?)?;
            let b = decode_rat(map.get("b").ok_or_else(|| DecodeError::Shape("missing b".into()))?)?;
            let d = map
                .get("D")
                .and_then(Value::as_i64)
                .ok_or_else(|| DecodeError::Shape("missing integer D".into()))?;
            if num::Zero::is_zero(&b) {
                Ok(QuadNum::from_rat(a))
            } else if d >= 0 {
                Err(DecodeError::Shape("D must be negative".into()))
            } else {
                Ok(QuadNum::sqrt_of(d, b) + QuadNum::from_rat(a))
            }
        }
        _ => Err(DecodeError::Shape("field element must be a string or object".into())),
    }
}

fn decode_rows(v: &Value, n: usize) -> Result<Vec<Vec<Rat>>, DecodeError> {
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| DecodeError::Shape("matrix must have a rows array".into()))?;
    if rows.len() != n {
        return Err(DecodeError::Shape(format!("expected {n} rows")));
    }
    rows.iter()
        .map(|row| {
            let cells = row
                .as_array()
                .ok_or_else(|| DecodeError::Shape("row must be an array".into()))?;
            if cells.len() != n {
                return Err(DecodeError::Shape(format!("expected {n} columns")));
            }
            cells.iter().map(decode_rat).collect()
        })
        .collect()
}

pub fn decode_mat4(v: &Value) -> Result<Mat4, DecodeError> {
    let rows = decode_rows(v, 4)?;
    let mut m = Mat4::identity();
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            m.e[i][j] = x;
        }
    }
    Ok(m)
}

pub fn decode_mat2(v: &Value) -> Result<Mat2Q, DecodeError> {
    let rows = decode_rows(v, 2)?;
    Ok(Mat2Q::new(
        rows[0][0].clone(),
        rows[0][1].clone(),
        rows[1][0].clone(),
        rows[1][1].clone(),
    ))
}

pub fn parse_mat4_json(bytes: &[u8]) -> Result<Mat4, DecodeError> {
    let v: Value =
        serde_json::from_slice(bytes).map_err(|e| DecodeError::Json(e.to_string()))?;
    decode_mat4(&v)
}

pub fn parse_mat2_json(bytes: &[u8]) -> Result<Mat2Q, DecodeError> {
    let v: Value =
        serde_json::from_slice(bytes).map_err(|e| DecodeError::Json(e.to_string()))?;
    decode_mat2(&v)
}

/// Group files are JSON lists of 4x4 matrices.
pub fn parse_matrix_list_json(bytes: &[u8]) -> Result<Vec<Mat4>, DecodeError> {
    let v: Value =
        serde_json::from_slice(bytes).map_err(|e| DecodeError::Json(e.to_string()))?;
    let arr = v
        .as_array()
        .ok_or_else(|| DecodeError::Shape("group file must be a JSON list".into()))?;
    arr.iter().map(decode_mat4).collect()
}

pub fn matrix_list_value(ms: &[Mat4]) -> Value {
    Value::Array(ms.iter().map(mat4_value).collect())
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
}

/// The CLI report envelope: command echo, input digest, results, verdicts.
/// Byte-deterministic for identical inputs (sorted keys, canonical strings).
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
}

pub fn digest(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex::encode(&h.finalize()[..8])
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut inputs = Map::new();
        for (k, v) in &self.inputs {
            inputs.insert(k.clone(), Value::String(v.clone()));
        }
        json!({
            "command": self.command,
            "inputs": Value::Object(inputs),
            "results": self.results,
            "verdicts": self
                .verdicts
                .iter()
                .map(|v| json!({"name": v.name, "pass": v.pass}))
                .collect::<Vec<_>>(),
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }

    pub fn render_summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.inputs {
            out.push_str(&format!("input {k}: {v}\n"));
        }
        out.push_str(&summarize_value(&self.results, 0));
        for v in &self.verdicts {
            out.push_str(&format!(
                "[{}] {}\n",
                if v.pass { "pass" } else { "FAIL" },
                v.name
            ));
        }
        out
    }
}

fn summarize_value(v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            let mut out = String::new();
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        out.push_str(&summarize_value(val, indent + 1));
                    }
                    _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                }
            }
            out
        }
        Value::Array(items) => {
            let simple = items
                .iter()
                .all(|i| !matches!(i, Value::Object(_) | Value::Array(_)));
            if simple {
                let rendered: Vec<String> = items.iter().map(Value::to_string).collect();
                format!("{pad}[{}]\n", rendered.join(", "))
            } else {
                let mut out = String::new();
                for (i, item) in items.iter().enumerate() {
                    out.push_str(&format!("{pad}- [{i}]\n"));
                    out.push_str(&summarize_value(item, indent + 1));
                }
                out
            }
        }
        other => format!("{pad}{other}\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn matrix_roundtrip() {
        let m = corpus::v2788_b();
        let v = mat4_value(&m);
        let bytes = serde_json::to_vec(&v).unwrap();
        assert_eq!(parse_mat4_json(&bytes).unwrap(), m);
        assert!(parse_mat4_json(b"garbage").is_err());
        assert!(parse_mat4_json(b"{\"rows\": [[\"1\"]]}").is_err());
        assert!(parse_mat4_json(b"{\"rows\": [[\"1/0\",\"0\",\"0\",\"0\"]]}").is_err());
    }

    #[test]
    fn report_determinism() {
        let r = Report {
            command: "classify".into(),
            inputs: vec![("matrix".into(), digest(b"x"))],
            results: json!({"b": 1, "a": 2}),
            verdicts: vec![Verdict { name: "t".into(), pass: true }],
        };
        assert_eq!(r.render_json(), r.render_json());
        // keys come out sorted
        let s = r.render_json();
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
