use std::path::Path;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactlin::{parse_rational, IntMatrix, Rational};

/// Which system a file or command refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    /// Lattice basis system `H(B, kappa)` in `D_n`.
    Lattice,
    /// Horn system in `D_m`.
    Horn,
    /// Normalized Horn system in `D_m`.
    Nhorn,
}

#[derive(Clone, Debug)]
pub struct InputSpec {
    pub b: IntMatrix,
    pub kappa: Vec<Rational>,
    pub system: Option<SystemKind>,
}

/// Parses `{"B": [[int, ...], ...], "kappa": ["p/q", ...], "system": "..."}`.
/// `kappa` entries may also be JSON integers; floats are rejected.
pub fn parse_input(src: &str) -> Result<InputSpec> {
    let doc: Value = serde_json::from_str(src)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| Error::parse("document", "expected a JSON object"))?;
    if let Some(key) = obj.keys().find(|k| !matches!(k.as_str(), "B" | "kappa" | "system")) {
        return Err(Error::parse(key.clone(), "unknown field"));
    }

    let rows = obj.get("B").ok_or_else(|| Error::parse("B", "missing field"))?;
    let rows = rows.as_array().ok_or_else(|| Error::parse("B", "expected an array of rows"))?;
    let mut parsed: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::parse(format!("B[{i}]"), "expected an array"))?;
        let mut out = Vec::with_capacity(row.len());
        for (j, v) in row.iter().enumerate() {
            let x = v.as_i64().ok_or_else(|| Error::parse(format!("B[{i}][{j}]"), "expected an integer"))?;
            out.push(BigInt::from(x));
        }
        parsed.push(out);
    }
    let b = IntMatrix::from_rows(&parsed)?;

    let kappa_v = obj.get("kappa").ok_or_else(|| Error::parse("kappa", "missing field"))?;
    let kappa_v = kappa_v.as_array().ok_or_else(|| Error::parse("kappa", "expected an array"))?;
    let mut kappa = Vec::with_capacity(kappa_v.len());
    for (i, v) in kappa_v.iter().enumerate() {
        let r = match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n.as_i64().map(|k| Rational::from_integer(k.into())),
            _ => None,
        };
        kappa.push(r.ok_or_else(|| Error::parse(format!("kappa[{i}]"), "expected a rational \"p/q\" or an integer"))?);
    }
    if b.rows() == 0 || b.cols() == 0 {
        return Err(Error::ShapeMismatch("B must be non-empty".into()));
    }
    if kappa.len() != b.rows() {
        return Err(Error::ShapeMismatch(format!("kappa has length {}, B has {} rows", kappa.len(), b.rows())));
    }

    let system = match obj.get("system") {
        None => None,
        Some(Value::String(s)) => Some(
            SystemKind::from_str(s, true).map_err(|_| Error::parse("system", "expected lattice, horn or nhorn"))?,
        ),
        Some(_) => return Err(Error::parse("system", "expected a string")),
    };
    Ok(InputSpec { b, kappa, system })
}

pub fn read_input(path: &Path) -> Result<InputSpec> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), format!("cannot read file: {e}")))?;
    parse_input(&src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;

    #[test]
    fn parses_rationals_and_integers() {
        let s = parse_input(r#"{"B": [[1], [-1]], "kappa": [0, "1/2"], "system": "horn"}"#).unwrap();
        assert_eq!(s.b, IntMatrix::from_i64(&[&[1], &[-1]]));
        assert_eq!(s.kappa[1], ratio(1, 2));
        assert_eq!(s.system, Some(SystemKind::Horn));
    }

    #[test]
    fn reports_locations() {
        let e = parse_input(r#"{"B": [[1], [x]]"#).unwrap_err();
        assert!(matches!(e, Error::Parse { ref location, .. } if location.starts_with("line 1")), "{e}");
        let e = parse_input(r#"{"B": [[1], [1.5]], "kappa": [0, 0]}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { ref location, .. } if location == "B[1][0]"));
        let e = parse_input(r#"{"B": [[1], [2]], "kappa": [0, 0.5]}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { ref location, .. } if location == "kappa[1]"));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(parse_input(r#"{"B": [[1], [2]], "kappa": [0]}"#), Err(Error::ShapeMismatch(_))));
        assert!(matches!(parse_input(r#"{"B": [[1], [2, 3]], "kappa": [0, 0]}"#), Err(Error::ShapeMismatch(_))));
    }
}
