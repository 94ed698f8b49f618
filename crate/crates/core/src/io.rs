//! JSON encodings of Laurent polynomials, matrices and group-ring matrices, and CSV emitters.
//!
//! A Laurent polynomial is a list of terms `[exponent, re_num, re_den, im_num, im_den]`. Fractions
//! must be reduced with positive denominators, and exponents may not repeat. Integers may be given
//! as JSON numbers or as decimal strings when they exceed 64 bits. Group-ring terms carry the
//! quotient index after the exponent: `[k, q, re_num, re_den, im_num, im_den]` with `q` 1-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{GaussianRational, LaurentPoly, Rational};
use crate::error::{Error, Result};
use crate::groupring::{GroupElement, GroupRingMatrix, VcGroupSpec};
use crate::matrix::LaurentMatrix;
use crate::nets::CounterexampleReport;
use crate::quotients::{fmt_f64, SpectralSample};

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

fn int_value(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                parse_err(format!("{what}: expected an integer, got {n}"))
            }
        }
        Value::String(s) => BigInt::from_str(s.trim()).or_else(|_| parse_err(format!("{what}: bad integer string {s:?}"))),
        other => parse_err(format!("{what}: expected an integer, got {other}")),
    }
}

fn small_int<T: TryFrom<i64>>(v: &Value, what: &str) -> Result<T> {
    v.as_i64()
        .and_then(|i| T::try_from(i).ok())
        .ok_or_else(|| Error::Parse(format!("{what}: expected a machine-size integer, got {v}")))
}

fn fraction(num: &Value, den: &Value, what: &str) -> Result<Rational> {
    let (n, d) = (int_value(num, what)?, int_value(den, what)?);
    if !d.is_positive() {
        return parse_err(format!("{what}: denominator must be positive"));
    }
    if !n.gcd(&d).is_one() && !(n.is_zero() && d.is_one()) {
        return parse_err(format!("{what}: fraction {n}/{d} is not reduced"));
    }
    Ok(Rational::new(n, d))
}

fn coefficient(t: &[Value], what: &str) -> Result<GaussianRational> {
    Ok(GaussianRational::new(
        fraction(&t[0], &t[1], &format!("{what} real part"))?,
        fraction(&t[2], &t[3], &format!("{what} imaginary part"))?,
    ))
}

fn int_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(i) => json!(i),
        Err(_) => json!(x.to_string()),
    }
}

fn coeff_json(c: &GaussianRational) -> [Value; 4] {
    [int_json(c.re.numer()), int_json(c.re.denom()), int_json(c.im.numer()), int_json(c.im.denom())]
}

pub fn laurent_from_value(v: &Value) -> Result<LaurentPoly> {
    let terms = v.as_array().ok_or_else(|| Error::Parse("polynomial must be a list of terms".into()))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(terms.len());
    for (j, t) in terms.iter().enumerate() {
        let t = t.as_array().filter(|t| t.len() == 5).ok_or_else(|| {
            Error::Parse(format!("term {j}: expected [exponent, re_num, re_den, im_num, im_den]"))
        })?;
        let e: i64 = small_int(&t[0], &format!("term {j} exponent"))?;
        if !seen.insert(e) {
            return parse_err(format!("duplicate exponent {e}"));
        }
        out.push((e, coefficient(&t[1..], &format!("term {j}"))?));
    }
    Ok(LaurentPoly::from_terms(out))
}

pub fn laurent_to_value(p: &LaurentPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| {
                let [a, b, c2, d] = coeff_json(c);
                json!([e, a, b, c2, d])
            })
            .collect(),
    )
}

pub fn parse_laurent(s: &str) -> Result<LaurentPoly> {
    laurent_from_value(&serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?)
}

fn dims(v: &Value) -> Result<(usize, usize, &Vec<Value>)> {
    let rows: usize = v.get("rows").map(|x| small_int(x, "rows")).transpose()?.ok_or_else(|| Error::Parse("missing rows".into()))?;
    let cols: usize = v.get("cols").map(|x| small_int(x, "cols")).transpose()?.ok_or_else(|| Error::Parse("missing cols".into()))?;
    if rows == 0 || cols == 0 {
        return parse_err("matrix dimensions must be positive");
    }
    let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing entries".into()))?;
    if entries.len() != rows {
        return parse_err(format!("expected {rows} rows of entries, got {}", entries.len()));
    }
    for (i, row) in entries.iter().enumerate() {
        match row.as_array() {
            Some(r) if r.len() == cols => {}
            _ => return parse_err(format!("row {i} must hold {cols} entries")),
        }
    }
    Ok((rows, cols, entries))
}

pub fn matrix_from_value(v: &Value) -> Result<LaurentMatrix> {
    let (rows, cols, entries) = dims(v)?;
    let mut m = LaurentMatrix::zeros(rows, cols)?;
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.as_array().expect("checked").iter().enumerate() {
            let p = laurent_from_value(e).map_err(|err| Error::Parse(format!("entry ({i}, {j}): {err}")))?;
            m.set(i, j, p);
        }
    }
    Ok(m)
}

pub fn matrix_to_value(m: &LaurentMatrix) -> Value {
    let entries: Vec<Value> =
        (0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| laurent_to_value(m.get(i, j))).collect())).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn parse_matrix(s: &str) -> Result<LaurentMatrix> {
    matrix_from_value(&serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?)
}

/// Parses a group-ring matrix and checks its quotient indices against `spec`.
pub fn group_matrix_from_value(v: &Value, spec: &VcGroupSpec) -> Result<GroupRingMatrix> {
    let (rows, cols, entries) = dims(v)?;
    let mut m = GroupRingMatrix::zeros(rows, cols)?;
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.as_array().expect("checked").iter().enumerate() {
            let terms = e.as_array().ok_or_else(|| Error::Parse(format!("entry ({i}, {j}) must be a list of terms")))?;
            let mut seen = BTreeSet::new();
            for t in terms {
                let t = t.as_array().filter(|t| t.len() == 6).ok_or_else(|| {
                    Error::Parse(format!("entry ({i}, {j}): expected [k, q, re_num, re_den, im_num, im_den]"))
                })?;
                let k: i64 = small_int(&t[0], "group exponent")?;
                let q: usize = small_int(&t[1], "quotient index")?;
                if q == 0 || q > spec.n() {
                    return parse_err(format!("entry ({i}, {j}): quotient index {q} outside 1..={}", spec.n()));
                }
                if !seen.insert((k, q)) {
                    return parse_err(format!("entry ({i}, {j}): duplicate group element ({k}, {q})"));
                }
                let c = coefficient(&t[2..], &format!("entry ({i}, {j})"))?;
                m.add_term(i, j, GroupElement::new(k, q - 1), c);
            }
        }
    }
    m.check_against(spec)?;
    Ok(m)
}

pub fn group_matrix_to_value(m: &GroupRingMatrix) -> Value {
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                (0..m.cols())
                    .map(|j| {
                        Value::Array(
                            m.get(i, j)
                                .iter()
                                .map(|(g, c)| {
                                    let [a, b, c2, d] = coeff_json(c);
                                    json!([g.k, g.q + 1, a, b, c2, d])
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

/// Header line of [`samples_csv`].
pub const SAMPLE_CSV_HEADER: &str = "i,group_order,rank,sigma_plus,m_plus,alpha,flags";

/// One row per sample; flags joined by `|`, empty alpha when undefined.
pub fn samples_csv(samples: &[SpectralSample]) -> String {
    let mut s = String::from(SAMPLE_CSV_HEADER);
    s.push('\n');
    for x in samples {
        let flags: Vec<&str> = x.flags.iter().map(|f| f.label()).collect();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            x.level,
            x.group_order,
            x.rank,
            fmt_f64(x.sigma_plus),
            x.m_plus,
            x.alpha.map(fmt_f64).unwrap_or_default(),
            flags.join("|")
        );
    }
    s
}

/// `K,i,alpha` tuples of a counterexample report.
pub fn alpha_tuples_csv(report: &CounterexampleReport) -> String {
    let mut s = String::from("K,i,alpha\n");
    for (k, i, a) in report.alpha_tuples() {
        let _ = writeln!(s, "{k},{i},{}", fmt_f64(a));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn laurent_round_trip() {
        let p = LaurentPoly::from_terms([
            (-2, GaussianRational::new(rat(3, 7), rat(-1, 2))),
            (5, GaussianRational::from(1)),
        ]);
        let v = laurent_to_value(&p);
        assert_eq!(laurent_from_value(&v).unwrap(), p);
    }

    #[test]
    fn rejects_malformed_terms() {
        assert!(parse_laurent("[[0, 2, 4, 0, 1]]").is_err());
        assert!(parse_laurent("[[0, 1, 0, 0, 1]]").is_err());
        assert!(parse_laurent("[[0, 1, -2, 0, 1]]").is_err());
        assert!(parse_laurent("[[1, 1, 1, 0, 1], [1, 2, 1, 0, 1]]").is_err());
        assert!(parse_laurent("[[1, 1, 1, 0]]").is_err());
        assert!(parse_laurent("[[0.5, 1, 1, 0, 1]]").is_err());
    }

    #[test]
    fn zero_terms_dropped_and_big_integers_accepted() {
        let p = parse_laurent(r#"[[0, 0, 1, 0, 1], [3, "123456789012345678901234567890", 1, 0, 1]]"#).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.valuation(), Some(3));
        let back = laurent_to_value(&p);
        assert_eq!(back[0][1], json!("123456789012345678901234567890"));
    }

    #[test]
    fn matrix_round_trip_and_shape_errors() {
        let z = LaurentPoly::z();
        let m = LaurentMatrix::from_rows(vec![vec![z.clone(), LaurentPoly::one()], vec![LaurentPoly::one(), z]]).unwrap();
        assert_eq!(matrix_from_value(&matrix_to_value(&m)).unwrap(), m);
        assert!(parse_matrix(r#"{"rows": 1, "cols": 2, "entries": [[[]]]}"#).is_err());
        assert!(parse_matrix(r#"{"rows": 0, "cols": 0, "entries": []}"#).is_err());
    }

    #[test]
    fn group_matrix_round_trip() {
        let spec = VcGroupSpec::z_times_cyclic(2);
        let v = json!({"rows": 1, "cols": 1, "entries": [[[[0, 2, 1, 1, 0, 1], [1, 1, 1, 1, 0, 1]]]]});
        let m = group_matrix_from_value(&v, &spec).unwrap();
        assert_eq!(group_matrix_to_value(&m), v);
        let bad = json!({"rows": 1, "cols": 1, "entries": [[[[1, 3, 1, 1, 0, 1]]]]});
        assert!(group_matrix_from_value(&bad, &spec).is_err());
    }
}
