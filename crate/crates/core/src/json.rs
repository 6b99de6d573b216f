//! JSON encodings of fields, elements, matrices, algebras, involutions and
//! certificates.
//!
//! Rationals are strings `"p/q"` or `"n"`; prime-field elements are integers
//! (strings are accepted on input); quadratic-extension elements are pairs
//! `[re, im]` of base-field encodings. Field descriptors are `"Q"`,
//! `{"p": 7}` or `{"base": ..., "alpha": ...}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::canonical::FrobeniusDecomposition;
use crate::csa::{
    Algebra, BaseMap, CsaCertificate, CsaChecks, CsaElement, GridTrace, InvolutionSpec, QuatMat,
    Quaternion, QuaternionAlgebra, Sign,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::transpose::{ConjugatorTrace, TransposeCertificate, TransposeChecks, Verification};

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field_of<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| err(format!("missing field \"{key}\"")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(format!("{what} must be an array")))
}

fn as_bool(v: &Value, what: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| err(format!("{what} must be a boolean")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    match v {
        Value::Number(n) => n.as_u64().map(|x| x as usize),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| err(format!("{what} must be a non-negative integer")))
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| err(format!("invalid integer \"{s}\"")))
}

/// Parses `"p/q"`, `"n"` or a JSON integer.
pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((n, d)) => (parse_bigint(n)?, parse_bigint(d)?),
                None => (parse_bigint(s)?, BigInt::from(1)),
            };
            if den.is_zero() {
                return Err(err(format!("zero denominator in \"{s}\"")));
            }
            Ok(BigRational::new(num, den))
        }
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(BigRational::from_integer(parse_bigint(&n.to_string())?)),
        _ => Err(err(format!("expected a rational, got {v}"))),
    }
}

pub fn rational_to_json(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

pub fn field_to_json(f: &Field) -> Value {
    match f {
        Field::Rationals => json!("Q"),
        Field::Prime(p) => json!({ "p": p }),
        Field::Quadratic(ext) => json!({
            "base": field_to_json(ext.base()),
            "alpha": element_to_json(ext.alpha()),
        }),
    }
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    match v {
        Value::String(s) if s == "Q" => Ok(Field::Rationals),
        Value::Object(m) if m.contains_key("p") => {
            let p = as_usize(&m["p"], "p")? as u64;
            Field::prime(p)
        }
        Value::Object(m) if m.contains_key("base") => {
            let base = field_from_json(&m["base"])?;
            let alpha = element_from_json(&base, field_of(v, "alpha")?)?;
            Field::quadratic(&base, alpha)
        }
        _ => Err(err(format!("unrecognized field descriptor {v}"))),
    }
}

pub fn element_to_json(x: &FieldElement) -> Value {
    match x {
        FieldElement::Rational(q) => rational_to_json(q),
        FieldElement::Residue { value, .. } => json!(value),
        FieldElement::Quadratic { re, im, .. } => json!([element_to_json(re), element_to_json(im)]),
    }
}

pub fn element_from_json(field: &Field, v: &Value) -> Result<FieldElement> {
    match field {
        Field::Rationals => Ok(FieldElement::Rational(rational_from_json(v)?)),
        Field::Prime(_) => {
            let n = match v {
                Value::Number(n) if n.is_i64() || n.is_u64() => parse_bigint(&n.to_string())?,
                Value::String(s) => parse_bigint(s)?,
                _ => return Err(err(format!("expected an integer residue, got {v}"))),
            };
            Ok(field.from_bigint(&n))
        }
        Field::Quadratic(ext) => {
            let parts = as_array(v, "quadratic element")?;
            if parts.len() != 2 {
                return Err(err("quadratic element must be [re, im]"));
            }
            let re = field.embed(&element_from_json(ext.base(), &parts[0])?)?;
            let im = field.embed(&element_from_json(ext.base(), &parts[1])?)?;
            let s = field.sqrt_alpha().expect("quadratic field");
            Ok(&re + &(&im * &s))
        }
    }
}

pub fn poly_to_json(f: &Poly) -> Value {
    Value::Array(f.coeffs().iter().map(element_to_json).collect())
}

pub fn poly_from_json(field: &Field, v: &Value) -> Result<Poly> {
    let coeffs = as_array(v, "polynomial")?
        .iter()
        .map(|c| element_from_json(field, c))
        .collect::<Result<Vec<_>>>()?;
    Poly::new(field, coeffs)
}

pub fn matrix_to_json(m: &Mat) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(element_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(field: &Field, v: &Value) -> Result<Mat> {
    let rows = as_array(v, "matrix")?
        .iter()
        .map(|r| {
            as_array(r, "matrix row")?
                .iter()
                .map(|x| element_from_json(field, x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(err("matrix must have at least one row"));
    }
    Mat::from_rows(field, rows).map_err(|e| err(format!("bad matrix: {e}")))
}

/// Square matrix with the given field.
pub fn square_matrix_from_json(field: &Field, v: &Value) -> Result<Mat> {
    let m = matrix_from_json(field, v)?;
    if !m.is_square() {
        return Err(err(format!("matrix must be square, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m)
}

pub fn quaternion_to_json(q: &Quaternion) -> Value {
    Value::Array(q.coords().iter().map(element_to_json).collect())
}

pub fn quaternion_from_json(d: &std::sync::Arc<QuaternionAlgebra>, v: &Value) -> Result<Quaternion> {
    let c = as_array(v, "quaternion")?;
    if c.len() != 4 {
        return Err(err("quaternion must have 4 coordinates"));
    }
    let coords = c
        .iter()
        .map(|x| element_from_json(d.base(), x))
        .collect::<Result<Vec<_>>>()?;
    let coords: [FieldElement; 4] = coords.try_into().expect("length checked");
    d.from_coords(coords)
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    match a {
        Algebra::Matrix { field, n } => json!({ "field": field_to_json(field), "n": n }),
        Algebra::Quaternion { algebra, n } => json!({
            "field": field_to_json(algebra.base()),
            "n": n,
            "alpha": element_to_json(algebra.alpha()),
            "beta": element_to_json(algebra.beta()),
        }),
    }
}

pub fn algebra_from_json(v: &Value) -> Result<Algebra> {
    let field = field_from_json(field_of(v, "field")?)?;
    let n = match v.get("n") {
        Some(n) => as_usize(n, "n")?,
        None => 1,
    };
    if n == 0 {
        return Err(err("n must be positive"));
    }
    match (v.get("alpha"), v.get("beta")) {
        (None, None) => Ok(Algebra::matrix(&field, n)),
        (Some(a), Some(b)) => {
            let alpha = element_from_json(&field, a)?;
            let beta = element_from_json(&field, b)?;
            Ok(Algebra::quaternion(&QuaternionAlgebra::new(&field, alpha, beta)?, n))
        }
        _ => Err(err("quaternion algebras need both \"alpha\" and \"beta\"")),
    }
}

pub fn csa_element_to_json(x: &CsaElement) -> Value {
    match x {
        CsaElement::MatF(m) => matrix_to_json(m),
        CsaElement::MatQuat(q) => {
            let n = q.n();
            Value::Array(
                (0..n)
                    .map(|i| Value::Array((0..n).map(|j| quaternion_to_json(q.entry(i, j))).collect()))
                    .collect(),
            )
        }
    }
}

/// Matrices are arrays of rows. In `M_1(D)` a bare quaternion 4-array is
/// accepted too.
pub fn csa_element_from_json(alg: &Algebra, v: &Value) -> Result<CsaElement> {
    match alg {
        Algebra::Matrix { field, n } => {
            let m = square_matrix_from_json(field, v)?;
            if m.rows() != *n {
                return Err(err(format!("expected a {n}x{n} matrix, got {}x{}", m.rows(), m.cols())));
            }
            Ok(CsaElement::MatF(m))
        }
        Algebra::Quaternion { algebra, n } => {
            let rows = as_array(v, "quaternion matrix")?;
            let bare = *n == 1 && rows.len() == 4 && rows.iter().all(|x| !x.is_array());
            if bare {
                return Ok(CsaElement::from_quaternion(quaternion_from_json(algebra, v)?));
            }
            if rows.len() != *n {
                return Err(err(format!("expected {n} rows, got {}", rows.len())));
            }
            let mut entries = Vec::with_capacity(n * n);
            for r in rows {
                let r = as_array(r, "quaternion matrix row")?;
                if r.len() != *n {
                    return Err(err(format!("expected {n} entries per row, got {}", r.len())));
                }
                for x in r {
                    entries.push(quaternion_from_json(algebra, x)?);
                }
            }
            Ok(CsaElement::MatQuat(QuatMat::new(algebra, *n, entries)?))
        }
    }
}

pub fn involution_to_json(theta: &InvolutionSpec) -> Value {
    json!({
        "base": theta.base().as_str(),
        "twist": theta.twist().map_or(Value::Null, csa_element_to_json),
    })
}

/// A missing `"base"` defaults to the natural base map of the algebra.
pub fn involution_from_json(alg: &Algebra, v: &Value) -> Result<InvolutionSpec> {
    let base = match v.get("base").and_then(Value::as_str) {
        Some("transpose") => BaseMap::Transpose,
        Some("gamma-transpose") => BaseMap::GammaTranspose,
        Some(other) => return Err(err(format!("unknown involution base \"{other}\""))),
        None => match alg {
            Algebra::Matrix { .. } => BaseMap::Transpose,
            Algebra::Quaternion { .. } => BaseMap::GammaTranspose,
        },
    };
    let twist = match v.get("twist") {
        None | Some(Value::Null) => None,
        Some(t) => Some(csa_element_from_json(alg, t)?),
    };
    InvolutionSpec::new(alg, base, twist)
}

fn trace_to_json(t: &ConjugatorTrace) -> Value {
    match t {
        ConjugatorTrace::SymmetricInput => json!({ "method": "symmetric-input" }),
        ConjugatorTrace::KrylovPair { minimal_polynomial } => json!({
            "method": "krylov-pair",
            "minimal_polynomial": poly_to_json(minimal_polynomial),
        }),
        ConjugatorTrace::FrobeniusBlocks { invariant_factors } => json!({
            "method": "frobenius-blocks",
            "invariant_factors": invariant_factors.iter().map(poly_to_json).collect::<Vec<_>>(),
        }),
        ConjugatorTrace::Perturbation { t, intertwiner_dimension } => json!({
            "method": "perturbation",
            "t": element_to_json(t),
            "intertwiner_dimension": intertwiner_dimension,
        }),
        ConjugatorTrace::Enumeration { intertwiner_dimension, candidates_checked } => json!({
            "method": "enumeration",
            "intertwiner_dimension": intertwiner_dimension,
            "candidates_checked": candidates_checked,
        }),
    }
}

fn trace_from_json(field: &Field, v: &Value) -> Result<ConjugatorTrace> {
    let method = field_of(v, "method")?.as_str().unwrap_or_default();
    Ok(match method {
        "symmetric-input" => ConjugatorTrace::SymmetricInput,
        "krylov-pair" => ConjugatorTrace::KrylovPair {
            minimal_polynomial: poly_from_json(field, field_of(v, "minimal_polynomial")?)?,
        },
        "frobenius-blocks" => ConjugatorTrace::FrobeniusBlocks {
            invariant_factors: as_array(field_of(v, "invariant_factors")?, "invariant_factors")?
                .iter()
                .map(|f| poly_from_json(field, f))
                .collect::<Result<_>>()?,
        },
        "perturbation" => ConjugatorTrace::Perturbation {
            t: element_from_json(field, field_of(v, "t")?)?,
            intertwiner_dimension: as_usize(field_of(v, "intertwiner_dimension")?, "intertwiner_dimension")?,
        },
        "enumeration" => ConjugatorTrace::Enumeration {
            intertwiner_dimension: as_usize(field_of(v, "intertwiner_dimension")?, "intertwiner_dimension")?,
            candidates_checked: as_usize(field_of(v, "candidates_checked")?, "candidates_checked")? as u64,
        },
        other => return Err(err(format!("unknown algorithm method \"{other}\""))),
    })
}

pub fn transpose_certificate_to_json(c: &TransposeCertificate) -> Value {
    let mut m = Map::new();
    m.insert("field".into(), field_to_json(c.field()));
    m.insert("a".into(), matrix_to_json(&c.a));
    m.insert("g".into(), matrix_to_json(&c.g));
    m.insert("symmetric".into(), json!(c.symmetric));
    m.insert(
        "checks".into(),
        json!({
            "conjugates": c.checks.conjugates,
            "invertible": c.checks.invertible,
            "symmetry": c.checks.symmetry,
        }),
    );
    if let Some(t) = &c.trace {
        m.insert("algorithm".into(), trace_to_json(t));
    }
    Value::Object(m)
}

/// Reads a certificate as stored, without recomputing any flag.
pub fn transpose_certificate_from_json(v: &Value) -> Result<TransposeCertificate> {
    let field = field_from_json(field_of(v, "field")?)?;
    let a = square_matrix_from_json(&field, field_of(v, "a")?)?;
    let g = square_matrix_from_json(&field, field_of(v, "g")?)?;
    let checks = field_of(v, "checks")?;
    let checks = TransposeChecks {
        conjugates: as_bool(field_of(checks, "conjugates")?, "conjugates")?,
        invertible: as_bool(field_of(checks, "invertible")?, "invertible")?,
        symmetry: as_bool(field_of(checks, "symmetry")?, "symmetry")?,
    };
    let symmetric = as_bool(field_of(v, "symmetric")?, "symmetric")?;
    let trace = match v.get("algorithm") {
        None | Some(Value::Null) => None,
        Some(t) => Some(trace_from_json(&field, t)?),
    };
    Ok(TransposeCertificate { a, g, symmetric, checks, trace })
}

pub fn csa_certificate_to_json(c: &CsaCertificate) -> Value {
    let mut m = Map::new();
    m.insert("algebra".into(), algebra_to_json(c.involution.algebra()));
    m.insert("involution".into(), involution_to_json(&c.involution));
    m.insert("a".into(), csa_element_to_json(&c.a));
    m.insert("g".into(), csa_element_to_json(&c.g));
    m.insert("epsilon".into(), json!(c.epsilon.as_i64()));
    m.insert(
        "checks".into(),
        json!({
            "conjugates": c.checks.conjugates,
            "invertible": c.checks.invertible,
            "sign": c.checks.sign,
        }),
    );
    if let Some(t) = &c.trace {
        m.insert(
            "algorithm".into(),
            json!({
                "method": "grid-search",
                "solution_dimension": t.solution_dimension,
                "grid_point": t.grid_point,
                "reduced_norm": element_to_json(&t.reduced_norm),
            }),
        );
    }
    Value::Object(m)
}

pub fn csa_certificate_from_json(v: &Value) -> Result<CsaCertificate> {
    let alg = algebra_from_json(field_of(v, "algebra")?)?;
    let involution = involution_from_json(&alg, field_of(v, "involution")?)?;
    let a = csa_element_from_json(&alg, field_of(v, "a")?)?;
    let g = csa_element_from_json(&alg, field_of(v, "g")?)?;
    let epsilon = match field_of(v, "epsilon")? {
        Value::Number(n) => n.as_i64().and_then(Sign::from_i64),
        Value::String(s) => s.trim().parse().ok().and_then(Sign::from_i64),
        _ => None,
    }
    .ok_or_else(|| err("epsilon must be 1 or -1"))?;
    let checks = field_of(v, "checks")?;
    let checks = CsaChecks {
        conjugates: as_bool(field_of(checks, "conjugates")?, "conjugates")?,
        invertible: as_bool(field_of(checks, "invertible")?, "invertible")?,
        sign: as_bool(field_of(checks, "sign")?, "sign")?,
    };
    let trace = match v.get("algorithm") {
        None | Some(Value::Null) => None,
        Some(t) => Some(GridTrace {
            solution_dimension: as_usize(field_of(t, "solution_dimension")?, "solution_dimension")?,
            grid_point: as_array(field_of(t, "grid_point")?, "grid_point")?
                .iter()
                .map(|x| as_usize(x, "grid_point entry").map(|x| x as u64))
                .collect::<Result<_>>()?,
            reduced_norm: element_from_json(alg.field(), field_of(t, "reduced_norm")?)?,
        }),
    };
    Ok(CsaCertificate { involution, a, g, epsilon, checks, trace })
}

pub fn frobenius_to_json(f: &FrobeniusDecomposition) -> Value {
    json!({
        "invariant_factors": f.invariant_factors.iter().map(poly_to_json).collect::<Vec<_>>(),
        "transform": matrix_to_json(&f.transform),
        "block_matrix": matrix_to_json(&f.block_matrix),
    })
}

pub fn verification_to_json(v: &Verification) -> Value {
    json!({ "valid": v.valid, "reasons": v.reasons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csa::theorem_conjugator;
    use crate::transpose::symmetric_conjugator;

    #[test]
    fn rationals_round_trip() {
        for s in ["1/2", "-3", "0", "10/4"] {
            let q = rational_from_json(&json!(s)).unwrap();
            assert_eq!(rational_from_json(&rational_to_json(&q)).unwrap(), q);
        }
        assert_eq!(rational_to_json(&rational_from_json(&json!("10/4")).unwrap()), json!("5/2"));
        assert_eq!(rational_from_json(&json!(7)).unwrap(), BigRational::from_integer(7.into()));
        assert!(rational_from_json(&json!("1/0")).is_err());
        assert!(rational_from_json(&json!("x")).is_err());
        assert!(rational_from_json(&json!(0.5)).is_err());
    }

    #[test]
    fn fields_round_trip() {
        let q = Field::Rationals;
        let f7 = Field::Prime(7);
        let k = Field::quadratic(&q, q.from_i64(-1)).unwrap();
        let k7 = Field::quadratic(&f7, f7.from_i64(3)).unwrap();
        for f in [q, f7, k, k7] {
            assert_eq!(field_from_json(&field_to_json(&f)).unwrap(), f);
        }
        assert!(field_from_json(&json!({"p": 8})).is_err());
        assert!(field_from_json(&json!("R")).is_err());
    }

    #[test]
    fn elements() {
        let f7 = Field::Prime(7);
        assert_eq!(element_from_json(&f7, &json!(-1)).unwrap(), f7.from_i64(6));
        assert_eq!(element_from_json(&f7, &json!("10")).unwrap(), f7.from_i64(3));
        assert_eq!(element_to_json(&f7.from_i64(3)), json!(3));
        let q = Field::Rationals;
        let k = Field::quadratic(&q, q.from_i64(2)).unwrap();
        let x = element_from_json(&k, &json!(["1/2", "3"])).unwrap();
        assert_eq!(element_to_json(&x), json!(["1/2", "3"]));
    }

    #[test]
    fn transpose_certificate_round_trip() {
        let q = Field::Rationals;
        let a = Mat::from_i64(&q, &[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let cert = symmetric_conjugator(&a).unwrap();
        let v = transpose_certificate_to_json(&cert);
        assert_eq!(transpose_certificate_from_json(&v).unwrap(), cert);
    }

    #[test]
    fn csa_certificate_round_trip() {
        let q = Field::Rationals;
        let alg = algebra_from_json(&json!({"field": "Q", "n": 1, "alpha": "-1", "beta": "-1"})).unwrap();
        let theta = involution_from_json(&alg, &json!({"base": "gamma-transpose", "twist": null})).unwrap();
        let a = csa_element_from_json(&alg, &json!(["0", "1", "0", "0"])).unwrap();
        let cert = theorem_conjugator(&theta, &a).unwrap();
        let v = csa_certificate_to_json(&cert);
        assert_eq!(v["g"], json!([[["0", "0", "1", "0"]]]));
        assert_eq!(v["epsilon"], json!(-1));
        assert_eq!(csa_certificate_from_json(&v).unwrap(), cert);
        assert_eq!(alg.field(), &q);
    }

    #[test]
    fn malformed() {
        assert!(matrix_from_json(&Field::Rationals, &json!([["1", "2"], ["3"]])).is_err());
        assert!(matrix_from_json(&Field::Rationals, &json!([])).is_err());
        assert!(algebra_from_json(&json!({"field": "Q", "alpha": "-1"})).is_err());
        assert!(involution_from_json(&Algebra::matrix(&Field::Rationals, 2), &json!({"base": "x"})).is_err());
    }
}
