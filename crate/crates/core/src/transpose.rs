//! Conjugators carrying a square matrix to its transpose.
//!
//! Every `a` admits a symmetric invertible `g` with `g a g^-1 = a^T`. When
//! `a` is cyclic every such `g` is symmetric; otherwise non-symmetric ones
//! exist too, and [`asymmetric_conjugator`] produces one.

use crate::canonical::{cyclic_vector_with, frobenius_form_with};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{intertwiner_space, Mat};
use crate::poly::Poly;
use crate::SearchConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransposeChecks {
    /// `g a = a^T g`
    pub conjugates: bool,
    /// `det g != 0`
    pub invertible: bool,
    /// `g^T = g`
    pub symmetry: bool,
}

/// How a conjugator was obtained; carried along for audit output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugatorTrace {
    /// `a` was already symmetric, so `g = I`.
    SymmetricInput,
    /// `a` is cyclic; `g = K(a^T, w) K(a, v)^-1` for cyclic vectors `v`, `w`.
    KrylovPair { minimal_polynomial: Poly },
    /// Assembled as `h^T blockdiag(b_i) h` from a Frobenius transform `h`,
    /// one cyclic conjugator `b_i` per companion block.
    FrobeniusBlocks { invariant_factors: Vec<Poly> },
    /// `g0 + t w` with `g0` symmetric and `w` a non-symmetric intertwiner.
    Perturbation { t: FieldElement, intertwiner_dimension: usize },
    /// First invertible non-symmetric point of the intertwiner space.
    Enumeration { intertwiner_dimension: usize, candidates_checked: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransposeCertificate {
    pub a: Mat,
    pub g: Mat,
    pub symmetric: bool,
    pub checks: TransposeChecks,
    pub trace: Option<ConjugatorTrace>,
}

impl TransposeCertificate {
    /// Computes the checks for `(a, g)`. Shapes must already agree.
    pub fn from_parts(a: Mat, g: Mat, trace: Option<ConjugatorTrace>) -> Result<Self> {
        let checks = compute_checks(&a, &g)?;
        Ok(TransposeCertificate { a, g, symmetric: checks.symmetry, checks, trace })
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }
}

fn compute_checks(a: &Mat, g: &Mat) -> Result<TransposeChecks> {
    let n = a.require_square()?;
    if g.rows() != n || g.cols() != n {
        return Err(Error::ShapeMismatch("conjugator and matrix differ in size".into()));
    }
    if a.field() != g.field() {
        return Err(Error::DescriptorMismatch);
    }
    Ok(TransposeChecks {
        conjugates: g * a == &a.transpose() * g,
        invertible: !g.det()?.is_zero(),
        symmetry: g.is_symmetric(),
    })
}

/// A symmetric invertible `g` with `g a g^-1 = a^T`, normalized so its
/// first nonzero entry is 1.
pub fn symmetric_conjugator(a: &Mat) -> Result<TransposeCertificate> {
    symmetric_conjugator_with(a, &SearchConfig::default())
}

pub fn symmetric_conjugator_with(a: &Mat, cfg: &SearchConfig) -> Result<TransposeCertificate> {
    let n = a.require_square()?;
    let field = a.field().clone();
    if a.is_symmetric() {
        let cert = TransposeCertificate::from_parts(
            a.clone(),
            Mat::identity(&field, n),
            Some(ConjugatorTrace::SymmetricInput),
        )?;
        return Ok(cert);
    }

    if a.minpoly()?.degree() == Some(n) {
        let g = cyclic_conjugator(a, cfg)?.normalize_first_nonzero();
        let minimal_polynomial = a.minpoly()?;
        return assembled(a, g, ConjugatorTrace::KrylovPair { minimal_polynomial });
    }

    let frob = frobenius_form_with(a, cfg)?;
    let mut blocks = Vec::with_capacity(frob.invariant_factors.len());
    let mut offset = 0;
    for f in &frob.invariant_factors {
        let d = f.degree().expect("invariant factors are nonzero");
        let c = block_of(&frob.block_matrix, offset, d);
        offset += d;
        blocks.push(cyclic_conjugator(&c, cfg)?);
    }
    let b = Mat::block_diag(&field, &blocks);
    let h = &frob.transform;
    let g = (&(&h.transpose() * &b) * h).normalize_first_nonzero();
    assembled(a, g, ConjugatorTrace::FrobeniusBlocks { invariant_factors: frob.invariant_factors })
}

/// For cyclic `c`: the conjugator `K(c^T, w) K(c, v)^-1` sending the first
/// cyclic vector `v` of `c` to the first cyclic vector `w` of `c^T`.
/// Conjugators of a cyclic matrix to its transpose are always symmetric,
/// which is asserted.
fn cyclic_conjugator(c: &Mat, cfg: &SearchConfig) -> Result<Mat> {
    let d = c.rows();
    let ct = c.transpose();
    let missing = || Error::InternalAssertion("cyclic matrix without a cyclic vector".into());
    let v = cyclic_vector_with(c, cfg)?.ok_or_else(missing)?;
    let w = cyclic_vector_with(&ct, cfg)?.ok_or_else(missing)?;
    let b = &ct.krylov(&w, d)? * &c.krylov(&v, d)?.inverse()?;
    if (&b * c) != (&ct * &b) || !b.is_invertible() {
        return Err(Error::InternalAssertion(format!("cyclic block conjugator fails for\n{c}")));
    }
    if !b.is_symmetric() {
        return Err(Error::InternalAssertion(format!("cyclic block conjugator is not symmetric for\n{c}")));
    }
    Ok(b)
}

fn assembled(a: &Mat, g: Mat, trace: ConjugatorTrace) -> Result<TransposeCertificate> {
    let cert = TransposeCertificate::from_parts(a.clone(), g, Some(trace))?;
    if !(cert.checks.conjugates && cert.checks.invertible && cert.checks.symmetry) {
        return Err(Error::InternalAssertion("assembled conjugator fails verification".into()));
    }
    Ok(cert)
}

fn block_of(m: &Mat, offset: usize, d: usize) -> Mat {
    let mut out = Mat::zeros(m.field(), d, d);
    for i in 0..d {
        for j in 0..d {
            out.set(i, j, m[(offset + i, offset + j)].clone());
        }
    }
    out
}

/// Whether every `x` with `x a = a^T x` is symmetric. Symmetry is linear, so
/// checking a basis of the solution space decides it.
pub fn all_conjugators_symmetric(a: &Mat) -> Result<bool> {
    a.require_square()?;
    Ok(intertwiner_space(a, &a.transpose())?.iter().all(Mat::is_symmetric))
}

const ENUMERATION_LIMIT: u64 = 1 << 20;

/// An invertible non-symmetric `g` with `g a g^-1 = a^T`; fails with
/// [`Error::CyclicInput`] when `a` is cyclic, since then none exists.
pub fn asymmetric_conjugator(a: &Mat) -> Result<TransposeCertificate> {
    asymmetric_conjugator_with(a, &SearchConfig::default())
}

pub fn asymmetric_conjugator_with(a: &Mat, cfg: &SearchConfig) -> Result<TransposeCertificate> {
    let n = a.require_square()?;
    let field = a.field().clone();
    if a.minpoly()?.degree() == Some(n) {
        return Err(Error::CyclicInput);
    }
    let g0 = symmetric_conjugator_with(a, cfg)?.g;
    let space = intertwiner_space(a, &a.transpose())?;
    let dim = space.len();
    let Some(w) = space.iter().find(|x| !x.is_symmetric()) else {
        return Err(Error::InternalAssertion(
            "non-cyclic matrix with only symmetric conjugators".into(),
        ));
    };

    // det(g0 + t w) is a polynomial of degree <= n in t, nonzero at t = 0,
    // so n + 1 distinct nonzero values of t suffice.
    let max_t = match field.characteristic() {
        0 => n as u64 + 1,
        p => (n as u64 + 1).min(p - 1),
    };
    for t in 1..=max_t {
        let t = field.from_i64(t as i64);
        let g = &g0 + &w.scale(&t);
        if g.is_invertible() {
            return finish(a, g, ConjugatorTrace::Perturbation { t, intertwiner_dimension: dim });
        }
    }

    // Small fields: walk the whole intertwiner space.
    let Field::Prime(q) = field else {
        return Err(Error::SearchExhausted(format!("perturbation failed over {field}")));
    };
    let total = q
        .checked_pow(dim as u32)
        .filter(|&t| t <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::SearchExhausted(format!("intertwiner space of size {q}^{dim}")))?;
    for idx in 1..total {
        let mut k = idx;
        let mut g = Mat::zeros(&field, n, n);
        for s in &space {
            let c = k % q;
            k /= q;
            if c != 0 {
                g = &g + &s.scale(&field.from_i64(c as i64));
            }
        }
        if !g.is_symmetric() && g.is_invertible() {
            return finish(
                a,
                g,
                ConjugatorTrace::Enumeration { intertwiner_dimension: dim, candidates_checked: idx },
            );
        }
    }
    Err(Error::SearchExhausted("no invertible non-symmetric conjugator found".into()))
}

fn finish(a: &Mat, g: Mat, trace: ConjugatorTrace) -> Result<TransposeCertificate> {
    let cert = TransposeCertificate::from_parts(a.clone(), g.normalize_first_nonzero(), Some(trace))?;
    if !(cert.checks.conjugates && cert.checks.invertible) || cert.symmetric {
        return Err(Error::InternalAssertion("asymmetric witness fails verification".into()));
    }
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub valid: bool,
    pub reasons: Vec<String>,
}

impl Verification {
    pub(crate) fn from_reasons(reasons: Vec<String>) -> Verification {
        Verification { valid: reasons.is_empty(), reasons }
    }
}

/// Recomputes every check from scratch. Valid iff the stored flags are all
/// accurate and `g` is an invertible conjugator.
pub fn verify_transpose_certificate(cert: &TransposeCertificate) -> Verification {
    let checks = match compute_checks(&cert.a, &cert.g) {
        Ok(c) => c,
        Err(e) => return Verification::from_reasons(vec![format!("malformed certificate: {e}")]),
    };
    let mut reasons = Vec::new();
    if !checks.conjugates {
        reasons.push("g a != a^T g".to_string());
    }
    if !checks.invertible {
        reasons.push("g is singular".to_string());
    }
    let flags = [
        ("conjugates", cert.checks.conjugates, checks.conjugates),
        ("invertible", cert.checks.invertible, checks.invertible),
        ("symmetry", cert.checks.symmetry, checks.symmetry),
        ("symmetric", cert.symmetric, checks.symmetry),
    ];
    for (name, stored, actual) in flags {
        if stored != actual {
            reasons.push(format!("stored flag {name}={stored} but recomputed {actual}"));
        }
    }
    Verification::from_reasons(reasons)
}
