//! Conjugators `g` with `g a g^-1 = theta(a)` and `theta(g) = eps g` in a
//! central simple algebra with involution.
//!
//! The conditions `x a = theta(a) x` and `theta(x) = eps x` are `F`-linear in
//! `x`. On a basis `s_1, ..., s_m` of their solution space the reduced norm
//! `f(l) = Nrd(sum l_i s_i)` is a polynomial of total degree at most the
//! reduced degree `d` which does not vanish identically, so it has a
//! non-root on the grid `{0, ..., d}^m`. Grid points are tried shell by
//! shell in increasing max-norm; inside a shell the first coordinate varies
//! fastest.

use super::involution::{epsilon_sign, InvolutionSpec, Sign};
use super::{Algebra, CsaElement};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Mat;
use crate::transpose::Verification;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CsaChecks {
    /// `g a = theta(a) g`
    pub conjugates: bool,
    /// `Nrd(g) != 0`
    pub invertible: bool,
    /// `theta(g) = eps g`
    pub sign: bool,
}

/// Where on the search grid the conjugator was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridTrace {
    pub solution_dimension: usize,
    pub grid_point: Vec<u64>,
    pub reduced_norm: FieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsaCertificate {
    pub involution: InvolutionSpec,
    pub a: CsaElement,
    pub g: CsaElement,
    pub epsilon: Sign,
    pub checks: CsaChecks,
    pub trace: Option<GridTrace>,
}

impl CsaCertificate {
    /// Computes the checks for `(theta, a, g)` with `eps = eps(theta)`.
    pub fn from_parts(
        involution: InvolutionSpec,
        a: CsaElement,
        g: CsaElement,
        trace: Option<GridTrace>,
    ) -> Result<CsaCertificate> {
        let epsilon = involution.epsilon();
        let checks = compute_checks(&involution, &a, &g, epsilon)?;
        Ok(CsaCertificate { involution, a, g, epsilon, checks, trace })
    }
}

fn compute_checks(theta: &InvolutionSpec, a: &CsaElement, g: &CsaElement, eps: Sign) -> Result<CsaChecks> {
    let alg = theta.algebra();
    if !alg.contains(a) || !alg.contains(g) {
        return Err(Error::AlgebraMismatch);
    }
    let ta = theta.apply(a)?;
    let tg = theta.apply(g)?;
    Ok(CsaChecks {
        conjugates: g.try_mul(a)? == ta.try_mul(g)?,
        invertible: !g.reduced_norm()?.is_zero(),
        sign: tg == g.scale(&eps.in_field(alg.field())),
    })
}

/// Basis of `{x : x a = theta(a) x, theta(x) = eps x}`.
fn solution_space(theta: &InvolutionSpec, a: &CsaElement) -> Result<Vec<CsaElement>> {
    let alg = theta.algebra();
    let field = alg.field().clone();
    let dim = alg.dim();
    let ta = theta.apply(a)?;
    let intertwine = alg.linear_map_matrix(|x| x.try_mul(a)?.try_sub(&ta.try_mul(x)?))?;
    let eps = theta.epsilon().in_field(&field);
    let symmetry = &theta.linear_map().matrix - &Mat::scalar(dim, &eps);
    let mut rows = intertwine.to_rows();
    rows.extend(symmetry.to_rows());
    let system = Mat::from_rows(&field, rows)?;
    system.kernel().iter().map(|v| alg.from_coords(v)).collect()
}

/// Grid points of `{0, ..., r}^m` with max-norm exactly `r`, first
/// coordinate varying fastest.
struct Shell {
    m: usize,
    r: u64,
    current: Option<Vec<u64>>,
}

impl Shell {
    fn new(m: usize, r: u64) -> Shell {
        Shell { m, r, current: Some(vec![0; m]) }
    }

    fn advance(&mut self) {
        let Some(v) = self.current.as_mut() else { return };
        for c in v.iter_mut() {
            if *c < self.r {
                *c += 1;
                return;
            }
            *c = 0;
        }
        self.current = None;
    }
}

impl Iterator for Shell {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        loop {
            let v = self.current.clone()?;
            self.advance();
            if self.m > 0 && v.iter().copied().max() == Some(self.r) {
                return Some(v);
            }
        }
    }
}

/// An invertible `g` with `g a g^-1 = theta(a)` and `theta(g) = eps(theta) g`,
/// normalized so its first nonzero coordinate is 1. Only the rationals are
/// supported as base field.
pub fn theorem_conjugator(theta: &InvolutionSpec, a: &CsaElement) -> Result<CsaCertificate> {
    let alg = theta.algebra();
    if !alg.contains(a) {
        return Err(Error::AlgebraMismatch);
    }
    if *alg.field() != Field::Rationals {
        return Err(Error::UnsupportedField(alg.field().to_string()));
    }
    let field = alg.field().clone();
    let basis = solution_space(theta, a)?;
    if basis.is_empty() {
        return Err(Error::EmptySolutionSpace);
    }
    let m = basis.len();
    let d = alg.reduced_degree() as u64;
    for r in 1..=d {
        for point in Shell::new(m, r) {
            let mut x = alg.zero();
            for (s, &l) in basis.iter().zip(&point) {
                if l != 0 {
                    x = x.try_add(&s.scale(&field.from_i64(l as i64)))?;
                }
            }
            if x.reduced_norm()?.is_zero() {
                continue;
            }
            let g = normalize(&x, alg);
            let trace = GridTrace { solution_dimension: m, grid_point: point, reduced_norm: g.reduced_norm()? };
            let cert = CsaCertificate::from_parts(theta.clone(), a.clone(), g, Some(trace))?;
            let c = cert.checks;
            if !(c.conjugates && c.invertible && c.sign) {
                return Err(Error::InternalAssertion("grid conjugator fails verification".into()));
            }
            return Ok(cert);
        }
    }
    Err(Error::GridExhausted)
}

fn normalize(x: &CsaElement, alg: &Algebra) -> CsaElement {
    let coords = x.coords();
    match coords.iter().find(|c| !c.is_zero()) {
        Some(lead) => x.scale(&lead.inv().expect("nonzero")),
        None => alg.zero(),
    }
}

/// Recomputes every check, including the sign of the involution, from
/// scratch. Valid iff the stored flags and sign are accurate and all checks
/// hold.
pub fn verify_csa_certificate(cert: &CsaCertificate) -> Verification {
    let eps = match epsilon_sign(&cert.involution) {
        Ok(e) => e,
        Err(e) => return Verification::from_reasons(vec![format!("cannot determine sign: {e}")]),
    };
    let checks = match compute_checks(&cert.involution, &cert.a, &cert.g, eps) {
        Ok(c) => c,
        Err(e) => return Verification::from_reasons(vec![format!("malformed certificate: {e}")]),
    };
    let mut reasons = Vec::new();
    if cert.epsilon != eps {
        reasons.push(format!("stored epsilon {} but involution has sign {eps}", cert.epsilon));
    }
    if !checks.conjugates {
        reasons.push("g a != theta(a) g".to_string());
    }
    if !checks.invertible {
        reasons.push("g has reduced norm 0".to_string());
    }
    if !checks.sign {
        reasons.push("theta(g) != eps g".to_string());
    }
    let flags = [
        ("conjugates", cert.checks.conjugates, checks.conjugates),
        ("invertible", cert.checks.invertible, checks.invertible),
        ("sign", cert.checks.sign, checks.sign),
    ];
    for (name, stored, actual) in flags {
        if stored != actual {
            reasons.push(format!("stored flag {name}={stored} but recomputed {actual}"));
        }
    }
    Verification::from_reasons(reasons)
}
