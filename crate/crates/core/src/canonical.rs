//! Cyclic structure of `F^n` as an `F[X]`-module through `X v = a v`:
//! cyclic vectors, the invariant-factor (Frobenius) decomposition with an
//! explicit transform, and primary components over prime fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{Mat, Vector};
use crate::poly::{companion_matrix, coprime_lcm_split, factor_over_prime_field_with, Poly};
use crate::SearchConfig;

/// `h a h^-1 = block_matrix = blockdiag(C(d_1), ..., C(d_r))` with
/// `d_1 | d_2 | ... | d_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDecomposition {
    pub invariant_factors: Vec<Poly>,
    pub transform: Mat,
    pub block_matrix: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryComponent {
    /// Monic irreducible factor of the minimal polynomial.
    pub prime: Poly,
    /// Multiplicity of `prime` in the minimal polynomial.
    pub multiplicity: usize,
    /// Basis of `ker prime(a)^multiplicity`.
    pub basis: Vec<Vector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sweep {
    Forward,
    Reverse,
}

fn unit(field: &Field, n: usize, i: usize) -> Vector {
    let mut e = vec![field.zero(); n];
    e[i] = field.one();
    e
}

/// Exhaustive enumeration is only attempted when it stays this small.
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
const RANDOM_ATTEMPTS: usize = 64;

/// Finds a vector whose annihilator is the minimal polynomial `mu`.
///
/// Candidates: standard basis vectors, sums of two of them, seeded
/// pseudorandom combinations with coefficients in `0..=deg mu`, exhaustive
/// enumeration over tiny fields, and finally a deterministic merge of
/// standard-basis vectors with coprime annihilator parts, which always
/// succeeds.
fn max_order_vector(a: &Mat, mu: &Poly, sweep: Sweep, cfg: &SearchConfig) -> Result<Vector> {
    let field = a.field().clone();
    let n = a.rows();
    let d = mu.degree().unwrap_or(0);
    let hits = |v: &Vector| -> Result<bool> { Ok(a.vector_annihilator(v)?.degree() == Some(d)) };

    let order: Vec<usize> = match sweep {
        Sweep::Forward => (0..n).collect(),
        Sweep::Reverse => (0..n).rev().collect(),
    };
    for &i in &order {
        let e = unit(&field, n, i);
        if hits(&e)? {
            return Ok(e);
        }
    }
    for (x, &i) in order.iter().enumerate() {
        for &j in &order[x + 1..] {
            let mut v = unit(&field, n, i);
            v[j] = field.one();
            if hits(&v)? {
                return Ok(v);
            }
        }
    }

    let small_field = matches!(field, Field::Prime(2) | Field::Prime(3)) && n <= 8;
    if !cfg.deterministic {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..RANDOM_ATTEMPTS {
            let v: Vector = (0..n)
                .map(|_| field.from_i64(rng.gen_range(0..=d as i64)))
                .collect();
            if hits(&v)? {
                return Ok(v);
            }
        }
    }
    if small_field {
        let q = field.characteristic();
        if q.checked_pow(n as u32).is_some_and(|t| t <= EXHAUSTIVE_LIMIT) {
            for idx in 1..q.pow(n as u32) {
                let mut k = idx;
                let v: Vector = (0..n)
                    .map(|_| {
                        let c = field.from_i64((k % q) as i64);
                        k /= q;
                        c
                    })
                    .collect();
                if hits(&v)? {
                    return Ok(v);
                }
            }
        }
    }
    merge_annihilators(a, &order)
}

/// Combines basis vectors so that annihilators multiply up to the lcm: if
/// `v` has annihilator `f` and `w` has `g`, split `lcm(f, g) = f1 g1` with
/// coprime `f1 | f`, `g1 | g`; then `(f/f1)(a) v + (g/g1)(a) w` has
/// annihilator `f1 g1`.
fn merge_annihilators(a: &Mat, order: &[usize]) -> Result<Vector> {
    let field = a.field().clone();
    let n = a.rows();
    let mut v = unit(&field, n, order[0]);
    let mut f = a.vector_annihilator(&v)?;
    for &i in &order[1..] {
        let w = unit(&field, n, i);
        let g = a.vector_annihilator(&w)?;
        let (f1, g1) = coprime_lcm_split(&f, &g)?;
        let v1 = f.exact_div(&f1)?.eval_matrix(a)?.mul_vec(&v)?;
        let w1 = g.exact_div(&g1)?.eval_matrix(a)?.mul_vec(&w)?;
        v = v1.iter().zip(&w1).map(|(x, y)| x + y).collect();
        f = &f1 * &g1;
    }
    Ok(v)
}

/// A vector whose Krylov matrix `[v, a v, ..., a^(n-1) v]` is invertible, or
/// `None` when `a` is not cyclic.
pub fn cyclic_vector(a: &Mat) -> Result<Option<Vector>> {
    cyclic_vector_with(a, &SearchConfig::default())
}

pub fn cyclic_vector_with(a: &Mat, cfg: &SearchConfig) -> Result<Option<Vector>> {
    let n = a.require_square()?;
    let mu = a.minpoly()?;
    if mu.degree() != Some(n) {
        return Ok(None);
    }
    let v = max_order_vector(a, &mu, Sweep::Forward, cfg)?;
    if !a.krylov(&v, n)?.is_invertible() {
        return Err(Error::InternalAssertion("cyclic vector search returned a non-generator".into()));
    }
    Ok(Some(v))
}

pub fn frobenius_form(a: &Mat) -> Result<FrobeniusDecomposition> {
    frobenius_form_with(a, &SearchConfig::default())
}

pub fn frobenius_form_with(a: &Mat, cfg: &SearchConfig) -> Result<FrobeniusDecomposition> {
    let n = a.require_square()?;
    let field = a.field().clone();
    let (invariant_factors, basis) = decompose(a, cfg)?;
    let transform = basis.inverse()?;
    let blocks = invariant_factors
        .iter()
        .map(companion_matrix)
        .collect::<Result<Vec<_>>>()?;
    let block_matrix = Mat::block_diag(&field, &blocks);
    debug_assert_eq!(block_matrix.rows(), n);
    // a P = P B  <=>  h a h^-1 = B with h = P^-1
    if (a * &basis) != (&basis * &block_matrix) {
        return Err(Error::InternalAssertion("Frobenius transform does not conjugate".into()));
    }
    for w in invariant_factors.windows(2) {
        if !w[0].divides(&w[1])? {
            return Err(Error::InternalAssertion("invariant factors do not form a chain".into()));
        }
    }
    Ok(FrobeniusDecomposition { invariant_factors, transform, block_matrix })
}

/// Returns the invariant factors (ascending divisibility) and a basis matrix
/// `P` with `a P = P blockdiag(companions)`.
fn decompose(a: &Mat, cfg: &SearchConfig) -> Result<(Vec<Poly>, Mat)> {
    let field = a.field().clone();
    let n = a.rows();
    let mu = a.minpoly()?;
    let d = mu.degree().expect("minimal polynomial is nonzero");
    let v = max_order_vector(a, &mu, Sweep::Reverse, cfg)?;
    let krylov = a.krylov(&v, d)?;
    if d == n {
        return Ok((vec![mu], krylov));
    }

    // Functional phi with phi(a^i v) = 0 for i < d-1 and phi(a^(d-1) v) = 1.
    // The common kernel of phi, phi a, ..., phi a^(d-1) is an a-stable
    // complement to the cyclic subspace generated by v.
    let phi = krylov
        .transpose()
        .solve(&unit(&field, d, d - 1))?
        .ok_or_else(|| Error::InternalAssertion("Krylov basis is rank deficient".into()))?;
    let functionals = a.transpose().krylov(&phi, d)?.transpose();
    let complement = functionals.kernel();
    if complement.len() != n - d {
        return Err(Error::InternalAssertion(format!(
            "complement has dimension {} instead of {}",
            complement.len(),
            n - d
        )));
    }
    let b = Mat::from_columns(&field, n, &complement)?;
    let ab = a * &b;
    let mut restricted_cols = Vec::with_capacity(n - d);
    for j in 0..n - d {
        let col = b
            .solve(&ab.column(j))?
            .ok_or_else(|| Error::InternalAssertion("complement is not a-stable".into()))?;
        restricted_cols.push(col);
    }
    let restricted = Mat::from_columns(&field, n - d, &restricted_cols)?;
    let (mut factors, sub_basis) = decompose(&restricted, cfg)?;
    let lifted = &b * &sub_basis;
    let mut cols: Vec<Vector> = (0..lifted.cols()).map(|j| lifted.column(j)).collect();
    cols.extend((0..d).map(|j| krylov.column(j)));
    factors.push(mu);
    Ok((factors, Mat::from_columns(&field, n, &cols)?))
}

/// `minpoly(a) = charpoly(a)`, cross-checked against the number of
/// invariant factors.
pub fn is_cyclic(a: &Mat) -> Result<bool> {
    let n = a.require_square()?;
    let by_poly = a.minpoly()?.degree() == Some(n);
    let by_frobenius = frobenius_form(a)?.invariant_factors.len() == 1;
    if by_poly != by_frobenius {
        return Err(Error::InternalAssertion(
            "minimal/characteristic polynomial test disagrees with the Frobenius form".into(),
        ));
    }
    Ok(by_poly)
}

/// Primary components `ker p(a)^e` for each irreducible `p^e || minpoly(a)`.
/// Only prime fields are supported since this needs factorization.
pub fn primary_decomposition(a: &Mat) -> Result<Vec<PrimaryComponent>> {
    primary_decomposition_with(a, &SearchConfig::default())
}

pub fn primary_decomposition_with(a: &Mat, cfg: &SearchConfig) -> Result<Vec<PrimaryComponent>> {
    a.require_square()?;
    if !matches!(a.field(), Field::Prime(_)) {
        return Err(Error::UnsupportedField(a.field().to_string()));
    }
    let mu = a.minpoly()?;
    let mut out = Vec::new();
    for (prime, multiplicity) in factor_over_prime_field_with(&mu, cfg)? {
        let kernel = prime.pow(multiplicity).eval_matrix(a)?.kernel();
        out.push(PrimaryComponent { prime, multiplicity, basis: kernel });
    }
    Ok(out)
}
