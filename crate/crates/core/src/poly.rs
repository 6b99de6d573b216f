//! Univariate polynomials over an exact field.
//!
//! Coefficients are stored in ascending degree order and kept trimmed, so the
//! zero polynomial is the empty list and every other polynomial has a nonzero
//! leading coefficient.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Mat;
use crate::SearchConfig;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &Field, coeffs: Vec<FieldElement>) -> Result<Poly> {
        if coeffs.iter().any(|c| c.field() != *field) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(Poly::from_trusted(field.clone(), coeffs))
    }

    fn from_trusted(field: Field, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_trusted(field.clone(), coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::from_trusted(c.field(), vec![c])
    }

    /// The indeterminate `X`.
    pub fn x(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![field.zero(), field.one()] }
    }

    /// `X - c`.
    pub fn linear(c: &FieldElement) -> Poly {
        let field = c.field();
        Poly { coeffs: vec![-c, field.one()], field }
    }

    pub fn monomial(c: FieldElement, degree: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); degree];
        coeffs.push(c);
        Poly::from_trusted(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Ok(Poly::from_trusted(self.field.clone(), coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Ok(Poly::from_trusted(self.field.clone(), coeffs))
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::from_trusted(self.field.clone(), self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((
            Poly::from_trusted(self.field.clone(), quot),
            Poly::from_trusted(self.field.clone(), rem),
        ))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Exact quotient; errors if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(divisor)?;
        if !r.is_zero() {
            return Err(Error::InternalAssertion(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.from_i64(i as i64) * c)
            .collect();
        Poly::from_trusted(self.field.clone(), coeffs)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// `f(a)` by Horner's rule.
    pub fn eval_matrix(&self, a: &Mat) -> Result<Mat> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if *a.field() != self.field {
            return Err(Error::DescriptorMismatch);
        }
        let n = a.rows();
        let mut acc = Mat::zeros(&self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + &Mat::scalar(n, c);
        }
        Ok(acc)
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.field).rem(modulus)?;
        let base = self.rem(modulus)?;
        for bit in (0..exp.bits()).rev() {
            acc = (&acc * &acc).rem(modulus)?;
            if exp.bit(bit) {
                acc = (&acc * &base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, exp: usize) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Deterministic total order: degree first, then ascending coefficients.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| {
                for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                    let o = cmp_elements(a, b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

pub(crate) fn cmp_elements(a: &FieldElement, b: &FieldElement) -> Ordering {
    match (a, b) {
        (FieldElement::Rational(x), FieldElement::Rational(y)) => x.cmp(y),
        (FieldElement::Residue { value: x, .. }, FieldElement::Residue { value: y, .. }) => {
            x.cmp(y)
        }
        (
            FieldElement::Quadratic { re: r0, im: i0, .. },
            FieldElement::Quadratic { re: r1, im: i1, .. },
        ) => cmp_elements(r0, r1).then_with(|| cmp_elements(i0, i1)),
        _ => Ordering::Equal,
    }
}

/// Monic gcd; `gcd(0, 0)` is reported as zero.
pub fn gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    f.check(g)?;
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// Monic lcm of nonzero polynomials.
pub fn lcm(f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() || g.is_zero() {
        return Ok(Poly::zero(f.field()));
    }
    let d = gcd(f, g)?;
    Ok(f.try_mul(&g.exact_div(&d)?)?.monic())
}

/// Splits `lcm(f, g)` into coprime factors `f1 | f`, `g1 | g` with
/// `f1 * g1 = lcm(f, g)`. Both inputs must be nonzero.
pub fn coprime_lcm_split(f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    let f = f.monic();
    let g = g.monic();
    // primes where g has strictly larger multiplicity than f
    let g_excess = g.exact_div(&gcd(&f, &g)?)?;
    let f1 = strip_primes(&f, &g_excess)?;
    let g1 = g.exact_div(&strip_primes(&g, &g_excess)?)?;
    Ok((f1, g1))
}

/// Removes from `f` every factor sharing a prime with `primes`.
fn strip_primes(f: &Poly, primes: &Poly) -> Result<Poly> {
    let mut out = f.clone();
    loop {
        let d = gcd(&out, primes)?;
        if d.degree().unwrap_or(0) == 0 {
            return Ok(out.monic());
        }
        out = out.exact_div(&d)?;
    }
}

/// `h` with `h^p = f` for `f` a polynomial in `X^p` over `F_p`.
fn pth_root(f: &Poly, p: usize) -> Poly {
    let coeffs = f.coeffs.iter().step_by(p).cloned().collect();
    Poly::from_trusted(f.field.clone(), coeffs)
}

/// Standard companion matrix: ones on the subdiagonal and the negated
/// low-order coefficients in the last column.
pub fn companion_matrix(f: &Poly) -> Result<Mat> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = f.degree().expect("monic implies nonzero");
    if d == 0 {
        return Err(Error::NotMonic);
    }
    let mut c = Mat::zeros(&f.field, d, d);
    for i in 1..d {
        c.set(i, i - 1, f.field.one());
    }
    for i in 0..d {
        c.set(i, d - 1, -&f.coeffs[i]);
    }
    Ok(c)
}

/// Complete factorization over a prime field into monic irreducibles with
/// multiplicities. The leading coefficient is dropped; sort order is
/// [`Poly::canonical_cmp`].
pub fn factor_over_prime_field(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    factor_over_prime_field_with(f, &SearchConfig::default())
}

pub fn factor_over_prime_field_with(f: &Poly, cfg: &SearchConfig) -> Result<Vec<(Poly, usize)>> {
    let p = match f.field() {
        Field::Prime(p) => *p,
        other => return Err(Error::UnsupportedField(other.to_string())),
    };
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic(), p)? {
        for (block, deg) in distinct_degree(&part, p)? {
            for irr in equal_degree(&block, deg, p, cfg, &mut rng)? {
                match out.iter_mut().find(|(g, _)| *g == irr) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((irr, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    for (g, _) in &out {
        if !is_irreducible(g)? {
            return Err(Error::InternalAssertion(format!("factor {g} is reducible")));
        }
    }
    Ok(out)
}

/// Squarefree parts with multiplicities for a monic `f` over `F_p`.
fn squarefree_decomposition(f: &Poly, p: u64) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let mut c = gcd(f, &f.derivative())?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = gcd(&w, &c)?;
        let z = w.exact_div(&y)?;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w)?;
    }
    if !c.is_one() {
        let root = pth_root(&c, p as usize);
        for (g, m) in squarefree_decomposition(&root, p)? {
            out.push((g, m * p as usize));
        }
    }
    Ok(out)
}

/// `X^(p^k) mod f` computed by repeated p-th powers.
fn frobenius_power(x_pow: &Poly, p: u64, f: &Poly) -> Result<Poly> {
    x_pow.pow_mod(&BigUint::from(p), f)
}

/// Groups the irreducible factors of a squarefree monic `f` by degree.
fn distinct_degree(f: &Poly, p: u64) -> Result<Vec<(Poly, usize)>> {
    let field = f.field().clone();
    let x = Poly::x(&field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = frobenius_power(&h, p, &rest)?;
        let d = gcd(&(&h - &x), &rest)?;
        if !d.is_one() {
            rest = rest.exact_div(&d)?;
            h = h.rem(&rest)?;
            out.push((d, i));
        }
        i += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap();
        out.push((rest, deg));
    }
    Ok(out)
}

/// Splits a product of distinct monic irreducibles of degree `deg`.
fn equal_degree(
    f: &Poly,
    deg: usize,
    p: u64,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Poly>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == deg {
        return Ok(vec![f.clone()]);
    }
    let exhaustive = p <= 7;
    if !(cfg.deterministic && exhaustive) {
        const ATTEMPTS: usize = 256;
        for _ in 0..ATTEMPTS {
            if let Some(d) = random_split(f, deg, p, rng)? {
                let mut out = equal_degree(&d, deg, p, cfg, rng)?;
                out.extend(equal_degree(&f.exact_div(&d)?, deg, p, cfg, rng)?);
                return Ok(out);
            }
        }
    }
    if exhaustive {
        return exhaustive_split(f, deg, p);
    }
    Err(Error::SearchExhausted(format!(
        "equal-degree splitting of {f} failed"
    )))
}

fn random_split(f: &Poly, deg: usize, p: u64, rng: &mut ChaCha8Rng) -> Result<Option<Poly>> {
    let field = f.field().clone();
    let n = f.degree().unwrap();
    let coeffs: Vec<FieldElement> =
        (0..n).map(|_| field.from_i64(rng.gen_range(0..p) as i64)).collect();
    let a = Poly::from_trusted(field.clone(), coeffs);
    if a.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    let b = if p == 2 {
        // trace map a + a^2 + ... + a^(2^(deg-1))
        let mut term = a.rem(f)?;
        let mut acc = term.clone();
        for _ in 1..deg {
            term = (&term * &term).rem(f)?;
            acc = &acc + &term;
        }
        acc
    } else {
        let q = BigUint::from(p).pow(deg as u32);
        let e = (q - BigUint::one()) >> 1;
        &a.pow_mod(&e, f)? - &Poly::one(&field)
    };
    let d = gcd(&b, f)?;
    let dd = d.degree().unwrap_or(0);
    Ok((dd > 0 && dd < n).then_some(d))
}

/// Enumerates monic polynomials of degree `deg` and peels off divisors.
fn exhaustive_split(f: &Poly, deg: usize, p: u64) -> Result<Vec<Poly>> {
    let field = f.field().clone();
    let mut rest = f.clone();
    let mut out = Vec::new();
    let total = (p as usize).pow(deg as u32);
    for idx in 0..total {
        if rest.degree().unwrap_or(0) == deg {
            out.push(rest.clone());
            rest = Poly::one(&field);
            break;
        }
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let mut k = idx;
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push(field.from_i64((k % p as usize) as i64));
            k /= p as usize;
        }
        coeffs.push(field.one());
        let cand = Poly::from_trusted(field.clone(), coeffs);
        let (q, r) = rest.divmod(&cand)?;
        if r.is_zero() {
            out.push(cand);
            rest = q;
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::InternalAssertion(format!("exhaustive split left {rest}")));
    }
    Ok(out)
}

/// Rabin's test: `f | X^(p^d) - X` and `gcd(X^(p^(d/r)) - X, f) = 1` for each
/// prime `r | d`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let p = match f.field() {
        Field::Prime(p) => *p,
        other => return Err(Error::UnsupportedField(other.to_string())),
    };
    let d = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(d) => d,
    };
    let f = f.monic();
    let x = Poly::x(f.field());
    let mut powers = Vec::with_capacity(d + 1);
    let mut h = x.rem(&f)?;
    powers.push(h.clone());
    for _ in 0..d {
        h = frobenius_power(&h, p, &f)?;
        powers.push(h.clone());
    }
    // powers[k] = X^(p^k) mod f
    if powers[d] != x.rem(&f)? {
        return Ok(false);
    }
    for r in prime_divisors(d) {
        let g = gcd(&(&powers[d / r] - &x), &f)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                self.$checked(rhs).expect(concat!("Poly::", stringify!($method)))
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_trusted(self.field.clone(), self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "({c})*X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "({c})*X^{i}")?,
            }
        }
        Ok(())
    }
}
