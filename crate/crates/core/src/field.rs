//! Exact scalar fields: the rationals, prime fields and one-step quadratic
//! extensions `F(sqrt(alpha))`.
//!
//! Elements carry enough of their field to do arithmetic on their own, so the
//! usual operator traits are available. Operators panic on mixed fields; the
//! `try_*` methods report [`Error::DescriptorMismatch`] instead.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Descriptor of an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    /// `F_p`; the modulus is prime (checked by [`Field::prime`]).
    Prime(u64),
    Quadratic(Arc<QuadraticExt>),
}

/// `K = base(sqrt(alpha))` with `alpha` a non-square of `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticExt {
    base: Field,
    alpha: FieldElement,
}

impl QuadraticExt {
    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    /// Always normalized: positive denominator, coprime parts.
    Rational(BigRational),
    Residue {
        value: u64,
        modulus: u64,
    },
    /// `re + im * sqrt(alpha)`.
    Quadratic {
        ext: Arc<QuadraticExt>,
        re: Box<FieldElement>,
        im: Box<FieldElement>,
    },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let m = p as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Builds `base(sqrt(alpha))`. `alpha` must be a nonzero non-square and
    /// `base` must itself be the rationals or a prime field.
    pub fn quadratic(base: &Field, alpha: FieldElement) -> Result<Field> {
        if matches!(base, Field::Quadratic(_)) {
            return Err(Error::InvalidField(
                "quadratic extensions are only supported one level deep".into(),
            ));
        }
        if alpha.field() != *base {
            return Err(Error::DescriptorMismatch);
        }
        if alpha.is_zero() {
            return Err(Error::InvalidField("alpha must be nonzero".into()));
        }
        if is_square(base, &alpha)? {
            return Err(Error::InvalidField(format!(
                "{alpha} is a square in {base}"
            )));
        }
        Ok(Field::Quadratic(Arc::new(QuadraticExt {
            base: base.clone(),
            alpha,
        })))
    }

    /// 0 for the rationals and their extensions.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
            Field::Quadratic(ext) => ext.base.characteristic(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Number of elements of a finite field; `None` for infinite fields or
    /// when the count overflows.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
            Field::Quadratic(ext) => ext.base.order().and_then(|q| q.checked_mul(q)),
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    /// Image of an integer under the canonical ring map `Z -> F`.
    pub fn from_i64(&self, n: i64) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(n.into())),
            Field::Prime(p) => FieldElement::Residue {
                value: (n as i128).rem_euclid(*p as i128) as u64,
                modulus: *p,
            },
            Field::Quadratic(ext) => FieldElement::Quadratic {
                ext: ext.clone(),
                re: Box::new(ext.base.from_i64(n)),
                im: Box::new(ext.base.zero()),
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                FieldElement::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: *p,
                }
            }
            Field::Quadratic(ext) => FieldElement::Quadratic {
                ext: ext.clone(),
                re: Box::new(ext.base.from_bigint(n)),
                im: Box::new(ext.base.zero()),
            },
        }
    }

    /// `num / den` mapped into the field.
    pub fn from_fraction(&self, num: i64, den: i64) -> Result<FieldElement> {
        let d = self.from_i64(den);
        self.from_i64(num).try_div(&d)
    }

    /// Embeds an element of the base field into this extension. Identity on
    /// elements already in `self`.
    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() == *self {
            return Ok(x.clone());
        }
        match self {
            Field::Quadratic(ext) if x.field() == ext.base => Ok(FieldElement::Quadratic {
                ext: ext.clone(),
                re: Box::new(x.clone()),
                im: Box::new(ext.base.zero()),
            }),
            _ => Err(Error::DescriptorMismatch),
        }
    }

    /// The generator `sqrt(alpha)` of a quadratic extension.
    pub fn sqrt_alpha(&self) -> Option<FieldElement> {
        match self {
            Field::Quadratic(ext) => Some(FieldElement::Quadratic {
                ext: ext.clone(),
                re: Box::new(ext.base.zero()),
                im: Box::new(ext.base.one()),
            }),
            _ => None,
        }
    }

    /// All elements of a prime field in residue order.
    pub fn prime_elements(&self) -> Option<impl Iterator<Item = FieldElement>> {
        match self {
            Field::Prime(p) => {
                let p = *p;
                Some((0..p).map(move |value| FieldElement::Residue { value, modulus: p }))
            }
            _ => None,
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.field() == *self
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::Quadratic(ext) => write!(f, "{}(sqrt({}))", ext.base, ext.alpha),
        }
    }
}

/// Decides whether `x` is a square in `field` (rationals or prime fields).
pub fn is_square(field: &Field, x: &FieldElement) -> Result<bool> {
    if x.field() != *field {
        return Err(Error::DescriptorMismatch);
    }
    match x {
        FieldElement::Rational(q) => {
            if q.is_negative() {
                return Ok(false);
            }
            Ok(is_perfect_square(q.numer()) && is_perfect_square(q.denom()))
        }
        FieldElement::Residue { value, modulus } => {
            if *modulus == 2 || *value == 0 {
                return Ok(true);
            }
            Ok(mod_pow(*value, (modulus - 1) / 2, *modulus) == 1)
        }
        FieldElement::Quadratic { .. } => Err(Error::UnsupportedField(field.to_string())),
    }
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

impl FieldElement {
    pub fn rational(num: i64, den: i64) -> Result<FieldElement> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement::Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rationals,
            FieldElement::Residue { modulus, .. } => Field::Prime(*modulus),
            FieldElement::Quadratic { ext, .. } => Field::Quadratic(ext.clone()),
        }
    }

    fn same_field(&self, other: &FieldElement) -> bool {
        match (self, other) {
            (FieldElement::Rational(_), FieldElement::Rational(_)) => true,
            (FieldElement::Residue { modulus: p, .. }, FieldElement::Residue { modulus: q, .. }) => {
                p == q
            }
            (FieldElement::Quadratic { ext: a, .. }, FieldElement::Quadratic { ext: b, .. }) => {
                Arc::ptr_eq(a, b) || a == b
            }
            _ => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Residue { value, .. } => *value == 0,
            FieldElement::Quadratic { re, im, .. } => re.is_zero() && im.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Residue { value, .. } => *value == 1,
            FieldElement::Quadratic { re, im, .. } => re.is_one() && im.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// `(re, im)` of a quadratic-extension element.
    pub fn quadratic_parts(&self) -> Option<(&FieldElement, &FieldElement)> {
        match self {
            FieldElement::Quadratic { re, im, .. } => Some((re, im)),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        if !self.same_field(other) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (
                FieldElement::Residue { value: a, modulus },
                FieldElement::Residue { value: b, .. },
            ) => FieldElement::Residue {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            (
                FieldElement::Quadratic { ext, re: a0, im: a1 },
                FieldElement::Quadratic { re: b0, im: b1, .. },
            ) => FieldElement::Quadratic {
                ext: ext.clone(),
                re: Box::new(a0.try_add(b0)?),
                im: Box::new(a1.try_add(b1)?),
            },
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        if !self.same_field(other) {
            return Err(Error::DescriptorMismatch);
        }
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        if !self.same_field(other) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (
                FieldElement::Residue { value: a, modulus },
                FieldElement::Residue { value: b, .. },
            ) => FieldElement::Residue {
                value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            (
                FieldElement::Quadratic { ext, re: a0, im: a1 },
                FieldElement::Quadratic { re: b0, im: b1, .. },
            ) => {
                let re = &(&**a0 * &**b0) + &(&ext.alpha * &(&**a1 * &**b1));
                let im = &(&**a0 * &**b1) + &(&**a1 * &**b0);
                FieldElement::Quadratic {
                    ext: ext.clone(),
                    re: Box::new(re),
                    im: Box::new(im),
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(a) => FieldElement::Rational(a.recip()),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            FieldElement::Quadratic { ext, re, im } => {
                // (re - im s) / (re^2 - alpha im^2); the norm is nonzero since
                // alpha is not a square.
                let norm = &(&**re * &**re) - &(&ext.alpha * &(&**im * &**im));
                let ninv = norm.inv()?;
                FieldElement::Quadratic {
                    ext: ext.clone(),
                    re: Box::new(&**re * &ninv),
                    im: Box::new(-&(&**im * &ninv)),
                }
            }
        })
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        if !self.same_field(other) {
            return Err(Error::DescriptorMismatch);
        }
        self.try_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            FieldElement::Quadratic { ext, re, im } => FieldElement::Quadratic {
                ext: ext.clone(),
                re: Box::new(re.neg_ref()),
                im: Box::new(im.neg_ref()),
            },
        }
    }

    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).expect(concat!("FieldElement::", stringify!($method)))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Residue { value, .. } => write!(f, "{value}"),
            FieldElement::Quadratic { ext, re, im } => {
                write!(f, "{re} + {im}*sqrt({})", ext.alpha)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::rational(n, d).unwrap()
    }

    #[test]
    fn rational_addition() {
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
    }

    #[test]
    fn inverse_mod_seven() {
        let f7 = Field::prime(7).unwrap();
        let three = f7.from_i64(3);
        assert_eq!(three.inv().unwrap(), f7.from_i64(5));
        // brute force agrees
        let brute = (0..7).find(|y| (3 * y) % 7 == 1).unwrap();
        assert_eq!(brute, 5);
    }

    #[test]
    fn gaussian_rationals_difference_of_squares() {
        let k = Field::quadratic(&Field::Rationals, q(-1, 1)).unwrap();
        let s = k.sqrt_alpha().unwrap();
        let a = &k.one() + &s;
        let b = &k.one() - &s;
        assert_eq!(&a * &b, k.from_i64(2));
    }

    #[test]
    fn squares() {
        assert!(is_square(&Field::Rationals, &q(4, 9)).unwrap());
        assert!(!is_square(&Field::Rationals, &q(2, 9)).unwrap());
        assert!(!is_square(&Field::Rationals, &q(-4, 9)).unwrap());
        let f7 = Field::prime(7).unwrap();
        assert!(is_square(&f7, &f7.from_i64(2)).unwrap());
        assert!(!is_square(&f7, &f7.from_i64(-1)).unwrap());
    }

    #[test]
    fn is_square_rejects_extensions() {
        let k = Field::quadratic(&Field::Rationals, q(2, 1)).unwrap();
        assert!(matches!(
            is_square(&k, &k.one()),
            Err(Error::UnsupportedField(_))
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(91).is_err());
        assert!(Field::prime(101).is_ok());
        assert!(Field::quadratic(&Field::Rationals, q(4, 1)).is_err());
        assert!(Field::quadratic(&Field::Rationals, q(0, 1)).is_err());
        let k = Field::quadratic(&Field::Rationals, q(3, 1)).unwrap();
        assert!(Field::quadratic(&k, k.from_i64(5)).is_err());
    }

    #[test]
    fn mismatch_and_division_errors() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(q(1, 1).try_add(&f5.one()), Err(Error::DescriptorMismatch));
        assert_eq!(f5.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(q(1, 1).try_div(&q(0, 1)), Err(Error::DivisionByZero));
        assert_eq!(FieldElement::rational(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn squares_match_enumeration() {
        for p in (2u64..=101).filter(|&p| is_prime(p)) {
            let f = Field::Prime(p);
            let squares: std::collections::HashSet<u64> = (0..p).map(|y| y * y % p).collect();
            for x in 0..p {
                assert_eq!(
                    is_square(&f, &f.from_i64(x as i64)).unwrap(),
                    squares.contains(&x),
                    "p={p} x={x}"
                );
            }
        }
    }

    #[test]
    fn extension_inverse() {
        let f5 = Field::prime(5).unwrap();
        let k = Field::quadratic(&f5, f5.from_i64(2)).unwrap();
        let s = k.sqrt_alpha().unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let x = &k.from_i64(a) + &(&k.from_i64(b) * &s);
                if x.is_zero() {
                    continue;
                }
                assert!((&x * &x.inv().unwrap()).is_one());
            }
        }
        assert_eq!(k.order(), Some(25));
    }
}
