//! Quaternion algebras `(alpha, beta / F)` with basis `1, i, j, k`,
//! `i^2 = alpha`, `j^2 = beta`, `k = ij = -ji`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{is_square, Field, FieldElement};
use crate::matrix::Mat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuaternionAlgebra {
    base: Field,
    alpha: FieldElement,
    beta: FieldElement,
    /// `base(sqrt(alpha))`, which splits the algebra.
    splitting: Field,
}

impl QuaternionAlgebra {
    /// `alpha` must be a non-square so that `base(sqrt(alpha))` is a field;
    /// split algebras are allowed as long as they are presented that way.
    pub fn new(base: &Field, alpha: FieldElement, beta: FieldElement) -> Result<Arc<Self>> {
        match base {
            Field::Rationals => {}
            Field::Prime(p) if *p != 2 => {}
            other => {
                return Err(Error::InvalidAlgebra(format!(
                    "quaternion algebras need base Q or GF(p) with p odd, got {other}"
                )))
            }
        }
        if !base.contains(&alpha) || !base.contains(&beta) {
            return Err(Error::DescriptorMismatch);
        }
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::InvalidAlgebra("alpha and beta must be nonzero".into()));
        }
        if is_square(base, &alpha)? {
            return Err(Error::InvalidAlgebra(format!("alpha = {alpha} is a square")));
        }
        let splitting = Field::quadratic(base, alpha.clone())?;
        let algebra = Arc::new(QuaternionAlgebra { base: base.clone(), alpha, beta, splitting });
        let (i, j, k) = (algebra.i(), algebra.j(), algebra.k());
        let ok = &i * &i == algebra.scalar(algebra.alpha.clone())
            && &j * &j == algebra.scalar(algebra.beta.clone())
            && &i * &j == k
            && &j * &i == -&k;
        if !ok {
            return Err(Error::InternalAssertion("quaternion relations fail".into()));
        }
        Ok(algebra)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn splitting_field(&self) -> &Field {
        &self.splitting
    }

    fn element(self: &Arc<Self>, coords: [FieldElement; 4]) -> Quaternion {
        Quaternion { algebra: self.clone(), coords }
    }

    pub fn from_coords(self: &Arc<Self>, coords: [FieldElement; 4]) -> Result<Quaternion> {
        if coords.iter().any(|c| !self.base.contains(c)) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(self.element(coords))
    }

    pub fn from_i64(self: &Arc<Self>, coords: [i64; 4]) -> Quaternion {
        self.element(coords.map(|c| self.base.from_i64(c)))
    }

    pub fn scalar(self: &Arc<Self>, c: FieldElement) -> Quaternion {
        let z = self.base.zero();
        self.element([c, z.clone(), z.clone(), z])
    }

    pub fn zero(self: &Arc<Self>) -> Quaternion {
        self.from_i64([0, 0, 0, 0])
    }

    pub fn one(self: &Arc<Self>) -> Quaternion {
        self.from_i64([1, 0, 0, 0])
    }

    pub fn i(self: &Arc<Self>) -> Quaternion {
        self.from_i64([0, 1, 0, 0])
    }

    pub fn j(self: &Arc<Self>) -> Quaternion {
        self.from_i64([0, 0, 1, 0])
    }

    pub fn k(self: &Arc<Self>) -> Quaternion {
        self.from_i64([0, 0, 0, 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion {
    algebra: Arc<QuaternionAlgebra>,
    coords: [FieldElement; 4],
}

impl Quaternion {
    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[FieldElement; 4] {
        &self.coords
    }

    fn check(&self, other: &Quaternion) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    pub fn try_add(&self, other: &Quaternion) -> Result<Quaternion> {
        self.check(other)?;
        let c = std::array::from_fn(|t| &self.coords[t] + &other.coords[t]);
        Ok(self.algebra.element(c))
    }

    pub fn try_sub(&self, other: &Quaternion) -> Result<Quaternion> {
        self.check(other)?;
        let c = std::array::from_fn(|t| &self.coords[t] - &other.coords[t]);
        Ok(self.algebra.element(c))
    }

    pub fn try_mul(&self, other: &Quaternion) -> Result<Quaternion> {
        self.check(other)?;
        let [x0, x1, x2, x3] = &self.coords;
        let [y0, y1, y2, y3] = &other.coords;
        let a = &self.algebra.alpha;
        let b = &self.algebra.beta;
        let ab = a * b;
        let r0 = &(&(&(x0 * y0) + &(a * &(x1 * y1))) + &(b * &(x2 * y2))) - &(&ab * &(x3 * y3));
        let r1 = &(&(&(x0 * y1) + &(x1 * y0)) - &(b * &(x2 * y3))) + &(b * &(x3 * y2));
        let r2 = &(&(&(x0 * y2) + &(x2 * y0)) + &(a * &(x1 * y3))) - &(a * &(x3 * y1));
        let r3 = &(&(&(x0 * y3) + &(x3 * y0)) + &(x1 * y2)) - &(x2 * y1);
        Ok(self.algebra.element([r0, r1, r2, r3]))
    }

    pub fn scale(&self, c: &FieldElement) -> Quaternion {
        self.algebra.element(std::array::from_fn(|t| &self.coords[t] * c))
    }

    /// Canonical conjugation `x0 + x1 i + x2 j + x3 k -> x0 - x1 i - x2 j - x3 k`.
    pub fn conj(&self) -> Quaternion {
        let [x0, x1, x2, x3] = &self.coords;
        self.algebra.element([x0.clone(), -x1, -x2, -x3])
    }

    /// `x conj(x) = x0^2 - alpha x1^2 - beta x2^2 + alpha beta x3^2`.
    pub fn reduced_norm(&self) -> FieldElement {
        let [x0, x1, x2, x3] = &self.coords;
        let a = &self.algebra.alpha;
        let b = &self.algebra.beta;
        &(&(&(x0 * x0) - &(a * &(x1 * x1))) - &(b * &(x2 * x2))) + &(&(a * b) * &(x3 * x3))
    }

    /// `x + conj(x) = 2 x0`.
    pub fn reduced_trace(&self) -> FieldElement {
        &self.coords[0] + &self.coords[0]
    }

    pub fn inverse(&self) -> Result<Quaternion> {
        let n = self.reduced_norm();
        if n.is_zero() {
            return Err(Error::NonInvertible);
        }
        Ok(self.conj().scale(&n.inv()?))
    }

    /// Image under the splitting embedding into 2x2 matrices over
    /// `K = F(sqrt(alpha))`: `i -> diag(s, -s)`, `j -> [[0, 1], [beta, 0]]`.
    pub fn split_embedding(&self) -> Mat {
        let k = &self.algebra.splitting;
        let s = k.sqrt_alpha().expect("splitting field is quadratic");
        let e = |x: &FieldElement| k.embed(x).expect("base embeds in splitting field");
        let [x0, x1, x2, x3] = self.coords.each_ref().map(e);
        let beta = e(&self.algebra.beta);
        let x1s = &x1 * &s;
        let x3s = &x3 * &s;
        let data = vec![
            &x0 + &x1s,
            &x2 + &x3s,
            &beta * &(&x2 - &x3s),
            &x0 - &x1s,
        ];
        Mat::new(k, 2, 2, data).expect("2x2 shape")
    }
}

macro_rules! quat_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Quaternion> for &'a Quaternion {
            type Output = Quaternion;
            fn $method(self, rhs: &'a Quaternion) -> Quaternion {
                self.$checked(rhs).expect(concat!("Quaternion::", stringify!($method)))
            }
        }
    };
}

quat_binop!(Add, add, try_add);
quat_binop!(Sub, sub, try_sub);
quat_binop!(Mul, mul, try_mul);

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.algebra.element(std::array::from_fn(|t| -&self.coords[t]))
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x0, x1, x2, x3] = &self.coords;
        write!(f, "{x0} + {x1}i + {x2}j + {x3}k")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamilton() -> Arc<QuaternionAlgebra> {
        let q = Field::Rationals;
        QuaternionAlgebra::new(&q, q.from_i64(-1), q.from_i64(-1)).unwrap()
    }

    #[test]
    fn norm_of_one_plus_i_plus_j_plus_k() {
        let d = hamilton();
        assert_eq!(d.from_i64([1, 1, 1, 1]).reduced_norm(), Field::Rationals.from_i64(4));
    }

    #[test]
    fn conjugation_negates_i() {
        let d = hamilton();
        assert_eq!(d.i().conj(), -&d.i());
    }

    #[test]
    fn j_conjugates_i_to_minus_i() {
        let d = hamilton();
        let jinv = d.j().inverse().unwrap();
        assert_eq!(jinv, -&d.j());
        assert_eq!(&(&d.j() * &d.i()) * &jinv, -&d.i());
    }

    #[test]
    fn split_embedding_of_generators() {
        let d = hamilton();
        let k = d.splitting_field().clone();
        assert_eq!(d.one().split_embedding(), Mat::identity(&k, 2));
        let phi_i = d.i().split_embedding();
        let s = k.sqrt_alpha().unwrap();
        assert_eq!(phi_i[(0, 0)], s);
        assert_eq!(phi_i[(1, 1)], -&s);
        // det = -alpha = Nrd(i)
        assert_eq!(phi_i.det().unwrap(), k.one());
    }

    #[test]
    fn zero_is_not_invertible() {
        assert_eq!(hamilton().zero().inverse(), Err(Error::NonInvertible));
    }

    #[test]
    fn rejects_bad_parameters() {
        let q = Field::Rationals;
        assert!(QuaternionAlgebra::new(&q, q.from_i64(4), q.from_i64(-1)).is_err());
        assert!(QuaternionAlgebra::new(&q, q.from_i64(-1), q.from_i64(0)).is_err());
        let f2 = Field::Prime(2);
        assert!(QuaternionAlgebra::new(&f2, f2.one(), f2.one()).is_err());
        // split but validly presented: (2, 1 / GF(5)) has alpha = 2 a non-square
        let f5 = Field::Prime(5);
        assert!(QuaternionAlgebra::new(&f5, f5.from_i64(2), f5.from_i64(1)).is_ok());
    }
}
