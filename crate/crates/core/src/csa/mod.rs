//! Central simple algebras `M_n(F)` and `M_n(D)` for a quaternion algebra
//! `D`, their involutions of the first kind, reduced norms, and the twisted
//! conjugacy theorem.
//!
//! Elements are also viewed as vectors over the base field `F` through a
//! fixed basis: `E_ij` in row-major order for `M_n(F)`, and for `M_n(D)` the
//! coordinates `(1, i, j, k)` of each entry, entries in row-major order.

mod hilbert;
mod involution;
mod quaternion;
mod theorem;

use std::sync::Arc;

pub use hilbert::{hilbert_symbol, is_division, local_symbols, Place};
pub use involution::{
    apply_involution, epsilon_from_fixed_dimension, epsilon_sign, involution_axioms_check,
    involution_to_twist, make_twisted_involution, split_involution, AxiomViolation, BaseMap,
    InvolutionSpec, LinearMap, Sign,
};
pub use quaternion::{Quaternion, QuaternionAlgebra};
pub use theorem::{
    theorem_conjugator, verify_csa_certificate, CsaCertificate, CsaChecks, GridTrace,
};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{Mat, Vector};

/// The algebra an element lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Algebra {
    Matrix { field: Field, n: usize },
    Quaternion { algebra: Arc<QuaternionAlgebra>, n: usize },
}

impl Algebra {
    pub fn matrix(field: &Field, n: usize) -> Algebra {
        Algebra::Matrix { field: field.clone(), n }
    }

    pub fn quaternion(algebra: &Arc<QuaternionAlgebra>, n: usize) -> Algebra {
        Algebra::Quaternion { algebra: algebra.clone(), n }
    }

    /// The center `F`.
    pub fn field(&self) -> &Field {
        match self {
            Algebra::Matrix { field, .. } => field,
            Algebra::Quaternion { algebra, .. } => algebra.base(),
        }
    }

    /// Matrix size `n` of `M_n(F)` or `M_n(D)`.
    pub fn n(&self) -> usize {
        match self {
            Algebra::Matrix { n, .. } | Algebra::Quaternion { n, .. } => *n,
        }
    }

    /// `dim_F A`.
    pub fn dim(&self) -> usize {
        match self {
            Algebra::Matrix { n, .. } => n * n,
            Algebra::Quaternion { n, .. } => 4 * n * n,
        }
    }

    /// `m` with `m^2 = dim_F A`.
    pub fn reduced_degree(&self) -> usize {
        match self {
            Algebra::Matrix { n, .. } => *n,
            Algebra::Quaternion { n, .. } => 2 * n,
        }
    }

    pub fn zero(&self) -> CsaElement {
        self.from_coords(&vec![self.field().zero(); self.dim()]).expect("zero vector")
    }

    pub fn one(&self) -> CsaElement {
        match self {
            Algebra::Matrix { field, n } => CsaElement::MatF(Mat::identity(field, *n)),
            Algebra::Quaternion { algebra, n } => {
                let mut entries = vec![algebra.zero(); n * n];
                for i in 0..*n {
                    entries[i * n + i] = algebra.one();
                }
                CsaElement::MatQuat(QuatMat { algebra: algebra.clone(), n: *n, entries })
            }
        }
    }

    pub fn scalar(&self, c: &FieldElement) -> CsaElement {
        self.one().scale(c)
    }

    /// The `idx`-th basis element.
    pub fn basis_element(&self, idx: usize) -> CsaElement {
        let mut v = vec![self.field().zero(); self.dim()];
        v[idx] = self.field().one();
        self.from_coords(&v).expect("basis vector")
    }

    pub fn basis(&self) -> Vec<CsaElement> {
        (0..self.dim()).map(|k| self.basis_element(k)).collect()
    }

    pub fn from_coords(&self, v: &[FieldElement]) -> Result<CsaElement> {
        if v.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for an algebra of dimension {}",
                v.len(),
                self.dim()
            )));
        }
        match self {
            Algebra::Matrix { field, n } => Ok(CsaElement::MatF(Mat::from_vector(field, *n, *n, v)?)),
            Algebra::Quaternion { algebra, n } => {
                let entries = v
                    .chunks(4)
                    .map(|c| algebra.from_coords([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]))
                    .collect::<Result<Vec<_>>>()?;
                Ok(CsaElement::MatQuat(QuatMat { algebra: algebra.clone(), n: *n, entries }))
            }
        }
    }

    pub fn contains(&self, x: &CsaElement) -> bool {
        x.algebra() == *self
    }

    /// Matrix over `F` of an `F`-linear map given on basis elements.
    pub fn linear_map_matrix<M>(&self, mut map: M) -> Result<Mat>
    where
        M: FnMut(&CsaElement) -> Result<CsaElement>,
    {
        let dim = self.dim();
        let cols = (0..dim)
            .map(|k| Ok(map(&self.basis_element(k))?.coords()))
            .collect::<Result<Vec<Vector>>>()?;
        Mat::from_columns(self.field(), dim, &cols)
    }
}

/// `n x n` matrix over a quaternion algebra, entries row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatMat {
    algebra: Arc<QuaternionAlgebra>,
    n: usize,
    entries: Vec<Quaternion>,
}

impl QuatMat {
    pub fn new(algebra: &Arc<QuaternionAlgebra>, n: usize, entries: Vec<Quaternion>) -> Result<QuatMat> {
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch("quaternion matrix entry count".into()));
        }
        if entries.iter().any(|q| q.algebra() != algebra) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(QuatMat { algebra: algebra.clone(), n, entries })
    }

    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Quaternion {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    fn mul(&self, other: &QuatMat) -> QuatMat {
        let n = self.n;
        let mut entries = vec![self.algebra.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] = &entries[i * n + j] + &(a * other.entry(k, j));
                }
            }
        }
        QuatMat { algebra: self.algebra.clone(), n, entries }
    }

    /// `(x^gamma)^T`: entry `(i, j)` is `conj(x_ji)`.
    fn gamma_transpose(&self) -> QuatMat {
        let n = self.n;
        let entries = (0..n * n).map(|idx| self.entry(idx % n, idx / n).conj()).collect();
        QuatMat { algebra: self.algebra.clone(), n, entries }
    }

    /// Entrywise splitting embedding into `M_2n(K)`.
    pub fn split(&self) -> Mat {
        let n = self.n;
        let k = self.algebra.splitting_field();
        let mut out = Mat::zeros(k, 2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let b = self.entry(i, j).split_embedding();
                for r in 0..2 {
                    for c in 0..2 {
                        out.set(2 * i + r, 2 * j + c, b[(r, c)].clone());
                    }
                }
            }
        }
        out
    }
}

/// Element of `M_n(F)` or `M_n(D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CsaElement {
    MatF(Mat),
    MatQuat(QuatMat),
}

impl CsaElement {
    pub fn from_quaternion(q: Quaternion) -> CsaElement {
        CsaElement::MatQuat(QuatMat { algebra: q.algebra().clone(), n: 1, entries: vec![q] })
    }

    /// `y I_n`.
    pub fn quaternion_scalar(y: &Quaternion, n: usize) -> CsaElement {
        let mut entries = vec![y.algebra().zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = y.clone();
        }
        CsaElement::MatQuat(QuatMat { algebra: y.algebra().clone(), n, entries })
    }

    pub fn algebra(&self) -> Algebra {
        match self {
            CsaElement::MatF(m) => Algebra::Matrix { field: m.field().clone(), n: m.rows() },
            CsaElement::MatQuat(q) => Algebra::Quaternion { algebra: q.algebra.clone(), n: q.n },
        }
    }

    pub fn coords(&self) -> Vector {
        match self {
            CsaElement::MatF(m) => m.vectorize(),
            CsaElement::MatQuat(q) => q.entries.iter().flat_map(|e| e.coords().iter().cloned()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(FieldElement::is_zero)
    }

    fn check(&self, other: &CsaElement) -> Result<()> {
        if self.algebra() != other.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &CsaElement) -> Result<CsaElement> {
        self.check(other)?;
        Ok(match (self, other) {
            (CsaElement::MatF(a), CsaElement::MatF(b)) => CsaElement::MatF(a.try_mul(b)?),
            (CsaElement::MatQuat(a), CsaElement::MatQuat(b)) => CsaElement::MatQuat(a.mul(b)),
            _ => unreachable!(),
        })
    }

    pub fn try_add(&self, other: &CsaElement) -> Result<CsaElement> {
        self.check(other)?;
        let v: Vector = self.coords().iter().zip(other.coords()).map(|(a, b)| a + &b).collect();
        self.algebra().from_coords(&v)
    }

    pub fn try_sub(&self, other: &CsaElement) -> Result<CsaElement> {
        self.try_add(&other.scale(&other.algebra().field().from_i64(-1)))
    }

    pub fn scale(&self, c: &FieldElement) -> CsaElement {
        let v: Vector = self.coords().iter().map(|a| a * c).collect();
        self.algebra().from_coords(&v).expect("same algebra")
    }

    /// Transpose on `M_n(F)`, conjugate-transpose on `M_n(D)`.
    pub(crate) fn base_involution(&self) -> CsaElement {
        match self {
            CsaElement::MatF(m) => CsaElement::MatF(m.transpose()),
            CsaElement::MatQuat(q) => CsaElement::MatQuat(q.gamma_transpose()),
        }
    }

    /// Reduced norm in the center: the determinant on `M_n(F)`; on `M_n(D)`
    /// the determinant of the split image in `M_2n(F(sqrt(alpha)))`, whose
    /// irrational part must vanish.
    pub fn reduced_norm(&self) -> Result<FieldElement> {
        match self {
            CsaElement::MatF(m) => m.det(),
            CsaElement::MatQuat(q) => {
                let det = q.split().det()?;
                let (re, im) = det.quadratic_parts().expect("splitting field is quadratic");
                if !im.is_zero() {
                    return Err(Error::InternalAssertion(format!(
                        "reduced norm has irrational part {im}"
                    )));
                }
                Ok(re.clone())
            }
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.reduced_norm().is_ok_and(|n| !n.is_zero())
    }

    /// Inverse via the left-multiplication map `x -> self x`.
    pub fn inverse(&self) -> Result<CsaElement> {
        if let CsaElement::MatF(m) = self {
            return Ok(CsaElement::MatF(m.inverse().map_err(|_| Error::NonInvertible)?));
        }
        let alg = self.algebra();
        let left = alg.linear_map_matrix(|b| self.try_mul(b))?;
        let x = left
            .solve(&alg.one().coords())?
            .ok_or(Error::NonInvertible)?;
        alg.from_coords(&x)
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
    fn identity_has_norm_one() {
        let d = hamilton();
        for n in 1..=3 {
            assert!(Algebra::quaternion(&d, n).one().reduced_norm().unwrap().is_one());
        }
    }

    #[test]
    fn norm_of_i_in_m1() {
        let d = hamilton();
        let x = CsaElement::from_quaternion(d.i());
        assert_eq!(x.reduced_norm().unwrap(), Field::Rationals.one());
    }

    #[test]
    fn quaternion_matrix_inverse() {
        let d = hamilton();
        let alg = Algebra::quaternion(&d, 2);
        let x = alg
            .from_coords(&[1, 2, 0, 0, 0, 1, 1, 0, 0, 0, 0, 3, 1, 0, 0, 1].map(|c| Field::Rationals.from_i64(c)))
            .unwrap();
        let inv = x.inverse().unwrap();
        assert_eq!(x.try_mul(&inv).unwrap(), alg.one());
    }

    #[test]
    fn dimensions() {
        let d = hamilton();
        let a = Algebra::quaternion(&d, 2);
        assert_eq!((a.dim(), a.reduced_degree()), (16, 4));
        let m = Algebra::matrix(&Field::Rationals, 3);
        assert_eq!((m.dim(), m.reduced_degree()), (9, 3));
    }
}
