//! Involutions of the first kind: `F`-linear, anti-multiplicative, and
//! self-inverse maps on a central simple algebra.
//!
//! The concrete involutions handled here are `x -> u b(x) u^-1` where `b` is
//! the transpose on `M_n(F)` or the conjugate-transpose on `M_n(D)` and the
//! optional twist `u` satisfies `b(u) = +-u`. The sign `eps` is read off the
//! dimension of the fixed space: `m(m+1)/2` for `+1` and `m(m-1)/2` for `-1`,
//! `m` the reduced degree.

use std::fmt;

use super::{Algebra, CsaElement, Quaternion};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn in_field(self, field: &crate::field::Field) -> FieldElement {
        field.from_i64(self.as_i64())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i64())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseMap {
    /// `x -> x^T` on `M_n(F)`.
    Transpose,
    /// `x -> (x^gamma)^T` on `M_n(D)`, `gamma` the canonical conjugation.
    GammaTranspose,
}

impl BaseMap {
    pub fn as_str(self) -> &'static str {
        match self {
            BaseMap::Transpose => "transpose",
            BaseMap::GammaTranspose => "gamma-transpose",
        }
    }
}

/// An `F`-linear endomorphism of an algebra, as its matrix on the fixed
/// `F`-basis (column `k` holds the coordinates of the image of basis
/// element `k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub algebra: Algebra,
    pub matrix: Mat,
}

impl LinearMap {
    pub fn from_fn<M>(algebra: &Algebra, map: M) -> Result<LinearMap>
    where
        M: FnMut(&CsaElement) -> Result<CsaElement>,
    {
        Ok(LinearMap { algebra: algebra.clone(), matrix: algebra.linear_map_matrix(map)? })
    }

    pub fn apply(&self, x: &CsaElement) -> Result<CsaElement> {
        if !self.algebra.contains(x) {
            return Err(Error::AlgebraMismatch);
        }
        self.algebra.from_coords(&self.matrix.mul_vec(&x.coords())?)
    }

    /// `dim_F` of `{x : map(x) = x}`.
    pub fn fixed_dimension(&self) -> usize {
        let id = Mat::identity(self.matrix.field(), self.matrix.rows());
        self.matrix.cols() - (&self.matrix - &id).rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The matrix does not act on an algebra of this dimension.
    DimensionMismatch { expected: usize, rows: usize, cols: usize },
    /// `map(e_left e_right) != map(e_right) map(e_left)` for basis elements.
    NotAntiMultiplicative { left: usize, right: usize },
    /// `map o map != id`.
    NotSelfInverse,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::DimensionMismatch { expected, rows, cols } => {
                write!(f, "map is {rows}x{cols}, algebra has dimension {expected}")
            }
            AxiomViolation::NotAntiMultiplicative { left, right } => {
                write!(f, "not anti-multiplicative on basis pair ({left}, {right})")
            }
            AxiomViolation::NotSelfInverse => write!(f, "map is not self-inverse"),
        }
    }
}

/// Checks anti-multiplicativity on all basis pairs and `map o map = id`.
/// Linearity holds by construction. An empty result means the map is an
/// involution of the first kind.
pub fn involution_axioms_check(map: &LinearMap) -> Vec<AxiomViolation> {
    let dim = map.algebra.dim();
    let m = &map.matrix;
    if m.rows() != dim || m.cols() != dim || m.field() != map.algebra.field() {
        return vec![AxiomViolation::DimensionMismatch { expected: dim, rows: m.rows(), cols: m.cols() }];
    }
    let mut out = Vec::new();
    let basis = map.algebra.basis();
    let images: Vec<CsaElement> = basis
        .iter()
        .map(|e| map.apply(e).expect("basis element lies in the algebra"))
        .collect();
    for p in 0..dim {
        for q in 0..dim {
            let lhs = map.apply(&basis[p].try_mul(&basis[q]).expect("same algebra")).expect("in algebra");
            let rhs = images[q].try_mul(&images[p]).expect("same algebra");
            if lhs != rhs {
                out.push(AxiomViolation::NotAntiMultiplicative { left: p, right: q });
            }
        }
    }
    if (m * m) != Mat::identity(m.field(), dim) {
        out.push(AxiomViolation::NotSelfInverse);
    }
    out
}

/// Sign from the fixed-space dimension of an involution on an algebra of
/// reduced degree `m`. In characteristic 2 only the `+1` case exists.
pub fn epsilon_from_fixed_dimension(m: usize, characteristic: u64, fixed: usize) -> Result<Sign> {
    let plus = m * (m + 1) / 2;
    let minus = m * (m - 1) / 2;
    if fixed == plus {
        return Ok(Sign::Plus);
    }
    if fixed == minus && characteristic != 2 {
        return Ok(Sign::Minus);
    }
    Err(Error::InternalAssertion(format!(
        "fixed space of dimension {fixed} matches neither {plus} nor {minus} (m = {m})"
    )))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionSpec {
    algebra: Algebra,
    base: BaseMap,
    twist: Option<CsaElement>,
    twist_inverse: Option<CsaElement>,
    map: LinearMap,
    fixed_dimension: usize,
    epsilon: Sign,
}

impl InvolutionSpec {
    /// Builds `x -> u base(x) u^-1` (or `base` itself without a twist) and
    /// verifies the involution axioms.
    pub fn new(algebra: &Algebra, base: BaseMap, twist: Option<CsaElement>) -> Result<InvolutionSpec> {
        match (algebra, base) {
            (Algebra::Matrix { .. }, BaseMap::Transpose)
            | (Algebra::Quaternion { .. }, BaseMap::GammaTranspose) => {}
            _ => return Err(Error::AlgebraMismatch),
        }
        let twist_inverse = match &twist {
            None => None,
            Some(u) => {
                if !algebra.contains(u) {
                    return Err(Error::AlgebraMismatch);
                }
                let inv = u.inverse().map_err(|_| Error::BadTwist("twist is not invertible".into()))?;
                let bu = u.base_involution();
                let neg_u = u.scale(&algebra.field().from_i64(-1));
                if bu != *u && bu != neg_u {
                    return Err(Error::BadTwist(format!(
                        "twist is neither fixed nor negated by the {} map",
                        base.as_str()
                    )));
                }
                Some(inv)
            }
        };
        let apply = |x: &CsaElement| -> Result<CsaElement> {
            let bx = x.base_involution();
            match (&twist, &twist_inverse) {
                (Some(u), Some(ui)) => u.try_mul(&bx)?.try_mul(ui),
                _ => Ok(bx),
            }
        };
        let map = LinearMap::from_fn(algebra, apply)?;
        let violations = involution_axioms_check(&map);
        if !violations.is_empty() {
            let detail: Vec<String> = violations.iter().take(3).map(ToString::to_string).collect();
            return Err(Error::NotAnInvolution(detail.join("; ")));
        }
        let fixed_dimension = map.fixed_dimension();
        let epsilon = epsilon_from_fixed_dimension(
            algebra.reduced_degree(),
            algebra.field().characteristic(),
            fixed_dimension,
        )?;
        Ok(InvolutionSpec {
            algebra: algebra.clone(),
            base,
            twist,
            twist_inverse,
            map,
            fixed_dimension,
            epsilon,
        })
    }

    pub fn transpose(field: &crate::field::Field, n: usize) -> InvolutionSpec {
        InvolutionSpec::new(&Algebra::matrix(field, n), BaseMap::Transpose, None)
            .expect("transpose is an involution")
    }

    pub fn gamma_transpose(algebra: &std::sync::Arc<super::QuaternionAlgebra>, n: usize) -> InvolutionSpec {
        InvolutionSpec::new(&Algebra::quaternion(algebra, n), BaseMap::GammaTranspose, None)
            .expect("conjugate-transpose is an involution")
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn base(&self) -> BaseMap {
        self.base
    }

    pub fn twist(&self) -> Option<&CsaElement> {
        self.twist.as_ref()
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn fixed_dimension(&self) -> usize {
        self.fixed_dimension
    }

    pub fn linear_map(&self) -> &LinearMap {
        &self.map
    }

    pub fn apply(&self, x: &CsaElement) -> Result<CsaElement> {
        if !self.algebra.contains(x) {
            return Err(Error::AlgebraMismatch);
        }
        let bx = x.base_involution();
        match (&self.twist, &self.twist_inverse) {
            (Some(u), Some(ui)) => u.try_mul(&bx)?.try_mul(ui),
            _ => Ok(bx),
        }
    }
}

pub fn apply_involution(theta: &InvolutionSpec, a: &CsaElement) -> Result<CsaElement> {
    theta.apply(a)
}

/// Recomputes the sign from the fixed space of `theta`.
pub fn epsilon_sign(theta: &InvolutionSpec) -> Result<Sign> {
    let alg = theta.algebra();
    epsilon_from_fixed_dimension(
        alg.reduced_degree(),
        alg.field().characteristic(),
        theta.linear_map().fixed_dimension(),
    )
}

/// For an involution `theta` of `M_n(F)`, the matrix `b` (first nonzero entry
/// 1) with `theta(x) = b x^T b^-1` and the sign `eps` with `b^T = eps b`.
pub fn involution_to_twist(map: &LinearMap) -> Result<(Mat, Sign)> {
    let (field, n) = match &map.algebra {
        Algebra::Matrix { field, n } => (field.clone(), *n),
        Algebra::Quaternion { .. } => return Err(Error::AlgebraMismatch),
    };
    let violations = involution_axioms_check(map);
    if !violations.is_empty() {
        let detail: Vec<String> = violations.iter().take(3).map(ToString::to_string).collect();
        return Err(Error::NotAnInvolution(detail.join("; ")));
    }
    // theta(E) b - b E^T = 0 for every basis element E, linear in b.
    let nn = n * n;
    let mut system = Mat::zeros(&field, nn * nn, nn);
    for t in 0..nn {
        let e = map.algebra.basis_element(t);
        let CsaElement::MatF(theta_e) = map.apply(&e)? else { unreachable!() };
        let CsaElement::MatF(e) = e else { unreachable!() };
        let et = e.transpose();
        for i in 0..n {
            for j in 0..n {
                let row = t * nn + i * n + j;
                for p in 0..n {
                    let col = p * n + j;
                    let v = &system[(row, col)] + &theta_e[(i, p)];
                    system.set(row, col, v);
                }
                for q in 0..n {
                    let col = i * n + q;
                    let v = &system[(row, col)] - &et[(q, j)];
                    system.set(row, col, v);
                }
            }
        }
    }
    let kernel = system.kernel();
    if kernel.len() != 1 {
        return Err(Error::InternalAssertion(format!(
            "twist solution space has dimension {} instead of 1",
            kernel.len()
        )));
    }
    let b = Mat::from_vector(&field, n, n, &kernel[0])?;
    if !b.is_invertible() {
        return Err(Error::InternalAssertion("twist matrix is singular".into()));
    }
    let bt = b.transpose();
    let sign = if bt == b {
        Sign::Plus
    } else if bt == -&b {
        Sign::Minus
    } else {
        return Err(Error::InternalAssertion("twist matrix is neither symmetric nor skew".into()));
    };
    Ok((b, sign))
}

/// `x -> y theta(x) y^-1` for a pure quaternion `y` (`gamma(y) = -y`),
/// where `theta` is the untwisted conjugate-transpose. The result is an
/// orthogonal involution.
pub fn make_twisted_involution(theta: &InvolutionSpec, y: &Quaternion) -> Result<InvolutionSpec> {
    let Algebra::Quaternion { algebra, n } = theta.algebra() else {
        return Err(Error::BadTwist("base involution must be the conjugate-transpose".into()));
    };
    if theta.base() != BaseMap::GammaTranspose || theta.twist().is_some() {
        return Err(Error::BadTwist("base involution must be the untwisted conjugate-transpose".into()));
    }
    if y.algebra() != algebra {
        return Err(Error::AlgebraMismatch);
    }
    if y.conj() != -y {
        return Err(Error::BadTwist(format!("gamma({y}) != -({y})")));
    }
    if y.reduced_norm().is_zero() {
        return Err(Error::BadTwist(format!("{y} is not invertible")));
    }
    let sq = y * y;
    if sq.coords()[1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::InternalAssertion(format!("square of {y} is not central")));
    }
    let spec = InvolutionSpec::new(
        theta.algebra(),
        BaseMap::GammaTranspose,
        Some(CsaElement::quaternion_scalar(y, *n)),
    )?;
    if spec.epsilon() != Sign::Plus {
        return Err(Error::InternalAssertion("twisted involution is not orthogonal".into()));
    }
    Ok(spec)
}

/// The scalar extension of `theta` to `M_2n(K)`, `K = F(sqrt(alpha))`,
/// transported through the entrywise splitting embedding and written on the
/// standard basis of `M_2n(K)`.
pub fn split_involution(theta: &InvolutionSpec) -> Result<LinearMap> {
    let Algebra::Quaternion { algebra, n } = theta.algebra() else {
        return Err(Error::AlgebraMismatch);
    };
    let k = algebra.splitting_field().clone();
    let dim = theta.algebra().dim();
    let cols = theta
        .algebra()
        .basis()
        .into_iter()
        .map(|e| match e {
            CsaElement::MatQuat(q) => q.split().vectorize(),
            CsaElement::MatF(_) => unreachable!(),
        })
        .collect::<Vec<_>>();
    let phi = Mat::from_columns(&k, dim, &cols)?;
    let src = theta.linear_map().matrix.entries().iter().map(|x| k.embed(x)).collect::<Result<Vec<_>>>()?;
    let theta_k = Mat::new(&k, dim, dim, src)?;
    let matrix = &(&phi * &theta_k) * &phi.inverse()?;
    Ok(LinearMap { algebra: Algebra::matrix(&k, 2 * n), matrix })
}
