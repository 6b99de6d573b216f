//! Dense matrices over an exact field.
//!
//! Storage is row-major, and so is every vectorization in this crate: the
//! matrix `x` corresponds to the vector `(x00, x01, ..., x0n, x10, ...)`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::{lcm, Poly};

pub type Vector = Vec<FieldElement>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Mat {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !field.contains(x)) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(Mat { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Mat::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integer rows.
    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| field.from_i64(x))).collect();
        Mat { field: field.clone(), rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Result<Mat> {
        let mut m = Mat::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::ShapeMismatch("column length".into()));
            }
            for (i, x) in col.iter().enumerate() {
                if !field.contains(x) {
                    return Err(Error::DescriptorMismatch);
                }
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    /// Reshapes a row-major vector.
    pub fn from_vector(field: &Field, rows: usize, cols: usize, v: &[FieldElement]) -> Result<Mat> {
        Mat::new(field, rows, cols, v.to_vec())
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        Mat::scalar(n, &field.one())
    }

    pub fn scalar(n: usize, c: &FieldElement) -> Mat {
        let mut m = Mat::zeros(&c.field(), n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn block_diag(field: &Field, blocks: &[Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b[(i, j)].clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major vectorization.
    pub fn vectorize(&self) -> Vector {
        self.data.clone()
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self[(i, j)].clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<&FieldElement> {
        self.data.iter().find(|x| !x.is_zero())
    }

    /// Scales so the first nonzero entry in row-major order is 1.
    pub fn normalize_first_nonzero(&self) -> Mat {
        match self.first_nonzero() {
            Some(c) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    fn check_same_shape(&self, other: &Mat) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Mat) -> Result<Mat> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn try_sub(&self, other: &Mat) -> Result<Mat> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * &other[(k, j)]);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Mat {
        let data = self.data.iter().map(|a| a * c).collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let sub = &factor * &m[(r, j)];
                    let idx = i * m.cols + j;
                    m.data[idx] = &m.data[idx] - &sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v = 0}` in canonical form: the rows of the
    /// reduced echelon form of the kernel, so every basis vector has a
    /// leading 1.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vector> = free
            .iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, f)];
                }
                v
            })
            .collect();
        canonical_basis(&self.field, self.cols, &raw)
    }

    /// A solution of `self * x = b` (free variables set to zero), or `None`
    /// if the system is inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch("right-hand side length".into()));
        }
        let mut aug = Mat::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self[(i, j)].clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.require_square()?;
        let mut aug = Mat::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self[(i, j)].clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Mat::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r[(i, n + j)].clone());
            }
        }
        Ok(inv)
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<FieldElement> {
        let n = self.require_square()?;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = &det * &pivot;
            let inv = pivot.inv()?;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] * &inv;
                for j in c..n {
                    let sub = &factor * &m[(c, j)];
                    let idx = i * n + j;
                    m.data[idx] = &m.data[idx] - &sub;
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.det().is_ok_and(|d| !d.is_zero())
    }

    /// Characteristic polynomial `det(X*I - self)` by Berkowitz's
    /// division-free recursion on trailing principal submatrices.
    pub fn charpoly(&self) -> Result<Poly> {
        let n = self.require_square()?;
        let f = &self.field;
        // coefficients, highest degree first, of the charpoly of the trailing
        // block processed so far
        let mut p: Vec<FieldElement> = vec![f.one()];
        for k in (0..n).rev() {
            let m = n - k;
            let a = &self[(k, k)];
            // t = [1, -a, -R C, -R B C, ..., -R B^(m-2) C]
            let mut t = Vec::with_capacity(m + 1);
            t.push(f.one());
            t.push(-a);
            let mut w: Vector = (k + 1..n).map(|i| self[(i, k)].clone()).collect();
            for step in 0..m.saturating_sub(1) {
                if step > 0 {
                    w = (k + 1..n)
                        .map(|i| {
                            (k + 1..n).fold(f.zero(), |acc, j| {
                                &acc + &(&self[(i, j)] * &w[j - k - 1])
                            })
                        })
                        .collect();
                }
                let rw = (k + 1..n).fold(f.zero(), |acc, j| &acc + &(&self[(k, j)] * &w[j - k - 1]));
                t.push(-rw);
            }
            // Toeplitz product: new[i] = sum_{j <= i} t[i - j] * p[j]
            let next: Vec<FieldElement> = (0..=m)
                .map(|i| {
                    (0..p.len().min(i + 1))
                        .fold(f.zero(), |acc, j| &acc + &(&t[i - j] * &p[j]))
                })
                .collect();
            p = next;
        }
        p.reverse();
        Poly::new(f, p)
    }

    /// Columns `v, a v, ..., a^(k-1) v`.
    pub fn krylov(&self, v: &[FieldElement], k: usize) -> Result<Mat> {
        self.require_square()?;
        let mut cols = Vec::with_capacity(k);
        let mut cur = v.to_vec();
        for i in 0..k {
            if i > 0 {
                cur = self.mul_vec(&cur)?;
            }
            cols.push(cur.clone());
        }
        Mat::from_columns(&self.field, self.rows, &cols)
    }

    /// Monic generator of `{f : f(self) v = 0}`: the first linear dependency
    /// among `v, a v, a^2 v, ...`.
    pub fn vector_annihilator(&self, v: &[FieldElement]) -> Result<Poly> {
        let n = self.require_square()?;
        if v.len() != n {
            return Err(Error::ShapeMismatch("vector length".into()));
        }
        let mut cols: Vec<Vector> = vec![v.to_vec()];
        loop {
            let k = Mat::from_columns(&self.field, n, &cols)?;
            let ker = k.kernel();
            if let Some(c) = ker.first() {
                // the first k-1 columns are independent, so the kernel is a
                // line and its last coordinate is nonzero
                return Ok(Poly::new(&self.field, c.clone())?.monic());
            }
            let next = self.mul_vec(cols.last().unwrap())?;
            cols.push(next);
        }
    }

    /// Minimal polynomial as the lcm of the annihilators of the standard
    /// basis vectors.
    pub fn minpoly(&self) -> Result<Poly> {
        let n = self.require_square()?;
        let mut acc = Poly::one(&self.field);
        for i in 0..n {
            let mut e = vec![self.field.zero(); n];
            e[i] = self.field.one();
            acc = lcm(&acc, &self.vector_annihilator(&e)?)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, k: usize) -> Result<Mat> {
        let n = self.require_square()?;
        let mut acc = Mat::identity(&self.field, n);
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }
}

/// Reduced echelon basis of the span of `vectors` (zero rows dropped).
pub fn canonical_basis(field: &Field, dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Mat {
        field: field.clone(),
        rows: vectors.len(),
        cols: dim,
        data: vectors.iter().flatten().cloned().collect(),
    };
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Basis of `{x : x a = b x}`, computed as the kernel of `x -> x a - b x`
/// acting on row-major vectorizations.
pub fn intertwiner_space(a: &Mat, b: &Mat) -> Result<Vec<Mat>> {
    let n = a.require_square()?;
    if b.require_square()? != n {
        return Err(Error::ShapeMismatch("intertwiner operands differ in size".into()));
    }
    if a.field != b.field {
        return Err(Error::DescriptorMismatch);
    }
    let field = &a.field;
    let nn = n * n;
    let mut op = Mat::zeros(field, nn, nn);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                // (x a)_{ij} = sum_k x_{ik} a_{kj}
                let col = i * n + k;
                op.data[row * nn + col] = &op.data[row * nn + col] + &a[(k, j)];
                // (b x)_{ij} = sum_k b_{ik} x_{kj}
                let col = k * n + j;
                op.data[row * nn + col] = &op.data[row * nn + col] - &b[(i, k)];
            }
        }
    }
    op.kernel()
        .into_iter()
        .map(|v| Mat::from_vector(field, n, n, &v))
        .collect()
}

impl Index<(usize, usize)> for Mat {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

macro_rules! mat_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Mat> for &'a Mat {
            type Output = Mat;
            fn $method(self, rhs: &'a Mat) -> Mat {
                self.$checked(rhs).expect(concat!("Mat::", stringify!($method)))
            }
        }
    };
}

mat_binop!(Add, add, try_add);
mat_binop!(Sub, sub, try_sub);
mat_binop!(Mul, mul, try_mul);

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        let data = self.data.iter().map(|x| -x).collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
