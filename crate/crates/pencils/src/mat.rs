//! Dense matrices over exact coefficient rings.
//!
//! One representation serves three entry types: field scalars, polynomials,
//! and rational functions (the fraction field of `F[s]`). Gaussian
//! elimination is written once over any field-valued entry type; the
//! fraction-free Bareiss determinant works over any entry type with exact
//! division and is the route used for polynomial matrices.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::Poly;

/// Entries forming a commutative ring with exact division (integral domain).
pub trait Entry: Clone + PartialEq + fmt::Debug {
    fn e_zero(field: FieldSpec) -> Self;
    fn e_one(field: FieldSpec) -> Self;
    fn e_is_zero(&self) -> bool;
    fn e_add(&self, rhs: &Self) -> Self;
    fn e_sub(&self, rhs: &Self) -> Self;
    fn e_mul(&self, rhs: &Self) -> Self;
    fn e_neg(&self) -> Self;
    /// Exact quotient, `None` when `rhs` does not divide `self`.
    fn e_exact_div(&self, rhs: &Self) -> Option<Self>;
}

/// Entries forming a field.
pub trait FieldEntry: Entry {
    fn e_inv(&self) -> Option<Self>;
}

impl Entry for Scalar {
    fn e_zero(field: FieldSpec) -> Self {
        field.zero()
    }
    fn e_one(field: FieldSpec) -> Self {
        field.one()
    }
    fn e_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn e_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn e_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn e_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn e_neg(&self) -> Self {
        -self
    }
    fn e_exact_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self * &i)
    }
}

impl FieldEntry for Scalar {
    fn e_inv(&self) -> Option<Self> {
        self.inv()
    }
}

impl Entry for Poly {
    fn e_zero(field: FieldSpec) -> Self {
        Poly::zero(field)
    }
    fn e_one(field: FieldSpec) -> Self {
        Poly::one(field)
    }
    fn e_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn e_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn e_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn e_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn e_neg(&self) -> Self {
        -self
    }
    fn e_exact_div(&self, rhs: &Self) -> Option<Self> {
        self.exact_div(rhs)
    }
}

/// A rational function `num/den` over `F[s]`, kept reduced with monic
/// denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> RatFn {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn {
                num: Poly::zero(den.field()),
                den: Poly::one(den.field()),
            };
        }
        let g = Poly::gcd(&num, &den).expect("not both zero");
        let num = num.exact_div(&g).unwrap();
        let den = den.exact_div(&g).unwrap();
        let (lead, den) = den.monic();
        let num = num.scale(&lead.inv().unwrap());
        RatFn { num, den }
    }

    pub fn from_poly(p: Poly) -> RatFn {
        let field = p.field();
        RatFn {
            num: p,
            den: Poly::one(field),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

impl Entry for RatFn {
    fn e_zero(field: FieldSpec) -> Self {
        RatFn::from_poly(Poly::zero(field))
    }
    fn e_one(field: FieldSpec) -> Self {
        RatFn::from_poly(Poly::one(field))
    }
    fn e_is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn e_add(&self, rhs: &Self) -> Self {
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
    fn e_sub(&self, rhs: &Self) -> Self {
        self.e_add(&rhs.e_neg())
    }
    fn e_mul(&self, rhs: &Self) -> Self {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
    fn e_neg(&self) -> Self {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn e_exact_div(&self, rhs: &Self) -> Option<Self> {
        rhs.e_inv().map(|i| self.e_mul(&i))
    }
}

impl FieldEntry for RatFn {
    fn e_inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFn::new(self.den.clone(), self.num.clone()))
        }
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<T>,
}

pub type ScalarMat = Mat<Scalar>;
pub type PolyMat = Mat<Poly>;

impl<T: Entry> Mat<T> {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Mat<T> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            rows,
            cols,
            field,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Mat<T> {
        Mat::from_fn(rows, cols, field, |_, _| T::e_zero(field))
    }

    pub fn identity(n: usize, field: FieldSpec) -> Mat<T> {
        Mat::from_fn(n, n, field, |i, j| {
            if i == j {
                T::e_one(field)
            } else {
                T::e_zero(field)
            }
        })
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<T>>) -> Mat<T> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            field,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Entry::e_is_zero)
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, self.field, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn map<U: Entry>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        Mat::from_fn(self.rows, self.cols, self.field, |i, j| {
            self.at(i, j).e_add(rhs.at(i, j))
        })
    }

    pub fn sub(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        Mat::from_fn(self.rows, self.cols, self.field, |i, j| {
            self.at(i, j).e_sub(rhs.at(i, j))
        })
    }

    pub fn neg(&self) -> Mat<T> {
        self.map(Entry::e_neg)
    }

    pub fn scale(&self, k: &T) -> Mat<T> {
        self.map(|v| v.e_mul(k))
    }

    pub fn matmul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        Mat::from_fn(self.rows, rhs.cols, self.field, |i, j| {
            let mut acc = T::e_zero(self.field);
            for k in 0..self.cols {
                acc = acc.e_add(&self.at(i, k).e_mul(rhs.at(k, j)));
            }
            acc
        })
    }

    /// Submatrix by (0-based) row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        Mat::from_fn(rows.len(), cols.len(), self.field, |i, j| {
            self.at(rows[i], cols[j]).clone()
        })
    }

    pub fn hconcat(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.rows, rhs.rows);
        Mat::from_fn(self.rows, self.cols + rhs.cols, self.field, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                rhs.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn block_diag(blocks: &[Mat<T>], field: FieldSpec) -> Mat<T> {
        let n: usize = blocks.iter().map(Mat::rows).sum();
        let m: usize = blocks.iter().map(Mat::cols).sum();
        let mut out = Mat::zeros(n, m, field);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.at(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Fraction-free determinant (Bareiss). Exact over any integral domain.
    pub fn det_bareiss(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::e_one(self.field);
        }
        let mut a: Vec<Vec<T>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut prev = T::e_one(self.field);
        let mut sign = false;
        for k in 0..n - 1 {
            if a[k][k].e_is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].e_is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = !sign;
                    }
                    None => return T::e_zero(self.field),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = a[i][j].e_mul(&a[k][k]).e_sub(&a[i][k].e_mul(&a[k][j]));
                    a[i][j] = t.e_exact_div(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = T::e_zero(self.field);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign {
            d.e_neg()
        } else {
            d
        }
    }

    /// Determinant by Laplace expansion; exponential, used only as an
    /// independent oracle on small matrices.
    pub fn det_laplace(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return T::e_one(self.field);
        }
        if n == 1 {
            return self.at(0, 0).clone();
        }
        let mut acc = T::e_zero(self.field);
        let rest: Vec<usize> = (1..n).collect();
        for j in 0..n {
            if self.at(0, j).e_is_zero() {
                continue;
            }
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = self.submatrix(&rest, &cols).det_laplace();
            let term = self.at(0, j).e_mul(&minor);
            acc = if j % 2 == 0 {
                acc.e_add(&term)
            } else {
                acc.e_sub(&term)
            };
        }
        acc
    }
}

impl<T: FieldEntry> Mat<T> {
    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Mat<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pivot = (r..m.rows).find(|&i| !m.at(i, c).e_is_zero());
            let Some(p) = pivot else { continue };
            for j in 0..m.cols {
                let t = m.at(r, j).clone();
                m.set(r, j, m.at(p, j).clone());
                m.set(p, j, t);
            }
            let inv = m.at(r, c).e_inv().expect("nonzero pivot");
            for j in 0..m.cols {
                m.set(r, j, m.at(r, j).e_mul(&inv));
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).e_is_zero() {
                    let f = m.at(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.at(i, j).e_sub(&f.e_mul(m.at(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::e_one(self.field);
        for c in 0..n {
            let pivot = (c..n).find(|&i| !m.at(i, c).e_is_zero());
            let Some(p) = pivot else {
                return T::e_zero(self.field);
            };
            if p != c {
                for j in 0..n {
                    let t = m.at(c, j).clone();
                    m.set(c, j, m.at(p, j).clone());
                    m.set(p, j, t);
                }
                det = det.e_neg();
            }
            det = det.e_mul(m.at(c, c));
            let inv = m.at(c, c).e_inv().unwrap();
            for i in c + 1..n {
                if !m.at(i, c).e_is_zero() {
                    let f = m.at(i, c).e_mul(&inv);
                    for j in c..n {
                        let v = m.at(i, j).e_sub(&f.e_mul(m.at(c, j)));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat<T>> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hconcat(&Mat::identity(n, self.field));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &cols))
    }

    /// One solution of `self * x = rhs` (columns independently), or `None`
    /// if any column is inconsistent. Free variables are set to zero.
    pub fn solve(&self, rhs: &Mat<T>) -> Option<Mat<T>> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hconcat(rhs);
        let (r, pivots) = aug.rref();
        let pivots: Vec<usize> = pivots.into_iter().filter(|&c| c < self.cols).collect();
        // inconsistent if a pivot lies in the rhs block
        for i in 0..r.rows {
            let lhs_zero = (0..self.cols).all(|j| r.at(i, j).e_is_zero());
            if lhs_zero && (self.cols..aug.cols).any(|j| !r.at(i, j).e_is_zero()) {
                return None;
            }
        }
        let mut x = Mat::zeros(self.cols, rhs.cols, self.field);
        for (pi, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.at(pi, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Basis of the right kernel as matrix columns.
    pub fn kernel_basis(&self) -> Mat<T> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(self.cols, free.len(), self.field);
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, T::e_one(self.field));
            for (pi, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, r.at(pi, fc).e_neg());
            }
        }
        basis
    }

    /// Basis of the column space, as matrix columns.
    pub fn column_space_basis(&self) -> Mat<T> {
        let (_, pivots) = self.rref();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &pivots)
    }

    pub fn pow(&self, e: usize) -> Mat<T> {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows, self.field);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }
}

/// Schur complement `G / G(I, J)` over field entries (0-based index sets).
///
/// Requires `|I| = |J|` and `G(I, J)` invertible; satisfies
/// `rank(G) = |I| + rank(G / G(I,J))` and, for square `G`,
/// `det(G) = ± det(G(I,J)) · det(G/G(I,J))`.
pub fn schur_complement<T: FieldEntry>(
    g: &Mat<T>,
    i_set: &[usize],
    j_set: &[usize],
) -> Result<Mat<T>> {
    if i_set.len() != j_set.len() {
        return Err(Error::DimensionMismatch(
            "Schur complement needs |I| = |J|".into(),
        ));
    }
    let ic: Vec<usize> = (0..g.rows()).filter(|r| !i_set.contains(r)).collect();
    let jc: Vec<usize> = (0..g.cols()).filter(|c| !j_set.contains(c)).collect();
    let block = g.submatrix(i_set, j_set);
    let inv = block.inverse().ok_or(Error::SingularBlock)?;
    let a = g.submatrix(&ic, &jc);
    let b = g.submatrix(&ic, j_set);
    let c = g.submatrix(i_set, &jc);
    Ok(a.sub(&b.matmul(&inv).matmul(&c)))
}

/// Schur complement of a polynomial matrix, computed in the fraction field.
pub fn schur_complement_poly(
    g: &Mat<Poly>,
    i_set: &[usize],
    j_set: &[usize],
) -> Result<Mat<RatFn>> {
    schur_complement(&g.map(|p| RatFn::from_poly(p.clone())), i_set, j_set)
}

/// Normal rank of a polynomial matrix: its rank over the fraction field
/// `F(s)`. Independent of the Smith-form elimination route.
pub fn normal_rank(g: &Mat<Poly>) -> usize {
    g.map(|p| RatFn::from_poly(p.clone())).rank()
}

impl<T: Entry + fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}
