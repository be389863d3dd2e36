//! Dense exact vectors and matrices over ℚ.
//!
//! Vectors are coordinate rows; matrices act on them from the right
//! (`x ↦ x·M`) to match the row convention used for automorphisms.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Vector(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    /// The basis vector `e_i`, 1-based.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        let mut v = Self::zero(dim);
        v.0[i - 1] = Rational::one();
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    fn check_same(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("vectors of length {} and {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_same(other)?;
        Ok(Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_same(other)?;
        Ok(Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn dot(&self, other: &Vector) -> Result<Rational> {
        self.check_same(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    /// `self += c * other`, the workhorse of the multilinear evaluators.
    pub fn axpy(&mut self, c: &Rational, other: &Vector) {
        debug_assert_eq!(self.dim(), other.dim());
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    /// Row vector times matrix.
    pub fn mul_matrix(&self, m: &Matrix) -> Result<Vector> {
        if self.dim() != m.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                self.dim(),
                m.rows,
                m.cols
            )));
        }
        let mut out = Vector::zero(m.cols);
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..m.cols {
                let b = &m[(i, j)];
                if !b.is_zero() {
                    out.0[j] += a * b;
                }
            }
        }
        Ok(out)
    }
}

impl Index<usize> for Vector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl From<Vec<Rational>> for Vector {
    fn from(v: Vec<Rational>) -> Self {
        Vector(v)
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Vector {
    /// Prints as a combination of basis vectors, e.g. `1/2 e2 - e3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "e{}", k + 1)?;
            } else {
                write!(f, "{mag} e{}", k + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vector,
    pub kernel: Vec<Vector>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, a) in entries.iter().enumerate() {
            m[(i, i)] = a.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from vectors taken as rows.
    pub fn from_vectors(rows: &[Vector]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|v| v.entries().to_vec()).collect())
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

    pub fn row(&self, i: usize) -> Vector {
        Vector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).into_entries()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok(Vector((0..self.rows).map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum()).collect()))
    }

    /// Determinant by Bareiss elimination on an integer matrix obtained by
    /// clearing row denominators, so no intermediate fraction ever appears.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            scale *= &l;
            a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Rational::from_bigints(sign * &a[n - 1][n - 1], scale)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
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
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = v;
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

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Canonical basis of `{x : A x = 0}`: one vector per free column, in
    /// ascending column order, with that free variable set to 1 and the
    /// other free variables set to 0.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = Vector::zero(self.cols);
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Solves `A x = b`: a particular solution (free variables zero) plus
    /// the canonical kernel basis.
    pub fn solve_affine(&self, b: &Vector) -> Result<AffineSolution> {
        if b.dim() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} system with right-hand side of length {}",
                self.rows,
                self.cols,
                b.dim()
            )));
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Infeasible);
        }
        let mut particular = Vector::zero(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            particular[p] = r[(row, self.cols)].clone();
        }
        Ok(AffineSolution { particular, kernel: self.kernel_basis() })
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            self.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Builds a matrix from integer or `(num, den)` literals; handy in tables.
#[macro_export]
macro_rules! qmat {
    ($([$($e:expr),* $(,)?]),* $(,)?) => {
        $crate::linalg::Matrix::from_rows(vec![$(vec![$($crate::rational::Rational::from($e)),*]),*])
            .expect("rectangular literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use proptest::prelude::*;

    fn m(rows: &[&[Rational]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    // Leibniz expansion, independent of the elimination code.
    fn det_by_permutations(a: &Matrix) -> Rational {
        fn perms(n: usize) -> Vec<(Vec<usize>, i32)> {
            if n == 0 {
                return vec![(vec![], 1)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    let sign = if (n - 1 - pos).is_multiple_of(2) { s } else { -s };
                    out.push((q, sign));
                }
            }
            out
        }
        let n = a.rows();
        perms(n)
            .into_iter()
            .map(|(p, s)| {
                let prod = (0..n).fold(Rational::one(), |acc, i| acc * &a[(i, p[i])]);
                if s > 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    #[test]
    fn kernel_of_single_row() {
        let a = m(&[&[int(1), int(1)]]);
        assert_eq!(a.kernel_basis(), vec![Vector::new(vec![int(-1), int(1)])]);
        let s = a.solve_affine(&Vector::new(vec![int(2)])).unwrap();
        assert_eq!(s.particular, Vector::new(vec![int(2), int(0)]));
        assert_eq!(s.kernel, vec![Vector::new(vec![int(-1), int(1)])]);
    }

    #[test]
    fn singular_and_infeasible() {
        let a = m(&[&[int(1), int(2)], &[int(2), int(4)]]);
        assert!(matches!(a.inverse(), Err(Error::Singular)));
        assert_eq!(a.determinant().unwrap(), int(0));
        assert!(matches!(a.solve_affine(&Vector::new(vec![int(1), int(1)])), Err(Error::Infeasible)));
        let r = m(&[&[int(1), int(2), int(3)]]);
        assert!(matches!(r.determinant(), Err(Error::NotSquare { .. })));
        assert!(matches!(r.inverse(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn mismatched_shapes() {
        let a = Matrix::identity(2);
        let b = Matrix::identity(3);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch(_))));
        assert!(Vector::zero(2).add(&Vector::zero(3)).is_err());
    }

    #[test]
    fn determinant_needs_row_swap() {
        let a = m(&[&[int(0), q(1, 2), int(0)], &[q(2, 3), int(0), int(0)], &[int(0), int(0), int(5)]]);
        assert_eq!(a.determinant().unwrap(), q(-5, 3));
    }

    #[test]
    fn basis_vector_display() {
        let v = Vector::new(vec![int(0), q(1, 2), int(-1)]);
        assert_eq!(v.to_string(), "1/2 e2 - e3");
        assert_eq!(Vector::zero(3).to_string(), "0");
        assert!(Vector::basis(3, 4).is_err());
        assert!(Vector::basis(3, 0).is_err());
    }

    fn entry() -> impl Strategy<Value = Rational> {
        prop_oneof![
            3 => Just(int(0)),
            7 => (-9i64..10, 1i64..6).prop_map(|(a, b)| q(a, b)),
        ]
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(entry(), rows * cols)
            .prop_map(move |d| Matrix::from_rows(d.chunks(cols).map(<[_]>::to_vec).collect()).unwrap())
    }

    fn square() -> impl Strategy<Value = Matrix> {
        (1usize..5).prop_flat_map(|n| matrix(n, n))
    }

    proptest! {
        #[test]
        fn determinant_matches_expansion(a in square()) {
            prop_assert_eq!(a.determinant().unwrap(), det_by_permutations(&a));
        }

        #[test]
        fn product_determinant(pair in (1usize..4).prop_flat_map(|n| (matrix(n, n), matrix(n, n)))) {
            let (a, b) = pair;
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
        }

        #[test]
        fn inverse_round_trip(a in square()) {
            match a.inverse() {
                Ok(inv) => {
                    prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(a.rows()));
                    prop_assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(a.rows()));
                }
                Err(Error::Singular) => prop_assert!(a.determinant().unwrap().is_zero()),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn kernel_is_canonical(a in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
            let ker = a.kernel_basis();
            prop_assert_eq!(ker.len() + a.rank(), a.cols());
            for v in &ker {
                prop_assert!(a.mul_vec(v).unwrap().is_zero());
            }
            // independence via the identity block on the free columns
            if !ker.is_empty() {
                prop_assert_eq!(Matrix::from_vectors(&ker).unwrap().rank(), ker.len());
            }
        }

        #[test]
        fn affine_solutions_solve(a in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c)),
                                  x in proptest::collection::vec(entry(), 5)) {
            let x = Vector::new(x[..a.cols()].to_vec());
            let b = a.mul_vec(&x).unwrap();
            let s = a.solve_affine(&b).unwrap();
            prop_assert_eq!(a.mul_vec(&s.particular).unwrap(), b);
            // x differs from the particular solution by a kernel element
            let diff = x.sub(&s.particular).unwrap();
            let mut rows = s.kernel.clone();
            rows.push(diff);
            prop_assert_eq!(Matrix::from_vectors(&rows).unwrap().rank(), s.kernel.len());
        }
    }
}
