//! Dense row-major matrices over exact rings, plus rational linear algebra.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Int, Rat};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type QMatrix = Matrix<BigRational>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<_> = self.data[r * self.cols..(r + 1) * self.cols].iter().collect();
            write!(f, "{:?}", row)?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_range(&self, start: usize, end: usize) -> Self {
        Matrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T> + Neg<Output = T>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x * s)
    }

    /// `row[dst] += k * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &T) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self[(src, c)] * k;
            let cur = &self[(dst, c)] + &v;
            self[(dst, c)] = cur;
        }
    }

    /// `col[dst] += k * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &T) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self[(r, src)] * k;
            let cur = &self[(r, dst)] + &v;
            self[(r, dst)] = cur;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for x in self.row_mut(r) {
            *x = -&*x;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    /// The bilinear form `uᵀ · self · v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).fold(T::zero(), |acc, (a, b)| &acc + &(a * b))
    }
}

impl<'a, T> Mul<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone + Zero,
    for<'b> &'b T: Add<&'b T, Output = T> + Mul<&'b T, Output = T>,
{
    type Output = Matrix<T>;

    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut data = vec![T::zero(); self.rows * rhs.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let prod = a * &rhs.data[k * rhs.cols + c];
                    let slot = &mut data[r * rhs.cols + c];
                    *slot = &*slot + &prod;
                }
            }
        }
        Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }
}

impl<'a, T> Add<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone,
    for<'b> &'b T: Add<&'b T, Output = T>,
{
    type Output = Matrix<T>;

    fn add(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a, T> Sub<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone,
    for<'b> &'b T: Sub<&'b T, Output = T>,
{
    type Output = Matrix<T>;

    fn sub(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T> Neg for &Matrix<T>
where
    T: Clone,
    for<'b> &'b T: Neg<Output = T>,
{
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn to_rational(&self) -> QMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return Int::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }
}

impl QMatrix {
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64(rows).to_rational()
    }

    /// Reduced row echelon form; returns the matrix and its pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..a.cols {
            if pr == a.rows {
                break;
            }
            let Some(p) = (pr..a.rows).find(|&r| !a[(r, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(pr, p);
            let inv = a[(pr, c)].recip();
            for x in a.row_mut(pr) {
                *x = &*x * &inv;
            }
            for r in 0..a.rows {
                if r != pr && !a[(r, c)].is_zero() {
                    let k = -a[(r, c)].clone();
                    a.add_row_multiple(r, pr, &k);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`, one vector per row.
    pub fn kernel(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = QMatrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out[(k, f)] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                out[(k, p)] = -r[(i, f)].clone();
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        aug = red;
        Some(QMatrix::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }

    /// Canonical basis (nonzero RREF rows) of the row space.
    pub fn row_space(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        r.row_range(0, pivots.len())
    }

    /// Whether `v` lies in the row space of `self`.
    pub fn row_space_contains(&self, v: &[Rat]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let base = self.rank();
        let ext = self.vstack(&QMatrix::from_rows(vec![v.to_vec()], v.len()));
        ext.rank() == base
    }

    /// Row space of `self` is contained in the row space of `other`.
    pub fn row_space_within(&self, other: &QMatrix) -> bool {
        other.vstack(self).rank() == other.rank()
    }

    /// Solves `x · self = b` for a row vector `x`, if a solution exists.
    pub fn solve_left(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        let t = self.transpose();
        t.solve(b)
    }

    /// Solves `self · x = b`, returning one solution if consistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let aug = QMatrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Nilpotency index: least `m` with `self^m = 0`, if at most `dim`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert!(self.is_square());
        let n = self.rows;
        let mut p = QMatrix::identity(n);
        for m in 0..=n {
            if p.is_zero() {
                return Some(m);
            }
            p = &p * self;
        }
        None
    }

    pub fn pow(&self, k: usize) -> QMatrix {
        let mut p = QMatrix::identity(self.rows);
        for _ in 0..k {
            p = &p * self;
        }
        p
    }
}

/// Intersection of two row spaces, as a basis matrix.
pub fn intersect_row_spaces(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = a.cols();
    if a.rows() == 0 || b.rows() == 0 {
        return QMatrix::zeros(0, n);
    }
    // x·A = y·B  <=>  [x, -y] · [A; B] = 0
    let stacked = a.vstack(&(-b));
    let ker = stacked.transpose().kernel();
    let coeffs = QMatrix::from_fn(ker.rows(), a.rows(), |r, c| ker[(r, c)].clone());
    (&coeffs * a).row_space()
}

pub(crate) fn int_vec_is_zero(v: &[Int]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Non-negative gcd of all entries (zero for the zero vector).
pub(crate) fn content(v: &[Int]) -> Int {
    use num::Integer;
    v.iter().fold(Int::zero(), |g, x| g.gcd(x)).abs()
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_small_cases() {
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).determinant(), Int::from(-1));
        assert_eq!(
            IntMatrix::from_i64(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]).determinant(),
            Int::from(4)
        );
        assert_eq!(IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).determinant(), Int::zero());
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), Int::one());
    }

    #[test]
    fn kernel_and_inverse() {
        let a = QMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.rows(), 2);
        for r in 0..k.rows() {
            assert!(a.mul_vec(k.row(r)).iter().all(|x| x.is_zero()));
        }
        let m = QMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, QMatrix::identity(2));
        assert!(a.inverse().is_none());
    }

    #[test]
    fn row_space_intersection() {
        let a = QMatrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        let b = QMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1]]);
        let i = intersect_row_spaces(&a, &b);
        assert_eq!(i, QMatrix::from_int_rows(&[&[0, 1, 0]]));
    }

    #[test]
    fn solve_reports_inconsistency() {
        let a = QMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(a.solve(&[rat(1), rat(2)]).is_none());
        let x = a.solve(&[rat(3), rat(3)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat(3), rat(3)]);
    }
}
