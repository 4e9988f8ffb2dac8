//! Dense exact linear algebra over the rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

pub type Vector = Vec<Q>;

pub fn zero_vec(n: usize) -> Vector {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += s * v`
pub fn axpy(acc: &mut [Q], s: &Q, v: &[Q]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += s * x;
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_q).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Malformed("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::q(x)).collect())
                .collect(),
        )
        .expect("rectangular literal")
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

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn flatten(&self) -> Vector {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vector) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead >= m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, lead);
            let inv = m[(lead, c)].recip();
            for x in c..m.cols {
                let v = &m[(lead, x)] * &inv;
                m[(lead, x)] = v;
            }
            for r in 0..m.rows {
                if r == lead || m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for x in c..m.cols {
                    if m[(lead, x)].is_zero() {
                        continue;
                    }
                    let v = &m[(lead, x)] * &f;
                    m[(r, x)] -= v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vec(self.cols);
                v[f] = Q::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] / &piv;
                for x in c..n {
                    let v = &m[(c, x)] * &f;
                    m[(r, x)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Q::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Ok(inv)
    }

    /// Congruence diagonalization of a symmetric matrix: returns `(p, d)` with
    /// `p * self * pᵀ = diag(d)` and `p` invertible.
    pub fn congruence_diagonalize(&self) -> (Matrix, Vector) {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut p = Matrix::identity(n);
        for k in 0..n {
            if a[(k, k)].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                    a.swap_rows(i, k);
                    a.swap_cols(i, k);
                    p.swap_rows(i, k);
                } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                    // a_kk = a_jj = 0 and a_kj != 0: row/col k += row/col j
                    // makes the new a_kk = 2 a_kj.
                    a.add_row(j, k, &Q::one());
                    a.add_col(j, k, &Q::one());
                    p.add_row(j, k, &Q::one());
                } else {
                    continue;
                }
            }
            let piv = a[(k, k)].clone();
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = -(&a[(i, k)] / &piv);
                a.add_row(k, i, &f);
                a.add_col(k, i, &f);
                p.add_row(k, i, &f);
            }
        }
        let d = (0..n).map(|i| a[(i, i)].clone()).collect();
        (p, d)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row `dst` += f * row `src`
    fn add_row(&mut self, src: usize, dst: usize, f: &Q) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * f;
            self[(dst, c)] += v;
        }
    }

    fn add_col(&mut self, src: usize, dst: usize, f: &Q) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * f;
            self[(r, dst)] += v;
        }
    }
}

/// Counts of positive, negative and zero entries after congruence
/// diagonalization of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

pub fn inertia(symmetric: &Matrix) -> Inertia {
    let (_, d) = symmetric.congruence_diagonalize();
    Inertia {
        positive: d.iter().filter(|x| x.is_positive()).count(),
        negative: d.iter().filter(|x| x.is_negative()).count(),
        zero: d.iter().filter(|x| x.is_zero()).count(),
    }
}

/// A linear subspace of `Q^ambient`, stored as its reduced row-echelon basis.
///
/// Because the RREF basis is unique, structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("[{}]", v.iter().map(fmt_q).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "Subspace(dim {} in {}: {})", self.dim(), self.ambient, rows.join(" "))
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| unit_vec(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<I>(ambient: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vector>,
    {
        let rows: Vec<Vector> = generators.into_iter().collect();
        if let Some(bad) = rows.iter().find(|r| r.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: bad.len(),
            });
        }
        if rows.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let (red, pivots) = Matrix::from_rows(rows)?.rref();
        let basis = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
        Ok(Self {
            ambient,
            basis,
            pivots,
        })
    }

    /// Span of the coordinate vectors `e_i` for the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        Self::span(ambient, indices.iter().map(|&i| unit_vec(ambient, i)))
            .expect("indices in range")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its component along this subspace, measured at the pivots.
    pub fn reduce(&self, v: &[Q]) -> Vector {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = -r[p].clone();
                axpy(&mut r, &f, b);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vector> {
        if self.contains(v) {
            Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
        } else {
            None
        }
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        )
        .expect("same ambient dimension")
    }

    /// True when `self ⊕ other` is the whole ambient space.
    pub fn is_complement(&self, other: &Subspace) -> bool {
        self.dim() + other.dim() == self.ambient && self.join(other).dim() == self.ambient
    }
}

/// Expresses `v` in an arbitrary (not necessarily echelon) basis, by solving
/// the linear system. Returns `None` when `v` is outside the span.
pub fn solve_in_basis(basis: &[Vector], v: &[Q]) -> Option<Vector> {
    let n = v.len();
    let k = basis.len();
    let mut m = Matrix::zeros(n, k + 1);
    for (c, b) in basis.iter().enumerate() {
        for r in 0..n {
            m[(r, c)] = b[r].clone();
        }
    }
    for r in 0..n {
        m[(r, k)] = v[r].clone();
    }
    let (red, pivots) = m.rref();
    if pivots.contains(&k) {
        return None;
    }
    let mut x = zero_vec(k);
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = red[(row, k)].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        assert_eq!(m.determinant(), q(5));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let sing = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.determinant(), q(0));
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = Matrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&m.mul_vec(v)));
        }
    }

    #[test]
    fn congruence_handles_zero_diagonal() {
        let k = Matrix::from_i64(&[&[0, 0, -4], &[0, 2, 0], &[-4, 0, 0]]);
        let (p, d) = k.congruence_diagonalize();
        let prod = p.mul(&k).mul(&p.transpose());
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d[i].clone() } else { q(0) };
                assert_eq!(prod[(i, j)], want);
            }
        }
        assert_eq!(
            inertia(&k),
            Inertia {
                positive: 2,
                negative: 1,
                zero: 0
            }
        );
    }

    #[test]
    fn subspace_equality_is_span_equality() {
        let a = Subspace::span(3, vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(0)]]).unwrap();
        let b = Subspace::coordinate(3, &[0, 1]);
        assert_eq!(a, b);
        assert!(a.contains(&[qf(1, 2), q(7), q(0)]));
        assert!(!a.contains(&[q(0), q(0), q(1)]));
        assert!(a.is_complement(&Subspace::coordinate(3, &[2])));
        assert!(!a.is_complement(&Subspace::coordinate(3, &[1])));
    }

    #[test]
    fn solve_in_arbitrary_basis() {
        let basis = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(solve_in_basis(&basis, &[q(3), q(1)]), Some(vec![q(2), q(1)]));
        assert_eq!(solve_in_basis(&basis[..1], &[q(3), q(1)]), None);
    }
}
