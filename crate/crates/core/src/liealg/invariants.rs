//! Basis-independent data: traces, series, center, Killing form, derivations.

use num::Zero;
use serde::Serialize;

use super::{bracket_span, StructureTensor};
use crate::error::{Error, Result};
use crate::linalg::{inertia, Inertia, Matrix, Subspace, Vector};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct Unimodularity {
    pub unimodular: bool,
    /// `tr(ad_{e_i}) = Σ_j C_ij^j` for each `i`.
    pub traces: Vector,
}

pub fn is_unimodular(c: &StructureTensor) -> Unimodularity {
    let n = c.dim();
    let traces: Vector = (0..n)
        .map(|i| (0..n).map(|j| c.get(i, j, j).clone()).sum())
        .collect();
    Unimodularity {
        unimodular: traces.iter().all(Zero::is_zero),
        traces,
    }
}

/// `[a, b]` for subspaces of the algebra.
pub fn derived_algebra_of(c: &StructureTensor, a: &Subspace, b: &Subspace) -> Subspace {
    bracket_span(c, a, b)
}

/// `g, [g,g], [[g,g],[g,g]], …` up to the first repeated term.
pub fn derived_series(c: &StructureTensor) -> Vec<Subspace> {
    let mut series = vec![Subspace::full(c.dim())];
    loop {
        let last = series.last().expect("non-empty");
        let next = bracket_span(c, last, last);
        if &next == last {
            return series;
        }
        let done = next.is_zero();
        series.push(next);
        if done {
            return series;
        }
    }
}

/// `g, [g,g], [g,[g,g]], …` up to the first repeated term.
pub fn lower_central_series(c: &StructureTensor) -> Vec<Subspace> {
    let g = Subspace::full(c.dim());
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().expect("non-empty");
        let next = bracket_span(c, &g, last);
        if &next == last {
            return series;
        }
        let done = next.is_zero();
        series.push(next);
        if done {
            return series;
        }
    }
}

fn degree(series: &[Subspace]) -> Option<usize> {
    series.iter().position(Subspace::is_zero)
}

/// Smallest `k` with `D^k g = 0`, or `None` when the algebra is not solvable.
pub fn solvability_degree(c: &StructureTensor) -> Option<usize> {
    degree(&derived_series(c))
}

/// Smallest `k` with `C^k g = 0`, or `None` when the algebra is not nilpotent.
pub fn nilpotency_degree(c: &StructureTensor) -> Option<usize> {
    degree(&lower_central_series(c))
}

/// `{x : [x, e_j] = 0 ∀ j}`.
pub fn center(c: &StructureTensor) -> Subspace {
    let n = c.dim();
    // row (j, k) of the system: Σ_i x_i C_ij^k = 0
    let mut m = Matrix::zeros(n * n, n);
    for &(i, j, k) in c.nonzero() {
        m[(j * n + k, i)] = c.get(i, j, k).clone();
    }
    Subspace::span(n, m.nullspace()).expect("nullspace vectors have length n")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KillingForm {
    #[serde(skip)]
    pub matrix: Matrix,
    pub rank: usize,
    pub signature: Inertia,
}

impl KillingForm {
    pub fn is_definite(&self) -> bool {
        self.signature.zero == 0 && (self.signature.positive == 0 || self.signature.negative == 0)
    }
}

/// `K_ij = tr(ad_{e_i} ad_{e_j}) = Σ_{k,l} C_ik^l C_jl^k`.
pub fn killing_form(c: &StructureTensor) -> KillingForm {
    let n = c.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| c.ad_basis(i)).collect();
    let mut matrix = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = ads[i].mul(&ads[j]).trace();
            matrix[(j, i)] = t.clone();
            matrix[(i, j)] = t;
        }
    }
    KillingForm {
        rank: matrix.rank(),
        signature: inertia(&matrix),
        matrix,
    }
}

/// Basis of `Der(g)`. A derivation `D` acts on coordinates, so column `j`
/// of `D` holds `D e_j`.
pub fn derivation_algebra(c: &StructureTensor) -> Vec<Matrix> {
    let n = c.dim();
    let var = |a: usize, b: usize| a * n + b;
    let mut rows: Vec<Vector> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                // D[e_i,e_j] − [D e_i, e_j] − [e_i, D e_j], component k
                let mut row = vec![Q::zero(); n * n];
                for m in 0..n {
                    row[var(k, m)] += c.get(i, j, m);
                }
                for a in 0..n {
                    row[var(a, i)] -= c.get(a, j, k);
                    row[var(a, j)] -= c.get(i, a, k);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let solutions = if rows.is_empty() {
        (0..n * n).map(|v| crate::linalg::unit_vec(n * n, v)).collect()
    } else {
        Matrix::from_rows(rows).expect("rectangular").nullspace()
    };
    // present the basis in reduced echelon form so it is deterministic
    Subspace::span(n * n, solutions)
        .expect("length n²")
        .basis()
        .iter()
        .map(|v| Matrix::from_flat(n, n, v.clone()))
        .collect()
}

/// True when the matrix Lie algebra spanned by `basis` is nilpotent as a Lie
/// algebra (its lower central series reaches zero).
pub fn is_nilpotent_matrix_algebra(basis: &[Matrix]) -> Result<bool> {
    let Some(first) = basis.first() else {
        return Ok(true);
    };
    let (r, cdim) = (first.rows(), first.cols());
    if basis.iter().any(|m| m.rows() != r || m.cols() != cdim || !m.is_square()) {
        return Err(Error::Malformed("matrices must be square and of equal size".into()));
    }
    let size = r * cdim;
    let span = Subspace::span(size, basis.iter().map(Matrix::flatten))?;
    for (a, x) in basis.iter().enumerate() {
        for (b, y) in basis.iter().enumerate().skip(a + 1) {
            if !span.contains(&x.commutator(y).flatten()) {
                return Err(Error::NotBracketClosed(a + 1, b + 1));
            }
        }
    }
    let gens: Vec<Matrix> = span
        .basis()
        .iter()
        .map(|v| Matrix::from_flat(r, cdim, v.clone()))
        .collect();
    let mut current = span;
    loop {
        if current.is_zero() {
            return Ok(true);
        }
        let next = Subspace::span(
            size,
            gens.iter().flat_map(|x| {
                current
                    .basis()
                    .iter()
                    .map(move |y| x.commutator(&Matrix::from_flat(r, cdim, y.clone())).flatten())
            }),
        )?;
        if next == current {
            return Ok(false);
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;
    use crate::rational::q;

    #[test]
    fn traces() {
        let u = is_unimodular(&catalog("A2.1+A1", None).unwrap());
        assert!(!u.unimodular);
        assert_eq!(u.traces, vec![q(0), q(-1), q(0)]);
        assert!(is_unimodular(&catalog("sl2R", None).unwrap()).unimodular);
        assert!(is_unimodular(&catalog("3A1", None).unwrap()).unimodular);
    }

    #[test]
    fn series_and_degrees() {
        let a21 = catalog("A2.1+A1", None).unwrap();
        assert_eq!(derived_series(&a21)[1].dim(), 1);
        assert_eq!(solvability_degree(&a21), Some(2));
        assert_eq!(nilpotency_degree(&a21), None);
        let a33 = catalog("A3.3", None).unwrap();
        assert_eq!(derived_series(&a33)[1].dim(), 2);
        let ab = catalog("3A1", None).unwrap();
        assert_eq!(solvability_degree(&ab), Some(1));
        assert_eq!(nilpotency_degree(&ab), Some(1));
        let sl = catalog("sl2R", None).unwrap();
        assert_eq!(solvability_degree(&sl), None);
        assert_eq!(nilpotency_degree(&catalog("A3.1", None).unwrap()), Some(2));
        assert_eq!(nilpotency_degree(&catalog("gF", None).unwrap()), Some(6));
    }

    #[test]
    fn centers() {
        assert_eq!(center(&catalog("A2.1+A1", None).unwrap()).dim(), 1);
        assert_eq!(center(&catalog("A3.3", None).unwrap()).dim(), 0);
        assert_eq!(center(&catalog("3A1", None).unwrap()).dim(), 3);
    }

    #[test]
    fn killing_forms() {
        let k = killing_form(&catalog("sl2R", None).unwrap());
        assert_eq!(k.rank, 3);
        assert_eq!((k.signature.positive, k.signature.negative), (2, 1));
        assert_eq!(
            k.matrix,
            Matrix::from_i64(&[&[0, 0, -4], &[0, 2, 0], &[-4, 0, 0]])
        );
        let so = killing_form(&catalog("so3", None).unwrap());
        assert_eq!(so.matrix, Matrix::identity(3).scale(&q(-2)));
        assert!(so.is_definite());
        let ab = killing_form(&catalog("3A1", None).unwrap());
        assert!(ab.matrix.is_zero());
        assert_eq!(ab.rank, 0);
    }

    #[test]
    fn abelian_derivations_are_everything() {
        assert_eq!(derivation_algebra(&catalog("3A1", None).unwrap()).len(), 9);
    }

    #[test]
    fn matrix_nilpotency() {
        let e = |i: usize, j: usize| {
            let mut m = Matrix::zeros(2, 2);
            m[(i, j)] = q(1);
            m
        };
        let diag = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert_eq!(is_nilpotent_matrix_algebra(&[diag]), Ok(true));
        assert_eq!(is_nilpotent_matrix_algebra(&[e(0, 0), e(0, 1)]), Ok(false));
        assert_eq!(
            is_nilpotent_matrix_algebra(&[e(0, 1), e(1, 0)]),
            Err(Error::NotBracketClosed(1, 2))
        );
    }
}
