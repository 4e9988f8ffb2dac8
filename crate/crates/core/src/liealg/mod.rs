//! Structure-constant tensors `C_ij^k` with `[e_i, e_j] = Σ_k C_ij^k e_k`.

mod catalog;
mod invariants;

pub use catalog::{catalog, AlgebraClass};
pub use invariants::{
    center, derivation_algebra, derived_algebra_of, derived_series, is_nilpotent_matrix_algebra,
    is_unimodular, killing_form, lower_central_series, nilpotency_degree, solvability_degree,
    KillingForm, Unimodularity,
};

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, solve_in_basis, zero_vec, Matrix, Subspace, Vector};
use crate::rational::{fmt_q, parse_q, Q};

#[derive(Clone)]
pub struct StructureTensor {
    dim: usize,
    c: Vec<Q>,
    nonzero: Vec<(usize, usize, usize)>,
}

impl PartialEq for StructureTensor {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.c == other.c
    }
}

impl Eq for StructureTensor {}

impl fmt::Debug for StructureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureTensor(dim {}) {{ {} }}", self.dim, self.relations_string())
    }
}

impl StructureTensor {
    pub fn zeros(dim: usize) -> Self {
        Self::from_flat(dim, vec![Q::zero(); dim * dim * dim])
    }

    /// Takes the flat `n³` array indexed `(i * n + j) * n + k` (0-based).
    pub fn from_flat(dim: usize, c: Vec<Q>) -> Self {
        assert_eq!(c.len(), dim * dim * dim, "structure tensor must have n³ entries");
        let nonzero = (0..dim)
            .flat_map(|i| (0..dim).flat_map(move |j| (0..dim).map(move |k| (i, j, k))))
            .filter(|&(i, j, k)| !c[(i * dim + j) * dim + k].is_zero())
            .collect();
        Self { dim, c, nonzero }
    }

    /// Builds the tensor from the nonzero relations `[e_i, e_j] = Σ coeff e_k`
    /// with 1-based indices; the `[e_j, e_i]` entries follow by antisymmetry.
    pub fn from_relations(dim: usize, relations: &[(usize, usize, Vec<(usize, Q)>)]) -> Self {
        let mut c = vec![Q::zero(); dim * dim * dim];
        for (i, j, rhs) in relations {
            let (i, j) = (i - 1, j - 1);
            for (k, v) in rhs {
                let k = k - 1;
                c[(i * dim + j) * dim + k] += v;
                c[(j * dim + i) * dim + k] -= v;
            }
        }
        Self::from_flat(dim, c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `C_ij^k`, 0-based.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero `(i, j, k)` triples in lexicographic order.
    pub fn nonzero(&self) -> &[(usize, usize, usize)] {
        &self.nonzero
    }

    pub fn is_abelian(&self) -> bool {
        self.nonzero.is_empty()
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let n = self.dim;
        self.c[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vector {
        let mut out = zero_vec(self.dim);
        for &(i, j, k) in &self.nonzero {
            if x[i].is_zero() || y[j].is_zero() {
                continue;
            }
            out[k] += &x[i] * &y[j] * self.get(i, j, k);
        }
        out
    }

    /// Matrix of `ad_x`: column `j` holds `[x, e_j]`.
    pub fn ad(&self, x: &[Q]) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for &(i, j, k) in &self.nonzero {
            if !x[i].is_zero() {
                m[(k, j)] += &x[i] * self.get(i, j, k);
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m[(k, j)] = self.get(i, j, k).clone();
            }
        }
        m
    }

    /// Human-readable nonzero relations, e.g. `[E1,E3]=E2, [E2,E5]=2E4`.
    pub fn relations_string(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.bracket_basis(i, j);
                if !is_zero_vec(&v) {
                    parts.push(format!("[E{},E{}]={}", i + 1, j + 1, format_combination(&v)));
                }
            }
        }
        parts.join(", ")
    }

    pub fn to_json(&self) -> TensorJson {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let coeffs: BTreeMap<usize, String> = (0..self.dim)
                    .filter(|&k| !self.get(i, j, k).is_zero())
                    .map(|k| (k + 1, fmt_q(self.get(i, j, k))))
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketJson {
                        i: i + 1,
                        j: j + 1,
                        coeffs,
                    });
                }
            }
        }
        TensorJson {
            dim: self.dim,
            brackets,
        }
    }

    pub fn from_json(j: &TensorJson) -> Result<Self> {
        let n = j.dim;
        if n == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut rels = Vec::new();
        for b in &j.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n || b.i >= b.j {
                return Err(Error::Malformed(format!(
                    "bracket indices ({}, {}) must satisfy 1 <= i < j <= {n}",
                    b.i, b.j
                )));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(Error::Malformed(format!("duplicate bracket ({}, {})", b.i, b.j)));
            }
            let mut rhs = Vec::new();
            for (&k, v) in &b.coeffs {
                if k == 0 || k > n {
                    return Err(Error::Malformed(format!("coefficient index {k} out of range")));
                }
                rhs.push((k, parse_q(v)?));
            }
            rels.push((b.i, b.j, rhs));
        }
        Ok(Self::from_relations(n, &rels))
    }
}

/// `{"dim": n, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": "1"}}]}`;
/// only `i < j` is stored.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TensorJson {
    pub dim: usize,
    pub brackets: Vec<BracketJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, String>,
}

/// Renders `Σ v_k E_k`, e.g. `E1-2E3` or `1/2E4`.
pub fn format_combination(v: &[Q]) -> String {
    let mut s = String::new();
    for (k, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let neg = x < &Q::zero();
        let abs = if neg { -x.clone() } else { x.clone() };
        if neg {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if abs != Q::from_integer(1.into()) {
            s.push_str(&fmt_q(&abs));
        }
        s.push_str(&format!("E{}", k + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// An invertible change of basis. Row `i` holds the old-basis coordinates of
/// the new vector `ẽ_i = Σ_p u_ip e_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    matrix: Matrix,
    inverse: Matrix,
}

impl BasisChange {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(Self { matrix, inverse })
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Matrix::identity(n)).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// Applying `self` then `next` equals applying `self.then(next)`.
    pub fn then(&self, next: &BasisChange) -> BasisChange {
        BasisChange {
            matrix: next.matrix.mul(&self.matrix),
            inverse: self.inverse.mul(&next.inverse),
        }
    }

    pub fn to_json(&self) -> Vec<Vec<String>> {
        self.matrix
            .to_rows()
            .iter()
            .map(|r| r.iter().map(fmt_q).collect())
            .collect()
    }

    pub fn from_json(rows: &[Vec<String>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| parse_q(x)).collect::<Result<Vector>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

/// `C̃_ij^k = Σ u_ip u_jq C_pq^r (u⁻¹)_rk`.
pub fn change_basis(c: &StructureTensor, u: &BasisChange) -> Result<StructureTensor> {
    let n = c.dim();
    if u.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.dim(),
        });
    }
    let rows = u.matrix.to_rows();
    let inv_t = u.inverse.transpose();
    let mut out = vec![Q::zero(); n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            let b = c.bracket(&rows[i], &rows[j]);
            if is_zero_vec(&b) {
                continue;
            }
            let coords = inv_t.mul_vec(&b);
            for (k, v) in coords.into_iter().enumerate() {
                if !v.is_zero() {
                    out[(j * n + i) * n + k] = -v.clone();
                    out[(i * n + j) * n + k] = v;
                }
            }
        }
    }
    Ok(StructureTensor::from_flat(n, out))
}

/// Outcome of [`validate_lie`].
#[derive(Clone, Debug, PartialEq)]
pub enum LieReport {
    Ok,
    /// `C_ij^k + C_ji^k ≠ 0` (1-based indices).
    Antisymmetry { i: usize, j: usize, k: usize, sum: Q },
    /// The Jacobiator `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`
    /// has component `residual` along `e_l` (1-based indices).
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        residual: Q,
        jacobiator: Vector,
    },
}

impl LieReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, LieReport::Ok)
    }

    pub fn witness_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            LieReport::Ok => json!(null),
            LieReport::Antisymmetry { i, j, k, sum } => {
                json!({ "kind": "antisymmetry", "i": i, "j": j, "k": k, "sum": fmt_q(sum) })
            }
            LieReport::Jacobi {
                i,
                j,
                k,
                l,
                residual,
                jacobiator,
            } => json!({
                "kind": "jacobi",
                "i": i, "j": j, "k": k, "l": l,
                "residual": fmt_q(residual),
                "jacobiator": format_combination(jacobiator),
            }),
        }
    }
}

pub fn jacobiator(c: &StructureTensor, x: &[Q], y: &[Q], z: &[Q]) -> Vector {
    let mut out = c.bracket(x, &c.bracket(y, z));
    let a = c.bracket(y, &c.bracket(z, x));
    let b = c.bracket(z, &c.bracket(x, y));
    let one = Q::from_integer(1.into());
    axpy(&mut out, &one, &a);
    axpy(&mut out, &one, &b);
    out
}

pub fn validate_lie(c: &StructureTensor) -> LieReport {
    let n = c.dim();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let sum = c.get(i, j, k) + c.get(j, i, k);
                if !sum.is_zero() {
                    return LieReport::Antisymmetry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        sum,
                    };
                }
            }
        }
    }
    let e = |i: usize| crate::linalg::unit_vec(n, i);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let jac = jacobiator(c, &e(i), &e(j), &e(k));
                if let Some(l) = jac.iter().position(|x| !x.is_zero()) {
                    return LieReport::Jacobi {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        l: l + 1,
                        residual: jac[l].clone(),
                        jacobiator: jac,
                    };
                }
            }
        }
    }
    LieReport::Ok
}

/// Fails with [`Error::NotLie`] unless the tensor is a Lie algebra.
pub fn ensure_lie(c: &StructureTensor) -> Result<()> {
    match validate_lie(c) {
        LieReport::Ok => Ok(()),
        bad => Err(Error::NotLie(bad.witness_json().to_string())),
    }
}

/// Structure constants of the bracket restricted to the span of `basis`,
/// expressed in `basis` itself. Fails with a witness if the span is not
/// closed.
pub fn restrict_to_basis(c: &StructureTensor, basis: &[Vector]) -> Result<StructureTensor> {
    let m = basis.len();
    let mut out = vec![Q::zero(); m * m * m];
    for a in 0..m {
        for b in a + 1..m {
            let br = c.bracket(&basis[a], &basis[b]);
            let coords = solve_in_basis(basis, &br).ok_or_else(|| Error::NotClosed {
                left: basis[a].iter().map(fmt_q).collect(),
                right: basis[b].iter().map(fmt_q).collect(),
            })?;
            for (k, v) in coords.into_iter().enumerate() {
                if !v.is_zero() {
                    out[(b * m + a) * m + k] = -v.clone();
                    out[(a * m + b) * m + k] = v;
                }
            }
        }
    }
    Ok(StructureTensor::from_flat(m, out))
}

/// Span of `{[x, y] : x ∈ a, y ∈ b}`.
pub fn bracket_span(c: &StructureTensor, a: &Subspace, b: &Subspace) -> Subspace {
    let gens: Vec<Vector> = a
        .basis()
        .iter()
        .flat_map(|x| b.basis().iter().map(move |y| c.bracket(x, y)))
        .filter(|v| !is_zero_vec(v))
        .collect();
    Subspace::span(c.dim(), gens).expect("bracket vectors live in the algebra")
}
