//! Basis changes depending on a parameter `ε` and their `ε → 0` limits.
//!
//! A family `U(ε)` acts like [`BasisChange`]: row `i` holds the coordinates
//! of the new basis vector `ẽ_i(ε) = Σ_p U_ip(ε) e_p`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::identify::identify3;
use crate::laurent::{LaurentFraction, LaurentMatrix, LaurentPoly};
use crate::liealg::{change_basis, validate_lie, AlgebraClass, BasisChange, StructureTensor};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentBasisFamily {
    matrix: LaurentMatrix,
    det: LaurentPoly,
}

impl LaurentBasisFamily {
    pub fn new(matrix: LaurentMatrix) -> Result<Self> {
        let det = matrix.determinant();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self { matrix, det })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(LaurentMatrix::identity(n)).expect("identity is invertible")
    }

    /// `diag(ε^k_1, …, ε^k_n)`.
    pub fn diagonal(exponents: &[i32]) -> Self {
        let mut m = LaurentMatrix::zeros(exponents.len());
        for (i, &k) in exponents.iter().enumerate() {
            m.set(i, i, LaurentPoly::monomial(Q::from_integer(1.into()), k));
        }
        Self::new(m).expect("monomial diagonal is invertible")
    }

    /// The `g_F → g_E` family. Its rows are the columns of the published
    /// matrix: `ẽ_2 = ε³ e_2 + ½ε⁴ e_4`, `ẽ_3 = ε⁴ e_3 + ½ε⁵ e_5`, ….
    pub fn uf() -> Self {
        Self::new(Self::published_uf().transpose()).expect("det = ε^34")
    }

    /// The matrix exactly as printed, rows as printed.
    pub fn published_uf() -> LaurentMatrix {
        let mono = |c: Q, k| LaurentPoly::monomial(c, k);
        let one = || Q::from_integer(1.into());
        let half = || Q::new(1.into(), 2.into());
        let mut m = LaurentMatrix::zeros(7);
        m.set(0, 0, mono(one(), 1));
        for i in 1..7 {
            m.set(i, i, mono(one(), i as i32 + 2));
        }
        for i in 3..7 {
            m.set(i, i - 2, mono(half(), i as i32 + 1));
        }
        m
    }

    /// Built-in families: `uF`, `identity:N`, `diag:k1,k2,…`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        if name == "uF" {
            return Ok(Self::uf());
        }
        if let Some(n) = name.strip_prefix("identity:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Malformed(format!("bad dimension in {name:?}")))?;
            return Ok(Self::identity(n));
        }
        if let Some(list) = name.strip_prefix("diag:") {
            let ks = list
                .split(',')
                .map(|k| k.trim().parse::<i32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Malformed(format!("bad exponents in {name:?}")))?;
            return Ok(Self::diagonal(&ks));
        }
        Err(Error::UnknownName(name.into()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    pub fn determinant(&self) -> &LaurentPoly {
        &self.det
    }

    /// `{"dim": n, "entries": {"i,p": {"exp": "coeff"}}}` with 1-based
    /// indices; a bare `entries` object is accepted with `dim` inferred.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Malformed(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("family must be a JSON object"))?;
        let (dim, entries) = match obj.get("entries") {
            Some(e) => {
                let dim = obj.get("dim").and_then(Value::as_u64).map(|d| d as usize);
                (dim, e.as_object().ok_or_else(|| bad("entries must be an object"))?)
            }
            None => (None, obj),
        };
        let mut parsed = Vec::new();
        for (key, val) in entries {
            let (i, p) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .filter(|&(a, b)| a > 0 && b > 0)
                .ok_or_else(|| bad(&format!("bad entry key {key:?}")))?;
            let map: BTreeMap<String, String> = serde_json::from_value(val.clone())
                .map_err(|e| bad(&format!("entry {key:?}: {e}")))?;
            parsed.push((i, p, LaurentPoly::from_json(&map)?));
        }
        let inferred = parsed.iter().map(|&(i, p, _)| i.max(p)).max().unwrap_or(0);
        let n = dim.unwrap_or(inferred);
        if n == 0 || inferred > n {
            return Err(bad("family dimension does not cover its entries"));
        }
        let mut m = LaurentMatrix::zeros(n);
        for (i, p, poly) in parsed {
            m.set(i - 1, p - 1, poly);
        }
        Self::new(m)
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let mut entries = serde_json::Map::new();
        for i in 0..n {
            for p in 0..n {
                let e = self.matrix.get(i, p);
                if !e.is_zero() {
                    entries.insert(format!("{},{}", i + 1, p + 1), json!(e.to_json()));
                }
            }
        }
        json!({ "dim": n, "entries": entries })
    }
}

/// Structure constants as exact functions of `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentTensor {
    dim: usize,
    entries: Vec<LaurentFraction>,
}

impl LaurentTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &LaurentFraction {
        &self.entries[(i * self.dim + j) * self.dim + k]
    }

    pub fn constant(c: &StructureTensor) -> Self {
        let n = c.dim();
        let mut entries = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    entries.push(LaurentFraction::poly(LaurentPoly::constant(c.get(i, j, k).clone())));
                }
            }
        }
        Self { dim: n, entries }
    }

    /// Nonzero entries with `i < j` (1-based), value and valuation.
    pub fn to_json(&self) -> Value {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let e = self.get(i, j, k);
                    if let Some(v) = e.valuation() {
                        out.push(json!({
                            "i": i + 1, "j": j + 1, "k": k + 1,
                            "value": e.to_string(), "valuation": v,
                        }));
                    }
                }
            }
        }
        json!({ "dim": n, "entries": out })
    }
}

/// `C̃_ij^k(ε) = Σ U_ip U_jq C_pq^r (U⁻¹)_rk`, with `U⁻¹ = adj(U) / det U`.
pub fn transform_parametric(c: &StructureTensor, u: &LaurentBasisFamily) -> Result<LaurentTensor> {
    let n = c.dim();
    if u.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.dim(),
        });
    }
    let adj = u.matrix().adjugate();
    let m = u.matrix();
    // t[p][q][k] = Σ_r C_pq^r adj_rk
    let mut t = vec![LaurentPoly::zero(); n * n * n];
    for &(p, q, r) in c.nonzero() {
        let coef = LaurentPoly::constant(c.get(p, q, r).clone());
        for k in 0..n {
            let a = adj.get(r, k);
            if a.is_zero() {
                continue;
            }
            let slot = &mut t[(p * n + q) * n + k];
            *slot = &*slot + &(&coef * a);
        }
    }
    let mut entries = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = vec![LaurentPoly::zero(); n];
            for p in 0..n {
                let uip = m.get(i, p);
                if uip.is_zero() {
                    continue;
                }
                for q in 0..n {
                    let ujq = m.get(j, q);
                    if ujq.is_zero() {
                        continue;
                    }
                    let w = uip * ujq;
                    for (k, slot) in acc.iter_mut().enumerate() {
                        let tv = &t[(p * n + q) * n + k];
                        if !tv.is_zero() {
                            *slot = &*slot + &(&w * tv);
                        }
                    }
                }
            }
            for num in acc {
                entries.push(LaurentFraction::new(num, u.determinant().clone())?);
            }
        }
    }
    Ok(LaurentTensor { dim: n, entries })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Limit {
    Converges(StructureTensor),
    /// First entry (1-based, `i < j`) with negative valuation.
    Divergent {
        i: usize,
        j: usize,
        k: usize,
        valuation: i64,
    },
}

impl Limit {
    pub fn into_result(self) -> Result<StructureTensor> {
        match self {
            Limit::Converges(t) => Ok(t),
            Limit::Divergent { i, j, k, valuation } => Err(Error::Divergent { i, j, k, valuation }),
        }
    }
}

pub fn limit(lt: &LaurentTensor) -> Limit {
    let n = lt.dim();
    let mut flat = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let e = lt.get(i, j, k);
                match e.limit() {
                    Some(v) => flat.push(v),
                    None => {
                        let (i, j) = (i.min(j), i.max(j));
                        return Limit::Divergent {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            valuation: i64::from(e.valuation().expect("nonzero")),
                        };
                    }
                }
            }
        }
    }
    Limit::Converges(StructureTensor::from_flat(n, flat))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionReport {
    pub holds: bool,
    pub target: String,
    /// Class of the limit when it is three-dimensional.
    pub identified: Option<String>,
    #[serde(skip)]
    pub limit: StructureTensor,
}

/// Does `source` contract to `target` along `u`? Three-dimensional limits
/// are compared by class; others by exact equality after `post`.
pub fn verify_contraction(
    source: &StructureTensor,
    u: &LaurentBasisFamily,
    target: &str,
    post: Option<&BasisChange>,
) -> Result<ContractionReport> {
    let class: AlgebraClass = target.parse()?;
    let lim = limit(&transform_parametric(source, u)?).into_result()?;
    if validate_lie(source).is_ok() && !validate_lie(&lim).is_ok() {
        return Err(Error::Internal("limit of Lie brackets violates Jacobi".into()));
    }
    let (holds, identified) = if lim.dim() == 3 && class.dim() == 3 && post.is_none() {
        let found = match identify3(&lim) {
            Ok(id) => id.class.to_string(),
            Err(Error::NoRationalWitness { class }) => class,
            Err(e) => return Err(e),
        };
        (found == class.to_string(), Some(found))
    } else {
        let moved = match post {
            Some(b) => change_basis(&lim, b)?,
            None => lim.clone(),
        };
        (moved == class.tensor(), None)
    };
    Ok(ContractionReport {
        holds,
        target: class.to_string(),
        identified,
        limit: lim,
    })
}

/// Rational value of a family at a nonzero `ε`, as a constant basis change.
pub fn evaluate(u: &LaurentBasisFamily, eps: &Q) -> Result<BasisChange> {
    let n = u.dim();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|p| {
                    u.matrix()
                        .get(i, p)
                        .terms()
                        .map(|(k, c)| c * num::pow::Pow::pow(eps, k))
                        .sum()
                })
                .collect()
        })
        .collect();
    BasisChange::from_rows(rows)
}
