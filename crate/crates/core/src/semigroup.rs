//! Finite Abelian semigroups given by multiplication tables.
//!
//! Tables are stored 0-based; the JSON form and all user-facing witnesses are
//! 1-based, matching the `λ_1 … λ_N` labelling.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::*;

/// Default largest order accepted by [`enumerate_abelian_semigroups`].
pub const DEFAULT_MAX_ORDER: usize = 4;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemigroupTable {
    order: usize,
    table: Vec<usize>,
}

impl fmt::Debug for SemigroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semigroup{:?}", self.to_one_based())
    }
}

/// Outcome of [`validate_semigroup`]. Witnesses are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SemigroupReport {
    pub commutativity: Vec<(usize, usize)>,
    pub associativity: Vec<(usize, usize, usize)>,
}

impl SemigroupReport {
    pub fn is_ok(&self) -> bool {
        self.commutativity.is_empty() && self.associativity.is_empty()
    }
}

/// JSON shape `{"order": N, "table": [[...], ...]}` with 1-based entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemigroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl SemigroupTable {
    /// Builds a table from 1-based rows without checking the semigroup axioms.
    pub fn from_one_based(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Malformed("empty semigroup table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Malformed("semigroup table is not square".into()));
            }
            for &x in row {
                if x == 0 || x > n {
                    return Err(Error::Malformed(format!(
                        "table entry {x} outside 1..={n}"
                    )));
                }
                table.push(x - 1);
            }
        }
        Ok(Self { order: n, table })
    }

    /// Like [`from_one_based`](Self::from_one_based) but also rejects tables
    /// that are not commutative and associative.
    pub fn new(rows: &[Vec<usize>]) -> Result<Self> {
        let t = Self::from_one_based(rows)?;
        let report = validate_semigroup(&t);
        if report.is_ok() {
            Ok(t)
        } else {
            Err(Error::NotSemigroup(format!("{report:?}")))
        }
    }

    pub(crate) fn from_raw(order: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        Self { order, table }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of `λ_a λ_b` (0-based).
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    /// Selector `K_ab^c`: 1 when `λ_a λ_b = λ_c`.
    pub fn selector(&self, a: usize, b: usize, c: usize) -> u8 {
        u8::from(self.mul(a, b) == c)
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b) + 1).collect())
            .collect()
    }

    pub fn to_json(&self) -> SemigroupJson {
        SemigroupJson {
            order: self.order,
            table: self.to_one_based(),
        }
    }

    pub fn from_json(j: &SemigroupJson) -> Result<Self> {
        if j.order != j.table.len() {
            return Err(Error::Malformed(format!(
                "order {} does not match {} table rows",
                j.order,
                j.table.len()
            )));
        }
        Self::new(&j.table)
    }

    /// The set `SS = {λ_a λ_b}` (0-based indices).
    pub fn products(&self) -> BTreeSet<usize> {
        self.table.iter().copied().collect()
    }

    /// Table relabelled by `perm`: element `a` becomes `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> SemigroupTable {
        let n = self.order;
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                t[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        SemigroupTable { order: n, table: t }
    }

    /// Lexicographically least relabelling over all permutations.
    pub fn canonical(&self) -> SemigroupTable {
        permutations(self.order)
            .into_iter()
            .map(|p| self.relabel(&p))
            .min()
            .expect("at least the identity permutation")
    }

    /// Built-in `S2`: both elements multiply to `λ_2`, the zero.
    pub fn s2() -> Self {
        Self::new(&[vec![2, 2], vec![2, 2]]).expect("S2 is a semigroup")
    }

    /// Built-in `S3 = {0 = λ_1, λ_2, λ_3}` with `λ_2 λ_3 = λ_2`,
    /// `λ_2² = λ_3² = λ_1` and `λ_1` absorbing.
    ///
    /// These relations are not associative: `(λ_2 λ_3) λ_3 = λ_2` while
    /// `λ_2 (λ_3 λ_3) = λ_1`. The table is kept verbatim so the expansion
    /// formula reproduces the published tables; `validate_semigroup` reports it.
    pub fn s3() -> Self {
        Self::from_one_based(&[vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 1]]).expect("well-formed")
    }

    /// The one-element semigroup `{λ_1}`, `λ_1² = λ_1`.
    pub fn trivial() -> Self {
        Self::new(&[vec![1]]).expect("trivial semigroup")
    }

    /// The cyclic group of order `n` under addition mod `n`.
    pub fn cyclic_group(n: usize) -> Self {
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n + 1).collect())
            .collect();
        Self::new(&rows).expect("cyclic group")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "S1" | "trivial" => Ok(Self::trivial()),
            "S2" => Ok(Self::s2()),
            "S3" => Ok(Self::s3()),
            "Z2" => Ok(Self::cyclic_group(2)),
            "Z3" => Ok(Self::cyclic_group(3)),
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }
}

pub fn validate_semigroup(t: &SemigroupTable) -> SemigroupReport {
    let n = t.order();
    let mut report = SemigroupReport::default();
    for a in 0..n {
        for b in a + 1..n {
            if t.mul(a, b) != t.mul(b, a) {
                report.commutativity.push((a + 1, b + 1));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)) {
                    report.associativity.push((a + 1, b + 1, c + 1));
                }
            }
        }
    }
    report
}

/// The absorbing element, if any (0-based). A zero is unique: two zeros `z`,
/// `z'` satisfy `z = z z' = z'`.
pub fn zero_element(t: &SemigroupTable) -> Option<usize> {
    let n = t.order();
    let mut zeros = (0..n).filter(|&z| (0..n).all(|a| t.mul(a, z) == z && t.mul(z, a) == z));
    let z = zeros.next();
    debug_assert!(zeros.next().is_none(), "semigroup zero must be unique");
    z
}

/// A relabelling `π` with `a.relabel(π) == b`, i.e. `π(x·y) = π(x)·π(y)`.
pub fn semigroups_isomorphic(a: &SemigroupTable, b: &SemigroupTable) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    permutations(a.order())
        .into_iter()
        .find(|p| &a.relabel(p) == b)
}

/// Every commutative associative table of the given order, optionally reduced
/// to lexicographically least representatives of the relabelling orbits.
/// Output is sorted.
pub fn enumerate_abelian_semigroups(
    order: usize,
    up_to_isomorphism: bool,
    bound: usize,
) -> Result<Vec<SemigroupTable>> {
    if order == 0 {
        return Err(Error::Malformed("semigroup order must be positive".into()));
    }
    if order > bound {
        return Err(Error::BoundExceeded { order, bound });
    }
    let n = order;
    // Free cells are the upper triangle (a <= b); the first cell is split
    // across workers.
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut found: Vec<SemigroupTable> = (0..n)
        .into_par_iter()
        .flat_map(|first| {
            let mut table = vec![usize::MAX; n * n];
            table[0] = first;
            let mut out = Vec::new();
            fill(n, &cells, 1, &mut table, &mut out);
            if up_to_isomorphism {
                out = out
                    .into_iter()
                    .map(|t| {
                        perms.iter().map(|p| t.relabel(p)).min().expect("identity")
                    })
                    .collect();
            }
            out
        })
        .collect();
    found.sort();
    found.dedup();
    Ok(found)
}

fn fill(
    n: usize,
    cells: &[(usize, usize)],
    next: usize,
    table: &mut [usize],
    out: &mut Vec<SemigroupTable>,
) {
    if next == cells.len() {
        out.push(SemigroupTable::from_raw(n, table.to_vec()));
        return;
    }
    let (a, b) = cells[next];
    for v in 0..n {
        table[a * n + b] = v;
        table[b * n + a] = v;
        if partial_associative(n, table) {
            fill(n, cells, next + 1, table, out);
        }
    }
    table[a * n + b] = usize::MAX;
    table[b * n + a] = usize::MAX;
}

/// Associativity on every triple whose products are already determined.
fn partial_associative(n: usize, t: &[usize]) -> bool {
    let get = |x: usize, y: usize| t[x * n + y];
    for a in 0..n {
        for b in 0..n {
            let ab = get(a, b);
            if ab == usize::MAX {
                continue;
            }
            for c in 0..n {
                let bc = get(b, c);
                if bc == usize::MAX {
                    continue;
                }
                let l = get(ab, c);
                let r = get(a, bc);
                if l != usize::MAX && r != usize::MAX && l != r {
                    return false;
                }
            }
        }
    }
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}
