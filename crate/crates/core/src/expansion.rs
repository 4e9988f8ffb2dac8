//! S-expansion `S×g` and the algebras derived from it: 0_S-reduction,
//! reduction along a split decomposition, resonant subalgebras and subalgebra
//! extraction.
//!
//! The expanded basis is laid out as `E_{(i−1)N+α} = λ_α e_i`, i.e. 0-based
//! flat index `i * N + α`.

use std::collections::BTreeSet;

use num::Zero;

use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, solve_in_basis, zero_vec, Subspace, Vector};
use crate::liealg::{bracket_span, validate_lie, StructureTensor};
use crate::rational::{fmt_q, Q};
use crate::semigroup::{zero_element, SemigroupTable};

/// Position `(i, α)` of `λ_α e_i` in the expanded basis (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpandedBasisIndex {
    pub generator: usize,
    pub element: usize,
}

impl ExpandedBasisIndex {
    pub fn flat(&self, order: usize) -> usize {
        self.generator * order + self.element
    }

    pub fn from_flat(flat: usize, order: usize) -> Self {
        Self {
            generator: flat / order,
            element: flat % order,
        }
    }
}

/// `C_{(i,α)(j,β)}^{(k,γ)} = C_ij^k` if `λ_α λ_β = λ_γ`, else 0.
pub fn s_expand(s: &SemigroupTable, c: &StructureTensor) -> StructureTensor {
    let n = c.dim();
    let order = s.order();
    let dim = n * order;
    let mut out = vec![Q::zero(); dim * dim * dim];
    for &(i, j, k) in c.nonzero() {
        let v = c.get(i, j, k);
        for a in 0..order {
            for b in 0..order {
                let g = s.mul(a, b);
                let (x, y, z) = (i * order + a, j * order + b, k * order + g);
                out[(x * dim + y) * dim + z] = v.clone();
            }
        }
    }
    StructureTensor::from_flat(dim, out)
}

/// The vector `λ_α ⊗ v` of the expanded space.
pub fn lift(v: &[Q], element: usize, order: usize) -> Vector {
    let mut out = zero_vec(v.len() * order);
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            out[i * order + element] = x.clone();
        }
    }
    out
}

/// Flat indices of `λ_α e_i` with `λ_α ≠ 0_S`, in increasing order.
pub fn nonzero_block(s: &SemigroupTable, n: usize) -> Result<Vec<usize>> {
    let z = zero_element(s).ok_or(Error::NoZeroElement)?;
    let order = s.order();
    Ok((0..n * order).filter(|f| f % order != z).collect())
}

/// The 0_S-reduced algebra on `{λ_α e_i : λ_α ≠ 0_S}` (flat order), where a
/// bracket is kept only when `λ_α λ_β ≠ 0_S`.
pub fn zero_reduce(s: &SemigroupTable, c: &StructureTensor) -> Result<StructureTensor> {
    let z = zero_element(s).ok_or(Error::NoZeroElement)?;
    let n = c.dim();
    let order = s.order();
    let keep: Vec<usize> = (0..order).filter(|&a| a != z).collect();
    let m = keep.len();
    let dim = n * m;
    let pos = |i: usize, slot: usize| i * m + slot;
    let mut out = vec![Q::zero(); dim * dim * dim];
    for &(i, j, k) in c.nonzero() {
        for (sa, &a) in keep.iter().enumerate() {
            for (sb, &b) in keep.iter().enumerate() {
                let g = s.mul(a, b);
                if g == z {
                    continue;
                }
                let sg = keep.iter().position(|&x| x == g).expect("non-zero product");
                let (x, y, w) = (pos(i, sa), pos(j, sb), pos(k, sg));
                out[(x * dim + y) * dim + w] = c.get(i, j, k).clone();
            }
        }
    }
    Ok(StructureTensor::from_flat(dim, out))
}

/// The reduced algebra `|V̌|` of a split `g = V̌ ⊕ V̂` with `[V̌, V̂] ⊆ V̂`:
/// brackets of the echelon basis of `checked`, projected onto `checked`
/// along `hatted`.
pub fn reduce_decomposition(
    c: &StructureTensor,
    checked: &Subspace,
    hatted: &Subspace,
) -> Result<StructureTensor> {
    let n = c.dim();
    if checked.ambient() != n || hatted.ambient() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: checked.ambient().max(hatted.ambient()),
        });
    }
    if !checked.is_complement(hatted) {
        return Err(Error::NotComplement(format!(
            "dim {} + dim {} with joint rank {} in dimension {n}",
            checked.dim(),
            hatted.dim(),
            checked.join(hatted).dim()
        )));
    }
    for (a, x) in checked.basis().iter().enumerate() {
        for (b, y) in hatted.basis().iter().enumerate() {
            if !hatted.contains(&c.bracket(x, y)) {
                return Err(Error::SplitViolated(a + 1, b + 1));
            }
        }
    }
    let m = checked.dim();
    let basis: Vec<Vector> = checked
        .basis()
        .iter()
        .chain(hatted.basis())
        .cloned()
        .collect();
    let mut out = vec![Q::zero(); m * m * m];
    for a in 0..m {
        for b in a + 1..m {
            let br = c.bracket(&basis[a], &basis[b]);
            if is_zero_vec(&br) {
                continue;
            }
            let coords = solve_in_basis(&basis, &br).expect("complement spans everything");
            for (k, v) in coords.into_iter().take(m).enumerate() {
                if !v.is_zero() {
                    out[(b * m + a) * m + k] = -v.clone();
                    out[(a * m + b) * m + k] = v;
                }
            }
        }
    }
    let reduced = StructureTensor::from_flat(m, out);
    if validate_lie(c).is_ok() && !validate_lie(&reduced).is_ok() {
        return Err(Error::Internal("reduced bracket violates Jacobi".into()));
    }
    Ok(reduced)
}

/// Structure constants of the bracket restricted to `span`, in its reduced
/// echelon basis. Fails with the offending pair if `span` is not closed.
pub fn extract_subalgebra(c: &StructureTensor, span: &Subspace) -> Result<StructureTensor> {
    if span.ambient() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: span.ambient(),
        });
    }
    let basis = span.basis();
    let m = basis.len();
    let mut out = vec![Q::zero(); m * m * m];
    for a in 0..m {
        for b in a + 1..m {
            let br = c.bracket(&basis[a], &basis[b]);
            let coords = span.coordinates(&br).ok_or_else(|| Error::NotClosed {
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

/// True when `[span, span] ⊆ span`.
pub fn is_subalgebra(c: &StructureTensor, span: &Subspace) -> bool {
    let basis = span.basis();
    (0..basis.len()).all(|a| {
        (a + 1..basis.len()).all(|b| span.contains(&c.bracket(&basis[a], &basis[b])))
    })
}

/// One block `(V_p, S_p)` of a resonant subset decomposition, with an optional
/// partition `S_p = Š_p ∪ Ŝ_p`. Semigroup indices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceBlock {
    pub subspace: Subspace,
    pub elements: BTreeSet<usize>,
    pub partition: Option<Partition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub checked: BTreeSet<usize>,
    pub hatted: BTreeSet<usize>,
}

/// `g = ⊕_p V_p`, `S = ∪_p S_p`, with `index_sets[p][q] = i(p,q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceSpec {
    pub blocks: Vec<ResonanceBlock>,
    pub index_sets: Vec<Vec<BTreeSet<usize>>>,
}

fn intersection_over(
    s: &SemigroupTable,
    spec: &ResonanceSpec,
    targets: &BTreeSet<usize>,
    pick: impl Fn(&ResonanceBlock) -> BTreeSet<usize>,
) -> BTreeSet<usize> {
    // an empty family intersects to the whole semigroup
    let mut acc: BTreeSet<usize> = (0..s.order()).collect();
    for &r in targets {
        let set = pick(&spec.blocks[r]);
        acc = acc.intersection(&set).copied().collect();
    }
    acc
}

/// Checks every resonance condition on every pair `(p, q)`.
pub fn validate_resonance(
    s: &SemigroupTable,
    c: &StructureTensor,
    spec: &ResonanceSpec,
) -> Result<()> {
    let n = c.dim();
    let blocks = &spec.blocks;
    let nb = blocks.len();
    let fail = |m: String| Err(Error::ResonanceViolated(m));
    if spec.index_sets.len() != nb || spec.index_sets.iter().any(|row| row.len() != nb) {
        return Err(Error::Malformed("index sets must form a square table over the blocks".into()));
    }
    if spec
        .index_sets
        .iter()
        .flatten()
        .flatten()
        .any(|&r| r >= nb)
    {
        return Err(Error::Malformed("index set refers to a missing block".into()));
    }
    if blocks.iter().any(|b| b.subspace.ambient() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: blocks.iter().map(|b| b.subspace.ambient()).max().unwrap_or(0),
        });
    }
    if blocks.iter().flat_map(|b| &b.elements).any(|&a| a >= s.order()) {
        return Err(Error::Malformed("semigroup index out of range".into()));
    }
    let total: usize = blocks.iter().map(|b| b.subspace.dim()).sum();
    let joint = blocks
        .iter()
        .fold(Subspace::zero(n), |acc, b| acc.join(&b.subspace));
    if total != n || joint.dim() != n {
        return fail(format!(
            "subspaces are not a direct-sum decomposition (dims sum to {total}, span has dim {})",
            joint.dim()
        ));
    }
    let union: BTreeSet<usize> = blocks.iter().flat_map(|b| b.elements.iter().copied()).collect();
    if union.len() != s.order() {
        return fail("the subsets S_p do not cover the semigroup".into());
    }
    for p in 0..nb {
        if let Some(part) = &blocks[p].partition {
            let joined: BTreeSet<usize> = part.checked.union(&part.hatted).copied().collect();
            if joined != blocks[p].elements || !part.checked.is_disjoint(&part.hatted) {
                return fail(format!("partition of block {} does not split S_{}", p + 1, p + 1));
            }
        }
    }
    for p in 0..nb {
        for q in 0..nb {
            let targets = &spec.index_sets[p][q];
            let sum = targets
                .iter()
                .fold(Subspace::zero(n), |acc, &r| acc.join(&blocks[r].subspace));
            let br = bracket_span(c, &blocks[p].subspace, &blocks[q].subspace);
            if !sum.contains_subspace(&br) {
                return fail(format!(
                    "[V_{}, V_{}] is not inside the sum over i({}, {})",
                    p + 1,
                    q + 1,
                    p + 1,
                    q + 1
                ));
            }
            let allowed = intersection_over(s, spec, targets, |b| b.elements.clone());
            for &a in &blocks[p].elements {
                for &b in &blocks[q].elements {
                    if !allowed.contains(&s.mul(a, b)) {
                        return fail(format!(
                            "S_{} S_{} ⊄ ∩ S_r: (p, q, α, β) = ({}, {}, {}, {})",
                            p + 1,
                            q + 1,
                            p + 1,
                            q + 1,
                            a + 1,
                            b + 1
                        ));
                    }
                }
            }
            if let (Some(pp), Some(pq)) = (&blocks[p].partition, &blocks[q].partition) {
                let allowed_hat = intersection_over(s, spec, targets, |b| {
                    b.partition.as_ref().map(|x| x.hatted.clone()).unwrap_or_default()
                });
                for &a in &pp.checked {
                    for &b in &pq.hatted {
                        if !allowed_hat.contains(&s.mul(a, b)) {
                            return fail(format!(
                                "Š_{} Ŝ_{} ⊄ ∩ Ŝ_r: (p, q, α, β) = ({}, {}, {}, {})",
                                p + 1,
                                q + 1,
                                p + 1,
                                q + 1,
                                a + 1,
                                b + 1
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn block_vectors(order: usize, subspace: &Subspace, elements: &BTreeSet<usize>) -> Vec<Vector> {
    elements
        .iter()
        .flat_map(|&a| subspace.basis().iter().map(move |v| lift(v, a, order)))
        .collect()
}

/// `⊕_p S_p × V_p` inside the expanded space.
pub fn resonant_span(
    s: &SemigroupTable,
    c: &StructureTensor,
    spec: &ResonanceSpec,
) -> Result<Subspace> {
    validate_resonance(s, c, spec)?;
    let gens = spec
        .blocks
        .iter()
        .flat_map(|b| block_vectors(s.order(), &b.subspace, &b.elements));
    Subspace::span(c.dim() * s.order(), gens)
}

/// The resonance subalgebra `G_R = ⊕_p S_p × V_p` of `S×g`, in the echelon
/// basis of its span.
pub fn resonant_subalgebra(
    s: &SemigroupTable,
    c: &StructureTensor,
    spec: &ResonanceSpec,
) -> Result<StructureTensor> {
    let span = resonant_span(s, c, spec)?;
    extract_subalgebra(&s_expand(s, c), &span).map_err(|e| match e {
        Error::NotClosed { .. } => Error::Internal(format!("resonant span not closed: {e}")),
        other => other,
    })
}

/// The reduction of `G_R` induced by the partitions `S_p = Š_p ∪ Ŝ_p`: the
/// bracket on `⊕ Š_p × V_p` projected along `⊕ Ŝ_p × V_p`.
pub fn resonant_reduction(
    s: &SemigroupTable,
    c: &StructureTensor,
    spec: &ResonanceSpec,
) -> Result<StructureTensor> {
    validate_resonance(s, c, spec)?;
    let order = s.order();
    let ambient = c.dim() * order;
    let mut checked = Vec::new();
    let mut hatted = Vec::new();
    for b in &spec.blocks {
        let part = b.partition.as_ref().ok_or_else(|| {
            Error::Malformed("every block needs a partition for the reduction".into())
        })?;
        checked.extend(block_vectors(order, &b.subspace, &part.checked));
        hatted.extend(block_vectors(order, &b.subspace, &part.hatted));
    }
    let checked = Subspace::span(ambient, checked)?;
    let hatted = Subspace::span(ambient, hatted)?;
    let basis: Vec<Vector> = checked.basis().iter().chain(hatted.basis()).cloned().collect();
    let inner = crate::liealg::restrict_to_basis(&s_expand(s, c), &basis)
        .map_err(|e| Error::Internal(format!("resonant span not closed: {e}")))?;
    let m = checked.dim();
    let total = basis.len();
    reduce_decomposition(
        &inner,
        &Subspace::coordinate(total, &(0..m).collect::<Vec<_>>()),
        &Subspace::coordinate(total, &(m..total).collect::<Vec<_>>()),
    )
}

/// Parses spans such as `"E1,E2,E3"` or `"E1-E2, 2E6, 1/2*E3+E4"` into a
/// subspace of the given ambient dimension (1-based `E` indices).
pub fn parse_span(text: &str, ambient: usize) -> Result<Subspace> {
    let gens = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_combination(t, ambient))
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(ambient, gens)
}

/// Parses one rational combination of basis vectors, e.g. `E1-2E3`.
pub fn parse_combination(text: &str, ambient: usize) -> Result<Vector> {
    let bad = || Error::Malformed(format!("cannot parse basis combination {text:?}"));
    let mut v = zero_vec(ambient);
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = compact.as_str();
    if rest.is_empty() {
        return Err(bad());
    }
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let e = body.find(['E', 'e']).ok_or_else(bad)?;
        let coeff_text = body[..e].trim_end_matches('*');
        let coeff = if coeff_text.is_empty() {
            Q::from_integer(1.into())
        } else {
            crate::rational::parse_q(coeff_text)?
        };
        let digits_end = body[e + 1..]
            .find(|ch: char| !ch.is_ascii_digit())
            .map_or(body.len(), |p| e + 1 + p);
        let idx: usize = body[e + 1..digits_end].parse().map_err(|_| bad())?;
        if idx == 0 || idx > ambient {
            return Err(Error::Malformed(format!(
                "basis index E{idx} outside 1..={ambient}"
            )));
        }
        v[idx - 1] += coeff * Q::from_integer(sign.into());
        rest = &body[digits_end..];
    }
    Ok(v)
}
