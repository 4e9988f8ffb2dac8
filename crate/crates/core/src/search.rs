//! Bounded search for S-expansion connections between three-dimensional
//! classes: expand by every small semigroup, then look for subalgebras,
//! `0_S`-reductions and resonance subalgebras of the target class.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num::{Rational64, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expansion::{
    extract_subalgebra, is_subalgebra, resonant_subalgebra, s_expand, validate_resonance,
    zero_reduce, ResonanceBlock, ResonanceSpec,
};
use crate::identify::identify3;
use crate::linalg::{is_zero_vec, unit_vec, Subspace, Vector};
use crate::liealg::{change_basis, format_combination, AlgebraClass, BasisChange, StructureTensor};
use crate::par::*;
use crate::rational::Q;
use crate::semigroup::{enumerate_abelian_semigroups, zero_element, SemigroupTable, DEFAULT_MAX_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Subalgebra,
    ZeroReduce,
    Resonant,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Subalgebra, Mode::ZeroReduce, Mode::Resonant];

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Subalgebra => "subalgebra",
            Mode::ZeroReduce => "zero-reduce",
            Mode::Resonant => "resonant",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "subalgebra" => Ok(Mode::Subalgebra),
            "zero-reduce" | "zero_reduce" => Ok(Mode::ZeroReduce),
            "resonant" => Ok(Mode::Resonant),
            other => Err(Error::UnknownName(format!("search mode {other:?}"))),
        }
    }
}

/// Parses `"subalgebra,zero-reduce"` or `"all"`.
pub fn parse_modes(text: &str) -> Result<Vec<Mode>> {
    if text.trim() == "all" {
        return Ok(Mode::ALL.to_vec());
    }
    let mut modes: Vec<Mode> = text.split(',').map(str::parse).collect::<Result<_>>()?;
    modes.sort();
    modes.dedup();
    Ok(modes)
}

/// The step applied after expanding by the witness semigroup.
#[derive(Clone, Debug, PartialEq)]
pub enum Stage {
    /// Subalgebra of `S×g` on `span`.
    Subalgebra { span: Subspace },
    /// Subalgebra of the `0_S`-reduced algebra on `span`.
    ZeroReduce { span: Subspace },
    /// Resonance subalgebra with blocks `(basis indices of V_p, S_p)`,
    /// 0-based, and minimal index sets.
    Resonant { blocks: Vec<(Vec<usize>, Vec<usize>)> },
}

impl Stage {
    pub fn mode(&self) -> Mode {
        match self {
            Stage::Subalgebra { .. } => Mode::Subalgebra,
            Stage::ZeroReduce { .. } => Mode::ZeroReduce,
            Stage::Resonant { .. } => Mode::Resonant,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub semigroup: SemigroupTable,
    pub stage: Stage,
    pub class: AlgebraClass,
    /// Takes the three-dimensional algebra produced by the pipeline onto
    /// `class.tensor()`.
    pub basis_change: BasisChange,
}

impl Witness {
    pub fn mode(&self) -> Mode {
        self.stage.mode()
    }

    /// The algebra produced by expansion and the stage, before the basis change.
    pub fn pipeline(&self, source: &StructureTensor) -> Result<StructureTensor> {
        let s = &self.semigroup;
        match &self.stage {
            Stage::Subalgebra { span } => extract_subalgebra(&s_expand(s, source), span),
            Stage::ZeroReduce { span } => extract_subalgebra(&zero_reduce(s, source)?, span),
            Stage::Resonant { blocks } => {
                resonant_subalgebra(s, source, &resonance_spec(source, blocks))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "semigroup": self.semigroup.to_json(),
            "mode": self.mode().name(),
            "class": self.class.label(),
            "witness": self.basis_change.to_json(),
        });
        if let Some((k, p)) = self.class.parameter() {
            v[k] = json!(crate::rational::fmt_q(p));
        }
        match &self.stage {
            Stage::Subalgebra { span } | Stage::ZeroReduce { span } => {
                let gens: Vec<String> = span.basis().iter().map(|b| format_combination(b)).collect();
                v["span"] = json!(gens);
            }
            Stage::Resonant { blocks } => {
                let bs: Vec<Value> = blocks
                    .iter()
                    .map(|(basis, elems)| {
                        json!({
                            "basis": basis.iter().map(|i| i + 1).collect::<Vec<_>>(),
                            "elements": elems.iter().map(|a| a + 1).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                v["blocks"] = json!(bs);
            }
        }
        v
    }
}

/// Re-runs a witness independently of the search: the pipeline output must
/// identify as the witness class and the basis change must reach the
/// catalog tensor exactly.
pub fn replay(source: &StructureTensor, w: &Witness) -> Result<bool> {
    let t = w.pipeline(source)?;
    if t.dim() != 3 {
        return Ok(false);
    }
    Ok(identify3(&t)?.class == w.class && change_basis(&t, &w.basis_change)? == w.class.tensor())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub max_order: usize,
    pub modes: Vec<Mode>,
    /// Largest semigroup order the enumeration accepts.
    pub bound: usize,
}

impl SearchConfig {
    pub fn new(max_order: usize, modes: &[Mode]) -> Self {
        Self {
            max_order,
            modes: modes.to_vec(),
            bound: DEFAULT_MAX_ORDER,
        }
    }
}

/// Everything found from one source within the bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Exploration {
    pub semigroups: usize,
    /// Candidate configurations examined: distinct three-dimensional spans,
    /// reductions and resonance specifications.
    pub space_size: usize,
    pub witnesses: Vec<Witness>,
    /// Three-dimensional results whose class has no rational witness.
    pub unwitnessed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub target: AlgebraClass,
    pub config: SearchConfig,
    pub semigroups: usize,
    pub space_size: usize,
    pub witnesses: Vec<Witness>,
}

impl SearchReport {
    pub fn found(&self) -> bool {
        !self.witnesses.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_string(),
            "max_order": self.config.max_order,
            "modes": self.config.modes.iter().map(Mode::name).collect::<Vec<_>>(),
            "semigroups": self.semigroups,
            "space_size": self.space_size,
            "found": self.found(),
            "witnesses": self.witnesses.iter().map(Witness::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Canonical semigroups of order `1..=max_order`, smallest first.
pub fn search_semigroups(config: &SearchConfig) -> Result<Vec<SemigroupTable>> {
    if config.max_order > config.bound {
        return Err(Error::BoundExceeded {
            order: config.max_order,
            bound: config.bound,
        });
    }
    let mut out = Vec::new();
    for order in 1..=config.max_order {
        out.extend(enumerate_abelian_semigroups(order, true, config.bound)?);
    }
    Ok(out)
}

/// All three-dimensional results reachable from `source` within the bounds.
pub fn explore(source: &StructureTensor, config: &SearchConfig) -> Result<Exploration> {
    let semigroups = search_semigroups(config)?;
    let parts: Vec<Result<Part>> = semigroups
        .par_iter()
        .map(|s| explore_one(source, s, &config.modes))
        .collect();
    let mut out = Exploration {
        semigroups: semigroups.len(),
        space_size: 0,
        witnesses: Vec::new(),
        unwitnessed: Vec::new(),
    };
    for part in parts {
        let (size, ws, un) = part?;
        out.space_size += size;
        out.witnesses.extend(ws);
        out.unwitnessed.extend(un);
    }
    Ok(out)
}

/// Witnesses that `source` reaches `target` by expansion plus one mode.
pub fn find_connection(
    source: &StructureTensor,
    target: &AlgebraClass,
    config: &SearchConfig,
) -> Result<SearchReport> {
    let ex = explore(source, config)?;
    Ok(report_for(&ex, target, config))
}

fn report_for(ex: &Exploration, target: &AlgebraClass, config: &SearchConfig) -> SearchReport {
    SearchReport {
        target: target.clone(),
        config: config.clone(),
        semigroups: ex.semigroups,
        space_size: ex.space_size,
        witnesses: ex
            .witnesses
            .iter()
            .filter(|w| &w.class == target)
            .cloned()
            .collect(),
    }
}

type Part = (usize, Vec<Witness>, Vec<String>);

fn explore_one(source: &StructureTensor, s: &SemigroupTable, modes: &[Mode]) -> Result<Part> {
    let mut size = 0;
    let mut witnesses = Vec::new();
    let mut unwitnessed = Vec::new();
    let mut record = |t: &StructureTensor, stage: Stage| -> Result<()> {
        match identify3(t) {
            Ok(id) => witnesses.push(Witness {
                semigroup: s.clone(),
                stage,
                class: id.class,
                basis_change: id.witness,
            }),
            Err(Error::NoRationalWitness { class } | Error::ParameterNotRational { class }) => {
                unwitnessed.push(class)
            }
            Err(e) => return Err(e),
        }
        Ok(())
    };
    for mode in modes {
        match mode {
            Mode::Subalgebra => {
                let big = s_expand(s, source);
                let (count, spans) = closed_spans(&big);
                size += count;
                for span in spans {
                    record(&extract_subalgebra(&big, &span)?, Stage::Subalgebra { span })?;
                }
            }
            Mode::ZeroReduce => {
                if zero_element(s).is_none() {
                    continue;
                }
                let red = zero_reduce(s, source)?;
                if red.dim() < 3 {
                    size += 1;
                    continue;
                }
                let (count, spans) = closed_spans(&red);
                size += count;
                for span in spans {
                    record(&extract_subalgebra(&red, &span)?, Stage::ZeroReduce { span })?;
                }
            }
            Mode::Resonant => {
                let specs = resonance_candidates(source.dim(), s.order());
                size += specs.len();
                for blocks in specs {
                    let spec = resonance_spec(source, &blocks);
                    if validate_resonance(s, source, &spec).is_err() {
                        continue;
                    }
                    let t = resonant_subalgebra(s, source, &spec)?;
                    record(&t, Stage::Resonant { blocks })?;
                }
            }
        }
    }
    Ok((size, witnesses, unwitnessed))
}

/// Generators `E_a` and `E_a − E_b`.
fn candidates(n: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    for a in 0..n {
        for b in a + 1..n {
            let mut v = unit_vec(n, a);
            v[b] = -Q::from_integer(1.into());
            out.push(v);
        }
    }
    out
}

/// Distinct three-dimensional spans of candidate triples (count) and the
/// bracket-closed ones, sorted by echelon basis.
pub fn closed_spans(c: &StructureTensor) -> (usize, Vec<Subspace>) {
    let n = c.dim();
    if n < 3 {
        return (0, Vec::new());
    }
    let cand: Vec<Vec<Rational64>> = candidates(n)
        .iter()
        .map(|v| v.iter().map(|x| Rational64::from_integer(small(x))).collect())
        .collect();
    let m = cand.len();
    let per_first: Vec<HashSet<Vec<Rational64>>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let mut seen = HashSet::new();
            for b in a + 1..m {
                for d in b + 1..m {
                    if let Some(key) = rref3([&cand[a], &cand[b], &cand[d]]) {
                        seen.insert(key);
                    }
                }
            }
            seen
        })
        .collect();
    let mut keys: HashSet<Vec<Rational64>> = HashSet::new();
    for set in per_first {
        keys.extend(set);
    }
    let all: Vec<Subspace> = keys
        .into_iter()
        .map(|k| {
            let rows = k.chunks(n).map(|r| {
                r.iter()
                    .map(|x| Q::new((*x.numer()).into(), (*x.denom()).into()))
                    .collect::<Vector>()
            });
            Subspace::span(n, rows).expect("same ambient")
        })
        .collect();
    let total = all.len();
    let mut closed: Vec<Subspace> = all.into_iter().filter(|s| is_subalgebra(c, s)).collect();
    closed.sort_by(|a, b| a.basis().cmp(b.basis()));
    (total, closed)
}

fn small(x: &Q) -> i64 {
    x.to_integer().to_i64().expect("candidate entries are 0 or ±1")
}

/// Reduced row echelon form of three small vectors, flattened, or `None`
/// when they are dependent.
fn rref3(gens: [&Vec<Rational64>; 3]) -> Option<Vec<Rational64>> {
    let n = gens[0].len();
    let mut rows: Vec<Vec<Rational64>> = gens.iter().map(|g| g.to_vec()).collect();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..3).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..3 {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col];
                for j in 0..n {
                    let sub = f * rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        r += 1;
        if r == 3 {
            return Some(rows.concat());
        }
    }
    None
}

/// Set partitions of `0..n` with blocks in order of least element.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = Vec::new();
    fn go(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            go(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    go(0, n, &mut cur, &mut out);
    out
}

/// Coordinate decompositions with arbitrary `S_p` covering `S`, whose
/// resonance subalgebra has dimension three.
fn resonance_candidates(n: usize, order: usize) -> Vec<Vec<(Vec<usize>, Vec<usize>)>> {
    let subsets: Vec<Vec<usize>> = (0..1usize << order)
        .map(|m| (0..order).filter(|a| m & (1 << a) != 0).collect())
        .collect();
    let full = (1usize << order) - 1;
    let mut out = Vec::new();
    for part in set_partitions(n) {
        let k = part.len();
        let mut choice = vec![0usize; k];
        loop {
            let union = choice.iter().fold(0, |acc, &m| acc | m);
            let dim: usize = (0..k).map(|p| part[p].len() * subsets[choice[p]].len()).sum();
            if union == full && dim == 3 {
                out.push(
                    (0..k)
                        .map(|p| (part[p].clone(), subsets[choice[p]].clone()))
                        .collect(),
                );
            }
            let mut p = 0;
            while p < k {
                choice[p] += 1;
                if choice[p] <= full {
                    break;
                }
                choice[p] = 0;
                p += 1;
            }
            if p == k {
                break;
            }
        }
    }
    out
}

/// Resonance data for coordinate blocks with minimal `i(p, q)`: the blocks
/// meeting the support of `[V_p, V_q]`.
pub fn resonance_spec(
    c: &StructureTensor,
    blocks: &[(Vec<usize>, Vec<usize>)],
) -> ResonanceSpec {
    let n = c.dim();
    let owner: BTreeMap<usize, usize> = blocks
        .iter()
        .enumerate()
        .flat_map(|(p, (basis, _))| basis.iter().map(move |&i| (i, p)))
        .collect();
    let index_sets = blocks
        .iter()
        .map(|(bp, _)| {
            blocks
                .iter()
                .map(|(bq, _)| {
                    let mut set = BTreeSet::new();
                    for &i in bp {
                        for &j in bq {
                            let br = c.bracket_basis(i, j);
                            if is_zero_vec(&br) {
                                continue;
                            }
                            for (k, v) in br.iter().enumerate() {
                                if !v.is_zero() {
                                    set.insert(owner[&k]);
                                }
                            }
                        }
                    }
                    set
                })
                .collect()
        })
        .collect();
    ResonanceSpec {
        blocks: blocks
            .iter()
            .map(|(basis, elems)| ResonanceBlock {
                subspace: Subspace::coordinate(n, basis),
                elements: elems.iter().copied().collect(),
                partition: None,
            })
            .collect(),
        index_sets,
    }
}

/// One row of the connectivity matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: AlgebraClass,
    pub to: AlgebraClass,
    pub space_size: usize,
    /// The first witness in search order, if any.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Connectivity {
    pub labels: Vec<AlgebraClass>,
    pub config: SearchConfig,
    pub edges: Vec<Edge>,
}

/// For each ordered pair of classes, whether the first reaches the second
/// within the bounds. Each source is explored once.
pub fn connectivity_matrix(labels: &[AlgebraClass], config: &SearchConfig) -> Result<Connectivity> {
    let mut edges = Vec::new();
    for from in labels {
        let ex = explore(&from.tensor(), config)?;
        for to in labels {
            let witness = ex.witnesses.iter().find(|w| &w.class == to).cloned();
            edges.push(Edge {
                from: from.clone(),
                to: to.clone(),
                space_size: ex.space_size,
                witness,
            });
        }
    }
    Ok(Connectivity {
        labels: labels.to_vec(),
        config: config.clone(),
        edges,
    })
}

impl Connectivity {
    pub fn found(&self, from: &AlgebraClass, to: &AlgebraClass) -> bool {
        self.edges
            .iter()
            .any(|e| &e.from == from && &e.to == to && e.witness.is_some())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "max_order": self.config.max_order,
            "modes": self.config.modes.iter().map(Mode::name).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "from": e.from.to_string(),
                "to": e.to.to_string(),
                "found": e.witness.is_some(),
                "space_size": e.space_size,
                "witness": e.witness.as_ref().map(Witness::to_json),
            })).collect::<Vec<_>>(),
        })
    }

    /// Solid arrows for found connections between distinct classes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph expansions {\n  rankdir=LR;\n");
        for l in &self.labels {
            s.push_str(&format!("  \"{l}\";\n"));
        }
        for e in &self.edges {
            if e.from != e.to {
                if let Some(w) = &e.witness {
                    s.push_str(&format!(
                        "  \"{}\" -> \"{}\" [style=solid, label=\"{} |S|={}\"];\n",
                        e.from,
                        e.to,
                        w.mode(),
                        w.semigroup.order()
                    ));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}
