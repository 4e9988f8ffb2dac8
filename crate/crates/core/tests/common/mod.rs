//! Helpers shared by the integration tests. Nothing here calls the library's
//! own parsers, so the golden data is checked independently.

#![allow(dead_code)]

use liex::rational::Q;
use liex::StructureTensor;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `(i, j, k, coefficient)` triples from relations like `[E1,E5]=2E4`,
/// 1-based, one target per relation.
pub fn parse_relations(text: &str) -> Vec<(usize, usize, usize, i64)> {
    text.split(',')
        .collect::<Vec<_>>()
        .chunks(2)
        .map(|pair| {
            let lhs = pair[0].trim().trim_start_matches("[E");
            let (j, rhs) = pair[1].split_once("]=").expect("relation");
            let i: usize = lhs.parse().expect("left index");
            let j: usize = j.trim().trim_start_matches('E').parse().expect("right index");
            let (coef, k) = rhs.trim().split_once('E').expect("target");
            let coef = if coef.is_empty() { 1 } else { coef.parse().expect("coefficient") };
            (i, j, k.parse().expect("target index"), coef)
        })
        .collect()
}

/// Nonzero `[E_i, E_j]` components with `i < j`, as `(i, j, k, c)` 1-based.
pub fn relations_of(c: &StructureTensor) -> Vec<(usize, usize, usize, Q)> {
    let n = c.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let v = c.get(i, j, k);
                if *v != Q::from_integer(0.into()) {
                    out.push((i + 1, j + 1, k + 1, v.clone()));
                }
            }
        }
    }
    out
}

/// Random invertible rational matrix with small entries.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> liex::BasisChange {
    loop {
        let rows: Vec<Vec<Q>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let num: i64 = rng.gen_range(-3..=3);
                        let den: i64 = if rng.gen_bool(0.2) { rng.gen_range(1..=3) } else { 1 };
                        Q::new(num.into(), den.into())
                    })
                    .collect()
            })
            .collect();
        if let Ok(u) = liex::BasisChange::from_rows(rows) {
            return u;
        }
    }
}
