use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use liex::expansion::{s_expand, zero_reduce};
use liex::identify::{identify3, signature};
use liex::liealg::is_unimodular;
use liex::rational::q;
use liex::semigroup::{enumerate_abelian_semigroups, zero_element};
use liex::{change_basis, validate_lie, AlgebraClass, BasisChange, Error, Result};

fn random_change(rng: &mut ChaCha8Rng) -> BasisChange {
    loop {
        let rows = (0..3)
            .map(|_| (0..3).map(|_| q(rng.gen_range(-3..=3))).collect())
            .collect();
        if let Ok(u) = BasisChange::from_rows(rows) {
            return u;
        }
    }
}

struct Check {
    name: &'static str,
    passed: usize,
    failures: Vec<Value>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self { name, passed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 3 {
            self.failures.push(case());
        }
    }
}

/// Randomized checks over catalog classes in random bases and all labelled
/// semigroups of order at most three. The same seed gives the same report.
pub fn run(seed: u64, cases: usize) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = AlgebraClass::all3();
    let semigroups: Vec<_> = (1..=3)
        .map(|n| enumerate_abelian_semigroups(n, false, 3))
        .collect::<Result<Vec<_>>>()?
        .concat();

    let mut jacobi = Check::new("expansion_preserves_jacobi");
    let mut unimodular = Check::new("expansion_preserves_unimodularity");
    let mut reduce = Check::new("zero_reduction_is_lie");
    let mut round_trip = Check::new("basis_change_round_trip");
    let mut sig = Check::new("signature_is_basis_independent");
    let mut ident = Check::new("identification_is_basis_independent");

    for _ in 0..cases {
        let class = &classes[rng.gen_range(0..classes.len())];
        let s = &semigroups[rng.gen_range(0..semigroups.len())];
        let u = random_change(&mut rng);
        let c = change_basis(&class.tensor(), &u)?;
        let case = || json!({ "class": class.to_string(), "semigroup": s.to_json(), "basis": u.to_json() });

        let big = s_expand(s, &c);
        jacobi.record(validate_lie(&big).is_ok(), case);
        if is_unimodular(&c).unimodular {
            unimodular.record(is_unimodular(&big).unimodular, case);
        }
        if zero_element(s).is_some() && s.order() > 1 {
            let ok = zero_reduce(s, &c).map(|r| validate_lie(&r).is_ok()).unwrap_or(false);
            reduce.record(ok, case);
        }
        let v = random_change(&mut rng);
        let moved = change_basis(&c, &v)?;
        round_trip.record(change_basis(&moved, &v.inverse())? == c, case);
        sig.record(signature(&moved)? == signature(&c)?, case);
        let ok = identify3(&moved)
            .and_then(|id| Ok(id.class == *class && change_basis(&moved, &id.witness)? == class.tensor()))
            .unwrap_or(false);
        ident.record(ok, case);
    }

    let checks = [jacobi, unimodular, reduce, round_trip, sig, ident];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.failures.is_empty()).map(|c| c.name).collect();
    let report = json!({
        "seed": seed,
        "cases": cases,
        "checks": checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "failures": c.failures }))
            .collect::<Vec<_>>(),
    });
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(Error::Internal(format!("property checks failed: {}; report: {report}", failed.join(", "))))
    }
}
