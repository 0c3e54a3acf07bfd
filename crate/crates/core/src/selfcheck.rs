//! Randomized property suites behind `cyclekap selfcheck`.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admissible::{is_admissible, SupportSet};
use crate::batch::run_seeded;
use crate::classify::{adapted_basis, decide_isomorphic, realize_cells, realize_finite};
use crate::extension::build_isomorphism;
use crate::field::{Field, PrimeField, Rationals};
use crate::filtration::kaplansky_invariants;
use crate::gen;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelfCheckReport {
    pub suites: Vec<SuiteReport>,
}

impl SelfCheckReport {
    pub fn failed(&self) -> usize {
        self.suites.iter().map(|s| s.failed).sum()
    }

    pub fn passed(&self) -> usize {
        self.suites.iter().map(|s| s.passed).sum()
    }
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{:<20} passed {:>5}  failed {:>5}", s.name, s.passed, s.failed)?;
        }
        writeln!(f, "total: {} passed, {} failed", self.passed(), self.failed())
    }
}

type Check = fn(u64) -> bool;

/// Alternates 𝔽_2 and ℚ by seed parity.
macro_rules! by_field {
    ($seed:expr, $body:ident) => {
        if $seed % 2 == 0 {
            $body(&PrimeField::new(2).expect("prime"), $seed)
        } else {
            $body(&Rationals, $seed)
        }
    };
}

fn realize_round_trip<F: Field>(f: &F, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let t = gen::random_table(&mut rng, n, 8, 4, 4);
    realize_finite(f, n, &t).and_then(|u| kaplansky_invariants(&u)).map_or(false, |r| r == t)
}

fn iso_certificate<F: Field>(f: &F, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let cells = gen::random_cells(&mut rng, n, 4, 8);
    let Ok(u) = realize_cells(f, &cells) else { return false };
    let (v, _) = u.random_basis_change(rng.gen());
    matches!(build_isomorphism(&u, &v), Ok(Some(phi)) if phi.verify_iso(&u, &v).is_ok())
}

fn non_iso<F: Field>(f: &F, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let cells = gen::random_cells(&mut rng, n, 4, 8);
    let other = gen::perturb_cells(&mut rng, &cells);
    let (Ok(u), Ok(v)) = (gen::generate(f, &cells, rng.gen()), gen::generate(f, &other, rng.gen())) else {
        return false;
    };
    matches!(decide_isomorphic(&u, &v), Ok(verdict) if !verdict.is_isomorphic())
}

fn adapted<F: Field>(f: &F, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let u = gen::random_nilpotent(f, &mut rng, n, 8);
    adapted_basis(&u).and_then(|b| b.validate(&u)).is_ok()
}

fn realization_lemma<F: Field>(f: &F, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let t = gen::random_pointed_sum(&mut rng, n, 4, 5);
    let (Ok(u), Ok(d)) = (t.linear_realization(f), t.discrete_numbers()) else {
        return false;
    };
    kaplansky_invariants(&u).map_or(false, |k| k == d.to_invariant_table())
}

fn admissible_tables<F: Field>(f: &F, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let u = gen::random_nilpotent(f, &mut rng, n, 10);
    kaplansky_invariants(&u).map_or(false, |t| is_admissible(&SupportSet::from_table(n, &t)).is_ok())
}

fn suites() -> Vec<(&'static str, Check)> {
    vec![
        ("realize-roundtrip", |s| by_field!(s, realize_round_trip)),
        ("iso-certificate", |s| by_field!(s, iso_certificate)),
        ("non-isomorphic", |s| by_field!(s, non_iso)),
        ("adapted-basis", |s| by_field!(s, adapted)),
        ("realization-lemma", |s| by_field!(s, realization_lemma)),
        ("admissible-tables", |s| by_field!(s, admissible_tables)),
    ]
}

/// Runs every suite on seeds `seed..seed+iters`; a panic counts as a
/// failure.
pub fn run(seed: u64, iters: u64) -> SelfCheckReport {
    let suites = suites()
        .into_iter()
        .map(|(name, check)| {
            let outcomes = run_seeded(seed..seed.saturating_add(iters), |s| {
                catch_unwind(AssertUnwindSafe(|| check(s))).unwrap_or(false)
            });
            let passed = outcomes.iter().filter(|&&ok| ok).count();
            SuiteReport {
                name,
                passed,
                failed: outcomes.len() - passed,
            }
        })
        .collect();
    SelfCheckReport { suites }
}

#[cfg(test)]
mod tests {
    #[test]
    fn small_run_passes() {
        let r = super::run(1, 6);
        assert_eq!(r.failed(), 0, "{r}");
        assert_eq!(r.passed(), 36);
    }
}
