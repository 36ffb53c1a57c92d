//! Seeded random instance generators for tests and benchmarks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::cnf::{Clause, Formula, Lit, Var};
use crate::theory::{DefaultRule, DefaultTheory};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RandomTheoryConfig {
    pub vars: u32,
    pub max_rules: usize,
    pub max_knowledge: usize,
    pub max_clauses: usize,
    pub max_lits: usize,
}

impl Default for RandomTheoryConfig {
    fn default() -> Self {
        RandomTheoryConfig {
            vars: 5,
            max_rules: 4,
            max_knowledge: 2,
            max_clauses: 2,
            max_lits: 3,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A tautology-free clause of 1..=max_lits literals over distinct variables.
pub fn random_clause(rng: &mut impl Rng, vars: u32, max_lits: usize) -> Clause {
    let mut pool: Vec<u32> = (1..=vars).collect();
    pool.shuffle(rng);
    let len = rng.gen_range(1..=max_lits.min(vars as usize).max(1));
    Clause::new(
        pool.into_iter()
            .take(len)
            .map(|id| Lit::new(Var::new(id), rng.gen_bool(0.5))),
    )
}

/// 0..=max_clauses clauses; empty formulas stand for ⊤.
pub fn random_formula(rng: &mut impl Rng, vars: u32, max_clauses: usize, max_lits: usize) -> Formula {
    let n = rng.gen_range(0..=max_clauses);
    Formula::new((0..n).map(|_| random_clause(rng, vars, max_lits)))
}

pub fn random_theory(rng: &mut impl Rng, config: &RandomTheoryConfig) -> DefaultTheory {
    let formula = |rng: &mut _| random_formula(rng, config.vars, config.max_clauses, config.max_lits);
    let knowledge = (0..rng.gen_range(0..=config.max_knowledge))
        .map(|_| formula(rng))
        .collect();
    let rules = (0..rng.gen_range(0..=config.max_rules))
        .map(|_| DefaultRule::new(formula(rng), formula(rng), formula(rng)))
        .collect();
    DefaultTheory::new(knowledge, rules)
}

/// A theory whose positive-occurrence graph has a unique minimum vertex
/// cover: variables `1..=cover`. Every clause holds at most one positive
/// literal outside the cover, and each cover variable is the centre of a
/// star with more than `cover` leaves. Clause literals total at least
/// `occurrences`.
pub fn planted_horn_cover(seed: u64, cover: u32, occurrences: usize) -> DefaultTheory {
    let mut rng = rng(seed);
    let leaves = cover + 1;
    let others = cover * leaves + 40;
    let first_other = cover + 1;
    let last_other = cover + others;
    let mut clauses = BTreeSet::new();
    let mut total = 0;
    for c in 1..=cover {
        for j in 0..leaves {
            let leaf = first_other + (c - 1) * leaves + j;
            clauses.insert(Clause::new([Var::new(c).pos(), Var::new(leaf).pos()]));
            total += 2;
        }
    }
    while total < occurrences {
        let mut lits = vec![Var::new(rng.gen_range(first_other..=last_other)).pos()];
        for _ in 0..rng.gen_range(0..=2) {
            lits.push(Var::new(rng.gen_range(1..=cover)).pos());
        }
        for _ in 0..rng.gen_range(1..=3) {
            let v = Var::new(rng.gen_range(first_other..=last_other));
            if v != lits[0].var() {
                lits.push(v.neg());
            }
        }
        let clause = Clause::new(lits);
        if clause.is_tautology() {
            continue;
        }
        let len = clause.len();
        if clauses.insert(clause) {
            total += len;
        }
    }
    let clauses: Vec<Clause> = clauses.into_iter().collect();
    // spread clauses over knowledge and rule components
    let mut chunks = clauses.chunks(25).map(|c| Formula::new(c.iter().cloned()));
    let mut knowledge = Vec::new();
    let mut rules = Vec::new();
    while let Some(a) = chunks.next() {
        match (chunks.next(), chunks.next()) {
            (Some(b), Some(c)) => rules.push(DefaultRule::new(a, b, c)),
            (b, _) => {
                knowledge.push(a);
                knowledge.extend(b);
            }
        }
    }
    DefaultTheory::new(knowledge, rules)
}
