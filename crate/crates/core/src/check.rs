//! Stable-extension checking for a candidate given by its finite base.

use crate::cnf::Formula;
use crate::entail::Oracle;
use crate::theory::{DefaultTheory, ExtensionCandidate};

/// Decides whether `Th(candidate.base)` is a consistent stable extension of
/// `theory`.
///
/// Rules whose justification the candidate does not refute are kept without
/// their justification; their fixpoint from the knowledge base must then be
/// equivalent to the candidate.
pub fn check_extension(theory: &DefaultTheory, candidate: &ExtensionCandidate, oracle: &Oracle) -> bool {
    let base = candidate.premises();
    if !oracle.satisfiable(&base) {
        return false;
    }

    let applicable: Vec<usize> = theory
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| !oracle.refutes(&base, &r.justification))
        .map(|(i, _)| i)
        .collect();

    let mut derived: Vec<&Formula> = theory.knowledge.iter().collect();
    let mut fired = vec![false; applicable.len()];
    loop {
        let mut changed = false;
        for (slot, &i) in applicable.iter().enumerate() {
            if fired[slot] {
                continue;
            }
            let rule = &theory.rules[i];
            if oracle.entails(&derived, &rule.prerequisite) {
                derived.push(&rule.conclusion);
                fired[slot] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    oracle.entails_all(&base, &derived) && oracle.entails_all(&derived, &base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{generated_candidate, DefaultRule};
    use std::collections::BTreeSet;

    fn f(clauses: &[&[i64]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    fn cand(base: Vec<Formula>) -> ExtensionCandidate {
        ExtensionCandidate {
            base,
            generating: BTreeSet::new(),
        }
    }

    // x = 1, y = 2, z = 3
    fn d1() -> Vec<DefaultRule> {
        vec![
            DefaultRule::new(f(&[&[1]]), f(&[&[2]]), f(&[&[-2]])),
            DefaultRule::new(f(&[&[-1]]), f(&[&[2]]), f(&[&[-2]])),
        ]
    }

    fn d2() -> Vec<DefaultRule> {
        vec![
            DefaultRule::new(f(&[&[1]]), f(&[&[3]]), f(&[&[-2]])),
            DefaultRule::new(f(&[&[1]]), f(&[&[2]]), f(&[&[-3]])),
        ]
    }

    fn oracles() -> Vec<Oracle> {
        vec![Oracle::dispatch(), Oracle::general()]
    }

    #[test]
    fn example_one() {
        for o in oracles() {
            let empty = DefaultTheory::new(vec![], d1());
            assert!(check_extension(&empty, &cand(vec![]), &o));

            let with_x = DefaultTheory::new(vec![f(&[&[1]])], d1());
            assert!(!check_extension(&with_x, &cand(vec![f(&[&[1]])]), &o));
            assert!(!check_extension(&with_x, &cand(vec![f(&[&[1]]), f(&[&[-2]])]), &o));

            let t2 = DefaultTheory::new(vec![f(&[&[1]])], d2());
            assert!(check_extension(&t2, &generated_candidate(&t2, &[0].into()), &o));
            assert!(check_extension(&t2, &generated_candidate(&t2, &[1].into()), &o));
            assert!(!check_extension(&t2, &generated_candidate(&t2, &[0, 1].into()), &o));
            assert!(!check_extension(&t2, &generated_candidate(&t2, &BTreeSet::new()), &o));
        }
    }

    #[test]
    fn inconsistent_knowledge_has_no_consistent_extension() {
        let t = DefaultTheory::new(vec![Formula::bottom()], d2());
        for o in oracles() {
            assert!(!check_extension(&t, &cand(t.knowledge.clone()), &o));
            assert!(!check_extension(&t, &cand(vec![]), &o));
        }
    }

    #[test]
    fn fixpoint_chains_rules_in_any_order() {
        // (b : / c) listed before (a : / b); W = {a}
        let t = DefaultTheory::new(
            vec![f(&[&[1]])],
            vec![
                DefaultRule::new(f(&[&[2]]), Formula::top(), f(&[&[3]])),
                DefaultRule::new(f(&[&[1]]), Formula::top(), f(&[&[2]])),
            ],
        );
        let o = Oracle::dispatch();
        assert!(check_extension(&t, &generated_candidate(&t, &[0, 1].into()), &o));
        assert!(!check_extension(&t, &generated_candidate(&t, &[1].into()), &o));
    }
}
