#![allow(dead_code)]

use std::collections::BTreeSet;

use dlbd::cnf::{enumerate_threefold, Choice};
use dlbd::detect::{verify_backdoor, VerifyMode};
use dlbd::{Clause, DefaultTheory, Formula, FormulaClass, Lit, ThreefoldAssignment, Var};
use proptest::prelude::*;

pub fn f(clauses: &[&[i64]]) -> Formula {
    Formula::from_dimacs(clauses)
}

pub fn vs(ids: &[u32]) -> BTreeSet<Var> {
    ids.iter().map(|&i| Var::new(i)).collect()
}

/// Bit `id - 1` of `model` is the value of variable `id`.
pub fn holds_lit(lit: Lit, model: u32) -> bool {
    (model >> (lit.var().id() - 1) & 1 == 1) == lit.is_positive()
}

pub fn holds(formula: &Formula, model: u32) -> bool {
    formula
        .clauses()
        .all(|c| c.lits().iter().any(|&l| holds_lit(l, model)))
}

fn width(formulas: &[&Formula]) -> u32 {
    formulas
        .iter()
        .flat_map(|f| f.vars())
        .map(|v| v.id())
        .max()
        .unwrap_or(0)
}

pub fn table_sat(premises: &[&Formula]) -> bool {
    let n = width(premises);
    assert!(n <= 20);
    (0u32..1 << n).any(|m| premises.iter().all(|f| holds(f, m)))
}

pub fn table_entails(premises: &[&Formula], goal: &Formula) -> bool {
    let mut all = premises.to_vec();
    all.push(goal);
    let n = width(&all);
    assert!(n <= 20);
    (0u32..1 << n).all(|m| !premises.iter().all(|f| holds(f, m)) || holds(goal, m))
}

/// Smallest verified backdoor by exhaustive subset search, if one of size
/// at most `k` exists.
pub fn smallest_backdoor(theory: &DefaultTheory, class: FormulaClass, k: usize) -> Option<BTreeSet<Var>> {
    let vars: Vec<Var> = theory.vars().into_iter().collect();
    let mut best: Option<BTreeSet<Var>> = None;
    for mask in 0u32..1 << vars.len() {
        if mask.count_ones() as usize > k {
            continue;
        }
        if best.as_ref().is_some_and(|b| b.len() <= mask.count_ones() as usize) {
            continue;
        }
        let set: BTreeSet<Var> = (0..vars.len()).filter(|i| mask >> i & 1 == 1).map(|i| vars[i]).collect();
        if verify_backdoor(theory, &set, class, VerifyMode::Full) {
            best = Some(set);
        }
    }
    best
}

/// Applies the choices of `y` one variable at a time, in `order`.
pub fn apply_in_order(formula: &Formula, y: &ThreefoldAssignment, order: &[Var]) -> Formula {
    let mut out = formula.clone();
    for &v in order {
        if let Some(choice) = y.get(v) {
            let ext = match choice {
                Choice::Positive => v.pos().into(),
                Choice::Negative => v.neg().into(),
                Choice::Epsilon => dlbd::ExtLit::epsilon(v),
            };
            out = out.reduct(ext);
        }
    }
    out
}

pub fn all_threefold(vars: &BTreeSet<Var>) -> Vec<ThreefoldAssignment> {
    enumerate_threefold(vars, false).collect()
}

pub fn arb_clause(vars: u32, max_lits: usize) -> impl Strategy<Value = Clause> {
    proptest::sample::subsequence((1..=vars).collect::<Vec<_>>(), 1..=max_lits.min(vars as usize))
        .prop_flat_map(|ids| {
            let n = ids.len();
            (Just(ids), proptest::collection::vec(any::<bool>(), n))
        })
        .prop_map(|(ids, signs)| Clause::new(ids.into_iter().zip(signs).map(|(id, s)| Lit::new(Var::new(id), s))))
}

/// Clauses may be tautological when `tautologies` is set.
pub fn arb_formula(vars: u32, max_clauses: usize, max_lits: usize, tautologies: bool) -> impl Strategy<Value = Formula> {
    let clause = if tautologies {
        proptest::collection::vec((1..=vars, any::<bool>()), 0..=max_lits)
            .prop_map(|lits| Clause::new(lits.into_iter().map(|(id, s)| Lit::new(Var::new(id), s))))
            .boxed()
    } else {
        arb_clause(vars, max_lits).boxed()
    };
    proptest::collection::vec(clause, 0..=max_clauses).prop_map(Formula::new)
}

pub fn arb_assignment(vars: u32) -> impl Strategy<Value = ThreefoldAssignment> {
    proptest::collection::btree_map(
        (1..=vars).prop_map(Var::new),
        prop_oneof![Just(Choice::Positive), Just(Choice::Negative), Just(Choice::Epsilon)],
        0..=vars as usize,
    )
    .prop_map(ThreefoldAssignment::new)
}

pub fn arb_theory(vars: u32, max_rules: usize) -> impl Strategy<Value = DefaultTheory> {
    let formula = move || arb_formula(vars, 2, 3, false);
    (
        proptest::collection::vec(formula(), 0..=2),
        proptest::collection::vec((formula(), formula(), formula()), 0..=max_rules),
    )
        .prop_map(|(knowledge, rules)| {
            DefaultTheory::new(
                knowledge,
                rules
                    .into_iter()
                    .map(|(a, b, c)| dlbd::DefaultRule::new(a, b, c))
                    .collect(),
            )
        })
}
