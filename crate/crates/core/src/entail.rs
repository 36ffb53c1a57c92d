//! Satisfiability and implication oracles.
//!
//! Premise sets are slices of formulas read conjunctively. Queries are
//! answered on a dense renumbering of the premise variables; the solver is
//! picked from the syntactic shape of the clause set (all-positive scan,
//! Horn unit propagation, 2-SAT, or DPLL) unless general search is forced.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::cnf::{enumerate_classical, Clause, Formula, FormulaClass, Lit, ThreefoldAssignment, Var};
use crate::Error;

/// Outcome of a satisfiability query.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfiable,
    Unsatisfiable,
}

/// Verdict plus a total model over the premise variables when satisfiable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatWitness {
    pub verdict: Verdict,
    pub model: Option<BTreeMap<Var, bool>>,
}

impl SatWitness {
    pub fn is_sat(&self) -> bool {
        self.verdict == Verdict::Satisfiable
    }
}

/// Which decision procedure answers a query.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Pick the polynomial procedure matching the clause set's shape.
    Dispatch,
    /// Always run backtracking search.
    General,
}

// Dense literal: variable index and polarity.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
struct DLit {
    var: usize,
    positive: bool,
}

struct Dense {
    vars: Vec<Var>,
    clauses: Vec<Vec<DLit>>,
}

impl Dense {
    fn build<'a>(premises: impl IntoIterator<Item = &'a Formula>, falsify: &[Lit]) -> Dense {
        let mut index: HashMap<Var, usize> = HashMap::new();
        let mut vars = Vec::new();
        let mut clauses = Vec::new();
        for formula in premises {
            'clauses: for clause in formula.clauses() {
                let mut out = Vec::with_capacity(clause.len());
                for &lit in clause.lits() {
                    if falsify.contains(&lit) {
                        continue;
                    }
                    if falsify.contains(&lit.complement()) {
                        continue 'clauses;
                    }
                    let next = vars.len();
                    let var = *index.entry(lit.var()).or_insert_with(|| {
                        vars.push(lit.var());
                        next
                    });
                    out.push(DLit {
                        var,
                        positive: lit.is_positive(),
                    });
                }
                clauses.push(out);
            }
        }
        Dense { vars, clauses }
    }

    fn solve(&self, strategy: Strategy) -> Option<Vec<bool>> {
        if self.clauses.iter().any(Vec::is_empty) {
            return None;
        }
        if strategy == Strategy::General {
            return dpll(self);
        }
        let positive = |c: &Vec<DLit>| c.iter().filter(|l| l.positive).count();
        if self.clauses.iter().all(|c| positive(c) == c.len()) {
            return Some(vec![true; self.vars.len()]);
        }
        if self.clauses.iter().all(|c| positive(c) <= 1) {
            return horn_sat(self);
        }
        if self.clauses.iter().all(|c| c.len() <= 2) {
            return two_sat(self);
        }
        dpll(self)
    }

    fn model(&self, values: Vec<bool>) -> BTreeMap<Var, bool> {
        self.vars.iter().copied().zip(values).collect()
    }
}

/// Minimal-model unit propagation; every clause has at most one positive literal.
fn horn_sat(dense: &Dense) -> Option<Vec<bool>> {
    let mut value = vec![false; dense.vars.len()];
    loop {
        let mut changed = false;
        for clause in &dense.clauses {
            if clause.iter().any(|l| value[l.var] == l.positive) {
                continue;
            }
            let head = clause.iter().find(|l| l.positive)?;
            value[head.var] = true;
            changed = true;
        }
        if !changed {
            return Some(value);
        }
    }
}

/// 2-SAT over the implication graph, via Tarjan's SCC algorithm.
fn two_sat(dense: &Dense) -> Option<Vec<bool>> {
    let n = dense.vars.len();
    let node = |l: DLit| 2 * l.var + usize::from(!l.positive);
    let mut graph = vec![Vec::new(); 2 * n];
    for clause in &dense.clauses {
        match clause.as_slice() {
            [a] => graph[node(*a) ^ 1].push(node(*a)),
            [a, b] => {
                graph[node(*a) ^ 1].push(node(*b));
                graph[node(*b) ^ 1].push(node(*a));
            }
            _ => unreachable!("2-SAT on a clause of length {}", clause.len()),
        }
    }
    let comp = tarjan(&graph);
    let mut value = vec![false; n];
    for (v, slot) in value.iter_mut().enumerate() {
        let (t, f) = (comp[2 * v], comp[2 * v + 1]);
        if t == f {
            return None;
        }
        // Tarjan numbers components in reverse topological order
        *slot = t < f;
    }
    Some(value)
}

fn tarjan(graph: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = graph.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut components = 0;
    // explicit call stack of (node, next edge position)
    let mut calls: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if *pos == 0 && index[v] == UNSEEN {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = graph[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = components;
                    if w == v {
                        break;
                    }
                }
                components += 1;
            }
        }
    }
    comp
}

/// Backtracking with unit propagation; branches on the lowest-id unassigned
/// variable, true first.
fn dpll(dense: &Dense) -> Option<Vec<bool>> {
    // dense indices follow first occurrence, so branch in original id order
    let mut order: Vec<usize> = (0..dense.vars.len()).collect();
    order.sort_by_key(|&i| dense.vars[i]);
    let mut assignment = vec![None; dense.vars.len()];
    if search(dense, &order, &mut assignment) {
        Some(assignment.into_iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn search(dense: &Dense, order: &[usize], assignment: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        let mut all_sat = true;
        for clause in &dense.clauses {
            let mut open = None;
            let mut open_count = 0;
            let mut satisfied = false;
            for l in clause {
                match assignment[l.var] {
                    Some(v) if v == l.positive => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open = Some(*l);
                        open_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            all_sat = false;
            match open_count {
                0 => {
                    for v in trail {
                        assignment[v] = None;
                    }
                    return false;
                }
                1 => {
                    unit = open;
                    break;
                }
                _ => {}
            }
        }
        if all_sat {
            return true;
        }
        match unit {
            Some(l) => {
                assignment[l.var] = Some(l.positive);
                trail.push(l.var);
            }
            None => break,
        }
    }
    let var = *order
        .iter()
        .find(|&&v| assignment[v].is_none())
        .expect("an unsatisfied clause has an open literal");
    for value in [true, false] {
        assignment[var] = Some(value);
        if search(dense, order, assignment) {
            return true;
        }
    }
    assignment[var] = None;
    for v in trail {
        assignment[v] = None;
    }
    false
}

fn sat_with<'a>(premises: impl IntoIterator<Item = &'a Formula>, falsify: &[Lit], strategy: Strategy) -> bool {
    Dense::build(premises, falsify).solve(strategy).is_some()
}

fn entails_with<'a, I>(premises: I, goal: &Formula, strategy: Strategy) -> bool
where
    I: IntoIterator<Item = &'a Formula> + Clone,
{
    goal.clauses().all(|clause| {
        if clause.is_tautology() {
            return true;
        }
        // Φ ⊨ C  iff  Φ with every literal of C falsified is unsatisfiable
        !sat_with(premises.clone(), clause.lits(), strategy)
    })
}

/// Satisfiability of the conjunction of `premises`, class-dispatched.
pub fn satisfiable(premises: &[&Formula]) -> SatWitness {
    satisfiable_with(premises, Strategy::Dispatch)
}

pub fn satisfiable_with(premises: &[&Formula], strategy: Strategy) -> SatWitness {
    let dense = Dense::build(premises.iter().copied(), &[]);
    match dense.solve(strategy) {
        Some(values) => SatWitness {
            verdict: Verdict::Satisfiable,
            model: Some(dense.model(values)),
        },
        None => SatWitness {
            verdict: Verdict::Unsatisfiable,
            model: None,
        },
    }
}

/// `premises ⊨ goal`, decided clause by clause.
pub fn entails(premises: &[&Formula], goal: &Formula) -> bool {
    entails_with(premises.iter().copied(), goal, Strategy::Dispatch)
}

/// `premises ⊨ ¬justification`, i.e. `premises ∧ justification` is unsatisfiable.
pub fn refutes_justification(premises: &[&Formula], justification: &Formula) -> bool {
    !sat_with(
        premises.iter().copied().chain(std::iter::once(justification)),
        &[],
        Strategy::Dispatch,
    )
}

/// Implication through a strong backdoor: `premises ⊨ goal` iff the
/// implication holds in every classical reduct over `backdoor`.
///
/// Fails with [`Error::NotInClass`] when some reduct leaves `class`.
pub fn backdoor_entails(
    premises: &[&Formula],
    goal: &Formula,
    backdoor: &BTreeSet<Var>,
    class: FormulaClass,
) -> Result<bool, Error> {
    for y in enumerate_classical(backdoor) {
        let (reduced, goal) = reduce_all(premises, goal, &y);
        if !reduced.iter().all(|f| f.in_class(class)) || !goal.in_class(class) {
            return Err(Error::NotInClass {
                class,
                what: format!("reduct under {y}"),
            });
        }
        if !entails_with(reduced.iter(), &goal, Strategy::Dispatch) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn reduce_all(premises: &[&Formula], goal: &Formula, y: &ThreefoldAssignment) -> (Vec<Formula>, Formula) {
    (
        premises.iter().map(|f| f.apply(y)).collect(),
        goal.apply(y),
    )
}

/// How an [`Oracle`] decides queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Shape-dispatched polynomial procedures where they apply.
    Dispatch,
    /// Plain backtracking search for every query.
    General,
    /// Split every query over the classical assignments of a strong backdoor.
    Backdoor { vars: BTreeSet<Var>, class: FormulaClass },
}

/// Entailment oracle with a call counter, shared by extension checking.
#[derive(Debug)]
pub struct Oracle {
    mode: OracleMode,
    calls: AtomicU64,
}

impl Oracle {
    pub fn new(mode: OracleMode) -> Oracle {
        Oracle {
            mode,
            calls: AtomicU64::new(0),
        }
    }

    pub fn dispatch() -> Oracle {
        Oracle::new(OracleMode::Dispatch)
    }

    pub fn general() -> Oracle {
        Oracle::new(OracleMode::General)
    }

    pub fn backdoor(vars: BTreeSet<Var>, class: FormulaClass) -> Oracle {
        Oracle::new(OracleMode::Backdoor { vars, class })
    }

    pub fn mode(&self) -> &OracleMode {
        &self.mode
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    fn tick(&self) {
        self.calls.fetch_add(1, Ordering::Relaxed);
    }

    pub fn satisfiable(&self, premises: &[&Formula]) -> bool {
        self.tick();
        match &self.mode {
            OracleMode::Dispatch => sat_with(premises.iter().copied(), &[], Strategy::Dispatch),
            OracleMode::General => sat_with(premises.iter().copied(), &[], Strategy::General),
            OracleMode::Backdoor { vars, .. } => enumerate_classical(vars).any(|y| {
                let reduced: Vec<Formula> = premises.iter().map(|f| f.apply(&y)).collect();
                sat_with(reduced.iter(), &[], Strategy::Dispatch)
            }),
        }
    }

    pub fn entails(&self, premises: &[&Formula], goal: &Formula) -> bool {
        self.tick();
        match &self.mode {
            OracleMode::Dispatch => entails_with(premises.iter().copied(), goal, Strategy::Dispatch),
            OracleMode::General => entails_with(premises.iter().copied(), goal, Strategy::General),
            OracleMode::Backdoor { vars, class } => backdoor_entails(premises, goal, vars, *class)
                .unwrap_or_else(|_| entails_with(premises.iter().copied(), goal, Strategy::General)),
        }
    }

    /// `premises ⊨ ⋀ goals`.
    pub fn entails_all(&self, premises: &[&Formula], goals: &[&Formula]) -> bool {
        goals.iter().all(|g| self.entails(premises, g))
    }

    pub fn refutes(&self, premises: &[&Formula], justification: &Formula) -> bool {
        let mut all: Vec<&Formula> = premises.to_vec();
        all.push(justification);
        !self.satisfiable(&all)
    }
}

/// Unit clause helper used by marker queries.
pub(crate) fn unit_formula(var: Var) -> Formula {
    Formula::new([Clause::new([var.pos()])])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(clauses: &[&[i64]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    #[test]
    fn satisfiability_examples() {
        assert!(!satisfiable(&[&f(&[&[1], &[-1]])]).is_sat());
        assert!(satisfiable(&[]).is_sat());
        let xor = f(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        assert!(!satisfiable(&[&xor]).is_sat());
        assert!(!satisfiable_with(&[&xor], Strategy::General).is_sat());
        assert!(!satisfiable(&[&Formula::bottom()]).is_sat());
    }

    #[test]
    fn models_satisfy() {
        let phi = f(&[&[1, 2, 3], &[-1, -2], &[-3, 2], &[-2, -3, 1]]);
        for strategy in [Strategy::Dispatch, Strategy::General] {
            let w = satisfiable_with(&[&phi], strategy);
            let model = w.model.expect("satisfiable");
            for c in phi.clauses() {
                assert!(c.lits().iter().any(|l| model[&l.var()] == l.is_positive()));
            }
        }
    }

    #[test]
    fn entailment_examples() {
        assert!(entails(&[&f(&[&[1]])], &f(&[&[1, 2]])));
        assert!(entails(&[&f(&[&[1], &[-1, 2]])], &f(&[&[2]])));
        assert!(!entails(&[], &f(&[&[1]])));
        assert!(entails(&[], &Formula::top()));
        assert!(entails(&[], &f(&[&[1, -1]])));
        assert!(entails(&[&Formula::bottom()], &f(&[&[7]])));
    }

    #[test]
    fn justification_refutation() {
        assert!(refutes_justification(&[&f(&[&[1]]), &f(&[&[-2]])], &f(&[&[2]])));
        assert!(!refutes_justification(&[&f(&[&[1]])], &f(&[&[2]])));
        assert!(!refutes_justification(&[], &Formula::top()));
    }

    #[test]
    fn backdoor_entailment_examples() {
        let x: BTreeSet<Var> = [Var::new(1)].into();
        let phi = f(&[&[1, 2], &[-1, 2]]);
        assert_eq!(backdoor_entails(&[&phi], &f(&[&[2]]), &x, FormulaClass::Horn), Ok(true));
        assert_eq!(
            backdoor_entails(&[], &f(&[&[2]]), &BTreeSet::new(), FormulaClass::Horn),
            Ok(false)
        );
        assert_eq!(
            backdoor_entails(&[&f(&[&[1]])], &f(&[&[1]]), &x, FormulaClass::Horn),
            Ok(true)
        );
        let wide = f(&[&[1, 2, 3]]);
        assert!(backdoor_entails(&[&wide], &Formula::top(), &BTreeSet::new(), FormulaClass::Horn).is_err());
    }

    #[test]
    fn oracle_modes_agree_on_small_cases() {
        let phi = f(&[&[1, 2, 3], &[-1, 2], &[-2, 3]]);
        let goal = f(&[&[3]]);
        let vars: BTreeSet<Var> = [Var::new(1), Var::new(2)].into();
        for oracle in [Oracle::dispatch(), Oracle::general(), Oracle::backdoor(vars, FormulaClass::Horn)] {
            assert!(oracle.entails(&[&phi], &goal));
            assert!(oracle.satisfiable(&[&phi]));
            assert!(oracle.refutes(&[&phi], &f(&[&[-3]])));
            assert!(oracle.calls() >= 3);
        }
    }

    #[test]
    fn two_sat_component_order() {
        // forces x1 = false through implications
        let phi = f(&[&[-1, 2], &[-1, -2], &[1, 3], &[-3, 4]]);
        let w = satisfiable(&[&phi]);
        let m = w.model.unwrap();
        assert!(!m[&Var::new(1)]);
        assert!(m[&Var::new(3)] && m[&Var::new(4)]);
    }
}
