//! Backdoor evaluation: enumerate the reducts over a strong backdoor, find
//! the stable extensions of each reduct, lift them back and keep the first
//! one that checks out against the original theory.

use std::collections::BTreeSet;

use crate::brute::enumerate_extensions;
use crate::check::check_extension;
use crate::cnf::{enumerate_threefold, Formula, FormulaClass, Var};
use crate::detect::{detect_backdoor, verify_backdoor, BackdoorBudget, Detection, VerifyMode};
use crate::entail::Oracle;
use crate::theory::{generated_candidate, theory_reduct, DefaultTheory, ExtensionCandidate, ReductTheory};
use crate::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    ExtensionExists,
    NoExtension,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub reducts: u64,
    pub candidates: u64,
    pub oracle_calls: u64,
}

/// How the answer was obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Route {
    Backdoor,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub answer: Answer,
    pub witness: Option<ExtensionCandidate>,
    /// Every verified lifted candidate; filled only in exhaustive mode.
    pub witnesses: Vec<ExtensionCandidate>,
    pub backdoor: Option<BTreeSet<Var>>,
    pub class: FormulaClass,
    pub route: Route,
    pub stats: Stats,
}

/// Oracle used when checking lifted candidates against the original theory.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum CheckOracle {
    #[default]
    General,
    /// Split implication queries over the classical assignments of the backdoor.
    Backdoor,
    Dispatch,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalOptions {
    pub oracle: CheckOracle,
    /// Lift and verify every reduct extension instead of stopping at the first.
    pub exhaustive: bool,
}

/// Stable extensions of a reduct theory that lies in `class`.
///
/// Horn, Krom and CNF reducts are searched over all generating sets.
/// Monotone and ID reducts have at most one extension: no consistent
/// monotone base refutes a justification other than ⊥, so rules with a
/// non-⊥ justification act as plain inference rules.
pub fn reduct_extensions(
    reduct: &ReductTheory<'_>,
    class: FormulaClass,
    oracle: &Oracle,
) -> Result<Vec<ExtensionCandidate>, Error> {
    let theory = &reduct.theory;
    if !theory.in_class(class) {
        return Err(Error::NotInClass {
            class,
            what: format!("reduct under {}", reduct.applied),
        });
    }
    match class {
        FormulaClass::Monotone | FormulaClass::Id => Ok(unique_extension(theory, oracle).into_iter().collect()),
        FormulaClass::Cnf | FormulaClass::Horn | FormulaClass::Krom => {
            let n = theory.rules.len();
            if n >= 64 {
                return Err(Error::TooManyRules { rules: n, limit: 63 });
            }
            Ok((0u64..1 << n)
                .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<_>>())
                .map(|g| generated_candidate(theory, &g))
                .filter(|e| check_extension(theory, e, oracle))
                .collect())
        }
    }
}

fn unique_extension(theory: &DefaultTheory, oracle: &Oracle) -> Option<ExtensionCandidate> {
    let usable: Vec<usize> = (0..theory.rules.len())
        .filter(|&i| !theory.rules[i].justification.has_empty_clause())
        .collect();
    let mut derived: Vec<&Formula> = theory.knowledge.iter().collect();
    let mut generating = BTreeSet::new();
    loop {
        let mut changed = false;
        for &i in &usable {
            if generating.contains(&i) {
                continue;
            }
            let rule = &theory.rules[i];
            if oracle.entails(&derived, &rule.prerequisite) {
                derived.push(&rule.conclusion);
                generating.insert(i);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !oracle.satisfiable(&derived) {
        return None;
    }
    Some(generated_candidate(theory, &generating))
}

/// Decides extension existence for `theory` given a strong `class`-backdoor.
pub fn evaluate_backdoor(
    theory: &DefaultTheory,
    backdoor: &BTreeSet<Var>,
    class: FormulaClass,
    options: EvalOptions,
) -> Result<SolveReport, Error> {
    if !theory.is_tautology_free() {
        return Err(Error::TautologicalClause);
    }
    if !verify_backdoor(theory, backdoor, class, VerifyMode::Fast) {
        return Err(Error::NotABackdoor { class });
    }
    let reduct_oracle = Oracle::dispatch();
    let check_oracle = match options.oracle {
        CheckOracle::General => Oracle::general(),
        CheckOracle::Dispatch => Oracle::dispatch(),
        CheckOracle::Backdoor => Oracle::backdoor(backdoor.clone(), class),
    };

    let mut stats = Stats::default();
    let mut witnesses: Vec<ExtensionCandidate> = Vec::new();
    'assignments: for y in enumerate_threefold(backdoor, false) {
        stats.reducts += 1;
        let reduct = theory_reduct(theory, &y);
        for extension in reduct_extensions(&reduct, class, &reduct_oracle)? {
            let lifted = reduct.lift(&extension, &reduct_oracle);
            stats.candidates += 1;
            if witnesses.iter().any(|w| w.generating == lifted.generating) {
                continue;
            }
            if check_extension(theory, &lifted, &check_oracle) {
                witnesses.push(lifted);
                if !options.exhaustive {
                    break 'assignments;
                }
            }
        }
    }
    stats.oracle_calls = reduct_oracle.calls() + check_oracle.calls();

    let witness = witnesses.first().cloned();
    if !options.exhaustive {
        witnesses.clear();
    }
    Ok(SolveReport {
        answer: if witness.is_some() {
            Answer::ExtensionExists
        } else {
            Answer::NoExtension
        },
        witness,
        witnesses,
        backdoor: Some(backdoor.clone()),
        class,
        route: Route::Backdoor,
        stats,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub eval: EvalOptions,
    /// Largest rule count the brute-force fallback accepts.
    pub limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eval: EvalOptions::default(),
            limit: crate::brute::DEFAULT_RULE_LIMIT,
        }
    }
}

/// Tautology removal, backdoor detection, then evaluation; falls back to
/// exhaustive enumeration when no backdoor fits the budget.
pub fn solve(
    theory: &DefaultTheory,
    class: FormulaClass,
    budget: BackdoorBudget,
    options: SolveOptions,
) -> Result<SolveReport, Error> {
    let theory = theory.remove_tautologies();
    if let Detection::Found(backdoor) = detect_backdoor(&theory, class, budget) {
        return evaluate_backdoor(&theory, &backdoor, class, options.eval);
    }
    if theory.rules.len() > options.limit {
        return Err(Error::OverBudget {
            k: budget.0,
            rules: theory.rules.len(),
            limit: options.limit,
        });
    }
    let extensions = enumerate_extensions(&theory, options.limit)?;
    let n = theory.rules.len() as u32;
    Ok(SolveReport {
        answer: if extensions.is_empty() {
            Answer::NoExtension
        } else {
            Answer::ExtensionExists
        },
        witness: extensions.first().cloned(),
        witnesses: if options.eval.exhaustive { extensions } else { Vec::new() },
        backdoor: None,
        class,
        route: Route::BruteForce,
        stats: Stats {
            reducts: 0,
            candidates: 1 << n,
            oracle_calls: 0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Choice, ThreefoldAssignment};
    use crate::theory::DefaultRule;

    fn f(clauses: &[&[i64]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    fn vs(ids: &[u32]) -> BTreeSet<Var> {
        ids.iter().map(|&i| Var::new(i)).collect()
    }

    fn example3() -> DefaultTheory {
        DefaultTheory::new(
            vec![f(&[&[1]])],
            vec![DefaultRule::new(f(&[&[1]]), f(&[&[2]]), f(&[&[-2, 1]]))],
        )
    }

    #[test]
    fn reduct_extensions_of_example_three() {
        let t = example3();
        let oracle = Oracle::dispatch();
        let pos = theory_reduct(&t, &ThreefoldAssignment::new([(Var::new(1), Choice::Positive)]));
        for class in [FormulaClass::Horn, FormulaClass::Krom, FormulaClass::Monotone, FormulaClass::Id] {
            let e = reduct_extensions(&pos, class, &oracle).unwrap();
            assert_eq!(e.len(), 1, "{class}");
            assert!(e[0].equivalent(
                &ExtensionCandidate {
                    base: vec![f(&[&[3]])],
                    generating: BTreeSet::new()
                },
                &oracle
            ));
        }
        for choice in [Choice::Negative, Choice::Epsilon] {
            let r = theory_reduct(&t, &ThreefoldAssignment::new([(Var::new(1), choice)]));
            assert!(reduct_extensions(&r, FormulaClass::Horn, &oracle).unwrap().is_empty());
        }
    }

    #[test]
    fn monotone_reduct_strips_justification() {
        // <{a}, [a : b / c]> with a = 1, b = 2, c = 3
        let t = DefaultTheory::new(
            vec![f(&[&[1]])],
            vec![DefaultRule::new(f(&[&[1]]), f(&[&[2]]), f(&[&[3]]))],
        );
        let r = theory_reduct(&t, &ThreefoldAssignment::default());
        let e = reduct_extensions(&r, FormulaClass::Monotone, &Oracle::dispatch()).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].base, vec![f(&[&[1]]), f(&[&[3], &[4]])]);
    }

    #[test]
    fn monotone_bottom_justification_blocks() {
        let t = DefaultTheory::new(
            vec![],
            vec![DefaultRule::new(Formula::top(), Formula::bottom(), f(&[&[3]]))],
        );
        let r = theory_reduct(&t, &ThreefoldAssignment::default());
        let e = reduct_extensions(&r, FormulaClass::Id, &Oracle::dispatch()).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].generating.is_empty());
    }

    #[test]
    fn reduct_outside_class_is_rejected() {
        let t = DefaultTheory::new(vec![f(&[&[1, 2]])], vec![]);
        let r = theory_reduct(&t, &ThreefoldAssignment::default());
        assert!(matches!(
            reduct_extensions(&r, FormulaClass::Horn, &Oracle::dispatch()),
            Err(Error::NotInClass { .. })
        ));
    }

    #[test]
    fn evaluate_example_three() {
        let t = example3();
        let report = evaluate_backdoor(&t, &vs(&[1]), FormulaClass::Horn, EvalOptions::default()).unwrap();
        assert_eq!(report.answer, Answer::ExtensionExists);
        let w = report.witness.unwrap();
        assert_eq!(w.base, vec![f(&[&[1]]), f(&[&[-2, 1]])]);
    }

    #[test]
    fn no_extension_explores_every_reduct() {
        let t = DefaultTheory::new(
            vec![f(&[&[1]])],
            vec![
                DefaultRule::new(f(&[&[1]]), f(&[&[2]]), f(&[&[-2]])),
                DefaultRule::new(f(&[&[-1]]), f(&[&[2]]), f(&[&[-2]])),
            ],
        );
        let report = evaluate_backdoor(&t, &vs(&[1, 2]), FormulaClass::Id, EvalOptions::default()).unwrap();
        assert_eq!(report.answer, Answer::NoExtension);
        assert_eq!(report.stats.reducts, 9);
    }

    #[test]
    fn rejects_non_backdoor() {
        let t = DefaultTheory::new(vec![f(&[&[1, 2, 3]])], vec![]);
        assert_eq!(
            evaluate_backdoor(&t, &BTreeSet::new(), FormulaClass::Horn, EvalOptions::default()),
            Err(Error::NotABackdoor { class: FormulaClass::Horn })
        );
    }

    #[test]
    fn solve_falls_back_to_enumeration() {
        let t = DefaultTheory::new(vec![f(&[&[1, 2, 3]])], vec![]);
        let report = solve(&t, FormulaClass::Horn, BackdoorBudget(0), SolveOptions::default()).unwrap();
        assert_eq!(report.route, Route::BruteForce);
        assert_eq!(report.answer, Answer::ExtensionExists);
        let tight = SolveOptions {
            limit: 0,
            ..Default::default()
        };
        let many = DefaultTheory::new(vec![f(&[&[1, 2, 3]])], vec![DefaultRule::default()]);
        assert!(matches!(
            solve(&many, FormulaClass::Horn, BackdoorBudget(0), tight),
            Err(Error::OverBudget { .. })
        ));
    }
}
