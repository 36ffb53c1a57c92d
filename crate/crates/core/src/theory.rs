//! Default rules and theories, reducts with fresh markers, and extension
//! candidates represented by their finite bases.

use std::collections::BTreeSet;
use std::fmt;

use crate::cnf::{Formula, FormulaClass, ThreefoldAssignment, Var};
use crate::entail::{unit_formula, Oracle};

/// `prerequisite : justification / conclusion`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DefaultRule {
    pub prerequisite: Formula,
    pub justification: Formula,
    pub conclusion: Formula,
}

impl DefaultRule {
    pub fn new(prerequisite: Formula, justification: Formula, conclusion: Formula) -> DefaultRule {
        DefaultRule {
            prerequisite,
            justification,
            conclusion,
        }
    }

    pub fn formulas(&self) -> [&Formula; 3] {
        [&self.prerequisite, &self.justification, &self.conclusion]
    }

    fn map(&self, mut op: impl FnMut(&Formula) -> Formula) -> DefaultRule {
        DefaultRule {
            prerequisite: op(&self.prerequisite),
            justification: op(&self.justification),
            conclusion: op(&self.conclusion),
        }
    }
}

impl fmt::Display for DefaultRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} / {})", self.prerequisite, self.justification, self.conclusion)
    }
}

/// A knowledge base and an ordered list of rules. Rule order fixes marker
/// allocation and generating-set indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DefaultTheory {
    pub knowledge: Vec<Formula>,
    pub rules: Vec<DefaultRule>,
}

impl DefaultTheory {
    pub fn new(knowledge: Vec<Formula>, rules: Vec<DefaultRule>) -> DefaultTheory {
        DefaultTheory { knowledge, rules }
    }

    /// Every formula of the theory: knowledge, then each rule's three parts.
    pub fn pool(&self) -> impl Iterator<Item = &Formula> {
        self.knowledge
            .iter()
            .chain(self.rules.iter().flat_map(|r| r.formulas()))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.pool().flat_map(|f| f.vars()).collect()
    }

    pub fn max_var(&self) -> u32 {
        self.vars().last().map_or(0, |v| v.id())
    }

    pub fn is_tautology_free(&self) -> bool {
        self.pool().all(Formula::is_tautology_free)
    }

    pub fn remove_tautologies(&self) -> DefaultTheory {
        DefaultTheory {
            knowledge: self.knowledge.iter().map(Formula::remove_tautologies).collect(),
            rules: self.rules.iter().map(|r| r.map(Formula::remove_tautologies)).collect(),
        }
    }

    pub fn in_class(&self, class: FormulaClass) -> bool {
        self.pool().all(|f| f.in_class(class))
    }

    /// Component-wise reduct, without markers.
    pub fn apply(&self, y: &ThreefoldAssignment) -> DefaultTheory {
        DefaultTheory {
            knowledge: self.knowledge.iter().map(|w| w.apply(y)).collect(),
            rules: self.rules.iter().map(|r| r.map(|f| f.apply(y))).collect(),
        }
    }
}

impl fmt::Display for DefaultTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<{")?;
        for (i, w) in self.knowledge.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}, [")?;
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]>")
    }
}

/// The reduct of `origin` under a threefold assignment. Rule `i`'s
/// conclusion is conjoined with the unit clause of the fresh marker
/// `markers[i]`.
#[derive(Clone, Debug)]
pub struct ReductTheory<'a> {
    pub theory: DefaultTheory,
    pub origin: &'a DefaultTheory,
    pub markers: Vec<Var>,
    pub applied: ThreefoldAssignment,
}

/// Markers are allocated upward from the largest variable of `origin`.
pub fn theory_reduct<'a>(origin: &'a DefaultTheory, y: &ThreefoldAssignment) -> ReductTheory<'a> {
    let base = origin.max_var();
    let markers: Vec<Var> = (0..origin.rules.len())
        .map(|i| Var::new(base + 1 + i as u32))
        .collect();
    let mut theory = origin.apply(y);
    for (rule, &marker) in theory.rules.iter_mut().zip(&markers) {
        rule.conclusion = rule.conclusion.conjoin(&unit_formula(marker));
    }
    ReductTheory {
        theory,
        origin,
        markers,
        applied: y.clone(),
    }
}

impl ReductTheory<'_> {
    /// Indices of rules whose marker the candidate entails.
    pub fn marked_rules(&self, candidate: &ExtensionCandidate, oracle: &Oracle) -> BTreeSet<usize> {
        let base = candidate.premises();
        self.markers
            .iter()
            .enumerate()
            .filter(|(_, &m)| oracle.entails(&base, &unit_formula(m)))
            .map(|(i, _)| i)
            .collect()
    }

    /// Original conclusions of the rules whose markers the candidate entails.
    pub fn cncl(&self, candidate: &ExtensionCandidate, oracle: &Oracle) -> Vec<Formula> {
        self.marked_rules(candidate, oracle)
            .into_iter()
            .map(|i| self.origin.rules[i].conclusion.clone())
            .collect()
    }

    /// Carries a candidate of the reduct back to the original theory.
    pub fn lift(&self, candidate: &ExtensionCandidate, oracle: &Oracle) -> ExtensionCandidate {
        generated_candidate(self.origin, &self.marked_rules(candidate, oracle))
    }

    /// The reduct with marker units removed from the conclusions.
    pub fn strip_markers(&self) -> DefaultTheory {
        let mut theory = self.theory.clone();
        let markers: BTreeSet<Var> = self.markers.iter().copied().collect();
        for rule in &mut theory.rules {
            rule.conclusion = Formula::new(
                rule.conclusion
                    .clauses()
                    .filter(|c| !(c.len() == 1 && markers.contains(&c.lits()[0].var())))
                    .cloned(),
            );
        }
        theory
    }
}

/// `Th(base)` with `base = knowledge ∪ {conclusion_i | i ∈ generating}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCandidate {
    pub base: Vec<Formula>,
    pub generating: BTreeSet<usize>,
}

impl ExtensionCandidate {
    pub fn premises(&self) -> Vec<&Formula> {
        self.base.iter().collect()
    }

    /// Mutual entailment of the two bases.
    pub fn equivalent(&self, other: &ExtensionCandidate, oracle: &Oracle) -> bool {
        let (a, b) = (self.premises(), other.premises());
        oracle.entails_all(&a, &b) && oracle.entails_all(&b, &a)
    }
}

impl fmt::Display for ExtensionCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Th{")?;
        for (i, w) in self.base.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}} G={:?}", self.generating)
    }
}

/// Panics if `generating` names a rule the theory does not have.
pub fn generated_candidate(theory: &DefaultTheory, generating: &BTreeSet<usize>) -> ExtensionCandidate {
    let mut base = theory.knowledge.clone();
    base.extend(generating.iter().map(|&i| theory.rules[i].conclusion.clone()));
    ExtensionCandidate {
        base,
        generating: generating.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Choice;

    fn f(clauses: &[&[i64]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    // x = 1, y = 2
    fn example3() -> DefaultTheory {
        DefaultTheory::new(
            vec![f(&[&[1]])],
            vec![DefaultRule::new(f(&[&[1]]), f(&[&[2]]), f(&[&[-2, 1]]))],
        )
    }

    // x = 1, y = 2, z = 3
    fn d2() -> DefaultTheory {
        DefaultTheory::new(
            vec![f(&[&[1]])],
            vec![
                DefaultRule::new(f(&[&[1]]), f(&[&[3]]), f(&[&[-2]])),
                DefaultRule::new(f(&[&[1]]), f(&[&[2]]), f(&[&[-3]])),
            ],
        )
    }

    fn x_is(choice: Choice) -> ThreefoldAssignment {
        ThreefoldAssignment::new([(Var::new(1), choice)])
    }

    #[test]
    fn reduct_of_example_three() {
        let t = example3();
        let r = theory_reduct(&t, &x_is(Choice::Positive));
        assert_eq!(r.markers, vec![Var::new(3)]);
        assert_eq!(r.theory.knowledge, vec![Formula::top()]);
        assert_eq!(
            r.theory.rules,
            vec![DefaultRule::new(Formula::top(), f(&[&[2]]), f(&[&[3]]))]
        );
        let neg = theory_reduct(&t, &x_is(Choice::Negative));
        assert_eq!(neg.theory.knowledge, vec![Formula::bottom()]);
    }

    #[test]
    fn empty_assignment_only_adds_markers() {
        let t = d2();
        let r = theory_reduct(&t, &ThreefoldAssignment::default());
        assert_eq!(r.theory.knowledge, t.knowledge);
        assert_eq!(r.theory.rules[0].conclusion, f(&[&[-2], &[4]]));
        assert_eq!(r.theory.rules[1].conclusion, f(&[&[-3], &[5]]));
        assert_eq!(r.strip_markers(), t);
    }

    #[test]
    fn generated_candidates_of_d2() {
        let t = d2();
        assert_eq!(generated_candidate(&t, &[0].into()).base, vec![f(&[&[1]]), f(&[&[-2]])]);
        assert_eq!(generated_candidate(&t, &[1].into()).base, vec![f(&[&[1]]), f(&[&[-3]])]);
        assert_eq!(generated_candidate(&t, &BTreeSet::new()).base, t.knowledge);
    }

    #[test]
    fn cncl_and_lift_of_example_three() {
        let t = example3();
        let oracle = Oracle::dispatch();
        let r = theory_reduct(&t, &x_is(Choice::Positive));
        let e = ExtensionCandidate {
            base: vec![f(&[&[3]])],
            generating: [0].into(),
        };
        assert_eq!(r.cncl(&e, &oracle), vec![f(&[&[-2, 1]])]);
        let lifted = r.lift(&e, &oracle);
        assert_eq!(lifted.base, vec![f(&[&[1]]), f(&[&[-2, 1]])]);
        assert_eq!(lifted.generating, [0].into());

        let none = ExtensionCandidate {
            base: vec![Formula::top()],
            generating: BTreeSet::new(),
        };
        assert!(r.cncl(&none, &oracle).is_empty());
        assert_eq!(r.lift(&none, &oracle).base, t.knowledge);
    }

    #[test]
    fn cncl_two_rules() {
        let t = d2();
        let oracle = Oracle::dispatch();
        let r = theory_reduct(&t, &x_is(Choice::Positive));
        let e = ExtensionCandidate {
            base: vec![f(&[&[4]]), f(&[&[5], &[-2]])],
            generating: BTreeSet::new(),
        };
        assert_eq!(r.cncl(&e, &oracle), vec![f(&[&[-2]]), f(&[&[-3]])]);
    }

    #[test]
    fn lift_of_d2_reduct() {
        let t = d2();
        let oracle = Oracle::dispatch();
        let r = theory_reduct(&t, &x_is(Choice::Positive));
        let e = generated_candidate(&r.theory, &[0].into());
        let lifted = r.lift(&e, &oracle);
        assert_eq!(lifted.base, vec![f(&[&[1]]), f(&[&[-2]])]);
    }
}
