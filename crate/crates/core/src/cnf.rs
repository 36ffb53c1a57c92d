//! CNF formulas, clause classes and reducts under extended literals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// A propositional variable, identified by a positive integer.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    /// Panics on id 0.
    pub fn new(id: u32) -> Var {
        assert!(id >= 1, "variable ids start at 1");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal. Orders by variable, positive before negative.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    var: Var,
    negated: bool,
}

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit {
            var,
            negated: !positive,
        }
    }

    /// DIMACS-style signed id; `None` for 0.
    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 || value.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Lit::new(Var::new(value.unsigned_abs() as u32), value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let id = self.var.id() as i64;
        if self.negated {
            -id
        } else {
            id
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        !self.negated
    }

    pub fn complement(self) -> Lit {
        Lit {
            var: self.var,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// One of the three choices a threefold assignment makes per variable.
/// The derived order (positive, negative, epsilon) is the enumeration order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Choice {
    Positive,
    Negative,
    Epsilon,
}

impl Choice {
    pub const ALL: [Choice; 3] = [Choice::Positive, Choice::Negative, Choice::Epsilon];
}

/// A literal `x` / `¬x`, or the deletion marker `x_ε`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtLit {
    pub var: Var,
    pub kind: Choice,
}

impl ExtLit {
    pub fn epsilon(var: Var) -> ExtLit {
        ExtLit {
            var,
            kind: Choice::Epsilon,
        }
    }

    /// The embedded literal, absent for `x_ε`.
    pub fn literal(self) -> Option<Lit> {
        match self.kind {
            Choice::Positive => Some(self.var.pos()),
            Choice::Negative => Some(self.var.neg()),
            Choice::Epsilon => None,
        }
    }
}

impl From<Lit> for ExtLit {
    fn from(lit: Lit) -> ExtLit {
        ExtLit {
            var: lit.var(),
            kind: if lit.is_positive() {
                Choice::Positive
            } else {
                Choice::Negative
            },
        }
    }
}

/// A disjunction of literals, kept sorted and duplicate-free.
/// The empty clause is ⊥.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause(lits)
    }

    /// Builds a clause from signed DIMACS ids. Panics on 0.
    pub fn from_dimacs(values: &[i64]) -> Clause {
        Clause::new(
            values
                .iter()
                .map(|&v| Lit::from_dimacs(v).expect("0 is not a literal")),
        )
    }

    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    /// True if the clause contains a complementary pair.
    pub fn is_tautology(&self) -> bool {
        // sorted by (var, polarity), so complements are adjacent
        self.0.windows(2).any(|w| w[0].var() == w[1].var())
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|l| l.var())
    }

    pub fn positive_count(&self) -> usize {
        self.0.iter().filter(|l| l.is_positive()).count()
    }

    pub fn negative_count(&self) -> usize {
        self.0.len() - self.positive_count()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lit in &self.0 {
            write!(f, "{lit} ")?;
        }
        write!(f, "0")
    }
}

/// The clause classes considered as backdoor targets.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaClass {
    Cnf,
    Horn,
    Krom,
    Monotone,
    Id,
}

impl FormulaClass {
    pub const ALL: [FormulaClass; 5] = [
        FormulaClass::Cnf,
        FormulaClass::Horn,
        FormulaClass::Krom,
        FormulaClass::Monotone,
        FormulaClass::Id,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaClass::Cnf => "cnf",
            FormulaClass::Horn => "horn",
            FormulaClass::Krom => "krom",
            FormulaClass::Monotone => "monotone",
            FormulaClass::Id => "id",
        }
    }

    /// Clause membership, closed under taking sub-clauses.
    pub fn admits(self, clause: &Clause) -> bool {
        match self {
            FormulaClass::Cnf => true,
            FormulaClass::Horn => clause.positive_count() <= 1,
            FormulaClass::Krom => clause.len() <= 2,
            FormulaClass::Monotone => clause.negative_count() == 0,
            FormulaClass::Id => clause.len() <= 1 && clause.negative_count() == 0,
        }
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormulaClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown formula class `{s}`"))
    }
}

/// Every class admitting `clause`. Always contains CNF.
pub fn classify_clause(clause: &Clause) -> BTreeSet<FormulaClass> {
    FormulaClass::ALL
        .into_iter()
        .filter(|c| c.admits(clause))
        .collect()
}

/// A conjunction of clauses. The empty formula is ⊤.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Formula(BTreeSet<Clause>);

impl Formula {
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Formula {
        Formula(clauses.into_iter().collect())
    }

    pub fn from_dimacs(clauses: &[&[i64]]) -> Formula {
        Formula::new(clauses.iter().map(|c| Clause::from_dimacs(c)))
    }

    pub fn top() -> Formula {
        Formula::default()
    }

    /// The formula holding only the empty clause.
    pub fn bottom() -> Formula {
        Formula::new([Clause::empty()])
    }

    pub fn unit(lit: Lit) -> Formula {
        Formula::new([Clause::new([lit])])
    }

    pub fn clauses(&self) -> impl ExactSizeIterator<Item = &Clause> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_top(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        // the empty clause sorts first
        self.0.first().is_some_and(Clause::is_empty)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().flat_map(Clause::vars).collect()
    }

    pub fn conjoin(&self, other: &Formula) -> Formula {
        Formula(self.0.union(&other.0).cloned().collect())
    }

    pub fn insert(&mut self, clause: Clause) {
        self.0.insert(clause);
    }

    pub fn is_tautology_free(&self) -> bool {
        !self.0.iter().any(Clause::is_tautology)
    }

    /// Drops every clause with a complementary pair.
    pub fn remove_tautologies(&self) -> Formula {
        Formula(
            self.0
                .iter()
                .filter(|c| !c.is_tautology())
                .cloned()
                .collect(),
        )
    }

    pub fn in_class(&self, class: FormulaClass) -> bool {
        self.0.iter().all(|c| class.admits(c))
    }

    /// Reduct under a single extended literal.
    pub fn reduct(&self, ext: ExtLit) -> Formula {
        let mut choice = BTreeMap::new();
        choice.insert(ext.var, ext.kind);
        self.apply(&ThreefoldAssignment(choice))
    }

    /// Reduct under every choice of `assignment` at once; equal to folding
    /// [`Formula::reduct`] over the choices in any order.
    pub fn apply(&self, assignment: &ThreefoldAssignment) -> Formula {
        if assignment.is_empty() {
            return self.clone();
        }
        let mut out = BTreeSet::new();
        'clauses: for clause in &self.0 {
            let mut kept = Vec::with_capacity(clause.len());
            for &lit in clause.lits() {
                match assignment.get(lit.var()) {
                    None => kept.push(lit),
                    Some(Choice::Epsilon) => {}
                    Some(Choice::Positive) if lit.is_positive() => continue 'clauses,
                    Some(Choice::Negative) if !lit.is_positive() => continue 'clauses,
                    Some(_) => {}
                }
            }
            // a subsequence of a sorted, deduplicated list stays so
            out.insert(Clause(kept));
        }
        Formula(out)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for clause in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{clause}")?;
        }
        Ok(())
    }
}

/// One choice from {positive, negative, epsilon} per variable of a domain.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThreefoldAssignment(BTreeMap<Var, Choice>);

impl ThreefoldAssignment {
    pub fn new(choices: impl IntoIterator<Item = (Var, Choice)>) -> ThreefoldAssignment {
        ThreefoldAssignment(choices.into_iter().collect())
    }

    pub fn all_epsilon(vars: impl IntoIterator<Item = Var>) -> ThreefoldAssignment {
        ThreefoldAssignment::new(vars.into_iter().map(|v| (v, Choice::Epsilon)))
    }

    pub fn get(&self, var: Var) -> Option<Choice> {
        self.0.get(&var).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    pub fn choices(&self) -> impl Iterator<Item = (Var, Choice)> + '_ {
        self.0.iter().map(|(&v, &c)| (v, c))
    }

    pub fn ext_lits(&self) -> impl Iterator<Item = ExtLit> + '_ {
        self.choices().map(|(var, kind)| ExtLit { var, kind })
    }

    /// No epsilon choices, i.e. an ordinary truth assignment.
    pub fn is_classical(&self) -> bool {
        self.0.values().all(|&c| c != Choice::Epsilon)
    }
}

impl fmt::Display for ThreefoldAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match c {
                Choice::Positive => write!(f, "{v}")?,
                Choice::Negative => write!(f, "-{v}")?,
                Choice::Epsilon => write!(f, "{v}_eps")?,
            }
        }
        f.write_str("}")
    }
}

/// Enumerates assignments over a variable set in lexicographic order
/// (lowest variable most significant, positive < negative < epsilon).
#[derive(Clone, Debug)]
pub struct Assignments {
    vars: Vec<Var>,
    choices: &'static [Choice],
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for Assignments {
    type Item = ThreefoldAssignment;

    fn next(&mut self) -> Option<ThreefoldAssignment> {
        if self.done {
            return None;
        }
        let item = ThreefoldAssignment::new(
            self.vars
                .iter()
                .zip(&self.counter)
                .map(|(&v, &i)| (v, self.choices[i])),
        );
        // odometer step, least significant digit last
        self.done = true;
        for digit in self.counter.iter_mut().rev() {
            *digit += 1;
            if *digit < self.choices.len() {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(item)
    }
}

/// All of tA(X), or only the all-epsilon member when `epsilon_only`.
pub fn enumerate_threefold(vars: &BTreeSet<Var>, epsilon_only: bool) -> Assignments {
    const THREE: [Choice; 3] = Choice::ALL;
    const EPS: [Choice; 1] = [Choice::Epsilon];
    Assignments {
        vars: vars.iter().copied().collect(),
        choices: if epsilon_only { &EPS } else { &THREE },
        counter: vec![0; vars.len()],
        done: false,
    }
}

/// All 2^|X| classical assignments A(X).
pub fn enumerate_classical(vars: &BTreeSet<Var>) -> Assignments {
    const TWO: [Choice; 2] = [Choice::Positive, Choice::Negative];
    Assignments {
        vars: vars.iter().copied().collect(),
        choices: &TWO,
        counter: vec![0; vars.len()],
        done: false,
    }
}
