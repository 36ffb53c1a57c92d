//! Strong-backdoor detection through incidence (hyper)graphs, and backdoor
//! verification by enumerating reducts.

use std::collections::BTreeSet;

use crate::cnf::{enumerate_threefold, FormulaClass, ThreefoldAssignment, Var};
use crate::theory::DefaultTheory;
use crate::Error;

/// Upper bound on the backdoor size.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BackdoorBudget(pub usize);

/// Pairs of distinct variables, stored with the smaller id first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IncidenceGraph {
    pub vertices: BTreeSet<Var>,
    pub edges: BTreeSet<(Var, Var)>,
}

impl IncidenceGraph {
    pub fn add_edge(&mut self, a: Var, b: Var) {
        assert_ne!(a, b, "incidence graphs have no self-loops");
        self.edges.insert((a.min(b), a.max(b)));
    }

    pub fn is_cover(&self, set: &BTreeSet<Var>) -> bool {
        self.edges
            .iter()
            .all(|(a, b)| set.contains(a) || set.contains(b))
    }
}

/// Triples of distinct variables, sorted ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IncidenceHypergraph {
    pub vertices: BTreeSet<Var>,
    pub edges: BTreeSet<[Var; 3]>,
}

impl IncidenceHypergraph {
    pub fn add_edge(&mut self, a: Var, b: Var, c: Var) {
        let mut edge = [a, b, c];
        edge.sort();
        assert!(edge[0] != edge[1] && edge[1] != edge[2], "hyperedges need distinct members");
        self.edges.insert(edge);
    }

    pub fn is_hitting_set(&self, set: &BTreeSet<Var>) -> bool {
        self.edges.iter().all(|e| e.iter().any(|v| set.contains(v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Incidence {
    Graph(IncidenceGraph),
    Hypergraph(IncidenceHypergraph),
}

/// The structure whose covers (Horn, ID) or 3-hitting sets (Krom) are the
/// strong backdoors. Horn joins variables occurring positively together in
/// a clause; ID joins any two co-occurring variables; Krom joins every
/// variable triple of a clause.
pub fn build_incidence(theory: &DefaultTheory, class: FormulaClass) -> Result<Incidence, Error> {
    let vertices = theory.vars();
    let clauses = || theory.pool().flat_map(|f| f.clauses());
    match class {
        FormulaClass::Horn | FormulaClass::Id => {
            let mut g = IncidenceGraph {
                vertices,
                ..Default::default()
            };
            for clause in clauses() {
                let vars: Vec<Var> = clause
                    .lits()
                    .iter()
                    .filter(|l| class == FormulaClass::Id || l.is_positive())
                    .map(|l| l.var())
                    .collect();
                for (i, &a) in vars.iter().enumerate() {
                    for &b in &vars[i + 1..] {
                        if a != b {
                            g.add_edge(a, b);
                        }
                    }
                }
            }
            Ok(Incidence::Graph(g))
        }
        FormulaClass::Krom => {
            let mut h = IncidenceHypergraph {
                vertices,
                ..Default::default()
            };
            for clause in clauses() {
                let vars: Vec<Var> = clause.vars().collect::<BTreeSet<_>>().into_iter().collect();
                for i in 0..vars.len() {
                    for j in i + 1..vars.len() {
                        for l in j + 1..vars.len() {
                            h.add_edge(vars[i], vars[j], vars[l]);
                        }
                    }
                }
            }
            Ok(Incidence::Hypergraph(h))
        }
        other => Err(Error::UnsupportedClass(other)),
    }
}

/// A vertex cover of size at most `k`, by 2^k branching on the lowest
/// uncovered edge.
pub fn vertex_cover_at_most(graph: &IncidenceGraph, k: usize) -> Option<BTreeSet<Var>> {
    let edges: Vec<[Var; 2]> = graph.edges.iter().map(|&(a, b)| [a, b]).collect();
    let mut chosen = BTreeSet::new();
    branch(&edges, k, &mut chosen).then_some(chosen)
}

/// A 3-hitting set of size at most `k`, by 3^k branching.
pub fn hitting_set3_at_most(hypergraph: &IncidenceHypergraph, k: usize) -> Option<BTreeSet<Var>> {
    let edges: Vec<[Var; 3]> = hypergraph.edges.iter().copied().collect();
    let mut chosen = BTreeSet::new();
    branch(&edges, k, &mut chosen).then_some(chosen)
}

fn branch<const N: usize>(edges: &[[Var; N]], k: usize, chosen: &mut BTreeSet<Var>) -> bool {
    let open = edges
        .iter()
        .position(|e| !e.iter().any(|v| chosen.contains(v)));
    let Some(at) = open else {
        return true;
    };
    if k == 0 {
        return false;
    }
    for &v in &edges[at] {
        chosen.insert(v);
        // earlier edges are already hit
        if branch(&edges[at + 1..], k - 1, chosen) {
            return true;
        }
        chosen.remove(&v);
    }
    false
}

/// Variables with at least one negative occurrence anywhere in the theory.
pub fn negative_vars(theory: &DefaultTheory) -> BTreeSet<Var> {
    theory
        .pool()
        .flat_map(|f| f.clauses())
        .flat_map(|c| c.lits().iter())
        .filter(|l| !l.is_positive())
        .map(|l| l.var())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detection {
    Found(BTreeSet<Var>),
    NotFound,
    /// The unique smallest backdoor exceeds the budget (monotone only).
    OverBudget(BTreeSet<Var>),
}

impl Detection {
    pub fn backdoor(&self) -> Option<&BTreeSet<Var>> {
        match self {
            Detection::Found(b) => Some(b),
            _ => None,
        }
    }
}

/// Finds a strong `class`-backdoor of size at most the budget.
///
/// ID backdoors must contain every negatively occurring variable, since a
/// negative literal that survives the reduct is never an ID clause; the
/// remaining budget covers the co-occurrence graph.
pub fn detect_backdoor(theory: &DefaultTheory, class: FormulaClass, budget: BackdoorBudget) -> Detection {
    let k = budget.0;
    let found = |set: Option<BTreeSet<Var>>| set.map_or(Detection::NotFound, Detection::Found);
    match class {
        FormulaClass::Cnf => Detection::Found(BTreeSet::new()),
        FormulaClass::Monotone => {
            let negative = negative_vars(theory);
            if negative.len() <= k {
                Detection::Found(negative)
            } else {
                Detection::OverBudget(negative)
            }
        }
        FormulaClass::Horn => match build_incidence(theory, class) {
            Ok(Incidence::Graph(g)) => found(vertex_cover_at_most(&g, k)),
            _ => unreachable!(),
        },
        FormulaClass::Krom => match build_incidence(theory, class) {
            Ok(Incidence::Hypergraph(h)) => found(hitting_set3_at_most(&h, k)),
            _ => unreachable!(),
        },
        FormulaClass::Id => {
            let forced = negative_vars(theory);
            if forced.len() > k {
                return Detection::NotFound;
            }
            let Ok(Incidence::Graph(mut g)) = build_incidence(theory, class) else {
                unreachable!()
            };
            g.edges.retain(|(a, b)| !forced.contains(a) && !forced.contains(b));
            found(vertex_cover_at_most(&g, k - forced.len()).map(|mut cover| {
                cover.extend(forced);
                cover
            }))
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every threefold assignment over the backdoor.
    Full,
    /// Only the all-epsilon assignment, which dominates the others clause-wise.
    Fast,
}

/// Whether every reduct of `theory` over `backdoor` lies in `class`.
pub fn verify_backdoor(
    theory: &DefaultTheory,
    backdoor: &BTreeSet<Var>,
    class: FormulaClass,
    mode: VerifyMode,
) -> bool {
    let in_class = |y: ThreefoldAssignment| theory.apply(&y).in_class(class);
    match mode {
        VerifyMode::Full => enumerate_threefold(backdoor, false).all(in_class),
        VerifyMode::Fast => in_class(ThreefoldAssignment::all_epsilon(backdoor.iter().copied())),
    }
}

/// The graph-theoretic characterisation of strong backdoors: a cover or
/// hitting set of the incidence structure, plus the negatively occurring
/// variables for monotone and ID.
pub fn is_structural_backdoor(theory: &DefaultTheory, backdoor: &BTreeSet<Var>, class: FormulaClass) -> bool {
    let has_negatives = || negative_vars(theory).is_subset(backdoor);
    match class {
        FormulaClass::Cnf => true,
        FormulaClass::Monotone => has_negatives(),
        FormulaClass::Horn => match build_incidence(theory, class) {
            Ok(Incidence::Graph(g)) => g.is_cover(backdoor),
            _ => unreachable!(),
        },
        FormulaClass::Id => match build_incidence(theory, class) {
            Ok(Incidence::Graph(g)) => has_negatives() && g.is_cover(backdoor),
            _ => unreachable!(),
        },
        FormulaClass::Krom => match build_incidence(theory, class) {
            Ok(Incidence::Hypergraph(h)) => h.is_hitting_set(backdoor),
            _ => unreachable!(),
        },
    }
}
