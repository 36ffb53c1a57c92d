//! Exhaustive enumeration of consistent stable extensions over all
//! generating sets. Exponential in the rule count; used as ground truth.

use std::collections::BTreeSet;

use crate::check::check_extension;
use crate::entail::Oracle;
use crate::theory::{generated_candidate, DefaultTheory, ExtensionCandidate};
use crate::Error;

pub const DEFAULT_RULE_LIMIT: usize = 20;

/// All consistent stable extensions, one representative per equivalence
/// class, in binary-counter order of the generating set.
pub fn enumerate_extensions(theory: &DefaultTheory, limit: usize) -> Result<Vec<ExtensionCandidate>, Error> {
    let n = theory.rules.len();
    if n > limit || n >= 64 {
        return Err(Error::TooManyRules { rules: n, limit });
    }
    let oracle = Oracle::general();
    let mut found: Vec<ExtensionCandidate> = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let generating: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let candidate = generated_candidate(theory, &generating);
        if !check_extension(theory, &candidate, &oracle) {
            continue;
        }
        if !found.iter().any(|e| e.equivalent(&candidate, &oracle)) {
            found.push(candidate);
        }
    }
    Ok(found)
}

pub fn has_consistent_extension(theory: &DefaultTheory, limit: usize) -> Result<bool, Error> {
    enumerate_extensions(theory, limit).map(|e| !e.is_empty())
}
