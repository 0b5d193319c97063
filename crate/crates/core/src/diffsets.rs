//! (v, K, λ=1) difference sets: verification, the Mian-Chowla greedy
//! sequence, the power-of-two construction and exhaustive backtracking
//! search.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A set of residues modulo `v` whose nonzero pairwise differences each
/// occur exactly `lambda` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceSet {
    modulus: u64,
    /// Strictly increasing, each in `[0, modulus)`.
    elements: Vec<u64>,
    lambda: u64,
    verified: bool,
}

impl DifferenceSet {
    /// Verify the difference property and build the set; requires λ = 1.
    pub fn new(modulus: u64, mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        let (lambda1, _histogram) = verify_difference_set(modulus, &elements)?;
        if !lambda1 {
            return Err(Error::InvalidInput(format!(
                "{elements:?} is not a (v={modulus}, K={}, 1) difference set",
                elements.len()
            )));
        }
        Ok(DifferenceSet {
            modulus,
            elements,
            lambda: 1,
            verified: true,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Translate every element by `c` modulo v (stays a difference set).
    pub fn translated(&self, c: u64) -> Self {
        let mut elements: Vec<u64> = self
            .elements
            .iter()
            .map(|&x| (x + c % self.modulus) % self.modulus)
            .collect();
        elements.sort_unstable();
        DifferenceSet {
            modulus: self.modulus,
            elements,
            lambda: self.lambda,
            verified: self.verified,
        }
    }
}

/// Compute all ordered differences `x − x' mod v` and their multiplicity
/// histogram (index = residue; entry 0 unused).
///
/// Returns `(true, histogram)` iff each of the K(K−1) differences occupies
/// its own residue, i.e. λ = 1. A common λ > 1 can be recovered from the
/// histogram via [`common_lambda`].
pub fn verify_difference_set(modulus: u64, elements: &[u64]) -> Result<(bool, Vec<u64>)> {
    if modulus == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    for (i, &x) in elements.iter().enumerate() {
        if x >= modulus {
            return Err(Error::InvalidInput(format!(
                "element {x} out of range for modulus {modulus}"
            )));
        }
        if elements[..i].contains(&x) {
            return Err(Error::InvalidInput(format!("duplicate element {x}")));
        }
    }
    let mut histogram = vec![0u64; modulus as usize];
    for &x in elements {
        for &y in elements {
            if x != y {
                let diff = (x + modulus - y) % modulus;
                histogram[diff as usize] += 1;
            }
        }
    }
    let lambda1 = histogram[1..].iter().all(|&c| c <= 1)
        && histogram[1..].iter().filter(|&&c| c == 1).count()
            == elements.len() * elements.len().saturating_sub(1);
    Ok((lambda1, histogram))
}

/// The common multiplicity of all nonzero residues, if one exists.
pub fn common_lambda(histogram: &[u64]) -> Option<u64> {
    let first = *histogram.get(1)?;
    if first > 0 && histogram[1..].iter().all(|&c| c == first) {
        Some(first)
    } else {
        None
    }
}

/// First `n` terms of the Mian-Chowla sequence: the greedy Sidon set
/// starting at 1, where each term is the smallest integer keeping all
/// pairwise differences distinct.
pub fn mian_chowla(n: usize) -> Vec<u64> {
    let mut terms: Vec<u64> = Vec::with_capacity(n);
    let mut diffs = alloc::collections::BTreeSet::new();
    let mut candidate = 1u64;
    while terms.len() < n {
        let ok = terms.iter().all(|&t| !diffs.contains(&(candidate - t)));
        if ok {
            for &t in &terms {
                diffs.insert(candidate - t);
            }
            terms.push(candidate);
        }
        candidate += 1;
    }
    terms
}

/// The set `{2⁰, …, 2^{d−1}}` with modulus `2^d`, a (2^d, d, 1) difference
/// set for every d.
pub fn power_of_two_set(d: u32) -> Result<DifferenceSet> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if d >= 63 {
        return Err(Error::RangeError(format!(
            "2^{d} exceeds the supported integer width"
        )));
    }
    let elements: Vec<u64> = (0..d).map(|i| 1u64 << i).collect();
    DifferenceSet::new(1u64 << d, elements)
}

/// Outcome of an exhaustive difference-set search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(DifferenceSet),
    /// The full canonical tree was exhausted: no (v, K, 1) set exists.
    NotFound { nodes: u64 },
    /// The node budget ran out before exhaustion; existence stays open.
    Inconclusive { nodes: u64 },
}

/// Backtracking search for a (modulus, size, 1) difference set.
///
/// Canonicalization: 0 is fixed as the first element (translation symmetry)
/// and the second element is capped at (v−1)/2 (reflection symmetry: were
/// every nonzero element of a λ=1 set above v/2, its negation would not be).
/// Elements are extended in increasing order, so the first hit is the
/// lexicographically smallest canonical set and the search is deterministic.
pub fn search_difference_set(
    modulus: u64,
    size: usize,
    budget: Option<u64>,
) -> Result<SearchOutcome> {
    if size < 2 {
        return Err(Error::InvalidInput("need at least two elements".into()));
    }
    let min_v = (size as u64) * (size as u64 - 1) + 1;
    if modulus < min_v {
        return Err(Error::InvalidInput(format!(
            "modulus {modulus} below K(K−1)+1 = {min_v}"
        )));
    }
    let mut state = SearchState {
        modulus,
        size,
        budget,
        nodes: 0,
        used: vec![false; modulus as usize],
        chosen: vec![0u64],
        exhausted_budget: false,
    };
    let found = state.extend();
    Ok(match found {
        Some(elements) => SearchOutcome::Found(DifferenceSet::new(modulus, elements)?),
        None if state.exhausted_budget => SearchOutcome::Inconclusive { nodes: state.nodes },
        None => SearchOutcome::NotFound { nodes: state.nodes },
    })
}

struct SearchState {
    modulus: u64,
    size: usize,
    budget: Option<u64>,
    nodes: u64,
    /// used[r] = residue r already occurs as a difference.
    used: Vec<bool>,
    chosen: Vec<u64>,
    exhausted_budget: bool,
}

impl SearchState {
    fn extend(&mut self) -> Option<Vec<u64>> {
        if self.chosen.len() == self.size {
            return Some(self.chosen.clone());
        }
        if self.exhausted_budget {
            return None;
        }
        let v = self.modulus;
        let last = *self.chosen.last().unwrap();
        let remaining = (self.size - self.chosen.len()) as u64;
        // Strictly increasing, leaving room for the rest.
        let hi = if self.chosen.len() == 1 {
            (v - 1) / 2
        } else {
            v - remaining
        };
        for cand in (last + 1)..=hi {
            self.nodes += 1;
            if let Some(b) = self.budget {
                if self.nodes > b {
                    self.exhausted_budget = true;
                    return None;
                }
            }
            let mut fresh: Vec<u64> = Vec::with_capacity(self.chosen.len() * 2);
            let mut ok = true;
            for &x in &self.chosen {
                let fwd = (cand + v - x) % v;
                let bwd = (x + v - cand) % v;
                if self.used[fwd as usize] || self.used[bwd as usize] || fwd == bwd {
                    ok = false;
                    break;
                }
                self.used[fwd as usize] = true;
                self.used[bwd as usize] = true;
                fresh.push(fwd);
                fresh.push(bwd);
            }
            if ok {
                self.chosen.push(cand);
                if let Some(solution) = self.extend() {
                    return Some(solution);
                }
                self.chosen.pop();
            }
            for r in fresh {
                self.used[r as usize] = false;
            }
        }
        None
    }
}
