//! Enumeration of all intermediate subrings of a finite extension.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Lattice, LatticeError};
use crate::ring::{canonical_cmp, members, Elem, ElemSet, FiniteRing, DEFAULT_SIZE_CAP};

pub const DEFAULT_LATTICE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("ring of size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("more than {cap} intermediate rings")]
    LatticeCapExceeded { cap: usize },
    #[error("base is not a subring of the top ring")]
    BaseNotContained,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub size_cap: usize,
    pub lattice_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { size_cap: DEFAULT_SIZE_CAP, lattice_cap: DEFAULT_LATTICE_CAP }
    }
}

/// An intermediate ring, as a set of ambient elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subring {
    elements: ElemSet,
    /// Elements adjoined to the base to reach this ring.
    generators: Vec<Elem>,
}

impl Subring {
    pub fn elements(&self) -> &ElemSet {
        &self.elements
    }

    pub fn members(&self) -> Vec<Elem> {
        members(&self.elements)
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.contains(x as usize)
    }

    pub fn is_subset(&self, other: &Subring) -> bool {
        self.elements.is_subset(&other.elements)
    }
}

/// The lattice `[R, S]` of an extension inside one ambient ring.
#[derive(Debug, Clone)]
pub struct ExtensionLattice {
    ring: Arc<FiniteRing>,
    subrings: Vec<Subring>,
    lattice: Lattice,
}

/// Enumerates `[base, top]` by adjoining single elements until nothing new appears.
///
/// `base` must be a subring of `top` sharing its identity; both live in `ring`.
pub fn enumerate_interval(
    ring: Arc<FiniteRing>,
    base: &ElemSet,
    top: &ElemSet,
    limits: Limits,
) -> Result<ExtensionLattice, EnumerationError> {
    if ring.size() > limits.size_cap {
        return Err(EnumerationError::SizeCapExceeded { size: ring.size(), cap: limits.size_cap });
    }
    if !base.is_subset(top) {
        return Err(EnumerationError::BaseNotContained);
    }
    let mut found: Vec<Subring> = vec![Subring { elements: base.clone(), generators: Vec::new() }];
    let mut index: HashMap<ElemSet, usize> = HashMap::new();
    index.insert(base.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let t = found[i].elements.clone();
        let basis = ring.additive_basis(&t);
        for x in top.ones() {
            if t.contains(x) {
                continue;
            }
            let w = ring.adjoin(&t, &basis, x as Elem);
            if index.contains_key(&w) {
                continue;
            }
            if found.len() >= limits.lattice_cap {
                return Err(EnumerationError::LatticeCapExceeded { cap: limits.lattice_cap });
            }
            let mut generators = found[i].generators.clone();
            generators.push(x as Elem);
            index.insert(w.clone(), found.len());
            queue.push_back(found.len());
            found.push(Subring { elements: w, generators });
        }
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| canonical_cmp(&a.elements, &b.elements)));
    let lattice = Lattice::from_order(found.len(), |i, j| found[i].is_subset(&found[j]))?;
    Ok(ExtensionLattice { ring, subrings: found, lattice })
}

impl ExtensionLattice {
    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn subrings(&self) -> &[Subring] {
        &self.subrings
    }

    pub fn subring(&self, i: usize) -> &Subring {
        &self.subrings[i]
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.subrings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subrings.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    /// Index of the subring with exactly these elements.
    pub fn find(&self, set: &ElemSet) -> Option<usize> {
        self.subrings.iter().position(|s| &s.elements == set)
    }

    /// The subring generated by two members.
    pub fn compositum(&self, i: usize, j: usize) -> ElemSet {
        let a = self.ring.additive_basis(&self.subrings[i].elements);
        let b = self.ring.additive_basis(&self.subrings[j].elements);
        self.ring.product_span(&a, &b)
    }

    /// Checks lattice closure under intersection and compositum, agreement with the order's
    /// meet and join, and that every cover is a minimal extension.
    pub fn verify(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                let mut cap = self.subrings[i].elements.clone();
                cap.intersect_with(&self.subrings[j].elements);
                if self.find(&cap) != Some(self.lattice.meet(i, j)) {
                    bad.push(format!("intersection of {i} and {j} is not their meet"));
                }
                if self.find(&self.compositum(i, j)) != Some(self.lattice.join(i, j)) {
                    bad.push(format!("compositum of {i} and {j} is not their join"));
                }
            }
        }
        for &(a, b) in self.lattice.covers() {
            let t = &self.subrings[a].elements;
            let basis = self.ring.additive_basis(t);
            for x in self.subrings[b].elements.ones() {
                if !t.contains(x) && &self.ring.adjoin(t, &basis, x as Elem) != self.subrings[b].elements() {
                    bad.push(format!("cover {a} < {b} has an intermediate ring"));
                    break;
                }
            }
        }
        let len = self.lattice.length();
        let chains = self.lattice.maximal_chains(100_000);
        if let Some(chains) = chains {
            if chains.iter().map(|c| c.len() - 1).max() != Some(len) {
                bad.push("no maximal chain attains the length".into());
            }
        }
        bad
    }
}

/// Both sides of the pinched count identity at an interior element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PinchedCount {
    pub at: usize,
    pub total: usize,
    pub lower: usize,
    pub upper: usize,
    /// `|[R,T]| + |[T,S]| - 1 == |[R,S]|`
    pub count_identity: bool,
    /// Every element comparable to `T`.
    pub pinched: bool,
}

impl PinchedCount {
    pub fn agrees(&self) -> bool {
        self.count_identity == self.pinched
    }
}

pub fn pinched_count_check(l: &Lattice, t: usize) -> Result<PinchedCount, LatticeError> {
    let pinched = l.is_pinched_at(t)?;
    let total = l.len();
    let lower = l.interval_size(l.bottom(), t);
    let upper = l.interval_size(t, l.top());
    Ok(PinchedCount { at: t, total, lower, upper, count_identity: lower + upper - 1 == total, pinched })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::gf;

    #[test]
    fn f2_in_f16_is_a_chain_of_three() {
        let f16 = Arc::new(gf(16, DEFAULT_SIZE_CAP).unwrap());
        let base = f16.span(&[f16.one()]);
        let l = enumerate_interval(f16.clone(), &base, &f16.full_set(), Limits::default()).unwrap();
        assert_eq!(l.subrings().iter().map(Subring::len).collect::<Vec<_>>(), vec![2, 4, 16]);
        assert!(l.lattice().is_chained());
        assert!(l.verify().is_empty());
        let p = pinched_count_check(l.lattice(), 1).unwrap();
        assert!(p.pinched && p.count_identity);
        assert!(pinched_count_check(l.lattice(), 0).is_err());
    }

    #[test]
    fn lattice_cap_is_enforced() {
        let f16 = Arc::new(gf(16, DEFAULT_SIZE_CAP).unwrap());
        let base = f16.span(&[f16.one()]);
        let limits = Limits { size_cap: DEFAULT_SIZE_CAP, lattice_cap: 2 };
        let err = enumerate_interval(f16.clone(), &base, &f16.full_set(), limits).unwrap_err();
        assert_eq!(err, EnumerationError::LatticeCapExceeded { cap: 2 });
    }
}
