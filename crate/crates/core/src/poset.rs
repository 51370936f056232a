//! Support posets of finite Prüfer extensions and the size formulas they predict.
//!
//! Nodes stand for the supported primes; the maximal nodes are the supported maximal ideals.
//! The intermediate rings correspond to the antichains, so everything here is counting.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::{self, SpecError};

pub const MAX_NODES: usize = 64;

type Set = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("a support poset needs at least one node")]
    Empty,
    #[error("more than {MAX_NODES} nodes")]
    TooLarge,
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("order has a cycle through {0:?}")]
    Cyclic(String),
    #[error("declared maximal nodes {declared:?} differ from the order-maximal nodes {actual:?}")]
    MaximalMismatch { declared: Vec<String>, actual: Vec<String> },
    #[error("not a tree: {0} and {1} lie below a common node but are incomparable")]
    NotATree(String, String),
}

/// On-disk form: nodes, generating pairs `[lower, upper]`, optional maximal list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    #[serde(default)]
    pub name: String,
    pub nodes: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximal: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPoset {
    name: String,
    names: Vec<String>,
    /// `above[i]` holds every `j ≥ i`, `i` included.
    above: Vec<Set>,
    below: Vec<Set>,
    covers: Vec<(usize, usize)>,
}

fn ones(s: Set) -> impl Iterator<Item = usize> {
    (0..MAX_NODES).filter(move |&i| s >> i & 1 == 1)
}

impl SupportPoset {
    /// Builds the order generated by `pairs` (each `(lower, upper)`).
    pub fn new(name: impl Into<String>, names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = names.len();
        if n == 0 {
            return Err(PosetError::Empty);
        }
        if n > MAX_NODES {
            return Err(PosetError::TooLarge);
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(PosetError::DuplicateNode(a.clone()));
            }
        }
        let mut above: Vec<Set> = (0..n).map(|i| 1 << i).collect();
        for &(a, b) in pairs {
            if a == b {
                return Err(PosetError::Cyclic(names[a].clone()));
            }
            above[a] |= 1 << b;
        }
        // transitive closure
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut s = above[i];
                for j in ones(above[i]) {
                    s |= above[j];
                }
                if s != above[i] {
                    above[i] = s;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in ones(above[i]) {
                if j != i && above[j] >> i & 1 == 1 {
                    return Err(PosetError::Cyclic(names[i].clone()));
                }
            }
        }
        let mut below = vec![0; n];
        for i in 0..n {
            for j in ones(above[i]) {
                below[j] |= 1 << i;
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            for j in ones(above[i] & !(1 << i)) {
                let between = (above[i] & below[j]).count_ones();
                if between == 2 {
                    covers.push((i, j));
                }
            }
        }
        Ok(SupportPoset { name: name.into(), names, above, below, covers })
    }

    pub fn from_spec(spec: &PosetSpec) -> Result<Self, PosetError> {
        let index: HashMap<&str, usize> = spec.nodes.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let find = |s: &String| index.get(s.as_str()).copied().ok_or_else(|| PosetError::UnknownNode(s.clone()));
        let pairs =
            spec.covers.iter().map(|(a, b)| Ok((find(a)?, find(b)?))).collect::<Result<Vec<_>, PosetError>>()?;
        let p = SupportPoset::new(spec.name.clone(), spec.nodes.clone(), &pairs)?;
        if let Some(declared) = &spec.maximal {
            for d in declared {
                find(d)?;
            }
            let mut declared = declared.clone();
            declared.sort();
            let mut actual = p.names_of(&p.maximal());
            actual.sort();
            if declared != actual {
                return Err(PosetError::MaximalMismatch { declared, actual });
            }
        }
        Ok(p)
    }

    /// Parses and validates a spec file, with the line of the offending node on failure.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let spec: PosetSpec = diag::parse(text)?;
        SupportPoset::from_spec(&spec).map_err(|e| match &e {
            PosetError::DuplicateNode(s) | PosetError::UnknownNode(s) | PosetError::Cyclic(s) => {
                SpecError::at_token(text, s, e.to_string())
            }
            PosetError::MaximalMismatch { .. } => SpecError::at_key(text, "maximal", e.to_string()),
            _ => SpecError::at_key(text, "nodes", e.to_string()),
        })
    }

    pub fn to_spec(&self) -> PosetSpec {
        PosetSpec {
            name: self.name.clone(),
            nodes: self.names.clone(),
            covers: self.covers.iter().map(|&(a, b)| (self.names[a].clone(), self.names[b].clone())).collect(),
            maximal: Some(self.names_of(&self.maximal())),
        }
    }

    pub fn chain(len: usize) -> Self {
        let names = (0..len).map(|i| format!("P{i}")).collect();
        let pairs: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        SupportPoset::new(format!("chain-{len}"), names, &pairs).expect("a chain is a poset")
    }

    pub fn antichain(len: usize) -> Self {
        let names = (0..len).map(|i| format!("M{i}")).collect();
        SupportPoset::new(format!("antichain-{len}"), names, &[]).expect("an antichain is a poset")
    }

    /// Disjoint chains with the given node counts.
    pub fn chains(lengths: &[usize]) -> Self {
        let mut names = Vec::new();
        let mut pairs = Vec::new();
        for (c, &len) in lengths.iter().enumerate() {
            for i in 0..len {
                if i > 0 {
                    pairs.push((names.len() - 1, names.len()));
                }
                names.push(format!("C{c}.{i}"));
            }
        }
        SupportPoset::new("chains", names, &pairs).expect("disjoint chains form a poset")
    }

    /// A random forest on `n` nodes, roots at the bottom: node `k` sits above a uniformly
    /// chosen earlier node, or starts a new root.
    pub fn random_tree(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::new();
        for k in 1..n {
            let parent = rng.gen_range(0..=k);
            if parent < k {
                pairs.push((parent, k));
            }
        }
        let names = (0..n).map(|i| format!("p{i}")).collect();
        SupportPoset::new(format!("random-tree-{n}-{seed}"), names, &pairs).expect("forests are posets")
    }

    /// A random disjoint union of chains: node `k` extends a current chain top or starts a chain.
    pub fn random_chains(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tops: Vec<usize> = vec![0];
        let mut pairs = Vec::new();
        for k in 1..n {
            let pick = rng.gen_range(0..=tops.len());
            if pick < tops.len() {
                pairs.push((tops[pick], k));
                tops[pick] = k;
            } else {
                tops.push(k);
            }
        }
        let names = (0..n).map(|i| format!("p{i}")).collect();
        SupportPoset::new(format!("random-chains-{n}-{seed}"), names, &pairs).expect("chains are posets")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn names_of(&self, nodes: &[usize]) -> Vec<String> {
        nodes.iter().map(|&i| self.names[i].clone()).collect()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.above[a] >> b & 1 == 1
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.above[i].count_ones() == 1).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.below[i].count_ones() == 1).collect()
    }

    pub fn up_set(&self, a: usize) -> Vec<usize> {
        ones(self.above[a]).collect()
    }

    pub fn down_set(&self, a: usize) -> Vec<usize> {
        ones(self.below[a]).collect()
    }

    /// Length of the longest chain from `a` up to `b`.
    pub fn height(&self, a: usize, b: usize) -> Option<usize> {
        if !self.leq(a, b) {
            return None;
        }
        if a == b {
            return Some(0);
        }
        self.covers
            .iter()
            .filter(|&&(x, y)| x == a && self.leq(y, b))
            .filter_map(|&(_, y)| self.height(y, b))
            .max()
            .map(|h| h + 1)
    }

    fn is_linear_set(&self, s: Set) -> bool {
        ones(s).all(|i| ones(s).all(|j| self.comparable(i, j)))
    }

    pub fn is_linear(&self) -> bool {
        self.is_linear_set(self.full())
    }

    /// First pair below a common node that is incomparable, if any.
    pub fn tree_violation(&self) -> Option<(usize, usize)> {
        for x in 0..self.len() {
            let d = self.below[x];
            for i in ones(d) {
                for j in ones(d) {
                    if i < j && !self.comparable(i, j) {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    pub fn is_tree(&self) -> bool {
        self.tree_violation().is_none()
    }

    fn require_tree(&self) -> Result<(), PosetError> {
        match self.tree_violation() {
            Some((i, j)) => Err(PosetError::NotATree(self.names[i].clone(), self.names[j].clone())),
            None => Ok(()),
        }
    }

    fn full(&self) -> Set {
        if self.len() == MAX_NODES {
            Set::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    /// Hasse diagram, minimal primes at the bottom.
    pub fn to_dot(&self) -> String {
        let max = self.maximal();
        let notes: Vec<Option<String>> =
            (0..self.len()).map(|i| max.contains(&i).then(|| "maximal".to_string())).collect();
        crate::dot::hasse(&self.name, &self.names, &self.covers, &notes)
    }
}

/// Antichain counts by cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntichainProfile {
    /// `counts[k - 1]` is the number of antichains with `k` elements.
    pub counts: Vec<u128>,
    /// One plus the number of nonempty antichains.
    pub predicted_size: u128,
}

/// Counts antichains by walking only sets of pairwise incomparable nodes.
pub fn antichain_profile(p: &SupportPoset) -> AntichainProfile {
    let n = p.len();
    let incomparable: Vec<Set> = (0..n).map(|i| p.full() & !(p.above[i] | p.below[i])).collect();
    let mut counts = vec![0u128; n];
    // candidates: nodes after the last chosen one that are incomparable to all chosen
    fn walk(candidates: Set, size: usize, inc: &[Set], counts: &mut [u128]) {
        let mut rest = candidates;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            counts[size] += 1;
            walk(rest & inc[i], size + 1, inc, counts);
        }
    }
    walk(p.full(), 0, &incomparable, &mut counts);
    while counts.len() > 1 && counts.last() == Some(&0) {
        counts.pop();
    }
    let predicted_size = 1 + counts.iter().sum::<u128>();
    AntichainProfile { counts, predicted_size }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainedVerdict {
    pub tree: bool,
    pub linear: bool,
    pub single_maximal: bool,
    pub predicted_size: u128,
    /// `1 + |nodes|`
    pub size_formula: u128,
    pub size_matches: bool,
}

impl ChainedVerdict {
    /// Whether linear, single-maximal and the size formula agree; only meaningful on trees.
    pub fn agrees(&self) -> Result<bool, PosetError> {
        if !self.tree {
            return Err(PosetError::NotATree(String::new(), String::new()));
        }
        Ok(self.linear == self.single_maximal && self.linear == self.size_matches)
    }
}

pub fn chained_criterion(p: &SupportPoset) -> ChainedVerdict {
    let predicted_size = antichain_profile(p).predicted_size;
    let size_formula = 1 + p.len() as u128;
    ChainedVerdict {
        tree: p.is_tree(),
        linear: p.is_linear(),
        single_maximal: p.maximal().len() == 1,
        predicted_size,
        size_formula,
        size_matches: predicted_size == size_formula,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocallyMinimalVerdict {
    pub all_maximal: bool,
    pub predicted_size: u128,
    /// `2^|nodes|`
    pub power: u128,
    pub agrees: bool,
}

pub fn locally_minimal_criterion(p: &SupportPoset) -> LocallyMinimalVerdict {
    let predicted_size = antichain_profile(p).predicted_size;
    let all_maximal = p.maximal().len() == p.len();
    let power = 1u128 << p.len();
    LocallyMinimalVerdict { all_maximal, predicted_size, power, agrees: all_maximal == (predicted_size == power) }
}

/// A maximal node with the minimal node beneath it and the height between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalHeight {
    pub maximal: String,
    pub minimal: String,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BPosetVerdict {
    /// Every up-set of a minimal node is a chain.
    pub linear_above_minimal: bool,
    pub predicted_size: u128,
    /// `∏ (2 + ht(M_i/P_i))`
    pub product_formula: u128,
    pub product_matches: bool,
    pub node_count: usize,
    /// `∑ (1 + ht(M_i/P_i))`
    pub sum_formula: usize,
    pub sum_matches: bool,
    pub heights: Vec<MaximalHeight>,
    /// Each minimal node lies below exactly one maximal node.
    pub minimal_to_maximal_unique: bool,
}

impl BPosetVerdict {
    pub fn is_b(&self) -> bool {
        self.linear_above_minimal
    }

    pub fn agrees(&self) -> bool {
        self.linear_above_minimal == self.product_matches
            && self.linear_above_minimal == self.sum_matches
            && (!self.linear_above_minimal || self.minimal_to_maximal_unique)
    }
}

pub fn b_extension_criterion(p: &SupportPoset) -> Result<BPosetVerdict, PosetError> {
    p.require_tree()?;
    let minimal = p.minimal();
    let linear_above_minimal = minimal.iter().all(|&m| p.is_linear_set(p.above[m]));
    // in a tree each down-set is a chain, so each maximal node has one minimal node below it
    let heights: Vec<MaximalHeight> = p
        .maximal()
        .into_iter()
        .map(|m| {
            let bottom = ones(p.below[m]).find(|x| minimal.contains(x)).expect("finite down-sets have minima");
            MaximalHeight {
                maximal: p.names[m].clone(),
                minimal: p.names[bottom].clone(),
                height: p.height(bottom, m).expect("bottom lies below"),
            }
        })
        .collect();
    let predicted_size = antichain_profile(p).predicted_size;
    let product_formula = heights.iter().map(|h| 2 + h.height as u128).product();
    let sum_formula = heights.iter().map(|h| 1 + h.height).sum();
    let max = p.maximal();
    let minimal_to_maximal_unique = minimal.iter().all(|&m| ones(p.above[m]).filter(|x| max.contains(x)).count() == 1);
    Ok(BPosetVerdict {
        linear_above_minimal,
        predicted_size,
        product_formula,
        product_matches: product_formula == predicted_size,
        node_count: p.len(),
        sum_formula,
        sum_matches: sum_formula == p.len(),
        heights,
        minimal_to_maximal_unique,
    })
}

/// Everything the poset analysis reports, for the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosetReport {
    pub name: String,
    pub nodes: Vec<String>,
    pub maximal: Vec<String>,
    pub minimal: Vec<String>,
    pub tree: bool,
    pub profile: AntichainProfile,
    pub chained: ChainedVerdict,
    pub locally_minimal: LocallyMinimalVerdict,
    pub b_extension: Option<BPosetVerdict>,
}

impl PosetReport {
    pub fn new(p: &SupportPoset) -> Self {
        PosetReport {
            name: p.name.clone(),
            nodes: p.names.clone(),
            maximal: p.names_of(&p.maximal()),
            minimal: p.names_of(&p.minimal()),
            tree: p.is_tree(),
            profile: antichain_profile(p),
            chained: chained_criterion(p),
            locally_minimal: locally_minimal_criterion(p),
            b_extension: b_extension_criterion(p).ok(),
        }
    }

    /// Failed equivalences; empty when every criterion agrees with the counting.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.tree && self.chained.agrees() != Ok(true) {
            v.push("linear, single-maximal and 1 + |nodes| disagree".to_string());
        }
        if !self.locally_minimal.agrees {
            v.push("all-maximal and 2^|nodes| disagree".to_string());
        }
        if let Some(b) = &self.b_extension {
            if !b.agrees() {
                v.push("B-criterion, product formula and sum formula disagree".to_string());
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vee() -> SupportPoset {
        SupportPoset::parse(r#"{"name":"vee","nodes":["Q","M1","M2"],"covers":[["Q","M1"],["Q","M2"]]}"#).unwrap()
    }

    #[test]
    fn vee_counts() {
        let p = vee();
        assert_eq!(antichain_profile(&p).counts, vec![3, 1]);
        let b = b_extension_criterion(&p).unwrap();
        assert!(!b.is_b() && b.agrees());
        assert_eq!((b.product_formula, b.sum_formula, b.predicted_size), (9, 4, 5));
    }

    #[test]
    fn heights_follow_longest_chains() {
        let p = SupportPoset::new("x", vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.height(0, 2), Some(2));
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn non_trees_are_rejected() {
        let p = SupportPoset::new("w", vec!["a".into(), "b".into(), "c".into()], &[(0, 2), (1, 2)]).unwrap();
        assert!(matches!(b_extension_criterion(&p), Err(PosetError::NotATree(..))));
    }

    #[test]
    fn spec_errors_point_at_the_node() {
        let text = "{\n \"nodes\": [\"a\"],\n \"covers\": [[\"a\",\n \"zz\"]]\n}";
        assert_eq!(SupportPoset::parse(text).unwrap_err().line(), Some(4));
        let text = "{\"nodes\": [\"a\", \"b\"], \"covers\": [[\"a\",\"b\"]], \"maximal\": [\"a\"]}";
        assert!(SupportPoset::parse(text).is_err());
    }
}
