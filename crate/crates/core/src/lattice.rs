//! Finite lattices given by their order relation, with the metrics used throughout.

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty order")]
    Empty,
    #[error("order relation is not antisymmetric at {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("cover relation has a cycle through {0}")]
    Cyclic(usize),
    #[error("elements {0} and {1} have no meet")]
    NoMeet(usize, usize),
    #[error("elements {0} and {1} have no join")]
    NoJoin(usize, usize),
    #[error("pinching is only defined strictly between bottom and top")]
    EndpointNotAllowed,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    n: usize,
    /// `up[i]` holds every `j` with `i ≤ j`.
    up: Vec<FixedBitSet>,
    /// `down[i]` holds every `j` with `j ≤ i`.
    down: Vec<FixedBitSet>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
}

fn extreme(sets: &[FixedBitSet], candidates: &FixedBitSet) -> Option<usize> {
    // the candidate whose own set contains all candidates
    let want = candidates.count_ones(..);
    candidates.ones().find(|&m| sets[m].count_ones(..) >= want && candidates.is_subset(&sets[m]))
}

impl Lattice {
    /// Builds a lattice from a reflexive order predicate.
    pub fn from_order(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                if i == j || leq(i, j) {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        for i in 0..n {
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(LatticeError::NotAntisymmetric(i, j));
                }
            }
        }
        Self::finish(n, up, down)
    }

    /// Builds a lattice from its cover pairs `(lower, upper)`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in covers {
            succ[a].push(b);
        }
        // depth-first closure, detecting cycles
        let mut up: Vec<Option<FixedBitSet>> = vec![None; n];
        let mut state = vec![0u8; n];
        fn visit(
            i: usize,
            succ: &[Vec<usize>],
            up: &mut Vec<Option<FixedBitSet>>,
            state: &mut [u8],
            n: usize,
        ) -> Result<(), LatticeError> {
            match state[i] {
                2 => return Ok(()),
                1 => return Err(LatticeError::Cyclic(i)),
                _ => {}
            }
            state[i] = 1;
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(i);
            for &j in &succ[i] {
                visit(j, succ, up, state, n)?;
                set.union_with(up[j].as_ref().unwrap());
            }
            state[i] = 2;
            up[i] = Some(set);
            Ok(())
        }
        for i in 0..n {
            visit(i, &succ, &mut up, &mut state, n)?;
        }
        let up: Vec<FixedBitSet> = up.into_iter().map(Option::unwrap).collect();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, u) in up.iter().enumerate() {
            for j in u.ones() {
                down[j].insert(i);
            }
        }
        Self::finish(n, up, down)
    }

    fn finish(n: usize, up: Vec<FixedBitSet>, down: Vec<FixedBitSet>) -> Result<Self, LatticeError> {
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut lower = down[i].clone();
                lower.intersect_with(&down[j]);
                let m = extreme(&down, &lower).ok_or(LatticeError::NoMeet(i, j))?;
                let mut upper = up[i].clone();
                upper.intersect_with(&up[j]);
                let u = extreme(&up, &upper).ok_or(LatticeError::NoJoin(i, j))?;
                meet[i * n + j] = m;
                meet[j * n + i] = m;
                join[i * n + j] = u;
                join[j * n + i] = u;
            }
        }
        let bottom = (0..n).fold(0, |acc, i| meet[acc * n + i]);
        let top = (0..n).fold(0, |acc, i| join[acc * n + i]);
        let mut covers = Vec::new();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for i in 0..n {
            for j in up[i].ones() {
                if j == i {
                    continue;
                }
                // nothing strictly between
                let mut between = up[i].clone();
                between.intersect_with(&down[j]);
                if between.count_ones(..) == 2 {
                    covers.push((i, j));
                    upper[i].push(j);
                    lower[j].push(i);
                }
            }
        }
        Ok(Lattice { n, up, down, meet, join, bottom, top, covers, upper, lower })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.n + j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.n + j]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_cover(&self, i: usize, j: usize) -> bool {
        self.upper[i].contains(&j)
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    /// Elements of `[a, b]` in index order.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        let mut s = self.up[a].clone();
        s.intersect_with(&self.down[b]);
        s.ones().collect()
    }

    pub fn interval_size(&self, a: usize, b: usize) -> usize {
        let mut s = self.up[a].clone();
        s.intersect_with(&self.down[b]);
        s.count_ones(..)
    }

    /// Length of the longest chain from `a` to `b`, or `None` when `a ≰ b`.
    pub fn height(&self, a: usize, b: usize) -> Option<usize> {
        if !self.leq(a, b) {
            return None;
        }
        let elems = self.interval(a, b);
        // index order is not a linear extension in general, so order by down-set size
        let mut order = elems.clone();
        order.sort_by_key(|&x| self.down[x].count_ones(..));
        let mut best = vec![None::<usize>; self.n];
        best[a] = Some(0);
        for &x in &order {
            if let Some(h) = best[x] {
                for &y in &self.upper[x] {
                    if self.leq(y, b) {
                        best[y] = Some(best[y].map_or(h + 1, |v: usize| v.max(h + 1)));
                    }
                }
            }
        }
        best[b]
    }

    pub fn length(&self) -> usize {
        self.height(self.bottom, self.top).unwrap_or(0)
    }

    /// Number of maximal chains of `[a, b]`.
    pub fn count_chains(&self, a: usize, b: usize) -> u128 {
        let mut order = self.interval(a, b);
        order.sort_by_key(|&x| std::cmp::Reverse(self.down[x].count_ones(..)));
        let mut ways = vec![0u128; self.n];
        ways[b] = 1;
        for &x in &order {
            if x == b {
                continue;
            }
            ways[x] = self.upper[x].iter().filter(|&&y| self.leq(y, b)).map(|&y| ways[y]).sum();
        }
        ways[a]
    }

    /// All maximal chains of the lattice, or `None` when there are more than `limit`.
    pub fn maximal_chains(&self, limit: usize) -> Option<Vec<Vec<usize>>> {
        if self.count_chains(self.bottom, self.top) > limit as u128 {
            return None;
        }
        let mut out = Vec::new();
        let mut path = vec![self.bottom];
        self.walk(&mut path, &mut out);
        Some(out)
    }

    fn walk(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if last == self.top {
            out.push(path.clone());
            return;
        }
        for &y in &self.upper[last] {
            path.push(y);
            self.walk(path, out);
            path.pop();
        }
    }

    pub fn is_chained(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.comparable(i, j)))
    }

    /// Distributivity over all triples; `None` above `cap` elements.
    pub fn is_distributive(&self, cap: usize) -> Option<bool> {
        if self.n > cap {
            return None;
        }
        for a in 0..self.n {
            for b in 0..self.n {
                for c in b + 1..self.n {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Some(false);
                    }
                }
            }
        }
        Some(true)
    }

    pub fn complements(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.meet(i, j) == self.bottom && self.join(i, j) == self.top).collect()
    }

    pub fn is_boolean(&self, cap: usize) -> Option<bool> {
        let d = self.is_distributive(cap)?;
        Some(d && (0..self.n).all(|i| !self.complements(i).is_empty()))
    }

    /// Whether every element is comparable to `t`, for `t` strictly inside.
    pub fn is_pinched_at(&self, t: usize) -> Result<bool, LatticeError> {
        if t == self.bottom || t == self.top {
            return Err(LatticeError::EndpointNotAllowed);
        }
        Ok((0..self.n).all(|x| self.comparable(x, t)))
    }

    pub fn pinch_points(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&t| t != self.bottom && t != self.top)
            .filter(|&t| self.is_pinched_at(t).unwrap_or(false))
            .collect()
    }

    /// The interval `[a, b]` as a lattice, with the list of original indices.
    pub fn sublattice(&self, a: usize, b: usize) -> (Lattice, Vec<usize>) {
        let elems = self.interval(a, b);
        let l = Lattice::from_order(elems.len(), |i, j| self.leq(elems[i], elems[j]))
            .expect("an interval of a lattice is a lattice");
        (l, elems)
    }

    pub fn metrics(&self, chain_limit: usize, distributive_cap: usize) -> LatticeMetrics {
        LatticeMetrics {
            size: self.n,
            length: self.length(),
            maximal_chain_count: self.count_chains(self.bottom, self.top).to_string(),
            maximal_chains: self.maximal_chains(chain_limit),
            chained: self.is_chained(),
            distributive: self.is_distributive(distributive_cap),
            boolean: self.is_boolean(distributive_cap),
            complements: (0..self.n).map(|i| self.complements(i)).collect(),
            pinch_points: self.pinch_points(),
        }
    }
}

/// Size, length, chains, distributivity, complements and pinch points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeMetrics {
    pub size: usize,
    pub length: usize,
    pub maximal_chain_count: String,
    pub maximal_chains: Option<Vec<Vec<usize>>>,
    pub chained: bool,
    /// `None` when the lattice is above the all-triples cap.
    pub distributive: Option<bool>,
    pub boolean: Option<bool>,
    pub complements: Vec<Vec<usize>>,
    pub pinch_points: Vec<usize>,
}

/// Exhaustive check of a map between finite posets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub map: String,
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
    pub order_preserving: bool,
    pub order_reflecting: bool,
    pub witness: Option<String>,
}

impl IsoReport {
    /// `map[x]` is the image of `x`, or `None` when it leaves the codomain.
    pub fn evaluate(
        name: impl Into<String>,
        map: &[Option<usize>],
        codomain_size: usize,
        dom_leq: impl Fn(usize, usize) -> bool,
        cod_leq: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let mut witness = None;
        let mut note = |w: String| {
            if witness.is_none() {
                witness = Some(w);
            }
        };
        let well_defined = match map.iter().position(Option::is_none) {
            Some(x) => {
                note(format!("image of {x} is outside the codomain"));
                false
            }
            None => true,
        };
        let mut hit = vec![None; codomain_size];
        let mut injective = true;
        for (x, y) in map.iter().enumerate() {
            if let Some(y) = *y {
                if let Some(prev) = hit[y] {
                    if injective {
                        note(format!("{prev} and {x} both map to {y}"));
                    }
                    injective = false;
                } else {
                    hit[y] = Some(x);
                }
            }
        }
        let surjective = match hit.iter().position(Option::is_none) {
            Some(y) => {
                note(format!("{y} is not hit"));
                false
            }
            None => true,
        };
        let mut order_preserving = true;
        let mut order_reflecting = true;
        for a in 0..map.len() {
            for b in 0..map.len() {
                let (Some(fa), Some(fb)) = (map[a], map[b]) else { continue };
                let d = dom_leq(a, b);
                let c = cod_leq(fa, fb);
                if d && !c && order_preserving {
                    order_preserving = false;
                    note(format!("{a} <= {b} but images are not ordered"));
                }
                if c && !d && order_reflecting {
                    order_reflecting = false;
                    note(format!("images of {a}, {b} are ordered but {a} </= {b}"));
                }
            }
        }
        IsoReport { map: name.into(), well_defined, injective, surjective, order_preserving, order_reflecting, witness }
    }

    pub fn is_bijection(&self) -> bool {
        self.well_defined && self.injective && self.surjective
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_bijection() && self.order_preserving && self.order_reflecting
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Lattice {
        Lattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn m3() -> Lattice {
        Lattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn diamond_is_boolean() {
        let l = diamond();
        assert_eq!(l.meet(1, 2), 0);
        assert_eq!(l.join(1, 2), 3);
        assert_eq!(l.length(), 2);
        assert_eq!(l.is_boolean(100), Some(true));
        assert_eq!(l.complements(1), vec![2]);
        assert!(l.pinch_points().is_empty());
        assert_eq!(l.maximal_chains(10).unwrap().len(), 2);
    }

    #[test]
    fn m3_is_not_distributive() {
        let l = m3();
        assert_eq!(l.is_distributive(100), Some(false));
        assert_eq!(l.complements(1), vec![2, 3]);
        assert_eq!(l.is_distributive(3), None);
    }

    #[test]
    fn chain_metrics() {
        let l = Lattice::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(l.is_chained());
        assert_eq!(l.pinch_points(), vec![1]);
        assert_eq!(l.is_pinched_at(0), Err(LatticeError::EndpointNotAllowed));
        assert_eq!(l.count_chains(0, 2), 1);
    }

    #[test]
    fn non_lattice_rejected() {
        // two incomparable upper bounds for 0,1 without a least one
        let r = Lattice::from_covers(6, &[(4, 0), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 5), (3, 5)]);
        assert_eq!(r.unwrap_err(), LatticeError::NoJoin(0, 1));
        assert_eq!(Lattice::from_covers(2, &[(0, 1), (1, 0)]).unwrap_err(), LatticeError::Cyclic(0));
    }

    #[test]
    fn iso_report_detects_collision() {
        let r = IsoReport::evaluate("f", &[Some(0), Some(0)], 2, |a, b| a <= b, |a, b| a <= b);
        assert!(!r.injective);
        assert!(!r.surjective);
        assert!(r.witness.is_some());
    }
}
