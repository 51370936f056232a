//! Finite commutative unital rings given by an additive presentation and structure constants.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::snf::{smith, Matrix};

/// Index of an element. Indices follow the lexicographic order of coordinates.
pub type Elem = u32;

/// A subset of a ring's elements, indexed by [`Elem`].
pub type ElemSet = FixedBitSet;

pub const DEFAULT_SIZE_CAP: usize = 4096;
const TABLE_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("additive invariants must exceed 1 and divide each other in order, got {0:?}")]
    BadInvariants(Vec<u64>),
    #[error("structure table malformed: {0}")]
    BadTable(String),
    #[error("product g{i}*g{j} is not annihilated by the additive order of g{i}")]
    IllDefined { i: usize, j: usize },
    #[error("multiplication is not commutative: g{i}*g{j} != g{j}*g{i}")]
    NonCommutative { i: usize, j: usize },
    #[error("multiplication is not associative: (g{i}*g{j})*g{k} != g{i}*(g{j}*g{k})")]
    NonAssociative { i: usize, j: usize, k: usize },
    #[error("unit coordinates do not act as identity on g{i}")]
    NoUnit { i: usize },
    #[error("ring size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: u128, cap: usize },
    #[error("presentation defines an infinite additive group")]
    InfiniteGroup,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus must be monic of degree at least 1")]
    NotMonic,
    #[error("element notation: {0}")]
    Notation(String),
    #[error("element is not in the ring it was looked up in")]
    NotAMember,
}

/// Coordinates of an element with respect to a raw generating set, before normalization.
#[derive(Debug, Clone)]
pub(crate) struct Presentation {
    /// Columns are relations among the raw generators.
    pub relations: Matrix,
    /// `products[i][j]` is the raw coordinate vector of `h_i * h_j`.
    pub products: Vec<Vec<Vec<i128>>>,
    pub unit: Vec<i128>,
}

impl Presentation {
    pub fn diagonal(orders: &[u64], products: Vec<Vec<Vec<i128>>>, unit: Vec<i128>) -> Self {
        let m = orders.len();
        let relations = (0..m).map(|i| (0..m).map(|j| if i == j { orders[i] as i128 } else { 0 }).collect()).collect();
        Presentation { relations, products, unit }
    }

    fn rank(&self) -> usize {
        self.unit.len()
    }
}

#[derive(Debug, Clone)]
struct RawMap {
    /// Rows of the transform taking raw coordinates to canonical ones.
    rows: Vec<Vec<i128>>,
    /// Canonical generator `t` written in raw coordinates.
    columns: Vec<Vec<i128>>,
}

#[derive(Clone)]
pub struct FiniteRing {
    name: String,
    invariants: Vec<u64>,
    structure: Vec<Vec<u64>>,
    unit: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
    one: Elem,
    add_table: Option<Vec<Elem>>,
    mul_table: Option<Vec<Elem>>,
    raw: Option<RawMap>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("name", &self.name)
            .field("invariants", &self.invariants)
            .field("unit", &self.unit)
            .finish_non_exhaustive()
    }
}

fn reduce(v: i128, d: u64) -> u64 {
    v.rem_euclid(d as i128) as u64
}

impl FiniteRing {
    /// Validates a ring given in invariant-factor form.
    ///
    /// `structure[i * k + j]` holds the coordinates of `g_i * g_j`.
    pub fn new(
        name: impl Into<String>,
        invariants: Vec<u64>,
        structure: Vec<Vec<u64>>,
        unit: Vec<u64>,
        cap: usize,
    ) -> Result<Self, RingError> {
        let k = invariants.len();
        if invariants.iter().any(|&d| d < 2) || invariants.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(RingError::BadInvariants(invariants));
        }
        let size = invariants.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128)).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(RingError::SizeCapExceeded { size, cap });
        }
        if structure.len() != k * k {
            return Err(RingError::BadTable(format!("expected {} products, found {}", k * k, structure.len())));
        }
        if let Some(bad) = structure.iter().chain(std::iter::once(&unit)).find(|v| v.len() != k) {
            return Err(RingError::BadTable(format!("coordinate vector of length {} in a rank {k} ring", bad.len())));
        }
        let structure: Vec<Vec<u64>> =
            structure.into_iter().map(|v| v.iter().zip(&invariants).map(|(&c, &d)| c % d).collect()).collect();
        let unit: Vec<u64> = unit.iter().zip(&invariants).map(|(&c, &d)| c % d).collect();
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * invariants[i + 1] as usize;
        }
        let mut ring = FiniteRing {
            name: name.into(),
            invariants,
            structure,
            unit,
            strides,
            size: size as usize,
            one: 0,
            add_table: None,
            mul_table: None,
            raw: None,
        };
        ring.check_axioms()?;
        ring.one = ring.encode(&ring.unit.clone());
        if ring.size <= TABLE_LIMIT {
            let n = ring.size;
            let mut add = Vec::with_capacity(n * n);
            let mut mul = Vec::with_capacity(n * n);
            for a in 0..n as Elem {
                for b in 0..n as Elem {
                    add.push(ring.add_slow(a, b));
                    mul.push(ring.mul_slow(a, b));
                }
            }
            ring.add_table = Some(add);
            ring.mul_table = Some(mul);
        }
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<(), RingError> {
        let k = self.rank();
        let gen = |i: usize| -> Vec<u64> { (0..k).map(|t| u64::from(t == i)).collect() };
        for i in 0..k {
            for j in 0..k {
                let p = &self.structure[i * k + j];
                let di = self.invariants[i];
                if p.iter().zip(&self.invariants).any(|(&c, &d)| !(c as u128 * di as u128).is_multiple_of(d as u128)) {
                    return Err(RingError::IllDefined { i, j });
                }
                if self.structure[i * k + j] != self.structure[j * k + i] {
                    return Err(RingError::NonCommutative { i, j });
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let ij = self.mul_coords(&gen(i), &gen(j));
                for l in 0..k {
                    let left = self.mul_coords(&ij, &gen(l));
                    let jl = self.mul_coords(&gen(j), &gen(l));
                    let right = self.mul_coords(&gen(i), &jl);
                    if left != right {
                        return Err(RingError::NonAssociative { i, j, k: l });
                    }
                }
            }
        }
        for i in 0..k {
            if self.mul_coords(&self.unit, &gen(i)) != gen(i) {
                return Err(RingError::NoUnit { i });
            }
        }
        Ok(())
    }

    pub(crate) fn from_presentation(name: impl Into<String>, p: &Presentation, cap: usize) -> Result<Self, RingError> {
        let m = p.rank();
        let s = smith(p.relations.clone(), m);
        if s.diagonal.contains(&0) {
            return Err(RingError::InfiniteGroup);
        }
        let kept: Vec<usize> = (0..m).filter(|&i| s.diagonal[i] != 1).collect();
        let invariants: Vec<u64> = kept.iter().map(|&i| s.diagonal[i] as u64).collect();
        let size = invariants.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128)).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(RingError::SizeCapExceeded { size, cap });
        }
        let raw = RawMap {
            rows: kept.iter().map(|&i| s.u[i].clone()).collect(),
            columns: kept.iter().map(|&t| (0..m).map(|i| s.u_inv[i][t]).collect()).collect(),
        };
        let to_canon = |x: &[i128]| -> Vec<u64> {
            raw.rows
                .iter()
                .zip(&invariants)
                .map(|(row, &d)| {
                    let v = row.iter().zip(x).fold(0i128, |acc, (a, b)| (acc + a * b).rem_euclid(d as i128));
                    reduce(v, d)
                })
                .collect()
        };
        let raw_product = |a: &[i128], b: &[i128]| -> Vec<i128> {
            let mut out = vec![0i128; m];
            for i in 0..m {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..m {
                    if b[j] == 0 {
                        continue;
                    }
                    for (o, v) in out.iter_mut().zip(&p.products[i][j]) {
                        *o += a[i] * b[j] * v;
                    }
                }
            }
            out
        };
        let k = kept.len();
        let mut structure = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                structure.push(to_canon(&raw_product(&raw.columns[a], &raw.columns[b])));
            }
        }
        let unit = to_canon(&p.unit);
        let mut ring = FiniteRing::new(name, invariants, structure, unit, cap)?;
        ring.raw = Some(raw);
        Ok(ring)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    /// Products of generators, row-major: entry `i * k + j` is `g_i * g_j`.
    pub fn structure_constants(&self) -> &[Vec<u64>] {
        &self.structure
    }

    pub fn unit_coords(&self) -> &[u64] {
        &self.unit
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn full_set(&self) -> ElemSet {
        let mut s = ElemSet::with_capacity(self.size);
        s.insert_range(..);
        s
    }

    pub fn empty_set(&self) -> ElemSet {
        ElemSet::with_capacity(self.size)
    }

    pub fn coords(&self, x: Elem) -> Vec<u64> {
        let mut x = x as usize;
        self.strides
            .iter()
            .zip(&self.invariants)
            .map(|(&s, &d)| {
                let c = (x / s) as u64 % d;
                x %= s;
                c
            })
            .collect()
    }

    /// Encodes coordinates, reducing each modulo its invariant.
    pub fn encode(&self, coords: &[u64]) -> Elem {
        coords.iter().zip(&self.invariants).zip(&self.strides).map(|((&c, &d), &s)| (c % d) as usize * s).sum::<usize>()
            as Elem
    }

    pub fn encode_signed(&self, coords: &[i128]) -> Elem {
        let c: Vec<u64> = coords.iter().zip(&self.invariants).map(|(&c, &d)| reduce(c, d)).collect();
        self.encode(&c)
    }

    pub fn generator(&self, i: usize) -> Elem {
        self.strides[i] as Elem
    }

    pub fn generators(&self) -> Vec<Elem> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    /// Maps coordinates in the presentation the ring was built from to an element.
    pub(crate) fn reduce_raw(&self, raw: &[i128]) -> Elem {
        match &self.raw {
            None => self.encode_signed(raw),
            Some(map) => {
                let c: Vec<i128> = map
                    .rows
                    .iter()
                    .zip(&self.invariants)
                    .map(|(row, &d)| row.iter().zip(raw).fold(0i128, |acc, (a, b)| (acc + a * b).rem_euclid(d as i128)))
                    .collect();
                self.encode_signed(&c)
            }
        }
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let ca = self.coords(a);
        let cb = self.coords(b);
        let c: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
        self.encode(&c)
    }

    fn mul_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.rank();
        let mut acc = vec![0u128; k];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                if b[j] == 0 {
                    continue;
                }
                let f = a[i] as u128 * b[j] as u128;
                for (l, &v) in self.structure[i * k + j].iter().enumerate() {
                    acc[l] = (acc[l] + f * v as u128) % self.invariants[l] as u128;
                }
            }
        }
        acc.into_iter().map(|v| v as u64).collect()
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        self.encode(&self.mul_coords(&self.coords(a), &self.coords(b)))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => t[a as usize * self.size + b as usize],
            None => self.add_slow(a, b),
        }
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul_table {
            Some(t) => t[a as usize * self.size + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let c: Vec<u64> = self.coords(a).iter().zip(&self.invariants).map(|(&x, &d)| (d - x) % d).collect();
        self.encode(&c)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `n · x` for an integer `n`.
    pub fn scale(&self, n: i128, x: Elem) -> Elem {
        let c: Vec<i128> = self.coords(x).iter().map(|&v| v as i128 * n).collect();
        self.encode_signed(&c)
    }

    pub fn pow(&self, x: Elem, mut e: usize) -> Elem {
        let mut base = x;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_nilpotent(&self, x: Elem) -> bool {
        self.pow(x, self.size) == 0
    }

    pub fn is_idempotent(&self, x: Elem) -> bool {
        self.mul(x, x) == x
    }

    /// Smallest positive `n` with `n · x = 0`.
    pub fn additive_order(&self, x: Elem) -> u64 {
        let mut n = 1;
        let mut y = x;
        while y != 0 {
            y = self.add(y, x);
            n += 1;
        }
        n
    }

    /// Multiplies every element of `set` by `e`.
    pub fn image(&self, e: Elem, set: &ElemSet) -> ElemSet {
        let mut out = self.empty_set();
        for x in set.ones() {
            out.insert(self.mul(e, x as Elem) as usize);
        }
        out
    }

    /// The subgroup generated by `gens`.
    pub fn span(&self, gens: &[Elem]) -> ElemSet {
        let mut s = Span::zero(self);
        for &g in gens {
            s.add(self, g);
        }
        s.set
    }

    /// A small additive generating set of a subgroup, chosen greedily in canonical order.
    pub fn additive_basis(&self, group: &ElemSet) -> Vec<Elem> {
        let mut s = Span::zero(self);
        for x in group.ones() {
            s.add(self, x as Elem);
            if s.members.len() == group.count_ones(..) {
                break;
            }
        }
        s.basis
    }

    /// The subring generated by `ring` (a subring with additive basis `basis`) and `x`.
    pub fn adjoin(&self, ring: &ElemSet, basis: &[Elem], x: Elem) -> ElemSet {
        let mut s = Span::from_group(ring);
        let mut p = x;
        loop {
            let mut grew = false;
            for &b in basis {
                grew |= s.add(self, self.mul(b, p));
            }
            if !grew {
                return s.set;
            }
            p = self.mul(p, x);
        }
    }

    /// The additive span of all products `a * b`; for subrings this is the compositum,
    /// for ideals the product ideal.
    pub fn product_span(&self, left: &[Elem], right: &[Elem]) -> ElemSet {
        let mut s = Span::zero(self);
        for &a in left {
            for &b in right {
                s.add(self, self.mul(a, b));
            }
        }
        s.set
    }

    /// The subring generated by `1` and `gens`.
    pub fn subring_generated(&self, gens: &[Elem]) -> ElemSet {
        let mut t = self.span(&[self.one]);
        for &g in gens {
            let basis = self.additive_basis(&t);
            t = self.adjoin(&t, &basis, g);
        }
        t
    }

    /// All of `set` closed under addition?
    pub fn is_subgroup(&self, set: &ElemSet) -> bool {
        if !set.contains(0) {
            return false;
        }
        let basis = self.additive_basis(set);
        set.ones().all(|x| basis.iter().all(|&b| set.contains(self.add(x as Elem, b) as usize)))
    }

    pub fn is_subring(&self, set: &ElemSet) -> bool {
        if !self.is_subgroup(set) || !set.contains(self.one as usize) {
            return false;
        }
        let basis = self.additive_basis(set);
        basis.iter().all(|&a| basis.iter().all(|&b| set.contains(self.mul(a, b) as usize)))
    }

    /// The quotient by an ideal, with the projection as a lookup table.
    pub fn quotient(&self, ideal: &ElemSet, cap: usize) -> Result<(FiniteRing, Vec<Elem>), RingError> {
        let k = self.rank();
        let gens = self.additive_basis(ideal);
        let mut relations: Matrix = vec![Vec::with_capacity(k + gens.len()); k];
        for (i, row) in relations.iter_mut().enumerate() {
            for j in 0..k {
                row.push(if i == j { self.invariants[i] as i128 } else { 0 });
            }
        }
        for &g in &gens {
            for (row, c) in relations.iter_mut().zip(self.coords(g)) {
                row.push(c as i128);
            }
        }
        let products = (0..k)
            .map(|i| (0..k).map(|j| self.structure[i * k + j].iter().map(|&c| c as i128).collect()).collect())
            .collect();
        let unit = self.unit.iter().map(|&c| c as i128).collect();
        let p = Presentation { relations, products, unit };
        let q = FiniteRing::from_presentation(format!("{}/I", self.name), &p, cap)?;
        let proj = self
            .elements()
            .map(|x| {
                let c: Vec<i128> = self.coords(x).iter().map(|&v| v as i128).collect();
                q.reduce_raw(&c)
            })
            .collect();
        Ok((q, proj))
    }

    /// A subring as a ring in its own right, with the inclusion map.
    pub fn subalgebra(&self, set: &ElemSet, name: impl Into<String>, cap: usize) -> Result<Subalgebra, RingError> {
        let mut span = Span::zero(self);
        let mut relations_cols: Vec<Vec<i128>> = Vec::new();
        let mut coeffs: std::collections::HashMap<Elem, Vec<i128>> = std::collections::HashMap::new();
        coeffs.insert(0, Vec::new());
        for x in set.ones() {
            let x = x as Elem;
            if span.set.contains(x as usize) {
                continue;
            }
            // smallest t with t·x in the current span
            let j = span.basis.len();
            let mut t = 1i128;
            let mut y = x;
            while !span.set.contains(y as usize) {
                y = self.add(y, x);
                t += 1;
            }
            let mut rel = coeffs[&y].clone();
            rel.resize(j, 0);
            let mut col: Vec<i128> = rel.iter().map(|c| -c).collect();
            col.push(t);
            relations_cols.push(col);
            let old: Vec<Elem> = span.members.clone();
            let mut shift = x;
            for mult in 1..t {
                for &m in &old {
                    let z = self.add(m, shift);
                    let mut c = coeffs[&m].clone();
                    c.resize(j + 1, 0);
                    c[j] = mult;
                    coeffs.insert(z, c);
                }
                shift = self.add(shift, x);
            }
            span.add(self, x);
        }
        let basis = span.basis.clone();
        let m = basis.len();
        let relations: Matrix =
            (0..m).map(|i| relations_cols.iter().map(|col| col.get(i).copied().unwrap_or(0)).collect()).collect();
        let pad = |v: &Vec<i128>| -> Vec<i128> {
            let mut v = v.clone();
            v.resize(m, 0);
            v
        };
        let products = (0..m).map(|i| (0..m).map(|j| pad(&coeffs[&self.mul(basis[i], basis[j])])).collect()).collect();
        let unit = pad(coeffs.get(&self.one).ok_or(RingError::NotAMember)?);
        let p = Presentation { relations, products, unit };
        let ring = FiniteRing::from_presentation(name, &p, cap)?;
        let mut inclusion = vec![0; ring.size()];
        for (&amb, c) in &coeffs {
            inclusion[ring.reduce_raw(&pad(c)) as usize] = amb;
        }
        Ok(Subalgebra { ring, inclusion, coeffs })
    }
}

/// A subring presented as a standalone ring.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    pub ring: FiniteRing,
    /// `inclusion[x]` is the ambient element for the subring element `x`.
    pub inclusion: Vec<Elem>,
    coeffs: std::collections::HashMap<Elem, Vec<i128>>,
}

impl Subalgebra {
    /// The subring element corresponding to an ambient element.
    pub fn restrict(&self, ambient: Elem) -> Option<Elem> {
        let m = self.coeffs.values().map(Vec::len).max().unwrap_or(0);
        self.coeffs.get(&ambient).map(|c| {
            let mut c = c.clone();
            c.resize(m, 0);
            self.ring.reduce_raw(&c)
        })
    }
}

/// An additive subgroup grown one generator at a time.
pub(crate) struct Span {
    pub set: ElemSet,
    pub members: Vec<Elem>,
    pub basis: Vec<Elem>,
}

impl Span {
    pub fn zero(ring: &FiniteRing) -> Self {
        let mut set = ring.empty_set();
        set.insert(0);
        Span { set, members: vec![0], basis: Vec::new() }
    }

    pub fn from_group(group: &ElemSet) -> Self {
        Span { set: group.clone(), members: group.ones().map(|x| x as Elem).collect(), basis: Vec::new() }
    }

    /// Adds `x` to the span; returns whether the span grew.
    pub fn add(&mut self, ring: &FiniteRing, x: Elem) -> bool {
        if self.set.contains(x as usize) {
            return false;
        }
        self.basis.push(x);
        let old = self.members.len();
        let mut shift = x;
        while !self.set.contains(shift as usize) {
            for i in 0..old {
                let z = ring.add(self.members[i], shift);
                self.set.insert(z as usize);
                self.members.push(z);
            }
            shift = ring.add(shift, x);
        }
        true
    }
}

/// Compares two sets by their sorted element lists.
pub fn canonical_cmp(a: &ElemSet, b: &ElemSet) -> Ordering {
    a.ones().cmp(b.ones())
}

/// Sorted element list of a set.
pub fn members(set: &ElemSet) -> Vec<Elem> {
    set.ones().map(|x| x as Elem).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> FiniteRing {
        FiniteRing::new("Z/4", vec![4], vec![vec![1]], vec![1], DEFAULT_SIZE_CAP).unwrap()
    }

    #[test]
    fn residue_ring_arithmetic() {
        let r = z4();
        assert_eq!(r.size(), 4);
        assert_eq!(r.one(), 1);
        assert_eq!(r.mul(2, 3), 2);
        assert_eq!(r.add(3, 3), 2);
        assert!(r.is_nilpotent(2));
        assert!(!r.is_nilpotent(3));
        assert_eq!(r.additive_order(2), 2);
    }

    #[test]
    fn associativity_violation_names_witness() {
        // g0*g0 = g1, g0*g1 = 0, g1*g1 = g1, unit g0+g1 is broken anyway
        let err = FiniteRing::new(
            "bad",
            vec![2, 2],
            vec![vec![0, 1], vec![0, 0], vec![0, 0], vec![0, 1]],
            vec![1, 1],
            DEFAULT_SIZE_CAP,
        )
        .unwrap_err();
        assert!(matches!(err, RingError::NonAssociative { .. }), "{err:?}");
    }

    #[test]
    fn commutativity_violation() {
        let err = FiniteRing::new(
            "bad",
            vec![2, 2],
            vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 1]],
            vec![1, 0],
            DEFAULT_SIZE_CAP,
        )
        .unwrap_err();
        assert_eq!(err, RingError::NonCommutative { i: 0, j: 1 });
    }

    #[test]
    fn missing_unit() {
        let err = FiniteRing::new("bad", vec![2], vec![vec![0]], vec![1], DEFAULT_SIZE_CAP).unwrap_err();
        assert_eq!(err, RingError::NoUnit { i: 0 });
    }

    #[test]
    fn size_cap() {
        let err = FiniteRing::new("big", vec![8], vec![vec![1]], vec![1], 4).unwrap_err();
        assert_eq!(err, RingError::SizeCapExceeded { size: 8, cap: 4 });
    }

    #[test]
    fn bad_invariants() {
        assert!(matches!(
            FiniteRing::new("x", vec![2, 3], vec![vec![1, 0]; 4], vec![1, 0], 100),
            Err(RingError::BadInvariants(_))
        ));
    }

    #[test]
    fn quotient_of_z4_by_two() {
        let r = z4();
        let ideal = r.span(&[2]);
        let (q, proj) = r.quotient(&ideal, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(q.invariants(), &[2]);
        assert_eq!(proj, vec![0, 1, 0, 1]);
    }

    #[test]
    fn span_and_basis() {
        let r = z4();
        assert_eq!(members(&r.span(&[2])), vec![0, 2]);
        assert_eq!(r.additive_basis(&r.full_set()), vec![1]);
    }
}
