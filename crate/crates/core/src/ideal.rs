//! Ideals, idempotent decompositions, localization, conductors and large quotient rings.
//!
//! Every subring is handled as a subset of one ambient ring, so the same arithmetic serves
//! the base ring, the top ring and everything in between.

use std::fmt;

use thiserror::Error;

use crate::ring::{canonical_cmp, members, Elem, ElemSet, FiniteRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("ideal is not maximal in the given ring")]
    NotMaximal,
    #[error("set is not multiplicatively closed: {a:?} * {b:?} falls outside")]
    NotMultiplicativelyClosed { a: Vec<u64>, b: Vec<u64> },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Ideal {
    generators: Vec<Elem>,
    elements: ElemSet,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal")
            .field("generators", &self.generators)
            .field("elements", &members(&self.elements))
            .finish()
    }
}

impl Ideal {
    /// Wraps a set already known to be an ideal; generators are an additive basis.
    pub fn from_set(ring: &FiniteRing, elements: ElemSet) -> Self {
        let generators = ring.additive_basis(&elements);
        Ideal { generators, elements }
    }

    /// The ideal of the subring with additive basis `ring_basis` generated by `gens`.
    pub fn generated(ring: &FiniteRing, ring_basis: &[Elem], gens: &[Elem]) -> Self {
        let elements = ring.product_span(gens, ring_basis);
        Ideal { generators: gens.to_vec(), elements }
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn elements(&self) -> &ElemSet {
        &self.elements
    }

    pub fn members(&self) -> Vec<Elem> {
        members(&self.elements)
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.contains(x as usize)
    }

    pub fn len(&self) -> usize {
        self.elements.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.elements.is_subset(other)
    }

    /// `I^n` inside the subring with additive basis `ring_basis`.
    pub fn power(&self, ring: &FiniteRing, n: u32) -> ElemSet {
        let basis = ring.additive_basis(&self.elements);
        let mut acc = self.elements.clone();
        for _ in 1..n {
            let acc_basis = ring.additive_basis(&acc);
            acc = ring.product_span(&acc_basis, &basis);
        }
        acc
    }
}

/// A maximal ideal together with the primitive idempotent of its local factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalIdeal {
    pub ideal: Ideal,
    pub idempotent: Elem,
    /// Size of the residue field.
    pub residue_size: usize,
}

/// The splitting of a finite ring into local factors.
#[derive(Debug, Clone)]
pub struct IdempotentDecomposition {
    elements: ElemSet,
    basis: Vec<Elem>,
    identity: Elem,
    primitive: Vec<Elem>,
    maximal: Vec<MaximalIdeal>,
}

impl IdempotentDecomposition {
    /// Decomposes the subring `t` of `ring`. The subring's identity need not be the ambient 1.
    pub fn new(ring: &FiniteRing, t: &ElemSet) -> Self {
        let idempotents: Vec<Elem> = t.ones().map(|x| x as Elem).filter(|&x| x != 0 && ring.is_idempotent(x)).collect();
        let primitive: Vec<Elem> = idempotents
            .iter()
            .copied()
            .filter(|&e| !idempotents.iter().any(|&f| f != e && ring.mul(f, e) == f))
            .collect();
        let identity = primitive.iter().fold(0, |acc, &e| ring.add(acc, e));
        let size = t.count_ones(..);
        let mut maximal: Vec<MaximalIdeal> = primitive
            .iter()
            .map(|&e| {
                let mut m = ring.empty_set();
                for x in t.ones() {
                    if ring.is_nilpotent(ring.mul(x as Elem, e)) {
                        m.insert(x);
                    }
                }
                let residue_size = size / m.count_ones(..);
                MaximalIdeal { ideal: Ideal::from_set(ring, m), idempotent: e, residue_size }
            })
            .collect();
        maximal.sort_by(|a, b| canonical_cmp(&a.ideal.elements, &b.ideal.elements));
        let primitive = maximal.iter().map(|m| m.idempotent).collect();
        IdempotentDecomposition { elements: t.clone(), basis: ring.additive_basis(t), identity, primitive, maximal }
    }

    pub fn elements(&self) -> &ElemSet {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.count_ones(..)
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    /// Primitive idempotents, in the order of [`Self::maximal_ideals`].
    pub fn primitive_idempotents(&self) -> &[Elem] {
        &self.primitive
    }

    /// The maximal spectrum, canonically ordered.
    pub fn maximal_ideals(&self) -> &[MaximalIdeal] {
        &self.maximal
    }

    pub fn is_local(&self) -> bool {
        self.maximal.len() == 1
    }

    pub fn is_field(&self) -> bool {
        self.is_local() && self.maximal[0].ideal.len() == 1
    }

    pub fn index_of(&self, ideal: &ElemSet) -> Result<usize, IdealError> {
        self.maximal.iter().position(|m| m.ideal.elements() == ideal).ok_or(IdealError::NotMaximal)
    }

    /// Indices of the maximal ideals containing `ideal`.
    pub fn v(&self, ideal: &ElemSet) -> Vec<usize> {
        (0..self.maximal.len()).filter(|&i| ideal.is_subset(self.maximal[i].ideal.elements())).collect()
    }

    /// Indices of the maximal ideals not containing `ideal`.
    pub fn d(&self, ideal: &ElemSet) -> Vec<usize> {
        (0..self.maximal.len()).filter(|&i| !ideal.is_subset(self.maximal[i].ideal.elements())).collect()
    }

    /// `E_M = e_M · E` for any set `E` closed under multiplication by this ring.
    pub fn localize(&self, ring: &FiniteRing, m: usize, set: &ElemSet) -> ElemSet {
        ring.image(self.maximal[m].idempotent, set)
    }

    /// The natural map `E → E_M`.
    pub fn localization_map(&self, ring: &FiniteRing, m: usize, x: Elem) -> Elem {
        ring.mul(self.maximal[m].idempotent, x)
    }

    /// Whether `T_M = U_M` for `T ⊆ U`.
    pub fn same_localization(&self, ring: &FiniteRing, m: usize, t: &ElemSet, u: &ElemSet) -> bool {
        self.localize(ring, m, t) == self.localize(ring, m, u)
    }

    /// Maximal ideals `M` of this ring with `T_M ≠ U_M`.
    pub fn support(&self, ring: &FiniteRing, t: &ElemSet, u: &ElemSet) -> Vec<usize> {
        (0..self.maximal.len()).filter(|&m| !self.same_localization(ring, m, t, u)).collect()
    }
}

/// `(T:U) = { x ∈ U : xU ⊆ T }`.
pub fn conductor(ring: &FiniteRing, t: &ElemSet, u: &ElemSet) -> Ideal {
    let basis = ring.additive_basis(u);
    let mut c = ring.empty_set();
    for x in t.ones() {
        if basis.iter().all(|&b| t.contains(ring.mul(x as Elem, b) as usize)) {
            c.insert(x);
        }
    }
    Ideal::from_set(ring, c)
}

/// Descriptions of a multiplicative subset of a base ring.
#[derive(Debug, Clone)]
pub enum MultiplicativeSet {
    Explicit(Vec<Elem>),
    /// `R ∖ (M_1 ∪ … ∪ M_k)`, by indices into the base ring's maximal ideals.
    Avoiding(Vec<usize>),
    /// `1 + I`.
    OnePlus(Ideal),
}

impl MultiplicativeSet {
    /// Lists the elements and checks closure under products.
    pub fn resolve(&self, ring: &FiniteRing, base: &IdempotentDecomposition) -> Result<Vec<Elem>, IdealError> {
        let elems: Vec<Elem> = match self {
            MultiplicativeSet::Explicit(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
            MultiplicativeSet::Avoiding(ms) => base
                .elements()
                .ones()
                .map(|x| x as Elem)
                .filter(|&x| ms.iter().all(|&m| !base.maximal_ideals()[m].ideal.contains(x)))
                .collect(),
            MultiplicativeSet::OnePlus(i) => {
                let mut v: Vec<Elem> = i.members().iter().map(|&x| ring.add(ring.one(), x)).collect();
                v.sort_unstable();
                v
            }
        };
        let mut set = ring.empty_set();
        for &x in &elems {
            set.insert(x as usize);
        }
        for &a in &elems {
            for &b in &elems {
                if !set.contains(ring.mul(a, b) as usize) {
                    return Err(IdealError::NotMultiplicativelyClosed { a: ring.coords(a), b: ring.coords(b) });
                }
            }
        }
        Ok(elems)
    }
}

/// `R_[Σ] = { x ∈ S : sx ∈ R for some s ∈ Σ }`.
pub fn large_quotient_ring(ring: &FiniteRing, r: &ElemSet, s: &ElemSet, sigma: &[Elem]) -> ElemSet {
    let mut out = ring.empty_set();
    for x in s.ones() {
        if sigma.iter().any(|&t| r.contains(ring.mul(t, x as Elem) as usize)) {
            out.insert(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::{gf, poly_quot, zmod};
    use crate::ring::DEFAULT_SIZE_CAP;

    #[test]
    fn field_has_zero_ideal_as_only_maximal() {
        let f = gf(4, DEFAULT_SIZE_CAP).unwrap();
        let d = IdempotentDecomposition::new(&f, &f.full_set());
        assert_eq!(d.maximal_ideals().len(), 1);
        assert_eq!(d.maximal_ideals()[0].ideal.members(), vec![0]);
        assert_eq!(d.maximal_ideals()[0].residue_size, 4);
        assert!(d.is_field());
    }

    #[test]
    fn dual_numbers_are_local() {
        let f2 = zmod(2, 16).unwrap();
        let r = poly_quot(&f2, &[0, 0, 1], 16).unwrap();
        let d = IdempotentDecomposition::new(&r, &r.full_set());
        assert_eq!(d.primitive_idempotents(), &[r.one()]);
        assert_eq!(d.maximal_ideals()[0].ideal.len(), 2);
    }

    #[test]
    fn conductor_of_whole_ring_is_whole_ring() {
        let r = zmod(6, 16).unwrap();
        let all = r.full_set();
        assert_eq!(conductor(&r, &all, &all).len(), 6);
    }

    #[test]
    fn sigma_with_zero_gives_everything() {
        let r = zmod(4, 16).unwrap();
        let base = r.span(&[r.one()]);
        let q = large_quotient_ring(&r, &r.span(&[2]), &base, &[0]);
        assert_eq!(q, base);
    }

    #[test]
    fn closure_failure_is_witnessed() {
        let r = zmod(6, 16).unwrap();
        let d = IdempotentDecomposition::new(&r, &r.full_set());
        let err = MultiplicativeSet::Explicit(vec![1, 5, 2]).resolve(&r, &d).unwrap_err();
        assert!(matches!(err, IdealError::NotMultiplicativelyClosed { .. }));
    }
}
