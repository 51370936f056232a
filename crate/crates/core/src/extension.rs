//! A finite extension `R ⊆ S` with its lattice, supports, minimal-step types and the
//! canonical decomposition.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::ideal::{conductor, Ideal, IdempotentDecomposition, MaximalIdeal};
use crate::interval::{enumerate_interval, EnumerationError, ExtensionLattice, Limits};
use crate::lattice::Lattice;
use crate::ring::{Elem, ElemSet, FiniteRing};
use crate::support::{CheckLog, Mask, SupportedLattice, MAX_SUPPORT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("{lower} < {upper} is not a minimal extension")]
    NotMinimal { lower: usize, upper: usize },
    #[error("minimal extension {lower} < {upper} matches no known type")]
    Unclassifiable { lower: usize, upper: usize },
    #[error("extension is supported at {0} maximal ideals, expected exactly one")]
    NotCrucial(usize),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("{0} supported maximal ideals exceed the supported maximum")]
    TooManyMaximalIdeals(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MinimalKind {
    Inert,
    Decomposed,
    Ramified,
}

impl MinimalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MinimalKind::Inert => "inert",
            MinimalKind::Decomposed => "decomposed",
            MinimalKind::Ramified => "ramified",
        }
    }
}

/// Type of a minimal step and its crucial ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalTypeLabel {
    pub kind: MinimalKind,
    /// Index of the crucial ideal among the lower ring's maximal ideals.
    pub crucial: usize,
    pub crucial_ideal: Ideal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverLabel {
    pub lower: usize,
    pub upper: usize,
    pub kind: MinimalKind,
    /// Crucial ideal, as an index into the lower ring's maximal ideals.
    pub crucial: usize,
    /// The crucial ideal contracted to the base, as an index into the base's maximal ideals.
    pub over: usize,
}

/// `MSupp_base(U/T)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub base: usize,
    pub lower: usize,
    pub upper: usize,
    /// Indices into the base ring's maximal ideals.
    pub maximal: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CanonicalDecomposition {
    pub seminormalization: usize,
    pub t_closure: usize,
    pub integral_closure: usize,
    /// Both closures were unique maxima.
    pub well_defined: bool,
}

/// Outcome of a conductor criterion for seminormality or t-closedness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConductorCriterion {
    pub conductor: Vec<Elem>,
    /// Maximal ideals of the lower ring containing the conductor.
    pub v_lower: usize,
    /// Maximal ideals of the upper ring containing the conductor.
    pub v_upper: usize,
    pub radical_in_upper: bool,
    pub radical_in_lower: bool,
    pub irredundant: bool,
    pub holds: bool,
    /// The matching closure is the lower ring itself.
    pub closure_trivial: bool,
}

impl ConductorCriterion {
    pub fn agrees(&self) -> bool {
        self.holds == self.closure_trivial
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeminormalProfile {
    pub length: usize,
    pub conductor_is_crucial: bool,
    pub v_top: usize,
    pub residue_size: usize,
    /// `|S/M|`
    pub quotient_size: usize,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct Extension {
    name: String,
    lattice: ExtensionLattice,
    decomps: Vec<IdempotentDecomposition>,
    supported: SupportedLattice,
    /// Max(R) indices of the supported maximal ideals, in mask order.
    msupp: Vec<usize>,
}

fn to_mask(positions: &[usize], msupp: &[usize]) -> Mask {
    positions
        .iter()
        .map(|m| msupp.iter().position(|x| x == m).expect("support within MSupp(S/R)"))
        .fold(0, |acc, i| acc | 1 << i)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Extension {
    /// `R ⊆ S` with `S` the whole ambient ring.
    pub fn new(
        name: impl Into<String>,
        ring: Arc<FiniteRing>,
        base: &ElemSet,
        limits: Limits,
    ) -> Result<Self, AnalysisError> {
        let top = ring.full_set();
        Self::between(name, ring, base, &top, limits)
    }

    pub fn between(
        name: impl Into<String>,
        ring: Arc<FiniteRing>,
        base: &ElemSet,
        top: &ElemSet,
        limits: Limits,
    ) -> Result<Self, AnalysisError> {
        let lattice = enumerate_interval(ring, base, top, limits)?;
        Self::from_lattice(name, lattice)
    }

    pub fn from_lattice(name: impl Into<String>, lattice: ExtensionLattice) -> Result<Self, AnalysisError> {
        let ring = lattice.ring().clone();
        let decomps: Vec<IdempotentDecomposition> =
            lattice.subrings().iter().map(|s| IdempotentDecomposition::new(&ring, s.elements())).collect();
        let (r, s) = (lattice.bottom(), lattice.top());
        let support_of = |t: usize, u: usize| {
            decomps[r].support(&ring, lattice.subring(t).elements(), lattice.subring(u).elements())
        };
        let msupp = support_of(r, s);
        if msupp.len() > MAX_SUPPORT {
            return Err(AnalysisError::TooManyMaximalIdeals(msupp.len()));
        }
        let n = lattice.len();
        let lower = (0..n).map(|t| to_mask(&support_of(r, t), &msupp)).collect();
        let upper = (0..n).map(|t| to_mask(&support_of(t, s), &msupp)).collect();
        let supported = SupportedLattice {
            lattice: lattice.lattice().clone(),
            names: msupp.iter().map(|m| format!("M{m}")).collect(),
            lower,
            upper,
        };
        Ok(Extension { name: name.into(), lattice, decomps, supported, msupp })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        self.lattice.ring()
    }

    pub fn lattice(&self) -> &ExtensionLattice {
        &self.lattice
    }

    pub fn order(&self) -> &Lattice {
        self.lattice.lattice()
    }

    pub fn supported(&self) -> &SupportedLattice {
        &self.supported
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    pub fn elements(&self, i: usize) -> &ElemSet {
        self.lattice.subring(i).elements()
    }

    pub fn decomposition(&self, i: usize) -> &IdempotentDecomposition {
        &self.decomps[i]
    }

    pub fn base_maximal(&self) -> &[MaximalIdeal] {
        self.decomps[self.bottom()].maximal_ideals()
    }

    /// Max(R) indices of `MSupp(S/R)`, in mask bit order.
    pub fn msupp(&self) -> &[usize] {
        &self.msupp
    }

    /// Mask bit of a base maximal ideal, if supported.
    pub fn mask_of(&self, base_maximal: usize) -> Option<Mask> {
        self.msupp.iter().position(|&m| m == base_maximal).map(|i| 1 << i)
    }

    /// The primitive idempotent of the base attached to mask bit `i`.
    pub fn support_idempotent(&self, i: usize) -> Elem {
        self.base_maximal()[self.msupp[i]].idempotent
    }

    /// `MSupp_base(U/T)` for members `base ≤ t ≤ u`.
    pub fn support(&self, base: usize, t: usize, u: usize) -> SupportSet {
        let maximal = self.decomps[base].support(self.ring(), self.elements(t), self.elements(u));
        SupportSet { base, lower: t, upper: u, maximal }
    }

    /// `Q ∩ lower` for the maximal ideal `q` of `upper`, as an index into Max(lower).
    pub fn contraction(&self, upper: usize, q: usize, lower: usize) -> Option<usize> {
        let mut p = self.decomps[upper].maximal_ideals()[q].ideal.elements().clone();
        p.intersect_with(self.elements(lower));
        self.decomps[lower].index_of(&p).ok()
    }

    pub fn conductor(&self, lower: usize, upper: usize) -> Ideal {
        conductor(self.ring(), self.elements(lower), self.elements(upper))
    }

    /// Classifies a minimal step `a ⊂ b`.
    pub fn minimal_type(&self, a: usize, b: usize) -> Result<MinimalTypeLabel, AnalysisError> {
        let ring = self.ring();
        let (ta, tb) = (self.elements(a), self.elements(b));
        let not_minimal = AnalysisError::NotMinimal { lower: a, upper: b };
        if a == b || !ta.is_subset(tb) {
            return Err(not_minimal);
        }
        let basis = self.decomps[a].basis();
        for x in tb.ones() {
            if !ta.contains(x) && &ring.adjoin(ta, basis, x as Elem) != tb {
                return Err(not_minimal);
            }
        }
        let unclassifiable = AnalysisError::Unclassifiable { lower: a, upper: b };
        let c = self.conductor(a, b);
        let crucial = self.decomps[a].index_of(c.elements()).map_err(|_| unclassifiable.clone())?;
        let qa = self.decomps[a].maximal_ideals()[crucial].residue_size;
        let c_size = c.len();
        let quotient = self.decomps[b].size() / c_size;
        let max_b = self.decomps[b].maximal_ideals();
        let label = |kind| Ok(MinimalTypeLabel { kind, crucial, crucial_ideal: c.clone() });

        if self.decomps[b].index_of(c.elements()).is_ok() {
            // residue field extension of prime degree
            let mut q = qa;
            let mut degree = 1;
            while q < quotient {
                q *= qa;
                degree += 1;
            }
            if q == quotient && is_prime(degree) {
                return label(MinimalKind::Inert);
            }
            return Err(unclassifiable);
        }
        let above: Vec<&MaximalIdeal> = max_b.iter().filter(|m| c.is_subset(m.ideal.elements())).collect();
        if above.len() == 2 && above.iter().all(|m| m.residue_size == qa) {
            let mut meet = above[0].ideal.elements().clone();
            meet.intersect_with(above[1].ideal.elements());
            if &meet == c.elements() {
                return label(MinimalKind::Decomposed);
            }
        }
        if above.len() == 1 && quotient == qa * qa && above[0].residue_size == qa {
            let m = &above[0].ideal;
            let mb = m.generators();
            let square_inside = mb.iter().all(|&x| mb.iter().all(|&y| c.contains(ring.mul(x, y))));
            if square_inside && m.len() > c_size {
                return label(MinimalKind::Ramified);
            }
        }
        Err(unclassifiable)
    }

    /// Labels for every cover of the lattice.
    pub fn cover_labels(&self) -> Result<Vec<CoverLabel>, AnalysisError> {
        let r = self.bottom();
        self.order()
            .covers()
            .iter()
            .map(|&(a, b)| {
                let l = self.minimal_type(a, b)?;
                let mut p = l.crucial_ideal.elements().clone();
                p.intersect_with(self.elements(r));
                let over =
                    self.decomps[r].index_of(&p).map_err(|_| AnalysisError::Unclassifiable { lower: a, upper: b })?;
                Ok(CoverLabel { lower: a, upper: b, kind: l.kind, crucial: l.crucial, over })
            })
            .collect()
    }

    /// Contractions of the maximal ideals of `b` to `a`, when all are maximal.
    fn lying_over(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        (0..self.decomps[b].maximal_ideals().len()).map(|q| self.contraction(b, q, a)).collect()
    }

    /// Every residue field extension of `a ⊆ b` is trivial.
    pub fn is_infra_integral(&self, a: usize, b: usize) -> bool {
        let Some(over) = self.lying_over(a, b) else { return false };
        let (ma, mb) = (self.decomps[a].maximal_ideals(), self.decomps[b].maximal_ideals());
        over.iter().enumerate().all(|(q, &p)| mb[q].residue_size == ma[p].residue_size)
    }

    /// The spectral map of `a ⊆ b` is injective.
    pub fn is_i_extension(&self, a: usize, b: usize) -> bool {
        let Some(mut over) = self.lying_over(a, b) else { return false };
        let n = over.len();
        over.sort_unstable();
        over.dedup();
        over.len() == n
    }

    pub fn is_subintegral(&self, a: usize, b: usize) -> bool {
        self.is_infra_integral(a, b) && self.is_i_extension(a, b)
    }

    fn greatest(&self, candidates: &[usize]) -> Option<usize> {
        let l = self.order();
        candidates.iter().copied().find(|&t| candidates.iter().all(|&c| l.leq(c, t)))
    }

    /// Seminormalization and t-closure of `a` inside `b`.
    pub fn canonical_decomposition_between(&self, a: usize, b: usize) -> CanonicalDecomposition {
        let l = self.order();
        let inside = l.interval(a, b);
        let sub: Vec<usize> = inside.iter().copied().filter(|&t| self.is_subintegral(a, t)).collect();
        let infra: Vec<usize> = inside.iter().copied().filter(|&t| self.is_infra_integral(a, t)).collect();
        let plus = self.greatest(&sub);
        let t = self.greatest(&infra);
        let well_defined = plus.is_some() && t.is_some() && l.leq(plus.unwrap_or(a), t.unwrap_or(a));
        CanonicalDecomposition {
            seminormalization: plus.unwrap_or(a),
            t_closure: t.unwrap_or(a),
            integral_closure: b,
            well_defined,
        }
    }

    pub fn canonical_decomposition(&self) -> CanonicalDecomposition {
        self.canonical_decomposition_between(self.bottom(), self.top())
    }

    fn conductor_data(&self, a: usize, b: usize) -> (Ideal, Vec<usize>, Vec<usize>, bool, bool, bool) {
        let c = self.conductor(a, b);
        let (da, db) = (&self.decomps[a], &self.decomps[b]);
        let v_lower = da.v(c.elements());
        let v_upper = db.v(c.elements());
        let meet = |d: &IdempotentDecomposition, idx: &[usize], skip: Option<usize>| {
            let mut acc = d.elements().clone();
            for &i in idx {
                if Some(i) != skip {
                    acc.intersect_with(d.maximal_ideals()[i].ideal.elements());
                }
            }
            acc
        };
        let radical_upper = &meet(db, &v_upper, None) == c.elements();
        let radical_lower = &meet(da, &v_lower, None) == c.elements();
        let irredundant = v_upper.iter().all(|&i| &meet(db, &v_upper, Some(i)) != c.elements())
            && v_lower.iter().all(|&i| &meet(da, &v_lower, Some(i)) != c.elements());
        (c, v_lower, v_upper, radical_upper, radical_lower, irredundant)
    }

    /// Seminormality of `a ⊆ b` read off the conductor, next to the seminormalization.
    pub fn seminormal_criterion_between(&self, a: usize, b: usize) -> ConductorCriterion {
        let (c, vl, vu, ru, rl, irr) = self.conductor_data(a, b);
        ConductorCriterion {
            conductor: c.members(),
            v_lower: vl.len(),
            v_upper: vu.len(),
            radical_in_upper: ru,
            radical_in_lower: rl,
            irredundant: irr,
            holds: ru && rl && irr,
            closure_trivial: self.canonical_decomposition_between(a, b).seminormalization == a,
        }
    }

    pub fn seminormal_criterion(&self) -> ConductorCriterion {
        self.seminormal_criterion_between(self.bottom(), self.top())
    }

    /// t-closedness of `a ⊆ b` read off the conductor, next to the t-closure.
    pub fn t_closed_criterion_between(&self, a: usize, b: usize) -> ConductorCriterion {
        let (c, vl, vu, ru, rl, irr) = self.conductor_data(a, b);
        ConductorCriterion {
            conductor: c.members(),
            v_lower: vl.len(),
            v_upper: vu.len(),
            radical_in_upper: ru,
            radical_in_lower: rl,
            irredundant: irr,
            holds: ru && vl.len() == vu.len(),
            closure_trivial: self.canonical_decomposition_between(a, b).t_closure == a,
        }
    }

    pub fn t_closed_criterion(&self) -> ConductorCriterion {
        self.t_closed_criterion_between(self.bottom(), self.top())
    }

    /// Least `n` with `M^n ⊆ (R:S)` for an extension supported at a single `M`.
    pub fn conductor_power(&self) -> Result<u32, AnalysisError> {
        if self.msupp.len() != 1 {
            return Err(AnalysisError::NotCrucial(self.msupp.len()));
        }
        let m = &self.base_maximal()[self.msupp[0]].ideal;
        let i = self.conductor(self.bottom(), self.top());
        let ring = self.ring();
        let mb = m.generators().to_vec();
        let mut power = m.elements().clone();
        for n in 1..=self.decomps[self.bottom()].size() as u32 {
            if power.is_subset(i.elements()) {
                return Ok(n);
            }
            let basis = ring.additive_basis(&power);
            power = ring.product_span(&basis, &mb);
        }
        Err(AnalysisError::HypothesisFailed("no power of M lies in the conductor".into()))
    }

    /// For a seminormal infra-integral extension crucial at `m`: `S/M ≅ (R/M)^(n+1)`.
    pub fn seminormal_infraintegral_profile(&self, m: usize) -> Result<SeminormalProfile, AnalysisError> {
        let (r, s) = (self.bottom(), self.top());
        if !self.seminormal_criterion().holds {
            return Err(AnalysisError::HypothesisFailed("not seminormal".into()));
        }
        if !self.is_infra_integral(r, s) {
            return Err(AnalysisError::HypothesisFailed("not infra-integral".into()));
        }
        if self.msupp != [m] {
            return Err(AnalysisError::HypothesisFailed(format!("not crucial at M{m}")));
        }
        let length = self.order().length();
        let mi = &self.base_maximal()[m];
        let c = self.conductor(r, s);
        let v_top = self.decomps[s].v(mi.ideal.elements());
        let q = mi.residue_size;
        let quotient_size = self.decomps[s].size() / mi.ideal.len();
        let holds = c.elements() == mi.ideal.elements()
            && v_top.len() == length + 1
            && v_top.iter().all(|&i| self.decomps[s].maximal_ideals()[i].residue_size == q)
            && Some(quotient_size) == q.checked_pow(length as u32 + 1);
        Ok(SeminormalProfile {
            length,
            conductor_is_crucial: c.elements() == mi.ideal.elements(),
            v_top: v_top.len(),
            residue_size: q,
            quotient_size,
            holds,
        })
    }

    /// Structural invariants every finite extension must satisfy.
    pub fn invariant_checks(&self) -> CheckLog {
        let mut log = CheckLog::new();
        let ring = self.ring();
        let l = self.order();
        let (r, s) = (self.bottom(), self.top());
        for v in self.lattice.verify() {
            log.check("lattice closure and covers", false, || v);
        }
        log.check("lattice closure and covers", true, String::new);
        for (i, d) in self.decomps.iter().enumerate() {
            let e = d.primitive_idempotents();
            let orth = e.iter().enumerate().all(|(x, &a)| e[x + 1..].iter().all(|&b| ring.mul(a, b) == 0));
            let sum = e.iter().fold(0, |acc, &x| ring.add(acc, x));
            log.check("primitive idempotents orthogonal and complete", orth && sum == d.identity(), || {
                format!("ring {i}")
            });
            let local = e.iter().all(|&x| IdempotentDecomposition::new(ring, &ring.image(x, d.elements())).is_local());
            log.check("local factors are local", local, || format!("ring {i}"));
        }
        log.check("union law for supports", self.supported.union_law_violations().is_empty(), || {
            format!("{:?}", self.supported.union_law_violations())
        });
        // localization map is injective on intermediate rings
        let base = &self.decomps[r];
        let images: Vec<Vec<ElemSet>> = (0..self.len())
            .map(|t| (0..base.maximal_ideals().len()).map(|m| base.localize(ring, m, self.elements(t))).collect())
            .collect();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                log.check("localization map injective", images[a] != images[b], || format!("{a} and {b}"));
            }
        }
        match self.cover_labels() {
            Ok(labels) => {
                log.check("every cover has a type", true, String::new);
                if let Some(chains) = l.maximal_chains(10_000) {
                    let full: Vec<usize> = self.msupp.clone();
                    for chain in chains {
                        let mut over: Vec<usize> = chain
                            .windows(2)
                            .map(|w| labels.iter().find(|c| c.lower == w[0] && c.upper == w[1]).unwrap().over)
                            .collect();
                        over.sort_unstable();
                        over.dedup();
                        log.check("support equals crucial ideals along a chain", over == full, || {
                            format!("chain {chain:?}")
                        });
                    }
                }
            }
            Err(e) => {
                log.check("every cover has a type", false, || e.to_string());
            }
        }
        for t in 0..self.len() {
            let sn = self.seminormal_criterion_between(t, s);
            log.check("seminormal criterion matches seminormalization", sn.agrees(), || format!("over {t}"));
            let tc = self.t_closed_criterion_between(t, s);
            log.check("t-closed criterion matches t-closure", tc.agrees(), || format!("over {t}"));
        }
        let cd = self.canonical_decomposition();
        log.check("canonical decomposition well defined", cd.well_defined, String::new);
        log.check("subintegral step is an i-extension", self.is_i_extension(r, cd.seminormalization), String::new);
        log.check("t-closed step is an i-extension", self.is_i_extension(cd.t_closure, s), String::new);
        log.check(
            "seminormalization has seminormal top step",
            self.seminormal_criterion_between(cd.seminormalization, s).holds,
            String::new,
        );
        if l.is_chained() {
            log.check("chained implies crucial", self.msupp.len() <= 1, || format!("{} supported", self.msupp.len()));
        }
        log
    }
}
