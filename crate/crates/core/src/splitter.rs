//! Splitters, complements and the maps they induce between intervals.
//!
//! Label-level operations only need a [`SupportedLattice`], so they also run on authored
//! lattices. Ring-level operations need the element sets of an [`Extension`].

use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::extension::{AnalysisError, Extension};
use crate::ideal::{large_quotient_ring, MultiplicativeSet};
use crate::interval::Limits;
use crate::lattice::{IsoReport, Lattice};
use crate::ring::{members, Elem, ElemSet};
use crate::support::{bits, CheckLog, Mask, SupportedLattice};

/// Largest support for which all subsets are enumerated.
pub const MAX_SUBSET_SUPPORT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitterError {
    #[error("not a B-extension: no splitter at {0:?}")]
    NotBExtension(Vec<String>),
    #[error("support has {0} maximal ideals; need at least two")]
    TrivialCase(usize),
    #[error("support has {0} maximal ideals; subset enumeration is capped at {MAX_SUBSET_SUPPORT}")]
    TooManySubsets(usize),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("ideal is not inside the conductor")]
    BadIdeal,
    #[error("unknown property {0:?}; expected subintegral or infra-integral")]
    UnknownProperty(String),
    #[error("product of local lattices has more than {0} elements")]
    ProductTooLarge(usize),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

fn check_subsets(sl: &SupportedLattice) -> Result<(), SplitterError> {
    if sl.support_count() > MAX_SUBSET_SUPPORT {
        return Err(SplitterError::TooManySubsets(sl.support_count()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitVerdict {
    pub at: usize,
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub split: bool,
}

pub fn split_verdict(sl: &SupportedLattice, t: usize) -> SplitVerdict {
    SplitVerdict { at: t, lower: sl.names_of(sl.lower[t]), upper: sl.names_of(sl.upper[t]), split: sl.is_split_at(t) }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitterRecord {
    pub subset: Vec<String>,
    pub mask: Mask,
    pub sigma: Option<usize>,
    pub complement: Option<usize>,
    /// Elements with the required supports; never more than one.
    pub candidates: usize,
}

fn candidates(sl: &SupportedLattice, mask: Mask) -> Vec<usize> {
    let rest = sl.full() & !mask;
    (0..sl.lattice.len()).filter(|&t| sl.lower[t] == mask && sl.upper[t] == rest).collect()
}

/// The element `T` with `MSupp(T/R) = X` and `MSupp(S/T) = X^c`, found by scanning.
pub fn sigma(sl: &SupportedLattice, mask: Mask) -> Option<usize> {
    candidates(sl, mask).first().copied()
}

pub fn splitter(sl: &SupportedLattice, mask: Mask) -> SplitterRecord {
    let found = candidates(sl, mask);
    let s = found.first().copied();
    let complement = s.and_then(|_| sigma(sl, sl.full() & !mask));
    SplitterRecord { subset: sl.names_of(mask), mask, sigma: s, complement, candidates: found.len() }
}

/// One record per subset of the support, in increasing mask order.
pub fn splitter_table(sl: &SupportedLattice) -> Result<Vec<SplitterRecord>, SplitterError> {
    check_subsets(sl)?;
    Ok(sl.subsets().map(|m| splitter(sl, m)).collect())
}

pub fn has_all_splitters(sl: &SupportedLattice) -> Result<bool, SplitterError> {
    check_subsets(sl)?;
    Ok(sl.subsets().all(|m| sigma(sl, m).is_some()))
}

fn require_b(sl: &SupportedLattice) -> Result<Vec<usize>, SplitterError> {
    check_subsets(sl)?;
    let full = sl.full();
    let mut table = vec![usize::MAX; full as usize + 1];
    for m in sl.subsets() {
        table[m as usize] = sigma(sl, m).ok_or_else(|| SplitterError::NotBExtension(sl.names_of(m)))?;
    }
    Ok(table)
}

/// Positions of the members of `[a, b]`, and the inverse lookup.
fn positions(l: &Lattice, a: usize, b: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    let items = l.interval(a, b);
    let mut pos = vec![None; l.len()];
    for (i, &x) in items.iter().enumerate() {
        pos[x] = Some(i);
    }
    (items, pos)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitIsoSuite {
    pub at: usize,
    pub split: bool,
    /// `V ↦ (V ∩ T, VT)` into `[R,T] × [T,S]`.
    pub psi: IsoReport,
    pub complement: Option<usize>,
    /// `V ↦ VT` from `[R,T^o]` to `[T,S]`.
    pub psi1: Option<IsoReport>,
    /// `(V, W) ↦ VW` from `[R,T] × [R,T^o]` to `[R,S]`.
    pub theta: Option<IsoReport>,
    pub join_cancellation: Option<bool>,
    pub meet_cancellation: Option<bool>,
    /// `MSupp(T/R) = MSupp(S/T^o)` and `MSupp(S/T) = MSupp(T^o/R)`.
    pub support_swap: Option<bool>,
    /// `|[R,S]| = |[R,T]| · |[T,S]|`
    pub count_identity: bool,
}

impl SplitIsoSuite {
    /// Claims that must hold when the extension splits at `T`; empty otherwise.
    pub fn violations(&self) -> Vec<String> {
        if !self.split {
            return Vec::new();
        }
        let mut bad = Vec::new();
        let mut iso = |r: &Option<IsoReport>, name: &str| match r {
            Some(r) if r.is_isomorphism() => {}
            Some(r) => {
                bad.push(format!("{} is not an order-isomorphism: {}", r.map, r.witness.clone().unwrap_or_default()))
            }
            None => bad.push(format!("{name} missing")),
        };
        iso(&Some(self.psi.clone()), "psi");
        iso(&self.psi1, "psi1");
        iso(&self.theta, "theta");
        for (flag, name) in [
            (self.join_cancellation, "join cancellation"),
            (self.meet_cancellation, "meet cancellation"),
            (self.support_swap, "support swap"),
        ] {
            if flag != Some(true) {
                bad.push(format!("{name} fails"));
            }
        }
        if !self.count_identity {
            bad.push("count identity fails".into());
        }
        bad
    }
}

pub fn split_isomorphism_suite(sl: &SupportedLattice, t: usize) -> SplitIsoSuite {
    let l = &sl.lattice;
    let (r, s) = (l.bottom(), l.top());
    let split = sl.is_split_at(t);
    let (low, low_pos) = positions(l, r, t);
    let (up, up_pos) = positions(l, t, s);
    let nu = up.len();
    let psi_map: Vec<Option<usize>> =
        (0..l.len()).map(|v| Some(low_pos[l.meet(v, t)]? * nu + up_pos[l.join(v, t)]?)).collect();
    let pair_leq = |x: usize, y: usize| l.leq(low[x / nu], low[y / nu]) && l.leq(up[x % nu], up[y % nu]);
    let psi = IsoReport::evaluate("psi", &psi_map, low.len() * nu, |a, b| l.leq(a, b), pair_leq);
    let count_identity = l.len() == low.len() * nu;

    let complement = if split { sigma(sl, sl.full() & !sl.lower[t]) } else { None };
    let (mut psi1, mut theta, mut join_c, mut meet_c, mut swap) = (None, None, None, None, None);
    if let Some(o) = complement {
        let (co, _) = positions(l, r, o);
        let map: Vec<Option<usize>> = co.iter().map(|&v| up_pos[l.join(v, t)]).collect();
        psi1 = Some(IsoReport::evaluate("psi1", &map, nu, |a, b| l.leq(co[a], co[b]), |a, b| l.leq(up[a], up[b])));
        let nc = co.len();
        let map: Vec<Option<usize>> = (0..low.len() * nc).map(|x| Some(l.join(low[x / nc], co[x % nc]))).collect();
        theta = Some(IsoReport::evaluate(
            "theta",
            &map,
            l.len(),
            |a, b| l.leq(low[a / nc], low[b / nc]) && l.leq(co[a % nc], co[b % nc]),
            |a, b| l.leq(a, b),
        ));
        join_c = Some(co.iter().all(|&u| co.iter().all(|&v| l.join(u, t) != l.join(v, t) || u == v)));
        let (above, _) = positions(l, o, s);
        meet_c = Some(above.iter().all(|&u| above.iter().all(|&v| l.meet(u, t) != l.meet(v, t) || u == v)));
        swap = Some(sl.lower[t] == sl.upper[o] && sl.upper[t] == sl.lower[o]);
    }
    SplitIsoSuite {
        at: t,
        split,
        psi,
        complement,
        psi1,
        theta,
        join_cancellation: join_c,
        meet_cancellation: meet_c,
        support_swap: swap,
        count_identity,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementarySplitter {
    pub name: String,
    pub sigma: usize,
    /// Elements `U` with `MSupp(U/R) = {M}`.
    pub crucial: Vec<usize>,
    /// `σ(M)` is the join of the crucial elements.
    pub join_of_crucial: bool,
    /// `]R, σ(M)]` is exactly the crucial set.
    pub interval_matches: bool,
    /// No nontrivial splitter lies strictly below `σ(M)`.
    pub minimal: bool,
}

impl ElementarySplitter {
    pub fn holds(&self) -> bool {
        self.join_of_crucial && self.interval_matches && self.minimal
    }
}

pub fn elementary_splitters(sl: &SupportedLattice) -> Result<Vec<ElementarySplitter>, SplitterError> {
    let table = require_b(sl)?;
    let l = &sl.lattice;
    let r = l.bottom();
    let splitters: Vec<usize> = (0..l.len()).filter(|&t| sl.is_split_at(t)).collect();
    Ok((0..sl.support_count())
        .map(|i| {
            let sm = table[1 << i];
            let crucial: Vec<usize> = (0..l.len()).filter(|&u| sl.lower[u] == 1 << i).collect();
            let join = crucial.iter().fold(r, |acc, &u| l.join(acc, u));
            let mut above_r = l.interval(r, sm);
            above_r.retain(|&u| u != r);
            let minimal = !splitters.iter().any(|&u| u != r && l.lt(u, sm));
            ElementarySplitter {
                name: sl.names[i].clone(),
                sigma: sm,
                join_of_crucial: join == sm,
                interval_matches: above_r == crucial,
                crucial,
                minimal,
            }
        })
        .collect())
}

/// Product, meet, join, order and interval laws of splitters over all pairs of subsets.
pub fn splitter_algebra_suite(sl: &SupportedLattice) -> Result<CheckLog, SplitterError> {
    let table = require_b(sl)?;
    let l = &sl.lattice;
    let (r, s) = (l.bottom(), l.top());
    let full = sl.full();
    let mut log = CheckLog::new();
    let subsets: Vec<Mask> = sl.subsets().collect();
    let name = |m: Mask| format!("{:?}", sl.names_of(m));
    for &x in &subsets {
        let sx = table[x as usize];
        let product = bits(x).fold(r, |acc, i| l.join(acc, table[1 << i]));
        log.check("splitter is the product of elementary splitters", product == sx, || name(x));
        log.check("support of a splitter recovers its subset", sl.lower[sx] == x, || name(x));
        for i in bits(full) {
            let below = l.leq(table[1 << i], sx);
            log.check("elementary splitter below a splitter iff member", below == (x >> i & 1 == 1), || {
                format!("{} in {}", sl.names[i], name(x))
            });
        }
        for u in 0..l.len() {
            log.check("lower interval of a splitter by supports", l.leq(u, sx) == (sl.lower[u] & !x == 0), || {
                format!("{u} against {}", name(x))
            });
            log.check("upper interval of a splitter by supports", l.leq(sx, u) == (sl.upper[u] & x == 0), || {
                format!("{u} against {}", name(x))
            });
        }
        for &y in &subsets {
            let sy = table[y as usize];
            log.check("meet of splitters", table[(x & y) as usize] == l.meet(sx, sy), || {
                format!("{} {}", name(x), name(y))
            });
            log.check("join of splitters", table[(x | y) as usize] == l.join(sx, sy), || {
                format!("{} {}", name(x), name(y))
            });
            log.check("splitters ordered as subsets", (x & !y == 0) == l.leq(sx, sy), || {
                format!("{} {}", name(x), name(y))
            });
            if x != y {
                log.check("product decomposition is unique", sx != sy, || format!("{} {}", name(x), name(y)));
            }
        }
    }
    for i in bits(full) {
        for j in bits(full) {
            if i < j {
                log.check(
                    "distinct elementary splitters meet in the base",
                    l.meet(table[1 << i], table[1 << j]) == r,
                    || format!("{} {}", sl.names[i], sl.names[j]),
                );
            }
        }
    }
    for t in 0..l.len() {
        if sl.is_split_at(t) {
            log.check("a splitter is the splitter of its support", table[sl.lower[t] as usize] == t, || format!("{t}"));
        }
    }
    log.check("top is the product of all elementary splitters", table[full as usize] == s, String::new);
    Ok(log)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCensus {
    pub support: usize,
    /// Distinct chains `σ(X_0) ⊂ … ⊂ σ(X_n)` over all orderings of the support.
    pub chains: usize,
    pub expected: usize,
    /// `σ(X_{k+1}) = σ(X_k) σ(M_{k+1})` at every step.
    pub steps_are_products: bool,
    /// Each step is supported over the base at exactly the added ideal.
    pub steps_add_one_ideal: bool,
    /// Ring-level: each step is crucial at an ideal lying over the added one.
    pub steps_crucial: Option<bool>,
}

impl ChainCensus {
    pub fn holds(&self) -> bool {
        self.chains == self.expected
            && self.steps_are_products
            && self.steps_add_one_ideal
            && self.steps_crucial != Some(false)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// An order of the supported ideals with the splitters it passes through.
pub type SplitterChain = (Vec<usize>, Vec<usize>);

/// Every chain of splitters built by adding one supported ideal at a time.
pub fn splitter_chain_list(sl: &SupportedLattice) -> Result<Vec<SplitterChain>, SplitterError> {
    let n = sl.support_count();
    if n <= 1 {
        return Err(SplitterError::TrivialCase(n));
    }
    if n > 8 {
        return Err(SplitterError::TooManySubsets(n));
    }
    let table = require_b(sl)?;
    Ok(permutations(n)
        .into_iter()
        .map(|order| {
            let mut mask = 0;
            let mut chain = vec![table[0]];
            for &i in &order {
                mask |= 1 << i;
                chain.push(table[mask as usize]);
            }
            (order, chain)
        })
        .collect())
}

pub fn splitter_chains(sl: &SupportedLattice) -> Result<ChainCensus, SplitterError> {
    let list = splitter_chain_list(sl)?;
    let n = sl.support_count();
    let l = &sl.lattice;
    let mut products = true;
    let mut one_ideal = true;
    for (order, chain) in &list {
        for (k, &i) in order.iter().enumerate() {
            let elem = sigma(sl, 1 << i).expect("B-extension");
            products &= chain[k + 1] == l.join(chain[k], elem) && l.lt(chain[k], chain[k + 1]);
            one_ideal &= sl.lower[chain[k + 1]] & !sl.lower[chain[k]] == 1 << i;
        }
    }
    let mut distinct: Vec<&Vec<usize>> = list.iter().map(|(_, c)| c).collect();
    distinct.sort();
    distinct.dedup();
    Ok(ChainCensus {
        support: n,
        chains: distinct.len(),
        expected: (1..=n).product(),
        steps_are_products: products,
        steps_add_one_ideal: one_ideal,
        steps_crucial: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PinchedSplit {
    pub pinch_points: Vec<usize>,
    pub proper_splitters: Vec<usize>,
    pub chained: bool,
    pub holds: bool,
}

/// Pinch points and proper splitters never coexist, and chained lattices have no proper splitter.
pub fn pinched_vs_split(sl: &SupportedLattice) -> PinchedSplit {
    let l = &sl.lattice;
    let (r, s) = (l.bottom(), l.top());
    let pinch_points = l.pinch_points();
    let proper_splitters: Vec<usize> = (0..l.len()).filter(|&t| t != r && t != s && sl.is_split_at(t)).collect();
    let chained = l.is_chained();
    let holds = (pinch_points.is_empty() || proper_splitters.is_empty())
        && !proper_splitters.iter().any(|t| pinch_points.contains(t))
        && (!chained || proper_splitters.is_empty());
    PinchedSplit { pinch_points, proper_splitters, chained, holds }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementAnalysis {
    pub at: usize,
    pub split: bool,
    pub complements: Vec<usize>,
    pub splitter_complement: Option<usize>,
    pub unique: Option<bool>,
    /// `T^o` is the largest `V` with `V ∩ T = R`.
    pub largest_disjoint: Option<bool>,
    pub support_swap: Option<bool>,
    /// `T + T^o = T T^o` as sets.
    pub sum_is_product: Option<bool>,
    /// `T^o = { x ∈ S : T ∩ Rx ⊆ R }`.
    pub polar_matches: Option<bool>,
}

impl ComplementAnalysis {
    pub fn violations(&self) -> Vec<String> {
        if !self.split {
            return Vec::new();
        }
        [
            (self.unique, "complement is not unique"),
            (self.largest_disjoint, "complement is not the largest element meeting T in R"),
            (self.support_swap, "supports of the complement are not swapped"),
            (self.sum_is_product, "sum differs from compositum"),
            (self.polar_matches, "polar differs from complement"),
        ]
        .iter()
        .filter(|(f, _)| *f == Some(false))
        .map(|(_, m)| m.to_string())
        .collect()
    }
}

/// Label-level part of the complement analysis; ring-level fields stay empty.
pub fn complement_labels(sl: &SupportedLattice, t: usize) -> ComplementAnalysis {
    let l = &sl.lattice;
    let r = l.bottom();
    let split = sl.is_split_at(t);
    let complements = l.complements(t);
    let mut out = ComplementAnalysis {
        at: t,
        split,
        complements,
        splitter_complement: None,
        unique: None,
        largest_disjoint: None,
        support_swap: None,
        sum_is_product: None,
        polar_matches: None,
    };
    if split {
        let o = sigma(sl, sl.full() & !sl.lower[t]);
        out.splitter_complement = o;
        out.unique = Some(o.is_some() && out.complements == [o.unwrap()]);
        if let Some(o) = o {
            let disjoint: Vec<usize> = (0..l.len()).filter(|&v| l.meet(v, t) == r).collect();
            out.largest_disjoint = Some(disjoint.iter().all(|&v| l.leq(v, o)));
            out.support_swap = Some(sl.lower[t] == sl.upper[o] && sl.upper[t] == sl.lower[o]);
        }
    }
    out
}

pub fn complement_analysis(ext: &Extension, t: usize) -> ComplementAnalysis {
    let mut out = complement_labels(ext.supported(), t);
    if let Some(o) = out.splitter_complement {
        let ring = ext.ring();
        let (tt, to, rr) = (ext.elements(t), ext.elements(o), ext.elements(ext.bottom()));
        let mut sum = ring.empty_set();
        for a in tt.ones() {
            for b in to.ones() {
                sum.insert(ring.add(a as Elem, b as Elem) as usize);
            }
        }
        out.sum_is_product = Some(sum == *ext.elements(ext.order().join(t, o)));
        let mut polar = ring.empty_set();
        for x in ext.elements(ext.top()).ones() {
            let inside = rr.ones().all(|c| {
                let y = ring.mul(c as Elem, x as Elem) as usize;
                !tt.contains(y) || rr.contains(y)
            });
            if inside {
                polar.insert(x);
            }
        }
        out.polar_matches = Some(&polar == to);
    }
    out
}

/// The localized lattices `[R_M, S_M]`, one per supported maximal ideal, in mask order.
#[derive(Debug, Clone)]
pub struct LocalLattices {
    pub locals: Vec<Extension>,
    /// `phi[t][i]` is the index of `T_M` in `locals[i]`.
    pub phi: Vec<Vec<usize>>,
}

impl LocalLattices {
    pub fn new(ext: &Extension, limits: Limits) -> Result<Self, SplitterError> {
        let ring = ext.ring();
        let (r, s) = (ext.bottom(), ext.top());
        let mut locals = Vec::new();
        for i in 0..ext.msupp().len() {
            let e = ext.support_idempotent(i);
            let base = ring.image(e, ext.elements(r));
            let top = ring.image(e, ext.elements(s));
            locals.push(Extension::between(
                format!("{} at {}", ext.name(), ext.supported().names[i]),
                ring.clone(),
                &base,
                &top,
                limits,
            )?);
        }
        let phi = (0..ext.len())
            .map(|t| {
                locals
                    .iter()
                    .enumerate()
                    .map(|(i, loc)| {
                        let img = ring.image(ext.support_idempotent(i), ext.elements(t));
                        loc.lattice().find(&img).expect("localization of an intermediate ring is intermediate")
                    })
                    .collect()
            })
            .collect();
        Ok(LocalLattices { locals, phi })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.locals.iter().map(Extension::len).collect()
    }
}

const PRODUCT_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BVerdict {
    /// `φ: [R,S] → ∏ [R_M,S_M]` is bijective.
    pub phi_bijective: Option<bool>,
    pub phi: Option<IsoReport>,
    pub all_splitters: bool,
    /// `ℓ[R,S] = Σ ℓ[R_M,S_M]`
    pub length_identity: Option<bool>,
    pub local_sizes: Option<Vec<usize>>,
    pub agree: bool,
}

fn verdict(
    phi: Option<IsoReport>,
    all_splitters: bool,
    length_identity: Option<bool>,
    local_sizes: Option<Vec<usize>>,
) -> BVerdict {
    let phi_bijective = phi.as_ref().map(IsoReport::is_bijection);
    let values: Vec<bool> = [phi_bijective, Some(all_splitters)].into_iter().flatten().collect();
    let mut agree = values.iter().all(|&v| v == values[0]);
    if phi_bijective == Some(true) && length_identity == Some(false) {
        agree = false;
    }
    BVerdict { phi_bijective, phi, all_splitters, length_identity, local_sizes, agree }
}

/// B-extension verdict of a ring extension from three independent computations.
pub fn is_b_extension(ext: &Extension, local: &LocalLattices) -> Result<BVerdict, SplitterError> {
    let sizes = local.sizes();
    let total = sizes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n).filter(|&p| p <= PRODUCT_CAP));
    let total = total.ok_or(SplitterError::ProductTooLarge(PRODUCT_CAP))?;
    let encode = |t: usize| local.phi[t].iter().zip(&sizes).fold(0, |acc, (&p, &n)| acc * n + p);
    let decode = |mut x: usize| {
        let mut v = vec![0; sizes.len()];
        for (slot, &n) in v.iter_mut().zip(&sizes).rev() {
            *slot = x % n;
            x /= n;
        }
        v
    };
    let map: Vec<Option<usize>> = (0..ext.len()).map(|t| Some(encode(t))).collect();
    let l = ext.order();
    let phi = IsoReport::evaluate(
        "phi",
        &map,
        total,
        |a, b| l.leq(a, b),
        |a, b| {
            let (da, db) = (decode(a), decode(b));
            local.locals.iter().enumerate().all(|(i, loc)| loc.order().leq(da[i], db[i]))
        },
    );
    let length_identity = l.length() == local.locals.iter().map(|x| x.order().length()).sum::<usize>();
    Ok(verdict(Some(phi), has_all_splitters(ext.supported())?, Some(length_identity), Some(sizes)))
}

/// B-extension verdict of a labelled lattice; with local sizes, a product-size test stands in for `φ`.
pub fn labeled_b_verdict(sl: &SupportedLattice, local_sizes: Option<&[usize]>) -> Result<BVerdict, SplitterError> {
    let all = has_all_splitters(sl)?;
    let phi_bij = local_sizes.map(|s| s.iter().product::<usize>() == sl.lattice.len());
    let mut v = verdict(None, all, None, local_sizes.map(<[usize]>::to_vec));
    v.phi_bijective = phi_bij;
    v.agree = phi_bij.is_none_or(|b| b == all);
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientRingReport {
    pub subset: Vec<String>,
    pub sigma: usize,
    /// `σ(X) = ∩_{M ∈ X^c} R_[M]`
    pub intersection_matches: bool,
    /// `R_[R ∖ ∪X] = σ(X^c)`
    pub avoiding_matches: bool,
}

fn large_quotient_at(ext: &Extension, avoid: Vec<usize>) -> ElemSet {
    let ring = ext.ring();
    let r = ext.bottom();
    let sigma = MultiplicativeSet::Avoiding(avoid)
        .resolve(ring, ext.decomposition(r))
        .expect("complement of a union of primes is multiplicative");
    large_quotient_ring(ring, ext.elements(r), ext.elements(ext.top()), &sigma)
}

pub fn splitter_via_quotient_rings(ext: &Extension, mask: Mask) -> Result<QuotientRingReport, SplitterError> {
    let sl = ext.supported();
    let table = require_b(sl)?;
    let sx = table[mask as usize];
    let rest = sl.full() & !mask;
    let mut inter = ext.elements(ext.top()).clone();
    for i in bits(rest) {
        inter.intersect_with(&large_quotient_at(ext, vec![ext.msupp()[i]]));
    }
    let avoiding = large_quotient_at(ext, bits(mask).map(|i| ext.msupp()[i]).collect());
    Ok(QuotientRingReport {
        subset: sl.names_of(mask),
        sigma: sx,
        intersection_matches: &inter == ext.elements(sx),
        avoiding_matches: &avoiding == ext.elements(table[rest as usize]),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimaryComponent {
    pub name: String,
    /// Index of `R_[M]` in the lattice.
    pub ring: Option<usize>,
    /// `MSupp(S/R_[M]) = {M}`
    pub primary: bool,
    /// No term of `∩_{M' ≠ M} R_[M']` can be dropped.
    pub irredundant: bool,
}

/// The decomposition `σ(M) = ∩_{M' ≠ M} R_[M']`, stated through supports.
pub fn primary_decomposition(ext: &Extension) -> Result<Vec<PrimaryComponent>, SplitterError> {
    let sl = ext.supported();
    let table = require_b(sl)?;
    let n = sl.support_count();
    let q: Vec<ElemSet> = (0..n).map(|i| large_quotient_at(ext, vec![ext.msupp()[i]])).collect();
    let top = ext.elements(ext.top()).clone();
    let meet_of = |skip: &[usize]| {
        let mut acc = top.clone();
        for (i, qi) in q.iter().enumerate() {
            if !skip.contains(&i) {
                acc.intersect_with(qi);
            }
        }
        acc
    };
    Ok((0..n)
        .map(|i| {
            let idx = ext.lattice().find(&q[i]);
            let primary = idx.is_some_and(|k| sl.upper[k] == 1 << i);
            let full = meet_of(&[i]);
            let irredundant =
                &full == ext.elements(table[1 << i]) && (0..n).filter(|&j| j != i).all(|j| meet_of(&[i, j]) != full);
            PrimaryComponent { name: sl.names[i].clone(), ring: idx, primary, irredundant }
        })
        .collect())
}

/// `σ_[R,T](X) = σ(X) ∩ T` for every `T` and every `X ⊆ MSupp(T/R)`.
pub fn restriction_law(ext: &Extension) -> Result<CheckLog, SplitterError> {
    let sl = ext.supported();
    let table = require_b(sl)?;
    let l = ext.order();
    let r = ext.bottom();
    let mut log = CheckLog::new();
    for t in 0..ext.len() {
        let below = l.interval(r, t);
        let upper_in_t: Vec<Mask> = (0..ext.len())
            .map(|u| {
                if !l.leq(u, t) {
                    return 0;
                }
                ext.support(r, u, t).maximal.iter().fold(0, |acc, &m| acc | ext.mask_of(m).unwrap_or(0))
            })
            .collect();
        let supp = sl.lower[t];
        for x in sl.subsets().filter(|x| x & !supp == 0) {
            let local: Vec<usize> =
                below.iter().copied().filter(|&u| sl.lower[u] == x && upper_in_t[u] == supp & !x).collect();
            let expected = l.meet(table[x as usize], t);
            log.check("restricted splitter is the meet with T", local == [expected], || {
                format!("T={t} X={:?} found {local:?} expected {expected}", sl.names_of(x))
            });
        }
    }
    Ok(log)
}

/// `σ_[R/I,S/I](X/I) = σ(X)/I` for an ideal `I ⊆ (R:S)`.
pub fn quotient_law(ext: &Extension, ideal: &ElemSet, limits: Limits) -> Result<CheckLog, SplitterError> {
    let sl = ext.supported();
    let table = require_b(sl)?;
    let (r, s) = (ext.bottom(), ext.top());
    let conductor = ext.conductor(r, s);
    if !ideal.is_subset(conductor.elements()) {
        return Err(SplitterError::BadIdeal);
    }
    let ring = ext.ring();
    let (q, proj) =
        ring.quotient(ideal, limits.size_cap).map_err(|e| SplitterError::HypothesisNotMet(e.to_string()))?;
    let q = std::sync::Arc::new(q);
    let image = |set: &ElemSet| {
        let mut out = q.empty_set();
        for x in set.ones() {
            out.insert(proj[x] as usize);
        }
        out
    };
    let qext = Extension::between(
        format!("{}/I", ext.name()),
        q.clone(),
        &image(ext.elements(r)),
        &image(ext.elements(s)),
        limits,
    )?;
    let mut log = CheckLog::new();
    let qsl = qext.supported();
    log.check("quotient is a B-extension", has_all_splitters(qsl)?, String::new);
    // mask bit in the quotient for each supported ideal
    let mut remap = vec![None; sl.support_count()];
    for (i, slot) in remap.iter_mut().enumerate() {
        let m = image(ext.base_maximal()[ext.msupp()[i]].ideal.elements());
        *slot = qext.decomposition(qext.bottom()).index_of(&m).ok().and_then(|k| qext.mask_of(k));
    }
    log.check("supported ideals stay supported modulo I", remap.iter().all(Option::is_some), String::new);
    if remap.iter().any(Option::is_none) {
        return Ok(log);
    }
    for x in sl.subsets() {
        let qx = bits(x).fold(0, |acc, i| acc | remap[i].unwrap());
        let found = sigma(qsl, qx).map(|k| qext.elements(k).clone());
        let expected = image(ext.elements(table[x as usize]));
        log.check("splitter modulo I", found.as_ref() == Some(&expected), || format!("{:?}", sl.names_of(x)));
    }
    Ok(log)
}

/// Localization at `Σ = R ∖ (M_1 ∪ … ∪ M_k)`, realized as multiplication by an idempotent.
pub fn localization_law(ext: &Extension, avoid: &[usize], limits: Limits) -> Result<CheckLog, SplitterError> {
    let sl = ext.supported();
    let table = require_b(sl)?;
    let ring = ext.ring();
    let (r, s) = (ext.bottom(), ext.top());
    let base = ext.decomposition(r);
    let sigma_set = MultiplicativeSet::Avoiding(avoid.to_vec())
        .resolve(ring, base)
        .map_err(|e| SplitterError::HypothesisNotMet(e.to_string()))?;
    // maximal ideals disjoint from Σ survive the localization
    let survivors: Vec<usize> = (0..base.maximal_ideals().len())
        .filter(|&m| sigma_set.iter().all(|&x| !base.maximal_ideals()[m].ideal.contains(x)))
        .collect();
    let e = survivors.iter().fold(0, |acc, &m| ring.add(acc, base.maximal_ideals()[m].idempotent));
    let mut log = CheckLog::new();
    let keep: Mask =
        (0..sl.support_count()).filter(|&i| survivors.contains(&ext.msupp()[i])).fold(0, |acc, i| acc | 1 << i);
    let lext = Extension::between(
        format!("{} localized", ext.name()),
        ring.clone(),
        &ring.image(e, ext.elements(r)),
        &ring.image(e, ext.elements(s)),
        limits,
    )?;
    let lsl = lext.supported();
    log.check("localization is a B-extension", has_all_splitters(lsl)?, String::new);
    let lbase = lext.decomposition(lext.bottom());
    let remap: Vec<Option<Mask>> = (0..sl.support_count())
        .map(|i| {
            if keep >> i & 1 == 0 {
                return Some(0);
            }
            let m = ring.image(e, ext.base_maximal()[ext.msupp()[i]].ideal.elements());
            lbase.index_of(&m).ok().and_then(|k| lext.mask_of(k))
        })
        .collect();
    log.check("surviving ideals stay supported", remap.iter().all(Option::is_some), String::new);
    for x in sl.subsets() {
        let y = x & keep;
        let lx = ring.image(e, ext.elements(table[x as usize]));
        let ly = ring.image(e, ext.elements(table[y as usize]));
        log.check("localized splitter depends only on surviving ideals", lx == ly, || format!("{:?}", sl.names_of(x)));
        if remap.iter().all(Option::is_some) {
            let ymask = bits(y).fold(0, |acc, i| acc | remap[i].unwrap());
            let found = sigma(lsl, ymask).map(|k| lext.elements(k).clone());
            log.check("localized splitter is the splitter of the localization", found.as_ref() == Some(&lx), || {
                format!("{:?}", sl.names_of(x))
            });
        }
    }
    Ok(log)
}

/// Restriction, quotient (by zero and by the conductor) and localization laws together.
pub fn splitter_compat_suite(ext: &Extension, limits: Limits) -> Result<CheckLog, SplitterError> {
    let mut log = restriction_law(ext)?;
    let ring = ext.ring();
    let zero = ring.span(&[]);
    log.merge(quotient_law(ext, &zero, limits)?);
    let c = ext.conductor(ext.bottom(), ext.top());
    log.merge(quotient_law(ext, c.elements(), limits)?);
    for &m in ext.msupp() {
        log.merge(localization_law(ext, &[m], limits)?);
    }
    if ext.msupp().len() > 1 {
        log.merge(localization_law(ext, ext.msupp(), limits)?);
    }
    Ok(log)
}

/// `[R, σ(M)] → [R_M, S_M]`, `T ↦ T_M`.
pub fn crucial_fiber_iso(ext: &Extension, local: &LocalLattices, bit: usize) -> Result<IsoReport, SplitterError> {
    let table = require_b(ext.supported())?;
    let l = ext.order();
    let (dom, _) = positions(l, ext.bottom(), table[1 << bit]);
    let loc = &local.locals[bit];
    let map: Vec<Option<usize>> = dom.iter().map(|&t| Some(local.phi[t][bit])).collect();
    Ok(IsoReport::evaluate(
        format!("phi_{}", ext.supported().names[bit]),
        &map,
        loc.len(),
        |a, b| l.leq(dom[a], dom[b]),
        |a, b| loc.order().leq(a, b),
    ))
}

/// Ring-level chain census: each step is crucial at an ideal lying over the added one.
pub fn splitter_chains_in(ext: &Extension) -> Result<ChainCensus, SplitterError> {
    let sl = ext.supported();
    let mut census = splitter_chains(sl)?;
    let r = ext.bottom();
    let mut crucial = true;
    for (order, chain) in splitter_chain_list(sl)? {
        for (k, &i) in order.iter().enumerate() {
            let (a, b) = (chain[k], chain[k + 1]);
            let supp = ext.support(a, a, b).maximal;
            crucial &= supp.len() == 1 && ext.contraction(a, supp[0], r) == Some(ext.msupp()[i]);
        }
    }
    census.steps_crucial = Some(crucial);
    Ok(census)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourWay {
    pub every_element_splits: bool,
    pub locally_minimal: bool,
    pub b_and_power_count: bool,
    pub boolean_and_arithmetic: bool,
    pub agree: bool,
    /// When all hold, `ℓ[R,S] = |MSupp(S/R)|`.
    pub length_matches: Option<bool>,
}

pub fn all_splitters_equivalence(ext: &Extension, local: &LocalLattices) -> Result<FourWay, SplitterError> {
    let sl = ext.supported();
    let l = ext.order();
    let n = sl.support_count();
    let every = (0..l.len()).all(|t| sl.is_split_at(t));
    let locally_minimal = local.sizes().iter().all(|&k| k == 2);
    let b = is_b_extension(ext, local)?;
    let power = n < usize::BITS as usize && l.len() == 1 << n;
    let b_power = b.phi_bijective == Some(true) && power;
    let arithmetic = local.locals.iter().all(|x| x.order().is_chained());
    let boolean = l.is_boolean(crate::interval::DEFAULT_LATTICE_CAP).unwrap_or(false);
    let ba = boolean && arithmetic;
    let agree = every == locally_minimal && every == b_power && every == ba;
    let length_matches = (every && agree).then(|| l.length() == n);
    Ok(FourWay {
        every_element_splits: every,
        locally_minimal,
        b_and_power_count: b_power,
        boolean_and_arithmetic: ba,
        agree,
        length_matches,
    })
}

/// Local-global properties with a closure inside an integral extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureProperty {
    Subintegral,
    InfraIntegral,
}

impl FromStr for ClosureProperty {
    type Err = SplitterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "subintegral" => Ok(ClosureProperty::Subintegral),
            "infra-integral" | "infraintegral" => Ok(ClosureProperty::InfraIntegral),
            _ => Err(SplitterError::UnknownProperty(s.to_string())),
        }
    }
}

impl ClosureProperty {
    pub fn holds(self, ext: &Extension, a: usize, b: usize) -> bool {
        match self {
            ClosureProperty::Subintegral => ext.is_subintegral(a, b),
            ClosureProperty::InfraIntegral => ext.is_infra_integral(a, b),
        }
    }

    pub fn closure(self, ext: &Extension) -> usize {
        let cd = ext.canonical_decomposition();
        match self {
            ClosureProperty::Subintegral => cd.seminormalization,
            ClosureProperty::InfraIntegral => cd.t_closure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureSplitReport {
    pub property: ClosureProperty,
    /// Supported ideals where the localized extension has the property.
    pub subset: Vec<String>,
    pub sigma: usize,
    pub closure: usize,
    pub contained: bool,
    pub split_at_closure: bool,
    /// `σ(X) = closure` exactly when the extension splits at the closure.
    pub equality_iff_split: bool,
    /// When split, the complement is the least `W` with `W ⊆ S` having the property.
    pub least_co_extension: Option<bool>,
    /// The extension has the property iff every `R ⊆ σ(M)` has it.
    pub local_global: bool,
}

impl ClosureSplitReport {
    pub fn holds(&self) -> bool {
        self.contained && self.equality_iff_split && self.least_co_extension != Some(false) && self.local_global
    }
}

pub fn closure_splitter_check(
    ext: &Extension,
    local: &LocalLattices,
    property: ClosureProperty,
) -> Result<ClosureSplitReport, SplitterError> {
    let sl = ext.supported();
    let table = require_b(sl)?;
    let l = ext.order();
    let (r, s) = (ext.bottom(), ext.top());
    let x: Mask = local
        .locals
        .iter()
        .enumerate()
        .filter(|(_, loc)| property.holds(loc, loc.bottom(), loc.top()))
        .fold(0, |acc, (i, _)| acc | 1 << i);
    let sx = table[x as usize];
    let closure = property.closure(ext);
    let split = sl.is_split_at(closure);
    let least = split.then(|| {
        let o = table[(sl.full() & !sl.lower[closure]) as usize];
        let good: Vec<usize> = (0..ext.len()).filter(|&w| property.holds(ext, w, s)).collect();
        good.contains(&o) && good.iter().all(|&w| l.leq(o, w))
    });
    let whole = property.holds(ext, r, s);
    let pieces = (0..sl.support_count()).all(|i| property.holds(ext, r, table[1 << i]));
    Ok(ClosureSplitReport {
        property,
        subset: sl.names_of(x),
        sigma: sx,
        closure,
        contained: l.leq(sx, closure),
        split_at_closure: split,
        equality_iff_split: (sx == closure) == split,
        least_co_extension: least,
        local_global: whole == pieces,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosswiseReport {
    pub exchange: Option<usize>,
    pub interval: Vec<usize>,
    pub holds: bool,
}

/// For minimal steps `a ⊂ b ⊂ c` whose crucial ideals do not nest, a second route
/// `a ⊂ b' ⊂ c` exists with the types swapped, and `[a, c]` has exactly four elements.
pub fn crosswise_exchange_check(
    ext: &Extension,
    a: usize,
    b: usize,
    c: usize,
) -> Result<CrosswiseReport, SplitterError> {
    let lower = ext.minimal_type(a, b)?;
    let upper = ext.minimal_type(b, c)?;
    let mut p = upper.crucial_ideal.elements().clone();
    p.intersect_with(ext.elements(a));
    if &p == lower.crucial_ideal.elements() {
        return Err(SplitterError::HypothesisNotMet(format!(
            "upper crucial ideal contracts into the lower one ({:?})",
            members(&p)
        )));
    }
    let l = ext.order();
    let interval = l.interval(a, c);
    let exchange = interval.iter().copied().find(|&d| {
        d != b
            && l.is_cover(a, d)
            && l.is_cover(d, c)
            && ext.minimal_type(a, d).is_ok_and(|x| x.kind == upper.kind)
            && ext.minimal_type(d, c).is_ok_and(|x| x.kind == lower.kind)
    });
    let holds = exchange.is_some() && interval.len() == 4;
    Ok(CrosswiseReport { exchange, interval, holds })
}

/// Every splitter law on one extension, as used by the acceptance suite.
pub fn splitter_suite(ext: &Extension, limits: Limits) -> Result<CheckLog, SplitterError> {
    let sl = ext.supported();
    let l = ext.order();
    let mut log = CheckLog::new();
    let table = splitter_table(sl)?;
    for rec in &table {
        log.check("splitter exists", rec.sigma.is_some(), || format!("{:?}", rec.subset));
        log.check("splitter is unique", rec.candidates <= 1, || format!("{:?}", rec.subset));
    }
    let local = LocalLattices::new(ext, limits)?;
    let b = is_b_extension(ext, &local)?;
    log.check("B-extension criteria agree", b.agree, || format!("{b:?}"));
    log.check("finite extension is a B-extension", b.phi_bijective == Some(true) && b.all_splitters, String::new);
    log.check("length is the sum of local lengths", b.length_identity == Some(true), String::new);
    if !b.all_splitters {
        return Ok(log);
    }
    log.merge(splitter_algebra_suite(sl)?);
    for x in sl.subsets() {
        let q = splitter_via_quotient_rings(ext, x)?;
        log.check("splitter is an intersection of large quotient rings", q.intersection_matches, || {
            format!("{:?}", q.subset)
        });
        log.check("large quotient ring avoiding X is the opposite splitter", q.avoiding_matches, || {
            format!("{:?}", q.subset)
        });
    }
    for pc in primary_decomposition(ext)? {
        log.check("large quotient ring is supported at one ideal", pc.primary, || pc.name.clone());
        log.check("primary decomposition is irredundant", pc.irredundant, || pc.name.clone());
    }
    for t in 0..ext.len() {
        if !sl.is_split_at(t) {
            continue;
        }
        let iso = split_isomorphism_suite(sl, t);
        let bad = iso.violations();
        log.check("split point isomorphisms", bad.is_empty(), || format!("at {t}: {}", bad.join(", ")));
        let comp = complement_analysis(ext, t);
        let bad = comp.violations();
        log.check("complement and polar", bad.is_empty(), || format!("at {t}: {}", bad.join(", ")));
    }
    for e in elementary_splitters(sl)? {
        log.check("elementary splitter laws", e.holds(), || e.name.clone());
    }
    log.merge(splitter_compat_suite(ext, limits)?);
    if sl.support_count() > 1 {
        let census = splitter_chains_in(ext)?;
        log.check("splitter chain census", census.holds(), || format!("{census:?}"));
    }
    for i in 0..sl.support_count() {
        let iso = crucial_fiber_iso(ext, &local, i)?;
        log.check("crucial fiber isomorphism", iso.is_isomorphism(), || format!("{}: {:?}", iso.map, iso.witness));
    }
    let ps = pinched_vs_split(sl);
    log.check("pinch points carry no proper splitter", ps.holds, || format!("{ps:?}"));
    if l.len() <= 64 {
        let four = all_splitters_equivalence(ext, &local)?;
        log.check("all-splitters conditions agree", four.agree && four.length_matches != Some(false), || {
            format!("{four:?}")
        });
    }
    Ok(log)
}
