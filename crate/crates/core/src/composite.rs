//! Quasi-Prüfer and almost-Prüfer analysis on labelled lattices.
//!
//! Two sources of labelled lattices: composites, which are products of a finite integral
//! extension and Prüfer components given by B-type support posets, and authored lattices
//! read from files. Composites split by construction, so the theorems are asserted there;
//! authored lattices are only reported on.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::{self, SpecError};
use crate::extension::Extension;
use crate::fixtures::{ExtensionSpec, FixtureError};
use crate::ideal::{conductor, large_quotient_ring, MultiplicativeSet};
use crate::interval::Limits;
use crate::lattice::{IsoReport, Lattice, LatticeError};
use crate::poset::{b_extension_criterion, PosetError, PosetSpec, SupportPoset};
use crate::splitter::{labeled_b_verdict, SplitterError};
use crate::support::{bits, CheckLog, Mask, SupportedLattice, MAX_SUPPORT};

/// Largest composite lattice that is built.
pub const COMPOSITE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositeError {
    #[error("a composite needs at least one component")]
    NoComponents,
    #[error("component label {0:?} is used twice")]
    NamespaceClash(String),
    #[error("component {label:?} is invalid: {reason}")]
    ComponentInvalid { label: String, reason: String },
    #[error("composite has {0} elements, above the cap {COMPOSITE_CAP}")]
    TooLarge(usize),
    #[error("more than {MAX_SUPPORT} supported maximal ideals")]
    TooManyMaximal,
    #[error("lattice has no almost-Pruefer pair flags")]
    MissingFlags,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Splitter(#[from] SplitterError),
}

/// A lattice `[R, S]` with support labels and the three designated closures.
#[derive(Debug, Clone)]
pub struct LabeledLattice {
    pub name: String,
    pub elements: Vec<String>,
    pub supported: SupportedLattice,
    /// `R̄`
    pub integral_closure: usize,
    /// `R̃`
    pub prufer_hull: usize,
    /// `R⃗`
    pub almost_prufer_closure: usize,
    /// Pairs `(T', T'')` in `[R,R̄] × [R̄,S]` with `T' ⊆ T''` almost-Prüfer.
    pub pairs: Option<Vec<(usize, usize)>>,
    /// `|[R_M, S_M]|` in mask order.
    pub local_sizes: Option<Vec<usize>>,
    /// Claimed `s`-tallies, keyed by element of `[R,R̄]`.
    pub stated_s: Vec<(usize, usize)>,
    pub ring_backed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Labels {
    #[serde(default)]
    pub lower: Vec<String>,
    #[serde(default)]
    pub upper: Vec<String>,
}

/// File form of a labelled lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledLatticeFile {
    pub name: String,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    pub maximal_ideals: Vec<String>,
    pub labels: BTreeMap<String, Labels>,
    pub integral_closure: String,
    pub prufer_hull: String,
    pub almost_prufer_closure: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub almost_prufer_pairs: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_sizes: Option<BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub s_values: BTreeMap<String, usize>,
}

impl LabeledLattice {
    pub fn lattice(&self) -> &Lattice {
        &self.supported.lattice
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.lattice().bottom()
    }

    pub fn top(&self) -> usize {
        self.lattice().top()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// Reads and validates a lattice file; errors carry the line of the offending token.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let file: LabeledLatticeFile = diag::parse(text)?;
        Self::from_file(&file, text)
    }

    fn from_file(f: &LabeledLatticeFile, text: &str) -> Result<Self, SpecError> {
        let at = |tok: &str, msg: String| SpecError::at_token(text, tok, msg);
        if f.elements.is_empty() {
            return Err(SpecError::at_key(text, "elements", "no elements"));
        }
        let mut index = HashMap::new();
        for (i, e) in f.elements.iter().enumerate() {
            if index.insert(e.as_str(), i).is_some() {
                return Err(at(e, format!("duplicate element {e:?}")));
            }
        }
        let find = |e: &str| index.get(e).copied().ok_or_else(|| at(e, format!("unknown element {e:?}")));
        let covers = f.covers.iter().map(|(a, b)| Ok((find(a)?, find(b)?))).collect::<Result<Vec<_>, _>>()?;
        let lattice = Lattice::from_covers(f.elements.len(), &covers).map_err(|e| {
            let name = match e {
                LatticeError::Cyclic(i) | LatticeError::NoMeet(i, _) | LatticeError::NoJoin(i, _) => &f.elements[i],
                _ => "covers",
            };
            let msg = match e {
                LatticeError::NoMeet(i, j) => format!("{:?} and {:?} have no meet", f.elements[i], f.elements[j]),
                LatticeError::NoJoin(i, j) => format!("{:?} and {:?} have no join", f.elements[i], f.elements[j]),
                other => other.to_string(),
            };
            at(name, msg)
        })?;
        if f.maximal_ideals.len() > MAX_SUPPORT {
            return Err(SpecError::at_key(text, "maximal_ideals", "too many maximal ideals"));
        }
        let mut ideal = HashMap::new();
        for (i, m) in f.maximal_ideals.iter().enumerate() {
            if ideal.insert(m.as_str(), i).is_some() {
                return Err(at(m, format!("duplicate maximal ideal {m:?}")));
            }
        }
        let mask = |names: &[String]| -> Result<Mask, SpecError> {
            names.iter().try_fold(0, |acc, m| match ideal.get(m.as_str()) {
                Some(&i) => Ok(acc | 1 << i),
                None => Err(at(m, format!("unknown maximal ideal {m:?}"))),
            })
        };
        for key in f.labels.keys() {
            find(key)?;
        }
        let n = f.elements.len();
        let (mut lower, mut upper) = (vec![0; n], vec![0; n]);
        for (i, e) in f.elements.iter().enumerate() {
            let l = f.labels.get(e).ok_or_else(|| at(e, format!("element {e:?} has no labels")))?;
            lower[i] = mask(&l.lower)?;
            upper[i] = mask(&l.upper)?;
        }
        let supported = SupportedLattice { lattice, names: f.maximal_ideals.clone(), lower, upper };
        let l = &supported.lattice;
        let full = supported.full();
        let (r, s) = (l.bottom(), l.top());
        let name = |i: usize| f.elements[i].as_str();
        if supported.lower[r] != 0 || supported.upper[r] != full {
            return Err(at(name(r), "the bottom must have lower label {} and upper label all ideals".into()));
        }
        if supported.lower[s] != full || supported.upper[s] != 0 {
            return Err(at(name(s), "the top must have lower label all ideals and upper label {}".into()));
        }
        if let Some(&t) = supported.union_law_violations().first() {
            return Err(at(name(t), format!("labels of {:?} do not cover every maximal ideal", name(t))));
        }
        for &(a, b) in l.covers() {
            let (la, lb, ua, ub) = (supported.lower[a], supported.lower[b], supported.upper[a], supported.upper[b]);
            if la & !lb != 0 || ub & !ua != 0 {
                return Err(at(name(b), format!("labels are not monotone from {:?} to {:?}", name(a), name(b))));
            }
        }
        let closure = find(&f.integral_closure)?;
        let hull = find(&f.prufer_hull)?;
        let apc = find(&f.almost_prufer_closure)?;
        if !l.leq(hull, apc) || !l.leq(closure, apc) || l.join(closure, hull) != apc {
            return Err(SpecError::at_key(
                text,
                "almost_prufer_closure",
                "the almost-Pruefer closure must be the join of the integral closure and the Pruefer hull",
            ));
        }
        let pairs = match &f.almost_prufer_pairs {
            None => None,
            Some(ps) => {
                let mut out = Vec::new();
                for (a, b) in ps {
                    let (x, y) = (find(a)?, find(b)?);
                    if !l.leq(x, closure) || !l.leq(closure, y) {
                        return Err(at(b, format!("pair ({a:?}, {b:?}) is not in [R, R̄] x [R̄, S]")));
                    }
                    out.push((x, y));
                }
                out.sort_unstable();
                out.dedup();
                Some(out)
            }
        };
        let local_sizes = match &f.local_sizes {
            None => None,
            Some(map) => {
                for k in map.keys() {
                    if !ideal.contains_key(k.as_str()) {
                        return Err(at(k, format!("unknown maximal ideal {k:?}")));
                    }
                }
                let sizes = f
                    .maximal_ideals
                    .iter()
                    .map(|m| {
                        map.get(m)
                            .copied()
                            .ok_or_else(|| SpecError::at_key(text, "local_sizes", format!("no local size for {m:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(sizes)
            }
        };
        let mut stated_s = Vec::new();
        for (e, &v) in &f.s_values {
            let i = find(e)?;
            if !l.leq(i, closure) {
                return Err(at(e, format!("{e:?} is not below the integral closure")));
            }
            stated_s.push((i, v));
        }
        stated_s.sort_unstable();
        Ok(LabeledLattice {
            name: f.name.clone(),
            elements: f.elements.clone(),
            supported,
            integral_closure: closure,
            prufer_hull: hull,
            almost_prufer_closure: apc,
            pairs,
            local_sizes,
            stated_s,
            ring_backed: false,
        })
    }

    pub fn to_file(&self) -> LabeledLatticeFile {
        let sl = &self.supported;
        let e = |i: usize| self.elements[i].clone();
        LabeledLatticeFile {
            name: self.name.clone(),
            elements: self.elements.clone(),
            covers: sl.lattice.covers().iter().map(|&(a, b)| (e(a), e(b))).collect(),
            maximal_ideals: sl.names.clone(),
            labels: (0..self.len())
                .map(|i| (e(i), Labels { lower: sl.names_of(sl.lower[i]), upper: sl.names_of(sl.upper[i]) }))
                .collect(),
            integral_closure: e(self.integral_closure),
            prufer_hull: e(self.prufer_hull),
            almost_prufer_closure: e(self.almost_prufer_closure),
            almost_prufer_pairs: self.pairs.as_ref().map(|p| p.iter().map(|&(a, b)| (e(a), e(b))).collect()),
            local_sizes: self.local_sizes.as_ref().map(|s| sl.names.iter().cloned().zip(s.iter().copied()).collect()),
            s_values: self.stated_s.iter().map(|&(i, v)| (e(i), v)).collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        let sl = &self.supported;
        let notes: Vec<Option<String>> = (0..self.len())
            .map(|i| {
                let mut tags = Vec::new();
                for (t, tag) in [
                    (self.integral_closure, "closure"),
                    (self.prufer_hull, "hull"),
                    (self.almost_prufer_closure, "ap-closure"),
                ] {
                    if t == i {
                        tags.push(tag);
                    }
                }
                let labels =
                    format!("{{{}}} / {{{}}}", sl.names_of(sl.lower[i]).join(","), sl.names_of(sl.upper[i]).join(","));
                Some(if tags.is_empty() { labels } else { format!("{labels} [{}]", tags.join(",")) })
            })
            .collect();
        crate::dot::hasse(&self.name, &self.elements, sl.lattice.covers(), &notes)
    }
}

/// The part of a composite contributed by one factor.
#[derive(Debug, Clone)]
pub enum ComponentKind {
    /// A finite extension; finite extensions are integral.
    Integral(Box<Extension>),
    /// A Prüfer extension known only through a B-type support poset.
    PruferB(SupportPoset),
}

#[derive(Debug, Clone)]
pub struct Component {
    pub label: String,
    pub kind: ComponentKind,
    lattice: Lattice,
    elements: Vec<String>,
    /// Supported maximal ideals, unprefixed.
    maximal: Vec<String>,
    /// Chain sizes `2 + ht(M_i/P_i)` for Prüfer components.
    chains: Vec<usize>,
}

fn decode(mut x: usize, radix: &[usize]) -> Vec<usize> {
    let mut v = vec![0; radix.len()];
    for (slot, &n) in v.iter_mut().zip(radix).rev() {
        *slot = x % n;
        x /= n;
    }
    v
}

fn encode(coords: &[usize], radix: &[usize]) -> usize {
    coords.iter().zip(radix).fold(0, |acc, (&c, &n)| acc * n + c)
}

impl Component {
    pub fn integral(label: impl Into<String>, ext: Extension) -> Self {
        let lattice = ext.order().clone();
        let (r, s) = (ext.bottom(), ext.top());
        let elements = (0..ext.len())
            .map(|i| match i {
                _ if i == r => "R".to_string(),
                _ if i == s => "S".to_string(),
                _ => format!("T{i}"),
            })
            .collect();
        let maximal = ext.supported().names.clone();
        Component {
            label: label.into(),
            kind: ComponentKind::Integral(Box::new(ext)),
            lattice,
            elements,
            maximal,
            chains: Vec::new(),
        }
    }

    /// A Prüfer component; the poset must be a tree satisfying the B-criterion.
    pub fn prufer(label: impl Into<String>, poset: SupportPoset) -> Result<Self, CompositeError> {
        let label = label.into();
        let invalid = |reason: String| CompositeError::ComponentInvalid { label: label.clone(), reason };
        let verdict = b_extension_criterion(&poset).map_err(|e| invalid(e.to_string()))?;
        if !verdict.is_b() {
            return Err(invalid("support poset fails the B-criterion".into()));
        }
        let chains: Vec<usize> = verdict.heights.iter().map(|h| h.height + 2).collect();
        let total: usize = chains.iter().product();
        if total > COMPOSITE_CAP {
            return Err(CompositeError::TooLarge(total));
        }
        let lattice =
            Lattice::from_order(total, |a, b| decode(a, &chains).iter().zip(decode(b, &chains)).all(|(x, y)| *x <= y))?;
        let elements =
            (0..total).map(|i| decode(i, &chains).iter().map(usize::to_string).collect::<Vec<_>>().join(".")).collect();
        let maximal = verdict.heights.iter().map(|h| h.maximal.clone()).collect();
        Ok(Component { label, kind: ComponentKind::PruferB(poset), lattice, elements, maximal, chains })
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_integral(&self) -> bool {
        matches!(self.kind, ComponentKind::Integral(_))
    }

    /// `MSupp_R(b/a)` over this component's maximal ideals.
    pub fn relative_support(&self, a: usize, b: usize) -> Mask {
        match &self.kind {
            ComponentKind::Integral(ext) => ext
                .support(ext.bottom(), a, b)
                .maximal
                .iter()
                .map(|&m| ext.mask_of(m).expect("support within MSupp(S/R)"))
                .fold(0, |acc, m| acc | m),
            ComponentKind::PruferB(_) => {
                let (ca, cb) = (decode(a, &self.chains), decode(b, &self.chains));
                (0..self.chains.len()).filter(|&i| ca[i] != cb[i]).fold(0, |acc, i| acc | 1 << i)
            }
        }
    }

    /// `|Supp_R(b/a)|`, primes of every height. Finite rings have only maximal primes; in a
    /// Prüfer chain each step up passes one prime.
    pub fn prime_support(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            ComponentKind::Integral(_) => self.relative_support(a, b).count_ones() as usize,
            ComponentKind::PruferB(_) => {
                let (ca, cb) = (decode(a, &self.chains), decode(b, &self.chains));
                ca.iter().zip(&cb).map(|(x, y)| y.abs_diff(*x)).sum()
            }
        }
    }

    /// `|[a_M, b_M]|` at the maximal ideal of mask bit `bit`.
    pub fn local_size(&self, a: usize, b: usize, bit: usize) -> usize {
        match &self.kind {
            ComponentKind::Integral(ext) => {
                let e = ext.support_idempotent(bit);
                let ring = ext.ring();
                let mut seen: Vec<_> =
                    self.lattice.interval(a, b).into_iter().map(|t| ring.image(e, ext.elements(t))).collect();
                seen.sort_by(crate::ring::canonical_cmp);
                seen.dedup();
                seen.len()
            }
            ComponentKind::PruferB(_) => decode(b, &self.chains)[bit] - decode(a, &self.chains)[bit] + 1,
        }
    }
}

/// A finite product of components, with its labelled lattice.
#[derive(Debug, Clone)]
pub struct Composite {
    pub components: Vec<Component>,
    radix: Vec<usize>,
    offsets: Vec<usize>,
    pub labeled: LabeledLattice,
}

pub fn build_composite(name: impl Into<String>, components: Vec<Component>) -> Result<Composite, CompositeError> {
    if components.is_empty() {
        return Err(CompositeError::NoComponents);
    }
    for (i, c) in components.iter().enumerate() {
        if components[..i].iter().any(|d| d.label == c.label) {
            return Err(CompositeError::NamespaceClash(c.label.clone()));
        }
    }
    let radix: Vec<usize> = components.iter().map(Component::len).collect();
    let total = radix.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n).filter(|&p| p <= COMPOSITE_CAP));
    let total = total.ok_or(CompositeError::TooLarge(COMPOSITE_CAP + 1))?;
    let mut offsets = Vec::new();
    let mut names = Vec::new();
    for c in &components {
        offsets.push(names.len());
        names.extend(c.maximal.iter().map(|m| format!("{}:{m}", c.label)));
    }
    if names.len() > MAX_SUPPORT {
        return Err(CompositeError::TooManyMaximal);
    }
    let lattice = Lattice::from_order(total, |a, b| {
        let (ca, cb) = (decode(a, &radix), decode(b, &radix));
        components.iter().enumerate().all(|(i, c)| c.lattice.leq(ca[i], cb[i]))
    })?;
    let elements = (0..total)
        .map(|x| {
            let cs = decode(x, &radix);
            components
                .iter()
                .zip(&cs)
                .map(|(c, &i)| format!("{}:{}", c.label, c.elements[i]))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let pick =
        |f: &dyn Fn(&Component) -> usize| -> usize { encode(&components.iter().map(f).collect::<Vec<_>>(), &radix) };
    let closure = pick(&|c| if c.is_integral() { c.lattice.top() } else { c.lattice.bottom() });
    let hull = pick(&|c| if c.is_integral() { c.lattice.bottom() } else { c.lattice.top() });
    let mut composite = Composite {
        components,
        radix,
        offsets,
        labeled: LabeledLattice {
            name: name.into(),
            elements,
            supported: SupportedLattice { lattice, names, lower: Vec::new(), upper: Vec::new() },
            integral_closure: closure,
            prufer_hull: hull,
            almost_prufer_closure: 0,
            pairs: None,
            local_sizes: None,
            stated_s: Vec::new(),
            ring_backed: true,
        },
    };
    let l = composite.labeled.lattice().clone();
    let (r, s) = (l.bottom(), l.top());
    composite.labeled.almost_prufer_closure = l.join(closure, hull);
    composite.labeled.supported.lower = (0..total).map(|t| composite.relative_support(r, t)).collect();
    composite.labeled.supported.upper = (0..total).map(|t| composite.relative_support(t, s)).collect();
    let below = l.interval(r, closure);
    let above = l.interval(closure, s);
    composite.labeled.pairs = Some(below.iter().flat_map(|&a| above.iter().map(move |&b| (a, b))).collect());
    let bits_total = composite.labeled.supported.names.len();
    composite.labeled.local_sizes = Some((0..bits_total).map(|bit| composite.local_size(r, s, bit)).collect());
    Ok(composite)
}

impl Composite {
    pub fn coords(&self, t: usize) -> Vec<usize> {
        decode(t, &self.radix)
    }

    fn component_of_bit(&self, bit: usize) -> (usize, usize) {
        let c = self.offsets.iter().rposition(|&o| o <= bit).expect("bit in range");
        (c, bit - self.offsets[c])
    }

    /// `MSupp_R(b/a)` for `a ≤ b`, componentwise.
    pub fn relative_support(&self, a: usize, b: usize) -> Mask {
        let (ca, cb) = (self.coords(a), self.coords(b));
        self.components
            .iter()
            .enumerate()
            .fold(0, |acc, (i, c)| acc | c.relative_support(ca[i], cb[i]) << self.offsets[i])
    }

    /// `|Supp_R(b/a)|` counting primes of every height.
    pub fn prime_support(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        self.components.iter().enumerate().map(|(i, c)| c.prime_support(ca[i], cb[i])).sum()
    }

    pub fn local_size(&self, a: usize, b: usize, bit: usize) -> usize {
        let (c, local) = self.component_of_bit(bit);
        self.components[c].local_size(self.coords(a)[c], self.coords(b)[c], local)
    }

    /// `[a, b]` as a supported lattice over `MSupp_R(b/a)`, with its local sizes.
    pub fn interval_supported(&self, a: usize, b: usize) -> (SupportedLattice, Vec<usize>) {
        let l = self.labeled.lattice();
        let (sub, elems) = l.sublattice(a, b);
        let support = self.relative_support(a, b);
        let used: Vec<usize> = bits(support).collect();
        let squeeze = |m: Mask| used.iter().enumerate().fold(0, |acc, (i, &bit)| acc | (m >> bit & 1) << i);
        let names = used.iter().map(|&bit| self.labeled.supported.names[bit].clone()).collect();
        let lower = elems.iter().map(|&t| squeeze(self.relative_support(a, t))).collect();
        let upper = elems.iter().map(|&t| squeeze(self.relative_support(t, b))).collect();
        let sizes = used.iter().map(|&bit| self.local_size(a, b, bit)).collect();
        (SupportedLattice { lattice: sub, names, lower, upper }, sizes)
    }
}

fn interval_map(l: &Lattice, name: &str, dom: &[usize], cod: &[usize], f: impl Fn(usize) -> usize) -> IsoReport {
    let map: Vec<Option<usize>> = dom.iter().map(|&x| cod.iter().position(|&y| y == f(x))).collect();
    IsoReport::evaluate(name, &map, cod.len(), |a, b| l.leq(dom[a], dom[b]), |a, b| l.leq(cod[a], cod[b]))
}

/// `T ↦ (T ∧ mid, T ∨ mid)` from `dom` into `[lo, mid] × [mid, hi]`.
fn pair_map(l: &Lattice, name: &str, dom: &[usize], lo: usize, mid: usize, hi: usize) -> IsoReport {
    let a = l.interval(lo, mid);
    let b = l.interval(mid, hi);
    let map: Vec<Option<usize>> = dom
        .iter()
        .map(|&t| {
            let i = a.iter().position(|&x| x == l.meet(t, mid))?;
            let j = b.iter().position(|&x| x == l.join(t, mid))?;
            Some(i * b.len() + j)
        })
        .collect();
    IsoReport::evaluate(
        name,
        &map,
        a.len() * b.len(),
        |x, y| l.leq(dom[x], dom[y]),
        |x, y| l.leq(a[x / b.len()], a[y / b.len()]) && l.leq(b[x % b.len()], b[y % b.len()]),
    )
}

/// `(T, T') ↦ T ∨ T'` from `[lo, p] × [lo, q]` into `[lo, hi]`.
fn join_map(l: &Lattice, name: &str, lo: usize, p: usize, q: usize, hi: usize) -> IsoReport {
    let a = l.interval(lo, p);
    let b = l.interval(lo, q);
    let cod = l.interval(lo, hi);
    let map: Vec<Option<usize>> =
        (0..a.len() * b.len()).map(|x| cod.iter().position(|&y| y == l.join(a[x / b.len()], b[x % b.len()]))).collect();
    IsoReport::evaluate(
        name,
        &map,
        cod.len(),
        |x, y| l.leq(a[x / b.len()], a[y / b.len()]) && l.leq(b[x % b.len()], b[y % b.len()]),
        |x, y| l.leq(cod[x], cod[y]),
    )
}

/// The size sandwich around the integral closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sandwich {
    pub lower_bound: usize,
    pub size: usize,
    pub upper_bound: usize,
    pub within: bool,
    /// Every element comparable to `R̄`; true when `R̄` is an endpoint.
    pub pinched: bool,
    pub lower_equality: bool,
    pub upper_equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureLemma {
    /// `R⃗ ≠ R̄`
    pub closure_differs: bool,
    /// `MSupp(R̄/R) ≠ MSupp(S/R)`
    pub supports_differ: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostPruferReport {
    pub lattice: String,
    pub ring_backed: bool,
    pub size: usize,
    /// `|[R,R̄]|`
    pub below_closure: usize,
    /// `|[R̄,S]|`
    pub above_closure: usize,
    /// `|[R,R̃]|`
    pub below_hull: usize,
    /// `|[R̃,S]|`
    pub above_hull: usize,
    /// Split at `R̄`.
    pub almost_prufer: bool,
    /// `S = R⃗`
    pub top_is_closure: bool,
    pub split_at_hull: bool,
    /// `R = R̄ ∧ R̃` and `S = R̄ ∨ R̃`
    pub meet_join: bool,
    /// Every `U` with `R = R̄ ∧ U` and `S = R̄ ∨ U`.
    pub partners: Vec<String>,
    pub psi: IsoReport,
    /// `|[R,S]| = |[R,R̄]| |[R̄,S]|`
    pub psi_count: bool,
    /// `MSupp(R̄/R) = MSupp(S/R̃)`
    pub closure_support_swap: bool,
    /// `MSupp(R̃/R) = MSupp(S/R̄)`
    pub hull_support_swap: bool,
    pub psi1: IsoReport,
    pub psi1_prime: IsoReport,
    pub theta: IsoReport,
    /// The eight equivalent conditions, in order.
    pub conditions: Vec<bool>,
    pub sandwich: Sandwich,
    /// Only evaluated when `R̄ ≠ S`.
    pub closure_lemma: Option<ClosureLemma>,
    /// `ψ`, `ψ'`, `ψ1`, `ψ'1` and `θ` restricted to `[R, R⃗]`.
    pub on_closure: Vec<IsoReport>,
    /// `MSupp(R⃗/R) = MSupp(R̃/R) ∪ MSupp(R̄/R)`
    pub closure_support_union: bool,
}

impl AlmostPruferReport {
    /// Failed equivalences and consequences.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let ap = self.almost_prufer;
        let equivalents = [
            ("S is the almost-Pruefer closure", self.top_is_closure),
            ("split at the Pruefer hull", self.split_at_hull),
            ("R and S are meet and join of closure and hull", self.meet_join),
            ("some complement of the closure exists", !self.partners.is_empty()),
            ("psi is an isomorphism", self.psi.is_isomorphism()),
            ("count identity at the closure", self.psi_count),
        ];
        for (what, val) in equivalents {
            if val != ap {
                v.push(format!("{what} is {val} but almost-Pruefer is {ap}"));
            }
        }
        for (i, &c) in self.conditions.iter().enumerate() {
            if c != ap {
                v.push(format!("condition ({}) is {c} but almost-Pruefer is {ap}", i + 1));
            }
        }
        if ap {
            if self.partners.len() != 1 {
                v.push(format!("complements of the closure are {:?}, expected only the hull", self.partners));
            }
            if !self.closure_support_swap || !self.hull_support_swap {
                v.push("support swap fails".into());
            }
        }
        let s = &self.sandwich;
        if !s.within {
            v.push(format!("{} <= {} <= {} fails", s.lower_bound, s.size, s.upper_bound));
        }
        if s.lower_equality != s.pinched {
            v.push("lower bound equality disagrees with pinching".into());
        }
        if s.upper_equality != ap {
            v.push("upper bound equality disagrees with splitting".into());
        }
        if let Some(c) = &self.closure_lemma {
            if c.closure_differs != c.supports_differ {
                v.push("closure differs but supports agree, or the reverse".into());
            }
        }
        for iso in &self.on_closure {
            if !iso.is_isomorphism() {
                v.push(format!("{} on [R, R->] is not an isomorphism", iso.map));
            }
        }
        if !self.closure_support_union {
            v.push("support of the almost-Pruefer closure is not the union".into());
        }
        v
    }
}

pub fn almost_prufer_suite(ll: &LabeledLattice) -> AlmostPruferReport {
    let l = ll.lattice();
    let sl = &ll.supported;
    let (r, s) = (l.bottom(), l.top());
    let (c, h, apc) = (ll.integral_closure, ll.prufer_hull, ll.almost_prufer_closure);
    let size = l.len();
    let below_closure = l.interval_size(r, c);
    let above_closure = l.interval_size(c, s);
    let below_hull = l.interval_size(r, h);
    let above_hull = l.interval_size(h, s);
    let all: Vec<usize> = (0..size).collect();
    let psi = pair_map(l, "psi", &all, r, c, s);
    let psi1 = interval_map(l, "psi1", &l.interval(r, h), &l.interval(c, s), |t| l.join(t, c));
    let psi1_prime = interval_map(l, "psi1'", &l.interval(r, c), &l.interval(h, s), |t| l.join(t, h));
    let theta = join_map(l, "theta", r, h, c, s);
    let almost_prufer = sl.is_split_at(c);
    let conditions = vec![
        almost_prufer,
        sl.upper[c] == sl.lower[h],
        psi1.is_isomorphism(),
        psi1_prime.is_isomorphism(),
        theta.is_isomorphism(),
        size == below_hull * below_closure,
        below_hull == above_closure,
        below_closure == above_hull,
    ];
    let pinched = c == r || c == s || l.is_pinched_at(c).unwrap_or(true);
    let lower_bound = below_closure + above_closure - 1;
    let upper_bound = below_closure * above_closure;
    let sandwich = Sandwich {
        lower_bound,
        size,
        upper_bound,
        within: lower_bound <= size && size <= upper_bound,
        pinched,
        lower_equality: lower_bound == size,
        upper_equality: upper_bound == size,
    };
    let closure_lemma =
        (c != s).then(|| ClosureLemma { closure_differs: apc != c, supports_differ: sl.lower[c] != sl.full() });
    let in_apc = l.interval(r, apc);
    let on_closure = vec![
        pair_map(l, "psi", &in_apc, r, c, apc),
        pair_map(l, "psi'", &in_apc, r, h, apc),
        interval_map(l, "psi1", &l.interval(r, h), &l.interval(c, apc), |t| l.join(t, c)),
        interval_map(l, "psi1'", &l.interval(r, c), &l.interval(h, apc), |t| l.join(t, h)),
        join_map(l, "theta", r, h, c, apc),
    ];
    AlmostPruferReport {
        lattice: ll.name.clone(),
        ring_backed: ll.ring_backed,
        size,
        below_closure,
        above_closure,
        below_hull,
        above_hull,
        almost_prufer,
        top_is_closure: apc == s,
        split_at_hull: sl.is_split_at(h),
        meet_join: l.meet(c, h) == r && l.join(c, h) == s,
        partners: (0..size)
            .filter(|&u| l.meet(c, u) == r && l.join(c, u) == s)
            .map(|u| ll.elements[u].clone())
            .collect(),
        psi_count: size == below_closure * above_closure,
        closure_support_swap: sl.lower[c] == sl.upper[h],
        hull_support_swap: sl.lower[h] == sl.upper[c],
        psi,
        psi1,
        psi1_prime,
        theta,
        conditions,
        sandwich,
        closure_lemma,
        on_closure,
        closure_support_union: sl.lower[apc] == sl.lower[h] | sl.lower[c],
    }
}

/// Relative-support identities on `[R, R⃗]`, which labels relative to `R` and `S` cannot express.
pub fn closure_support_identities(c: &Composite) -> CheckLog {
    let ll = &c.labeled;
    let r = ll.bottom();
    let (cl, h, apc) = (ll.integral_closure, ll.prufer_hull, ll.almost_prufer_closure);
    let mut log = CheckLog::new();
    log.check("MSupp(R->/R~) = MSupp(R-/R)", c.relative_support(h, apc) == c.relative_support(r, cl), String::new);
    log.check("MSupp(R->/R-) = MSupp(R~/R)", c.relative_support(cl, apc) == c.relative_support(r, h), String::new);
    log
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub element: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatedTally {
    pub element: String,
    pub stated: usize,
    pub computed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCensus {
    pub size: usize,
    pub flagged: usize,
    /// `T ↦ (T ∧ R̄, T ∨ R̄)` onto the flagged pairs.
    pub psi: IsoReport,
    /// Per element of `[R̄,S]`, the flagged pairs ending there.
    pub r: Vec<Tally>,
    /// Per element of `[R,R̄]`, the flagged pairs starting there.
    pub s: Vec<Tally>,
    pub r_sum: usize,
    pub s_sum: usize,
    pub stated: Vec<StatedTally>,
    /// When `R⃗ ≠ R̄ ≠ S`: `[R̄,R⃗]` is exactly the set of `T'` flagged with `R`.
    pub closure_interval_matches: Option<bool>,
}

impl PairCensus {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.psi.is_isomorphism() {
            v.push(format!("psi onto flagged pairs: {}", self.psi.witness.clone().unwrap_or_default()));
        }
        if self.r_sum != self.size || self.s_sum != self.size {
            v.push(format!("tallies sum to {} and {}, not {}", self.r_sum, self.s_sum, self.size));
        }
        for t in &self.stated {
            if t.stated != t.computed {
                v.push(format!("s at {} is {} but {} was stated", t.element, t.computed, t.stated));
            }
        }
        if self.closure_interval_matches == Some(false) {
            v.push("interval above the closure differs from the pairs flagged with R".into());
        }
        v
    }
}

pub fn psi_pair_census(ll: &LabeledLattice) -> Result<PairCensus, CompositeError> {
    let pairs = ll.pairs.as_ref().ok_or(CompositeError::MissingFlags)?;
    let l = ll.lattice();
    let (r, s, c) = (l.bottom(), l.top(), ll.integral_closure);
    let map: Vec<Option<usize>> =
        (0..l.len()).map(|t| pairs.iter().position(|&p| p == (l.meet(t, c), l.join(t, c)))).collect();
    let psi = IsoReport::evaluate(
        "psi",
        &map,
        pairs.len(),
        |a, b| l.leq(a, b),
        |x, y| l.leq(pairs[x].0, pairs[y].0) && l.leq(pairs[x].1, pairs[y].1),
    );
    let tally = |elems: Vec<usize>, pick: fn(&(usize, usize)) -> usize| -> Vec<Tally> {
        elems
            .into_iter()
            .map(|e| Tally { element: ll.elements[e].clone(), count: pairs.iter().filter(|p| pick(p) == e).count() })
            .collect()
    };
    let r_t = tally(l.interval(c, s), |p| p.1);
    let s_t = tally(l.interval(r, c), |p| p.0);
    let stated = ll
        .stated_s
        .iter()
        .map(|&(i, v)| StatedTally {
            element: ll.elements[i].clone(),
            stated: v,
            computed: pairs.iter().filter(|p| p.0 == i).count(),
        })
        .collect();
    let apc = ll.almost_prufer_closure;
    let closure_interval_matches = (apc != c && c != s).then(|| {
        let mut from_r: Vec<usize> = pairs.iter().filter(|p| p.0 == r).map(|p| p.1).collect();
        from_r.sort_unstable();
        from_r == l.interval(c, apc)
    });
    Ok(PairCensus {
        size: l.len(),
        flagged: pairs.len(),
        psi,
        r_sum: r_t.iter().map(|t| t.count).sum(),
        s_sum: s_t.iter().map(|t| t.count).sum(),
        r: r_t,
        s: s_t,
        stated,
        closure_interval_matches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthReport {
    /// `ℓ[R,R̃]`
    pub hull: usize,
    /// `ℓ[R,R̄]`
    pub closure: usize,
    /// `ℓ[R̃,R⃗]`
    pub hull_to_apc: usize,
    /// `ℓ[R̄,R⃗]`
    pub closure_to_apc: usize,
    /// `ℓ[R,R⃗]`
    pub apc: usize,
    /// `ℓ[R,R̃] = ℓ[R̄,R⃗]` and `ℓ[R,R̄] = ℓ[R̃,R⃗]`
    pub swapped_lengths: bool,
    /// `ℓ[R,R⃗]` splits additively through both closures.
    pub additive: bool,
    /// `|Supp(R⃗/R̄)|` and `|Supp(R̃/R)|`, when prime supports are known.
    pub prime_supports: Option<(usize, usize)>,
    pub supports_match: Option<bool>,
}

impl LengthReport {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.swapped_lengths {
            v.push("lengths across the closures differ".into());
        }
        if !self.additive {
            v.push("length of [R, R->] is not additive".into());
        }
        if self.supports_match == Some(false) {
            v.push(format!("prime supports {:?} do not match length {}", self.prime_supports, self.hull));
        }
        v
    }
}

pub fn length_suite(ll: &LabeledLattice, composite: Option<&Composite>) -> LengthReport {
    let l = ll.lattice();
    let r = l.bottom();
    let (c, h, apc) = (ll.integral_closure, ll.prufer_hull, ll.almost_prufer_closure);
    let len = |a: usize, b: usize| l.height(a, b).expect("designations are ordered");
    let (hull, closure, hull_to_apc, closure_to_apc, total) =
        (len(r, h), len(r, c), len(h, apc), len(c, apc), len(r, apc));
    let prime_supports = composite.map(|k| (k.prime_support(c, apc), k.prime_support(r, h)));
    LengthReport {
        hull,
        closure,
        hull_to_apc,
        closure_to_apc,
        apc: total,
        swapped_lengths: hull == closure_to_apc && closure == hull_to_apc,
        additive: total == hull + hull_to_apc && total == closure + closure_to_apc,
        prime_supports,
        supports_match: prime_supports.map(|(a, b)| a == closure_to_apc && b == hull && a == b),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementSplit {
    pub complemented: Vec<usize>,
    /// Complemented elements that do not split.
    pub not_split: Vec<usize>,
}

/// On a Prüfer lattice, every complemented element should be a splitter.
pub fn complemented_implies_splitter(sl: &SupportedLattice) -> ComplementSplit {
    let complemented: Vec<usize> = (0..sl.lattice.len()).filter(|&t| !sl.lattice.complements(t).is_empty()).collect();
    let not_split = complemented.iter().copied().filter(|&t| !sl.is_split_at(t)).collect();
    ComplementSplit { complemented, not_split }
}

impl Composite {
    /// `[R, R̃]` with supports relative to its own ends.
    pub fn prufer_part(&self) -> SupportedLattice {
        self.interval_supported(self.labeled.bottom(), self.labeled.prufer_hull).0
    }
}

impl Component {
    /// The component's own lattice with its labels.
    pub fn supported(&self) -> SupportedLattice {
        let (r, s) = (self.lattice.bottom(), self.lattice.top());
        let n = self.len();
        SupportedLattice {
            lattice: self.lattice.clone(),
            names: self.maximal.clone(),
            lower: (0..n).map(|t| self.relative_support(r, t)).collect(),
            upper: (0..n).map(|t| self.relative_support(t, s)).collect(),
        }
    }
}

/// Both cancellation corollaries, exhaustively.
pub fn cancellation_suite(ll: &LabeledLattice) -> CheckLog {
    let l = ll.lattice();
    let r = l.bottom();
    let (c, h, apc) = (ll.integral_closure, ll.prufer_hull, ll.almost_prufer_closure);
    let mut log = CheckLog::new();
    let name = |i: usize| ll.elements[i].clone();
    let mut cancel = |law: &str, dom: Vec<usize>, f: &dyn Fn(usize) -> usize| {
        for &u in &dom {
            for &v in &dom {
                if u < v {
                    log.check(law, f(u) != f(v), || format!("{} and {}", name(u), name(v)));
                }
            }
        }
    };
    cancel("join with closure cancels on [R, R~]", l.interval(r, h), &|u| l.join(u, c));
    cancel("meet with closure cancels on [R~, R->]", l.interval(h, apc), &|u| l.meet(u, c));
    cancel("join with hull cancels on [R, R-]", l.interval(r, c), &|u| l.join(u, h));
    cancel("meet with hull cancels on [R-, R->]", l.interval(c, apc), &|u| l.meet(u, h));
    for t in l.interval(r, c) {
        for u in l.interval(r, h) {
            cancel("join with integral T cancels on [R, U]", l.interval(r, u), &|v| l.join(v, t));
            cancel("meet with Pruefer U cancels on [T, TU]", l.interval(t, l.join(t, u)), &|v| l.meet(v, u));
        }
    }
    log
}

/// B-extension heredity: from `R̄ ⊆ S` up to `R ⊆ S`, and from `R ⊆ S` down to every `R ⊆ T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeredityReport {
    pub whole: bool,
    pub above_closure: bool,
    pub upward_holds: bool,
    pub lower_intervals: usize,
    pub lower_intervals_b: usize,
    pub downward_holds: bool,
    /// The splitter count and the product-size count agreed on every interval.
    pub verdicts_agree: bool,
}

pub fn b_heredity(c: &Composite) -> Result<HeredityReport, CompositeError> {
    let ll = &c.labeled;
    let (r, s) = (ll.bottom(), ll.top());
    let mut agree = true;
    let mut b = |a: usize, z: usize| -> Result<bool, CompositeError> {
        let (sl, sizes) = c.interval_supported(a, z);
        let v = labeled_b_verdict(&sl, Some(&sizes))?;
        agree &= v.agree;
        Ok(v.phi_bijective == Some(true))
    };
    let whole = b(r, s)?;
    let above_closure = b(ll.integral_closure, s)?;
    let mut lower_b = 0;
    for t in 0..ll.len() {
        if b(r, t)? {
            lower_b += 1;
        }
    }
    Ok(HeredityReport {
        whole,
        above_closure,
        upward_holds: !above_closure || whole,
        lower_intervals: ll.len(),
        lower_intervals_b: lower_b,
        downward_holds: !whole || lower_b == ll.len(),
        verdicts_agree: agree,
    })
}

/// Large quotient rings against the conductor on a finite extension, where `R̄ = S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HullViaConductor {
    pub extension: String,
    /// `|(R:S)|`
    pub conductor_size: usize,
    /// `R_[1+(R:S)] = R`
    pub one_plus_conductor: bool,
    /// `∩_{M ∈ MSupp(S/R)} R_[M] = R`
    pub intersection: bool,
    /// `R_[1+(R:T)] = R` for every `T` in `]R, S]`, the quotient ring taken inside `T`.
    pub proper: Vec<(usize, bool)>,
    /// The same quotient rings taken inside `S`; informational, these can exceed `R`.
    pub proper_in_top: Vec<(usize, bool)>,
    /// `R_[{1}] = R`, evaluated when the conductor is zero.
    pub zero_conductor: Option<bool>,
}

impl HullViaConductor {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.one_plus_conductor {
            v.push("R_[1+(R:S)] differs from R".to_string());
        }
        if !self.intersection {
            v.push("intersection of the R_[M] differs from R".to_string());
        }
        for &(t, ok) in &self.proper {
            if !ok {
                v.push(format!("R_[1+(R:T)] differs from R at T = {t}"));
            }
        }
        if self.zero_conductor == Some(false) {
            v.push("R_[1] differs from R".to_string());
        }
        v
    }
}

pub fn prufer_hull_via_conductor(ext: &Extension) -> HullViaConductor {
    let ring = ext.ring();
    let (r, s) = (ext.bottom(), ext.top());
    let (re, se) = (ext.elements(r), ext.elements(s));
    let base = ext.decomposition(r);
    let quotient_in = |sigma: MultiplicativeSet, top: &crate::ring::ElemSet| {
        let sigma = sigma.resolve(ring, base).expect("1 + I and complements of primes are multiplicative");
        large_quotient_ring(ring, re, top, &sigma)
    };
    let quotient = |sigma: MultiplicativeSet| quotient_in(sigma, se);
    let one_plus_in = |t: usize, top: usize| {
        quotient_in(MultiplicativeSet::OnePlus(conductor(ring, re, ext.elements(t))), ext.elements(top))
    };
    let one_plus_at = |t: usize| one_plus_in(t, t);
    let ideal = conductor(ring, re, se);
    let mut inter = se.clone();
    for &m in ext.msupp() {
        inter.intersect_with(&quotient(MultiplicativeSet::Avoiding(vec![m])));
    }
    let zero = ideal.len() == 1;
    HullViaConductor {
        extension: ext.name().to_string(),
        conductor_size: ideal.len(),
        one_plus_conductor: &one_plus_at(s) == re,
        intersection: &inter == re,
        proper: (0..ext.len()).filter(|&t| t != r).map(|t| (t, &one_plus_at(t) == re)).collect(),
        proper_in_top: (0..ext.len()).filter(|&t| t != r).map(|t| (t, &one_plus_in(t, s) == re)).collect(),
        zero_conductor: zero.then(|| &quotient(MultiplicativeSet::Explicit(vec![ring.one()])) == re),
    }
}

/// On a composite, the designated closures agree with the joins of the elements that move
/// only Prüfer (resp. only integral) coordinates.
pub fn composite_closure_bookkeeping(c: &Composite) -> CheckLog {
    let ll = &c.labeled;
    let l = ll.lattice();
    let mut log = CheckLog::new();
    let join_where = |keep: &dyn Fn(&Component) -> bool| {
        (0..ll.len())
            .filter(|&t| {
                let co = c.coords(t);
                c.components.iter().zip(&co).all(|(comp, &x)| keep(comp) || x == comp.lattice.bottom())
            })
            .fold(l.bottom(), |acc, t| l.join(acc, t))
    };
    let hull = join_where(&|comp| !comp.is_integral());
    let closure = join_where(&Component::is_integral);
    log.check("Pruefer hull is the join of Pruefer-only elements", hull == ll.prufer_hull, || {
        ll.elements[hull].clone()
    });
    log.check("integral closure is the join of integral-only elements", closure == ll.integral_closure, || {
        ll.elements[closure].clone()
    });
    log
}

/// File form of a composite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeSpec {
    pub name: String,
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ComponentSpec {
    Integral { label: String, extension: ExtensionSpec },
    Prufer { label: String, poset: PosetSpec },
}

impl CompositeSpec {
    pub fn build(&self, limits: Limits) -> Result<Composite, CompositeError> {
        let comps = self
            .components
            .iter()
            .map(|c| match c {
                ComponentSpec::Integral { label, extension } => {
                    Ok(Component::integral(label, extension.build(limits)?))
                }
                ComponentSpec::Prufer { label, poset } => Component::prufer(label, SupportPoset::from_spec(poset)?),
            })
            .collect::<Result<Vec<_>, CompositeError>>()?;
        build_composite(self.name.clone(), comps)
    }

    pub fn parse(text: &str, limits: Limits) -> Result<Composite, SpecError> {
        let spec: CompositeSpec = diag::parse(text)?;
        spec.build(limits).map_err(|e| match &e {
            CompositeError::NamespaceClash(l) | CompositeError::ComponentInvalid { label: l, .. } => {
                SpecError::at_token(text, l, e.to_string())
            }
            _ => SpecError::at_key(text, "components", e.to_string()),
        })
    }
}

/// Every composite check with its verdicts; `failures` lists what broke.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositeReport {
    pub name: String,
    pub size: usize,
    pub almost_prufer: AlmostPruferReport,
    pub census: PairCensus,
    pub lengths: LengthReport,
    pub complemented: ComplementSplit,
    pub heredity: HeredityReport,
    pub laws: CheckLog,
    pub failures: Vec<String>,
}

pub fn composite_suite(c: &Composite) -> Result<CompositeReport, CompositeError> {
    let ll = &c.labeled;
    let almost_prufer = almost_prufer_suite(ll);
    let census = psi_pair_census(ll)?;
    let lengths = length_suite(ll, Some(c));
    let complemented = complemented_implies_splitter(&c.prufer_part());
    let heredity = b_heredity(c)?;
    let mut laws = cancellation_suite(ll);
    laws.merge(closure_support_identities(c));
    laws.merge(composite_closure_bookkeeping(c));
    let mut failures = almost_prufer.violations();
    if !almost_prufer.almost_prufer {
        failures.push("composite is not almost-Pruefer".into());
    }
    failures.extend(census.violations());
    failures.extend(lengths.violations());
    if !complemented.not_split.is_empty() {
        failures.push(format!("complemented but not split: {:?}", complemented.not_split));
    }
    if !heredity.upward_holds || !heredity.downward_holds || !heredity.verdicts_agree {
        failures.push("B-extension heredity fails".into());
    }
    failures.extend(laws.failure_summary());
    Ok(CompositeReport {
        name: ll.name.clone(),
        size: ll.len(),
        almost_prufer,
        census,
        lengths,
        complemented,
        heredity,
        laws,
        failures,
    })
}

/// Report on an authored lattice: axioms were checked on load, theorem predicates are only
/// computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuthoredReport {
    pub name: String,
    pub banner: &'static str,
    pub size: usize,
    pub almost_prufer: AlmostPruferReport,
    pub census: Option<PairCensus>,
    pub lengths: LengthReport,
    pub b_extension: Option<crate::splitter::BVerdict>,
    pub laws: CheckLog,
    /// Predicates that came out false; findings, not errors.
    pub findings: Vec<String>,
}

pub const AUTHORED_BANNER: &str = "authored fixture, not ring-backed";

pub fn authored_report(ll: &LabeledLattice) -> AuthoredReport {
    let almost_prufer = almost_prufer_suite(ll);
    let census = psi_pair_census(ll).ok();
    let lengths = length_suite(ll, None);
    let b_extension = labeled_b_verdict(&ll.supported, ll.local_sizes.as_deref()).ok();
    let laws = cancellation_suite(ll);
    let mut findings = almost_prufer.violations();
    if let Some(c) = &census {
        findings.extend(c.violations());
    }
    findings.extend(lengths.violations());
    findings.extend(laws.failure_summary());
    AuthoredReport {
        name: ll.name.clone(),
        banner: AUTHORED_BANNER,
        size: ll.len(),
        almost_prufer,
        census,
        lengths,
        b_extension,
        laws,
        findings,
    }
}
