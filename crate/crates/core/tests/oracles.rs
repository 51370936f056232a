//! Brute-force oracles, independent of the library's algorithms, checked against it.

use ringlat::fixtures;
use ringlat::poset::{antichain_profile, SupportPoset};
use ringlat::{Elem, ElemSet, Extension, FiniteRing, Limits};

/// Fixtures small enough for subset scans over `S ∖ R`.
fn small_extensions() -> Vec<Extension> {
    fixtures::finite_extensions(Limits::default())
        .unwrap()
        .into_iter()
        .filter(|e| {
            let s = e.elements(e.top()).count_ones(..);
            let r = e.elements(e.bottom()).count_ones(..);
            s - r <= 14
        })
        .collect()
}

fn members(set: &ElemSet) -> Vec<Elem> {
    set.ones().map(|x| x as Elem).collect()
}

fn closed_subring(ring: &FiniteRing, set: &ElemSet) -> bool {
    let m = members(set);
    set.contains(ring.one() as usize)
        && m.iter()
            .all(|&a| m.iter().all(|&b| set.contains(ring.add(a, b) as usize) && set.contains(ring.mul(a, b) as usize)))
}

/// Every subring between `R` and `S`, by scanning all subsets of `S ∖ R`.
fn all_subrings(ring: &FiniteRing, r: &ElemSet, s: &ElemSet) -> Vec<ElemSet> {
    let free: Vec<usize> = s.ones().filter(|&x| !r.contains(x)).collect();
    let mut found = Vec::new();
    for bits in 0u32..1 << free.len() {
        let mut set = r.clone();
        for (i, &x) in free.iter().enumerate() {
            if bits >> i & 1 == 1 {
                set.insert(x);
            }
        }
        if closed_subring(ring, &set) {
            found.push(set);
        }
    }
    found
}

#[test]
fn enumeration_matches_subset_scan() {
    let exts = small_extensions();
    assert!(exts.len() >= 10, "scan covers most fixtures");
    for e in exts {
        let ring = e.ring();
        let mut oracle = all_subrings(ring, e.elements(e.bottom()), e.elements(e.top()));
        let mut ours: Vec<ElemSet> = (0..e.len()).map(|t| e.elements(t).clone()).collect();
        assert_eq!(ours.len(), oracle.len(), "{}", e.name());
        let key = |s: &ElemSet| members(s);
        oracle.sort_by_key(key);
        ours.sort_by_key(key);
        assert_eq!(ours, oracle, "{}", e.name());
        // order is inclusion, and covers have nothing strictly between
        for a in 0..e.len() {
            for b in 0..e.len() {
                assert_eq!(e.order().leq(a, b), e.elements(a).is_subset(e.elements(b)), "{}", e.name());
            }
        }
        for &(a, b) in e.order().covers() {
            let between = (0..e.len()).filter(|&t| {
                t != a && t != b && e.elements(a).is_subset(e.elements(t)) && e.elements(t).is_subset(e.elements(b))
            });
            assert_eq!(between.count(), 0, "{}: cover {a} {b}", e.name());
        }
    }
}

/// Proper ideals of the subring `r`, by subset scan.
fn ideals(ring: &FiniteRing, r: &ElemSet) -> Vec<ElemSet> {
    let rm = members(r);
    let mut out = Vec::new();
    for bits in 0u32..1 << rm.len() {
        let mut set = ring.empty_set();
        for (i, &x) in rm.iter().enumerate() {
            if bits >> i & 1 == 1 {
                set.insert(x as usize);
            }
        }
        if !set.contains(0) || set.contains(ring.one() as usize) {
            continue;
        }
        let m = members(&set);
        let closed = m.iter().all(|&a| {
            m.iter().all(|&b| set.contains(ring.add(a, b) as usize))
                && rm.iter().all(|&x| set.contains(ring.mul(a, x) as usize))
        });
        if closed {
            out.push(set);
        }
    }
    out
}

#[test]
fn maximal_ideals_match_subset_scan() {
    for e in small_extensions().into_iter().filter(|e| e.elements(e.bottom()).count_ones(..) <= 16) {
        let ring = e.ring();
        let all = ideals(ring, e.elements(e.bottom()));
        let mut maximal: Vec<Vec<Elem>> =
            all.iter().filter(|i| !all.iter().any(|j| j != *i && i.is_subset(j))).map(members).collect();
        let mut ours: Vec<Vec<Elem>> = e.base_maximal().iter().map(|m| m.ideal.members()).collect();
        maximal.sort();
        ours.sort();
        assert_eq!(ours, maximal, "{}", e.name());
    }
}

#[test]
fn conductor_matches_definition() {
    for e in small_extensions() {
        let ring = e.ring();
        for (a, b) in [(e.bottom(), e.top())].into_iter().chain(e.order().covers().iter().copied()) {
            let (ta, tb) = (e.elements(a), e.elements(b));
            let oracle: Vec<Elem> = members(tb)
                .into_iter()
                .filter(|&x| tb.ones().all(|y| ta.contains(ring.mul(x, y as Elem) as usize)))
                .collect();
            assert_eq!(e.conductor(a, b).members(), oracle, "{}: ({a}, {b})", e.name());
        }
    }
}

/// Nonzero idempotents of `r` that are not sums of two orthogonal nonzero idempotents.
fn primitive_idempotents(ring: &FiniteRing, r: &ElemSet) -> Vec<Elem> {
    let idem: Vec<Elem> = members(r).into_iter().filter(|&x| x != 0 && ring.mul(x, x) == x).collect();
    idem.iter().copied().filter(|&e| !idem.iter().any(|&f| f != e && ring.mul(e, f) == f)).collect()
}

fn image(ring: &FiniteRing, e: Elem, set: &ElemSet) -> Vec<Elem> {
    let mut v: Vec<Elem> = set.ones().map(|x| ring.mul(e, x as Elem)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[test]
fn supports_match_idempotent_localization() {
    // localizing at a maximal ideal of a finite ring is multiplying by its primitive idempotent
    for e in fixtures::finite_extensions(Limits::default()).unwrap() {
        let ring = e.ring();
        let r = e.elements(e.bottom());
        let prims = primitive_idempotents(ring, r);
        assert_eq!(prims.len(), e.base_maximal().len(), "{}", e.name());
        let support =
            |a: &ElemSet, b: &ElemSet| prims.iter().filter(|&&p| image(ring, p, a) != image(ring, p, b)).count();
        let s = e.elements(e.top());
        assert_eq!(support(r, s), e.msupp().len(), "{}", e.name());
        let sl = e.supported();
        for t in 0..e.len() {
            let tt = e.elements(t);
            assert_eq!(support(r, tt), sl.lower[t].count_ones() as usize, "{}: lower {t}", e.name());
            assert_eq!(support(tt, s), sl.upper[t].count_ones() as usize, "{}: upper {t}", e.name());
        }
    }
}

/// Antichains by testing every subset of nodes.
fn antichain_scan(p: &SupportPoset) -> Vec<u128> {
    let n = p.len();
    let mut counts = vec![0u128; n + 1];
    for bits in 1u32..1 << n {
        let nodes: Vec<usize> = (0..n).filter(|i| bits >> i & 1 == 1).collect();
        let anti = nodes.iter().all(|&a| nodes.iter().all(|&b| a == b || !p.comparable(a, b)));
        if anti {
            counts[nodes.len()] += 1;
        }
    }
    while counts.len() > 2 && counts.last() == Some(&0) {
        counts.pop();
    }
    counts.remove(0);
    counts
}

#[test]
fn antichain_profile_matches_subset_scan() {
    let mut posets = vec![fixtures::poset("two-maxima-over-one-prime").unwrap(), SupportPoset::chains(&[3, 1, 2])];
    for seed in 0..40 {
        posets.push(SupportPoset::random_tree(1 + (seed as usize % 12), seed));
        posets.push(SupportPoset::random_chains(1 + (seed as usize % 10), seed));
    }
    for p in posets {
        let profile = antichain_profile(&p);
        let scan = antichain_scan(&p);
        assert_eq!(profile.counts, scan, "{}", p.name());
        assert_eq!(profile.predicted_size, 1 + scan.iter().sum::<u128>());
    }
}
