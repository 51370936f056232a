//! Acceptance criteria 1 to 9, one line each.

use std::time::{Duration, Instant};

use ringlat::analysis::{analyze, load_fixture, AnalyzeOptions};
use ringlat::composite::{authored_report, prufer_hull_via_conductor};
use ringlat::fixtures;
use ringlat::poset::{antichain_profile, b_extension_criterion, chained_criterion, SupportPoset};
use ringlat::splitter::{all_splitters_equivalence, split_isomorphism_suite, splitter_suite, LocalLattices};
use ringlat::{Extension, Limits};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn extensions() -> Vec<Extension> {
    fixtures::finite_extensions(Limits::default()).unwrap()
}

fn ring_fixture_four_elements() -> Outcome {
    let start = Instant::now();
    let e = fixtures::extension("decomposed-then-ramified", Limits::default()).map_err(|e| e.to_string())?;
    ensure(e.len() == 4, || format!("{} elements", e.len()))?;
    let ring = e.ring();
    // T is the interior element containing a nontrivial idempotent, i.e. F2 x F2
    let t = (0..e.len())
        .filter(|&t| t != e.bottom() && t != e.top())
        .find(|&t| e.elements(t).ones().any(|x| x != 0 && x != ring.one() as usize && ring.is_idempotent(x as u32)))
        .ok_or("no interior element with an idempotent")?;
    let suite = split_isomorphism_suite(e.supported(), t);
    ensure(suite.psi.is_bijection(), || "psi is not bijective at T".into())?;
    ensure(!e.supported().is_split_at(t), || "split at T".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("4 elements, psi bijective at T, not split (order-preserving: {})", suite.psi.order_preserving))
}

fn two_maxima_poset() -> Outcome {
    let start = Instant::now();
    let p = fixtures::poset("two-maxima-over-one-prime").map_err(|e| e.to_string())?;
    let profile = antichain_profile(&p);
    ensure(profile.counts == [3, 1], || format!("profile {:?}", profile.counts))?;
    ensure(profile.predicted_size == 5, || format!("size {}", profile.predicted_size))?;
    let b = b_extension_criterion(&p).map_err(|e| e.to_string())?;
    ensure(!b.is_b(), || "B-criterion holds".into())?;
    ensure(b.product_formula == 9 && !b.product_matches, || format!("product {}", b.product_formula))?;
    ensure(b.sum_formula == 4 && !b.sum_matches, || format!("sum {}", b.sum_formula))?;
    within(start, Duration::from_secs(1))?;
    Ok("profile (3,1), size 5, not B, product 9 and sum 4 both mismatch".into())
}

fn quasi_prufer_lattice() -> Outcome {
    let start = Instant::now();
    let l = fixtures::labeled("quasi-prufer-not-split").map_err(|e| e.to_string())?;
    let r = authored_report(&l);
    ensure(r.size == 6, || format!("size {}", r.size))?;
    let census = r.census.as_ref().ok_or("no census")?;
    let tallies: Vec<usize> = census.stated.iter().map(|s| s.computed).collect();
    ensure(tallies == [2, 4], || format!("tallies {tallies:?}"))?;
    ensure(census.stated.iter().all(|s| s.stated == s.computed), || "stated tallies differ".into())?;
    ensure(tallies.iter().sum::<usize>() == r.size, || "tallies do not add up to the size".into())?;
    let s = &r.almost_prufer.sandwich;
    ensure((s.lower_bound, s.size, s.upper_bound) == (5, 6, 8), || format!("sandwich {s:?}"))?;
    ensure(s.within && s.size < s.upper_bound, || "sandwich fails".into())?;
    ensure(!s.pinched, || "pinched at the integral closure".into())?;
    ensure(!r.almost_prufer.almost_prufer, || "split at the integral closure".into())?;
    within(start, Duration::from_secs(1))?;
    Ok("size 6, tallies 2 + 4, 5 <= 6 < 8, not pinched, not split".into())
}

fn splitter_laws() -> Outcome {
    let start = Instant::now();
    let mut evaluations = 0;
    let mut count = 0;
    for e in extensions().into_iter().filter(|e| e.elements(e.top()).count_ones(..) <= 256) {
        let log = splitter_suite(&e, Limits::default()).map_err(|x| format!("{}: {x}", e.name()))?;
        ensure(log.passed(), || format!("{}: {:?}", e.name(), log.failure_summary()))?;
        evaluations += log.evaluations();
        count += 1;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{count} fixtures, {evaluations} law evaluations, no violations"))
}

fn four_way() -> Outcome {
    let (mut yes, mut no) = (Vec::new(), Vec::new());
    for e in extensions() {
        let local = LocalLattices::new(&e, Limits::default()).map_err(|x| x.to_string())?;
        let f = all_splitters_equivalence(&e, &local).map_err(|x| x.to_string())?;
        ensure(f.agree && f.length_matches != Some(false), || format!("{}: {f:?}", e.name()))?;
        if f.every_element_splits {
            yes.push(e.name().to_string())
        } else {
            no.push(e.name().to_string())
        }
    }
    for name in ["f2^2-in-f4^2", "f2^3-in-f4^3"] {
        ensure(yes.iter().any(|n| n == name), || format!("{name} should satisfy all four"))?;
    }
    for name in ["f2-in-f16", "diagonal-f2^3"] {
        ensure(no.iter().any(|n| n == name), || format!("{name} should satisfy none"))?;
    }
    ensure(yes.len() + no.len() >= 6, || "too few fixtures".into())?;
    Ok(format!("{} fixtures agree, {} true and {} false", yes.len() + no.len(), yes.len(), no.len()))
}

fn hull_via_conductor() -> Outcome {
    let exts = extensions();
    for e in &exts {
        let h = prufer_hull_via_conductor(e);
        ensure(h.violations().is_empty(), || format!("{}: {:?}", e.name(), h.violations()))?;
    }
    Ok(format!("{} fixtures, no violations", exts.len()))
}

fn closure_criteria() -> Outcome {
    let exts = extensions();
    for e in &exts {
        ensure(e.seminormal_criterion().agrees(), || format!("{}: seminormal", e.name()))?;
        ensure(e.t_closed_criterion().agrees(), || format!("{}: t-closed", e.name()))?;
    }
    let d = fixtures::extension("diagonal-f2^3", Limits::default()).map_err(|x| x.to_string())?;
    let m = d.msupp()[0];
    let p = d.seminormal_infraintegral_profile(m).map_err(|x| x.to_string())?;
    ensure(p.holds && p.length == 2 && p.v_top == 3, || format!("{p:?}"))?;
    ensure(p.quotient_size == p.residue_size.pow(3), || format!("{p:?}"))?;
    Ok(format!("{} fixtures agree; diagonal F2^3 has n = 2, 3 maximal ideals, (R/M)^3", exts.len()))
}

fn random_trees() -> Outcome {
    let start = Instant::now();
    let mut b_count = 0;
    let trees = 240;
    for seed in 0..trees {
        let p = SupportPoset::random_tree(1 + (seed as usize % 12), seed);
        let b = b_extension_criterion(&p).map_err(|x| x.to_string())?;
        ensure(b.agrees(), || format!("seed {seed}: {b:?}"))?;
        ensure(b.product_matches == b.is_b(), || format!("seed {seed}: product formula"))?;
        b_count += usize::from(b.is_b());
    }
    let linear = (1..=12).map(SupportPoset::chain).chain((0..20).map(|s| SupportPoset::random_chains(6, s)));
    for p in linear {
        let c = chained_criterion(&p);
        let b = b_extension_criterion(&p).map_err(|x| x.to_string())?;
        ensure(!c.linear || b.is_b(), || format!("{} is chained but not B", p.name()))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{trees} trees agree ({b_count} B); chained implies B"))
}

fn determinism() -> Outcome {
    let mut count = 0;
    for f in fixtures::catalogue() {
        let once = || -> Result<String, String> {
            let l = load_fixture(f.name, Limits::default()).map_err(|x| x.to_string())?;
            let r = analyze(&l, &AnalyzeOptions::default(), Some(f.name)).map_err(|x| x.to_string())?;
            ensure(r.passed(), || format!("{}: {:?}", f.name, r.failures()))?;
            Ok(r.to_json())
        };
        ensure(once()? == once()?, || format!("{} differs between runs", f.name))?;
        count += 1;
    }
    Ok(format!("{count} reports byte-identical across two runs"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("ring fixture with four intermediate rings", ring_fixture_four_elements),
        ("two maxima over one prime", two_maxima_poset),
        ("quasi-Pruefer lattice not split at the closure", quasi_prufer_lattice),
        ("splitter laws on every fixture", splitter_laws),
        ("all-splitters four-way equivalence", four_way),
        ("Pruefer hull via the conductor", hull_via_conductor),
        ("closure criteria and seminormal profile", closure_criteria),
        ("random trees", random_trees),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
