//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use mckay_core::borel::{brute_force_count, BorelParametrization, DEFAULT_BRUTE_FORCE_BOUND};
use mckay_core::lattice::{
    fixed_point_order, lang_quotient, smith_normal_form, AbelianEndomorphism, FiniteAbelianGroup, IntMatrix,
};
use mckay_core::matgrp::{GroupAutomorphism, DEFAULT_MAX_GROUP_ORDER};
use mckay_core::mckay::{borel_action_set, check_with_group, GroupSide, McKayReport, Verdict};
use mckay_core::rootdata::{build_root_datum, group_order_u64, RootDatum};
use mckay_core::twist::SplitFrobenius;
use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<String, String>;

fn datum(label: &str) -> RootDatum {
    build_root_datum(label.parse().unwrap()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() <= limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn brute_cases() -> Vec<(&'static str, u64, u32)> {
    vec![
        ("A1", 3, 1), ("A1", 2, 2), ("A1", 5, 1), ("A1", 7, 1), ("A1", 2, 3), ("A1", 3, 2), ("A1", 11, 1),
        ("A2", 2, 1), ("A2", 3, 1), ("A2", 2, 2), ("A2", 5, 1),
        ("C2", 3, 1), ("C2", 5, 1),
        ("A3", 3, 1),
    ]
}

fn closed_form() -> Outcome {
    let start = Instant::now();
    let mut frozen = BTreeMap::new();
    for (label, p, n) in brute_cases() {
        let d = datum(label);
        let q = p.pow(n);
        let bp = BorelParametrization::new(&d, p, n).map_err(|e| e.to_string())?;
        let fr = SplitFrobenius::standard(p, n).unwrap();
        let brute = brute_force_count(&d, &fr, DEFAULT_BRUTE_FORCE_BOUND).map_err(|e| e.to_string())?;
        ensure(brute.total == bp.total(), || format!("{label}({q}): formula {} brute {}", bp.total(), brute.total))?;
        frozen.insert((label, q), bp.total());
    }
    for q in [3u64, 4, 5, 7, 8, 9, 11] {
        let expect = if q % 2 == 1 { q + 3 } else { q };
        ensure(frozen[&("A1", q)] == expect as u128, || format!("A1({q}) = {}", frozen[&("A1", q)]))?;
    }
    ensure(frozen[&("C2", 3)] == 18, || "C2(3) != 18".into())?;
    ensure(frozen[&("A2", 4)] == 24, || "A2(4) != 24".into())?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} instances, {:.1?}", frozen.len(), start.elapsed()))
}

fn per_nu_uniform() -> Outcome {
    let mut checked = 0;
    for (label, p, n) in brute_cases() {
        let bp = BorelParametrization::new(&datum(label), p, n).map_err(|e| e.to_string())?;
        let z = bp.center().order() as u128;
        if z == 1 {
            continue;
        }
        for nu in bp.central_characters() {
            let c = bp.per_nu_count(&nu).map_err(|e| e.to_string())?;
            ensure(c * z == bp.total(), || format!("{label} {p}^{n} ν={nu}: {c} of {}", bp.total()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} central characters"))
}

struct Instance {
    name: &'static str,
    label: &'static str,
    p: u64,
    n: u32,
    group: GroupSide,
    report: McKayReport,
    elapsed: Duration,
}

fn instance(name: &'static str, label: &'static str, p: u64, n: u32) -> Result<Instance, String> {
    let start = Instant::now();
    let d = datum(label);
    let group = GroupSide::build(&d, p, n, DEFAULT_MAX_GROUP_ORDER).map_err(|e| format!("{name}: {e}"))?;
    let report = check_with_group(&d, p, n, &group).map_err(|e| format!("{name}: {e}"))?;
    Ok(Instance {
        name,
        label,
        p,
        n,
        group,
        report,
        elapsed: start.elapsed(),
    })
}

fn instances() -> Result<Vec<Instance>, String> {
    [
        ("SL2(3)", "A1", 3, 1),
        ("SL2(5)", "A1", 5, 1),
        ("SL2(7)", "A1", 7, 1),
        ("SL2(9)", "A1", 3, 2),
        ("Sp4(3)", "C2", 3, 1),
        ("SL3(4)", "A2", 2, 2),
    ]
    .into_iter()
    .map(|(name, label, p, n)| instance(name, label, p, n))
    .collect()
}

fn find<'a>(all: &'a [Instance], name: &str) -> &'a Instance {
    all.iter().find(|i| i.name == name).unwrap()
}

fn mckay_per_nu(all: &[Instance]) -> Outcome {
    for name in ["SL2(3)", "SL2(5)", "SL2(7)", "SL2(9)", "Sp4(3)"] {
        let inst = find(all, name);
        let q = inst.p.pow(inst.n);
        let expect = if inst.label == "A1" { (q + 3) / 2 } else { 9 };
        ensure(inst.report.per_nu.len() == 2, || format!("{name}: {} central characters", inst.report.per_nu.len()))?;
        for (nu, c) in &inst.report.per_nu {
            ensure(c.equal && c.group == c.borel, || format!("{name} ν={nu}: G {} B {}", c.group, c.borel))?;
            ensure(c.group == expect, || format!("{name} ν={nu}: {} != {expect}", c.group))?;
        }
    }
    within(Instant::now() - find(all, "Sp4(3)").elapsed, Duration::from_secs(600))?;
    Ok(format!("Sp4(3) end to end {:.1?}", find(all, "Sp4(3)").elapsed))
}

fn census_equal(all: &[Instance]) -> Outcome {
    for name in ["SL2(3)", "SL2(5)", "SL2(7)", "SL2(9)", "Sp4(3)"] {
        let inst = find(all, name);
        ensure(inst.report.census.len() == 2, || format!("{name}: census missing"))?;
        for (nu, c) in &inst.report.census {
            ensure(c.equal && c.n1 == c.n1p && c.nd == c.ndp, || format!("{name} ν={nu}: {c:?}"))?;
            if name == "SL2(5)" {
                ensure((c.n1, c.nd, c.d) == (2, 1, 2), || format!("SL2(5) ν={nu}: {c:?}"))?;
            }
        }
    }
    Ok("N1 = N1', Nd = Nd' on 5 groups".into())
}

fn frobenius_fixed(all: &[Instance]) -> Outcome {
    let sl29 = find(all, "SL2(9)");
    let fixed = sl29.report.fixed.get(&1).ok_or("SL2(9): no j = 1 census")?;
    let nontrivial = fixed.get("(1)").ok_or("SL2(9): no ν = (1) at j = 1")?;
    ensure(nontrivial.n1p == 0 && nontrivial.n1 == 0, || format!("SL2(9) j=1 μ=(1): {nontrivial:?}"))?;
    ensure(fixed.values().all(|c| c.equal), || format!("SL2(9) j=1: {fixed:?}"))?;

    let bp = BorelParametrization::new(&datum("A1"), 3, 3).map_err(|e| e.to_string())?;
    let set = borel_action_set(&bp).map_err(|e| e.to_string())?;
    let per_mu: BTreeSet<(u64, u64)> = bp
        .central_characters()
        .iter()
        .map(|mu| set.fixed_census(1, mu))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(per_mu.len() == 1, || format!("SL2(27) j=1: {per_mu:?}"))?;
    for mu in bp.central_characters() {
        let direct = (
            bp.fixed_label_census(1, 1, &mu).map_err(|e| e.to_string())?,
            bp.fixed_label_census(1, 2, &mu).map_err(|e| e.to_string())?,
        );
        ensure(per_mu.contains(&direct), || format!("SL2(27) μ={mu}: {direct:?}"))?;
    }
    Ok(format!("SL2(27) fixed (N1, N2) = {:?} for every μ", per_mu.first().unwrap()))
}

fn certificates(all: &[Instance]) -> Outcome {
    for name in ["SL2(3)", "SL2(5)", "SL2(9)", "Sp4(3)"] {
        let b = &find(all, name).report.bijection;
        ensure(b.certified && b.error.is_none(), || format!("{name}: {:?}", b.error))?;
        ensure(b.per_nu.len() == 2, || format!("{name}: {} bijections", b.per_nu.len()))?;
        for (nu, bij) in &b.per_nu {
            ensure(bij.delta_certificate && bij.gamma_certificate, || format!("{name} ν={nu}"))?;
        }
    }
    Ok("δ and γ certificates hold on 4 groups".into())
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-20i64..=20, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
    })
}

fn endomorphism() -> impl Strategy<Value = AbelianEndomorphism> {
    (
        proptest::collection::vec(1u64..=60, 1..=3),
        proptest::collection::vec(0i64..1000, 9),
    )
        .prop_filter_map("group too large or trivial", |(orders, ks)| {
            if orders.iter().product::<u64>() > 10_000 {
                return None;
            }
            let h = FiniteAbelianGroup::from_cyclic_orders(&orders);
            if h.is_trivial() {
                return None;
            }
            let d = h.invariant_factors().to_vec();
            let k = d.len();
            let rows: Vec<Vec<i64>> = (0..k)
                .map(|i| (0..k).map(|j| ks[i * 3 + j] * (d[i] / d[i].gcd(&d[j])) as i64).collect())
                .collect();
            AbelianEndomorphism::new(h, IntMatrix::from_rows(k, &rows)).ok()
        })
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config::with_cases(cases), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn property_suites(all: &[Instance]) -> Outcome {
    let start = Instant::now();
    runner(1000)
        .run(&matrix(), |m| {
            let s = smith_normal_form(&m);
            prop_assert!(s.verify());
            prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
            Ok(())
        })
        .map_err(|e| format!("SNF: {e}"))?;
    runner(500)
        .run(&endomorphism(), |phi| {
            let h = phi.group();
            let image: BTreeSet<_> = h.elements().iter().map(|x| phi.apply(x)).collect();
            let ker = h.elements().iter().filter(|x| phi.apply(x).iter().all(|&c| c == 0)).count() as u64;
            prop_assert_eq!(ker, h.order() / image.len() as u64);
            let shifted = phi.add(&AbelianEndomorphism::identity(h));
            prop_assert_eq!(fixed_point_order(&shifted), ker);
            prop_assert_eq!(lang_quotient(&shifted).order(), ker);
            Ok(())
        })
        .map_err(|e| format!("kernel/cokernel: {e}"))?;
    let mut tables = 0;
    let mut compositions = 0;
    for inst in all {
        let (g, t) = (&inst.group.group, &inst.group.table);
        t.check_orthogonality().map_err(|e| format!("{}: {e}", inst.name))?;
        let order = group_order_u64(g.datum(), inst.p.pow(inst.n)).unwrap().unwrap();
        let sum: u64 = t.degrees().iter().map(|d| d * d).sum();
        ensure(sum == order && t.order() == order, || format!("{}: Σd² = {sum}, |G| = {order}", inst.name))?;
        tables += 1;
        let gens: Vec<GroupAutomorphism> = std::iter::once(g.diagonal_automorphism())
            .chain((1..=inst.n).map(|j| g.field_automorphism(j).unwrap()))
            .collect();
        for a in &gens {
            for b in &gens {
                let pa = t.automorphism_action(g, a).map_err(|e| e.to_string())?;
                let pb = t.automorphism_action(g, b).map_err(|e| e.to_string())?;
                let pab = t.automorphism_action(g, &a.then(b)).map_err(|e| e.to_string())?;
                ensure(pab == compose(&pb, &pa), || format!("{}: action is not a homomorphism", inst.name))?;
                compositions += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("1000 SNF, 500 endomorphisms, {tables} tables, {compositions} compositions, {:.1?}", start.elapsed()))
}

fn prime_three(all: &[Instance]) -> Outcome {
    let inst = find(all, "SL3(4)");
    let r = &inst.report;
    ensure(r.center_order == 3, || format!("|Z^F| = {}", r.center_order))?;
    ensure(r.total.borel == 24 && r.total.equal, || format!("total {:?}", r.total))?;
    ensure(r.per_nu.len() == 3, || format!("{} central characters", r.per_nu.len()))?;
    for (nu, c) in &r.per_nu {
        ensure(c.borel == 8 && c.group == 8, || format!("ν={nu}: {c:?}"))?;
    }
    for (nu, c) in &r.census {
        ensure(c.equal && c.d == 3, || format!("ν={nu}: {c:?}"))?;
    }
    ensure(r.verdict == Verdict::Pass, || format!("failures: {:?}", r.failures))?;
    ensure(inst.elapsed <= Duration::from_secs(600), || format!("took {:.1?}", inst.elapsed))?;
    Ok(format!("8 per ν over 3 characters, {:.1?}", inst.elapsed))
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "Borel closed form vs brute force", closed_form()),
        (2, "per-ν uniformity", per_nu_uniform()),
    ];
    match instances() {
        Ok(all) => {
            results.push((3, "G vs B per central character", mckay_per_nu(&all)));
            results.push((4, "diagonal orbit censuses", census_equal(&all)));
            results.push((5, "Frobenius-fixed sub-censuses", frobenius_fixed(&all)));
            results.push((6, "equivariant bijection certificates", certificates(&all)));
            results.push((7, "property suites", property_suites(&all)));
            results.push((8, "prime d = 3", prime_three(&all)));
        }
        Err(e) => {
            for (k, name) in [
                (3, "G vs B per central character"),
                (4, "diagonal orbit censuses"),
                (5, "Frobenius-fixed sub-censuses"),
                (6, "equivariant bijection certificates"),
                (7, "property suites"),
                (8, "prime d = 3"),
            ] {
                results.push((k, name, Err(e.clone())));
            }
        }
    }
    let mut failed = 0;
    for (k, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {k} PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k} FAIL {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
