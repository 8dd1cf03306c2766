use std::collections::BTreeSet;

use mckay_core::borel::{brute_force_count, BorelLabel, BorelParametrization, DEFAULT_BRUTE_FORCE_BOUND};
use mckay_core::rootdata::{build_root_datum, RootDatum};
use mckay_core::twist::SplitFrobenius;
use proptest::prelude::*;

/// Bourbaki Cartan matrices, `a[i][k] = ⟨α_i, α_k^∨⟩`.
fn cartan(label: &str) -> Vec<Vec<i64>> {
    let chain = |r: usize| -> Vec<Vec<i64>> {
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| match i.abs_diff(k) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    };
    let r: usize = label[1..].parse().unwrap();
    let mut a = chain(r);
    match &label[..1] {
        "A" => {}
        "B" => a[r - 2][r - 1] = -2,
        "C" => a[r - 1][r - 2] = -2,
        "G" => a[1][0] = -3,
        _ => panic!("no oracle matrix for {label}"),
    }
    a
}

fn datum(label: &str) -> RootDatum {
    build_root_datum(label.parse().unwrap()).unwrap()
}

/// `Σ_c |Stab_T(c)|² / |T|` over all `c ∈ (F_q)^r`, grouped by support.
/// `t = Π α_k^∨(ζ^{x_k})` fixes `c` iff `Σ_k a[α][k] x_k ≡ 0 (mod q−1)` for
/// every `α` in the support.
fn stabilizer_oracle(a: &[Vec<i64>], q: u64) -> u128 {
    let r = a.len();
    let m = q - 1;
    let torus = (m as u128).pow(r as u32);
    let points: Vec<Vec<i64>> = (0..torus as u64)
        .map(|mut idx| {
            (0..r)
                .map(|_| {
                    let x = (idx % m) as i64;
                    idx /= m;
                    x
                })
                .collect()
        })
        .collect();
    let mut total = 0u128;
    for mask in 0u32..(1 << r) {
        let support: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        let stab = points
            .iter()
            .filter(|x| {
                support
                    .iter()
                    .all(|&al| (0..r).map(|k| a[al][k] * x[k]).sum::<i64>().rem_euclid(m as i64) == 0)
            })
            .count() as u128;
        let count = (m as u128).pow(support.len() as u32);
        let mass = count * stab * stab;
        assert_eq!(mass % torus, 0);
        total += mass / torus;
    }
    total
}

fn prime_powers(limit: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut q = p;
        let mut n = 1;
        while q <= limit {
            out.push((p, n));
            q *= p;
            n += 1;
        }
    }
    out
}

fn small_case() -> impl Strategy<Value = (&'static str, u64, u32)> {
    let labels = prop::sample::select(vec!["A1", "A2", "A3", "B2", "C2", "G2", "B3", "C3"]);
    (labels, prop::sample::select(prime_powers(16))).prop_filter_map("too large or excluded", |(label, (p, n))| {
        let q = p.pow(n);
        let r: u32 = label[1..].parse().unwrap();
        let excluded = match &label[..1] {
            "B" | "C" => q == 2,
            "G" => q <= 3,
            _ => false,
        };
        ((q - 1).pow(r) <= 4096 && q.pow(r) <= 50_000 && !excluded).then_some((label, p, n))
    })
}

#[test]
fn oracle_matrices_match_the_library() {
    for label in ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"] {
        assert_eq!(datum(label).cartan().to_i64_rows(), cartan(label), "{label}");
    }
}

#[test]
fn rank_one_closed_form() {
    for (p, n) in prime_powers(64) {
        let q = p.pow(n);
        let bp = BorelParametrization::new(&datum("A1"), p, n).unwrap();
        let expect = if q % 2 == 1 { q + 3 } else { q };
        assert_eq!(bp.total(), expect as u128, "q={q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formula_matches_enumeration((label, p, n) in small_case()) {
        let d = datum(label);
        let q = p.pow(n);
        let bp = BorelParametrization::new(&d, p, n).unwrap();
        let fr = SplitFrobenius::standard(p, n).unwrap();
        let brute = brute_force_count(&d, &fr, DEFAULT_BRUTE_FORCE_BOUND).unwrap();
        prop_assert_eq!(brute.total, bp.total(), "{} q={}", label, q);
        prop_assert_eq!(stabilizer_oracle(&cartan(label), q), bp.total(), "{} q={}", label, q);
        prop_assert_eq!(bp.labels().unwrap().len() as u128, bp.total());
    }

    #[test]
    fn central_characters_split_evenly((label, p, n) in small_case()) {
        let bp = BorelParametrization::new(&datum(label), p, n).unwrap();
        let z = bp.center().order() as u128;
        let counts: Vec<u128> = bp.central_characters().iter().map(|nu| bp.per_nu_count(nu).unwrap()).collect();
        prop_assert_eq!(counts.len() as u128, z);
        prop_assert_eq!(counts.iter().sum::<u128>(), bp.total());
        prop_assert!(counts.iter().all(|&c| c * z == bp.total()));
        let mut scanned = vec![0u128; counts.len()];
        for l in bp.labels().unwrap() {
            let nu = bp.restriction_to_center(&l).unwrap();
            let pos = bp.central_characters().iter().position(|c| *c == nu).unwrap();
            scanned[pos] += 1;
        }
        prop_assert_eq!(scanned, counts);
    }
}

fn invariant_cases() -> Vec<(&'static str, u64, u32)> {
    vec![
        ("A1", 2, 2), ("A1", 5, 1), ("A1", 3, 2), ("A1", 2, 3), ("A1", 5, 2), ("A1", 3, 3), ("A1", 3, 4),
        ("A2", 2, 2), ("A2", 7, 1), ("A2", 2, 4), ("A3", 5, 1), ("A3", 3, 2), ("C2", 3, 1), ("C2", 3, 2),
        ("C3", 3, 1), ("G2", 2, 2),
    ]
}

#[test]
fn frobenius_permutes_labels_with_the_right_order() {
    for (label, p, n) in invariant_cases() {
        let bp = BorelParametrization::new(&datum(label), p, n).unwrap();
        let labels = bp.labels().unwrap();
        let all: BTreeSet<&BorelLabel> = labels.iter().collect();
        for j in (1..=n).filter(|j| n % j == 0) {
            let image: BTreeSet<BorelLabel> = labels.iter().map(|l| bp.frobenius_on_label(l, j).unwrap()).collect();
            assert_eq!(image.len(), labels.len(), "{label} {p}^{n} j={j}");
            assert!(image.iter().all(|l| all.contains(l)));
            for l in &labels {
                let mut cur = l.clone();
                for _ in 0..n / j {
                    cur = bp.frobenius_on_label(&cur, j).unwrap();
                }
                assert_eq!(&cur, l, "{label} {p}^{n} j={j}");
                let nu = bp.restriction_to_center(l).unwrap();
                let moved = bp.restriction_to_center(&bp.frobenius_on_label(l, j).unwrap()).unwrap();
                assert_eq!(moved, bp.frobenius_on_center(&nu, j).unwrap());
            }
        }
    }
}

#[test]
fn frobenius_permutes_diagonal_orbits() {
    for (label, p, n) in invariant_cases() {
        let bp = BorelParametrization::new(&datum(label), p, n).unwrap();
        let mut covered = 0usize;
        for nu in bp.central_characters() {
            let orbits = bp.d_orbits(&nu).unwrap();
            for o in &orbits {
                covered += o.size();
                for m in &o.members {
                    assert_eq!(bp.restriction_to_center(m).unwrap(), nu, "{label} {p}^{n}");
                    assert_eq!((m.subset.clone(), m.psi.clone()), (o.subset.clone(), o.psi.clone()));
                }
                let first = &o.members[0];
                assert!(o.members.contains(&bp.diagonal_action(first).unwrap()));
                for j in (1..=n).filter(|j| n % j == 0) {
                    let target = bp.frobenius_on_center(&nu, j).unwrap();
                    let image: BTreeSet<BorelLabel> =
                        o.members.iter().map(|l| bp.frobenius_on_label(l, j).unwrap()).collect();
                    let hit = bp
                        .d_orbits(&target)
                        .unwrap()
                        .into_iter()
                        .any(|t| t.members.iter().cloned().collect::<BTreeSet<_>>() == image);
                    assert!(hit, "{label} {p}^{n} j={j}");
                }
            }
        }
        assert_eq!(covered as u128, bp.total());
    }
}

#[test]
fn orbit_census_sizes_are_one_or_the_center_order() {
    for (label, p, n) in invariant_cases() {
        let bp = BorelParametrization::new(&datum(label), p, n).unwrap();
        let z = bp.center().order();
        if z != 1 && !mckay_core::rootdata::is_prime(z) {
            continue;
        }
        for nu in bp.central_characters() {
            let c = bp.d_orbit_census(&nu).unwrap();
            assert_eq!(c.count as u128, bp.per_nu_count(&nu).unwrap());
            if z > 1 {
                assert_eq!(c.n1 + z * c.nd, c.count, "{label} {p}^{n}");
            }
        }
    }
}
