//! The p′-characters of a Borel subgroup `B^F = U^F ⋊ T^F`.
//!
//! A label `(J, z, ψ)` consists of the support `J` of a linear character of
//! `U₁^F = Π_{α∈Δ} X_α^F`, the `T^F`-orbit `z` of such characters (an element
//! of `H_J^F ≅ H¹(F, Z(L_J))`), and a linear character `ψ` of the stabilizer
//! `T_J^F`. The orbit of `c = (1, …, 1)` has index zero.
//!
//! Automorphisms act on labels by `χ ↦ χ∘σ⁻¹`. With `y = log_ζ c`, the
//! orbit coordinate is `U_J y`; the field automorphism `F_j` sends `z` to
//! `p^j z` and `ψ` to `p^{-j} ψ`, and the diagonal automorphism shifts `z`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{bigint_mod, mixed_radix, smith_normal_form, CharacterIndex, FiniteAbelianGroup};
use crate::matgrp::FqContext;
use crate::rootdata::{Family, RootDatum};
use crate::twist::{center_fixed_points, stabilizer_torus, SplitFrobenius, StabilizerTorus};

/// Default ceiling on `q^r` for [`brute_force_count`].
pub const DEFAULT_BRUTE_FORCE_BOUND: u64 = 1_000_000;

/// Default ceiling on the number of labels materialized at once.
pub const DEFAULT_LABEL_BOUND: u128 = 5_000_000;

/// `x_α(u) ↦ ψ₁(Tr(c_α u))`; entries are field elements in the encoding of
/// [`FqContext`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnipotentCharacterIndex {
    pub coeffs: Vec<u32>,
}

impl UnipotentCharacterIndex {
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != 0).collect()
    }

    /// Action of `F₀^j` on indices, `c ↦ c^{p^j}` (χ∘σ⁻¹ convention).
    pub fn frobenius(&self, field: &FqContext, j: u32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| field.frobenius(c, j)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BorelLabel {
    #[serde(rename = "J")]
    pub subset: Vec<usize>,
    /// Orbit coordinates over the nontrivial factors of `H_J^F`.
    pub orbit: Vec<u64>,
    /// Character of `T_J^F` over its nontrivial coordinate factors.
    pub psi: Vec<u64>,
}

/// A diagonal-automorphism orbit: all labels sharing `(J, ψ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DOrbit {
    #[serde(rename = "J")]
    pub subset: Vec<usize>,
    pub psi: Vec<u64>,
    pub nu: CharacterIndex,
    pub members: Vec<BorelLabel>,
}

impl DOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Orbit counts over one central character: `N′₁(ν)` and `N′_d(ν)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCensus {
    pub nu: CharacterIndex,
    pub d: u64,
    pub n1: u64,
    pub nd: u64,
    pub count: u64,
}

/// Per-stratum summary `(J, i(J), |T_J^F|)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSummary {
    #[serde(rename = "J")]
    pub subset: Vec<usize>,
    pub i: u64,
    pub torus_fixed: u128,
    pub contribution: u128,
}

struct Stratum {
    torus: StabilizerTorus,
    /// `(position, g)` for the nontrivial torsion coordinates.
    orbit_moduli: Vec<(usize, u64)>,
    /// `(position, modulus)` for the nontrivial `T_J^F` coordinates.
    psi_moduli: Vec<(usize, u64)>,
}

impl Stratum {
    fn i(&self) -> u64 {
        self.orbit_moduli.iter().map(|m| m.1).product()
    }

    fn torus_fixed(&self) -> u128 {
        self.psi_moduli.iter().map(|m| m.1 as u128).product()
    }

    fn full_psi(&self, psi: &[u64]) -> Vec<u64> {
        let mut full = vec![0; self.torus.subset.len() + self.torus.free_rank];
        for (&(pos, _), &c) in self.psi_moduli.iter().zip(psi) {
            full[pos] = c;
        }
        full
    }

    fn orbit_moduli_values(&self) -> Vec<u64> {
        self.orbit_moduli.iter().map(|m| m.1).collect()
    }

    fn psi_moduli_values(&self) -> Vec<u64> {
        self.psi_moduli.iter().map(|m| m.1).collect()
    }
}

/// The full label set for one datum and one `q`, with all derived data.
pub struct BorelParametrization {
    datum: RootDatum,
    fr: SplitFrobenius,
    strata: Vec<Stratum>,
    center: FiniteAbelianGroup,
    shift: Vec<i64>,
}

/// Rejects `B_m(2)`, `C_m(2)`, `G₂(2)`, `G₂(3)` and `F₄(2)`.
pub fn check_not_excluded(d: &RootDatum, q: u64) -> Result<()> {
    let excluded = match d.label().family {
        Family::B | Family::C | Family::F => q == 2,
        Family::G => q == 2 || q == 3,
        _ => false,
    };
    if excluded {
        Err(Error::ExcludedGroup {
            label: d.label().to_string(),
            q,
        })
    } else {
        Ok(())
    }
}

/// Simple-root exponents `u_i` with `α_i(t̃) = ζ^{u_i}` for the standard
/// diagonal generator `t̃ = ω_k^∨(ζ)`, `k` least with `ω_k^∨` outside the
/// coroot lattice. Zero when the center is trivial.
pub fn diagonal_shift(d: &RootDatum) -> Vec<i64> {
    let r = d.rank();
    let snf = smith_normal_form(d.cartan());
    let divisors = snf.invariants_u64();
    let k = (0..r).find(|&k| {
        (0..r).any(|i| divisors[i] > 1 && bigint_mod(&snf.u[(i, k)], divisors[i]) != 0)
    });
    let mut u = vec![0; r];
    if let Some(k) = k {
        u[k] = 1;
    }
    u
}

fn mixed_index(coords: &[u64], moduli: &[u64]) -> u64 {
    let mut idx = 0;
    let mut place = 1;
    for (&c, &m) in coords.iter().zip(moduli) {
        idx += c * place;
        place *= m;
    }
    idx
}

fn subsets(r: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << r)).map(move |mask| (0..r).filter(|i| mask >> i & 1 == 1).collect())
}

impl BorelParametrization {
    pub fn new(d: &RootDatum, p: u64, n: u32) -> Result<Self> {
        let fr = SplitFrobenius::standard(p, n)?;
        let q = fr.q();
        check_not_excluded(d, q)?;
        let mut strata = Vec::new();
        for subset in subsets(d.rank()) {
            let torus = stabilizer_torus(d, &subset)?;
            let moduli = torus.fixed_moduli(q);
            let orbit_moduli = moduli[..subset.len()]
                .iter()
                .enumerate()
                .filter(|(_, &g)| g > 1)
                .map(|(k, &g)| (k, g))
                .collect();
            let psi_moduli = moduli
                .iter()
                .enumerate()
                .filter(|(_, &g)| g > 1)
                .map(|(k, &g)| (k, g))
                .collect();
            strata.push(Stratum {
                torus,
                orbit_moduli,
                psi_moduli,
            });
        }
        Ok(Self {
            datum: d.clone(),
            fr,
            strata,
            center: center_fixed_points(d, &fr),
            shift: diagonal_shift(d),
        })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn frobenius(&self) -> SplitFrobenius {
        self.fr
    }

    pub fn q(&self) -> u64 {
        self.fr.q()
    }

    /// `Z^F`, whose characters index the central characters `ν`.
    pub fn center(&self) -> &FiniteAbelianGroup {
        &self.center
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    /// Replaces the diagonal generator by one computed elsewhere (e.g. from
    /// an explicit matrix).
    pub fn with_shift(mut self, shift: Vec<i64>) -> Result<Self> {
        if shift.len() != self.datum.rank() {
            return Err(Error::InvalidInput("shift has the wrong length".into()));
        }
        self.shift = shift;
        Ok(self)
    }

    fn stratum(&self, subset: &[usize]) -> Result<&Stratum> {
        self.strata
            .iter()
            .find(|s| s.torus.subset == subset)
            .ok_or_else(|| Error::InvalidInput(format!("{subset:?} is not a subset of Δ")))
    }

    pub fn strata(&self) -> Vec<StratumSummary> {
        self.strata
            .iter()
            .map(|s| StratumSummary {
                subset: s.torus.subset.clone(),
                i: s.i(),
                torus_fixed: s.torus_fixed(),
                contribution: s.i() as u128 * s.torus_fixed(),
            })
            .collect()
    }

    /// `Σ_J i(J)·|T_J^F|`.
    pub fn total(&self) -> u128 {
        self.strata.iter().map(|s| s.i() as u128 * s.torus_fixed()).sum()
    }

    fn check_label_bound(&self) -> Result<()> {
        let total = self.total();
        if total > DEFAULT_LABEL_BOUND {
            return Err(Error::BoundExceeded {
                what: "label count",
                value: total.to_string(),
                bound: DEFAULT_LABEL_BOUND.to_string(),
            });
        }
        Ok(())
    }

    pub fn labels(&self) -> Result<Vec<BorelLabel>> {
        self.check_label_bound()?;
        let mut out = Vec::new();
        for s in &self.strata {
            for psi in mixed_radix(&s.psi_moduli_values()) {
                for orbit in mixed_radix(&s.orbit_moduli_values()) {
                    out.push(BorelLabel {
                        subset: s.torus.subset.clone(),
                        orbit,
                        psi: psi.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn validate(&self, label: &BorelLabel) -> Result<()> {
        let s = self.stratum(&label.subset)?;
        let ok = label.orbit.len() == s.orbit_moduli.len()
            && label.psi.len() == s.psi_moduli.len()
            && label.orbit.iter().zip(&s.orbit_moduli).all(|(&o, m)| o < m.1)
            && label.psi.iter().zip(&s.psi_moduli).all(|(&c, m)| c < m.1);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("{label:?} is not a label at q = {}", self.q())))
        }
    }

    /// 1-based position of the orbit coordinate in mixed-radix order.
    pub fn orbit_number(&self, label: &BorelLabel) -> Result<u64> {
        let s = self.stratum(&label.subset)?;
        Ok(1 + mixed_index(&label.orbit, &s.orbit_moduli_values()))
    }

    /// The orbit label `(J, z)` of a unipotent character index.
    pub fn orbit_of_index(&self, field: &FqContext, c: &UnipotentCharacterIndex) -> Result<(Vec<usize>, Vec<u64>)> {
        if c.coeffs.len() != self.datum.rank() || field.q() as u64 != self.q() {
            return Err(Error::InvalidInput("index does not match the datum".into()));
        }
        let subset = c.support();
        let s = self.stratum(&subset)?;
        let y: Vec<i64> = subset
            .iter()
            .map(|&a| field.log(c.coeffs[a]).unwrap() as i64)
            .collect();
        let full = s.torus.orbit_coordinates(&y, self.q());
        Ok((subset, s.orbit_moduli.iter().map(|&(k, _)| full[k]).collect()))
    }

    /// `ν = ψ|_{Z^F}`.
    pub fn restriction_to_center(&self, label: &BorelLabel) -> Result<CharacterIndex> {
        self.validate(label)?;
        let s = self.stratum(&label.subset)?;
        Ok(CharacterIndex(
            s.torus.restrict_to_center(&s.full_psi(&label.psi), self.q()),
        ))
    }

    /// Image of `Irr(T_J^F) → Irr(Z^F)` as a set of indices.
    fn restriction_image(&self, s: &Stratum) -> BTreeSet<Vec<u64>> {
        let gens: Vec<Vec<u64>> = (0..s.psi_moduli.len())
            .map(|i| {
                let mut e = vec![0; s.psi_moduli.len()];
                e[i] = 1;
                s.torus.restrict_to_center(&s.full_psi(&e), self.q())
            })
            .collect();
        let mut image = BTreeSet::from([self.center.identity()]);
        loop {
            let mut grown = image.clone();
            for x in &image {
                for g in &gens {
                    grown.insert(self.center.add(x, g));
                }
            }
            if grown.len() == image.len() {
                return image;
            }
            image = grown;
        }
    }

    fn check_nu(&self, nu: &CharacterIndex) -> Result<()> {
        let f = self.center.invariant_factors();
        if nu.0.len() != f.len() || nu.0.iter().zip(f).any(|(&c, &m)| c >= m) {
            return Err(Error::InvalidInput(format!("{nu} is not a character of {}", self.center)));
        }
        Ok(())
    }

    /// Number of labels over `ν`, from the image of the restriction map on
    /// each stratum.
    pub fn per_nu_count(&self, nu: &CharacterIndex) -> Result<u128> {
        self.check_nu(nu)?;
        let mut total = 0u128;
        for s in &self.strata {
            let image = self.restriction_image(s);
            if image.contains(&nu.0) {
                total += s.i() as u128 * (s.torus_fixed() / image.len() as u128);
            }
        }
        Ok(total)
    }

    /// Diagonal automorphism `δ` on a label.
    pub fn diagonal_action(&self, label: &BorelLabel) -> Result<BorelLabel> {
        self.validate(label)?;
        let s = self.stratum(&label.subset)?;
        let u: Vec<i64> = label.subset.iter().map(|&a| self.shift[a]).collect();
        let delta = s.torus.orbit_coordinates(&u, self.q());
        let orbit = s
            .orbit_moduli
            .iter()
            .zip(&label.orbit)
            .map(|(&(k, g), &o)| (o + g - delta[k] % g) % g)
            .collect();
        Ok(BorelLabel {
            subset: label.subset.clone(),
            orbit,
            psi: label.psi.clone(),
        })
    }

    /// `F_j` on a label: `z ↦ p^j z`, `ψ ↦ p^{-j} ψ`.
    pub fn frobenius_on_label(&self, label: &BorelLabel, j: u32) -> Result<BorelLabel> {
        self.validate(label)?;
        let fr = self.fr.at_level(j)?;
        let s = self.stratum(&label.subset)?;
        let fwd = fr.level_q() as u128;
        let back = self.fr.p.pow((self.fr.n - j) % self.fr.n) as u128;
        let orbit = s
            .orbit_moduli
            .iter()
            .zip(&label.orbit)
            .map(|(&(_, g), &o)| (o as u128 * fwd % g as u128) as u64)
            .collect();
        let psi = s
            .psi_moduli
            .iter()
            .zip(&label.psi)
            .map(|(&(_, m), &c)| (c as u128 * back % m as u128) as u64)
            .collect();
        Ok(BorelLabel {
            subset: label.subset.clone(),
            orbit,
            psi,
        })
    }

    /// `F_j` on characters of `Z^F`: `ν ↦ p^{-j} ν`.
    pub fn frobenius_on_center(&self, nu: &CharacterIndex, j: u32) -> Result<CharacterIndex> {
        self.check_nu(nu)?;
        self.fr.at_level(j)?;
        let back = self.fr.p.pow((self.fr.n - j) % self.fr.n) as u128;
        Ok(CharacterIndex(
            nu.0.iter()
                .zip(self.center.invariant_factors())
                .map(|(&c, &m)| (c as u128 * back % m as u128) as u64)
                .collect(),
        ))
    }

    fn require_prime_center(&self) -> Result<u64> {
        let d = self.center.order();
        if d != 1 && !crate::rootdata::is_prime(d) {
            return Err(Error::NonPrimeCenter(d));
        }
        Ok(d)
    }

    /// All diagonal orbits over `ν`, in label order.
    pub fn d_orbits(&self, nu: &CharacterIndex) -> Result<Vec<DOrbit>> {
        self.check_nu(nu)?;
        self.check_label_bound()?;
        let mut out = Vec::new();
        for s in &self.strata {
            let image = self.restriction_image(s);
            if !image.contains(&nu.0) {
                continue;
            }
            for psi in mixed_radix(&s.psi_moduli_values()) {
                let restricted = s.torus.restrict_to_center(&s.full_psi(&psi), self.q());
                if restricted != nu.0 {
                    continue;
                }
                let mut remaining: BTreeSet<Vec<u64>> =
                    mixed_radix(&s.orbit_moduli_values()).into_iter().collect();
                while let Some(start) = remaining.pop_first() {
                    let first = BorelLabel {
                        subset: s.torus.subset.clone(),
                        orbit: start,
                        psi: psi.clone(),
                    };
                    let mut members = vec![first.clone()];
                    let mut cur = self.diagonal_action(&first)?;
                    while cur != first {
                        remaining.remove(&cur.orbit);
                        members.push(cur.clone());
                        cur = self.diagonal_action(&cur)?;
                    }
                    members.sort();
                    out.push(DOrbit {
                        subset: s.torus.subset.clone(),
                        psi: psi.clone(),
                        nu: nu.clone(),
                        members,
                    });
                }
            }
        }
        Ok(out)
    }

    /// `N′₁(ν)` and `N′_d(ν)` with `d = |Z^F|`.
    pub fn d_orbit_census(&self, nu: &CharacterIndex) -> Result<OrbitCensus> {
        let d = self.require_prime_center()?;
        let orbits = self.d_orbits(nu)?;
        let mut n1 = 0;
        let mut nd = 0;
        for o in &orbits {
            match o.size() as u64 {
                1 => n1 += 1,
                s if s == d => nd += 1,
                s => {
                    return Err(Error::Internal(format!(
                        "diagonal orbit of size {s} with |Z^F| = {d}"
                    )))
                }
            }
        }
        let count = orbits.iter().map(|o| o.size() as u64).sum();
        Ok(OrbitCensus {
            nu: nu.clone(),
            d,
            n1,
            nd: if d == 1 { 0 } else { nd },
            count,
        })
    }

    fn orbit_is_fixed(&self, orbit: &DOrbit, j: u32) -> Result<bool> {
        let image: BTreeSet<BorelLabel> = orbit
            .members
            .iter()
            .map(|l| self.frobenius_on_label(l, j))
            .collect::<Result<_>>()?;
        Ok(image == orbit.members.iter().cloned().collect())
    }

    /// Number of `F_j`-stable diagonal orbits of the given size over `μ`.
    pub fn fixed_label_census(&self, j: u32, size: u64, mu: &CharacterIndex) -> Result<u64> {
        self.require_prime_center()?;
        if self.frobenius_on_center(mu, j)? != *mu {
            return Err(Error::InvalidInput(format!("{mu} is not F_{j}-stable")));
        }
        let mut count = 0;
        for o in self.d_orbits(mu)? {
            if o.size() as u64 == size && self.orbit_is_fixed(&o, j)? {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Characters of `Z^F` in mixed-radix order.
    pub fn central_characters(&self) -> Vec<CharacterIndex> {
        crate::lattice::characters(&self.center)
    }
}

pub fn enumerate_labels(d: &RootDatum, fr: &SplitFrobenius) -> Result<Vec<BorelLabel>> {
    BorelParametrization::new(d, fr.p, fr.n)?.labels()
}

pub fn restriction_to_center(label: &BorelLabel, d: &RootDatum, fr: &SplitFrobenius) -> Result<CharacterIndex> {
    BorelParametrization::new(d, fr.p, fr.n)?.restriction_to_center(label)
}

pub fn per_nu_count(d: &RootDatum, fr: &SplitFrobenius, nu: &CharacterIndex) -> Result<u128> {
    BorelParametrization::new(d, fr.p, fr.n)?.per_nu_count(nu)
}

pub fn d_orbit_census(d: &RootDatum, fr: &SplitFrobenius, nu: &CharacterIndex) -> Result<OrbitCensus> {
    BorelParametrization::new(d, fr.p, fr.n)?.d_orbit_census(nu)
}

pub fn frobenius_on_label(label: &BorelLabel, d: &RootDatum, p: u64, n: u32, j: u32) -> Result<BorelLabel> {
    BorelParametrization::new(d, p, n)?.frobenius_on_label(label, j)
}

pub fn fixed_label_census(d: &RootDatum, p: u64, n: u32, j: u32, size: u64, mu: &CharacterIndex) -> Result<u64> {
    BorelParametrization::new(d, p, n)?.fixed_label_census(j, size, mu)
}

/// `c = (1, …, 1)`: regular, with entries in `F_p`, hence fixed by every
/// `F_j`; it lies in the orbit with index zero.
pub fn find_stable_regular_character(d: &RootDatum, p: u64, n: u32, j: u32) -> Result<UnipotentCharacterIndex> {
    let fr = SplitFrobenius::new(p, n, j)?;
    if d.rank() == 0 {
        return Err(Error::InvalidInput("empty set of simple roots".into()));
    }
    let c = UnipotentCharacterIndex {
        coeffs: vec![1; d.rank()],
    };
    if fr.q() <= crate::matgrp::field::MAX_FIELD_ORDER {
        let field = FqContext::new(p, n)?;
        if c.frobenius(&field, j) != c {
            return Err(Error::Internal("all-ones index is not stable".into()));
        }
    }
    Ok(c)
}

/// Result of the brute-force orbit enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceReport {
    pub total: u128,
    /// `(J, number of T^F-orbits with support J, stabilizer order)`.
    pub per_support: Vec<(Vec<usize>, u64, u64)>,
}

/// Σ over `T^F`-orbits on `Irr(U₁^F)` of the stabilizer order, by direct
/// enumeration of all `q^r` indices under `c_α ↦ c_α · Π t_k^{−a_{αk}}`.
pub fn brute_force_count(d: &RootDatum, fr: &SplitFrobenius, bound: u64) -> Result<BruteForceReport> {
    let q = fr.q();
    let r = d.rank() as u32;
    let size = q.checked_pow(r).filter(|&s| s <= bound).ok_or_else(|| Error::BoundExceeded {
        what: "brute-force index count q^r",
        value: format!("{q}^{r}"),
        bound: bound.to_string(),
    })?;
    let field = FqContext::new(fr.p, fr.n)?;
    let a = d.cartan().to_i64_rows();
    let r = r as usize;
    // generator k of T^F (t_k = ζ) multiplies c_α by ζ^{−a_{αk}}
    let factors: Vec<Vec<u32>> = (0..r)
        .map(|k| (0..r).map(|alpha| field.zeta_pow(-a[alpha][k])).collect())
        .collect();
    let torus_order = ((q - 1) as u128).pow(r as u32);
    let decode = |mut idx: u64| -> Vec<u32> {
        let mut c = Vec::with_capacity(r);
        for _ in 0..r {
            c.push((idx % q) as u32);
            idx /= q;
        }
        c
    };
    let encode = |c: &[u32]| -> u64 { c.iter().rev().fold(0u64, |acc, &x| acc * q + x as u64) };
    let mut seen = vec![false; size as usize];
    let mut per_support: BTreeMap<Vec<usize>, (u64, BTreeSet<u64>)> = BTreeMap::new();
    let mut total = 0u128;
    let mut stack = Vec::new();
    for start in 0..size {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        stack.push(start);
        let mut orbit = 0u64;
        while let Some(idx) = stack.pop() {
            orbit += 1;
            let c = decode(idx);
            for f in &factors {
                let image: Vec<u32> = c.iter().zip(f).map(|(&x, &m)| field.mul(x, m)).collect();
                let e = encode(&image);
                if !seen[e as usize] {
                    seen[e as usize] = true;
                    stack.push(e);
                }
            }
        }
        let stab = torus_order / orbit as u128;
        total += stab;
        let support: Vec<usize> = decode(start).iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect();
        let entry = per_support.entry(support).or_default();
        entry.0 += 1;
        entry.1.insert(stab as u64);
    }
    let mut rows = Vec::new();
    for (support, (count, stabs)) in per_support {
        if stabs.len() != 1 {
            return Err(Error::Internal(format!("unequal stabilizers on support {support:?}")));
        }
        rows.push((support, count, *stabs.iter().next().unwrap()));
    }
    rows.sort_by_key(|(s, _, _)| s.iter().map(|i| 1u32 << i).sum::<u32>());
    Ok(BruteForceReport {
        total,
        per_support: rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    #[serde(rename = "J")]
    pub subset: Vec<usize>,
    pub j: u64,
    pub z: Vec<u64>,
    pub psi: Vec<u64>,
    pub nu: CharacterIndex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorelCensusExport {
    pub total: u128,
    pub center_order: u64,
    pub strata: Vec<StratumSummary>,
    pub per_nu: Vec<OrbitCensus>,
}

/// Versioned JSON document for a label set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorelExport {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub type_label: String,
    pub p: u64,
    pub n: u32,
    pub labels: Vec<LabelRecord>,
    pub census: BorelCensusExport,
}

impl BorelParametrization {
    pub fn census_export(&self) -> Result<BorelCensusExport> {
        let per_nu = self
            .central_characters()
            .iter()
            .map(|nu| self.d_orbit_census(nu))
            .collect::<Result<_>>()?;
        Ok(BorelCensusExport {
            total: self.total(),
            center_order: self.center.order(),
            strata: self.strata(),
            per_nu,
        })
    }

    pub fn export(&self) -> Result<BorelExport> {
        let labels = self
            .labels()?
            .into_iter()
            .map(|l| {
                Ok(LabelRecord {
                    j: self.orbit_number(&l)?,
                    nu: self.restriction_to_center(&l)?,
                    subset: l.subset,
                    z: l.orbit,
                    psi: l.psi,
                })
            })
            .collect::<Result<_>>()?;
        Ok(BorelExport {
            schema_version: crate::SCHEMA_VERSION,
            type_label: self.datum.label().to_string(),
            p: self.fr.p,
            n: self.fr.n,
            labels,
            census: self.census_export()?,
        })
    }
}

fn join(v: &[impl ToString]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl BorelExport {
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# schema_version\t{}", self.schema_version);
        let _ = writeln!(s, "# type\t{}\tp\t{}\tn\t{}", self.type_label, self.p, self.n);
        let _ = writeln!(s, "# total\t{}", self.census.total);
        s.push_str("J\tj\tz\tpsi\tnu\n");
        for l in &self.labels {
            let _ = writeln!(
                s,
                "{{{}}}\t{}\t({})\t({})\t{}",
                join(&l.subset),
                l.j,
                join(&l.z),
                join(&l.psi),
                l.nu
            );
        }
        s
    }
}
