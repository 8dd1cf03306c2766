//! Per-central-character comparison of the `p′`-characters of `G^F` (from
//! an exact character table) with the Borel-side labels, orbit censuses
//! under the diagonal and field automorphisms, and an explicitly certified
//! equivariant bijection.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::borel::{BorelLabel, BorelParametrization};
use crate::chartab::{dixon_schneider, CharacterTable};
use crate::error::{Error, Result};
use crate::lattice::CharacterIndex;
use crate::matgrp::{build_group, MatGroup};
use crate::rootdata::{is_nonsingular_prime, is_prime, RootDatum, RootDatumDocument};

/// Which census is being described.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Group,
    Borel,
}

/// A finite set carrying a central character on each element, the diagonal
/// generator `δ` and the field automorphisms `F_j` for `j | n`, all as
/// permutations of `0..len`.
#[derive(Clone, Debug)]
pub struct ActionSet<T> {
    items: Vec<T>,
    nu: Vec<CharacterIndex>,
    delta: Vec<usize>,
    frob: BTreeMap<u32, Vec<usize>>,
    n: u32,
    d: u64,
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|j| n.is_multiple_of(*j)).collect()
}

fn check_permutation(p: &[usize], what: &str) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Internal(format!("{what} is not a permutation")));
        }
    }
    Ok(())
}

impl<T: Clone> ActionSet<T> {
    pub fn new(
        items: Vec<T>,
        nu: Vec<CharacterIndex>,
        delta: Vec<usize>,
        frob: BTreeMap<u32, Vec<usize>>,
        n: u32,
        d: u64,
    ) -> Result<Self> {
        let len = items.len();
        if nu.len() != len || delta.len() != len || frob.values().any(|f| f.len() != len) {
            return Err(Error::InvalidInput("action data has inconsistent lengths".into()));
        }
        check_permutation(&delta, "diagonal action")?;
        for (j, f) in &frob {
            check_permutation(f, &format!("F_{j}"))?;
        }
        for j in divisors(n) {
            if !frob.contains_key(&j) {
                return Err(Error::InvalidInput(format!("missing F_{j}")));
            }
        }
        Ok(Self {
            items,
            nu,
            delta,
            frob,
            n,
            d,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn nu(&self, i: usize) -> &CharacterIndex {
        &self.nu[i]
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn frobenius(&self, j: u32) -> Option<&[usize]> {
        self.frob.get(&j).map(Vec::as_slice)
    }

    pub fn center_order(&self) -> u64 {
        self.d
    }

    pub fn over(&self, nu: &CharacterIndex) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nu[i] == *nu).collect()
    }

    /// Diagonal orbits over `ν`, each sorted, ordered by least member.
    pub fn d_orbits(&self, nu: &CharacterIndex) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in self.over(nu) {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut cur = self.delta[start];
            while cur != start {
                seen[cur] = true;
                orbit.push(cur);
                cur = self.delta[cur];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Least `j | n` with `F_j` fixing `ν` on every element over it;
    /// `K_ν = ⟨F_j⟩`.
    pub fn stabilizer_level(&self, nu: &CharacterIndex) -> u32 {
        let over = self.over(nu);
        divisors(self.n)
            .into_iter()
            .find(|j| over.iter().all(|&i| self.nu[self.frob[j][i]] == *nu))
            .unwrap_or(self.n)
    }

    fn maps_onto_itself(&self, orbit: &[usize], perm: &[usize]) -> bool {
        let mut img: Vec<usize> = orbit.iter().map(|&i| perm[i]).collect();
        img.sort_unstable();
        img == orbit
    }

    /// Diagonal orbits of each size over `μ` that `F_j` maps onto
    /// themselves, as `(N₁, N_d)`.
    pub fn fixed_census(&self, j: u32, mu: &CharacterIndex) -> Result<(u64, u64)> {
        let perm = self
            .frob
            .get(&j)
            .ok_or_else(|| Error::InvalidInput(format!("F_{j} is not available")))?;
        let mut n1 = 0;
        let mut nd = 0;
        for o in self.d_orbits(mu) {
            if self.maps_onto_itself(&o, perm) {
                if o.len() == 1 {
                    n1 += 1;
                } else {
                    nd += 1;
                }
            }
        }
        Ok((n1, nd))
    }

    pub fn census(&self, side: Side, nu: &CharacterIndex) -> Result<SideCensus> {
        let orbits = self.d_orbits(nu);
        let mut n1 = 0;
        let mut nd = 0;
        for o in &orbits {
            match o.len() as u64 {
                1 => n1 += 1,
                s if s == self.d => nd += 1,
                s => {
                    return Err(Error::Internal(format!(
                        "diagonal orbit of size {s} with |Z^F| = {}",
                        self.d
                    )))
                }
            }
        }
        let k_level = self.stabilizer_level(nu);
        let mut fixed = BTreeMap::new();
        for j in divisors(self.n) {
            if j % k_level == 0 {
                let (f1, fd) = self.fixed_census(j, nu)?;
                fixed.insert(j, FixedCensus { n1: f1, nd: fd });
            }
        }
        Ok(SideCensus {
            side,
            nu: nu.clone(),
            d: self.d,
            count: orbits.iter().map(|o| o.len() as u64).sum(),
            n1,
            nd,
            k_level,
            fixed,
        })
    }

    /// `K_ν`-orbits on the diagonal orbits over `ν`: each entry lists the
    /// diagonal-orbit indices of one `K_ν`-orbit.
    pub fn k_orbits(&self, nu: &CharacterIndex) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let dorbs = self.d_orbits(nu);
        let gamma = &self.frob[&self.stabilizer_level(nu)];
        let mut which = HashMap::new();
        for (k, o) in dorbs.iter().enumerate() {
            for &i in o {
                which.insert(i, k);
            }
        }
        let mut seen = vec![false; dorbs.len()];
        let mut out = Vec::new();
        for start in 0..dorbs.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut cur = which[&gamma[dorbs[start][0]]];
            while cur != start {
                seen[cur] = true;
                orbit.push(cur);
                cur = which[&gamma[dorbs[cur][0]]];
            }
            out.push(orbit);
        }
        (dorbs, out)
    }

    /// Drops the orbit of the full automorphism group through `member`.
    pub fn without_orbit(&self, member: usize) -> Result<Self> {
        let mut drop = BTreeSet::from([member]);
        let mut stack = vec![member];
        while let Some(i) = stack.pop() {
            for perm in std::iter::once(&self.delta).chain(self.frob.values()) {
                if drop.insert(perm[i]) {
                    stack.push(perm[i]);
                }
            }
        }
        let keep: Vec<usize> = (0..self.len()).filter(|i| !drop.contains(i)).collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let remap = |perm: &[usize]| keep.iter().map(|&i| pos[&perm[i]]).collect::<Vec<_>>();
        Self::new(
            keep.iter().map(|&i| self.items[i].clone()).collect(),
            keep.iter().map(|&i| self.nu[i].clone()).collect(),
            remap(&self.delta),
            self.frob.iter().map(|(&j, f)| (j, remap(f))).collect(),
            self.n,
            self.d,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedCensus {
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "Nd")]
    pub nd: u64,
}

/// `N₁(ν)`, `N_d(ν)` on one side, with fixed sub-censuses for every `F_j`
/// in `K_ν`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCensus {
    pub side: Side,
    pub nu: CharacterIndex,
    pub d: u64,
    pub count: u64,
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "Nd")]
    pub nd: u64,
    /// `K_ν = ⟨F_{k_level}⟩`.
    pub k_level: u32,
    pub fixed: BTreeMap<u32, FixedCensus>,
}

impl SideCensus {
    pub fn check(&self) -> Result<()> {
        if self.n1 + self.d * self.nd != self.count && self.d > 1 {
            return Err(Error::Internal("N1 + d·Nd differs from the count".into()));
        }
        Ok(())
    }

    fn same_counts(&self, other: &Self) -> bool {
        self.count == other.count && self.n1 == other.n1 && self.nd == other.nd
    }
}

/// The table rows of `p′`-degree as an action set, with the diagonal and
/// field automorphisms of the matrix group.
pub struct GroupSide {
    pub group: MatGroup,
    pub table: CharacterTable,
    pub shift: Vec<i64>,
    pub set: ActionSet<usize>,
}

impl GroupSide {
    pub fn build(d: &RootDatum, p: u64, n: u32, max_order: u64) -> Result<Self> {
        let group = build_group(d, p, n, max_order)?;
        let table = dixon_schneider(&group)?;
        Self::from_parts(group, table)
    }

    pub fn from_parts(group: MatGroup, table: CharacterTable) -> Result<Self> {
        let p = group.field().p() as u64;
        let n = group.field().n();
        let rows = table.p_prime_rows(p);
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let z_classes: Vec<usize> = group
            .center_generators()?
            .iter()
            .map(|z| group.class_of(z).ok_or_else(|| Error::Internal("center generator left the group".into())))
            .collect::<Result<_>>()?;
        let nu = rows
            .iter()
            .map(|&r| {
                z_classes
                    .iter()
                    .map(|&c| table.central_character(r, c))
                    .collect::<Result<Vec<_>>>()
                    .map(CharacterIndex)
            })
            .collect::<Result<Vec<_>>>()?;
        let restrict = |perm: Vec<usize>| -> Result<Vec<usize>> {
            rows.iter()
                .map(|&r| {
                    pos.get(&perm[r])
                        .copied()
                        .ok_or_else(|| Error::Internal("automorphism moved a p′-row outside".into()))
                })
                .collect()
        };
        let diag = group.diagonal_automorphism();
        let shift = group.simple_root_exponents(&diag)?;
        let delta = restrict(table.automorphism_action(&group, &diag)?)?;
        let mut frob = BTreeMap::new();
        for j in divisors(n) {
            let sigma = group.field_automorphism(j)?;
            frob.insert(j, restrict(table.automorphism_action(&group, &sigma)?)?);
        }
        let d = z_classes
            .iter()
            .map(|&c| table.class_orders()[c])
            .product();
        let set = ActionSet::new(rows, nu, delta, frob, n, d)?;
        Ok(Self {
            group,
            table,
            shift,
            set,
        })
    }
}

/// All Borel-side labels as an action set.
pub fn borel_action_set(bp: &BorelParametrization) -> Result<ActionSet<BorelLabel>> {
    let labels = bp.labels()?;
    let pos: BTreeMap<&BorelLabel, usize> = labels.iter().enumerate().map(|(a, b)| (b, a)).collect();
    let index = |l: BorelLabel| {
        pos.get(&l)
            .copied()
            .ok_or_else(|| Error::Internal(format!("{l:?} is not a label")))
    };
    let nu = labels
        .iter()
        .map(|l| bp.restriction_to_center(l))
        .collect::<Result<Vec<_>>>()?;
    let delta = labels
        .iter()
        .map(|l| index(bp.diagonal_action(l)?))
        .collect::<Result<Vec<_>>>()?;
    let n = bp.frobenius().n;
    let mut frob = BTreeMap::new();
    for j in divisors(n) {
        let perm = labels
            .iter()
            .map(|l| index(bp.frobenius_on_label(l, j)?))
            .collect::<Result<Vec<_>>>()?;
        frob.insert(j, perm);
    }
    ActionSet::new(labels.clone(), nu, delta, frob, n, bp.center().order())
}

fn check_hypothesis(d: &RootDatum, p: u64, n: u32) -> Result<()> {
    if !is_nonsingular_prime(d, p)? {
        return Err(Error::Hypothesis(format!("{p} is singular for {}", d.label())));
    }
    let q = crate::twist::SplitFrobenius::standard(p, n)?.q();
    let z = crate::twist::center_fixed_points(d, &crate::twist::SplitFrobenius::standard(p, n)?).order();
    if z != 1 && !is_prime(z) {
        return Err(Error::Hypothesis(format!(
            "|Z^F| = {z} at q = {q} is neither 1 nor prime"
        )));
    }
    Ok(())
}

/// Borel-side census from the label formulas, cross-checked against the
/// label action set.
pub fn census_b(d: &RootDatum, p: u64, n: u32, nu: &CharacterIndex) -> Result<SideCensus> {
    check_hypothesis(d, p, n)?;
    let bp = BorelParametrization::new(d, p, n)?;
    census_from_parametrization(&bp, nu)
}

pub fn census_from_parametrization(bp: &BorelParametrization, nu: &CharacterIndex) -> Result<SideCensus> {
    let base = bp.d_orbit_census(nu)?;
    let set = borel_action_set(bp)?;
    let k_level = set.stabilizer_level(nu);
    let mut fixed = BTreeMap::new();
    for j in divisors(bp.frobenius().n) {
        if j % k_level != 0 {
            continue;
        }
        let n1 = bp.fixed_label_census(j, 1, nu)?;
        let nd = if base.d > 1 {
            bp.fixed_label_census(j, base.d, nu)?
        } else {
            0
        };
        fixed.insert(j, FixedCensus { n1, nd });
    }
    let census = SideCensus {
        side: Side::Borel,
        nu: nu.clone(),
        d: base.d,
        count: base.count,
        n1: base.n1,
        nd: base.nd,
        k_level,
        fixed,
    };
    census.check()?;
    if set.census(Side::Borel, nu)? != census {
        return Err(Error::Internal("label scan disagrees with the orbit census".into()));
    }
    Ok(census)
}

/// Group-side census from the table permutations.
pub fn census_g(g: &GroupSide, nu: &CharacterIndex) -> Result<SideCensus> {
    let c = g.set.census(Side::Group, nu)?;
    c.check()?;
    Ok(c)
}

/// A `p′`-row of the table with its position in the orbit structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHandle {
    pub row: usize,
    pub nu: CharacterIndex,
    pub d_orbit: usize,
    pub k_orbit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionPair {
    pub group: GroupHandle,
    pub borel: BorelLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantBijection {
    pub nu: CharacterIndex,
    /// `γ = F_{gamma_level}` generates `K_ν`.
    pub gamma_level: u32,
    pub pairs: Vec<BijectionPair>,
    pub delta_certificate: bool,
    pub gamma_certificate: bool,
}

impl EquivariantBijection {
    pub fn certified(&self) -> bool {
        self.delta_certificate && self.gamma_certificate
    }
}

/// Orbit of the full group `D ⋊ K_ν` through one diagonal orbit type.
struct OrbitBlock {
    d_size: usize,
    k_size: usize,
    /// Diagonal orbits in `γ`-order starting from the least.
    d_orbits: Vec<usize>,
}

fn blocks<T: Clone>(set: &ActionSet<T>, nu: &CharacterIndex) -> (Vec<Vec<usize>>, Vec<OrbitBlock>) {
    let (dorbs, korbs) = set.k_orbits(nu);
    let blocks = korbs
        .into_iter()
        .map(|k| OrbitBlock {
            d_size: dorbs[k[0]].len(),
            k_size: k.len(),
            d_orbits: k,
        })
        .collect();
    (dorbs, blocks)
}

/// Least element of the first diagonal orbit in the block fixed by
/// `γ^{k_size}`.
fn stable_representative(
    gamma: &[usize],
    dorbs: &[Vec<usize>],
    block: &OrbitBlock,
) -> Option<usize> {
    let power = |mut i: usize| {
        for _ in 0..block.k_size {
            i = gamma[i];
        }
        i
    };
    dorbs[block.d_orbits[0]].iter().copied().find(|&i| power(i) == i)
}

/// Builds `Ψ` over `ν` by matching orbits of `D ⋊ K_ν` of equal shape,
/// choosing `γ`-stable representatives on both sides and transporting along
/// `δ^a γ^b`; both commutation identities are then checked element by
/// element.
pub fn build_equivariant_bijection(
    g: &ActionSet<usize>,
    b: &ActionSet<BorelLabel>,
    nu: &CharacterIndex,
) -> Result<EquivariantBijection> {
    let cg = g.census(Side::Group, nu)?;
    let cb = b.census(Side::Borel, nu)?;
    if !cg.same_counts(&cb) {
        return Err(Error::CensusMismatch(format!(
            "over {nu}: group (count {}, N1 {}, Nd {}) vs Borel (count {}, N1 {}, Nd {})",
            cg.count, cg.n1, cg.nd, cb.count, cb.n1, cb.nd
        )));
    }
    if cg.k_level != cb.k_level {
        return Err(Error::CensusMismatch(format!(
            "over {nu}: K_ν generated by F_{} vs F_{}",
            cg.k_level, cb.k_level
        )));
    }
    let level = cg.k_level;
    let k_order = (g.n / level) as usize;
    let gamma_g = &g.frob[&level];
    let gamma_b = &b.frob[&level];
    let (dg, bg) = blocks(g, nu);
    let (db, bb) = blocks(b, nu);

    // match blocks of equal shape in order of appearance
    let mut pool: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, blk) in bb.iter().enumerate() {
        pool.entry((blk.d_size, blk.k_size)).or_default().push(i);
    }
    for v in pool.values_mut() {
        v.reverse();
    }
    let mut psi: HashMap<usize, usize> = HashMap::new();
    let mut handles: HashMap<usize, (usize, usize)> = HashMap::new();
    for (gi, blk) in bg.iter().enumerate() {
        let bi = pool
            .get_mut(&(blk.d_size, blk.k_size))
            .and_then(Vec::pop)
            .ok_or_else(|| {
                Error::NoMatching(format!(
                    "over {nu}: no Borel orbit with diagonal size {} and field orbit length {}",
                    blk.d_size, blk.k_size
                ))
            })?;
        for &dk in &blk.d_orbits {
            for &row in &dg[dk] {
                handles.insert(row, (dk, gi));
            }
        }
        let x = stable_representative(gamma_g, &dg, blk).ok_or_else(|| {
            Error::NoStableRepresentative(format!("group side over {nu}, diagonal orbit {:?}", dg[blk.d_orbits[0]]))
        })?;
        let y = stable_representative(gamma_b, &db, &bb[bi]).ok_or_else(|| {
            Error::NoStableRepresentative(format!("Borel side over {nu}, label {:?}", b.items[db[bb[bi].d_orbits[0]][0]]))
        })?;
        // transport along δ^a γ^c
        let mut gx = x;
        let mut by = y;
        for _ in 0..k_order {
            let mut dx = gx;
            let mut dy = by;
            for _ in 0..blk.d_size {
                if let Some(&prev) = psi.get(&dx) {
                    if prev != dy {
                        return Err(Error::Internal(format!(
                            "transport over {nu} is not well defined at row {dx}"
                        )));
                    }
                } else {
                    psi.insert(dx, dy);
                }
                dx = g.delta[dx];
                dy = b.delta[dy];
            }
            gx = gamma_g[gx];
            by = gamma_b[by];
        }
    }
    if pool.values().any(|v| !v.is_empty()) {
        return Err(Error::NoMatching(format!("over {nu}: unmatched Borel orbits remain")));
    }
    let over = g.over(nu);
    if psi.len() != over.len() || psi.values().collect::<BTreeSet<_>>().len() != over.len() {
        return Err(Error::Internal(format!("transport over {nu} is not a bijection")));
    }
    let delta_certificate = over.iter().all(|&x| psi.get(&g.delta[x]) == Some(&b.delta[psi[&x]]));
    let gamma_certificate = over.iter().all(|&x| psi.get(&gamma_g[x]) == Some(&gamma_b[psi[&x]]));
    let pairs = over
        .iter()
        .map(|&x| {
            let (d_orbit, k_orbit) = handles[&x];
            BijectionPair {
                group: GroupHandle {
                    row: g.items[x],
                    nu: nu.clone(),
                    d_orbit,
                    k_orbit,
                },
                borel: b.items[psi[&x]].clone(),
            }
        })
        .collect();
    Ok(EquivariantBijection {
        nu: nu.clone(),
        gamma_level: level,
        pairs,
        delta_certificate,
        gamma_certificate,
    })
}

/// `{G, B}` counts for one `ν`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountPair {
    #[serde(rename = "G")]
    pub group: u64,
    #[serde(rename = "B")]
    pub borel: u64,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusComparison {
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "Nd")]
    pub nd: u64,
    #[serde(rename = "N1p")]
    pub n1p: u64,
    #[serde(rename = "Ndp")]
    pub ndp: u64,
    pub d: u64,
    pub equal: bool,
}

/// Orbit-length multisets of `K_ν` on diagonal orbits, and whether equal
/// fixed sub-censuses predicted equal multisets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurnsideCheck {
    pub group_lengths: Vec<(usize, usize)>,
    pub borel_lengths: Vec<(usize, usize)>,
    pub fixed_agree: bool,
    pub lengths_agree: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionSummary {
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub per_nu: BTreeMap<String, EquivariantBijection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalShift {
    pub group: Vec<i64>,
    pub formula: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayReport {
    pub schema_version: u32,
    pub datum: RootDatumDocument,
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub group_order: u64,
    pub center_order: u64,
    pub diagonal_shift: DiagonalShift,
    pub total: CountPair,
    pub per_nu: BTreeMap<String, CountPair>,
    pub census: BTreeMap<String, CensusComparison>,
    /// `j → ν → fixed sub-census comparison`.
    pub fixed: BTreeMap<u32, BTreeMap<String, CensusComparison>>,
    pub burnside: BTreeMap<String, BurnsideCheck>,
    pub bijection: BijectionSummary,
    pub failures: Vec<String>,
    pub verdict: Verdict,
}

fn length_multiset<T: Clone>(set: &ActionSet<T>, nu: &CharacterIndex) -> Vec<(usize, usize)> {
    let (_, bl) = blocks(set, nu);
    let mut v: Vec<(usize, usize)> = bl.iter().map(|b| (b.d_size, b.k_size)).collect();
    v.sort_unstable();
    v
}

/// Bijections for every `ν`; stops at the first failure.
pub fn bijections(g: &GroupSide, bp: &BorelParametrization) -> Result<Vec<EquivariantBijection>> {
    let b = borel_action_set(bp)?;
    bp.central_characters()
        .iter()
        .map(|nu| build_equivariant_bijection(&g.set, &b, nu))
        .collect()
}

/// Borel parametrization using the diagonal generator of the matrix group.
pub fn matched_parametrization(d: &RootDatum, p: u64, n: u32, g: &GroupSide) -> Result<BorelParametrization> {
    BorelParametrization::new(d, p, n)?.with_shift(g.shift.clone())
}

/// Runs both sides and compares every count, census and certificate.
pub fn check_relative_mckay(d: &RootDatum, p: u64, n: u32, max_order: u64) -> Result<McKayReport> {
    check_hypothesis(d, p, n)?;
    let g = GroupSide::build(d, p, n, max_order)?;
    check_with_group(d, p, n, &g)
}

pub fn check_with_group(d: &RootDatum, p: u64, n: u32, g: &GroupSide) -> Result<McKayReport> {
    check_hypothesis(d, p, n)?;
    let bp = matched_parametrization(d, p, n, g)?;
    let b = borel_action_set(&bp)?;
    let mut failures = Vec::new();
    let nus = bp.central_characters();
    let mut per_nu = BTreeMap::new();
    let mut census = BTreeMap::new();
    let mut fixed: BTreeMap<u32, BTreeMap<String, CensusComparison>> = BTreeMap::new();
    let mut burnside = BTreeMap::new();
    for nu in &nus {
        let key = nu.to_string();
        let g_count = g.set.over(nu).len() as u64;
        let b_count = u64::try_from(bp.per_nu_count(nu)?)
            .map_err(|_| Error::Internal("per-ν count overflows".into()))?;
        let eq = g_count == b_count;
        if !eq {
            failures.push(format!("per_nu {key}: G {g_count} vs B {b_count}"));
        }
        per_nu.insert(key.clone(), CountPair { group: g_count, borel: b_count, equal: eq });

        let cg = census_g(g, nu)?;
        let cb = census_from_parametrization(&bp, nu)?;
        let eq = cg.same_counts(&cb);
        if !eq {
            failures.push(format!("census {key}"));
        }
        census.insert(
            key.clone(),
            CensusComparison {
                n1: cg.n1,
                nd: cg.nd,
                n1p: cb.n1,
                ndp: cb.nd,
                d: cg.d,
                equal: eq,
            },
        );
        let mut fixed_agree = cg.k_level == cb.k_level;
        for (j, fg) in &cg.fixed {
            let fb = cb.fixed.get(j).cloned().unwrap_or(FixedCensus { n1: 0, nd: 0 });
            let eq = *fg == fb;
            fixed_agree &= eq;
            if !eq {
                failures.push(format!("fixed j={j} {key}"));
            }
            fixed.entry(*j).or_default().insert(
                key.clone(),
                CensusComparison {
                    n1: fg.n1,
                    nd: fg.nd,
                    n1p: fb.n1,
                    ndp: fb.nd,
                    d: cg.d,
                    equal: eq,
                },
            );
        }
        fixed_agree &= cg.fixed.len() == cb.fixed.len();
        let gl = length_multiset(&g.set, nu);
        let bl = length_multiset(&b, nu);
        let lengths_agree = gl == bl;
        let consistent = !fixed_agree || lengths_agree;
        if !consistent {
            failures.push(format!("burnside {key}"));
        }
        burnside.insert(
            key,
            BurnsideCheck {
                group_lengths: gl,
                borel_lengths: bl,
                fixed_agree,
                lengths_agree,
                consistent,
            },
        );
    }
    let g_total = g.set.len() as u64;
    let b_total = u64::try_from(bp.total()).map_err(|_| Error::Internal("total overflows".into()))?;
    let sum_nu: u64 = per_nu.values().map(|c| c.borel).sum();
    if g_total != b_total || sum_nu != b_total {
        failures.push(format!("total: G {g_total} vs B {b_total}"));
    }
    let bijection = match nus
        .iter()
        .map(|nu| build_equivariant_bijection(&g.set, &b, nu))
        .collect::<Result<Vec<_>>>()
    {
        Ok(list) => {
            let certified = list.iter().all(EquivariantBijection::certified);
            if !certified {
                failures.push("bijection certificates".into());
            }
            BijectionSummary {
                certified,
                error: None,
                per_nu: list.into_iter().map(|e| (e.nu.to_string(), e)).collect(),
            }
        }
        Err(e) => {
            failures.push(format!("bijection: {e}"));
            BijectionSummary {
                certified: false,
                error: Some(e.to_string()),
                per_nu: BTreeMap::new(),
            }
        }
    };
    Ok(McKayReport {
        schema_version: crate::SCHEMA_VERSION,
        datum: d.document(),
        p,
        n,
        q: bp.q(),
        group_order: g.table.order(),
        center_order: bp.center().order(),
        diagonal_shift: DiagonalShift {
            group: g.shift.clone(),
            formula: crate::borel::diagonal_shift(d),
        },
        total: CountPair {
            group: g_total,
            borel: b_total,
            equal: g_total == b_total,
        },
        per_nu,
        census,
        fixed,
        burnside,
        bijection,
        verdict: if failures.is_empty() { Verdict::Pass } else { Verdict::Fail },
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgrp::DEFAULT_MAX_GROUP_ORDER;
    use crate::rootdata::build_root_datum;

    fn datum(s: &str) -> RootDatum {
        build_root_datum(s.parse().unwrap()).unwrap()
    }

    fn nu(v: &[u64]) -> CharacterIndex {
        CharacterIndex(v.to_vec())
    }

    #[test]
    fn small_reports_pass() {
        for (s, p, n) in [("A1", 3, 1), ("A1", 5, 1), ("A1", 2, 2), ("A1", 3, 2), ("A2", 2, 1)] {
            let r = check_relative_mckay(&datum(s), p, n, DEFAULT_MAX_GROUP_ORDER).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{s} {p}^{n}: {:?}", r.failures);
        }
    }

    #[test]
    fn sl2_5_census() {
        let d = datum("A1");
        let g = GroupSide::build(&d, 5, 1, DEFAULT_MAX_GROUP_ORDER).unwrap();
        for v in [nu(&[0]), nu(&[1])] {
            let c = census_g(&g, &v).unwrap();
            assert_eq!((c.n1, c.nd), (2, 1));
            let c = census_b(&d, 5, 1, &v).unwrap();
            assert_eq!((c.n1, c.nd), (2, 1));
        }
    }

    #[test]
    fn fixed_census_q9() {
        let d = datum("A1");
        let c = census_b(&d, 3, 2, &nu(&[1])).unwrap();
        assert_eq!(c.fixed[&1].n1, 0);
        let g = GroupSide::build(&d, 3, 2, DEFAULT_MAX_GROUP_ORDER).unwrap();
        assert_eq!(census_g(&g, &nu(&[1])).unwrap().fixed, c.fixed);
    }

    #[test]
    fn corrupted_census_is_rejected() {
        let d = datum("A1");
        let g = GroupSide::build(&d, 5, 1, DEFAULT_MAX_GROUP_ORDER).unwrap();
        let bp = matched_parametrization(&d, 5, 1, &g).unwrap();
        let b = borel_action_set(&bp).unwrap();
        let v = nu(&[1]);
        let first = b.over(&v)[0];
        let broken = b.without_orbit(first).unwrap();
        assert!(matches!(
            build_equivariant_bijection(&g.set, &broken, &v),
            Err(Error::CensusMismatch(_))
        ));
    }

    #[test]
    fn singular_prime_refused() {
        let e = check_relative_mckay(&datum("C2"), 2, 1, DEFAULT_MAX_GROUP_ORDER).unwrap_err();
        assert!(matches!(e, Error::Hypothesis(_)));
    }
}
