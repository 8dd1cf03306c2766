//! Root data of simple simply connected groups.
//!
//! The Cartan matrix is stored with rows = simple roots written in the
//! fundamental-weight basis of `X(T)`, i.e. `cartan[i][j] = ⟨α_i, α_j^∨⟩`.
//! Since the datum is simply connected, `X(T)` is the weight lattice and
//! these rows are literally the simple-root coordinate vectors.
//!
//! Numbering follows Bourbaki. In particular for `C_n` the last simple root
//! is long, so `C2` has rows `(2,−1)` (short `α_1`) and `(−2,2)` (long `α_2`).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cokernel_torsion, FiniteAbelianGroup, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A Dynkin type such as `A1`, `C2`, `E7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub family: Family,
    pub rank: usize,
}

impl TypeLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(Error::UnsupportedType(format!("{family:?}{rank}")))
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let cleaned: String = s.chars().filter(|c| *c != '_').collect();
        let mut chars = cleaned.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::UnsupportedType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnsupportedType(s.to_string()))?;
        TypeLabel::new(family, rank).map_err(|_| Error::UnsupportedType(s.to_string()))
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TypeLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A simply connected simple root datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    label: TypeLabel,
    cartan: IntMatrix,
}

/// Positive roots as coefficient vectors over the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveRootSet {
    pub roots: Vec<Vec<i64>>,
}

impl PositiveRootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// The root of maximal height.
    pub fn highest(&self) -> &[i64] {
        self.roots
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .expect("nonempty root system")
    }
}

/// Versioned JSON form of a datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatumDocument {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub type_label: TypeLabel,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
}

pub fn build_root_datum(label: TypeLabel) -> Result<RootDatum> {
    let n = label.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match label.family {
        Family::A | Family::B | Family::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Family::E => {
            // Bourbaki: 1-3-4-5-…-n chain, 2 attached to 4
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        Family::F | Family::G => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
    }
    match label.family {
        // α_{n−1} long, α_n short: ⟨α_{n−1}, α_n^∨⟩ = −2
        Family::B => a[n - 2][n - 1] = -2,
        Family::C => a[n - 1][n - 2] = -2,
        // α_2 long, α_3 short
        Family::F => a[1][2] = -2,
        // α_1 short, α_2 long
        Family::G => a[1][0] = -3,
        _ => {}
    }
    let datum = RootDatum {
        label,
        cartan: IntMatrix::from_rows(n, &a),
    };
    debug_assert!(datum.is_valid_cartan());
    Ok(datum)
}

impl RootDatum {
    pub fn from_label(label: &str) -> Result<Self> {
        build_root_datum(label.parse()?)
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        self.cartan.get_i64(i, j)
    }

    /// The subset of simple-root rows indexed by `j` (sorted).
    pub fn rows_of(&self, j: &[usize]) -> IntMatrix {
        self.cartan.select_rows(j)
    }

    /// Diagonal 2, nonpositive off-diagonal with matching zero pattern, and a
    /// positive-definite symmetrization `diag(w)·A`.
    pub fn is_valid_cartan(&self) -> bool {
        let n = self.rank();
        let a = self.cartan.to_i64_rows();
        for i in 0..n {
            if a[i][i] != 2 {
                return false;
            }
            for j in 0..n {
                if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                    return false;
                }
            }
        }
        // weights w with w_i a_ij = w_j a_ji, propagated along the (connected) diagram
        let mut w: Vec<Option<(i64, i64)>> = vec![None; n];
        w[0] = Some((1, 1));
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (wn, wd) = w[i].unwrap();
            for j in 0..n {
                if i != j && a[i][j] != 0 && w[j].is_none() {
                    // w_j = w_i a_ij / a_ji
                    let num = wn * a[i][j];
                    let den = wd * a[j][i];
                    let g = num_integer::gcd(num, den);
                    let (num, den) = (num / g, den / g);
                    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
                    w[j] = Some((num, den));
                    queue.push_back(j);
                }
            }
        }
        if w.iter().any(|x| x.is_none()) {
            return false;
        }
        let lcm_den = w.iter().fold(1i64, |l, x| num_integer::lcm(l, x.unwrap().1));
        let weights: Vec<i64> = w
            .iter()
            .map(|x| {
                let (num, den) = x.unwrap();
                num * (lcm_den / den)
            })
            .collect();
        let mut sym = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                sym[i][j] = weights[i] * a[i][j];
            }
        }
        for i in 0..n {
            for j in 0..n {
                if sym[i][j] != sym[j][i] {
                    return false;
                }
            }
        }
        // leading principal minors
        (1..=n).all(|k| {
            let rows: Vec<Vec<i64>> = sym[..k].iter().map(|r| r[..k].to_vec()).collect();
            IntMatrix::from_rows(k, &rows).determinant().is_positive()
        })
    }

    pub fn document(&self) -> RootDatumDocument {
        RootDatumDocument {
            schema_version: crate::SCHEMA_VERSION,
            type_label: self.label,
            rank: self.rank(),
            cartan: self.cartan.to_i64_rows(),
        }
    }

    /// Rebuilds a datum from its JSON document; the Cartan rows must match the
    /// standard ones for the stated type.
    pub fn from_document(doc: &RootDatumDocument) -> Result<Self> {
        let datum = build_root_datum(doc.type_label)?;
        if doc.rank != datum.rank() || doc.cartan != datum.cartan.to_i64_rows() {
            return Err(Error::Parse(format!(
                "Cartan data in document does not match type {}",
                doc.type_label
            )));
        }
        Ok(datum)
    }
}

/// Closure of the simple roots under simple reflections, keeping positive
/// roots only. `s_i(β) = β − ⟨β, α_i^∨⟩ α_i`.
pub fn positive_roots(d: &RootDatum) -> PositiveRootSet {
    let n = d.rank();
    let a = d.cartan.to_i64_rows();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| beta[j] * a[j][i]).sum();
            let mut image = beta.clone();
            image[i] -= pairing;
            if image.iter().all(|&c| c >= 0) && image.iter().any(|&c| c > 0) && seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    PositiveRootSet { roots }
}

/// `Z(G)` for the simply connected group: torsion of `X(T)/⟨Δ⟩`.
pub fn center(d: &RootDatum) -> FiniteAbelianGroup {
    cokernel_torsion(&d.cartan)
}

/// `H_J`, the component group of the center of the standard Levi `L_J`:
/// torsion of `X(T)/⟨α_j : j ∈ J⟩`.
pub fn levi_center_component_group(d: &RootDatum, j: &[usize]) -> Result<FiniteAbelianGroup> {
    check_subset(d, j)?;
    Ok(cokernel_torsion(&d.rows_of(j)))
}

pub(crate) fn check_subset(d: &RootDatum, j: &[usize]) -> Result<()> {
    if j.iter().any(|&i| i >= d.rank()) || j.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!(
            "{j:?} is not a sorted subset of the simple roots of {}",
            d.label
        )));
    }
    Ok(())
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// `p` divides no coefficient of the highest root.
pub fn is_good_prime(d: &RootDatum, p: u64) -> Result<bool> {
    require_prime(p)?;
    let roots = positive_roots(d);
    Ok(roots.highest().iter().all(|&c| !(c as u64).is_multiple_of(p)))
}

/// Singular cases: `p = 2` with a component of type B, C, F4 or G2, and
/// `p = 3` with type G2.
pub fn is_nonsingular_prime(d: &RootDatum, p: u64) -> Result<bool> {
    require_prime(p)?;
    let fam = d.label.family;
    let singular = (p == 2 && matches!(fam, Family::B | Family::C | Family::F | Family::G))
        || (p == 3 && fam == Family::G);
    Ok(!singular)
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not prime")))
    }
}

/// Degrees minus one of the basic invariants of the Weyl group.
pub fn exponents(label: TypeLabel) -> Vec<u32> {
    let n = label.rank as u32;
    match label.family {
        Family::A => (1..=n).collect(),
        Family::B | Family::C => (1..=n).map(|i| 2 * i - 1).collect(),
        Family::D => {
            let mut e: Vec<u32> = (1..n).map(|i| 2 * i - 1).collect();
            e.push(n - 1);
            e.sort_unstable();
            e
        }
        Family::E => match n {
            6 => vec![1, 4, 5, 7, 8, 11],
            7 => vec![1, 5, 7, 9, 11, 13, 17],
            _ => vec![1, 7, 11, 13, 17, 19, 23, 29],
        },
        Family::F => vec![1, 5, 7, 11],
        Family::G => vec![1, 5],
    }
}

/// `|G^F| = q^{|Φ⁺|} · Π (q^{e_i+1} − 1)`.
pub fn group_order(d: &RootDatum, q: u64) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::InvalidInput(format!("q = {q} must be at least 2")));
    }
    let q = BigUint::from(q);
    let npos = positive_roots(d).len() as u32;
    let mut order = q.pow(npos);
    for e in exponents(d.label) {
        order *= q.pow(e + 1) - BigUint::one();
    }
    Ok(order)
}

/// Convenience: `group_order` as `u64` when it fits.
pub fn group_order_u64(d: &RootDatum, q: u64) -> Result<Option<u64>> {
    Ok(group_order(d, q)?.to_u64())
}
