use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// A finite abelian group `Z/d_1 × … × Z/d_k` with `d_1 | d_2 | … | d_k`,
/// every `d_i ≥ 2`. The empty list is the trivial group.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

/// Coordinates of an element, `h_i` taken modulo `d_i`.
pub type GroupElement = Vec<u64>;

/// A linear character `h ↦ exp(2πi Σ c_i h_i / d_i)`, stored by its
/// coefficient vector `c` (each `c_i` reduced modulo `d_i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharacterIndex(pub Vec<u64>);

impl CharacterIndex {
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for CharacterIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FiniteAbelianGroup {
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = invariant_factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidInput(format!(
                "invariant factor {bad} is smaller than 2"
            )));
        }
        if invariant_factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidInput(format!(
                "invariant factors {invariant_factors:?} do not form a divisibility chain"
            )));
        }
        Ok(Self { invariant_factors })
    }

    pub fn trivial() -> Self {
        Self {
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            Self {
                invariant_factors: vec![n],
            }
        }
    }

    /// Normalizes an arbitrary product of cyclic groups `Z/n_1 × …`.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let diag: Vec<i64> = orders
            .iter()
            .map(|&n| i64::try_from(n).expect("cyclic order fits in i64"))
            .collect();
        cokernel_torsion(&IntMatrix::diagonal(&diag))
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Exponent of the group (largest invariant factor, 1 if trivial).
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> GroupElement {
        vec![0; self.rank()]
    }

    /// All elements in mixed-radix order (first coordinate fastest).
    pub fn elements(&self) -> Vec<GroupElement> {
        mixed_radix(&self.invariant_factors)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> GroupElement {
        a.iter()
            .zip(b)
            .zip(&self.invariant_factors)
            .map(|((x, y), d)| (x + y) % d)
            .collect()
    }

    pub fn reduce(&self, coords: &[i64]) -> GroupElement {
        coords
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&x, &d)| x.rem_euclid(d as i64) as u64)
            .collect()
    }

    /// `χ_c(h) = exp(2πi k / exponent)`; returns `k`.
    pub fn pairing(&self, c: &CharacterIndex, h: &[u64]) -> u64 {
        let e = self.exponent();
        let mut acc = 0u128;
        for ((ci, hi), d) in c.0.iter().zip(h).zip(&self.invariant_factors) {
            acc += (*ci as u128) * (*hi as u128) * ((e / d) as u128);
        }
        (acc % e as u128) as u64
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) fn mixed_radix(moduli: &[u64]) -> Vec<Vec<u64>> {
    let total: u64 = moduli.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0u64; moduli.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for (c, &m) in cur.iter_mut().zip(moduli) {
            *c += 1;
            if *c < m {
                break;
            }
            *c = 0;
        }
    }
    out
}

/// Torsion subgroup of `Z^cols / ⟨rows of m⟩`.
pub fn cokernel_torsion(m: &IntMatrix) -> FiniteAbelianGroup {
    let snf = smith_normal_form(m);
    let factors = snf
        .invariants()
        .into_iter()
        .filter(|d| *d > BigInt::one())
        .map(|d| d.to_u64().expect("torsion factor exceeds u64"))
        .collect();
    FiniteAbelianGroup {
        invariant_factors: factors,
    }
}

/// An endomorphism of a finite abelian group, acting on coordinate column
/// vectors: `(φh)_i = Σ_j m_ij h_j mod d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianEndomorphism {
    group: FiniteAbelianGroup,
    matrix: IntMatrix,
}

impl AbelianEndomorphism {
    /// Fails unless `m_ij · d_j ≡ 0 (mod d_i)` for all `i, j`.
    pub fn new(group: FiniteAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        let k = group.rank();
        if matrix.rows() != k || matrix.cols() != k {
            return Err(Error::NotWellDefined(format!(
                "matrix is {}x{} but the group has rank {k}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let d = &group.invariant_factors;
        for i in 0..k {
            for j in 0..k {
                let v = &matrix[(i, j)] * BigInt::from(d[j]);
                if !(v % BigInt::from(d[i])).is_zero() {
                    return Err(Error::NotWellDefined(format!(
                        "entry ({i},{j}) = {} does not respect Z/{} -> Z/{}",
                        matrix[(i, j)],
                        d[j],
                        d[i]
                    )));
                }
            }
        }
        let mut out = Self { group, matrix };
        out.normalize();
        Ok(out)
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        Self::multiplication(group, 1)
    }

    /// Multiplication by an integer (the action of a split Frobenius `x ↦ x^q`
    /// on a finite diagonalizable group is multiplication by `q`).
    pub fn multiplication(group: &FiniteAbelianGroup, factor: i64) -> Self {
        let k = group.rank();
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = BigInt::from(factor);
        }
        let mut out = Self {
            group: group.clone(),
            matrix: m,
        };
        out.normalize();
        out
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    fn normalize(&mut self) {
        let d = self.group.invariant_factors.clone();
        for (i, di) in d.iter().enumerate() {
            let modulus = BigInt::from(*di);
            for j in 0..self.matrix.cols() {
                let v = self.matrix[(i, j)].mod_floor(&modulus);
                self.matrix[(i, j)] = v;
            }
        }
    }

    pub fn apply(&self, h: &[u64]) -> GroupElement {
        let k = self.group.rank();
        (0..k)
            .map(|i| {
                let d = self.group.invariant_factors[i] as i128;
                let mut acc: i128 = 0;
                for (j, &hj) in h.iter().enumerate() {
                    let m = self.matrix.get_i64(i, j) as i128;
                    acc = (acc + m * hj as i128).rem_euclid(d);
                }
                acc as u64
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group);
        let mut out = Self {
            group: self.group.clone(),
            matrix: &self.matrix * &other.matrix,
        };
        out.normalize();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group);
        let k = self.group.rank();
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = &self.matrix[(i, j)] + &other.matrix[(i, j)];
            }
        }
        let mut out = Self {
            group: self.group.clone(),
            matrix: m,
        };
        out.normalize();
        out
    }

    pub fn power(&self, e: u32) -> Self {
        let mut acc = Self::identity(&self.group);
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }

    /// `φ − id` as an integer matrix (not reduced; used for lattice work).
    fn minus_identity(&self) -> IntMatrix {
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            m[(i, i)] -= BigInt::one();
        }
        m
    }

    /// Whether two endomorphisms agree as maps on the group.
    pub fn same_map(&self, other: &Self) -> bool {
        self.group == other.group && self.matrix == other.matrix
    }

    pub fn is_zero_map(&self) -> bool {
        self.same_map(&Self::multiplication(&self.group, 0))
    }
}

/// `|{h : φ(h) = h}|`.
///
/// Lifts `ker(φ − 1)` to the lattice `K = {x ∈ Z^k : (φ−1)x ∈ D·Z^k}`, found as
/// the projection of the integer kernel of `[φ−1 | −D]`; then
/// `|ker| = |H| / [Z^k : K]`.
pub fn fixed_point_order(phi: &AbelianEndomorphism) -> u64 {
    let k = phi.group.rank();
    if k == 0 {
        return 1;
    }
    let diag: Vec<i64> = phi
        .group
        .invariant_factors
        .iter()
        .map(|&d| -(d as i64))
        .collect();
    let stacked = phi.minus_identity().hstack(&IntMatrix::diagonal(&diag));
    let snf = smith_normal_form(&stacked);
    let rank = snf.rank();
    // columns rank..2k of V span the integer kernel of the stacked map
    let mut gens = IntMatrix::zeros(k, 2 * k - rank);
    for (c, col) in (rank..2 * k).enumerate() {
        for i in 0..k {
            gens[(i, c)] = snf.v[(i, col)].clone();
        }
    }
    let lattice = smith_normal_form(&gens);
    let index: BigInt = lattice
        .invariants()
        .into_iter()
        .filter(|x| !x.is_zero())
        .product();
    debug_assert_eq!(lattice.rank(), k, "kernel lattice must have full rank");
    let order = BigInt::from(phi.group.order());
    debug_assert!((&order % &index).is_zero());
    (order / index).to_u64().expect("fixed-point order fits in u64")
}

/// `H / (φ − 1)H`, computed from the SNF of `[φ−1 | D]`.
pub fn lang_quotient(phi: &AbelianEndomorphism) -> FiniteAbelianGroup {
    let k = phi.group.rank();
    if k == 0 {
        return FiniteAbelianGroup::trivial();
    }
    let diag: Vec<i64> = phi
        .group
        .invariant_factors
        .iter()
        .map(|&d| d as i64)
        .collect();
    cokernel_torsion(&phi.minus_identity().hstack(&IntMatrix::diagonal(&diag)).transpose())
}

/// `id + φ + … + φ^{m−1}`.
pub fn norm_endomorphism(phi: &AbelianEndomorphism, m: u32) -> Result<AbelianEndomorphism> {
    if m == 0 {
        return Err(Error::InvalidInput("norm level m must be at least 1".into()));
    }
    let mut acc = AbelianEndomorphism::identity(&phi.group);
    let mut power = AbelianEndomorphism::identity(&phi.group);
    for _ in 1..m {
        power = phi.compose(&power);
        acc = acc.add(&power);
    }
    Ok(acc)
}

/// All `|H|` characters of `H`, in mixed-radix order.
pub fn characters(h: &FiniteAbelianGroup) -> Vec<CharacterIndex> {
    h.elements().into_iter().map(CharacterIndex).collect()
}

/// Sign helper for callers that reduce `BigInt` transforms modulo small moduli.
pub(crate) fn bigint_mod(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    debug_assert!(!r.is_negative());
    r.to_u64().expect("residue fits")
}
