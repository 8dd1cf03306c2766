//! Split Frobenius maps acting on tori, their stabilizers and the center.
//!
//! A point of `T^F` is written `x ∈ (Z/(q−1))^r`, meaning
//! `t = Π α_k^∨(ζ^{x_k})` for a fixed generator `ζ` of `F_q^×`. Then
//! `α_i(t) = ζ^{(A x)_i}` with `A` the Cartan matrix.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    bigint_mod, fixed_point_order, lang_quotient, smith_normal_form, AbelianEndomorphism,
    FiniteAbelianGroup, IntMatrix,
};
use crate::rootdata::{center, check_subset, is_prime, levi_center_component_group, RootDatum};

/// `F_j = F₀^j` where `F₀` is the standard `p`-power map and `q = pⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitFrobenius {
    pub p: u64,
    pub n: u32,
    pub j: u32,
}

impl SplitFrobenius {
    pub fn new(p: u64, n: u32, j: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if n == 0 || j == 0 || !n.is_multiple_of(j) {
            return Err(Error::InvalidInput(format!("j = {j} must divide n = {n}")));
        }
        if p.checked_pow(n).is_none_or(|q| q > 1 << 40) {
            return Err(Error::InvalidInput(format!("{p}^{n} is too large")));
        }
        Ok(Self { p, n, j })
    }

    /// The Frobenius `F` itself (`j = n`).
    pub fn standard(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, n)
    }

    /// Same `q`, different level.
    pub fn at_level(&self, j: u32) -> Result<Self> {
        Self::new(self.p, self.n, j)
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// `q_j = p^j`.
    pub fn level_q(&self) -> u64 {
        self.p.pow(self.j)
    }

    /// `n / j`, the order of `F_j` on `F_q`.
    pub fn order(&self) -> u32 {
        self.n / self.j
    }
}

/// `T_J = ∩_{α∈J} ker α`, decomposed as `T_J° × H_J`.
///
/// With `U_J A_J V_J = D_J`, the coordinates `x' = V_J^{-1} x` split `T_J`
/// into torsion coordinates `k < |J|` (where `d_{J,k} x'_k ∈ Z`) and free
/// coordinates `k ≥ |J|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTorus {
    pub subset: Vec<usize>,
    pub free_rank: usize,
    pub component_group: FiniteAbelianGroup,
    /// Full diagonal `d_{J,k}` (length `|J|`), including ones.
    pub elementary_divisors: Vec<u64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inverse: IntMatrix,
    pub embedding_of_center: CenterEmbedding,
}

/// The center `Z = Π Z/d_k` sits in `T` as `V e_k / d_k`; `images[k]` holds
/// `V_J^{-1} V e_k`, so the generator has `T_J`-coordinates `images[k] / d_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterEmbedding {
    /// Full SNF diagonal of the Cartan matrix (length `r`).
    pub center_divisors: Vec<u64>,
    /// `V e_k` in torus coordinates.
    pub generators: Vec<Vec<i64>>,
    pub images: Vec<Vec<i64>>,
}

impl CenterEmbedding {
    /// `Z^F` as `Π Z/g_k` with `g_k = gcd(d_k, q−1)`, skipping trivial
    /// factors. Returns `(k, g_k)` pairs.
    pub fn fixed_factors(&self, q: u64) -> Vec<(usize, u64)> {
        self.center_divisors
            .iter()
            .enumerate()
            .map(|(k, &d)| (k, num_integer::gcd(d, q - 1)))
            .filter(|&(_, g)| g > 1)
            .collect()
    }

    /// Generators of `Z^F` as points of `T^F` in `x`-coordinates.
    pub fn fixed_generators(&self, q: u64) -> Vec<Vec<u64>> {
        let m = q - 1;
        self.fixed_factors(q)
            .into_iter()
            .map(|(k, g)| {
                self.generators[k]
                    .iter()
                    .map(|&v| (v.rem_euclid(m as i64) as u64) * (m / g) % m)
                    .collect()
            })
            .collect()
    }
}

pub fn stabilizer_torus(d: &RootDatum, j: &[usize]) -> Result<StabilizerTorus> {
    check_subset(d, j)?;
    let r = d.rank();
    let rows = d.rows_of(j);
    let snf = smith_normal_form(&rows);
    let elementary_divisors = snf.invariants_u64();
    let v_inverse = snf
        .v
        .unimodular_inverse()
        .ok_or_else(|| Error::Internal("SNF transform not unimodular".into()))?;
    let full = smith_normal_form(d.cartan());
    let center_divisors = full.invariants_u64();
    let mut generators = Vec::with_capacity(r);
    let mut images = Vec::with_capacity(r);
    for k in 0..r {
        let col = full.v.column(k);
        images.push(to_i64(&v_inverse.mul_vec(&col)));
        generators.push(to_i64(&col));
    }
    let st = StabilizerTorus {
        subset: j.to_vec(),
        free_rank: r - j.len(),
        component_group: levi_center_component_group(d, j)?,
        elementary_divisors,
        u: snf.u,
        v: snf.v,
        v_inverse,
        embedding_of_center: CenterEmbedding {
            center_divisors,
            generators,
            images,
        },
    };
    debug_assert_eq!(
        st.component_group.order(),
        st.elementary_divisors.iter().product::<u64>()
    );
    Ok(st)
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter()
        .map(|x| x.to_i64().expect("transform entry fits in i64"))
        .collect()
}

impl StabilizerTorus {
    /// Moduli of the coordinates of `T_J^F`: `gcd(d_{J,k}, q−1)` for the
    /// torsion part (ones kept) followed by `q−1` for each free coordinate.
    pub fn fixed_moduli(&self, q: u64) -> Vec<u64> {
        let mut m: Vec<u64> = self
            .elementary_divisors
            .iter()
            .map(|&d| num_integer::gcd(d, q - 1))
            .collect();
        m.extend(std::iter::repeat_n(q - 1, self.free_rank));
        m
    }

    /// `U_J y` reduced modulo `gcd(d_{J,k}, q−1)`.
    pub fn orbit_coordinates(&self, y: &[i64], q: u64) -> Vec<u64> {
        let yb: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
        let uy = self.u.mul_vec(&yb);
        uy.iter()
            .zip(&self.elementary_divisors)
            .map(|(v, &d)| bigint_mod(v, num_integer::gcd(d, q - 1)))
            .collect()
    }

    /// Maps a point `x` of `T_J^F` (torus coordinates, each mod `q−1`) to its
    /// `T_J^F` coordinates: `x'_k / ((q−1)/g_k)` for torsion `k`, `x'_k`
    /// otherwise. Returns `None` when `x ∉ T_J^F`.
    pub fn local_coordinates(&self, x: &[u64], q: u64) -> Option<Vec<u64>> {
        let m = q - 1;
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let xp = self.v_inverse.mul_vec(&xb);
        let moduli = self.fixed_moduli(q);
        let mut out = Vec::with_capacity(xp.len());
        for (k, (v, &g)) in xp.iter().zip(&moduli).enumerate() {
            let v = bigint_mod(v, m);
            if k < self.elementary_divisors.len() {
                let step = m / g;
                if !v.is_multiple_of(step) {
                    return None;
                }
                out.push(v / step);
            } else {
                out.push(v);
            }
        }
        Some(out)
    }

    /// Value `k` of `ψ` (coordinates reduced by [`Self::fixed_moduli`]) on
    /// a local point, where `ψ(x) = exp(2πi k / (q−1))`.
    pub fn pair_local(&self, psi: &[u64], local: &[u64], q: u64) -> u64 {
        let m = q - 1;
        let moduli = self.fixed_moduli(q);
        let mut acc: u128 = 0;
        for ((&c, &x), &g) in psi.iter().zip(local).zip(&moduli) {
            // c/g · x with g | m, scaled to denominator m
            acc += (c as u128) * (x as u128) * ((m / g) as u128);
        }
        (acc % m as u128) as u64
    }

    /// Restriction of `ψ` to `Z^F`: the index `ν_k = ψ·w_k mod g_k` on each
    /// nontrivial factor of `Z^F`.
    pub fn restrict_to_center(&self, psi: &[u64], q: u64) -> Vec<u64> {
        let emb = &self.embedding_of_center;
        emb.fixed_factors(q)
            .into_iter()
            .map(|(k, g)| {
                // the generator has T_J-coordinates images[k] / g, and ψ pairs
                // coordinates as exp(2πi c·x')
                let acc: i128 = psi
                    .iter()
                    .zip(&emb.images[k])
                    .map(|(&c, &w)| c as i128 * w as i128)
                    .sum();
                acc.rem_euclid(g as i128) as u64
            })
            .collect()
    }
}

/// `|T^{F_j}| = (q_j − 1)^r`.
pub fn torus_fixed_order(d: &RootDatum, fr: &SplitFrobenius) -> u64 {
    (fr.level_q() - 1).pow(d.rank() as u32)
}

/// `|T_J^{F_j}| = (q_j − 1)^{r−|J|} · |H_J^{F_j}|`.
pub fn stabilizer_fixed_order(st: &StabilizerTorus, fr: &SplitFrobenius) -> u64 {
    let qj = fr.level_q();
    let phi = AbelianEndomorphism::multiplication(&st.component_group, qj as i64);
    (qj - 1).pow(st.free_rank as u32) * fixed_point_order(&phi)
}

/// `H¹(F_j, Z) = Z / (q_j − 1)Z`.
pub fn h1_center(d: &RootDatum, fr: &SplitFrobenius) -> FiniteAbelianGroup {
    let z = center(d);
    lang_quotient(&AbelianEndomorphism::multiplication(&z, fr.level_q() as i64))
}

/// `Z^{F}` for `F = F_j`, in invariant-factor form.
pub fn center_fixed_points(d: &RootDatum, fr: &SplitFrobenius) -> FiniteAbelianGroup {
    let q = fr.level_q();
    let orders: Vec<u64> = smith_normal_form(d.cartan())
        .invariants_u64()
        .into_iter()
        .map(|dk| num_integer::gcd(dk, q - 1))
        .collect();
    FiniteAbelianGroup::from_cyclic_orders(&orders)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormClass {
    Trivial,
    Surjective,
}

/// Classifies the norm `Z^{F} → Z^{F_j}`, `z ↦ z·F_j(z)⋯F_j^{m−1}(z)` with
/// `m = n/j` and `F = F₀ⁿ`.
pub fn norm_map_classification(d: &RootDatum, p: u64, n: u32, j: u32) -> Result<NormClass> {
    let fr = SplitFrobenius::new(p, n, j)?;
    let z = center(d);
    if !z.is_trivial() && !is_prime(z.order()) {
        return Err(Error::NonPrimeCenter(z.order()));
    }
    let source = center_fixed_points(d, &SplitFrobenius::standard(p, n)?);
    if source.is_trivial() {
        return Ok(NormClass::Surjective);
    }
    let target = center_fixed_points(d, &fr);
    let qj = fr.level_q() as u128;
    let mut s: u128 = 0;
    let mut pw: u128 = 1;
    let modulus = source.exponent() as u128;
    for _ in 0..fr.order() {
        s = (s + pw) % modulus;
        pw = pw * qj % modulus;
    }
    let norm = AbelianEndomorphism::multiplication(&source, s as i64);
    if norm.is_zero_map() {
        return Ok(NormClass::Trivial);
    }
    if norm_image_order(&source, s as u64) == target.order() {
        Ok(NormClass::Surjective)
    } else {
        Err(Error::Internal(format!(
            "norm on {source} is neither trivial nor onto {target}"
        )))
    }
}

fn norm_image_order(source: &FiniteAbelianGroup, s: u64) -> u64 {
    source
        .invariant_factors()
        .iter()
        .map(|&d| d / num_integer::gcd(d, s % d))
        .product()
}
