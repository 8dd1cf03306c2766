use num_integer::Integer;

use super::cyclotomic::CyclotomicRing;
use super::modular::{charpoly, eval_poly, inv_mod, mul_mod, nullspace, pow_mod, rref};
use super::CharacterTable;
use crate::error::{Error, Result};
use crate::matgrp::MatGroup;
use crate::rootdata::is_prime;

/// Least prime `ℓ ≡ 1 (mod e)` with `ℓ > 2√|G|` and `ℓ ∤ |G|`.
fn choose_prime(e: u64, order: u64) -> u64 {
    let mut ell = e + 1;
    loop {
        if is_prime(ell) && (ell as u128) * (ell as u128) > 4 * order as u128 && !order.is_multiple_of(ell) {
            return ell;
        }
        ell += e;
    }
}

/// Least element of exact multiplicative order `e` modulo `ell`.
fn primitive_root_of_order(e: u64, ell: u64) -> u64 {
    let primes: Vec<u64> = (2..=e).filter(|&r| e.is_multiple_of(r) && is_prime(r)).collect();
    (1..ell)
        .find(|&x| pow_mod(x, e, ell) == 1 && primes.iter().all(|&r| pow_mod(x, e / r, ell) != 1))
        .unwrap_or(1)
}

struct ClassAlgebra {
    k: usize,
    /// `coeff[j][i][l]`: number of `x ∈ C_j` with `x⁻¹ z_l ∈ C_i`.
    coeff: Vec<Vec<Vec<u64>>>,
}

fn class_algebra(g: &MatGroup) -> ClassAlgebra {
    let cd = g.classes();
    let k = cd.len();
    let mut coeff = vec![vec![vec![0u64; k]; k]; k];
    let elements = g.element_list();
    for (l, z) in cd.representatives.iter().enumerate() {
        for (idx, w) in elements.iter().enumerate() {
            // w = x⁻¹ runs over C_{j'}; x⁻¹ z_l = w z_l
            let j = cd.inverse[cd.class_of[idx] as usize];
            let i = g.class_of(&g.mul(w, z)).expect("closed under products");
            coeff[j][i][l] += 1;
        }
    }
    ClassAlgebra { k, coeff }
}

/// Splits `F_ℓ^k` into common eigenlines of the class matrices.
fn common_eigenvectors(alg: &ClassAlgebra, ell: u64) -> Result<Vec<Vec<u64>>> {
    let k = alg.k;
    let identity: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut spaces = vec![identity];
    let mut done = Vec::new();
    for j in 1..k {
        if spaces.is_empty() {
            break;
        }
        let m = &alg.coeff[j];
        let mut next = Vec::new();
        for basis in spaces {
            let mut basis = basis;
            let pivots = rref(&mut basis, ell);
            let dim = basis.len();
            // R[s][t] = (M b_t)[pivot_s]
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| {
                    (0..k)
                        .map(|i| {
                            m[i].iter()
                                .zip(b)
                                .fold(0u64, |acc, (&a, &x)| (acc + mul_mod(a % ell, x, ell)) % ell)
                        })
                        .collect()
                })
                .collect();
            let r: Vec<Vec<u64>> = (0..dim)
                .map(|s| (0..dim).map(|t| images[t][pivots[s]]).collect())
                .collect();
            let poly = charpoly(&r, ell);
            let mut found = 0;
            for lambda in 0..ell {
                if eval_poly(&poly, lambda, ell) != 0 {
                    continue;
                }
                let shifted: Vec<Vec<u64>> = r
                    .iter()
                    .enumerate()
                    .map(|(s, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(t, &x)| if s == t { (x + ell - lambda) % ell } else { x })
                            .collect()
                    })
                    .collect();
                let coords = nullspace(&shifted, ell);
                found += coords.len();
                let sub: Vec<Vec<u64>> = coords
                    .iter()
                    .map(|c| {
                        (0..k)
                            .map(|i| {
                                c.iter()
                                    .zip(&basis)
                                    .fold(0u64, |acc, (&ct, b)| (acc + mul_mod(ct, b[i], ell)) % ell)
                            })
                            .collect()
                    })
                    .collect();
                if sub.len() == 1 {
                    done.push(sub.into_iter().next().unwrap());
                } else {
                    next.push(sub);
                }
            }
            if found != dim {
                return Err(Error::Internal(format!(
                    "class matrix {j} is not diagonalizable over F_{ell}"
                )));
            }
        }
        spaces = next;
    }
    if !spaces.is_empty() {
        if k == 1 {
            return Ok(vec![vec![1]]);
        }
        return Err(Error::Internal("eigenspaces failed to split".into()));
    }
    Ok(done)
}

/// Exact character table of an enumerated group.
pub fn dixon_schneider(g: &MatGroup) -> Result<CharacterTable> {
    let cd = g.classes();
    let k = cd.len();
    let order = g.element_list().len() as u64;
    let e = cd.orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
    let ell = choose_prime(e, order);
    let root = primitive_root_of_order(e, ell);
    let ring = CyclotomicRing::new(e);
    let alg = class_algebra(g);
    let vectors = common_eigenvectors(&alg, ell)?;
    if vectors.len() != k {
        return Err(Error::Internal(format!("{} eigenvectors for {k} classes", vectors.len())));
    }
    let power_maps: Vec<Vec<usize>> = (0..k)
        .map(|c| (0..cd.orders[c]).map(|s| g.power_class(c, s)).collect())
        .collect();
    let mut values = Vec::with_capacity(k);
    for v in vectors {
        let lead = v[0];
        if lead == 0 {
            return Err(Error::Internal("eigenvector vanishes at the identity".into()));
        }
        let li = inv_mod(lead, ell);
        let omega: Vec<u64> = v.iter().map(|&x| mul_mod(x, li, ell)).collect();
        // χ(1)² = |G| / Σ ω_i ω_{i'} / h_i
        let mut s = 0u64;
        for i in 0..k {
            let term = mul_mod(mul_mod(omega[i], omega[cd.inverse[i]], ell), inv_mod(cd.sizes[i] % ell, ell), ell);
            s = (s + term) % ell;
        }
        let deg_sq = mul_mod(order % ell, inv_mod(s, ell), ell);
        let degree = (1..)
            .take_while(|f: &u64| f * f <= order)
            .find(|&f| mul_mod(f, f, ell) == deg_sq)
            .ok_or_else(|| Error::Internal("no admissible degree".into()))?;
        let modular: Vec<u64> = (0..k)
            .map(|i| mul_mod(mul_mod(omega[i], degree, ell), inv_mod(cd.sizes[i] % ell, ell), ell))
            .collect();
        let mut row = Vec::with_capacity(k);
        for c in 0..k {
            let o = cd.orders[c];
            let zeta_o = pow_mod(root, e / o, ell);
            let o_inv = inv_mod(o % ell, ell);
            let mut raw = vec![0i64; e as usize];
            for t in 0..o {
                let mut acc = 0u64;
                for s in 0..o {
                    let chi = modular[power_maps[c][s as usize]];
                    let w = pow_mod(zeta_o, (o - (t * s) % o) % o, ell);
                    acc = (acc + mul_mod(chi, w, ell)) % ell;
                }
                let mult = mul_mod(acc, o_inv, ell);
                if mult > degree {
                    return Err(Error::Internal(format!(
                        "eigenvalue multiplicity {mult} exceeds degree {degree}"
                    )));
                }
                raw[(t * (e / o)) as usize] += mult as i64;
            }
            row.push(ring.reduce(&raw));
        }
        values.push(row);
    }
    let table = CharacterTable::from_parts(
        order,
        cd.sizes.clone(),
        cd.orders.clone(),
        cd.inverse.clone(),
        ring,
        values,
        ell,
        root,
    )?;
    table.check_orthogonality()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgrp::{build_group, DEFAULT_MAX_GROUP_ORDER};
    use crate::rootdata::build_root_datum;

    fn table(s: &str, p: u64, n: u32) -> (MatGroup, CharacterTable) {
        let g = build_group(&build_root_datum(s.parse().unwrap()).unwrap(), p, n, DEFAULT_MAX_GROUP_ORDER).unwrap();
        let t = dixon_schneider(&g).unwrap();
        (g, t)
    }

    #[test]
    fn prime_choice() {
        assert_eq!(choose_prime(12, 24), 13);
        assert_eq!(choose_prime(1, 1), 3);
        assert_eq!(primitive_root_of_order(1, 3), 1);
        let ell = choose_prime(120, 720);
        assert_eq!(ell, 241);
        let r = primitive_root_of_order(120, ell);
        assert_eq!(pow_mod(r, 120, ell), 1);
        assert_ne!(pow_mod(r, 60, ell), 1);
    }

    #[test]
    fn sl2_3() {
        let (_, t) = table("A1", 3, 1);
        assert_eq!(t.degrees(), &[1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(t.p_prime_rows(3).len(), 6);
    }

    #[test]
    fn sl2_5() {
        let (_, t) = table("A1", 5, 1);
        assert_eq!(t.degrees(), &[1, 2, 2, 3, 3, 4, 4, 5, 6]);
        assert_eq!(t.p_prime_rows(5).len(), 8);
    }

    #[test]
    fn round_trips() {
        let (_, t) = table("A1", 3, 1);
        let doc = t.document();
        let json = serde_json::to_string(&doc).unwrap();
        let back = CharacterTable::from_document(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, t);
        let tsv = t.to_tsv();
        let back = CharacterTable::from_tsv(&tsv).unwrap();
        assert_eq!(back.degrees(), t.degrees());
        assert_eq!(back.to_tsv(), tsv);
    }

    #[test]
    fn sl2_5_diagonal_swaps_pairs() {
        let (g, t) = table("A1", 5, 1);
        let pi = t.automorphism_action(&g, &g.diagonal_automorphism()).unwrap();
        let moved: Vec<u64> = (0..t.len()).filter(|&i| pi[i] != i).map(|i| t.degrees()[i]).collect();
        assert_eq!(moved, vec![2, 2, 3, 3]);
        let z = g.class_of(&g.center_generators().unwrap()[0]).unwrap();
        let nus: Vec<u64> = (0..t.len()).map(|i| t.central_character(i, z).unwrap()).collect();
        assert_eq!(nus.iter().filter(|&&v| v == 1).count(), 4);
    }

    #[test]
    fn sp4_3_and_sl3_4() {
        let (_, t) = table("C2", 3, 1);
        assert_eq!((t.len(), t.p_prime_rows(3).len()), (34, 18));
        let (g, t) = table("A2", 2, 2);
        assert_eq!(t.len(), 28);
        let z = g.class_of(&g.center_generators().unwrap()[0]).unwrap();
        for nu in 0..3 {
            let rows = t.p_prime_rows(2).into_iter().filter(|&i| t.central_character(i, z).unwrap() == nu);
            assert_eq!(rows.count(), 8);
        }
    }
}
