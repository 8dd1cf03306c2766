//! Exact arithmetic in `Z[x]/Φ_e(x)`, `x = exp(2πi/e)`.

use num_integer::Integer;

/// Canonical form: coefficient vector of length `φ(e)` in the power basis.
pub type Cyc = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicRing {
    e: u64,
    phi: usize,
    /// `x^k mod Φ_e` for `0 ≤ k < e`.
    xpow: Vec<Cyc>,
}

/// `Φ_m` with integer coefficients, constant term first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    // x^m − 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Quotient of an exact division by a monic polynomial.
fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

impl CyclotomicRing {
    pub fn new(e: u64) -> Self {
        let e = e.max(1);
        let phi_poly = cyclotomic_polynomial(e);
        let phi = phi_poly.len() - 1;
        let mut xpow = Vec::with_capacity(e as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..e {
            xpow.push(cur.clone());
            // multiply by x and reduce the x^φ term
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * phi_poly[i];
                }
            }
        }
        Self { e, phi, xpow }
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(&self) -> Cyc {
        vec![0; self.phi]
    }

    pub fn integer(&self, n: i64) -> Cyc {
        let mut c = self.zero();
        c[0] = n;
        c
    }

    /// `x^k` for any integer `k`.
    pub fn root_power(&self, k: i64) -> Cyc {
        self.xpow[k.rem_euclid(self.e as i64) as usize].clone()
    }

    /// Canonical form of `Σ_k raw[k] x^k` with `raw` of length `e`.
    pub fn reduce(&self, raw: &[i64]) -> Cyc {
        let mut out = self.zero();
        for (k, &c) in raw.iter().enumerate() {
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(&self.xpow[k]) {
                    *o += c * b;
                }
            }
        }
        out
    }

    /// Dense length-`e` form of a canonical element.
    pub fn raw(&self, a: &Cyc) -> Vec<i64> {
        let mut r = vec![0; self.e as usize];
        r[..self.phi].copy_from_slice(a);
        r
    }

    /// `acc += s · a · conj(b)` with `acc` dense of length `e`.
    pub fn add_product_conj(&self, acc: &mut [i64], s: i64, a: &Cyc, b: &Cyc) {
        let e = self.e as usize;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    acc[(i + e - j) % e] += s * ai * bj;
                }
            }
        }
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let e = self.e as usize;
        let mut acc = vec![0i64; e];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                acc[(i + j) % e] += ai * bj;
            }
        }
        self.reduce(&acc)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn scale(&self, a: &Cyc, s: i64) -> Cyc {
        a.iter().map(|x| x * s).collect()
    }

    /// Complex conjugate (`x ↦ x^{-1}`).
    pub fn conj(&self, a: &Cyc) -> Cyc {
        let e = self.e as usize;
        let mut acc = vec![0i64; e];
        for (i, &c) in a.iter().enumerate() {
            acc[(e - i) % e] += c;
        }
        self.reduce(&acc)
    }

    /// Galois automorphism `x ↦ x^k`, `gcd(k, e) = 1`.
    pub fn galois(&self, a: &Cyc, k: u64) -> Cyc {
        debug_assert_eq!(k.gcd(&self.e), 1);
        let e = self.e as usize;
        let mut acc = vec![0i64; e];
        for (i, &c) in a.iter().enumerate() {
            acc[(i * k as usize) % e] += c;
        }
        self.reduce(&acc)
    }

    /// The integer value if `a` is rational.
    pub fn as_integer(&self, a: &Cyc) -> Option<i64> {
        a[1..].iter().all(|&c| c == 0).then_some(a[0])
    }

    /// Image in `F_ℓ` under `x ↦ r`.
    pub fn evaluate_mod(&self, a: &Cyc, r: u64, ell: u64) -> u64 {
        let mut acc = 0u128;
        let mut pw = 1u128;
        for &c in a {
            acc = (acc + (c.rem_euclid(ell as i64) as u128) * pw) % ell as u128;
            pw = pw * r as u128 % ell as u128;
        }
        acc as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(360).len() - 1, 96);
    }

    #[test]
    fn ring_identities() {
        let r = CyclotomicRing::new(12);
        let x = r.root_power(1);
        assert_eq!(r.mul(&r.root_power(5), &r.root_power(7)), r.integer(1));
        assert_eq!(r.conj(&x), r.root_power(11));
        // sum of all 12th roots of unity vanishes
        let mut s = r.zero();
        for k in 0..12 {
            s = r.add(&s, &r.root_power(k));
        }
        assert_eq!(s, r.zero());
        // |1 + x^4|² = 1 for a primitive cube root x^4
        let z = r.add(&r.integer(1), &r.root_power(4));
        let mut acc = vec![0; 12];
        r.add_product_conj(&mut acc, 1, &z, &z);
        assert_eq!(r.reduce(&acc), r.integer(1));
        assert_eq!(r.galois(&x, 5), r.root_power(5));
        assert_eq!(CyclotomicRing::new(1).integer(3), vec![3]);
    }
}
