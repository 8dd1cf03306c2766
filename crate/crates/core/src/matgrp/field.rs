//! Table-driven arithmetic in `F_q`.
//!
//! An element is stored as the integer `Σ a_i p^i` of its coefficient vector
//! in the power basis of `F_p[x]/(f)`. The modulus `f` is the monic
//! irreducible polynomial of degree `n` whose lower coefficients have the
//! least such encoding; `ζ` is the least primitive element.

use crate::error::{Error, Result};
use crate::rootdata::is_prime;

/// Largest `q` for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct FqContext {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    zeta: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u32>,
    mul_table: Vec<u32>,
}

/// Fields up to this order also get full addition and multiplication tables.
const TABLE_ORDER: u32 = 1024;

type Poly = Vec<u32>;

fn decode(x: u32, p: u32, n: u32) -> Poly {
    let mut out = Vec::with_capacity(n as usize);
    let mut x = x;
    for _ in 0..n {
        out.push(x % p);
        x /= p;
    }
    out
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &a| acc * p + a)
}

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo monic `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mc) in m.iter().enumerate() {
            let v = ((r[shift + i] as u64 + p as u64 - (lead as u64 * mc as u64) % p as u64) % p as u64) as u32;
            r[shift + i] = v;
        }
        r = trim(r);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    poly_rem(&prod, m, p)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for deg in 1..=n / 2 {
        for low in 0..p.pow(deg as u32) {
            let mut g = decode(low, p, deg as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= m {
        if m.is_multiple_of(k) {
            out.push(k);
            while m.is_multiple_of(k) {
                m /= k;
            }
        }
        k += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl FqContext {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) || n == 0 {
            return Err(Error::InvalidInput(format!("cannot build F_{{{p}^{n}}}")));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::BoundExceeded {
                what: "field order",
                value: format!("{p}^{n}"),
                bound: MAX_FIELD_ORDER.to_string(),
            })?;
        let (p, q) = (p as u32, q as u32);
        let modulus = if n == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| {
                    let mut f = decode(low, p, n);
                    f.push(1);
                    f
                })
                .find(|f| is_irreducible(f, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let pow = |base: &Poly, mut e: u64| -> Poly {
            let mut acc: Poly = vec![1];
            let mut b = base.clone();
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mul_mod(&acc, &b, &modulus, p);
                }
                b = poly_mul_mod(&b, &b, &modulus, p);
                e >>= 1;
            }
            acc
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let one: Poly = vec![1];
        let zeta = (1..q)
            .find(|&g| {
                let gp = trim(decode(g, p, n));
                factors.iter().all(|&r| pow(&gp, order / r) != one)
            })
            .expect("F_q^× is cyclic");
        let mut exp = vec![0u32; q as usize - 1];
        let mut log = vec![u32::MAX; q as usize];
        let zp = trim(decode(zeta, p, n));
        let mut cur: Poly = vec![1];
        for (i, slot) in exp.iter_mut().enumerate() {
            let mut padded = cur.clone();
            padded.resize(n as usize, 0);
            let code = encode(&padded, p);
            *slot = code;
            log[code as usize] = i as u32;
            cur = poly_mul_mod(&cur, &zp, &modulus, p);
        }
        let mut ctx = Self {
            p,
            n,
            q,
            modulus,
            zeta,
            exp,
            log,
            add_table: Vec::new(),
            mul_table: Vec::new(),
        };
        if q <= TABLE_ORDER {
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(ctx.add_slow(a, b));
                    mul.push(ctx.mul_slow(a, b));
                }
            }
            ctx.add_table = add;
            ctx.mul_table = mul;
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zeta(&self) -> u32 {
        self.zeta
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if !self.add_table.is_empty() {
            return self.add_table[(a * self.q + b) as usize];
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.n == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.n == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.n {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if !self.mul_table.is_empty() {
            return self.mul_table[(a * self.q + b) as usize];
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    /// `ζ^e` for any integer `e`.
    pub fn zeta_pow(&self, e: i64) -> u32 {
        self.exp[e.rem_euclid((self.q - 1) as i64) as usize]
    }

    /// Discrete logarithm to base `ζ`; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = self.log[a as usize] as u128 * (e % (self.q as u64 - 1)) as u128;
        self.exp[(l % (self.q as u128 - 1)) as usize]
    }

    /// `a ↦ a^{p^j}`.
    pub fn frobenius(&self, a: u32, j: u32) -> u32 {
        self.pow(a, (self.p as u64).pow(j % self.n))
    }

    /// Embeds an integer through `F_p`.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    /// `Tr_{F_q/F_p}`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        for j in 0..self.n {
            acc = self.add(acc, self.frobenius(a, j));
        }
        debug_assert!(acc < self.p);
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, n) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2), (2, 3), (5, 1), (2, 4), (7, 1), (3, 3)] {
            let f = FqContext::new(p, n).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in [0, 1, q - 1, q / 2] {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        for (p, n) in [(2u64, 2u32), (3, 2), (2, 3), (3, 3), (5, 2)] {
            let f = FqContext::new(p, n).unwrap();
            let fixed: Vec<u32> = f.elements().filter(|&a| f.frobenius(a, 1) == a).collect();
            assert_eq!(fixed, (0..p as u32).collect::<Vec<_>>());
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn modulus_choice() {
        // x^2 + 1 is the least irreducible quadratic over F_3; x^2 + x + 1 over F_2
        assert_eq!(FqContext::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FqContext::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FqContext::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FqContext::new(5, 1).unwrap().zeta(), 2);
        assert_eq!(FqContext::new(7, 1).unwrap().zeta(), 3);
    }

    #[test]
    fn zeta_generates() {
        let f = FqContext::new(3, 2).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for e in 0..8 {
            seen.insert(f.zeta_pow(e));
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(f.trace(1), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FqContext::new(4, 1).is_err());
        assert!(matches!(FqContext::new(2, 30), Err(Error::BoundExceeded { .. })));
    }
}
