//! Dense linear algebra over `F_ℓ`, `ℓ < 2^32`.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, m: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(m));
    pow_mod(a, m - 2, m)
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<u64>>, ell: u64) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = inv_mod(rows[r][c], ell);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, ell);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..cols {
                    let sub = mul_mod(f, rows[r][j], ell);
                    rows[i][j] = (rows[i][j] + ell - sub) % ell;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : A v = 0}` for a square `A` given by rows.
pub fn nullspace(a: &[Vec<u64>], ell: u64) -> Vec<Vec<u64>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m = a.to_vec();
    let pivots = rref(&mut m, ell);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; n];
            v[f] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = (ell - row[f]) % ell;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(λI − A)` (monic, constant term first),
/// via reduction to upper Hessenberg form.
pub fn charpoly(a: &[Vec<u64>], ell: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    // similarity transforms to Hessenberg form
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| h[i][c] != 0) else {
            continue;
        };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let inv = inv_mod(h[c + 1][c], ell);
        for i in c + 2..n {
            let f = mul_mod(h[i][c], inv, ell);
            if f == 0 {
                continue;
            }
            // row_i -= f row_{c+1}; col_{c+1} += f col_i
            for j in 0..n {
                let sub = mul_mod(f, h[c + 1][j], ell);
                h[i][j] = (h[i][j] + ell - sub) % ell;
            }
            for row in h.iter_mut() {
                let add = mul_mod(f, row[i], ell);
                row[c + 1] = (row[c + 1] + add) % ell;
            }
        }
    }
    // p_k = characteristic polynomial of the leading k×k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let hk = h[k - 1][k - 1];
        // (λ − h_kk) p_{k−1}
        let prev = &polys[k - 1];
        let mut next = vec![0u64; k + 1];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % ell;
            next[i] = (next[i] + ell - mul_mod(hk, c, ell)) % ell;
        }
        let mut prod = 1u64;
        for m in (1..k).rev() {
            prod = mul_mod(prod, h[m][m - 1], ell);
            let coef = mul_mod(prod, h[m - 1][k - 1], ell);
            if coef == 0 {
                continue;
            }
            for (i, &c) in polys[m - 1].iter().enumerate() {
                next[i] = (next[i] + ell - mul_mod(coef, c, ell)) % ell;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

pub fn eval_poly(p: &[u64], x: u64, ell: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, ell) + c) % ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_small() {
        // [[2,1],[1,2]] over F_7: λ² − 4λ + 3
        let p = charpoly(&[vec![2, 1], vec![1, 2]], 7);
        assert_eq!(p, vec![3, 3, 1]);
        let a = vec![vec![1, 2, 3], vec![4, 5, 6], vec![0, 1, 1]];
        let p = charpoly(&a, 101);
        // det(A) = 1(5−6) − 2(4−0) + 3(4−0) = 3, trace 7
        assert_eq!(p[3], 1);
        assert_eq!(p[2], 101 - 7);
        assert_eq!(p[0], 101 - 3);
        // evaluating at each eigenvalue gives a singular matrix
        for lam in 0..101 {
            let shifted: Vec<Vec<u64>> = a
                .iter()
                .enumerate()
                .map(|(i, r)| r.iter().enumerate().map(|(j, &x)| if i == j { (x + 101 - lam) % 101 } else { x }).collect())
                .collect();
            assert_eq!(eval_poly(&p, lam, 101) == 0, !nullspace(&shifted, 101).is_empty());
        }
    }

    #[test]
    fn nullspace_basic() {
        let ns = nullspace(&[vec![1, 1], vec![1, 1]], 5);
        assert_eq!(ns, vec![vec![4, 1]]);
        assert_eq!(pow_mod(3, 4, 7), 4);
        assert_eq!(mul_mod(inv_mod(3, 7), 3, 7), 1);
    }
}
