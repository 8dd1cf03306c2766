use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;

/// `u · source · v = diagonal`, with `u`, `v` unimodular and the diagonal
/// entries forming a divisibility chain with zeros last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub source: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1 | d_2 | ...` (length `min(rows, cols)`).
    pub fn invariants(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|x| !x.is_zero()).count()
    }

    /// Diagonal entries as `u64`; panics if one is too large.
    pub fn invariants_u64(&self) -> Vec<u64> {
        self.invariants()
            .iter()
            .map(|x| x.to_u64().expect("invariant factor exceeds u64"))
            .collect()
    }

    /// Checks every structural invariant; used by tests and debug assertions.
    pub fn verify(&self) -> bool {
        let prod = &(&self.u * &self.source) * &self.v;
        if prod != self.d || !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let diag = self.invariants();
        if diag.iter().any(|x| x.is_negative()) {
            return false;
        }
        diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        })
    }
}

/// Smith normal form with explicit transforms.
///
/// Elementary reduction with the smallest nonzero entry (in absolute value)
/// of the active block as pivot.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&a, t) else {
                // active block is zero
                return finish(a, u, v, m);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &pivot);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[(i, j)] % &pivot).is_zero()));
            if let Some(i) = offender {
                let one = BigInt::from(1);
                a.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v, m)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, source: &IntMatrix) -> SmithDecomposition {
    let out = SmithDecomposition {
        u,
        d,
        v,
        source: source.clone(),
    };
    debug_assert!(out.verify(), "SNF postcondition failed for {:?}", source);
    out
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
        let s = smith_normal_form(&IntMatrix::from_rows(cols, rows));
        assert!(s.verify());
        s.invariants().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn one_by_one() {
        assert_eq!(diag_of(&[vec![2]], 1), vec![2]);
        assert_eq!(diag_of(&[vec![-7]], 1), vec![7]);
    }

    #[test]
    fn identity_is_fixed() {
        assert_eq!(diag_of(&[vec![1, 0], vec![0, 1]], 2), vec![1, 1]);
    }

    #[test]
    fn cartan_c2() {
        assert_eq!(diag_of(&[vec![2, -1], vec![-2, 2]], 2), vec![1, 2]);
    }

    #[test]
    fn divisibility_forced() {
        // diag(2,3) is not in normal form; SNF is diag(1,6)
        assert_eq!(diag_of(&[vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
    }

    #[test]
    fn rectangular_and_degenerate() {
        assert_eq!(diag_of(&[vec![-2, 2]], 2), vec![2]);
        assert_eq!(diag_of(&[vec![0, 0], vec![0, 0], vec![4, 6]], 2), vec![2, 0]);
        let empty = smith_normal_form(&IntMatrix::zeros(0, 3));
        assert!(empty.verify());
        assert_eq!(empty.v.rows(), 3);
    }

    /// Exhaustive reduction checker: the gcd of all k×k minors equals
    /// d_1·…·d_k, which pins the invariant factors independently of the
    /// elimination path.
    #[test]
    fn minors_oracle_on_examples() {
        let rows = vec![vec![2, -1], vec![-2, 2]];
        let m = IntMatrix::from_rows(2, &rows);
        let g1 = [2i64, -1, -2, 2].iter().fold(0, |g, &x| num_integer::gcd(g, x));
        let g2 = m.determinant().abs().to_i64().unwrap();
        assert_eq!(diag_of(&rows, 2), vec![g1, g2 / g1]);
    }
}
