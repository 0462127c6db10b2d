//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::Matrix;

/// `d = u · a · v` with `d` diagonal, nonnegative, each diagonal entry
/// dividing the next, and `u`, `v` unimodular. `u_inv` is the inverse of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &Matrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Ops {
        u: Matrix::identity(m),
        u_inv: Matrix::identity(m),
    };
    let mut v = Matrix::identity(n);
    for t in 0..m.min(n) {
        // Bring the smallest nonzero entry of the trailing block to (t, t).
        let Some((pi, pj)) = min_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // Euclid down column t, always pivoting on the smallest entry.
            while let Some(i) = min_in_column(&d, t) {
                d.swap_rows(t, i);
                u.swap_rows(t, i);
                for r in t + 1..m {
                    let q = -nearest_quotient(&d[(r, t)], &d[(t, t)]);
                    d.add_row(r, t, &q);
                    u.add_row(r, t, &q);
                }
            }
            // Euclid along row t.
            while let Some(j) = min_in_row(&d, t) {
                d.swap_cols(t, j);
                v.swap_cols(t, j);
                for c in t + 1..n {
                    let q = -nearest_quotient(&d[(t, c)], &d[(t, t)]);
                    d.add_col(c, t, &q);
                    v.add_col(c, t, &q);
                }
            }
            if (t + 1..m).any(|i| !d[(i, t)].is_zero()) {
                continue;
            }
            // The pivot must divide the whole trailing block.
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::from(1);
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf {
        u: u.u,
        u_inv: u.u_inv,
        d,
        v,
    }
}

/// The row at or below `t` holding the smallest nonzero entry of column `t`,
/// if some entry below the diagonal is nonzero.
fn min_in_column(d: &Matrix, t: usize) -> Option<usize> {
    if (t + 1..d.rows()).all(|i| d[(i, t)].is_zero()) {
        return None;
    }
    (t..d.rows())
        .filter(|&i| !d[(i, t)].is_zero())
        .min_by_key(|&i| d[(i, t)].abs())
}

fn min_in_row(d: &Matrix, t: usize) -> Option<usize> {
    if (t + 1..d.cols()).all(|j| d[(t, j)].is_zero()) {
        return None;
    }
    (t..d.cols())
        .filter(|&j| !d[(t, j)].is_zero())
        .min_by_key(|&j| d[(t, j)].abs())
}

/// `x / p` rounded to the nearest integer, so the remainder is at most `|p|/2`.
fn nearest_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = x.div_mod_floor(p);
    if (&r + &r).abs() > p.abs() {
        q + 1
    } else {
        q
    }
}

/// Row operations applied to `u`, mirrored as column operations on its inverse.
struct Ops {
    u: Matrix,
    u_inv: Matrix,
}

impl Ops {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        self.u.add_row(target, source, k);
        self.u_inv.add_col(source, target, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

fn min_entry(d: &Matrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::matrix::int;

    fn check(a: &Matrix) -> Snf {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, Matrix::identity(a.rows()));
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                assert!(i == j || s.d[(i, j)].is_zero());
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            assert!(if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            });
        }
        s
    }

    #[test]
    fn zero_and_identity() {
        let s = check(&Matrix::zero(2, 3));
        assert_eq!((s.u, s.v), (Matrix::identity(2), Matrix::identity(3)));
        let s = check(&Matrix::identity(3));
        assert_eq!(s.d, Matrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        let a = Matrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        // gcd of entries is 2 and |det| = 8.
        assert_eq!(check(&a).diagonal(), vec![int(2), int(4)]);
    }

    #[test]
    fn divisibility_is_enforced() {
        let a = Matrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&a).diagonal(), vec![int(1), int(6)]);
        let b = Matrix::from_rows(&[vec![0, 0, 4], vec![0, 6, 0]]);
        assert_eq!(check(&b).diagonal(), vec![int(2), int(12)]);
    }
}
