//! Smith normal form over the integers.
//!
//! Pivoting always picks the nonzero entry of least absolute value in the
//! active submatrix, ties broken row-major, so results are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bits::Bits;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal matrix `D` with `d_1 | d_2 | ⋯`, all positive.
    pub d: IntMatrix,
    pub rank: usize,
    /// Unimodular transforms with `D = U M V`, when requested.
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
}

impl SmithForm {
    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Reducer {
    m: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.m.add_row_multiple(dst, src, f);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, f);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.m.add_col_multiple(dst, src, f);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, f);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.m.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    fn smallest_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let a = &self.m[(i, j)];
                if a.is_zero() {
                    continue;
                }
                let abs = a.abs();
                if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                    best = Some((i, j, abs));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clears row and column `t` outside the pivot; returns false if a
    /// nonzero remainder was left behind.
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        let p = self.m[(t, t)].clone();
        for i in t + 1..self.m.rows() {
            if self.m[(i, t)].is_zero() {
                continue;
            }
            let q = self.m[(i, t)].div_floor(&p);
            self.add_row(i, t, &-q);
            clean &= self.m[(i, t)].is_zero();
        }
        for j in t + 1..self.m.cols() {
            if self.m[(t, j)].is_zero() {
                continue;
            }
            let q = self.m[(t, j)].div_floor(&p);
            self.add_col(j, t, &-q);
            clean &= self.m[(t, j)].is_zero();
        }
        clean
    }

    fn run(mut self) -> SmithForm {
        let (rows, cols) = (self.m.rows(), self.m.cols());
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((i, j)) = self.smallest_from(t) else {
                break;
            };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            if !self.clear_cross(t) {
                continue;
            }
            let p = self.m[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !self.m[(i, j)].is_multiple_of(&p))
            });
            if let Some(i) = offender {
                self.add_row(t, i, &BigInt::one());
                continue;
            }
            if p.is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        SmithForm {
            d: self.m,
            rank: t,
            u: self.u,
            v: self.v,
        }
    }
}

/// Smith normal form with unimodular transforms `U`, `V` (`D = U M V`).
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    Reducer {
        m: m.clone(),
        u: Some(IntMatrix::identity(m.rows())),
        v: Some(IntMatrix::identity(m.cols())),
    }
    .run()
}

/// Smith normal form without transforms.
pub fn smith_diagonal(m: &IntMatrix) -> SmithForm {
    Reducer {
        m: m.clone(),
        u: None,
        v: None,
    }
    .run()
}

/// Rank over GF(2) of a list of bit vectors.
pub fn gf2_rank(vectors: &[Bits]) -> usize {
    let mut rows: Vec<Bits> = vectors.to_vec();
    let Some(len) = rows.first().map(Bits::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..len {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r.get(col) {
                r.xor_assign(&pivot);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(f: &SmithForm) -> Vec<i64> {
        f.invariant_factors()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn small_examples() {
        let f = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(diag(&f), vec![1, 1, 1]);
        let f = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(diag(&f), vec![1, 6]);
        let f = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(f.rank, 0);
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let m = IntMatrix::from_rows(&[vec![4, 6, -2], vec![2, 8, 10], vec![6, 14, 8]]);
        let f = smith_normal_form(&m);
        let (u, v) = (f.u.as_ref().unwrap(), f.v.as_ref().unwrap());
        assert_eq!(u.mul(&m).mul(v), f.d);
        assert!(u.determinant().abs().is_one());
        assert!(v.determinant().abs().is_one());
        assert_eq!(smith_diagonal(&m).d, f.d);
    }

    #[test]
    fn gf2_rank_small() {
        let b = |s: &str| Bits::from_fn(s.len(), |i| s.as_bytes()[i] == b'1');
        assert_eq!(gf2_rank(&[b("110"), b("011"), b("101")]), 2);
        assert_eq!(gf2_rank(&[]), 0);
    }
}
