//! Row reduction over a field: a dense routine for small matrices and an
//! incremental sparse echelon basis for large relation systems.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::scalar::Field;

/// Rank of a dense matrix (rows of equal length) by Gaussian elimination.
pub fn dense_rank<F: Field>(mut rows: Vec<Vec<F>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv();
        for x in rows[rank].iter_mut() {
            *x *= inv.clone();
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *x -= f.clone() * p.clone();
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A sparse vector: column indices with nonzero values.
pub type SparseRow<F> = Vec<(u32, F)>;

/// Row echelon basis over a fixed column range, built one row at a time.
/// Each stored row is monic and starts at its pivot column; all its other
/// entries lie to the right of the pivot.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F> {
    pivot_row: Vec<u32>,
    rows: Vec<SparseRow<F>>,
    entries: usize,
    acc: Vec<F>,
    queued: Vec<bool>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(columns: usize) -> Self {
        SparseEchelon {
            pivot_row: vec![u32::MAX; columns],
            rows: Vec::new(),
            entries: 0,
            acc: vec![F::zero(); columns],
            queued: vec![false; columns],
        }
    }

    pub fn columns(&self) -> usize {
        self.pivot_row.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Total number of stored nonzero entries.
    pub fn entries(&self) -> usize {
        self.entries
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != u32::MAX
    }

    /// Eliminates pivot columns from `v` in increasing order. With `full`
    /// false it stops at the first column without a pivot and returns the
    /// rest unreduced, which is all [`insert`](Self::insert) needs.
    fn eliminate(&mut self, v: &[(u32, F)], full: bool) -> SparseRow<F> {
        let mut heap = BinaryHeap::new();
        for (c, x) in v {
            let c = *c as usize;
            self.acc[c] += x.clone();
            if !self.queued[c] {
                self.queued[c] = true;
                heap.push(Reverse(c as u32));
            }
        }
        let mut out = Vec::new();
        while let Some(Reverse(c)) = heap.pop() {
            let c = c as usize;
            self.queued[c] = false;
            let x = std::mem::replace(&mut self.acc[c], F::zero());
            if x.is_zero() {
                continue;
            }
            let r = self.pivot_row[c];
            if r == u32::MAX {
                out.push((c as u32, x));
                if !full {
                    while let Some(Reverse(d)) = heap.pop() {
                        let d = d as usize;
                        self.queued[d] = false;
                        let y = std::mem::replace(&mut self.acc[d], F::zero());
                        if !y.is_zero() {
                            out.push((d as u32, y));
                        }
                    }
                    out[1..].sort_unstable_by_key(|e| e.0);
                }
                continue;
            }
            for (d, y) in &self.rows[r as usize][1..] {
                let d = *d as usize;
                self.acc[d] -= x.clone() * y.clone();
                if !self.queued[d] {
                    self.queued[d] = true;
                    heap.push(Reverse(d as u32));
                }
            }
        }
        out
    }

    /// Fully reduces `v`; the result is empty exactly when `v` lies in the
    /// span of the stored rows.
    pub fn reduce(&mut self, v: &[(u32, F)]) -> SparseRow<F> {
        self.eliminate(v, true)
    }

    /// Adds `v` to the basis; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[(u32, F)]) -> bool {
        let r = self.eliminate(v, false);
        let Some((pivot, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.inv();
        let row: SparseRow<F> = r.into_iter().map(|(c, x)| (c, x * inv.clone())).collect();
        self.entries += row.len();
        self.pivot_row[pivot as usize] = self.rows.len() as u32;
        self.rows.push(row);
        true
    }

    pub fn contains(&mut self, v: &[(u32, F)]) -> bool {
        self.reduce(v).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{FpA, Ring};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn dense_rank_small() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(dense_rank(m), 2);
        assert_eq!(dense_rank::<BigRational>(vec![]), 0);
        assert_eq!(dense_rank(vec![vec![q(0), q(0)]]), 0);
    }

    #[test]
    fn sparse_agrees_with_dense() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows: usize = rng.gen_range(1..8);
            let cols: usize = rng.gen_range(1..8);
            let m: Vec<Vec<i64>> =
                (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let dense = dense_rank(m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
            let mut e = SparseEchelon::<FpA>::new(cols);
            for r in &m {
                let row: Vec<(u32, FpA)> =
                    r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c as u32, FpA::from_i64(x))).collect();
                e.insert(&row);
            }
            assert_eq!(e.rank(), dense);
        }
    }

    #[test]
    fn membership() {
        let mut e = SparseEchelon::<BigRational>::new(3);
        assert!(e.insert(&[(0, q(1)), (2, q(1))]));
        assert!(e.insert(&[(1, q(1)), (2, q(-1))]));
        assert!(!e.insert(&[(0, q(2)), (1, q(2))]));
        assert!(e.contains(&[(0, q(1)), (1, q(1))]));
        assert!(!e.contains(&[(2, q(1))]));
        assert!(e.contains(&[]));
        assert_eq!(e.rank(), 2);
    }
}
