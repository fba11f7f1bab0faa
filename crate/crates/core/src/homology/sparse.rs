//! Invariant factors of large sparse integer matrices.
//!
//! Unit pivots are eliminated first (shortest column, lightest row), which
//! preserves the invariant factors. The dense remainder, usually tiny, is
//! handed to the dense reducer.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::One;

use super::matrix::IntMatrix;
use super::snf::invariant_factors_dense;

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    /// Each column sorted by row, without zero entries.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        SparseMatrix { rows, columns }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] = BigInt::from(v);
            }
        }
        m
    }
}

type Column = Vec<(usize, i128)>;

/// `a - f * b` on sorted sparse columns; `None` on overflow.
fn axpy(a: &Column, f: i128, b: &Column) -> Option<Column> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(usize::MAX, |e| e.0);
        let rb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i]);
            i += 1;
        } else {
            let prod = f.checked_mul(b[j].1)?;
            let v = if ra == rb {
                let v = a[i].1.checked_sub(prod)?;
                i += 1;
                v
            } else {
                prod.checked_neg()?
            };
            j += 1;
            if v != 0 {
                out.push((rb, v));
            }
        }
    }
    Some(out)
}

struct Eliminator {
    cols: Vec<Column>,
    row_cols: Vec<HashSet<usize>>,
    queue: BTreeSet<(usize, usize)>,
    alive_rows: Vec<bool>,
    alive_cols: Vec<bool>,
    units: usize,
}

impl Eliminator {
    fn new(m: &SparseMatrix) -> Self {
        let cols: Vec<Column> = m
            .columns
            .iter()
            .map(|c| c.iter().map(|&(r, v)| (r, v as i128)).collect())
            .collect();
        let mut row_cols = vec![HashSet::new(); m.rows];
        let mut queue = BTreeSet::new();
        for (c, col) in cols.iter().enumerate() {
            for &(r, _) in col {
                row_cols[r].insert(c);
            }
            if !col.is_empty() {
                queue.insert((col.len(), c));
            }
        }
        Eliminator {
            cols,
            row_cols,
            queue,
            alive_rows: vec![true; m.rows],
            alive_cols: vec![true; m.columns.len()],
            units: 0,
        }
    }

    /// Returns false when an update overflowed; the state is then unchanged
    /// for the column being updated.
    fn run(&mut self) -> bool {
        while let Some((_, c)) = self.queue.pop_first() {
            let pivot = self.cols[c]
                .iter()
                .filter(|e| e.1 == 1 || e.1 == -1)
                .min_by_key(|e| self.row_cols[e.0].len())
                .copied();
            // a column without units may gain one later and is requeued then
            let Some((r, p)) = pivot else { continue };
            let others: Vec<usize> = self.row_cols[r].iter().copied().filter(|&o| o != c).collect();
            let pcol = std::mem::take(&mut self.cols[c]);
            for o in others {
                let v = self.cols[o]
                    .iter()
                    .find(|e| e.0 == r)
                    .map(|e| e.1)
                    .expect("row index out of sync");
                let Some(new) = axpy(&self.cols[o], v * p, &pcol) else {
                    self.cols[c] = pcol;
                    return false;
                };
                self.queue.remove(&(self.cols[o].len(), o));
                for &(row, _) in &self.cols[o] {
                    self.row_cols[row].remove(&o);
                }
                for &(row, _) in &new {
                    self.row_cols[row].insert(o);
                }
                if !new.is_empty() {
                    self.queue.insert((new.len(), o));
                }
                self.cols[o] = new;
            }
            for &(row, _) in &pcol {
                self.row_cols[row].remove(&c);
            }
            self.alive_rows[r] = false;
            self.alive_cols[c] = false;
            self.units += 1;
        }
        true
    }

    fn remainder(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.row_cols.len())
            .filter(|&r| self.alive_rows[r] && !self.row_cols[r].is_empty())
            .collect();
        let cols: Vec<usize> = (0..self.cols.len())
            .filter(|&c| self.alive_cols[c] && !self.cols[c].is_empty())
            .collect();
        let mut row_pos = vec![usize::MAX; self.row_cols.len()];
        for (i, &r) in rows.iter().enumerate() {
            row_pos[r] = i;
        }
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for &(r, v) in &self.cols[c] {
                m[(row_pos[r], j)] = BigInt::from(v);
            }
        }
        m
    }
}

/// Nonzero invariant factors of a sparse matrix, in divisibility order.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut e = Eliminator::new(m);
    if !e.run() {
        return invariant_factors_dense(&m.to_dense());
    }
    let mut out = vec![BigInt::one(); e.units];
    out.extend(invariant_factors_dense(&e.remainder()));
    out
}

/// Rank over the rationals, exact.
pub fn rank(m: &SparseMatrix) -> usize {
    invariant_factors(m).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axpy_merges_and_cancels() {
        let a = vec![(0, 1), (2, 3)];
        let b = vec![(1, 1), (2, 1)];
        assert_eq!(axpy(&a, 3, &b), Some(vec![(0, 1), (1, -3)]));
    }

    #[test]
    fn axpy_overflow_is_reported() {
        let a = vec![(0, i128::MAX)];
        let b = vec![(0, -1)];
        assert_eq!(axpy(&a, 1, &b), None);
    }

    #[test]
    fn matches_dense_on_a_small_case() {
        let m = SparseMatrix::new(3, vec![vec![(0, 2), (1, 2)], vec![(1, 1), (2, 1)], vec![(0, 2)]]);
        assert_eq!(invariant_factors(&m), invariant_factors_dense(&m.to_dense()));
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        assert_eq!(rank(&SparseMatrix::new(4, vec![vec![], vec![]])), 0);
    }
}
