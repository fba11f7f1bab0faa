//! Integer chain complex of a signed map.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::gmap::{DartId, Walker};
use crate::orientation::{boundary_terms, Marks, SignedGMap};

/// Sparse integer chain: cell index to coefficient, zeros omitted.
pub type Chain = BTreeMap<usize, BigInt>;

/// Cell bases (canonical darts) and boundary matrices `M_p : C_p -> C_{p-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    bases: Vec<Vec<DartId>>,
    /// `boundaries[0]` is the zero map to the empty group.
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Builds the complex from the signed incidence numbers of `s`.
    pub fn build(s: &SignedGMap) -> Result<Self> {
        let g = s.base();
        let n = g.dimension();
        let catalog = g.catalog();
        let bases: Vec<Vec<DartId>> = (0..=n)
            .map(|i| catalog.cells(i).iter().map(|c| c.canonical_dart).collect())
            .collect();
        let mut walker = Walker::new(g.num_darts());
        let mut covered = Marks::new(g.num_darts());
        let mut terms = Vec::new();
        let mut boundaries = vec![SparseMatrix::new(0, vec![Vec::new(); bases[0].len()])];
        for p in 1..=n {
            let mut columns = Vec::with_capacity(bases[p].len());
            for &d in &bases[p] {
                terms.clear();
                boundary_terms(g.alphas(), s.signs(), &mut walker, &mut covered, d, p, &mut terms);
                let mut col: BTreeMap<usize, i64> = BTreeMap::new();
                for &(x, v) in &terms {
                    *col.entry(catalog.cell_of(p - 1, x)).or_default() += v;
                }
                columns.push(col.into_iter().filter(|e| e.1 != 0).collect());
            }
            boundaries.push(SparseMatrix::new(bases[p - 1].len(), columns));
        }
        let cc = ChainComplex { bases, boundaries };
        cc.check_nilpotent()?;
        Ok(cc)
    }

    /// Assembles a complex from explicit matrices; `boundaries[p]` must have
    /// `sizes[p-1]` rows and `sizes[p]` columns.
    pub fn from_matrices(sizes: &[usize], boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != sizes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} boundary matrices for {} dimensions",
                boundaries.len(),
                sizes.len()
            )));
        }
        for (k, m) in boundaries.iter().enumerate() {
            let p = k + 1;
            if m.rows != sizes[p - 1] || m.cols() != sizes[p] {
                return Err(Error::DimensionMismatch(format!(
                    "M_{p} is {}x{}, expected {}x{}",
                    m.rows,
                    m.cols(),
                    sizes[p - 1],
                    sizes[p]
                )));
            }
            if let Some(bad) = m.columns.iter().flatten().find(|e| e.0 >= m.rows) {
                return Err(Error::DimensionMismatch(format!("row {} out of range in M_{p}", bad.0)));
            }
        }
        let mut all = vec![SparseMatrix::new(0, vec![Vec::new(); sizes.first().copied().unwrap_or(0)])];
        all.extend(boundaries);
        let cc = ChainComplex {
            bases: sizes.iter().map(|&k| (0..k).collect()).collect(),
            boundaries: all,
        };
        cc.check_nilpotent()?;
        Ok(cc)
    }

    fn check_nilpotent(&self) -> Result<()> {
        for p in 2..self.boundaries.len() {
            for (col, c) in self.boundaries[p].columns.iter().enumerate() {
                let chain: Chain = c.iter().map(|&(r, v)| (r, BigInt::from(v))).collect();
                if !self.boundary(p - 1, &chain).is_empty() {
                    return Err(Error::BoundaryNotNilpotent { dim: p, column: col });
                }
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.bases.len().saturating_sub(1)
    }

    /// Number of `p`-cells.
    pub fn size(&self, p: usize) -> usize {
        self.bases[p].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Canonical darts of the `p`-cells, in basis order.
    pub fn basis(&self, p: usize) -> &[DartId] {
        &self.bases[p]
    }

    /// `M_p`, or an empty map above the top dimension.
    pub fn matrix(&self, p: usize) -> SparseMatrix {
        match self.boundaries.get(p) {
            Some(m) => m.clone(),
            None => SparseMatrix::new(self.bases.get(p - 1).map_or(0, Vec::len), Vec::new()),
        }
    }

    /// Boundary of a `p`-chain.
    pub fn boundary(&self, p: usize, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        if p == 0 {
            return out;
        }
        let m = &self.boundaries[p];
        for (&c, k) in chain {
            for &(r, v) in &m.columns[c] {
                *out.entry(r).or_insert_with(BigInt::zero) += k * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Euler characteristic `sum (-1)^p |S^p|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(p, b)| if p % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }
}
