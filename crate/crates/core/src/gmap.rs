//! n-dimensional generalized maps.
//!
//! A generalized map is a finite set of darts together with `n + 1`
//! involutions `alpha_0 .. alpha_n`. Darts are dense indices and each
//! involution is stored as a flat table, so `alpha[i][d]` is the image of
//! dart `d` by `alpha_i`.
//!
//! Cells are orbits: the `i`-cell containing `d` is the orbit of `d` under
//! every involution except `alpha_i`. A cell is identified by its canonical
//! dart, the smallest dart it contains.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a dart, dense in `0..num_darts`.
pub type DartId = usize;

/// Involution indices packed as a bit set (bit `i` set means `alpha_i`).
pub type InvolutionMask = u32;

/// Largest supported dimension.
pub const MAX_DIMENSION: usize = 30;

/// Mask of every involution of an `n`-gmap except `alpha_i`.
#[inline]
pub fn cell_mask(n: usize, i: usize) -> InvolutionMask {
    all_mask(n) & !(1 << i)
}

/// Mask of `alpha_0 .. alpha_n`.
#[inline]
pub fn all_mask(n: usize) -> InvolutionMask {
    ((1u64 << (n + 1)) - 1) as InvolutionMask
}

/// Mask of `alpha_lo ..= alpha_hi`, empty when `hi < lo`.
#[inline]
pub fn range_mask(lo: usize, hi: isize) -> InvolutionMask {
    if hi < lo as isize {
        0
    } else {
        let hi = hi as usize;
        (((1u64 << (hi + 1)) - 1) as InvolutionMask) & !(((1u64 << lo) - 1) as InvolutionMask)
    }
}

fn mask_from_indices(indices: &[usize]) -> InvolutionMask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

/// An n-dimensional generalized map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GMap {
    dim: usize,
    alpha: Vec<Vec<DartId>>,
}

/// A single broken axiom found by [`GMap::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `alpha_i(d)` points outside the dart set.
    OutOfRange { i: usize, d: DartId, image: DartId },
    /// `alpha_i(alpha_i(d)) != d`.
    NotInvolution { i: usize, d: DartId },
    /// `alpha_i . alpha_j` is not an involution at `d` (with `j >= i + 2`).
    NotCommuting { i: usize, j: usize, d: DartId },
}

/// Result of [`GMap::validate`]; empty iff the map satisfies every axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An `i`-cell: one orbit of the darts under every involution but `alpha_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub dim: usize,
    /// Sorted darts of the orbit.
    pub darts: Vec<DartId>,
    pub canonical_dart: DartId,
}

impl Cell {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn contains(&self, d: DartId) -> bool {
        self.darts.binary_search(&d).is_ok()
    }
}

/// Every cell of a map, per dimension, in canonical-dart order.
#[derive(Clone, Debug)]
pub struct CellCatalog {
    cells: Vec<Vec<Cell>>,
    index: Vec<Vec<usize>>,
}

impl CellCatalog {
    pub fn dimension(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn cells(&self, i: usize) -> &[Cell] {
        &self.cells[i]
    }

    /// Index (within dimension `i`) of the `i`-cell containing `d`.
    pub fn cell_of(&self, i: usize, d: DartId) -> usize {
        self.index[i][d]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }
}

/// Reusable traversal state: a stamp-based visited mark and a work stack.
#[derive(Debug, Default)]
pub(crate) struct Walker {
    mark: Vec<u32>,
    stamp: u32,
    stack: Vec<DartId>,
}

impl Walker {
    pub(crate) fn new(num_darts: usize) -> Self {
        Walker {
            mark: vec![0; num_darts],
            stamp: 0,
            stack: Vec::new(),
        }
    }

    fn next_stamp(&mut self) -> u32 {
        if self.stamp == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 0;
        }
        self.stamp += 1;
        self.stamp
    }

    /// Breadth-first orbit of `d` under the involutions in `mask`, appended to `out`.
    pub(crate) fn orbit_into(
        &mut self,
        alpha: &[Vec<DartId>],
        d: DartId,
        mask: InvolutionMask,
        out: &mut Vec<DartId>,
    ) {
        if self.mark.len() < alpha.first().map_or(0, Vec::len) {
            self.mark.resize(alpha[0].len(), 0);
        }
        let s = self.next_stamp();
        let start = out.len();
        self.mark[d] = s;
        out.push(d);
        let mut head = start;
        while head < out.len() {
            let x = out[head];
            head += 1;
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                let y = alpha[i][x];
                if self.mark[y] != s {
                    self.mark[y] = s;
                    out.push(y);
                }
            }
        }
    }

    pub(crate) fn orbit(&mut self, alpha: &[Vec<DartId>], d: DartId, mask: InvolutionMask) -> Vec<DartId> {
        let mut out = Vec::new();
        self.orbit_into(alpha, d, mask, &mut out);
        out
    }

    /// Depth-first search with an early exit: true when `pred` holds for some
    /// dart of the orbit.
    pub(crate) fn orbit_any(
        &mut self,
        alpha: &[Vec<DartId>],
        d: DartId,
        mask: InvolutionMask,
        mut pred: impl FnMut(DartId) -> bool,
    ) -> bool {
        let s = self.next_stamp();
        self.stack.clear();
        self.stack.push(d);
        self.mark[d] = s;
        while let Some(x) = self.stack.pop() {
            if pred(x) {
                return true;
            }
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                let y = alpha[i][x];
                if self.mark[y] != s {
                    self.mark[y] = s;
                    self.stack.push(y);
                }
            }
        }
        false
    }
}

impl GMap {
    /// A map of `num_darts` darts where every involution is the identity.
    pub fn new(dim: usize, num_darts: usize) -> Self {
        assert!(dim <= MAX_DIMENSION, "dimension {dim} exceeds {MAX_DIMENSION}");
        GMap {
            dim,
            alpha: (0..=dim).map(|_| (0..num_darts).collect()).collect(),
        }
    }

    /// Builds a map from raw involution tables, one per index `0..=n`.
    ///
    /// Table lengths and dart ranges are checked; the involution axioms are
    /// not (see [`GMap::validate`]).
    pub fn from_alphas(alpha: Vec<Vec<DartId>>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::MalformedTable("no involution tables".into()));
        }
        let dim = alpha.len() - 1;
        if dim > MAX_DIMENSION {
            return Err(Error::DimensionOutOfRange { index: dim, dim: MAX_DIMENSION });
        }
        let num_darts = alpha[0].len();
        for (i, row) in alpha.iter().enumerate() {
            if row.len() != num_darts {
                return Err(Error::MalformedTable(format!(
                    "alpha{i} has {} entries, expected {num_darts}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= num_darts) {
                return Err(Error::DartOutOfRange { dart: bad, num_darts });
            }
        }
        Ok(GMap { dim, alpha })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn num_darts(&self) -> usize {
        self.alpha[0].len()
    }

    pub fn darts(&self) -> std::ops::Range<DartId> {
        0..self.num_darts()
    }

    #[inline]
    pub fn alpha(&self, i: usize, d: DartId) -> DartId {
        self.alpha[i][d]
    }

    pub fn alphas(&self) -> &[Vec<DartId>] {
        &self.alpha
    }

    #[cfg(test)]
    pub(crate) fn set_alpha(&mut self, i: usize, d: DartId, e: DartId) {
        self.alpha[i][d] = e;
    }

    /// Links `d` and `e` by `alpha_i` in both directions.
    pub fn sew(&mut self, i: usize, d: DartId, e: DartId) {
        self.alpha[i][d] = e;
        self.alpha[i][e] = d;
    }

    /// True iff `alpha_i(d) = d`.
    #[inline]
    pub fn is_free(&self, d: DartId, i: usize) -> bool {
        self.alpha[i][d] == d
    }

    fn check_dart(&self, d: DartId) -> Result<()> {
        if d >= self.num_darts() {
            return Err(Error::DartOutOfRange { dart: d, num_darts: self.num_darts() });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i > self.dim {
            return Err(Error::DimensionOutOfRange { index: i, dim: self.dim });
        }
        Ok(())
    }

    /// Checks the involution axiom and the commutation axiom for every dart.
    pub fn validate(&self) -> ValidationReport {
        let n = self.num_darts();
        let mut violations = Vec::new();
        for i in 0..=self.dim {
            for d in 0..n {
                let e = self.alpha[i][d];
                if e >= n {
                    violations.push(Violation::OutOfRange { i, d, image: e });
                } else if self.alpha[i][e] != d {
                    violations.push(Violation::NotInvolution { i, d });
                }
            }
        }
        if !violations.is_empty() {
            // composition checks below would index out of range
            return ValidationReport { violations };
        }
        for i in 0..=self.dim {
            for j in (i + 2)..=self.dim {
                for d in 0..n {
                    let x = self.alpha[i][self.alpha[j][d]];
                    if self.alpha[i][self.alpha[j][x]] != d {
                        violations.push(Violation::NotCommuting { i, j, d });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Orbit of `d` under the listed involutions, in breadth-first order.
    pub fn orbit(&self, d: DartId, indices: &[usize]) -> Result<Vec<DartId>> {
        self.check_dart(d)?;
        for &i in indices {
            self.check_index(i)?;
        }
        Ok(self.orbit_mask(d, mask_from_indices(indices)))
    }

    pub(crate) fn orbit_mask(&self, d: DartId, mask: InvolutionMask) -> Vec<DartId> {
        Walker::new(self.num_darts()).orbit(&self.alpha, d, mask)
    }

    /// The `i`-cell containing `d`.
    pub fn cell(&self, d: DartId, i: usize) -> Result<Cell> {
        self.check_dart(d)?;
        self.check_index(i)?;
        let mut darts = self.orbit_mask(d, cell_mask(self.dim, i));
        darts.sort_unstable();
        Ok(Cell {
            dim: i,
            canonical_dart: darts[0],
            darts,
        })
    }

    /// All `i`-cells, sorted by canonical dart.
    pub fn all_cells(&self, i: usize) -> Result<Vec<Cell>> {
        self.check_index(i)?;
        let (cells, _) = self.cells_of_dimension(i, &mut Walker::new(self.num_darts()));
        Ok(cells)
    }

    fn cells_of_dimension(&self, i: usize, walker: &mut Walker) -> (Vec<Cell>, Vec<usize>) {
        let n = self.num_darts();
        let mask = cell_mask(self.dim, i);
        let mut index = vec![usize::MAX; n];
        let mut cells = Vec::new();
        for d in 0..n {
            if index[d] != usize::MAX {
                continue;
            }
            let mut darts = walker.orbit(&self.alpha, d, mask);
            for &x in &darts {
                index[x] = cells.len();
            }
            darts.sort_unstable();
            cells.push(Cell {
                dim: i,
                canonical_dart: d,
                darts,
            });
        }
        (cells, index)
    }

    /// Cells of every dimension.
    pub fn catalog(&self) -> CellCatalog {
        let mut walker = Walker::new(self.num_darts());
        let (cells, index) = (0..=self.dim)
            .map(|i| self.cells_of_dimension(i, &mut walker))
            .unzip();
        CellCatalog { cells, index }
    }

    fn distinct_cells_touching(&self, c: &Cell, dim: usize) -> usize {
        let mut walker = Walker::new(self.num_darts());
        let mask = cell_mask(self.dim, dim);
        let mut seen = vec![false; self.num_darts()];
        let mut count = 0;
        let mut buf = Vec::new();
        for &d in &c.darts {
            if seen[d] {
                continue;
            }
            count += 1;
            buf.clear();
            walker.orbit_into(&self.alpha, d, mask, &mut buf);
            for &x in &buf {
                seen[x] = true;
            }
        }
        count
    }

    /// Number of distinct `(i+1)`-cells incident to the `i`-cell `c`.
    pub fn degree(&self, c: &Cell) -> Result<usize> {
        if c.dim >= self.dim {
            return Err(Error::DimensionOutOfRange { index: c.dim + 1, dim: self.dim });
        }
        Ok(self.distinct_cells_touching(c, c.dim + 1))
    }

    /// Number of distinct `(i-1)`-cells incident to the `i`-cell `c`.
    pub fn codegree(&self, c: &Cell) -> Result<usize> {
        if c.dim == 0 || c.dim > self.dim {
            return Err(Error::DimensionOutOfRange { index: c.dim.wrapping_sub(1), dim: self.dim });
        }
        Ok(self.distinct_cells_touching(c, c.dim - 1))
    }

    /// Two `i`-cells are adjacent when some dart of one is `alpha_i`-linked
    /// to a dart of the other.
    pub fn adjacent(&self, c1: &Cell, c2: &Cell) -> bool {
        c1.dim == c2.dim
            && c1.darts.iter().any(|&d| c2.contains(self.alpha[c1.dim][d]))
    }

    /// Renumbers the darts for which `keep` is true to `0..k`, preserving
    /// order. Returns the compacted map and the old-to-new index map.
    ///
    /// Every kept dart must only be linked to kept darts.
    pub fn compact(&self, keep: &[bool]) -> (GMap, Vec<Option<DartId>>) {
        let mut map = vec![None; self.num_darts()];
        let mut next = 0;
        for (d, &k) in keep.iter().enumerate() {
            if k {
                map[d] = Some(next);
                next += 1;
            }
        }
        let alpha = self
            .alpha
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(d, _)| keep[d])
                    .map(|(_, &e)| map[e].expect("kept dart linked to a dropped dart"))
                    .collect()
            })
            .collect();
        (GMap { dim: self.dim, alpha }, map)
    }

    /// Number of cells per dimension.
    pub fn cell_counts(&self) -> Vec<usize> {
        self.catalog().counts()
    }
}

/// Two cells are incident when they differ and share at least one dart.
pub fn incident(c1: &Cell, c2: &Cell) -> bool {
    if c1 == c2 {
        return false;
    }
    let (small, large) = if c1.len() <= c2.len() { (c1, c2) } else { (c2, c1) };
    small.darts.iter().any(|&d| large.contains(d))
}

/// Distinct darts in a sorted set (convenience for tests and reports).
pub fn dart_set(darts: impl IntoIterator<Item = DartId>) -> BTreeSet<DartId> {
    darts.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_dart_is_valid() {
        let g = GMap::new(3, 1);
        assert!(g.validate().is_valid());
        assert_eq!(g.cell(0, 0).unwrap().darts, vec![0]);
        assert!(g.is_free(0, 2));
    }

    #[test]
    fn broken_involution_is_reported() {
        let mut g = GMap::new(2, 2);
        g.sew(0, 0, 1);
        g.set_alpha(2, 1, 0);
        let report = g.validate();
        assert!(report.violations.contains(&Violation::NotInvolution { i: 2, d: 1 }));
    }

    #[test]
    fn empty_orbit_generators() {
        let mut g = GMap::new(1, 2);
        g.sew(0, 0, 1);
        assert_eq!(g.orbit(1, &[]).unwrap(), vec![1]);
        assert!(g.orbit(5, &[0]).is_err());
        assert!(g.orbit(0, &[2]).is_err());
    }

    #[test]
    fn zero_gmap_cells_are_single_darts() {
        let g = GMap::new(0, 3);
        let cells = g.all_cells(0).unwrap();
        assert_eq!(cells.len(), 3);
        assert!(cells.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn empty_map_has_empty_catalog() {
        let g = GMap::new(2, 0);
        assert_eq!(g.catalog().counts(), vec![0, 0, 0]);
    }

    #[test]
    fn isolated_edge_codegree() {
        // one edge, two 0-free ends
        let mut g = GMap::new(1, 2);
        g.sew(0, 0, 1);
        let e = g.cell(0, 1).unwrap();
        assert_eq!(g.codegree(&e).unwrap(), 2);
        assert!(g.degree(&e).is_err());
    }

    #[test]
    fn masks() {
        assert_eq!(cell_mask(2, 1), 0b101);
        assert_eq!(range_mask(0, -1), 0);
        assert_eq!(range_mask(1, 3), 0b1110);
        assert_eq!(all_mask(3), 0b1111);
    }

    #[test]
    fn incident_requires_distinct_cells() {
        let g = GMap::new(1, 1);
        let c = g.cell(0, 0).unwrap();
        assert!(!incident(&c, &c));
    }
}
