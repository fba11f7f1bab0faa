//! Operation records and their replay.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmap::{cell_mask, DartId, GMap, Walker};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperationKind {
    Removal,
    Contraction,
}

/// A cell named by dimension and id. Ids are indices into the cell
/// catalog of the initial map; a merged cell keeps the id of its survivor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellRef {
    pub dim: usize,
    pub id: usize,
}

/// One elementary collapse `(lower, upper)` of a batch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapsePair {
    pub lower: CellRef,
    pub upper: CellRef,
    /// `(upper : lower)`, always `±1`.
    pub incidence: i64,
    /// Boundary of `upper` without `lower` and without cells collapsed
    /// earlier in the batch.
    pub rest: Vec<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RecordDetail {
    /// Degree-two removal or codegree-two contraction: `absorbed` and
    /// `survivor` merge, the merged cell keeps the id of `survivor`.
    ///
    /// For a removal `incidence_absorbed = (a:c)` and `terms` is the
    /// boundary of `a` without `c`. For a contraction
    /// `incidence_absorbed = (c:a)` and `terms` lists `(x, (x:a))` over
    /// the other `i`-cells `x`.
    Merge {
        absorbed: usize,
        survivor: usize,
        incidence_absorbed: i64,
        incidence_survivor: i64,
        terms: Vec<(usize, i64)>,
    },
    /// Dangling removal or codangling contraction.
    Collapse { pairs: Vec<CollapsePair> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationRecord {
    pub kind: OperationKind,
    pub dim: usize,
    /// Id of the removed or contracted cell.
    pub cell: usize,
    /// Its darts, in the numbering of the initial map, sorted.
    pub darts: Vec<DartId>,
    pub detail: RecordDetail,
}

impl OperationRecord {
    /// Dimension of the cells merged by the operation.
    pub fn merge_dim(&self) -> Option<usize> {
        match self.kind {
            OperationKind::Removal => Some(self.dim + 1),
            OperationKind::Contraction => self.dim.checked_sub(1),
        }
    }
}

/// Dimension, dart count and cell counts of a map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSummary {
    pub dim: usize,
    pub num_darts: usize,
    pub cell_counts: Vec<usize>,
}

impl MapSummary {
    pub fn of(g: &GMap) -> Self {
        MapSummary {
            dim: g.dimension(),
            num_darts: g.num_darts(),
            cell_counts: g.cell_counts(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationLog {
    pub initial: MapSummary,
    pub records: Vec<OperationRecord>,
    /// Initial index of each dart of the final map.
    pub final_darts: Vec<DartId>,
    /// Ids of the final cells, per dimension, in the basis order of the
    /// final map.
    pub final_cells: Vec<Vec<usize>>,
}

impl OperationLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Applies every record to `initial` by the plain removal and
    /// contraction rules and compacts the result.
    pub fn replay(&self, initial: &GMap) -> Result<GMap> {
        if MapSummary::of(initial) != self.initial {
            return Err(Error::LogMismatch("initial map summary differs".into()));
        }
        let n = initial.dimension();
        let mut alpha = initial.alphas().to_vec();
        let mut alive = vec![true; initial.num_darts()];
        let mut walker = Walker::new(initial.num_darts());
        for (k, r) in self.records.iter().enumerate() {
            let Some(&d) = r.darts.first() else {
                return Err(Error::LogMismatch(format!("record {k} has no darts")));
            };
            if r.dim > n || !alive[d] {
                return Err(Error::LogMismatch(format!("record {k} names a missing cell")));
            }
            let mut cell = walker.orbit(&alpha, d, cell_mask(n, r.dim));
            cell.sort_unstable();
            if cell != r.darts {
                return Err(Error::LogMismatch(format!("record {k}: cell darts differ")));
            }
            let links = super::engine::walk_links(&alpha, &cell, r.kind, r.dim)
                .ok_or(Error::NonTerminatingWalk { dim: r.dim, dart: d })?;
            for (t, t2) in links {
                alpha[r.dim][t] = t2;
            }
            for &x in &cell {
                alive[x] = false;
            }
        }
        let g = GMap::from_alphas(alpha)?;
        let (out, map) = g.compact(&alive);
        let kept: Vec<DartId> = (0..map.len()).filter(|&d| map[d].is_some()).collect();
        if kept != self.final_darts {
            return Err(Error::LogMismatch("surviving darts differ".into()));
        }
        Ok(out)
    }
}
