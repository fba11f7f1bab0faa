//! Homology-preserving simplification by removal and contraction.

mod collapse;
mod engine;
mod log;

use std::collections::BTreeSet;

pub use collapse::{is_collapsible, Cofaces};
pub use engine::{Rejection, Simplifier, Verdict, INCIDENCE_LIMIT};
pub use log::{CellRef, CollapsePair, MapSummary, OperationKind, OperationLog, OperationRecord, RecordDetail};

use crate::error::{Error, Result};
use crate::gmap::{cell_mask, Cell, DartId, GMap};
use crate::orientation::{assign_signs, SignedGMap};
use engine::Want;

/// Removability of a cell.
pub fn is_removable(g: &GMap, c: &Cell) -> bool {
    let n = g.dimension();
    c.dim < n
        && (c.dim + 1 == n
            || c.darts.iter().all(|&d| {
                g.alpha(c.dim + 1, g.alpha(c.dim + 2, d)) == g.alpha(c.dim + 2, g.alpha(c.dim + 1, d))
            }))
}

/// Contractibility of a cell.
pub fn is_contractible(g: &GMap, c: &Cell) -> bool {
    c.dim >= 1
        && c.dim <= g.dimension()
        && (c.dim == 1
            || c.darts.iter().all(|&d| {
                g.alpha(c.dim - 1, g.alpha(c.dim - 2, d)) == g.alpha(c.dim - 2, g.alpha(c.dim - 1, d))
            }))
}

fn operate(g: &GMap, c: &Cell, kind: OperationKind) -> Result<(GMap, Vec<Option<DartId>>)> {
    let links = engine::walk_links(g.alphas(), &c.darts, kind, c.dim).ok_or(Error::NonTerminatingWalk {
        dim: c.dim,
        dart: c.canonical_dart,
    })?;
    let mut alpha = g.alphas().to_vec();
    for (t, t2) in links {
        alpha[c.dim][t] = t2;
    }
    let mut keep = vec![true; g.num_darts()];
    for &d in &c.darts {
        keep[d] = false;
    }
    Ok(GMap::from_alphas(alpha)?.compact(&keep))
}

/// Removes the cell `c`, returning the new map and the old-to-new dart map.
pub fn remove_cell(g: &GMap, c: &Cell) -> Result<(GMap, Vec<Option<DartId>>)> {
    if !is_removable(g, c) {
        return Err(Error::NotRemovable {
            dim: c.dim,
            dart: c.canonical_dart,
        });
    }
    operate(g, c, OperationKind::Removal)
}

/// Contracts the cell `c`, returning the new map and the old-to-new dart map.
pub fn contract_cell(g: &GMap, c: &Cell) -> Result<(GMap, Vec<Option<DartId>>)> {
    if !is_contractible(g, c) {
        return Err(Error::NotContractible {
            dim: c.dim,
            dart: c.canonical_dart,
        });
    }
    operate(g, c, OperationKind::Contraction)
}

fn incident_cells(g: &GMap, c: &Cell, dims: impl Iterator<Item = usize>) -> Vec<Cell> {
    let mut out = vec![c.clone()];
    for j in dims {
        let mut seen = BTreeSet::new();
        for &d in &c.darts {
            let mut darts = g.orbit_mask(d, cell_mask(g.dimension(), j));
            darts.sort_unstable();
            if seen.insert(darts[0]) {
                out.push(Cell {
                    dim: j,
                    canonical_dart: darts[0],
                    darts,
                });
            }
        }
    }
    out
}

/// `c` and every lower-dimensional cell incident to it.
pub fn closure(g: &GMap, c: &Cell) -> Vec<Cell> {
    incident_cells(g, c, 0..c.dim)
}

/// `c` and every higher-dimensional cell incident to it.
pub fn coclosure(g: &GMap, c: &Cell) -> Vec<Cell> {
    incident_cells(g, c, c.dim + 1..=g.dimension())
}

fn unsigned(g: &GMap) -> SignedGMap {
    SignedGMap::from_parts(g.clone(), vec![vec![1; g.num_darts()]; g.dimension() + 1])
}

/// Whether removing or contracting `c` keeps every incident cell as its
/// darts minus `c`, merging the two neighbours of a degree-two cell.
pub fn cells_preserved(g: &GMap, c: &Cell, kind: OperationKind) -> bool {
    Simplifier::new(&unsigned(g)).preserves(kind, c.dim, c.canonical_dart)
}

/// Dangling test of Def "dangling": degree one and a collapsible set of
/// vanishing cells, with incidence numbers taken from `s`.
pub fn is_dangling(s: &SignedGMap, c: &Cell) -> bool {
    Simplifier::new(s).is_pendant(OperationKind::Removal, c.dim, c.canonical_dart)
}

/// Dual of [`is_dangling`].
pub fn is_codangling(s: &SignedGMap, c: &Cell) -> bool {
    Simplifier::new(s).is_pendant(OperationKind::Contraction, c.dim, c.canonical_dart)
}

/// Observer called after every applied operation.
pub type Observer<'a> = dyn FnMut(&Simplifier) + 'a;

fn run_phase(sim: &mut Simplifier, kind: OperationKind, i: usize, observer: &mut Observer<'_>) -> usize {
    let mut total = 0;
    loop {
        let mut changed = 0;
        for d in sim.cells(i) {
            if !sim.is_alive(d) {
                continue;
            }
            if sim.try_apply(kind, i, d, Want::Merge).is_ok() {
                changed += 1;
                observer(sim);
                continue;
            }
            if !sim.is_pendant(kind, i, d) {
                continue;
            }
            let mut stack = vec![d];
            while let Some(x) = stack.pop() {
                if !sim.is_alive(x) {
                    continue;
                }
                let adjacent = sim.adjacent_cells(i, x);
                if sim.try_apply(kind, i, x, Want::Collapse).is_ok() {
                    changed += 1;
                    observer(sim);
                    for y in adjacent {
                        if sim.is_alive(y) && sim.is_pendant(kind, i, y) {
                            stack.push(y);
                        }
                    }
                }
            }
        }
        total += changed;
        if changed == 0 {
            return total;
        }
    }
}

/// Algorithm 1 for one dimension; returns the number of removals.
pub fn remove_i_cells(sim: &mut Simplifier, i: usize, observer: &mut Observer<'_>) -> usize {
    if i >= sim.dimension() {
        return 0;
    }
    run_phase(sim, OperationKind::Removal, i, observer)
}

/// Algorithm 2 for one dimension; returns the number of contractions.
pub fn contract_i_cells(sim: &mut Simplifier, i: usize, observer: &mut Observer<'_>) -> usize {
    if i == 0 || i > sim.dimension() {
        return 0;
    }
    run_phase(sim, OperationKind::Contraction, i, observer)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplifyOptions {
    pub removal: bool,
    pub contraction: bool,
    /// Run the contraction phase before the removal phase.
    pub contraction_first: bool,
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        SimplifyOptions {
            removal: true,
            contraction: true,
            contraction_first: false,
        }
    }
}

impl SimplifyOptions {
    pub fn removal_only() -> Self {
        SimplifyOptions {
            contraction: false,
            ..Self::default()
        }
    }
}

/// Outcome of [`simplify`].
#[derive(Clone, Debug)]
pub struct Simplification {
    /// The input with the signs used throughout.
    pub initial: SignedGMap,
    /// The simplified map with signs consistent with the log.
    pub signed: SignedGMap,
    pub log: OperationLog,
}

impl Simplification {
    pub fn gmap(&self) -> &GMap {
        self.signed.base()
    }
}

/// Algorithm 3 with an observer called after every operation.
pub fn simplify_signed(s: &SignedGMap, opts: SimplifyOptions, observer: &mut Observer<'_>) -> Simplification {
    let mut sim = Simplifier::new(s);
    let n = sim.dimension();
    let mut phases: Vec<(OperationKind, Vec<usize>)> = Vec::new();
    if opts.removal {
        phases.push((OperationKind::Removal, (0..n).rev().collect()));
    }
    if opts.contraction {
        phases.push((OperationKind::Contraction, (1..=n).collect()));
    }
    if opts.contraction_first {
        phases.reverse();
    }
    for (kind, dims) in phases {
        for i in dims {
            match kind {
                OperationKind::Removal => remove_i_cells(&mut sim, i, observer),
                OperationKind::Contraction => contract_i_cells(&mut sim, i, observer),
            };
        }
    }
    let (signed, log) = sim.finish();
    Simplification {
        initial: s.clone(),
        signed,
        log,
    }
}

/// Algorithm 3: removals for `i = n-1 .. 0`, then contractions for
/// `i = 1 .. n`.
pub fn simplify(g: &GMap, opts: SimplifyOptions) -> Result<Simplification> {
    let s = assign_signs(g)?;
    Ok(simplify_signed(&s, opts, &mut |_| {}))
}
