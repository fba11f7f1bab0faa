//! In-place simplification state.
//!
//! Darts keep their initial indices for the whole run; removed darts are
//! only flagged dead. Every cell carries the id it had in the initial map,
//! and merged cells are joined in a per-dimension union-find whose root is
//! the survivor. A sign table is maintained alongside so incidence numbers
//! stay available without re-orienting the map after each operation.

use std::collections::BTreeSet;

use super::collapse::{is_collapsible, Cofaces};
use super::log::{CellRef, CollapsePair, MapSummary, OperationKind, OperationLog, OperationRecord, RecordDetail};
use crate::gmap::{cell_mask, range_mask, DartId, GMap, Walker};
use crate::orientation::{Marks, SignedGMap};

/// Orbits larger than this are not traversed when evaluating incidence
/// numbers of cells that survive an operation; the operation is skipped.
pub const INCIDENCE_LIMIT: usize = 1 << 16;

/// Why an operation was not applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    OutOfRange,
    DeadDart,
    NotRemovable,
    NotContractible,
    Degree(usize),
    NonTerminatingWalk,
    NotPreserved,
    NotCollapsible,
    IncidenceUnavailable,
    SignConflict,
}

/// The form an accepted operation takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Degree-two removal or codegree-two contraction.
    Merge,
    /// Dangling removal or codangling contraction.
    Collapse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Want {
    Merge,
    Collapse,
    Any,
}

enum Mode {
    Merge {
        absorbed: usize,
        survivor: usize,
        absorbed_dart: DartId,
        flip: bool,
        inc_absorbed: i64,
        inc_survivor: i64,
        terms: Vec<(usize, i64)>,
    },
    Collapse {
        pairs: Vec<CollapsePair>,
    },
}

struct Prepared {
    c: Vec<DartId>,
    cid: usize,
    m: usize,
    neighbours: Vec<(usize, usize)>,
    links: Vec<(DartId, DartId)>,
}

struct Plan {
    kind: OperationKind,
    dim: usize,
    cell: usize,
    darts: Vec<DartId>,
    links: Vec<(DartId, DartId)>,
    mode: Mode,
}

/// New `alpha_i` images of the darts `i`-linked to `cell` (Defs of removal
/// and contraction), or `None` when a walk does not leave the cell.
pub(crate) fn walk_links(
    alpha: &[Vec<DartId>],
    cell: &[DartId],
    kind: OperationKind,
    i: usize,
) -> Option<Vec<(DartId, DartId)>> {
    let in_c = |x: DartId| cell.binary_search(&x).is_ok();
    walk_links_with(alpha, cell, kind, i, in_c)
}

fn walk_links_with(
    alpha: &[Vec<DartId>],
    cell: &[DartId],
    kind: OperationKind,
    i: usize,
    in_c: impl Fn(DartId) -> bool,
) -> Option<Vec<(DartId, DartId)>> {
    let other = match kind {
        OperationKind::Removal => i + 1,
        OperationKind::Contraction => i.checked_sub(1)?,
    };
    if other >= alpha.len() {
        return None;
    }
    let limit = cell.len() + 1;
    let mut out = Vec::new();
    for &x in cell {
        let t = alpha[i][x];
        if in_c(t) {
            continue;
        }
        let mut y = x;
        let mut steps = 0;
        loop {
            y = alpha[i][alpha[other][y]];
            if !in_c(y) {
                break;
            }
            steps += 1;
            if steps > limit {
                return None;
            }
        }
        out.push((t, y));
    }
    Some(out)
}

fn uf_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Simplification state over one map.
pub struct Simplifier {
    n: usize,
    alpha: Vec<Vec<DartId>>,
    sg: Vec<Vec<i8>>,
    alive: Vec<bool>,
    alive_count: usize,
    label: Vec<Vec<usize>>,
    parent: Vec<Vec<usize>>,
    size: Vec<Vec<usize>>,
    initial: MapSummary,
    records: Vec<OperationRecord>,
    walker: Walker,
    in_c: Marks,
    dv: Marks,
    newlink: Vec<DartId>,
    seen: Marks,
    term: Marks,
    term_idx: Vec<usize>,
    queue: Vec<DartId>,
}

impl Simplifier {
    pub fn new(s: &SignedGMap) -> Self {
        let g = s.base();
        let num = g.num_darts();
        let catalog = g.catalog();
        let n = g.dimension();
        let label = (0..=n).map(|j| (0..num).map(|d| catalog.cell_of(j, d)).collect()).collect();
        let parent = (0..=n).map(|j| (0..catalog.cells(j).len()).collect()).collect();
        let size = (0..=n).map(|j| catalog.cells(j).iter().map(|c| c.len()).collect()).collect();
        Simplifier {
            n,
            alpha: g.alphas().to_vec(),
            sg: s.signs().to_vec(),
            alive: vec![true; num],
            alive_count: num,
            label,
            parent,
            size,
            initial: MapSummary {
                dim: n,
                num_darts: num,
                cell_counts: catalog.counts(),
            },
            records: Vec::new(),
            walker: Walker::new(num),
            in_c: Marks::new(num),
            dv: Marks::new(num),
            newlink: vec![0; num],
            seen: Marks::new(num),
            term: Marks::new(num),
            term_idx: vec![0; num],
            queue: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Number of darts still present.
    pub fn num_darts(&self) -> usize {
        self.alive_count
    }

    pub fn is_alive(&self, d: DartId) -> bool {
        self.alive.get(d).copied().unwrap_or(false)
    }

    pub fn records(&self) -> &[OperationRecord] {
        &self.records
    }

    /// Id of the `j`-cell containing `d`.
    pub fn cell_id(&mut self, j: usize, d: DartId) -> usize {
        uf_root(&mut self.parent[j], self.label[j][d])
    }

    fn root(&self, j: usize, d: DartId) -> usize {
        let mut x = self.label[j][d];
        while self.parent[j][x] != x {
            x = self.parent[j][x];
        }
        x
    }

    /// Sorted darts of the `i`-cell through `d`.
    pub fn cell_darts(&mut self, i: usize, d: DartId) -> Vec<DartId> {
        let mut c = self.walker.orbit(&self.alpha, d, cell_mask(self.n, i));
        c.sort_unstable();
        c
    }

    /// Canonical darts of the current `i`-cells, ascending.
    pub fn cells(&mut self, i: usize) -> Vec<DartId> {
        self.seen.reset();
        let mut out = Vec::new();
        let mut buf = Vec::new();
        for d in 0..self.alive.len() {
            if !self.alive[d] || self.seen.get(d) {
                continue;
            }
            buf.clear();
            self.walker.orbit_into(&self.alpha, d, cell_mask(self.n, i), &mut buf);
            for &x in &buf {
                self.seen.set(x);
            }
            out.push(d);
        }
        out
    }

    /// Distinct `j`-cells meeting `darts`, with the number of shared darts.
    fn groups(&mut self, darts: &[DartId], j: usize) -> Vec<(usize, usize)> {
        let mut ids: Vec<usize> = darts.iter().map(|&x| self.cell_id(j, x)).collect();
        ids.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for id in ids {
            match out.last_mut() {
                Some(last) if last.0 == id => last.1 += 1,
                _ => out.push((id, 1)),
            }
        }
        out
    }

    fn commute_on(&self, darts: &[DartId], p: usize, q: usize) -> bool {
        darts
            .iter()
            .all(|&x| self.alpha[p][self.alpha[q][x]] == self.alpha[q][self.alpha[p][x]])
    }

    /// Orbit of `d` under `mask`, or `None` past `limit` darts.
    fn bounded_orbit(&mut self, d: DartId, mask: u32, limit: usize) -> Option<Vec<DartId>> {
        self.seen.reset();
        self.seen.set(d);
        let mut out = vec![d];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            let mut m = mask;
            while m != 0 {
                let k = m.trailing_zeros() as usize;
                m &= m - 1;
                let y = self.alpha[k][x];
                if !self.seen.get(y) {
                    if out.len() >= limit {
                        return None;
                    }
                    self.seen.set(y);
                    out.push(y);
                }
            }
        }
        Some(out)
    }

    /// Boundary of the `hi`-cell through `d` over `(hi-1)`-cell ids.
    fn boundary_chain(&mut self, hi: usize, d: DartId, limit: usize) -> Option<Vec<(usize, i64)>> {
        let outer = self.bounded_orbit(d, range_mask(0, hi as isize - 1), limit)?;
        let inner = range_mask(0, hi as isize - 2);
        self.seen.reset();
        let mut acc: Vec<(usize, i64)> = Vec::new();
        let mut buf = Vec::new();
        for &p in &outer {
            if self.seen.get(p) {
                continue;
            }
            buf.clear();
            self.walker.orbit_into(&self.alpha, p, inner, &mut buf);
            for &x in &buf {
                self.seen.set(x);
            }
            let v = self.sg[hi][p] as i64 * self.sg[hi - 1][p] as i64;
            acc.push((self.cell_id(hi - 1, p), v));
        }
        acc.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (id, v) in acc {
            match out.last_mut() {
                Some(last) if last.0 == id => last.1 += v,
                _ => out.push((id, v)),
            }
        }
        out.retain(|e| e.1 != 0);
        Some(out)
    }

    /// `(hi : lo)` where `d` is a dart of the higher cell.
    fn incidence(&mut self, hi: usize, d: DartId, lo: usize, limit: usize) -> Option<i64> {
        let chain = self.boundary_chain(hi, d, limit)?;
        Some(chain.iter().find(|e| e.0 == lo).map_or(0, |e| e.1))
    }

    /// Whether the darts of the cells in `ids` (dimension `j`) that are not
    /// in the operated cell stay connected once `alpha_i` is rewired.
    /// `terminals` are the rewired darts among them.
    fn connected(&mut self, j: usize, i: usize, terminals: &[DartId]) -> bool {
        if terminals.len() <= 1 {
            return true;
        }
        self.term.reset();
        for (k, &t) in terminals.iter().enumerate() {
            self.term.set(t);
            self.term_idx[t] = k;
        }
        let mut uf: Vec<usize> = (0..terminals.len()).collect();
        let mask = cell_mask(self.n, j);
        loop {
            let r0 = uf_root(&mut uf, 0);
            let Some(s) = (1..terminals.len()).find(|&k| uf_root(&mut uf, k) != r0) else {
                return true;
            };
            let rs = uf_root(&mut uf, s);
            self.seen.reset();
            self.queue.clear();
            self.queue.push(terminals[s]);
            self.seen.set(terminals[s]);
            let mut head = 0;
            let mut joined = false;
            while head < self.queue.len() {
                let x = self.queue[head];
                head += 1;
                if self.term.get(x) {
                    let r = uf_root(&mut uf, self.term_idx[x]);
                    if r != rs {
                        uf[r] = rs;
                        joined = true;
                        break;
                    }
                }
                let mut m = mask;
                while m != 0 {
                    let k = m.trailing_zeros() as usize;
                    m &= m - 1;
                    let y = if k == i && self.dv.get(x) { self.newlink[x] } else { self.alpha[k][x] };
                    if !self.seen.get(y) {
                        self.seen.set(y);
                        self.queue.push(y);
                    }
                }
            }
            if !joined {
                return false;
            }
        }
    }

    /// Every cell meeting `c` outside dimension `i` survives as its darts
    /// minus `c`, except the cells of `vanish`, which must lie inside `c`.
    /// With `merged`, the two cells of dimension `m` must end up as one.
    fn preserved(
        &mut self,
        c: &[DartId],
        i: usize,
        links: &[(DartId, DartId)],
        merged: Option<(usize, usize, usize)>,
        vanish: &BTreeSet<CellRef>,
    ) -> bool {
        for j in 0..=self.n {
            if j == i {
                continue;
            }
            let groups = self.groups(c, j);
            let mut terms: Vec<(usize, DartId)> = links.iter().map(|&(t, _)| (self.cell_id(j, t), t)).collect();
            terms.sort_unstable();
            let terminals_of = |ids: &[usize]| -> Vec<DartId> {
                terms.iter().filter(|e| ids.contains(&e.0)).map(|e| e.1).collect()
            };
            match merged {
                Some((m, a, b)) if m == j => {
                    let k: usize = groups.iter().map(|g| g.1).sum();
                    if groups.len() != 2 || self.size[j][a] + self.size[j][b] == k {
                        return false;
                    }
                    let ts = terminals_of(&[a, b]);
                    if !self.connected(j, i, &ts) {
                        return false;
                    }
                }
                _ => {
                    for &(e, k) in &groups {
                        let inside = self.size[j][e] == k;
                        if vanish.contains(&CellRef { dim: j, id: e }) {
                            if !inside {
                                return false;
                            }
                            continue;
                        }
                        if inside || !self.connected(j, i, &terminals_of(&[e])) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `Some(flip)` when the rewired links are sign-consistent, flipping the
    /// absorbed cell of a merge if needed.
    fn signs_after(&mut self, i: usize, links: &[(DartId, DartId)], merged: Option<(usize, usize)>) -> Option<bool> {
        let n = self.n;
        let side: Vec<(bool, bool)> = match merged {
            Some((m, a)) => links
                .iter()
                .map(|&(t, t2)| (self.cell_id(m, t) == a, self.cell_id(m, t2) == a))
                .collect(),
            None => vec![(false, false); links.len()],
        };
        let consistent = |flip: bool, sg: &[Vec<i8>]| {
            links.iter().zip(&side).all(|(&(t, t2), &(sa, sb))| {
                t == t2
                    || (0..=n).filter(|&j| j != i).all(|j| {
                        let mut s1 = sg[j][t];
                        let mut s2 = sg[j][t2];
                        if flip && merged.is_some_and(|(m, _)| m == j) {
                            if sa {
                                s1 = -s1;
                            }
                            if sb {
                                s2 = -s2;
                            }
                        }
                        if i < j {
                            s1 == -s2
                        } else {
                            s1 == s2
                        }
                    })
            })
        };
        if consistent(false, &self.sg) {
            Some(false)
        } else if merged.is_some() && consistent(true, &self.sg) {
            Some(true)
        } else {
            None
        }
    }

    /// Cell, merge dimension, neighbours and rewired links of an operation.
    fn prepare(&mut self, kind: OperationKind, i: usize, d: DartId) -> Result<Prepared, Rejection> {
        let n = self.n;
        if i > n || d >= self.alive.len() {
            return Err(Rejection::OutOfRange);
        }
        if !self.alive[d] {
            return Err(Rejection::DeadDart);
        }
        let m = match kind {
            OperationKind::Removal if i < n => i + 1,
            OperationKind::Removal => return Err(Rejection::NotRemovable),
            OperationKind::Contraction if i >= 1 => i - 1,
            OperationKind::Contraction => return Err(Rejection::NotContractible),
        };
        let c = self.cell_darts(i, d);
        let ok = match kind {
            OperationKind::Removal => i + 2 > n || self.commute_on(&c, i + 1, i + 2),
            OperationKind::Contraction => i < 2 || self.commute_on(&c, i - 1, i - 2),
        };
        if !ok {
            return Err(match kind {
                OperationKind::Removal => Rejection::NotRemovable,
                OperationKind::Contraction => Rejection::NotContractible,
            });
        }
        let neighbours = self.groups(&c, m);
        let cid = self.cell_id(i, d);
        self.in_c.reset();
        for &x in &c {
            self.in_c.set(x);
        }
        let links = {
            let in_c = &self.in_c;
            walk_links_with(&self.alpha, &c, kind, i, |x| in_c.get(x)).ok_or(Rejection::NonTerminatingWalk)?
        };
        self.dv.reset();
        for &(t, t2) in &links {
            self.dv.set(t);
            self.newlink[t] = t2;
        }
        Ok(Prepared {
            c,
            cid,
            m,
            neighbours,
            links,
        })
    }

    /// Whether every cell meeting the cell through `d` survives the
    /// operation; for two neighbours of the merge dimension, whether they
    /// end up as one cell.
    pub fn preserves(&mut self, kind: OperationKind, i: usize, d: DartId) -> bool {
        let Ok(p) = self.prepare(kind, i, d) else {
            return false;
        };
        let merged = match p.neighbours.as_slice() {
            [a, b] => Some((p.m, a.0, b.0)),
            _ => None,
        };
        self.preserved(&p.c, i, &p.links, merged, &BTreeSet::new())
    }

    fn plan(&mut self, kind: OperationKind, i: usize, d: DartId, want: Want) -> Result<Plan, Rejection> {
        let Prepared {
            c,
            cid,
            m,
            neighbours,
            links,
        } = self.prepare(kind, i, d)?;
        let degree = neighbours.len();
        let mode = match degree {
            2 if want != Want::Collapse => self.plan_merge(kind, i, m, &c, cid, &neighbours, &links)?,
            1 if want != Want::Merge => {
                let x = self.collapse_set(kind, i, &c, cid).ok_or(Rejection::NotCollapsible)?;
                let vanish: BTreeSet<CellRef> = x.iter().copied().collect();
                if !self.preserved(&c, i, &links, None, &vanish) {
                    return Err(Rejection::NotPreserved);
                }
                let pairs = self.collapse_pairs(&c, &x).ok_or(Rejection::NotCollapsible)?;
                if self.signs_after(i, &links, None).is_none() {
                    return Err(Rejection::SignConflict);
                }
                Mode::Collapse { pairs }
            }
            k => return Err(Rejection::Degree(k)),
        };
        Ok(Plan {
            kind,
            dim: i,
            cell: cid,
            darts: c,
            links,
            mode,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn plan_merge(
        &mut self,
        kind: OperationKind,
        i: usize,
        m: usize,
        c: &[DartId],
        cid: usize,
        neighbours: &[(usize, usize)],
        links: &[(DartId, DartId)],
    ) -> Result<Mode, Rejection> {
        let (p, q) = (neighbours[0].0, neighbours[1].0);
        // the smaller cell is absorbed so sign flips stay cheap
        let (a, b) = if self.size[m][p] < self.size[m][q] { (p, q) } else { (q, p) };
        if !self.preserved(c, i, links, Some((m, a, b)), &BTreeSet::new()) {
            return Err(Rejection::NotPreserved);
        }
        let flip = self.signs_after(i, links, Some((m, a))).ok_or(Rejection::SignConflict)?;
        let dart_in = |s: &mut Self, id: usize| -> DartId {
            *c.iter().find(|&&x| s.cell_id(m, x) == id).expect("neighbour meets the cell")
        };
        let da = dart_in(self, a);
        let db = dart_in(self, b);
        let (inc_a, inc_b, terms) = match kind {
            OperationKind::Removal => {
                let inc_a = self.sg[m][da] as i64 * self.sg[i][da] as i64;
                let inc_b = self.sg[m][db] as i64 * self.sg[i][db] as i64;
                let mut terms = self.boundary_chain(m, da, usize::MAX).expect("unbounded");
                terms.retain(|e| e.0 != cid);
                (inc_a, inc_b, terms)
            }
            OperationKind::Contraction => {
                let inc_a = self.incidence(i, da, a, INCIDENCE_LIMIT).ok_or(Rejection::IncidenceUnavailable)?;
                let inc_b = self.incidence(i, db, b, INCIDENCE_LIMIT).ok_or(Rejection::IncidenceUnavailable)?;
                if inc_a.abs() != 1 || inc_b.abs() != 1 {
                    return Err(Rejection::IncidenceUnavailable);
                }
                let a_darts = self.cell_darts(m, da);
                let mut cofaces: Vec<(usize, DartId)> = a_darts.iter().map(|&y| (self.cell_id(i, y), y)).collect();
                cofaces.sort_unstable();
                cofaces.dedup_by_key(|e| e.0);
                let mut terms = Vec::new();
                for (x, y) in cofaces {
                    if x == cid {
                        continue;
                    }
                    let v = self.incidence(i, y, a, INCIDENCE_LIMIT).ok_or(Rejection::IncidenceUnavailable)?;
                    if v != 0 {
                        terms.push((x, v));
                    }
                }
                (inc_a, inc_b, terms)
            }
        };
        Ok(Mode::Merge {
            absorbed: a,
            survivor: b,
            absorbed_dart: da,
            flip,
            inc_absorbed: inc_a,
            inc_survivor: inc_b,
            terms,
        })
    }

    /// The set `{c} ∪ closure(C) ∖ closure(B)` of a degree-one cell (or its
    /// dual for contraction). `None` when a member cannot vanish with `c`.
    fn collapse_set(&mut self, kind: OperationKind, i: usize, c: &[DartId], cid: usize) -> Option<Vec<CellRef>> {
        let n = self.n;
        let (near, further): (usize, Vec<usize>) = match kind {
            OperationKind::Removal => (i.checked_sub(1)?, (0..i.saturating_sub(1)).collect()),
            OperationKind::Contraction if i < n => (i + 1, (i + 2..=n).collect()),
            OperationKind::Contraction => return None,
        };
        let near_cells = self.groups(c, near);
        let mut shared = BTreeSet::new();
        let mut own = BTreeSet::new();
        for &(e, _) in &near_cells {
            let dart = *c.iter().find(|&&x| self.root(near, x) == e).expect("cell meets c");
            let (label, parent) = (&self.label, &self.parent);
            let root = |j: usize, x: DartId| {
                let mut r = label[j][x];
                while parent[j][r] != r {
                    r = parent[j][r];
                }
                r
            };
            let several = self
                .walker
                .orbit_any(&self.alpha, dart, cell_mask(n, near), |x| root(i, x) != cid);
            if several {
                shared.insert(e);
            } else {
                own.insert(e);
            }
        }
        let mut out = vec![CellRef { dim: i, id: cid }];
        out.extend(own.iter().map(|&e| CellRef { dim: near, id: e }));
        let own_darts: Vec<DartId> = c.iter().copied().filter(|&x| own.contains(&self.root(near, x))).collect();
        for &k in &further {
            let cands = self.groups(&own_darts, k);
            for (y, _) in cands {
                let dart = *own_darts.iter().find(|&&x| self.root(k, x) == y).expect("cell meets c");
                let (label, parent) = (&self.label, &self.parent);
                let root = |j: usize, x: DartId| {
                    let mut r = label[j][x];
                    while parent[j][r] != r {
                        r = parent[j][r];
                    }
                    r
                };
                let in_shared = self
                    .walker
                    .orbit_any(&self.alpha, dart, cell_mask(n, k), |x| shared.contains(&root(near, x)));
                if !in_shared {
                    out.push(CellRef { dim: k, id: y });
                }
            }
        }
        Some(out)
    }

    /// Collapse order of a set whose cells all lie inside `c`.
    fn collapse_pairs(&mut self, c: &[DartId], set: &[CellRef]) -> Option<Vec<CollapsePair>> {
        let dims: BTreeSet<usize> = set.iter().map(|r| r.dim).collect();
        let mut table: Vec<(CellRef, Cofaces)> = Vec::new();
        for &lo in set {
            let mut cof = Vec::new();
            if lo.dim < self.n && dims.contains(&(lo.dim + 1)) {
                let mut seen: Vec<(usize, DartId)> = Vec::new();
                for &x in c {
                    if self.cell_id(lo.dim, x) == lo.id {
                        seen.push((self.cell_id(lo.dim + 1, x), x));
                    }
                }
                seen.sort_unstable();
                seen.dedup_by_key(|e| e.0);
                for (hi, x) in seen {
                    let inc = self.incidence(lo.dim + 1, x, lo.id, INCIDENCE_LIMIT);
                    cof.push((CellRef { dim: lo.dim + 1, id: hi }, inc));
                }
            }
            table.push((lo, cof));
        }
        let seq = is_collapsible(set, |r| {
            table.iter().find(|e| e.0 == r).map(|e| e.1.clone()).unwrap_or_default()
        })?;
        let mut gone: BTreeSet<CellRef> = BTreeSet::new();
        let mut pairs = Vec::with_capacity(seq.len());
        for (lo, hi) in seq {
            let x = *c.iter().find(|&&x| self.root(hi.dim, x) == hi.id)?;
            let chain = self.boundary_chain(hi.dim, x, INCIDENCE_LIMIT)?;
            let incidence = chain.iter().find(|e| e.0 == lo.id).map_or(0, |e| e.1);
            gone.insert(lo);
            gone.insert(hi);
            let rest = chain
                .into_iter()
                .filter(|e| !gone.contains(&CellRef { dim: lo.dim, id: e.0 }))
                .collect();
            pairs.push(CollapsePair {
                lower: lo,
                upper: hi,
                incidence,
                rest,
            });
        }
        Some(pairs)
    }

    fn apply(&mut self, plan: Plan) -> Verdict {
        let i = plan.dim;
        let m = match plan.kind {
            OperationKind::Removal => i + 1,
            OperationKind::Contraction => i.wrapping_sub(1),
        };
        if let Mode::Merge { absorbed_dart, flip: true, .. } = plan.mode {
            let darts = self.cell_darts(m, absorbed_dart);
            for x in darts {
                self.sg[m][x] = -self.sg[m][x];
            }
        }
        for &(t, t2) in &plan.links {
            self.alpha[i][t] = t2;
        }
        for &x in &plan.darts {
            self.alive[x] = false;
            for j in 0..=self.n {
                let id = self.cell_id(j, x);
                self.size[j][id] -= 1;
            }
        }
        self.alive_count -= plan.darts.len();
        let (detail, verdict) = match plan.mode {
            Mode::Merge {
                absorbed,
                survivor,
                inc_absorbed,
                inc_survivor,
                terms,
                ..
            } => {
                self.parent[m][absorbed] = survivor;
                self.size[m][survivor] += self.size[m][absorbed];
                self.size[m][absorbed] = 0;
                (
                    RecordDetail::Merge {
                        absorbed,
                        survivor,
                        incidence_absorbed: inc_absorbed,
                        incidence_survivor: inc_survivor,
                        terms,
                    },
                    Verdict::Merge,
                )
            }
            Mode::Collapse { pairs } => (RecordDetail::Collapse { pairs }, Verdict::Collapse),
        };
        self.records.push(OperationRecord {
            kind: plan.kind,
            dim: i,
            cell: plan.cell,
            darts: plan.darts,
            detail,
        });
        verdict
    }

    /// What removing or contracting the `i`-cell through `d` would do,
    /// without changing anything.
    pub fn check(&mut self, kind: OperationKind, i: usize, d: DartId) -> Result<Verdict, Rejection> {
        self.plan(kind, i, d, Want::Any).map(|p| match p.mode {
            Mode::Merge { .. } => Verdict::Merge,
            Mode::Collapse { .. } => Verdict::Collapse,
        })
    }

    /// Applies the operation when every condition holds.
    pub fn apply_op(&mut self, kind: OperationKind, i: usize, d: DartId) -> Result<Verdict, Rejection> {
        self.try_apply(kind, i, d, Want::Any)
    }

    pub(crate) fn try_apply(&mut self, kind: OperationKind, i: usize, d: DartId, want: Want) -> Result<Verdict, Rejection> {
        let plan = self.plan(kind, i, d, want)?;
        Ok(self.apply(plan))
    }

    /// Number of distinct `j`-cells meeting the `i`-cell through `d`.
    pub fn incident_count(&mut self, i: usize, d: DartId, j: usize) -> usize {
        let c = self.cell_darts(i, d);
        self.groups(&c, j).len()
    }

    /// Dangling (removal) or codangling (contraction) test: degree or
    /// codegree one and a collapsible set of vanishing cells.
    pub fn is_pendant(&mut self, kind: OperationKind, i: usize, d: DartId) -> bool {
        if !self.is_alive(d) || i > self.n {
            return false;
        }
        let j = match kind {
            OperationKind::Removal if i < self.n => i + 1,
            OperationKind::Contraction if i >= 1 => i - 1,
            _ => return false,
        };
        if self.incident_count(i, d, j) != 1 {
            return false;
        }
        let c = self.cell_darts(i, d);
        let cid = self.cell_id(i, d);
        let Some(set) = self.collapse_set(kind, i, &c, cid) else {
            return false;
        };
        let inside = set.iter().all(|r| {
            let k = c.iter().filter(|&&x| self.root(r.dim, x) == r.id).count();
            self.size[r.dim][r.id] == k
        });
        inside && self.collapse_pairs(&c, &set).is_some()
    }

    /// Canonical darts of the `i`-cells adjacent to the cell through `d`.
    pub(crate) fn adjacent_cells(&mut self, i: usize, d: DartId) -> Vec<DartId> {
        let c = self.cell_darts(i, d);
        let mut out: Vec<DartId> = Vec::new();
        self.in_c.reset();
        for &x in &c {
            self.in_c.set(x);
        }
        for &x in &c {
            let t = self.alpha[i][x];
            if !self.in_c.get(t) {
                out.push(t);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Current map with its signs and the id of every cell in basis order.
    pub fn snapshot(&self) -> (SignedGMap, Vec<Vec<usize>>) {
        let whole = GMap::from_alphas(self.alpha.clone()).expect("tables stay in range");
        let (g, map) = whole.compact(&self.alive);
        let kept: Vec<DartId> = (0..map.len()).filter(|&d| map[d].is_some()).collect();
        let sg: Vec<Vec<i8>> = self.sg.iter().map(|row| kept.iter().map(|&d| row[d]).collect()).collect();
        let catalog = g.catalog();
        let ids = (0..=self.n)
            .map(|j| catalog.cells(j).iter().map(|c| self.root(j, kept[c.canonical_dart])).collect())
            .collect();
        (SignedGMap::from_parts(g, sg), ids)
    }

    /// Final map, signs and log.
    pub fn finish(self) -> (SignedGMap, OperationLog) {
        let (signed, final_cells) = self.snapshot();
        let final_darts = (0..self.alive.len()).filter(|&d| self.alive[d]).collect();
        let log = OperationLog {
            initial: self.initial,
            records: self.records,
            final_darts,
            final_cells,
        };
        (signed, log)
    }
}
