//! Cell orientation, per-dart signs and signed incidence numbers.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gmap::{range_mask, Cell, DartId, GMap, Walker};

/// Stamp-based dart marks, reset in O(1).
#[derive(Debug, Default)]
pub(crate) struct Marks {
    mark: Vec<u32>,
    stamp: u32,
}

impl Marks {
    pub(crate) fn new(n: usize) -> Self {
        Marks { mark: vec![0; n], stamp: 1 }
    }

    pub(crate) fn reset(&mut self) {
        if self.stamp == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 0;
        }
        self.stamp += 1;
    }

    #[inline]
    pub(crate) fn set(&mut self, d: DartId) {
        self.mark[d] = self.stamp;
    }

    #[inline]
    pub(crate) fn get(&self, d: DartId) -> bool {
        self.mark[d] == self.stamp
    }
}

/// A map together with a sign `sg^i(d)` for every dimension and dart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedGMap {
    base: GMap,
    sg: Vec<Vec<i8>>,
}

impl SignedGMap {
    pub(crate) fn from_parts(base: GMap, sg: Vec<Vec<i8>>) -> Self {
        debug_assert_eq!(sg.len(), base.dimension() + 1);
        SignedGMap { base, sg }
    }

    pub fn base(&self) -> &GMap {
        &self.base
    }

    #[inline]
    pub fn sign(&self, i: usize, d: DartId) -> i8 {
        self.sg[i][d]
    }

    pub fn signs(&self) -> &[Vec<i8>] {
        &self.sg
    }

    pub fn into_parts(self) -> (GMap, Vec<Vec<i8>>) {
        (self.base, self.sg)
    }

    /// Reverses the orientation of one cell.
    pub fn flip_cell(&mut self, c: &Cell) {
        for &d in &c.darts {
            self.sg[c.dim][d] = -self.sg[c.dim][d];
        }
    }

    /// Flips every cell independently with probability one half.
    pub fn reseed<R: Rng>(&mut self, rng: &mut R) {
        let catalog = self.base.catalog();
        for i in 0..=self.base.dimension() {
            for c in catalog.cells(i) {
                if rng.gen_bool(0.5) {
                    self.flip_cell(c);
                }
            }
        }
    }

    /// First dart (as `(dimension, dart)`) where the sign rules are broken.
    pub fn check_signs(&self) -> Option<(usize, DartId)> {
        sign_violation(&self.base, &self.sg)
    }

    /// Signed incidence number `(hi : lo)`.
    pub fn incidence(&self, hi: &Cell, lo: &Cell) -> Result<i64> {
        signed_incidence(self, hi, lo)
    }
}

pub(crate) fn sign_violation(g: &GMap, sg: &[Vec<i8>]) -> Option<(usize, DartId)> {
    let n = g.dimension();
    for (i, row) in sg.iter().enumerate().take(n + 1) {
        for d in g.darts() {
            for j in 0..=n {
                if j == i || g.is_free(d, j) {
                    continue;
                }
                let e = g.alpha(j, d);
                let expected = if j < i { -row[d] } else { row[d] };
                if row[e] != expected {
                    return Some((i, d));
                }
            }
        }
    }
    None
}

/// Whether the darts of `c` split into two classes such that every
/// non-free `alpha_j` link (`j != i`) joins the two classes.
pub fn is_orientable_cell(g: &GMap, c: &Cell) -> bool {
    if c.dim == 0 {
        return true;
    }
    // union-find with parity over the cell's darts
    let pos = |d: DartId| c.darts.binary_search(&d).expect("dart outside cell");
    let mut parent: Vec<usize> = (0..c.len()).collect();
    let mut parity = vec![0u8; c.len()];
    fn find(parent: &mut [usize], parity: &mut [u8], x: usize) -> (usize, u8) {
        let mut path = Vec::new();
        let mut r = x;
        let mut acc = 0u8;
        while parent[r] != r {
            path.push(r);
            acc ^= parity[r];
            r = parent[r];
        }
        // compress
        let mut p = acc;
        for &y in &path {
            let old = parity[y];
            parent[y] = r;
            parity[y] = p;
            p ^= old;
        }
        (r, acc)
    }
    for &d in &c.darts {
        for j in 0..=g.dimension() {
            if j == c.dim || g.is_free(d, j) {
                continue;
            }
            let (a, b) = (pos(d), pos(g.alpha(j, d)));
            let (ra, pa) = find(&mut parent, &mut parity, a);
            let (rb, pb) = find(&mut parent, &mut parity, b);
            if ra == rb {
                if pa == pb {
                    return false;
                }
            } else {
                parent[ra] = rb;
                parity[ra] = pa ^ pb ^ 1;
            }
        }
    }
    true
}

/// Assigns signs to every dart in every dimension, seeding the canonical
/// dart of each cell with `+1`.
pub fn assign_signs(g: &GMap) -> Result<SignedGMap> {
    let n = g.dimension();
    let num = g.num_darts();
    let mut sg = vec![vec![0i8; num]; n + 1];
    let mut stack = Vec::new();
    for (i, signs) in sg.iter_mut().enumerate() {
        for seed in 0..num {
            if signs[seed] != 0 {
                continue;
            }
            signs[seed] = 1;
            stack.push(seed);
            while let Some(x) = stack.pop() {
                let s = signs[x];
                for j in (0..=n).filter(|&j| j != i) {
                    let y = g.alpha(j, x);
                    if y == x {
                        continue;
                    }
                    let expected = if j < i { -s } else { s };
                    match signs[y] {
                        0 => {
                            signs[y] = expected;
                            stack.push(y);
                        }
                        v if v != expected => {
                            return Err(Error::NonOrientableCell { dim: i, dart: seed });
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(SignedGMap { base: g.clone(), sg })
}

/// Terms of the boundary of the `i`-cell through `d`: one representative
/// dart per `<alpha_0..alpha_{i-2}>`-orbit of `<alpha_0..alpha_{i-1}>(d)`,
/// paired with `sg^i(p) * sg^{i-1}(p)`.
pub(crate) fn boundary_terms(
    alpha: &[Vec<DartId>],
    sg: &[Vec<i8>],
    walker: &mut Walker,
    covered: &mut Marks,
    d: DartId,
    i: usize,
    out: &mut Vec<(DartId, i64)>,
) {
    debug_assert!(i >= 1);
    let outer = walker.orbit(alpha, d, range_mask(0, i as isize - 1));
    let inner_mask = range_mask(0, i as isize - 2);
    covered.reset();
    let mut buf = Vec::new();
    for &p in &outer {
        if covered.get(p) {
            continue;
        }
        buf.clear();
        walker.orbit_into(alpha, p, inner_mask, &mut buf);
        for &x in &buf {
            covered.set(x);
        }
        out.push((p, sg[i][p] as i64 * sg[i - 1][p] as i64));
    }
}

/// Signed incidence number between an `i`-cell and an `(i-1)`-cell.
pub fn signed_incidence(s: &SignedGMap, hi: &Cell, lo: &Cell) -> Result<i64> {
    if hi.dim != lo.dim + 1 {
        return Err(Error::DimensionMismatch(format!(
            "incidence between a {}-cell and a {}-cell",
            hi.dim, lo.dim
        )));
    }
    let g = &s.base;
    let mut walker = Walker::new(g.num_darts());
    let mut covered = Marks::new(g.num_darts());
    let mut terms = Vec::new();
    boundary_terms(g.alphas(), &s.sg, &mut walker, &mut covered, hi.canonical_dart, hi.dim, &mut terms);
    Ok(terms
        .into_iter()
        .filter(|&(p, _)| lo.contains(p))
        .map(|(_, v)| v)
        .sum())
}

/// Outcome of [`check_subclass`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct SubclassReport {
    /// `(d, i)` with `d` `i`-free and `i < n`.
    pub free_dart_violations: Vec<(DartId, usize)>,
    /// `(d, i)` with `alpha_i(d)` inside `<alpha_0..alpha_{i-2}, alpha_{i+2}..alpha_n>(d)`.
    pub multi_link_violations: Vec<(DartId, usize)>,
    /// `(i, canonical dart)` of cells whose boundary does not have the
    /// homology of an `(i-1)`-sphere.
    pub sphere_violations: Vec<(usize, DartId)>,
    pub sphere_condition_checked: bool,
}

impl SubclassReport {
    pub fn is_clean(&self) -> bool {
        self.free_dart_violations.is_empty()
            && self.multi_link_violations.is_empty()
            && self.sphere_violations.is_empty()
    }
}

/// Checks the conditions under which the cellular boundary operator
/// computes the homology of the underlying quasi-manifold.
///
/// With `check_spheres`, the boundary of every cell is additionally
/// rebuilt as a map of its own and its Betti numbers are compared to those
/// of a sphere.
pub fn check_subclass(g: &GMap, check_spheres: bool) -> SubclassReport {
    let n = g.dimension();
    let mut report = SubclassReport {
        sphere_condition_checked: check_spheres,
        ..Default::default()
    };
    let mut walker = Walker::new(g.num_darts());
    for d in g.darts() {
        for i in 0..=n {
            if g.is_free(d, i) {
                if i < n {
                    report.free_dart_violations.push((d, i));
                }
                continue;
            }
            let mask = range_mask(0, i as isize - 2) | range_mask(i + 2, n as isize);
            let target = g.alpha(i, d);
            if walker.orbit_any(g.alphas(), d, mask, |x| x == target) {
                report.multi_link_violations.push((d, i));
            }
        }
    }
    if check_spheres {
        for i in 1..=n {
            for c in g.all_cells(i).expect("valid index") {
                if !boundary_is_sphere(g, &c) {
                    report.sphere_violations.push((i, c.canonical_dart));
                }
            }
        }
    }
    report
}

/// The canonical boundary of an `i`-cell: the `(i-1)`-map on one
/// `<alpha_0..alpha_{i-1}>` orbit of its darts.
pub fn cell_boundary(g: &GMap, c: &Cell) -> GMap {
    let i = c.dim;
    assert!(i >= 1);
    let darts = g.orbit_mask(c.canonical_dart, range_mask(0, i as isize - 1));
    let mut sorted = darts.clone();
    sorted.sort_unstable();
    let local = |d: DartId| sorted.binary_search(&d).expect("orbit is closed");
    let alpha = (0..i)
        .map(|j| sorted.iter().map(|&d| local(g.alpha(j, d))).collect())
        .collect();
    GMap::from_alphas(alpha).expect("sub-map tables are in range")
}

fn boundary_is_sphere(g: &GMap, c: &Cell) -> bool {
    let b = cell_boundary(g, c);
    let Ok(signed) = assign_signs(&b) else {
        return false;
    };
    let Ok(cc) = crate::homology::ChainComplex::build(&signed) else {
        return false;
    };
    let h = crate::homology::betti_and_torsion(&cc);
    let k = b.dimension();
    let mut expected = vec![0; k + 1];
    if k == 0 {
        expected[0] = 2;
    } else {
        expected[0] = 1;
        expected[k] = 1;
    }
    h.betti == expected && h.torsion.iter().all(Vec::is_empty)
}

/// `true` when every cell of `g` passes [`is_orientable_cell`].
pub fn all_cells_orientable(g: &GMap) -> bool {
    let catalog = g.catalog();
    (0..=g.dimension()).all(|i| catalog.cells(i).iter().all(|c| is_orientable_cell(g, c)))
}
