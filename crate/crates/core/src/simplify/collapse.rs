//! Greedy search for a sequence of elementary collapses.

use std::collections::{BTreeMap, BTreeSet};

use super::log::CellRef;

/// Ambient cofaces of a cell with their incidence numbers; `None` stands
/// for an incidence that could not be evaluated and blocks the collapse.
pub type Cofaces = Vec<(CellRef, Option<i64>)>;

/// Orders `cells` as elementary collapses `(lower, upper)`.
///
/// A pair is free when `|(upper:lower)| = 1` and every other surviving
/// coface of `lower` has incidence zero with it. Cofaces outside `cells`
/// never disappear. Returns `None` when no order empties the set; the
/// greedy pass is retried from every initially free pair.
pub fn is_collapsible(
    cells: &[CellRef],
    mut cofaces: impl FnMut(CellRef) -> Cofaces,
) -> Option<Vec<(CellRef, CellRef)>> {
    if cells.is_empty() {
        return Some(Vec::new());
    }
    if cells.len() % 2 == 1 {
        return None;
    }
    let set: BTreeSet<CellRef> = cells.iter().copied().collect();
    let table: BTreeMap<CellRef, Cofaces> = set.iter().map(|&c| (c, cofaces(c))).collect();
    let free = |removed: &BTreeSet<CellRef>, lo: CellRef, hi: CellRef| -> bool {
        let mut found = false;
        for &(x, inc) in &table[&lo] {
            if removed.contains(&x) {
                continue;
            }
            if x == hi {
                found = matches!(inc, Some(1) | Some(-1));
                if !found {
                    return false;
                }
            } else if inc != Some(0) {
                return false;
            }
        }
        found
    };
    let pairs_of = |removed: &BTreeSet<CellRef>| -> Vec<(CellRef, CellRef)> {
        let mut out = Vec::new();
        for &lo in &set {
            if removed.contains(&lo) {
                continue;
            }
            for &(hi, _) in &table[&lo] {
                if set.contains(&hi) && !removed.contains(&hi) && free(removed, lo, hi) {
                    out.push((lo, hi));
                }
            }
        }
        out
    };
    for start in pairs_of(&BTreeSet::new()) {
        let mut removed = BTreeSet::from([start.0, start.1]);
        let mut seq = vec![start];
        while removed.len() < set.len() {
            let Some(&next) = pairs_of(&removed).first() else {
                break;
            };
            removed.insert(next.0);
            removed.insert(next.1);
            seq.push(next);
        }
        if removed.len() == set.len() {
            return Some(seq);
        }
    }
    None
}
