mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use gmap_homology::homology::{apply_f, betti_and_torsion, project_chain, Chain, ChainComplex};
use gmap_homology::simplify::{
    cells_preserved, contract_cell, is_contractible, is_removable, remove_cell, simplify_signed, OperationKind,
    SimplifyOptions,
};
use gmap_homology::{assign_signs, Cell, DartId, GMap};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// Preservation decided by performing the operation on a copy and
/// cataloguing the result.
fn preserved_by_copy(g: &GMap, c: &Cell, kind: OperationKind) -> bool {
    let (i, n) = (c.dim, g.dimension());
    let (result, m) = match kind {
        OperationKind::Removal if is_removable(g, c) => (remove_cell(g, c), i + 1),
        OperationKind::Contraction if is_contractible(g, c) => (contract_cell(g, c), i - 1),
        _ => return false,
    };
    let Ok((h, map)) = result else {
        return false;
    };
    assert!(h.validate().is_valid());
    let back: Vec<DartId> = (0..map.len()).filter(|&d| map[d].is_some()).collect();
    let cset: BTreeSet<DartId> = c.darts.iter().copied().collect();
    let neighbours: Vec<BTreeSet<DartId>> = cells(g, m).into_iter().filter(|e| !e.is_disjoint(&cset)).collect();
    for j in (0..=n).filter(|&j| j != i) {
        let after: BTreeSet<BTreeSet<DartId>> = cells(&h, j)
            .into_iter()
            .map(|e| e.into_iter().map(|d| back[d]).collect())
            .collect();
        for e in cells(g, j) {
            if j == m && neighbours.len() == 2 && neighbours.contains(&e) {
                continue;
            }
            let rest: BTreeSet<DartId> = e.difference(&cset).copied().collect();
            if rest.is_empty() || !after.contains(&rest) {
                return false;
            }
        }
        if j == m && neighbours.len() == 2 {
            let merged: BTreeSet<DartId> = neighbours[0].union(&neighbours[1]).filter(|d| !cset.contains(d)).copied().collect();
            if merged.is_empty() || !after.contains(&merged) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn random_maps_are_valid(seed in any::<u64>()) {
        let g = random_map(seed);
        prop_assert!(g.validate().is_valid());
        prop_assert_eq!(g.cell_counts(), counts(&g));
    }

    #[test]
    fn preservation_matches_copy(seed in any::<u64>()) {
        let g = random_map(seed);
        for i in 0..=g.dimension() {
            for c in g.all_cells(i).unwrap() {
                for kind in [OperationKind::Removal, OperationKind::Contraction] {
                    prop_assert_eq!(
                        cells_preserved(&g, &c, kind),
                        preserved_by_copy(&g, &c, kind),
                        "{:?} of {}-cell at {}", kind, i, c.canonical_dart
                    );
                }
            }
        }
    }

    #[test]
    fn incidences_match_definition(seed in any::<u64>()) {
        let g = random_map(seed);
        let s = assign_signs(&g).unwrap();
        prop_assert!(s.check_signs().is_none());
        let cc = ChainComplex::build(&s).unwrap();
        let dense = boundary_matrices(&s);
        for p in 1..=g.dimension() {
            let m = cc.matrix(p).to_dense();
            for (r, row) in dense[p].iter().enumerate() {
                for (k, &v) in row.iter().enumerate() {
                    prop_assert_eq!(&m[(r, k)], &BigInt::from(v));
                }
            }
            if p >= 2 {
                let zero = mat_mul(&dense[p - 1], &dense[p]);
                prop_assert!(zero.iter().flatten().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn incidence_ignores_representatives(seed in any::<u64>(), picks in any::<u64>()) {
        let g = random_map(seed);
        let s = assign_signs(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(picks);
        for i in 1..=g.dimension() {
            let lows = cells(&g, i - 1);
            for hi in cells(&g, i) {
                for lo in lows.iter().filter(|lo| !lo.is_disjoint(&hi)) {
                    let base = incidence(&s, &hi, i, lo);
                    let start = *hi.iter().nth(rng.gen_range(0..hi.len())).unwrap();
                    let other = incidence_with(&s, &hi, i, lo, start, |_, part| part[rng.gen_range(0..part.len())]);
                    prop_assert_eq!(base, other);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config(60))]

    #[test]
    fn every_step_keeps_homology_and_signs(seed in any::<u64>(), order in 0usize..3) {
        let g = random_map(seed);
        let s = assign_signs(&g).unwrap();
        let expected = full_homology(&g);
        let opts = [
            SimplifyOptions::default(),
            SimplifyOptions::removal_only(),
            SimplifyOptions { contraction_first: true, ..SimplifyOptions::default() },
        ][order];
        let mut failures = Vec::new();
        let r = simplify_signed(&s, opts, &mut |sim| {
            let (snap, _) = sim.snapshot();
            if !snap.base().validate().is_valid() {
                failures.push(format!("invalid after {} ops", sim.records().len()));
            }
            if snap.check_signs().is_some() {
                failures.push(format!("signs broken after {} ops", sim.records().len()));
            }
            if betti_and_torsion(&ChainComplex::build(&snap).unwrap()) != expected {
                failures.push(format!("homology changed after {} ops", sim.records().len()));
            }
        });
        prop_assert!(failures.is_empty(), "{:?}", failures);
        prop_assert_eq!(r.log.replay(&g).unwrap(), r.gmap().clone());
    }

    #[test]
    fn projection_maps_are_chain_maps(seed in any::<u64>(), coeffs in any::<u64>()) {
        let g = random_map(seed);
        let s = assign_signs(&g).unwrap();
        let r = simplify_signed(&s, SimplifyOptions::default(), &mut |_| {});
        let before = ChainComplex::build(&s).unwrap();
        let after = ChainComplex::build(&r.signed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(coeffs);
        let mut random_chain = |size: usize| -> Chain {
            (0..size)
                .filter_map(|k| {
                    let v = rng.gen_range(-3i64..=3);
                    (rng.gen_bool(0.5) && v != 0).then(|| (k, BigInt::from(v)))
                })
                .collect()
        };
        for p in 0..=g.dimension() {
            let z = random_chain(after.size(p));
            let lifted = project_chain(&r.log, p, &z).unwrap();
            prop_assert_eq!(apply_f(&r.log, p, &lifted).unwrap(), z.clone());
            if p >= 1 {
                let down = project_chain(&r.log, p - 1, &after.boundary(p, &z)).unwrap();
                prop_assert_eq!(before.boundary(p, &lifted), down);
                let x = random_chain(before.size(p));
                prop_assert_eq!(
                    apply_f(&r.log, p - 1, &before.boundary(p, &x)).unwrap(),
                    after.boundary(p, &apply_f(&r.log, p, &x).unwrap())
                );
            }
        }
    }

    #[test]
    fn reseeding_signs_keeps_homology(seed in any::<u64>(), signs in any::<u64>()) {
        let g = random_map(seed);
        let mut s = assign_signs(&g).unwrap();
        let expected = full_homology(&g);
        s.reseed(&mut ChaCha8Rng::seed_from_u64(signs));
        prop_assert!(s.check_signs().is_none());
        prop_assert_eq!(betti_and_torsion(&ChainComplex::build(&s).unwrap()), expected.clone());
        let r = simplify_signed(&s, SimplifyOptions::default(), &mut |_| {});
        prop_assert_eq!(betti_and_torsion(&ChainComplex::build(&r.signed).unwrap()), expected);
    }
}

#[test]
fn degree_two_cells_have_unit_incidences() {
    let mut checked = BTreeMap::new();
    for seed in 0..1000u64 {
        let g = random_map(seed);
        let s = assign_signs(&g).unwrap();
        let all: Vec<Vec<BTreeSet<DartId>>> = (0..=g.dimension()).map(|i| cells(&g, i)).collect();
        for i in 0..=g.dimension() {
            for c in g.all_cells(i).unwrap() {
                let cset: BTreeSet<DartId> = c.darts.iter().copied().collect();
                if is_removable(&g, &c) && g.degree(&c).unwrap() == 2 {
                    let incs: Vec<(bool, i64)> = all[i + 1]
                        .iter()
                        .map(|hi| (!hi.is_disjoint(&cset), incidence(&s, hi, i + 1, &cset)))
                        .collect();
                    assert_unit_pair(&incs, seed, i, "removable");
                    *checked.entry("removal").or_insert(0) += 1;
                }
                if is_contractible(&g, &c) && g.codegree(&c).unwrap() == 2 {
                    let incs: Vec<(bool, i64)> = all[i - 1]
                        .iter()
                        .map(|lo| (!lo.is_disjoint(&cset), incidence(&s, &cset, i, lo)))
                        .collect();
                    assert_unit_pair(&incs, seed, i, "contractible");
                    *checked.entry("contraction").or_insert(0) += 1;
                }
            }
        }
    }
    assert!(checked.values().all(|&k| k > 100), "{checked:?}");
}

fn assert_unit_pair(incs: &[(bool, i64)], seed: u64, i: usize, what: &str) {
    let incident: Vec<i64> = incs.iter().filter(|x| x.0).map(|x| x.1).collect();
    assert_eq!(incident.len(), 2, "seed {seed}: {what} {i}-cell");
    assert!(incident.iter().all(|v| v.abs() == 1), "seed {seed}: {what} {i}-cell {incident:?}");
    assert!(incs.iter().filter(|x| !x.0).all(|x| x.1 == 0));
}
