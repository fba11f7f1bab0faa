mod common;

use common::*;
use gmap_homology::homology::{apply_f, homology, project_generators, Chain, ChainComplex};
use gmap_homology::simplify::{simplify_signed, SimplifyOptions};
use gmap_homology::{assign_signs, GMap};
use num_traits::ToPrimitive;

fn dense(cc: &ChainComplex, p: usize) -> Vec<Vec<i64>> {
    let m = cc.matrix(p).to_dense();
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)].to_i64().unwrap()).collect()).collect()
}

fn column(z: &Chain, size: usize) -> Vec<i64> {
    let mut v = vec![0; size];
    for (&k, c) in z {
        v[k] = c.to_i64().unwrap();
    }
    v
}

fn check_projection(g: &GMap, opts: SimplifyOptions) {
    let s = assign_signs(g).unwrap();
    let original = ChainComplex::build(&s).unwrap();
    let r = simplify_signed(&s, opts, &mut |_| {});
    let h = homology(&ChainComplex::build(&r.signed).unwrap());
    let projected = project_generators(&h, &r.log, &original).unwrap();
    for (p, gens) in projected.iter().enumerate() {
        assert_eq!(gens.len(), h.betti[p]);
        for z in gens {
            assert!(original.boundary(p, z).is_empty(), "dimension {p}: not a cycle");
        }
        for (z, w) in gens.iter().zip(&h.generators[p]) {
            assert_eq!(&apply_f(&r.log, p, z).unwrap(), w);
        }
        // independence modulo boundaries: rank [B | Z] = rank B + #Z
        let size = original.size(p);
        let mut stacked = if p < g.dimension() { dense(&original, p + 1) } else { vec![Vec::new(); size] };
        let base = rank(&stacked);
        for z in gens {
            for (row, v) in stacked.iter_mut().zip(column(z, size)) {
                row.push(v);
            }
        }
        assert_eq!(rank(&stacked), base + gens.len(), "dimension {p}");
    }
}

#[test]
fn torus_generators_project_to_independent_cycles() {
    for opts in [SimplifyOptions::default(), SimplifyOptions::removal_only()] {
        check_projection(&mesh("torus.off"), opts);
    }
}

#[test]
fn two_tori_generators_project_to_independent_cycles() {
    for opts in [SimplifyOptions::default(), SimplifyOptions { contraction_first: true, ..SimplifyOptions::default() }] {
        check_projection(&mesh("two_tori.off"), opts);
    }
}

#[test]
fn other_meshes_project_cleanly() {
    for name in ["disc.off", "sphere.off", "moebius.off"] {
        check_projection(&mesh(name), SimplifyOptions::default());
    }
}

#[test]
fn mismatched_complex_is_rejected() {
    let g = mesh("torus.off");
    let s = assign_signs(&g).unwrap();
    let r = simplify_signed(&s, SimplifyOptions::default(), &mut |_| {});
    let h = homology(&ChainComplex::build(&r.signed).unwrap());
    let other = ChainComplex::build(&assign_signs(&mesh("sphere.off")).unwrap()).unwrap();
    assert!(project_generators(&h, &r.log, &other).is_err());
}
