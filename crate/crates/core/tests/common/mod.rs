//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;

use gmap_homology::homology::{betti_and_torsion, ChainComplex, HomologySummary};
use gmap_homology::io::voxels::{random_uniform, voxels_to_gmap};
use gmap_homology::io::{load, Format};
use gmap_homology::{assign_signs, Cell, DartId, GMap, SignedGMap};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub const MESHES: [&str; 5] = ["disc.off", "sphere.off", "torus.off", "moebius.off", "two_tori.off"];

pub fn mesh(name: &str) -> GMap {
    load(&fixture(name), Format::Off).unwrap()
}

pub fn table(name: &str) -> GMap {
    load(&fixture(name), Format::Gmap).unwrap()
}

/// Orbit of `d` under the listed involutions, by plain breadth-first search.
pub fn orbit(g: &GMap, d: DartId, idx: &[usize]) -> BTreeSet<DartId> {
    let mut seen = BTreeSet::from([d]);
    let mut queue = VecDeque::from([d]);
    while let Some(x) = queue.pop_front() {
        for &i in idx {
            let y = g.alpha(i, x);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn cell_orbit(g: &GMap, d: DartId, i: usize) -> BTreeSet<DartId> {
    let idx: Vec<usize> = (0..=g.dimension()).filter(|&j| j != i).collect();
    orbit(g, d, &idx)
}

/// All `i`-cells as dart sets, ordered by smallest dart.
pub fn cells(g: &GMap, i: usize) -> Vec<BTreeSet<DartId>> {
    let mut seen = vec![false; g.num_darts()];
    let mut out = Vec::new();
    for d in g.darts() {
        if !seen[d] {
            let c = cell_orbit(g, d, i);
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
    }
    out
}

pub fn counts(g: &GMap) -> Vec<usize> {
    (0..=g.dimension()).map(|i| cells(g, i).len()).collect()
}

/// Signed incidence of `hi` on `lo` from the definition, starting from
/// `start` and taking `pick(k, orbit)` as the representative of the
/// `k`-th sub-orbit.
pub fn incidence_with(
    s: &SignedGMap,
    hi: &BTreeSet<DartId>,
    i: usize,
    lo: &BTreeSet<DartId>,
    start: DartId,
    mut pick: impl FnMut(usize, &[DartId]) -> DartId,
) -> i64 {
    let g = s.base();
    let outer: Vec<usize> = (0..i).collect();
    let inner: Vec<usize> = (0..i.saturating_sub(1)).collect();
    assert!(hi.contains(&start));
    let region = orbit(g, start, &outer);
    let mut done = BTreeSet::new();
    let mut total = 0;
    let mut k = 0;
    for &d in &region {
        if done.contains(&d) {
            continue;
        }
        let part: Vec<DartId> = if i == 0 { vec![d] } else { orbit(g, d, &inner).into_iter().collect() };
        done.extend(part.iter().copied());
        let p = pick(k, &part);
        k += 1;
        if lo.contains(&p) {
            total += s.sign(i, p) as i64 * s.sign(i - 1, p) as i64;
        }
    }
    total
}

pub fn incidence(s: &SignedGMap, hi: &BTreeSet<DartId>, i: usize, lo: &BTreeSet<DartId>) -> i64 {
    let start = *hi.iter().next().unwrap();
    incidence_with(s, hi, i, lo, start, |_, part| part[0])
}

/// Dense boundary matrices from the definition: `m[p][row][col]`.
pub fn boundary_matrices(s: &SignedGMap) -> Vec<Vec<Vec<i64>>> {
    let g = s.base();
    let all: Vec<Vec<BTreeSet<DartId>>> = (0..=g.dimension()).map(|i| cells(g, i)).collect();
    let mut out = vec![Vec::new()];
    for p in 1..=g.dimension() {
        let m = all[p - 1]
            .iter()
            .map(|lo| all[p].iter().map(|hi| incidence(s, hi, p, lo)).collect())
            .collect();
        out.push(m);
    }
    out
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|c| (0..inner).map(|k| row[k] * b[k][c]).sum()).collect())
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by fraction-free elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) / prev;
            }
            a[r][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Non-zero invariant factors as ratios of determinantal divisors.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for r in combinations(rows, k) {
            for c in combinations(cols, k) {
                let minor: Vec<Vec<i128>> = r.iter().map(|&i| c.iter().map(|&j| m[i][j] as i128).collect()).collect();
                d = gcd(d, det(&minor));
                if d == 1 && k > 1 {
                    break;
                }
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            if a[i][c] != 0 {
                let (x, y) = (a[r][c], a[i][c]);
                let pivot = a[r].clone();
                for (v, p) in a[i].iter_mut().zip(&pivot).skip(c) {
                    *v = *v * x - p * y;
                }
                let g = a[i].iter().fold(0, |g, &v| gcd(g, v));
                if g > 1 {
                    a[i].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        r += 1;
    }
    r
}

/// Homology with the library's sparse reduction on the unsimplified map.
pub fn full_homology(g: &GMap) -> HomologySummary {
    betti_and_torsion(&ChainComplex::build(&assign_signs(g).unwrap()).unwrap())
}

/// A random 2-map: polygons with `sizes` sides whose sides are paired at
/// random, each pair glued in a random direction; some sides stay free.
pub fn random_surface(sizes: &[usize], seed: u64) -> GMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = sizes.iter().map(|k| 2 * k).sum();
    let mut g = GMap::new(2, total);
    let mut sides = Vec::new();
    let mut base = 0;
    for &k in sizes {
        for j in 0..k {
            let d = base + 2 * j;
            g.sew(0, d, d + 1);
            g.sew(1, d + 1, base + 2 * ((j + 1) % k));
            sides.push(d);
        }
        base += 2 * k;
    }
    sides.shuffle(&mut rng);
    for pair in sides.chunks(2) {
        if let [a, b] = *pair {
            if rng.gen_bool(0.85) {
                if rng.gen_bool(0.5) {
                    g.sew(2, a, b);
                    g.sew(2, a + 1, b + 1);
                } else {
                    g.sew(2, a, b + 1);
                    g.sew(2, a + 1, b);
                }
            }
        }
    }
    g
}

/// A small random map: a glued surface or a voxel set.
pub fn random_map(seed: u64) -> GMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rng.gen_bool(0.6) {
        let n = rng.gen_range(1..=5);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
        random_surface(&sizes, rng.gen())
    } else {
        let count = rng.gen_range(1..=12);
        voxels_to_gmap(&random_uniform(3, count, rng.gen()))
    }
}

pub fn cell(g: &GMap, i: usize, d: DartId) -> Cell {
    g.cell(d, i).unwrap()
}
