//! Voxel sets as 3-maps.
//!
//! Every voxel is a cube of 48 darts laid out by a fixed template: faces
//! `-x, +x, -y, +y, -z, +z` own darts `8f .. 8f + 8` in that order, and
//! within a face the darts follow [`from_faces`] on the cube corners
//! `x + 2y + 4z`. Voxel `k` (in sorted coordinate order) owns darts
//! `48k .. 48k + 48`. Face-adjacent voxels are sewn by `alpha_3` through
//! a per-axis index table.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::builder::from_faces;
use crate::error::{Error, Result};
use crate::gmap::GMap;

pub type Voxel = [u32; 3];

pub const DARTS_PER_VOXEL: usize = 48;

const CUBE_FACES: [[usize; 4]; 6] = [
    [0, 2, 6, 4],
    [1, 3, 7, 5],
    [0, 1, 5, 4],
    [2, 3, 7, 6],
    [0, 1, 3, 2],
    [4, 5, 7, 6],
];

struct Template {
    alpha: [[u8; DARTS_PER_VOXEL]; 3],
    /// `sew[a][k]`: dart of the `-a` face of the `+a` neighbour matched
    /// with dart `k` of the `+a` face, both local to their face.
    sew: [[u8; 8]; 3],
}

fn template() -> &'static Template {
    static T: OnceLock<Template> = OnceLock::new();
    T.get_or_init(|| {
        let faces: Vec<Vec<usize>> = CUBE_FACES.iter().map(|f| f.to_vec()).collect();
        let s = from_faces(&faces).expect("the cube surface is a manifold");
        let mut alpha = [[0u8; DARTS_PER_VOXEL]; 3];
        for (i, row) in alpha.iter_mut().enumerate() {
            for (d, e) in row.iter_mut().enumerate() {
                *e = s.gmap.alpha(i, d) as u8;
            }
        }
        // A dart is identified by its corner and the other corner of its side.
        let key = |d: usize| (s.vertex[d], s.vertex[s.gmap.alpha(0, d)]);
        let mut sew = [[0u8; 8]; 3];
        for (a, row) in sew.iter_mut().enumerate() {
            let bit = 1 << a;
            let (plus, minus) = (8 * (2 * a + 1), 8 * (2 * a));
            for (k, e) in row.iter_mut().enumerate() {
                let (v, w) = key(plus + k);
                let want = (v - bit, w - bit);
                *e = (0..8).find(|&j| key(minus + j) == want).expect("opposite faces match") as u8;
            }
        }
        Template { alpha, sew }
    })
}

/// Builds the 3-map of a voxel set. Duplicates are ignored and the
/// result does not depend on input order.
pub fn voxels_to_gmap(voxels: &[Voxel]) -> GMap {
    let set: BTreeSet<Voxel> = voxels.iter().copied().collect();
    let sorted: Vec<Voxel> = set.into_iter().collect();
    let index: HashMap<Voxel, usize> = sorted.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let t = template();
    let n = sorted.len() * DARTS_PER_VOXEL;
    let mut alpha: Vec<Vec<usize>> = Vec::with_capacity(4);
    for i in 0..3 {
        let mut row = Vec::with_capacity(n);
        for k in 0..sorted.len() {
            row.extend(t.alpha[i].iter().map(|&e| DARTS_PER_VOXEL * k + e as usize));
        }
        alpha.push(row);
    }
    let mut a3: Vec<usize> = (0..n).collect();
    for (k, v) in sorted.iter().enumerate() {
        for a in 0..3 {
            let mut w = *v;
            w[a] += 1;
            if let Some(&m) = index.get(&w) {
                let plus = DARTS_PER_VOXEL * k + 8 * (2 * a + 1);
                let minus = DARTS_PER_VOXEL * m + 8 * (2 * a);
                for (j, &e) in t.sew[a].iter().enumerate() {
                    a3[plus + j] = minus + e as usize;
                    a3[minus + e as usize] = plus + j;
                }
            }
        }
    }
    alpha.push(a3);
    GMap::from_alphas(alpha).expect("template tables are in range")
}

pub fn load_voxels(path: impl AsRef<Path>) -> Result<GMap> {
    let path = path.as_ref();
    Ok(voxels_to_gmap(&parse_voxels(&std::fs::read_to_string(path)?, path)?))
}

/// Parses `x y z` lines; blank lines and `#` comments are skipped.
pub fn parse_voxels(text: &str, path: &Path) -> Result<Vec<Voxel>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let xyz: Vec<u32> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(path, k + 1, "expected three non-negative integers"))?;
        let [x, y, z] = xyz[..] else {
            return Err(Error::parse(path, k + 1, "expected three non-negative integers"));
        };
        if [x, y, z].contains(&u32::MAX) {
            return Err(Error::parse(path, k + 1, "coordinate out of range"));
        }
        out.push([x, y, z]);
    }
    Ok(out)
}

pub fn write_voxels(voxels: &[Voxel]) -> String {
    voxels.iter().map(|[x, y, z]| format!("{x} {y} {z}\n")).collect()
}

/// `count` distinct voxels drawn uniformly from a `grid`³ box.
pub fn random_uniform(grid: u32, count: usize, seed: u64) -> Vec<Voxel> {
    let g = grid as usize;
    let total = g * g * g;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Voxel> = sample(&mut rng, total, count.min(total))
        .into_iter()
        .map(|k| [(k % g) as u32, ((k / g) % g) as u32, (k / (g * g)) as u32])
        .collect();
    out.sort_unstable();
    out
}

/// A face-connected blob of `count` voxels grown from the centre of a
/// `grid`³ box by repeatedly adding a random face neighbour.
pub fn random_blob(grid: u32, count: usize, seed: u64) -> Vec<Voxel> {
    let g = grid as usize;
    let count = count.min(g * g * g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    let mut list = Vec::with_capacity(count);
    if count == 0 {
        return list;
    }
    let c = grid / 2;
    set.insert([c, c, c]);
    list.push([c, c, c]);
    while list.len() < count {
        let mut v = list[rng.gen_range(0..list.len())];
        let a = rng.gen_range(0..3);
        if rng.gen_bool(0.5) {
            if v[a] + 1 >= grid {
                continue;
            }
            v[a] += 1;
        } else {
            if v[a] == 0 {
                continue;
            }
            v[a] -= 1;
        }
        if set.insert(v) {
            list.push(v);
        }
    }
    set.into_iter().collect()
}

/// Every voxel of an `a × b × c` block.
pub fn block(a: u32, b: u32, c: u32) -> Vec<Voxel> {
    let mut out = Vec::new();
    for x in 0..a {
        for y in 0..b {
            for z in 0..c {
                out.push([x, y, z]);
            }
        }
    }
    out
}

/// Draws a seed-reproducible voxel set, shaped as a blob when
/// `connected`.
pub fn random_set(grid: u32, count: usize, seed: u64, connected: bool) -> Vec<Voxel> {
    if connected {
        random_blob(grid, count, seed)
    } else {
        random_uniform(grid, count, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_voxel_is_a_cube() {
        let g = voxels_to_gmap(&[[0, 0, 0]]);
        assert_eq!(g.num_darts(), 48);
        assert_eq!(g.cell_counts(), vec![8, 12, 6, 1]);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn two_voxels_share_a_face() {
        for w in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            let g = voxels_to_gmap(&[[0, 0, 0], w]);
            assert_eq!(g.num_darts(), 96);
            assert!(g.validate().is_valid());
            assert_eq!(g.cell_counts(), vec![12, 20, 11, 2]);
        }
    }

    #[test]
    fn order_and_duplicates_do_not_matter() {
        let a = voxels_to_gmap(&[[0, 0, 0], [1, 0, 0], [1, 1, 0]]);
        let b = voxels_to_gmap(&[[1, 1, 0], [0, 0, 0], [1, 0, 0], [0, 0, 0]]);
        assert_eq!(a, b);
    }

    #[test]
    fn blobs_are_seeded_and_sized() {
        let a = random_blob(8, 40, 3);
        assert_eq!(a.len(), 40);
        assert_eq!(a, random_blob(8, 40, 3));
        assert_eq!(random_uniform(4, 100, 1).len(), 64);
    }
}
