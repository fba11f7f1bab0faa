//! Building 2-maps from polygons.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gmap::{DartId, GMap};

/// A polygonal surface as a 2-map.
#[derive(Clone, Debug)]
pub struct Surface {
    pub gmap: GMap,
    /// Vertex index at each dart.
    pub vertex: Vec<usize>,
}

/// Builds the 2-map of a set of polygonal faces.
///
/// Face `f` with vertices `v_0 .. v_{k-1}` owns `2k` consecutive darts;
/// darts `2j` and `2j + 1` lie on side `(v_j, v_{j+1})`, at `v_j` and
/// `v_{j+1}` respectively. Sides sharing an undirected edge are sewn by
/// `alpha_2`, vertex to vertex; unshared sides stay 2-free.
pub fn from_faces(faces: &[Vec<usize>]) -> Result<Surface> {
    let total: usize = faces.iter().map(|f| 2 * f.len()).sum();
    let mut g = GMap::new(2, total);
    let mut vertex = Vec::with_capacity(total);
    let mut edges: HashMap<(usize, usize), Vec<DartId>> = HashMap::new();
    let mut base = 0;
    for face in faces {
        let k = face.len();
        for j in 0..k {
            let (u, v) = (face[j], face[(j + 1) % k]);
            let d = base + 2 * j;
            g.sew(0, d, d + 1);
            g.sew(1, d + 1, base + 2 * ((j + 1) % k));
            vertex.extend([u, v]);
            edges.entry((u.min(v), u.max(v))).or_default().push(d);
        }
        base += 2 * k;
    }
    for (&(u, v), sides) in &edges {
        match sides[..] {
            [_] => {}
            [a, b] => {
                if vertex[a] == vertex[b] {
                    g.sew(2, a, b);
                    g.sew(2, a + 1, b + 1);
                } else {
                    g.sew(2, a, b + 1);
                    g.sew(2, a + 1, b);
                }
            }
            _ => return Err(Error::NonManifoldEdge(u, v)),
        }
    }
    Ok(Surface { gmap: g, vertex })
}

/// A single `k`-gon: `2k` darts, all 2-free.
pub fn polygon(k: usize) -> GMap {
    assert!(k >= 1, "a polygon needs at least one side");
    let face: Vec<usize> = (0..k).collect();
    from_faces(&[face]).expect("a lone polygon is a manifold").gmap
}

/// A side of a labelled polygon: label and direction.
pub type Side = (char, bool);

/// A single polygon whose sides are glued by label, the classical
/// presentation of a closed surface. `true` runs a side forwards.
///
/// ```
/// use gmap_homology::io::builder::{glued_polygon, parse_word};
///
/// let torus = glued_polygon(&parse_word("a b a' b'").unwrap()).unwrap();
/// assert_eq!(torus.cell_counts(), vec![1, 2, 1]);
/// ```
pub fn glued_polygon(word: &[Side]) -> Result<GMap> {
    let k = word.len();
    let mut g = polygon(k);
    let mut seen: HashMap<char, usize> = HashMap::new();
    for (j, &(label, forward)) in word.iter().enumerate() {
        match seen.get(&label) {
            None => {
                seen.insert(label, j);
            }
            Some(&l) if l == usize::MAX => {
                return Err(Error::MalformedTable(format!("side label {label} used more than twice")));
            }
            Some(&l) => {
                let (a, b) = (2 * l, 2 * j);
                if word[l].1 == forward {
                    g.sew(2, a, b);
                    g.sew(2, a + 1, b + 1);
                } else {
                    g.sew(2, a, b + 1);
                    g.sew(2, a + 1, b);
                }
                seen.insert(label, usize::MAX);
            }
        }
    }
    Ok(g)
}

/// Parses a surface word such as `"a b a' b'"`; a trailing `'` reverses
/// a side.
pub fn parse_word(word: &str) -> Result<Vec<Side>> {
    word.split_whitespace()
        .map(|tok| {
            let mut chars = tok.chars();
            let label = chars.next().expect("split_whitespace yields non-empty tokens");
            match chars.as_str() {
                "" => Ok((label, true)),
                "'" => Ok((label, false)),
                _ => Err(Error::MalformedTable(format!("bad side {tok:?}"))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_counts() {
        let g = polygon(3);
        assert_eq!(g.num_darts(), 6);
        assert_eq!(g.cell_counts(), vec![3, 3, 1]);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn two_triangles_share_an_edge() {
        let s = from_faces(&[vec![0, 1, 2], vec![2, 1, 3]]).unwrap();
        let g = &s.gmap;
        assert_eq!(g.num_darts(), 12);
        assert_eq!(g.darts().filter(|&d| !g.is_free(d, 2)).count(), 4);
        assert_eq!(g.cell_counts(), vec![4, 5, 2]);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn third_face_on_an_edge_is_rejected() {
        let r = from_faces(&[vec![0, 1, 2], vec![1, 0, 3], vec![0, 1, 4]]);
        assert!(matches!(r, Err(Error::NonManifoldEdge(0, 1))));
    }

    #[test]
    fn closed_surfaces_from_words() {
        for (w, counts) in [("a b a' b'", [1, 2, 1]), ("a b a b", [2, 2, 1]), ("a a'", [2, 1, 1])] {
            let g = glued_polygon(&parse_word(w).unwrap()).unwrap();
            assert!(g.validate().is_valid(), "{w}");
            assert_eq!(g.cell_counts(), counts, "{w}");
        }
    }
}
