//! ASCII OFF meshes.

use std::path::Path;

use super::builder::{from_faces, Surface};
use crate::error::{Error, Result};
use crate::gmap::GMap;

/// A mesh loaded from OFF: its 2-map plus vertex data for output.
#[derive(Clone, Debug)]
pub struct OffMesh {
    pub gmap: GMap,
    /// Vertex index at each dart.
    pub vertex: Vec<usize>,
    pub coords: Vec<[f64; 3]>,
}

pub fn load_off(path: impl AsRef<Path>) -> Result<OffMesh> {
    let path = path.as_ref();
    parse_off(&std::fs::read_to_string(path)?, path)
}

/// Parses OFF text; `path` only labels errors.
pub fn parse_off(text: &str, path: &Path) -> Result<OffMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line: usize, msg: &str| Error::parse(path, line, msg);

    let (line, first) = lines.next().ok_or_else(|| err(0, "empty file"))?;
    let rest = first
        .strip_prefix("OFF")
        .ok_or_else(|| err(line, "missing OFF header"))?
        .trim();
    let (line, counts) = if rest.is_empty() {
        lines.next().ok_or_else(|| err(line, "missing counts"))?
    } else {
        (line, rest)
    };
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| err(line, "bad counts"))?;
    let [nv, nf, ..] = counts[..] else {
        return Err(err(line, "expected vertex and face counts"));
    };

    let mut coords = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, l) = lines.next().ok_or_else(|| err(line, "too few vertices"))?;
        let xyz: Vec<f64> = l
            .split_whitespace()
            .take(3)
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err(line, "bad vertex"))?;
        let [x, y, z] = xyz[..] else {
            return Err(err(line, "vertex needs three coordinates"));
        };
        coords.push([x, y, z]);
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, l) = lines.next().ok_or_else(|| err(line, "too few faces"))?;
        let mut it = l.split_whitespace().map(str::parse::<usize>);
        let k = match it.next() {
            Some(Ok(k)) if k >= 1 => k,
            _ => return Err(err(line, "bad face size")),
        };
        let face: Vec<usize> = it
            .take(k)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err(line, "bad face index"))?;
        if face.len() != k {
            return Err(err(line, "face is short of vertices"));
        }
        if let Some(&v) = face.iter().find(|&&v| v >= nv) {
            return Err(err(line, &format!("vertex {v} out of range")));
        }
        if (0..k).any(|j| face[j] == face[(j + 1) % k]) && k > 1 {
            return Err(err(line, "degenerate side"));
        }
        faces.push(face);
    }

    let Surface { gmap, vertex } = from_faces(&faces)?;
    Ok(OffMesh { gmap, vertex, coords })
}

/// Writes faces and coordinates as OFF text.
pub fn write_off(coords: &[[f64; 3]], faces: &[Vec<usize>]) -> String {
    let mut out = format!("OFF\n{} {} 0\n", coords.len(), faces.len());
    for [x, y, z] in coords {
        out.push_str(&format!("{x} {y} {z}\n"));
    }
    for f in faces {
        out.push_str(&f.len().to_string());
        for v in f {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<OffMesh> {
        parse_off(s, Path::new("t.off"))
    }

    #[test]
    fn single_triangle() {
        let m = parse("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n").unwrap();
        assert_eq!(m.gmap.num_darts(), 6);
        assert_eq!(m.gmap.cell_counts(), vec![3, 3, 1]);
    }

    #[test]
    fn counts_on_header_line_and_comments() {
        let m = parse("OFF 4 1 0 # square\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3 255 0 0\n").unwrap();
        assert_eq!(m.gmap.cell_counts(), vec![4, 4, 1]);
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 6, .. }), "{e}");
        assert!(parse("PLY\n").is_err());
    }
}
