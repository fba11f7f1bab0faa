//! Plain-text involution tables.
//!
//! ```text
//! gmap 3 12
//! alpha0 2 1 4 3 6 5 8 7 10 9 12 11
//! alpha1 8 3 2 5 4 7 6 1 11 12 9 10
//! alpha2 11 12 7 8 9 10 3 4 5 6 1 2
//! ```
//!
//! The header gives the dimension and the dart count; row `alpha<i>`
//! lists `alpha_i(d)` for `d = 1 .. num_darts`. Darts are 1-based. Rows
//! may come in any order, a missing row is the identity, and `#` starts
//! a comment. The writer emits every row.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gmap::{GMap, Violation, MAX_DIMENSION};

pub fn read_gmap_table(path: impl AsRef<Path>) -> Result<GMap> {
    let path = path.as_ref();
    parse_gmap_table(&std::fs::read_to_string(path)?, path)
}

/// Parses a table and checks the involution axiom row by row.
pub fn parse_gmap_table(text: &str, path: &Path) -> Result<GMap> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(path, 0, "empty table"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, darts) = match fields[..] {
        ["gmap", n, d] => match (n.parse::<usize>(), d.parse::<usize>()) {
            (Ok(n), Ok(d)) if n <= MAX_DIMENSION => (n, d),
            _ => return Err(Error::parse(path, hline, "bad header")),
        },
        _ => return Err(Error::parse(path, hline, "expected `gmap <dimension> <darts>`")),
    };
    let mut alpha: Vec<Option<Vec<usize>>> = vec![None; n + 1];
    let mut row_line = vec![hline; n + 1];
    for (line, l) in lines {
        let mut it = l.split_whitespace();
        let name = it.next().expect("line is non-empty");
        let i = name
            .strip_prefix("alpha")
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| i <= n)
            .ok_or_else(|| Error::parse(path, line, format!("unknown row {name:?}")))?;
        if alpha[i].is_some() {
            return Err(Error::parse(path, line, format!("alpha{i} given twice")));
        }
        let row: Vec<usize> = it
            .map(|t| t.parse::<usize>().ok().filter(|&v| (1..=darts).contains(&v)).map(|v| v - 1))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::parse(path, line, format!("alpha{i}: entries must lie in 1..={darts}")))?;
        if row.len() != darts {
            return Err(Error::parse(
                path,
                line,
                format!("alpha{i} has {} entries, expected {darts}", row.len()),
            ));
        }
        alpha[i] = Some(row);
        row_line[i] = line;
    }
    let alpha: Vec<Vec<usize>> = alpha
        .into_iter()
        .map(|r| r.unwrap_or_else(|| (0..darts).collect()))
        .collect();
    let g = GMap::from_alphas(alpha)?;
    if let Some(&Violation::NotInvolution { i, d }) = g.validate().violations.first() {
        return Err(Error::parse(
            path,
            row_line[i],
            format!("alpha{i} is not an involution at dart {}", d + 1),
        ));
    }
    Ok(g)
}

/// Writes the table of `g`; `parse_gmap_table` inverts it exactly.
pub fn write_gmap_table(g: &GMap) -> String {
    let mut out = format!("gmap {} {}\n", g.dimension(), g.num_darts());
    for (i, row) in g.alphas().iter().enumerate() {
        write!(out, "alpha{i}").unwrap();
        for &e in row {
            write!(out, " {}", e + 1).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<GMap> {
        parse_gmap_table(s, Path::new("t.gmap"))
    }

    #[test]
    fn round_trip() {
        let text = "gmap 1 2\nalpha0 2 1\nalpha1 1 2\n";
        let g = parse(text).unwrap();
        assert_eq!(write_gmap_table(&g), text);
    }

    #[test]
    fn missing_rows_are_identity() {
        let g = parse("gmap 2 2\nalpha0 2 1\n").unwrap();
        assert!(g.is_free(0, 1) && g.is_free(1, 2));
    }

    #[test]
    fn truncated_row_names_the_index() {
        let e = parse("gmap 2 4\nalpha0 2 1 4 3\nalpha1 1 3 2\n").unwrap_err();
        assert!(e.to_string().contains("alpha1"), "{e}");
        assert!(matches!(e, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn non_involution_is_located() {
        let e = parse("gmap 1 3\nalpha0 2 3 1\n").unwrap_err();
        assert!(e.to_string().contains("alpha0 is not an involution at dart 1"), "{e}");
    }
}
