//! Plain-text mesh format:
//!
//! ```text
//! dim 2
//! vertices N
//! x y            (N lines)
//! cells M
//! i j k REGION   (M lines, REGION = ELASTIC | FLUID)
//! boundary K
//! i j TAG        (K lines, TAG = INTERFACE | OUTER)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{BoundaryTag, Mesh, Region};
use crate::error::{Error, MeshError, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), MeshError> {
        for (i, line) in self.inner.by_ref() {
            let line = line.trim();
            self.last = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Ok((i + 1, line.split_whitespace().collect()));
        }
        Err(MeshError::Parse { line: self.last + 1, message: format!("unexpected end of file, expected {what}") })
    }

    fn header(&mut self, keyword: &str) -> Result<usize, MeshError> {
        let (line, tok) = self.next(&format!("`{keyword} <count>`"))?;
        match tok.as_slice() {
            [k, n] if *k == keyword => {
                n.parse().map_err(|_| MeshError::Parse { line, message: format!("invalid count `{n}`") })
            }
            _ => Err(MeshError::Parse { line, message: format!("expected `{keyword} <count>`") }),
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, MeshError> {
    s.parse().map_err(|_| MeshError::Parse { line, message: format!("invalid number `{s}`") })
}

pub fn parse_mesh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };
    let (line, tok) = lines.next("`dim 2`")?;
    if tok != ["dim", "2"] {
        return Err(MeshError::Parse { line, message: "expected `dim 2`".into() });
    }

    let n = lines.header("vertices")?;
    let mut vertices = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, tok) = lines.next("vertex coordinates")?;
        let [x, y] = tok.as_slice() else {
            return Err(MeshError::Parse { line, message: "expected `x y`".into() });
        };
        vertices.push([parse_num(line, x)?, parse_num(line, y)?]);
    }

    let m = lines.header("cells")?;
    let mut cells = Vec::with_capacity(m);
    let mut regions = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, tok) = lines.next("a cell")?;
        let [i, j, k, r] = tok.as_slice() else {
            return Err(MeshError::Parse { line, message: "expected `i j k REGION`".into() });
        };
        cells.push([parse_num(line, i)?, parse_num(line, j)?, parse_num(line, k)?]);
        regions.push(match *r {
            "ELASTIC" => Region::Elastic,
            "FLUID" => Region::Fluid,
            other => return Err(MeshError::Parse { line, message: format!("unknown region `{other}`") }),
        });
    }

    let k = lines.header("boundary")?;
    let mut boundary = Vec::with_capacity(k);
    for _ in 0..k {
        let (line, tok) = lines.next("a boundary edge")?;
        let [i, j, t] = tok.as_slice() else {
            return Err(MeshError::Parse { line, message: "expected `i j TAG`".into() });
        };
        let tag = match *t {
            "INTERFACE" => BoundaryTag::Interface,
            "OUTER" => BoundaryTag::Outer,
            other => return Err(MeshError::Parse { line, message: format!("unknown tag `{other}`") }),
        };
        boundary.push(([parse_num(line, i)?, parse_num(line, j)?], tag));
    }
    if let Ok((line, _)) = lines.next("") {
        return Err(MeshError::Parse { line, message: "trailing content after boundary section".into() });
    }
    Mesh::new(vertices, cells, regions, boundary)
}

/// Serializes with shortest round-trip float formatting, so that
/// `parse_mesh(&write_mesh(m))` reproduces the vertex array bit for bit.
pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    out.push_str("dim 2\n");
    let _ = writeln!(out, "vertices {}", mesh.vertices.len());
    for v in &mesh.vertices {
        let _ = writeln!(out, "{:?} {:?}", v[0], v[1]);
    }
    let _ = writeln!(out, "cells {}", mesh.cells.len());
    for (c, r) in mesh.cells.iter().zip(&mesh.regions) {
        let _ = writeln!(out, "{} {} {} {r}", c[0], c[1], c[2]);
    }
    let _ = writeln!(out, "boundary {}", mesh.boundary.len());
    for e in &mesh.boundary {
        let _ = writeln!(out, "{} {} {}", e.vertices[0], e.vertices[1], e.tag);
    }
    out
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading mesh {}", path.display()), e))?;
    Ok(parse_mesh(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_disk_annulus;

    #[test]
    fn round_trip_is_exact() {
        let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 6, 20).unwrap();
        let back = parse_mesh(&write_mesh(&mesh)).unwrap();
        assert_eq!(back.vertices(), mesh.vertices());
        assert_eq!(back.cells(), mesh.cells());
        assert_eq!(back.regions(), mesh.regions());
        assert_eq!(back.boundary_edges(), mesh.boundary_edges());
    }

    #[test]
    fn dangling_vertex_names_the_cell() {
        let text = "dim 2\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 1 3 FLUID\nboundary 0\n";
        let err = parse_mesh(text).unwrap_err();
        assert!(matches!(err, MeshError::Cell { cell: 0, .. }), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "dim 2\nvertices 2\n0 0\n1 zero\n";
        assert_eq!(
            parse_mesh(text).unwrap_err(),
            MeshError::Parse { line: 4, message: "invalid number `zero`".into() }
        );
        let text = "dim 2\nvertices 1\n0 0\ncells 1\n0 0 0 SOLID\n";
        assert!(matches!(parse_mesh(text), Err(MeshError::Parse { line: 5, .. })));
        assert!(matches!(parse_mesh("dim 3\n"), Err(MeshError::Parse { line: 1, .. })));
        assert!(matches!(parse_mesh("dim 2\nvertices 2\n0 0\n"), Err(MeshError::Parse { .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(load_mesh("/nonexistent/mesh.txt"), Err(Error::Io { .. })));
    }
}
