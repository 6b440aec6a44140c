//! Tagged triangulations of the truncated disk: an elastic inclusion
//! surrounded by fluid, closed by the outer circle.

mod generate;
mod io;

use std::collections::HashMap;
use std::fmt;

pub use generate::{generate_disk_annulus, generate_graded_disk, RingLayout};
pub use io::{load_mesh, parse_mesh, write_mesh};

use crate::error::MeshError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Elastic,
    Fluid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    /// Edge on the solid/fluid interface.
    Interface,
    /// Edge on the truncation circle.
    Outer,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Elastic => "ELASTIC",
            Region::Fluid => "FLUID",
        })
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryTag::Interface => "INTERFACE",
            BoundaryTag::Outer => "OUTER",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: BoundaryTag,
    /// Unit normal. Interface normals point from the solid into the fluid,
    /// outer normals point away from the domain.
    pub normal: [f64; 2],
    /// Cell on the fluid side.
    pub fluid_cell: usize,
    /// Cell on the solid side, interface edges only.
    pub elastic_cell: Option<usize>,
}

impl BoundaryEdge {
    pub fn length(&self, mesh: &Mesh) -> f64 {
        let [a, b] = self.vertices.map(|v| mesh.vertices[v]);
        (b[0] - a[0]).hypot(b[1] - a[1])
    }
}

/// A validated triangulation. Construct with [`Mesh::new`], the generators
/// or [`load_mesh`]; all of them enforce the same invariants.
#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<[f64; 2]>,
    cells: Vec<[usize; 3]>,
    regions: Vec<Region>,
    boundary: Vec<BoundaryEdge>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn signed_area(p: [[f64; 2]; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

/// Unit normal of edge `a→b` oriented away from `inside`.
fn edge_normal(a: [f64; 2], b: [f64; 2], inside: [f64; 2]) -> [f64; 2] {
    let (tx, ty) = (b[0] - a[0], b[1] - a[1]);
    let len = tx.hypot(ty);
    let mut n = [ty / len, -tx / len];
    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    if n[0] * (inside[0] - mid[0]) + n[1] * (inside[1] - mid[1]) > 0.0 {
        n = [-n[0], -n[1]];
    }
    n
}

impl Mesh {
    /// Validates and builds a mesh. Boundary edges are given as vertex pairs
    /// with tags; normals and adjacent cells are derived.
    pub fn new(
        vertices: Vec<[f64; 2]>,
        cells: Vec<[usize; 3]>,
        regions: Vec<Region>,
        boundary: Vec<([usize; 2], BoundaryTag)>,
    ) -> Result<Self, MeshError> {
        if cells.len() != regions.len() {
            return Err(MeshError::Invalid(format!("{} cells but {} region tags", cells.len(), regions.len())));
        }
        if cells.is_empty() {
            return Err(MeshError::Invalid("mesh has no cells".into()));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !(v[0].is_finite() && v[1].is_finite()) {
                return Err(MeshError::Invalid(format!("vertex {i} has non-finite coordinates")));
            }
        }
        let mut edge_cells: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                if v >= vertices.len() {
                    return Err(MeshError::Cell {
                        cell: c,
                        message: format!("vertex index {v} out of range ({} vertices)", vertices.len()),
                    });
                }
            }
            if cell[0] == cell[1] || cell[1] == cell[2] || cell[0] == cell[2] {
                return Err(MeshError::Cell { cell: c, message: "repeated vertex".into() });
            }
            let area = signed_area(cell.map(|v| vertices[v]));
            if !(area > 0.0) {
                return Err(MeshError::Cell {
                    cell: c,
                    message: format!("not positively oriented (signed area {area:e})"),
                });
            }
            for k in 0..3 {
                let e = edge_key(cell[k], cell[(k + 1) % 3]);
                let list = edge_cells.entry(e).or_default();
                list.push(c);
                if list.len() > 2 {
                    return Err(MeshError::Cell {
                        cell: c,
                        message: format!("edge {}-{} shared by more than two cells", e.0, e.1),
                    });
                }
            }
        }

        let mut tagged: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::with_capacity(boundary.len());
        for (i, (pair, tag)) in boundary.into_iter().enumerate() {
            let err = |message: String| MeshError::Edge { edge: i, message };
            for &v in &pair {
                if v >= vertices.len() {
                    return Err(err(format!("vertex index {v} out of range")));
                }
            }
            let key = edge_key(pair[0], pair[1]);
            if tagged.insert(key, i).is_some() {
                return Err(err(format!("edge {}-{} tagged twice", key.0, key.1)));
            }
            let Some(adj) = edge_cells.get(&key) else {
                return Err(err(format!("{}-{} is not an edge of any cell", key.0, key.1)));
            };
            let third = |c: usize| {
                let cell = cells[c];
                vertices[*cell.iter().find(|&&v| v != pair[0] && v != pair[1]).unwrap()]
            };
            let (a, b) = (vertices[pair[0]], vertices[pair[1]]);
            let edge = match tag {
                BoundaryTag::Interface => {
                    let (e, f) = match adj.as_slice() {
                        &[c0, c1] => match (regions[c0], regions[c1]) {
                            (Region::Elastic, Region::Fluid) => (c0, c1),
                            (Region::Fluid, Region::Elastic) => (c1, c0),
                            (r0, r1) => {
                                return Err(err(format!(
                                    "interface edge must separate ELASTIC and FLUID cells, found {r0} and {r1}"
                                )))
                            }
                        },
                        _ => return Err(err("interface edge must be shared by two cells".into())),
                    };
                    BoundaryEdge {
                        vertices: pair,
                        tag,
                        normal: edge_normal(a, b, third(e)),
                        fluid_cell: f,
                        elastic_cell: Some(e),
                    }
                }
                BoundaryTag::Outer => match *adj.as_slice() {
                    [c] if regions[c] == Region::Fluid => BoundaryEdge {
                        vertices: pair,
                        tag,
                        normal: edge_normal(a, b, third(c)),
                        fluid_cell: c,
                        elastic_cell: None,
                    },
                    [_] => return Err(err("outer edge must belong to a FLUID cell".into())),
                    _ => return Err(err("outer edge must lie on the mesh boundary".into())),
                },
            };
            edges.push(edge);
        }

        for (key, adj) in &edge_cells {
            let untagged = !tagged.contains_key(key);
            match *adj.as_slice() {
                [_] if untagged => {
                    return Err(MeshError::Invalid(format!("boundary edge {}-{} is not tagged OUTER", key.0, key.1)))
                }
                [c0, c1] if untagged && regions[c0] != regions[c1] => {
                    return Err(MeshError::Invalid(format!(
                        "edge {}-{} between cells {c0} and {c1} changes region but is not tagged INTERFACE",
                        key.0, key.1
                    )))
                }
                _ => {}
            }
        }

        Ok(Mesh { vertices, cells, regions, boundary: edges })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn interface_edges(&self) -> impl Iterator<Item = &BoundaryEdge> {
        self.boundary.iter().filter(|e| e.tag == BoundaryTag::Interface)
    }

    pub fn outer_edges(&self) -> impl Iterator<Item = &BoundaryEdge> {
        self.boundary.iter().filter(|e| e.tag == BoundaryTag::Outer)
    }

    pub fn cell_corners(&self, c: usize) -> [[f64; 2]; 3] {
        self.cells[c].map(|v| self.vertices[v])
    }

    pub fn cell_area(&self, c: usize) -> f64 {
        signed_area(self.cell_corners(c))
    }

    pub fn region_area(&self, region: Region) -> f64 {
        (0..self.cells.len()).filter(|&c| self.regions[c] == region).map(|c| self.cell_area(c)).sum()
    }

    /// Distinct edges as sorted vertex pairs.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut set: Vec<(usize, usize)> =
            self.cells.iter().flat_map(|c| (0..3).map(move |k| edge_key(c[k], c[(k + 1) % 3]))).collect();
        set.sort_unstable();
        set.dedup();
        set.into_iter().map(|(a, b)| [a, b]).collect()
    }

    pub fn min_edge_length(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&[a, b]| {
                let (p, q) = (self.vertices[a], self.vertices[b]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&[a, b]| {
                let (p, q) = (self.vertices[a], self.vertices[b]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }

    /// Smallest interior angle over all cells, in degrees.
    pub fn min_angle_degrees(&self) -> f64 {
        let mut min = f64::INFINITY;
        for c in 0..self.cells.len() {
            let p = self.cell_corners(c);
            for k in 0..3 {
                let (o, a, b) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                let (u, v) = ([a[0] - o[0], a[1] - o[1]], [b[0] - o[0], b[1] - o[1]]);
                let cos = (u[0] * v[0] + u[1] * v[1]) / (u[0].hypot(u[1]) * v[0].hypot(v[1]));
                min = min.min(cos.clamp(-1.0, 1.0).acos().to_degrees());
            }
        }
        min
    }

    /// Marks vertices touched by at least one cell of `region`.
    pub fn vertices_in(&self, region: Region) -> Vec<bool> {
        let mut mark = vec![false; self.vertices.len()];
        for (cell, r) in self.cells.iter().zip(&self.regions) {
            if *r == region {
                for &v in cell {
                    mark[v] = true;
                }
            }
        }
        mark
    }

    pub fn vertices_on(&self, tag: BoundaryTag) -> Vec<bool> {
        let mut mark = vec![false; self.vertices.len()];
        for e in self.boundary.iter().filter(|e| e.tag == tag) {
            mark[e.vertices[0]] = true;
            mark[e.vertices[1]] = true;
        }
        mark
    }

    /// Cell containing `x` and the barycentric coordinates of `x` in it.
    /// Points on shared edges resolve to the lowest-numbered cell.
    pub fn locate(&self, x: [f64; 2]) -> Option<(usize, [f64; 3])> {
        let tol = -1e-12;
        (0..self.cells.len()).find_map(|c| {
            let l = barycentric(self.cell_corners(c), x);
            (l.iter().all(|&li| li >= tol)).then_some((c, l))
        })
    }
}

pub fn barycentric(p: [[f64; 2]; 3], x: [f64; 2]) -> [f64; 3] {
    let area = signed_area(p);
    let l1 = signed_area([p[0], x, p[2]]) / area;
    let l2 = signed_area([p[0], p[1], x]) / area;
    [1.0 - l1 - l2, l1, l2]
}

#[cfg(test)]
mod tests {
    use super::*;

    // Unit square split into an elastic lower triangle and a fluid upper one.
    fn square() -> (Vec<[f64; 2]>, Vec<[usize; 3]>) {
        (vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], vec![[0, 1, 2], [0, 2, 3]])
    }

    #[test]
    fn untagged_boundary_edge_is_rejected() {
        let (v, c) = square();
        let mesh = Mesh::new(
            v,
            c,
            vec![Region::Elastic, Region::Fluid],
            vec![([0, 2], BoundaryTag::Interface), ([2, 3], BoundaryTag::Outer), ([3, 0], BoundaryTag::Outer)],
        );
        // The lower triangle has boundary edges that are not tagged OUTER.
        assert!(matches!(mesh, Err(MeshError::Invalid(_))));
    }

    #[test]
    fn rejects_interface_between_fluid_cells() {
        let (v, c) = square();
        let err = Mesh::new(
            v,
            c,
            vec![Region::Fluid, Region::Fluid],
            vec![
                ([0, 2], BoundaryTag::Interface),
                ([0, 1], BoundaryTag::Outer),
                ([1, 2], BoundaryTag::Outer),
                ([2, 3], BoundaryTag::Outer),
                ([3, 0], BoundaryTag::Outer),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, MeshError::Edge { edge: 0, .. }), "{err}");
    }

    #[test]
    fn rejects_negative_orientation_and_bad_indices() {
        let (v, _) = square();
        let err = Mesh::new(v.clone(), vec![[0, 2, 1]], vec![Region::Fluid], vec![]).unwrap_err();
        assert!(matches!(err, MeshError::Cell { cell: 0, .. }));
        let err = Mesh::new(v, vec![[0, 1, 7]], vec![Region::Fluid], vec![]).unwrap_err();
        assert_eq!(err, MeshError::Cell { cell: 0, message: "vertex index 7 out of range (4 vertices)".into() });
    }

    #[test]
    fn all_fluid_square_with_outer_normals() {
        let (v, c) = square();
        let mesh = Mesh::new(
            v,
            c,
            vec![Region::Fluid, Region::Fluid],
            vec![
                ([0, 1], BoundaryTag::Outer),
                ([1, 2], BoundaryTag::Outer),
                ([2, 3], BoundaryTag::Outer),
                ([3, 0], BoundaryTag::Outer),
            ],
        )
        .unwrap();
        let normals: Vec<[f64; 2]> = mesh.boundary_edges().iter().map(|e| e.normal).collect();
        assert_eq!(normals, vec![[0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]);
        assert_eq!(mesh.edges().len(), 5);
        assert!((mesh.min_angle_degrees() - 45.0).abs() < 1e-12);
        let (c, l) = mesh.locate([0.75, 0.25]).unwrap();
        assert_eq!(c, 0);
        assert!((l[0] - 0.25).abs() < 1e-15 && (l[1] - 0.5).abs() < 1e-15);
        assert!(mesh.locate([2.0, 0.0]).is_none());
    }
}
