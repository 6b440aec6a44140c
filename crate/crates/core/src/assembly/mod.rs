//! P1 finite element assembly of the coupled solid/fluid system
//!
//! ```text
//! A U'' + B U = F(t)
//! A = | ρ₁ρ₂ M_u    0  |      B = | ρ₁ K_u   E  |
//!     |   L      M_β |          |   0    K_M |
//! ```
//!
//! Unknowns are ordered elastic first (two components per solid vertex,
//! interleaved), then pressure at every fluid vertex not on the outer
//! circle. Outer-circle pressures are prescribed data and never unknowns.

mod elements;

use crate::error::{Error, Result};
use crate::mesh::{BoundaryTag, Mesh, Region};
use crate::quadrature::TriangleRule;
use crate::radial_map::RadialMap;
use crate::scalar::Mat;
use crate::sparse::{CsrMatrix, TripletBuilder};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    c: f64,
    rho_fluid: f64,
    rho_solid: f64,
    mu: f64,
    lambda: f64,
}

impl MaterialParams {
    /// Sound speed, fluid density, solid density and the two Lamé
    /// parameters. Requires positive `c`, densities and `mu`, and
    /// `lambda + mu > 0`.
    pub fn new(c: f64, rho_fluid: f64, rho_solid: f64, mu: f64, lambda: f64) -> Result<Self> {
        let positive = [("c", c), ("rho1", rho_fluid), ("rho2", rho_solid), ("mu", mu)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(lambda + mu > 0.0 && lambda.is_finite()) {
            return Err(Error::Config(format!("lambda + mu must be positive, got {}", lambda + mu)));
        }
        Ok(MaterialParams { c, rho_fluid, rho_solid, mu, lambda })
    }

    pub fn sound_speed(&self) -> f64 {
        self.c
    }

    pub fn fluid_density(&self) -> f64 {
        self.rho_fluid
    }

    pub fn solid_density(&self) -> f64 {
        self.rho_solid
    }

    pub fn shear_modulus(&self) -> f64 {
        self.mu
    }

    pub fn lame_lambda(&self) -> f64 {
        self.lambda
    }
}

/// Numbering of unknowns. Fluid vertices are numbered interior first, then
/// outer-circle vertices, so the first [`DofMap::acoustic_count`] fluid
/// nodes are unknowns.
#[derive(Debug, Clone)]
pub struct DofMap {
    elastic_of_vertex: Vec<Option<usize>>,
    fluid_of_vertex: Vec<Option<usize>>,
    elastic_nodes: Vec<usize>,
    fluid_nodes: Vec<usize>,
    acoustic_count: usize,
}

impl DofMap {
    pub fn new(mesh: &Mesh) -> Self {
        let elastic = mesh.vertices_in(Region::Elastic);
        let fluid = mesh.vertices_in(Region::Fluid);
        let outer = mesh.vertices_on(BoundaryTag::Outer);
        let n = mesh.vertices().len();
        let elastic_nodes: Vec<usize> = (0..n).filter(|&v| elastic[v]).collect();
        let mut fluid_nodes: Vec<usize> = (0..n).filter(|&v| fluid[v] && !outer[v]).collect();
        let acoustic_count = fluid_nodes.len();
        fluid_nodes.extend((0..n).filter(|&v| fluid[v] && outer[v]));
        let mut elastic_of_vertex = vec![None; n];
        for (i, &v) in elastic_nodes.iter().enumerate() {
            elastic_of_vertex[v] = Some(i);
        }
        let mut fluid_of_vertex = vec![None; n];
        for (i, &v) in fluid_nodes.iter().enumerate() {
            fluid_of_vertex[v] = Some(i);
        }
        DofMap { elastic_of_vertex, fluid_of_vertex, elastic_nodes, fluid_nodes, acoustic_count }
    }

    /// Number of elastic unknowns (two per solid vertex).
    pub fn elastic_count(&self) -> usize {
        2 * self.elastic_nodes.len()
    }

    pub fn acoustic_count(&self) -> usize {
        self.acoustic_count
    }

    /// Number of prescribed pressures on the outer circle.
    pub fn boundary_count(&self) -> usize {
        self.fluid_nodes.len() - self.acoustic_count
    }

    pub fn fluid_count(&self) -> usize {
        self.fluid_nodes.len()
    }

    pub fn len(&self) -> usize {
        self.elastic_count() + self.acoustic_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elastic_nodes(&self) -> &[usize] {
        &self.elastic_nodes
    }

    /// Fluid vertices, interior unknowns first.
    pub fn fluid_nodes(&self) -> &[usize] {
        &self.fluid_nodes
    }

    pub fn boundary_nodes(&self) -> &[usize] {
        &self.fluid_nodes[self.acoustic_count..]
    }

    /// Position of `vertex` among the fluid nodes.
    pub fn fluid_index(&self, vertex: usize) -> Option<usize> {
        self.fluid_of_vertex[vertex]
    }

    pub fn elastic_index(&self, vertex: usize) -> Option<usize> {
        self.elastic_of_vertex[vertex]
    }

    /// Global unknown index of displacement component `comp` at `vertex`.
    pub fn elastic_dof(&self, vertex: usize, comp: usize) -> Option<usize> {
        self.elastic_of_vertex[vertex].map(|e| 2 * e + comp)
    }

    /// Global unknown index of the pressure at `vertex`, if it is unknown.
    pub fn acoustic_dof(&self, vertex: usize) -> Option<usize> {
        self.fluid_of_vertex[vertex].filter(|&i| i < self.acoustic_count).map(|i| self.elastic_count() + i)
    }

    pub fn elastic_range(&self) -> std::ops::Range<usize> {
        0..self.elastic_count()
    }

    pub fn acoustic_range(&self) -> std::ops::Range<usize> {
        self.elastic_count()..self.len()
    }

    /// Pressure at every fluid node: unknowns from `u`, then `boundary`.
    pub fn fluid_values(&self, u: &[f64], boundary: &[f64]) -> Vec<f64> {
        let mut out = u[self.acoustic_range()].to_vec();
        out.extend_from_slice(boundary);
        out
    }
}

fn quadrature_coefficients(
    mesh: &Mesh,
    map: &RadialMap<f64>,
    cell: usize,
    rule: &TriangleRule<f64>,
) -> Result<(Vec<f64>, Vec<Mat<f64, 2>>)> {
    let corners = mesh.cell_corners(cell);
    let mut beta = Vec::with_capacity(rule.len());
    let mut m = Vec::with_capacity(rule.len());
    for x in rule.map_points(&corners) {
        let coeff = map.coefficients_at_2d(x).map_err(|e| {
            Error::Assembly(format!("cell {cell}: quadrature point {x:?} outside the map's domain ({e})"))
        })?;
        beta.push(coeff.beta);
        m.push(coeff.m);
    }
    Ok((beta, m))
}

fn fluid_cells(mesh: &Mesh) -> impl Iterator<Item = usize> + '_ {
    (0..mesh.cells().len()).filter(|&c| mesh.regions()[c] == Region::Fluid)
}

fn scatter_fluid(b: &mut TripletBuilder, dofs: &DofMap, cell: &[usize; 3], local: &[[f64; 3]; 3]) {
    let idx = cell.map(|v| dofs.fluid_index(v).expect("fluid cell vertex is a fluid node"));
    for i in 0..3 {
        for j in 0..3 {
            b.add(idx[i], idx[j], local[i][j]);
        }
    }
}

/// `∫ (β/c²) φ_j φ_k` over the fluid, indexed by fluid node.
pub fn assemble_acoustic_mass(
    mesh: &Mesh,
    dofs: &DofMap,
    map: &RadialMap<f64>,
    params: &MaterialParams,
) -> Result<CsrMatrix> {
    let rule = TriangleRule::degree5();
    let c2 = params.c * params.c;
    let mut b = TripletBuilder::new(dofs.fluid_count(), dofs.fluid_count());
    for cell in fluid_cells(mesh) {
        let (beta, _) = quadrature_coefficients(mesh, map, cell, &rule)?;
        let w: Vec<f64> = beta.iter().map(|x| x / c2).collect();
        let local = elements::weighted_mass(mesh.cell_area(cell), &rule, &w);
        scatter_fluid(&mut b, dofs, &mesh.cells()[cell], &local);
    }
    Ok(b.build())
}

/// `∫ (M ∇φ_j)·∇φ_k` over the fluid, indexed by fluid node.
pub fn assemble_a0(mesh: &Mesh, dofs: &DofMap, map: &RadialMap<f64>) -> Result<CsrMatrix> {
    let rule = TriangleRule::degree5();
    let mut b = TripletBuilder::new(dofs.fluid_count(), dofs.fluid_count());
    for cell in fluid_cells(mesh) {
        let (_, m) = quadrature_coefficients(mesh, map, cell, &rule)?;
        let (area, g) = elements::p1_gradients(&mesh.cell_corners(cell));
        let local = elements::weighted_stiffness(area, &g, &rule, &m);
        scatter_fluid(&mut b, dofs, &mesh.cells()[cell], &local);
    }
    Ok(b.build())
}

/// Unweighted fluid mass and Laplacian `(∫ φ_j φ_k, ∫ ∇φ_j·∇φ_k)`, used for
/// field norms.
pub fn assemble_fluid_norms(mesh: &Mesh, dofs: &DofMap) -> (CsrMatrix, CsrMatrix) {
    let n = dofs.fluid_count();
    let (mut mb, mut kb) = (TripletBuilder::new(n, n), TripletBuilder::new(n, n));
    for cell in fluid_cells(mesh) {
        let (area, g) = elements::p1_gradients(&mesh.cell_corners(cell));
        scatter_fluid(&mut mb, dofs, &mesh.cells()[cell], &elements::mass(area));
        scatter_fluid(&mut kb, dofs, &mesh.cells()[cell], &elements::stiffness(area, &g));
    }
    (mb.build(), kb.build())
}

/// Unscaled elastic forms over the solid: `∫ W_j·W_k`, `∫ ∇W_j : ∇W_k`
/// and `∫ (∇·W_j)(∇·W_k)`.
#[derive(Debug, Clone)]
pub struct ElasticForms {
    pub mass: CsrMatrix,
    pub gradient: CsrMatrix,
    pub divergence: CsrMatrix,
}

pub fn assemble_elastic_forms(mesh: &Mesh, dofs: &DofMap) -> ElasticForms {
    let n = dofs.elastic_count();
    let mut mb = TripletBuilder::new(n, n);
    let mut gb = TripletBuilder::new(n, n);
    let mut db = TripletBuilder::new(n, n);
    for (cell, _) in mesh.cells().iter().zip(mesh.regions()).filter(|(_, r)| **r == Region::Elastic) {
        let corners = cell.map(|v| mesh.vertices()[v]);
        let (area, g) = elements::p1_gradients(&corners);
        let (m, k, d) = (elements::mass(area), elements::stiffness(area, &g), elements::divergence_pairing(area, &g));
        let e = cell.map(|v| dofs.elastic_index(v).expect("solid cell vertex is an elastic node"));
        for i in 0..3 {
            for j in 0..3 {
                for c in 0..2 {
                    mb.add(2 * e[i] + c, 2 * e[j] + c, m[i][j]);
                    gb.add(2 * e[i] + c, 2 * e[j] + c, k[i][j]);
                    for dd in 0..2 {
                        db.add(2 * e[i] + c, 2 * e[j] + dd, d[i][j][c][dd]);
                    }
                }
            }
        }
    }
    ElasticForms { mass: mb.build(), gradient: gb.build(), divergence: db.build() }
}

/// Scaled elastic blocks `(ρ₁ρ₂ ∫ W_j·W_k, ρ₁[μ ∫ ∇W_j:∇W_k + (λ+μ) ∫ ∇·W_j ∇·W_k])`.
pub fn assemble_elastic(mesh: &Mesh, dofs: &DofMap, params: &MaterialParams) -> (CsrMatrix, CsrMatrix) {
    let forms = assemble_elastic_forms(mesh, dofs);
    elastic_blocks(&forms, params)
}

fn elastic_blocks(forms: &ElasticForms, p: &MaterialParams) -> (CsrMatrix, CsrMatrix) {
    let mass = forms.mass.scaled(p.rho_fluid * p.rho_solid);
    let stiff = CsrMatrix::linear_combination(
        p.rho_fluid * p.mu,
        &forms.gradient,
        p.rho_fluid * (p.lambda + p.mu),
        &forms.divergence,
    );
    (mass, stiff)
}

/// Interface coupling `(E, L)` with `E[(j,c), k] = ρ₁ ∫ φ_k n_c φ_j ds`
/// (elastic rows, acoustic columns) and `L = -Eᵀ`.
pub fn assemble_interface(mesh: &Mesh, dofs: &DofMap, params: &MaterialParams) -> Result<(CsrMatrix, CsrMatrix)> {
    let mut b = TripletBuilder::new(dofs.elastic_count(), dofs.acoustic_count());
    for (i, edge) in mesh.boundary_edges().iter().enumerate() {
        if edge.tag != BoundaryTag::Interface {
            continue;
        }
        let n = edge.normal;
        let len = n[0].hypot(n[1]);
        if !len.is_finite() || (len - 1.0).abs() > 1e-12 {
            return Err(Error::Assembly(format!("interface edge {i} has no unit normal ({n:?})")));
        }
        let local = elements::edge_mass(edge.length(mesh));
        for (a, &va) in edge.vertices.iter().enumerate() {
            for (k, &vk) in edge.vertices.iter().enumerate() {
                let col = dofs
                    .fluid_index(vk)
                    .filter(|&f| f < dofs.acoustic_count())
                    .ok_or_else(|| Error::Assembly(format!("interface vertex {vk} carries no pressure unknown")))?;
                let e = dofs
                    .elastic_index(va)
                    .ok_or_else(|| Error::Assembly(format!("interface vertex {va} has no elastic unknowns")))?;
                for c in 0..2 {
                    b.add(2 * e + c, col, params.rho_fluid * n[c] * local[a][k]);
                }
            }
        }
    }
    let e = b.build();
    let l = e.transpose().scaled(-1.0);
    Ok((e, l))
}

/// `∫ f(x, t) φ_k` over the fluid for every pressure unknown, zero in the
/// elastic block.
pub fn assemble_load(mesh: &Mesh, dofs: &DofMap, f: impl Fn([f64; 2], f64) -> f64, t: f64) -> Vec<f64> {
    let mut out = vec![0.0; dofs.len()];
    add_load(mesh, dofs, &f, t, 1.0, &mut out);
    out
}

pub(crate) fn add_load(
    mesh: &Mesh,
    dofs: &DofMap,
    f: &dyn Fn([f64; 2], f64) -> f64,
    t: f64,
    scale: f64,
    out: &mut [f64],
) {
    let rule = TriangleRule::<f64>::degree5();
    for cell in fluid_cells(mesh) {
        let corners = mesh.cell_corners(cell);
        let area = mesh.cell_area(cell);
        let mut local = [0.0; 3];
        for ((x, l), w) in rule.map_points(&corners).zip(&rule.points).zip(&rule.weights) {
            let fx = f(x, t);
            for i in 0..3 {
                local[i] += area * w * fx * l[i];
            }
        }
        for (i, &v) in mesh.cells()[cell].iter().enumerate() {
            if let Some(d) = dofs.acoustic_dof(v) {
                out[d] += scale * local[i];
            }
        }
    }
}

/// The assembled coupled system together with the separate blocks needed
/// by energies, norms and boundary data.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub dofs: DofMap,
    pub params: MaterialParams,
    /// Mass-side operator `A`.
    pub a: CsrMatrix,
    /// Stiffness-side operator `B`.
    pub b: CsrMatrix,
    /// `β/c²`-weighted mass over all fluid nodes.
    pub acoustic_mass: CsrMatrix,
    /// `M`-weighted stiffness over all fluid nodes.
    pub acoustic_stiffness: CsrMatrix,
    pub elastic: ElasticForms,
    /// Interface block `E` (elastic rows, acoustic columns).
    pub interface: CsrMatrix,
    pub pressure_mass: CsrMatrix,
    pub pressure_laplace: CsrMatrix,
}

impl AssembledSystem {
    pub fn new(mesh: &Mesh, map: &RadialMap<f64>, params: MaterialParams) -> Result<Self> {
        let dofs = DofMap::new(mesh);
        if dofs.acoustic_count() == 0 {
            return Err(Error::Assembly("mesh has no interior fluid vertices".into()));
        }
        let acoustic_mass = assemble_acoustic_mass(mesh, &dofs, map, &params)?;
        let acoustic_stiffness = assemble_a0(mesh, &dofs, map)?;
        let elastic = assemble_elastic_forms(mesh, &dofs);
        let (u_mass, u_stiff) = elastic_blocks(&elastic, &params);
        let (e, l) = assemble_interface(mesh, &dofs, &params)?;
        let (pressure_mass, pressure_laplace) = assemble_fluid_norms(mesh, &dofs);

        let (ne, na, n) = (dofs.elastic_count(), dofs.acoustic_count(), dofs.len());
        let mut ab = TripletBuilder::new(n, n);
        ab.add_block(0, 0, &u_mass);
        ab.add_block(ne, 0, &l);
        ab.add_block(ne, ne, &acoustic_mass.block(0..na, 0..na));
        let mut bb = TripletBuilder::new(n, n);
        bb.add_block(0, 0, &u_stiff);
        bb.add_block(0, ne, &e);
        bb.add_block(ne, ne, &acoustic_stiffness.block(0..na, 0..na));

        Ok(AssembledSystem {
            dofs,
            params,
            a: ab.build(),
            b: bb.build(),
            acoustic_mass,
            acoustic_stiffness,
            elastic,
            interface: e,
            pressure_mass,
            pressure_laplace,
        })
    }

    /// The `L` block of `A` (acoustic rows, elastic columns).
    pub fn interface_transfer(&self) -> CsrMatrix {
        self.a.block(self.dofs.acoustic_range(), self.dofs.elastic_range())
    }

    /// Coupling of pressure unknowns to prescribed outer-circle values:
    /// `(mass, stiffness)` with acoustic rows and boundary columns.
    pub fn boundary_coupling(&self) -> (CsrMatrix, CsrMatrix) {
        let (na, nf) = (self.dofs.acoustic_count(), self.dofs.fluid_count());
        (self.acoustic_mass.block(0..na, na..nf), self.acoustic_stiffness.block(0..na, na..nf))
    }

    /// Coordinate text dumps of `A` and `B` for external inspection.
    pub fn dump(&self) -> (String, String) {
        (self.a.to_coordinate_text(), self.b.to_coordinate_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_disk_annulus;

    fn setup() -> (Mesh, RadialMap<f64>, MaterialParams) {
        let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 6, 24).unwrap();
        (mesh, RadialMap::new(1.0, 2.0, 6.0).unwrap(), MaterialParams::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap())
    }

    #[test]
    fn material_validation() {
        assert!(MaterialParams::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(MaterialParams::new(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(MaterialParams::new(1.0, 1.0, 1.0, 1.0, -1.0).is_err());
        assert!(MaterialParams::new(1.0, 1.0, 1.0, 1.0, -0.5).is_ok());
    }

    #[test]
    fn dof_layout() {
        let (mesh, map, params) = setup();
        let sys = AssembledSystem::new(&mesh, &map, params).unwrap();
        let d = &sys.dofs;
        assert_eq!(d.boundary_count(), 24);
        assert_eq!(d.len(), sys.a.nrows());
        let iface = mesh.interface_edges().next().unwrap().vertices[0];
        assert!(d.elastic_dof(iface, 1).unwrap() < d.elastic_count());
        assert!(d.acoustic_dof(iface).unwrap() >= d.elastic_count());
        let outer = mesh.outer_edges().next().unwrap().vertices[0];
        assert_eq!(d.acoustic_dof(outer), None);
        assert!(d.fluid_index(outer).unwrap() >= d.acoustic_count());
    }

    #[test]
    fn coupling_blocks_are_antisymmetric_pair() {
        let (mesh, map, params) = setup();
        let sys = AssembledSystem::new(&mesh, &map, params).unwrap();
        let l = sys.interface_transfer();
        let sum = CsrMatrix::linear_combination(1.0, &l, 1.0, &sys.interface.transpose());
        assert!(sum.iter().all(|(_, _, v)| v.abs() <= 1e-12));
        let (_, bnd) = sys.boundary_coupling();
        assert!(bnd.nnz() > 0);
    }

    #[test]
    fn outside_map_domain_is_an_assembly_error() {
        let (mesh, _, params) = setup();
        let small = RadialMap::new(0.6, 1.5, 3.0).unwrap();
        assert!(matches!(AssembledSystem::new(&mesh, &small, params), Err(Error::Assembly(_))));
    }

    #[test]
    fn hat_function_source_gives_mass_column() {
        let (mesh, _, _) = setup();
        let dofs = DofMap::new(&mesh);
        let (mass, _) = assemble_fluid_norms(&mesh, &dofs);
        let k0 = dofs.fluid_nodes()[5];
        // The hat function of vertex k0, evaluated through its barycentric form.
        let hat = |x: [f64; 2], _t: f64| -> f64 {
            mesh.cells()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.contains(&k0))
                .map(|(ci, c)| {
                    let l = crate::mesh::barycentric(mesh.cell_corners(ci), x);
                    let pos = c.iter().position(|&v| v == k0).unwrap();
                    if l.iter().all(|&li| li >= -1e-12) {
                        l[pos]
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max)
        };
        let load = assemble_load(&mesh, &dofs, hat, 0.0);
        for f in 0..dofs.acoustic_count() {
            let got = load[dofs.elastic_count() + f];
            assert!((got - mass.get(f, 5)).abs() < 1e-14, "{f}: {got} vs {}", mass.get(f, 5));
        }
    }
}
