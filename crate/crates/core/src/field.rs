//! Nodal pressure fields on the fluid: interpolation, point probes and L²
//! norms.

use std::fmt::Write as _;

use crate::assembly::DofMap;
use crate::error::{Error, Result};
use crate::mesh::{Mesh, Region};
use crate::quadrature::TriangleRule;

/// Interpolant of `f` at every fluid node, in [`DofMap::fluid_nodes`] order.
pub fn interpolate_fluid(mesh: &Mesh, dofs: &DofMap, f: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
    dofs.fluid_nodes().iter().map(|&v| f(mesh.vertices()[v])).collect()
}

/// Linear interpolation of a fluid nodal field at a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointProbe {
    pub position: [f64; 2],
    pub cell: usize,
    nodes: [usize; 3],
    weights: [f64; 3],
}

impl PointProbe {
    /// Fails with a configuration error unless `x` lies in a fluid cell.
    pub fn new(mesh: &Mesh, dofs: &DofMap, x: [f64; 2]) -> Result<Self> {
        let candidates = (0..mesh.cells().len()).filter(|&c| mesh.regions()[c] == Region::Fluid);
        for c in candidates {
            let l = crate::mesh::barycentric(mesh.cell_corners(c), x);
            if l.iter().all(|&li| li >= -1e-12) {
                let nodes = mesh.cells()[c].map(|v| dofs.fluid_index(v).expect("fluid vertex"));
                return Ok(PointProbe { position: x, cell: c, nodes, weights: l });
            }
        }
        Err(Error::Config(format!("probe at {x:?} is not inside the fluid region of the mesh")))
    }

    pub fn eval(&self, fluid_values: &[f64]) -> f64 {
        (0..3).map(|k| self.weights[k] * fluid_values[self.nodes[k]]).sum()
    }
}

/// `‖p_h - exact‖` over the fluid with the degree-5 rule.
pub fn fluid_l2_error(mesh: &Mesh, dofs: &DofMap, fluid_values: &[f64], exact: impl Fn([f64; 2]) -> f64) -> f64 {
    let rule = TriangleRule::<f64>::degree5();
    let mut sum = 0.0;
    for c in (0..mesh.cells().len()).filter(|&c| mesh.regions()[c] == Region::Fluid) {
        let corners = mesh.cell_corners(c);
        let area = mesh.cell_area(c);
        let nodal = mesh.cells()[c].map(|v| fluid_values[dofs.fluid_index(v).unwrap()]);
        for ((x, l), w) in rule.map_points(&corners).zip(&rule.points).zip(&rule.weights) {
            let ph = l[0] * nodal[0] + l[1] * nodal[1] + l[2] * nodal[2];
            sum += area * w * (ph - exact(x)).powi(2);
        }
    }
    sum.sqrt()
}

/// `‖f‖` over one region of the mesh with the degree-5 rule.
pub fn region_l2_norm(mesh: &Mesh, region: Region, f: impl Fn([f64; 2]) -> f64) -> f64 {
    let rule = TriangleRule::<f64>::degree5();
    let mut sum = 0.0;
    for c in (0..mesh.cells().len()).filter(|&c| mesh.regions()[c] == region) {
        let area = mesh.cell_area(c);
        for (x, w) in rule.map_points(&mesh.cell_corners(c)).zip(&rule.weights) {
            sum += area * w * f(x).powi(2);
        }
    }
    sum.sqrt()
}

/// Time series recorded at a set of probe points.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbeSeries {
    pub positions: Vec<[f64; 2]>,
    pub times: Vec<f64>,
    /// `values[k][i]` is probe `k` at `times[i]`.
    pub values: Vec<Vec<f64>>,
}

impl ProbeSeries {
    pub fn new(positions: Vec<[f64; 2]>) -> Self {
        let values = vec![Vec::new(); positions.len()];
        ProbeSeries { positions, times: Vec::new(), values }
    }

    pub fn push(&mut self, t: f64, sample: &[f64]) {
        self.times.push(t);
        for (series, v) in self.values.iter_mut().zip(sample) {
            series.push(*v);
        }
    }

    /// Largest magnitude over all probes and times.
    pub fn peak(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `t,probe_0,probe_1,...` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for k in 0..self.positions.len() {
            let _ = write!(out, ",probe_{k}");
        }
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            let _ = write!(out, "{t:.16e}");
            for series in &self.values {
                let _ = write!(out, ",{:.16e}", series[i]);
            }
            out.push('\n');
        }
        out
    }
}

/// `sqrt(∫ s(t)² dt)` by the trapezoid rule.
pub fn time_l2_norm(times: &[f64], values: &[f64]) -> f64 {
    trapezoid(times, &values.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt()
}

pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1])).sum()
}
