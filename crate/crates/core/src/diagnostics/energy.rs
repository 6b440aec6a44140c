use std::fmt::Write as _;

use crate::assembly::AssembledSystem;
use crate::error::Result;
use crate::simulation::Simulation;
use crate::timestepper::{Observer, StateVector};

/// Quadratic energies of a state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Energy {
    /// `‖(√β/c) ∂_t p‖² + ‖M^{1/2} ∇p‖²`
    pub acoustic: f64,
    /// `ρ₁ρ₂‖∂_t² u‖² + ρ₁(λ+μ)‖∇·∂_t u‖² + ρ₁μ‖∇∂_t u‖²`, the energy of the
    /// time-differentiated elastic equation. This is the form whose interface
    /// terms cancel against the acoustic ones.
    pub elastic: f64,
    /// `ρ₁ρ₂‖∂_t u‖² + ρ₁(λ+μ)‖∇·u‖² + ρ₁μ‖∇u‖²`
    pub elastic_first_order: f64,
    /// `acoustic + elastic`
    pub total: f64,
}

fn split<'a>(sys: &AssembledSystem, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
    x.split_at(sys.dofs.elastic_count())
}

pub fn compute_energy(sys: &AssembledSystem, state: &StateVector) -> Energy {
    let na = sys.dofs.acoustic_count();
    let (u, p) = split(sys, &state.u);
    let (ut, pt) = split(sys, &state.v);
    let (utt, _) = split(sys, &state.w);
    let m = sys.acoustic_mass.block(0..na, 0..na);
    let k = sys.acoustic_stiffness.block(0..na, 0..na);
    let acoustic = m.quadratic(pt) + k.quadratic(p);
    let pr = &sys.params;
    let (r1, r2) = (pr.fluid_density(), pr.solid_density());
    let (mu, lm) = (pr.shear_modulus(), pr.lame_lambda() + pr.shear_modulus());
    let el = &sys.elastic;
    let elastic =
        r1 * r2 * el.mass.quadratic(utt) + r1 * lm * el.divergence.quadratic(ut) + r1 * mu * el.gradient.quadratic(ut);
    let elastic_first_order =
        r1 * r2 * el.mass.quadratic(ut) + r1 * lm * el.divergence.quadratic(u) + r1 * mu * el.gradient.quadratic(u);
    Energy { acoustic, elastic, elastic_first_order, total: acoustic + elastic }
}

/// L² norms of `p`, `∇p` over the fluid and of `∂_t u`, `∇·u`, `∇u` over
/// the solid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldNorms {
    pub p: f64,
    pub grad_p: f64,
    pub u_t: f64,
    pub div_u: f64,
    pub grad_u: f64,
}

impl FieldNorms {
    pub fn as_array(&self) -> [f64; 5] {
        [self.p, self.grad_p, self.u_t, self.div_u, self.grad_u]
    }
}

/// `boundary` holds the prescribed outer-circle pressures at `state.t`.
pub fn field_norms(sys: &AssembledSystem, state: &StateVector, boundary: &[f64]) -> FieldNorms {
    let p = sys.dofs.fluid_values(&state.u, boundary);
    let (u, _) = split(sys, &state.u);
    let (ut, _) = split(sys, &state.v);
    let el = &sys.elastic;
    let sq = |x: f64| x.max(0.0).sqrt();
    FieldNorms {
        p: sq(sys.pressure_mass.quadratic(&p)),
        grad_p: sq(sys.pressure_laplace.quadratic(&p)),
        u_t: sq(el.mass.quadratic(ut)),
        div_u: sq(el.divergence.quadratic(u)),
        grad_u: sq(el.gradient.quadratic(u)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub t: f64,
    pub energy: Energy,
    pub norms: FieldNorms,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyTrace {
    pub samples: Vec<EnergySample>,
}

impl EnergyTrace {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn totals(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.energy.total).collect()
    }

    pub fn last(&self) -> Option<&EnergySample> {
        self.samples.last()
    }

    /// CSV with header `t,E1,E2,E,norm_p,norm_gradp,norm_ut,norm_divu,norm_gradu`
    /// and 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,E1,E2,E,norm_p,norm_gradp,norm_ut,norm_divu,norm_gradu\n");
        for s in &self.samples {
            let e = &s.energy;
            let _ = write!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", s.t, e.acoustic, e.elastic, e.total);
            for v in s.norms.as_array() {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Observer filling an [`EnergyTrace`].
pub struct EnergyRecorder<'a> {
    sim: &'a Simulation,
    stride: usize,
    pub trace: EnergyTrace,
}

impl<'a> EnergyRecorder<'a> {
    pub fn new(sim: &'a Simulation, stride: usize) -> Self {
        EnergyRecorder { sim, stride: stride.max(1), trace: EnergyTrace::default() }
    }
}

impl Observer for EnergyRecorder<'_> {
    fn stride(&self) -> usize {
        self.stride
    }

    fn observe(&mut self, _step: usize, state: &StateVector) -> Result<()> {
        let sys = self.sim.system();
        self.trace.samples.push(EnergySample {
            t: state.t,
            energy: compute_energy(sys, state),
            norms: field_norms(sys, state, &self.sim.boundary_values(state.t)),
        });
        Ok(())
    }
}
