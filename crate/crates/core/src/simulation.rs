//! A scenario bound to a mesh and a map: initial data, time-dependent
//! forcing and prescribed boundary values for the time stepper.

use crate::assembly::{add_load, AssembledSystem, DofMap, MaterialParams};
use crate::error::{Error, Result};
use crate::field::{interpolate_fluid, PointProbe, ProbeSeries};
use crate::mesh::Mesh;
use crate::quadrature::gauss_legendre_on;
use crate::radial_map::RadialMap;
use crate::scenario::{Formulation, IncidentWave, RawData, Scenario};
use crate::sparse::CsrMatrix;
use crate::timestepper::{Load, Newmark, Observer, StateVector, TimeGrid};

const EDGE_POINTS: usize = 4;

#[derive(Debug, Clone)]
struct InterfacePoint {
    x: [f64; 2],
    weight: f64,
    normal: [f64; 2],
    phi: [f64; 2],
    acoustic: [usize; 2],
    elastic: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct Simulation {
    mesh: Mesh,
    map: RadialMap<f64>,
    system: AssembledSystem,
    scenario: Scenario,
    interface_points: Vec<InterfacePoint>,
    /// Physical positions of the outer-circle nodes.
    boundary_points: Vec<[f64; 2]>,
    boundary_mass: CsrMatrix,
    boundary_stiffness: CsrMatrix,
}

impl Simulation {
    pub fn new(mesh: Mesh, map: RadialMap<f64>, params: MaterialParams, scenario: Scenario) -> Result<Self> {
        let system = AssembledSystem::new(&mesh, &map, params)?;
        let dofs = &system.dofs;
        let mut interface_points = Vec::new();
        for edge in mesh.interface_edges() {
            let [p, q] = edge.vertices.map(|v| mesh.vertices()[v]);
            let len = edge.length(&mesh);
            let acoustic =
                edge.vertices.map(|v| dofs.acoustic_dof(v).expect("interface vertex has a pressure unknown"));
            let elastic = edge.vertices.map(|v| dofs.elastic_index(v).expect("interface vertex has elastic unknowns"));
            for (s, w) in gauss_legendre_on(EDGE_POINTS, 0.0, 1.0) {
                interface_points.push(InterfacePoint {
                    x: [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])],
                    weight: w * len,
                    normal: edge.normal,
                    phi: [1.0 - s, s],
                    acoustic,
                    elastic,
                });
            }
        }
        let boundary_points = dofs
            .boundary_nodes()
            .iter()
            .map(|&v| map.map_point(mesh.vertices()[v]))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Config(format!("outer circle lies outside the map's domain: {e}")))?;
        let (boundary_mass, boundary_stiffness) = system.boundary_coupling();
        let sim = Simulation {
            mesh,
            map,
            system,
            scenario,
            interface_points,
            boundary_points,
            boundary_mass,
            boundary_stiffness,
        };
        sim.check_quiescent()?;
        Ok(sim)
    }

    fn check_quiescent(&self) -> Result<()> {
        let Scenario::Incident { wave, formulation } = &self.scenario else {
            return Ok(());
        };
        let (points, what): (Vec<[f64; 2]>, _) = match formulation {
            Formulation::ScatteredField => (self.interface_points.iter().map(|p| p.x).collect(), "the inclusion"),
            Formulation::TotalField => (self.boundary_points.clone(), "the truncation circle"),
        };
        if let Some(x) = points.iter().find(|x| wave.front_time(**x) < 0.0) {
            return Err(Error::Config(format!(
                "incident pulse already overlaps {what} at t = 0 (point {x:?}); increase the pulse delay"
            )));
        }
        Ok(())
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn map(&self) -> &RadialMap<f64> {
        &self.map
    }

    pub fn system(&self) -> &AssembledSystem {
        &self.system
    }

    pub fn dofs(&self) -> &DofMap {
        &self.system.dofs
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn params(&self) -> &MaterialParams {
        &self.system.params
    }

    /// `0.2 h / c` with `h` the shortest mesh edge.
    pub fn default_time_step(&self) -> f64 {
        0.2 * self.mesh.min_edge_length() / self.params().sound_speed()
    }

    fn incident(&self, formulation: Formulation) -> Option<&IncidentWave> {
        match &self.scenario {
            Scenario::Incident { wave, formulation: f } if *f == formulation => Some(wave),
            _ => None,
        }
    }

    /// Interpolated `(g, h)` in the pressure block, zero elsewhere.
    pub fn initial_data(&self) -> (Vec<f64>, Vec<f64>) {
        let dofs = self.dofs();
        let (mut u, mut v) = (vec![0.0; dofs.len()], vec![0.0; dofs.len()]);
        if let Scenario::Raw(RawData { initial_pressure, initial_rate, .. }) = &self.scenario {
            let ne = dofs.elastic_count();
            let na = dofs.acoustic_count();
            if let Some(g) = initial_pressure {
                let nodal = interpolate_fluid(&self.mesh, dofs, |x| g(x));
                u[ne..].copy_from_slice(&nodal[..na]);
            }
            if let Some(h) = initial_rate {
                let nodal = interpolate_fluid(&self.mesh, dofs, |x| h(x));
                v[ne..].copy_from_slice(&nodal[..na]);
            }
        }
        (u, v)
    }

    /// Prescribed pressures on the outer circle at time `t`.
    pub fn boundary_values(&self, t: f64) -> Vec<f64> {
        match self.incident(Formulation::TotalField) {
            Some(wave) => self.boundary_points.iter().map(|&x| wave.value(x, t)).collect(),
            None => vec![0.0; self.boundary_points.len()],
        }
    }

    /// Pressure at every fluid node, including prescribed boundary values.
    pub fn fluid_pressure(&self, state: &StateVector) -> Vec<f64> {
        self.dofs().fluid_values(&state.u, &self.boundary_values(state.t))
    }

    /// Time derivative of the elastic block of `F`, nonzero only for the
    /// scattered-field incident pulse.
    pub fn elastic_forcing_rate(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dofs().elastic_count()];
        if let Some(wave) = self.incident(Formulation::ScatteredField) {
            let rho = self.params().fluid_density();
            for q in &self.interface_points {
                let pt = wave.time_derivative(q.x, t);
                for k in 0..2 {
                    for c in 0..2 {
                        out[2 * q.elastic[k] + c] -= rho * q.weight * pt * q.normal[c] * q.phi[k];
                    }
                }
            }
        }
        out
    }

    /// Rate of change of the energy supplied by the forcing:
    /// `2 ṗ·F_p + 2 ü·Ḟ_u`.
    pub fn power(&self, state: &StateVector) -> Result<f64> {
        let dofs = self.dofs();
        let mut f = vec![0.0; dofs.len()];
        self.load_at(state.t, &mut f)?;
        let acoustic: f64 = dofs.acoustic_range().map(|i| state.v[i] * f[i]).sum();
        let rate = self.elastic_forcing_rate(state.t);
        let elastic: f64 = rate.iter().zip(&state.w).map(|(a, b)| a * b).sum();
        Ok(2.0 * (acoustic + elastic))
    }

    /// Integrator for this system with the given step.
    pub fn integrator(&self, dt: f64) -> Result<Newmark<'_>> {
        Newmark::for_system(&self.system, dt)
    }

    /// Full initial state, including the consistent initial acceleration.
    pub fn initial_state(&self, integrator: &Newmark<'_>) -> Result<StateVector> {
        let (u, v) = self.initial_data();
        integrator.initial_state(u, v, 0.0, self)
    }

    pub fn run(&self, grid: &TimeGrid, observers: &mut [&mut dyn Observer]) -> Result<StateVector> {
        let integrator = self.integrator(grid.dt())?;
        let initial = self.initial_state(&integrator)?;
        integrator.run(initial, grid, self, observers)
    }

    pub fn probes(&self, positions: &[[f64; 2]]) -> Result<Vec<PointProbe>> {
        positions.iter().map(|&x| PointProbe::new(&self.mesh, self.dofs(), x)).collect()
    }
}

impl Load for Simulation {
    fn load_at(&self, t: f64, out: &mut [f64]) -> Result<()> {
        out.fill(0.0);
        match &self.scenario {
            Scenario::Raw(data) => {
                if let Some(f) = &data.source {
                    add_load(&self.mesh, self.dofs(), &|x, t| f(x, t), t, 1.0, out);
                }
            }
            Scenario::Incident { wave, formulation: Formulation::ScatteredField } => {
                let rho = self.params().fluid_density();
                for q in &self.interface_points {
                    let p = wave.value(q.x, t);
                    let g = wave.gradient(q.x, t);
                    let dn = g[0] * q.normal[0] + g[1] * q.normal[1];
                    for k in 0..2 {
                        out[q.acoustic[k]] += q.weight * dn * q.phi[k];
                        for c in 0..2 {
                            out[2 * q.elastic[k] + c] -= rho * q.weight * p * q.normal[c] * q.phi[k];
                        }
                    }
                }
            }
            Scenario::Incident { wave, formulation: Formulation::TotalField } => {
                let values: Vec<f64> = self.boundary_points.iter().map(|&x| wave.value(x, t)).collect();
                let accel: Vec<f64> = self.boundary_points.iter().map(|&x| wave.second_time_derivative(x, t)).collect();
                let ne = self.dofs().elastic_count();
                self.boundary_mass.mul_vec_add(-1.0, &accel, &mut out[ne..]);
                self.boundary_stiffness.mul_vec_add(-1.0, &values, &mut out[ne..]);
            }
        }
        Ok(())
    }
}

/// Records the physical pressure at fixed points every `stride` steps. In the
/// scattered-field formulation the incident pulse is added back at the probe.
pub struct ProbeSampler<'a> {
    sim: &'a Simulation,
    probes: Vec<PointProbe>,
    stride: usize,
    add_incident: bool,
    pub series: ProbeSeries,
}

impl<'a> ProbeSampler<'a> {
    pub fn new(sim: &'a Simulation, positions: &[[f64; 2]], stride: usize) -> Result<Self> {
        Ok(ProbeSampler {
            sim,
            probes: sim.probes(positions)?,
            stride: stride.max(1),
            add_incident: true,
            series: ProbeSeries::new(positions.to_vec()),
        })
    }

    /// Record the computed unknown only, without adding the incident pulse back.
    pub fn solution_only(mut self) -> Self {
        self.add_incident = false;
        self
    }
}

impl Observer for ProbeSampler<'_> {
    fn stride(&self) -> usize {
        self.stride
    }

    fn observe(&mut self, _step: usize, state: &StateVector) -> Result<()> {
        let p = self.sim.fluid_pressure(state);
        let incident = self.sim.incident(Formulation::ScatteredField).filter(|_| self.add_incident);
        let sample: Vec<f64> = self
            .probes
            .iter()
            .zip(&self.series.positions)
            .map(|(pr, x)| pr.eval(&p) + incident.map_or(0.0, |w| w.value(*x, state.t)))
            .collect();
        self.series.push(state.t, &sample);
        Ok(())
    }
}

/// Accumulates `∫ power dt` by the trapezoid rule at every sample.
pub struct WorkRecorder<'a> {
    sim: &'a Simulation,
    stride: usize,
    last: Option<(f64, f64)>,
    pub times: Vec<f64>,
    pub work: Vec<f64>,
}

impl<'a> WorkRecorder<'a> {
    pub fn new(sim: &'a Simulation, stride: usize) -> Self {
        WorkRecorder { sim, stride: stride.max(1), last: None, times: Vec::new(), work: Vec::new() }
    }
}

impl Observer for WorkRecorder<'_> {
    fn stride(&self) -> usize {
        self.stride
    }

    fn observe(&mut self, _step: usize, state: &StateVector) -> Result<()> {
        let p = self.sim.power(state)?;
        let total = match (self.last, self.work.last()) {
            (Some((t0, p0)), Some(w)) => w + 0.5 * (state.t - t0) * (p0 + p),
            _ => 0.0,
        };
        self.last = Some((state.t, p));
        self.times.push(state.t);
        self.work.push(total);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_disk_annulus;
    use crate::scenario::Bump;

    fn params() -> MaterialParams {
        MaterialParams::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_data_stays_zero() {
        let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 4, 16).unwrap();
        let sim = Simulation::new(mesh, RadialMap::new(1.0, 2.0, 6.0).unwrap(), params(), Scenario::zero()).unwrap();
        let grid = TimeGrid::new(sim.default_time_step(), 20).unwrap();
        let end = sim.run(&grid, &mut []).unwrap();
        assert_eq!(end.max_abs(), 0.0);
    }

    #[test]
    fn pulse_overlapping_inclusion_is_rejected() {
        let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 4, 16).unwrap();
        let wave = IncidentWave::new([1.0, 0.0], 1.0, 0.5, 0.3, 1.0).unwrap();
        let sc = Scenario::Incident { wave, formulation: Formulation::ScatteredField };
        let map = RadialMap::new(1.0, 2.0, 6.0).unwrap();
        assert!(matches!(Simulation::new(mesh.clone(), map, params(), sc), Err(Error::Config(_))));
        let wave = IncidentWave::new([1.0, 0.0], 1.0, 0.5, 3.0, 1.0).unwrap();
        let sc = Scenario::Incident { wave, formulation: Formulation::TotalField };
        assert!(matches!(Simulation::new(mesh, map, params(), sc), Err(Error::Config(_))));
    }

    #[test]
    fn initial_data_lands_in_pressure_block() {
        let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 4, 16).unwrap();
        let bump = Bump::new([1.2, 0.0], 0.5, 1.0).unwrap();
        let sc = Scenario::Raw(RawData::zero().with_initial_pressure(move |x| bump.eval(x)));
        let sim = Simulation::new(mesh, RadialMap::new(1.0, 2.0, 6.0).unwrap(), params(), sc).unwrap();
        let (u, v) = sim.initial_data();
        let ne = sim.dofs().elastic_count();
        assert!(u[..ne].iter().all(|x| *x == 0.0));
        assert!(u[ne..].iter().any(|x| *x > 0.0));
        assert!(v.iter().all(|x| *x == 0.0));
    }
}
