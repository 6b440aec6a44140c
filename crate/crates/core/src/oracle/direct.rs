//! Reference solve on the uncompressed disk of radius `R`, and the
//! probe-wise comparison with the compressed solve.

use crate::assembly::MaterialParams;
use crate::error::{Error, Result};
use crate::field::{time_l2_norm, ProbeSeries};
use crate::mesh::{generate_disk_annulus, generate_graded_disk, Mesh};
use crate::radial_map::RadialMap;
use crate::scenario::{Formulation, IncidentWave, Scenario};
use crate::simulation::{ProbeSampler, Simulation};
use crate::timestepper::TimeGrid;

/// One scattered-pulse configuration solved both ways.
#[derive(Debug, Clone)]
pub struct EquivalenceCase {
    pub inclusion_radius: f64,
    pub a: f64,
    pub b: f64,
    pub big_r: f64,
    pub params: MaterialParams,
    pub wave: IncidentWave,
    pub final_time: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    /// Probe points, all within `|x| ≤ a`.
    pub probes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub struct EquivalenceResult {
    /// Largest probe-wise relative `L²(0, T)` difference.
    pub difference: f64,
    pub compressed: ProbeSeries,
    pub direct: ProbeSeries,
    pub dt: f64,
}

impl EquivalenceCase {
    fn scenario(&self) -> Scenario {
        Scenario::Incident { wave: self.wave, formulation: Formulation::ScatteredField }
    }

    fn compressed_mesh(&self) -> Result<Mesh> {
        generate_disk_annulus(self.inclusion_radius, self.a, self.b, self.n_radial, self.n_angular)
    }

    fn check_probes(&self) -> Result<()> {
        for (k, p) in self.probes.iter().enumerate() {
            if p[0].hypot(p[1]) > self.a {
                return Err(Error::Config(format!("probe {k} at {p:?} lies outside |x| <= a = {}", self.a)));
            }
        }
        Ok(())
    }

    /// `0.2 h / c` on the compressed mesh; both solves use it.
    pub fn time_step(&self) -> Result<f64> {
        Ok(0.2 * self.compressed_mesh()?.min_edge_length() / self.params.sound_speed())
    }

    /// Same case with both mesh counts doubled.
    pub fn refined(&self) -> Self {
        EquivalenceCase { n_radial: 2 * self.n_radial, n_angular: 2 * self.n_angular, ..self.clone() }
    }

    pub fn run(&self) -> Result<EquivalenceResult> {
        let dt = self.time_step()?;
        let compressed = compressed_solve(self, dt)?;
        let direct = direct_big_domain_solve(self, dt)?;
        let difference = probe_difference(&compressed, &direct)?;
        Ok(EquivalenceResult { difference, compressed, direct, dt })
    }
}

fn solve(case: &EquivalenceCase, mesh: Mesh, map: RadialMap<f64>, dt: f64) -> Result<ProbeSeries> {
    case.check_probes()?;
    let sim = Simulation::new(mesh, map, case.params, case.scenario())?;
    let grid = TimeGrid::covering(case.final_time, dt)?;
    let mut sampler = ProbeSampler::new(&sim, &case.probes, 1)?.solution_only();
    sim.run(&grid, &mut [&mut sampler])?;
    Ok(sampler.series)
}

/// Compressed solve on the disk of radius `b` with the map `(a, b, R)`.
pub fn compressed_solve(case: &EquivalenceCase, dt: f64) -> Result<ProbeSeries> {
    let map = RadialMap::new(case.a, case.b, case.big_r)?;
    solve(case, case.compressed_mesh()?, map, dt)
}

/// Identity-map solve on a graded mesh of the disk of radius `R` that
/// matches the compressed mesh inside `|x| ≤ a`. Requires that the
/// scattered front cannot reach the truncation circle by the final time:
/// `R > a + c T + width`.
pub fn direct_big_domain_solve(case: &EquivalenceCase, dt: f64) -> Result<ProbeSeries> {
    let reach = case.a + case.params.sound_speed() * case.final_time + case.wave.width();
    if !(case.big_r > reach) {
        return Err(Error::Config(format!(
            "truncation radius R = {} must exceed a + cT + width = {reach}",
            case.big_r
        )));
    }
    let mesh = generate_graded_disk(case.inclusion_radius, case.a, case.b, case.big_r, case.n_radial, case.n_angular)?;
    solve(case, mesh, RadialMap::identity(case.a, case.big_r)?, dt)
}

/// Largest over probes of `‖s_k - r_k‖ / ‖r_k‖` in `L²(0, T)`.
pub fn probe_difference(series: &ProbeSeries, reference: &ProbeSeries) -> Result<f64> {
    if series.times.len() != reference.times.len() || series.values.len() != reference.values.len() {
        return Err(Error::Diagnostic("probe series have different shapes".into()));
    }
    let mut worst = 0.0f64;
    for (s, r) in series.values.iter().zip(&reference.values) {
        let diff: Vec<f64> = s.iter().zip(r).map(|(a, b)| a - b).collect();
        let num = time_l2_norm(&reference.times, &diff);
        let den = time_l2_norm(&reference.times, r);
        worst = worst.max(if den > 0.0 { num / den } else { num });
    }
    Ok(worst)
}
