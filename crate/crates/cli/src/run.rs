//! Scenario execution and output files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use acoustoelastic::diagnostics::{check_energy_identity, EnergyRecorder};
use acoustoelastic::field::fluid_l2_error;
use acoustoelastic::mesh::{generate_disk_annulus, load_mesh};
use acoustoelastic::oracle::ManufacturedCase;
use acoustoelastic::scenario::{pulse, Formulation, RawData, Scenario};
use acoustoelastic::simulation::{ProbeSampler, Simulation, WorkRecorder};
use acoustoelastic::timestepper::{Observer, StateVector, TimeGrid};
use acoustoelastic::{Error, Mesh, RadialMap, Result};

use crate::config::{MeshSource, ScenarioConfig, ScenarioKind};

#[derive(Debug)]
pub struct RunSummary {
    pub steps: usize,
    pub dt: f64,
    pub final_energy: f64,
    pub drift: f64,
    /// `L²(Ω)` pressure error at the final time for manufactured scenarios.
    pub manufactured_error: Option<f64>,
    pub snapshots: usize,
    pub wall: Duration,
    pub outputs: Vec<PathBuf>,
}

fn build_mesh(cfg: &ScenarioConfig) -> Result<Mesh> {
    match &cfg.mesh {
        MeshSource::Generated { n_radial, n_angular } => {
            generate_disk_annulus(cfg.inclusion_radius, cfg.a, cfg.b, *n_radial, *n_angular)
        }
        MeshSource::File(path) => load_mesh(path),
    }
}

fn build_scenario(cfg: &ScenarioConfig, map: RadialMap<f64>) -> Result<(Scenario, Option<ManufacturedCase<f64>>)> {
    Ok(match &cfg.scenario {
        ScenarioKind::Incident { wave, formulation } => {
            (Scenario::Incident { wave: *wave, formulation: *formulation }, None)
        }
        ScenarioKind::Manufactured { case, omega } => {
            let mms = ManufacturedCase::new(*case, map, cfg.params.sound_speed(), cfg.inclusion_radius, *omega)?;
            (mms.to_scenario(), Some(mms))
        }
        ScenarioKind::Raw { f, g, h } => {
            let mut data = RawData::zero();
            if let Some((bump, duration)) = *f {
                data = data.with_source(move |x, t| bump.eval(x) * pulse(t / duration));
            }
            if let Some(bump) = *g {
                data = data.with_initial_pressure(move |x| bump.eval(x));
            }
            if let Some(bump) = *h {
                data = data.with_initial_rate(move |x| bump.eval(x));
            }
            (Scenario::Raw(data), None)
        }
    })
}

/// Writes `x y value` rows of the fluid pressure at every `stride` steps
/// and a manifest of sample times on completion.
struct SnapshotWriter<'a> {
    sim: &'a Simulation,
    dir: PathBuf,
    stride: usize,
    manifest: String,
    count: usize,
}

impl Observer for SnapshotWriter<'_> {
    fn stride(&self) -> usize {
        self.stride
    }

    fn observe(&mut self, step: usize, state: &StateVector) -> Result<()> {
        let p = self.sim.fluid_pressure(state);
        let incident = match self.sim.scenario() {
            Scenario::Incident { wave, formulation: Formulation::ScatteredField } => Some(*wave),
            _ => None,
        };
        let mesh = self.sim.mesh();
        let mut text = String::new();
        for (k, &v) in self.sim.dofs().fluid_nodes().iter().enumerate() {
            let x = mesh.vertices()[v];
            let value = p[k] + incident.map_or(0.0, |w| w.value(x, state.t));
            let _ = writeln!(text, "{:.16e} {:.16e} {:.16e}", x[0], x[1], value);
        }
        let name = format!("snapshot_{step:06}.txt");
        let path = self.dir.join(&name);
        fs::write(&path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        let _ = writeln!(self.manifest, "{step} {:.16e} {name}", state.t);
        self.count += 1;
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        let path = self.dir.join("manifest.txt");
        let text = format!("# step time file\n{}", self.manifest);
        fs::write(&path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }
}

fn write(path: &Path, text: &str) -> Result<PathBuf> {
    fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    Ok(path.to_path_buf())
}

/// Runs the configured scenario and writes `energy.csv`, `probes.csv` and,
/// when enabled, `snapshots/` under `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunSummary> {
    let start = Instant::now();
    let mesh = build_mesh(cfg)?;
    let map = RadialMap::new(cfg.a, cfg.b, cfg.big_r)?;
    let (scenario, mms) = build_scenario(cfg, map)?;
    let sim = Simulation::new(mesh, map, cfg.params, scenario)?;
    let dt = cfg.dt.unwrap_or_else(|| sim.default_time_step());
    let grid = TimeGrid::covering(cfg.final_time, dt)?;

    fs::create_dir_all(out_dir).map_err(|e| Error::io(format!("creating {}", out_dir.display()), e))?;
    let mut energy = EnergyRecorder::new(&sim, cfg.energy_stride);
    let mut work = WorkRecorder::new(&sim, 1);
    let mut probes = ProbeSampler::new(&sim, &cfg.probes, cfg.probe_stride)?;
    let mut snapshots = if cfg.snapshot_stride > 0 {
        let dir = out_dir.join("snapshots");
        fs::create_dir_all(&dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        Some(SnapshotWriter { sim: &sim, dir, stride: cfg.snapshot_stride, manifest: String::new(), count: 0 })
    } else {
        None
    };

    let end = {
        let mut observers: Vec<&mut dyn Observer> = vec![&mut energy, &mut work, &mut probes];
        if let Some(s) = snapshots.as_mut() {
            observers.push(s);
        }
        sim.run(&grid, &mut observers)?
    };

    // Work is accumulated every step; compare at the energy samples.
    let stride = cfg.energy_stride;
    let work_times: Vec<f64> = work.times.iter().step_by(stride).copied().collect();
    let work_values: Vec<f64> = work.work.iter().step_by(stride).copied().collect();
    let drift = check_energy_identity(&energy.trace, &work_times, &work_values)?;
    let manufactured_error = mms.map(|case| {
        let p = sim.fluid_pressure(&end);
        fluid_l2_error(sim.mesh(), sim.dofs(), &p, |x| case.pressure(x, end.t))
    });

    let mut outputs = vec![
        write(&out_dir.join("energy.csv"), &energy.trace.to_csv())?,
        write(&out_dir.join("probes.csv"), &probes.series.to_csv())?,
    ];
    if snapshots.is_some() {
        outputs.push(out_dir.join("snapshots"));
    }
    Ok(RunSummary {
        steps: grid.n_steps(),
        dt: grid.dt(),
        final_energy: energy.trace.last().map_or(0.0, |s| s.energy.total),
        drift,
        manufactured_error,
        snapshots: snapshots.map_or(0, |s| s.count),
        wall: start.elapsed(),
        outputs,
    })
}
