//! Acceptance suites at their canonical desk-scale configurations.
//!
//! A suite is a list of [`Check`]s, each a measured value compared against a
//! fixed threshold. The report format is one line per check:
//! `name measured op threshold PASS|FAIL`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix3};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{AssembledSystem, MaterialParams};
use crate::diagnostics::{
    check_apriori_structure, check_energy_identity, check_finite_speed, check_time_growth, BoundQuantities, DataNorms,
    EnergyRecorder,
};
use crate::error::{Error, Result};
use crate::field::{fluid_l2_error, region_l2_norm};
use crate::mesh::{generate_disk_annulus, Mesh, Region};
use crate::oracle::{CaseId, EquivalenceCase, ManufacturedCase};
use crate::quadrature::gauss_legendre_on;
use crate::radial_map::{default_fd_step, verify_laplacian_pullback_2d, verify_laplacian_pullback_3d, RadialMap};
use crate::scenario::{pulse, Bump, Formulation, IncidentWave, RawData, Scenario};
use crate::simulation::{ProbeSampler, Simulation, WorkRecorder};
use crate::sparse::CsrMatrix;
use crate::timestepper::{Observer, StateVector, TimeGrid};

pub const DEFAULT_SEED: u64 = 20_240_917;

pub const INCLUSION_RADIUS: f64 = 0.5;
pub const CANONICAL_RESOLUTION: (usize, usize) = (24, 96);

/// `c = 1, ρ₁ = 1, ρ₂ = 2, μ = 1, λ = 1`.
pub fn canonical_params() -> MaterialParams {
    MaterialParams::new(1.0, 1.0, 2.0, 1.0, 1.0).expect("valid constants")
}

/// `a = 1, b = 2, R = 6`.
pub fn canonical_map() -> RadialMap<f64> {
    RadialMap::new(1.0, 2.0, 6.0).expect("valid constants")
}

pub fn canonical_mesh() -> Result<Mesh> {
    let (nr, na) = CANONICAL_RESOLUTION;
    generate_disk_annulus(INCLUSION_RADIUS, 1.0, 2.0, nr, na)
}

/// Plane pulse travelling along `+x` that reaches the inclusion at `t = 1.5`.
pub fn canonical_wave() -> IncidentWave {
    IncidentWave::new([1.0, 0.0], 1.0, 0.8, 2.0, 1.0).expect("valid constants")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    AtLeast,
    Above,
}

impl Comparison {
    fn holds(self, measured: f64, threshold: f64) -> bool {
        match self {
            Comparison::AtMost => measured <= threshold,
            Comparison::AtLeast => measured >= threshold,
            Comparison::Above => measured > threshold,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
            Comparison::Above => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, comparison: Comparison, threshold: f64) -> Self {
        Check { name: name.into(), measured, threshold, comparison, pass: comparison.holds(measured, threshold) }
    }

    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(name, measured, Comparison::AtMost, threshold)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(name, measured, Comparison::AtLeast, threshold)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:.6e} {} {:.6e} {}",
            self.name,
            self.measured,
            self.comparison.symbol(),
            self.threshold,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Map,
    Lemmas,
    Energy,
    Causality,
    Equivalence,
    Mms,
    Apriori,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Map, Suite::Lemmas, Suite::Energy, Suite::Causality, Suite::Equivalence, Suite::Mms, Suite::Apriori];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Map => "map",
            Suite::Lemmas => "lemmas",
            Suite::Energy => "energy",
            Suite::Causality => "causality",
            Suite::Equivalence => "equivalence",
            Suite::Mms => "mms",
            Suite::Apriori => "apriori",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH.into_iter().chain([Suite::All]).find(|suite| suite.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown suite '{s}' (expected map, lemmas, energy, causality, equivalence, mms, apriori or all)"
            ))
        })
    }
}

/// Runs `suite`; `all` runs every suite on its own thread and concatenates
/// the reports in a fixed order.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<Check>> {
    match suite {
        Suite::Map => map_suite(seed),
        Suite::Lemmas => lemmas_suite(seed),
        Suite::Energy => energy_suite(),
        Suite::Causality => causality_suite(),
        Suite::Equivalence => equivalence_suite(),
        Suite::Mms => mms_suite(),
        Suite::Apriori => apriori_suite(),
        Suite::All => std::thread::scope(|s| {
            let handles: Vec<_> = Suite::EACH.iter().map(|&one| s.spawn(move || run_suite(one, seed))).collect();
            let mut out = Vec::new();
            for h in handles {
                out.extend(h.join().map_err(|_| Error::Diagnostic("suite thread panicked".into()))??);
            }
            Ok(out)
        }),
    }
}

fn random_map(rng: &mut impl Rng) -> RadialMap<f64> {
    let a = rng.random_range(0.2..2.0);
    let b = a * rng.random_range(1.1..3.0);
    let big_r = b * rng.random_range(1.1..10.0);
    RadialMap::new(a, b, big_r).expect("ordered radii")
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn asymmetry<const D: usize>(m: &[[f64; D]; D]) -> f64 {
    let mut out = 0.0f64;
    for i in 0..D {
        for j in 0..D {
            out = out.max((m[i][j] - m[j][i]).abs());
        }
    }
    out
}

fn frame_defect<const D: usize>(q: &[[f64; D]; D]) -> f64 {
    let mut out = 0.0f64;
    for i in 0..D {
        for j in 0..D {
            let dot: f64 = (0..D).map(|k| q[k][i] * q[k][j]).sum();
            out = out.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    out
}

fn is_identity<const D: usize>(m: &[[f64; D]; D]) -> bool {
    (0..D).all(|i| (0..D).all(|j| m[i][j] == if i == j { 1.0 } else { 0.0 }))
}

fn min_eigenvalue_2(m: &[[f64; 2]; 2]) -> f64 {
    Matrix2::from_fn(|i, j| m[i][j]).symmetric_eigenvalues().min()
}

fn min_eigenvalue_3(m: &[[f64; 3]; 3]) -> f64 {
    Matrix3::from_fn(|i, j| m[i][j]).symmetric_eigenvalues().min()
}

/// Map identities over random radii and `ζ' > 0`.
pub fn map_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identity_error = 0.0f64;
    let maps: Vec<RadialMap<f64>> = (0..100).map(|_| random_map(&mut rng)).collect();
    for m in &maps {
        let (a, b, big_r) = (m.inner_radius(), m.outer_radius(), m.truncation_radius());
        let at_a = m.eval(a)?;
        let at_b = m.eval(b)?;
        identity_error =
            identity_error.max(rel(at_a.zeta, a)).max(rel(at_b.zeta, big_r)).max(rel(at_a.zeta_prime, 1.0));
    }

    let mut exact_failures = 0usize;
    for _ in 0..100 {
        let a = Ratio::new(rng.random_range(1..40i128), rng.random_range(1..12i128));
        let b = a + Ratio::new(rng.random_range(1..40i128), rng.random_range(1..12i128));
        let big_r = b + Ratio::new(rng.random_range(1..80i128), rng.random_range(1..12i128));
        let m = RadialMap::new(a, b, big_r)?;
        let (at_a, at_b) = (m.eval(a)?, m.eval(b)?);
        if at_a.zeta != a || at_b.zeta != big_r || at_a.zeta_prime != Ratio::from_integer(1) {
            exact_failures += 1;
        }
    }

    let mut min_slope = f64::INFINITY;
    for k in 0..1000 {
        let m = &maps[k % maps.len()];
        let r = rng.random_range(0.0..=m.outer_radius());
        min_slope = min_slope.min(m.eval(r)?.zeta_prime);
    }
    Ok(vec![
        Check::at_most("map.identities", identity_error, 1e-12),
        Check::at_most("map.identities_exact_failures", exact_failures as f64, 0.0),
        Check::new("map.min_slope", min_slope, Comparison::Above, 0.0),
    ])
}

/// Symmetry and definiteness of `M`, orthonormality of the frame, and plain
/// coefficients inside `r ≤ a`, at 1000 random points in two and three
/// dimensions.
pub fn coefficient_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0ef);
    let (mut min_eig, mut asym, mut frame) = (f64::INFINITY, 0.0f64, 0.0f64);
    let mut identity_mismatches = 0usize;
    for _ in 0..1000 {
        let m = random_map(&mut rng);
        let r = rng.random_range(0.0..=m.outer_radius());
        let c2 = m.coefficients_2d(r, rng.random_range(0.0..TAU))?;
        let c3 = m.coefficients_3d(r, rng.random_range(0.0..=PI), rng.random_range(0.0..TAU))?;
        min_eig = min_eig.min(min_eigenvalue_2(&c2.m)).min(min_eigenvalue_3(&c3.m));
        asym = asym.max(asymmetry(&c2.m)).max(asymmetry(&c3.m));
        frame = frame.max(frame_defect(&c2.q)).max(frame_defect(&c3.q));

        let inside = rng.random_range(0.0..=m.inner_radius());
        let i2 = m.coefficients_2d(inside, rng.random_range(0.0..TAU))?;
        let i3 = m.coefficients_3d(inside, rng.random_range(0.0..=PI), rng.random_range(0.0..TAU))?;
        let plain2 = i2.beta == 1.0 && is_identity(&i2.m) && is_identity(&i2.k);
        let plain3 = i3.beta == 1.0 && is_identity(&i3.m) && is_identity(&i3.k);
        identity_mismatches += usize::from(!plain2) + usize::from(!plain3);
    }
    Ok(vec![
        Check::at_most("coefficients.asymmetry", asym, 0.0),
        Check::new("coefficients.min_eigenvalue", min_eig, Comparison::Above, 0.0),
        Check::at_most("coefficients.frame_defect", frame, 1e-14),
        Check::at_most("coefficients.identity_region_mismatches", identity_mismatches as f64, 0.0),
    ])
}

pub fn map_suite(seed: u64) -> Result<Vec<Check>> {
    let mut out = map_checks(seed)?;
    out.extend(coefficient_checks(seed)?);
    Ok(out)
}

type Field2 = fn([f64; 2]) -> f64;
type Field3 = fn([f64; 3]) -> f64;

const FIELDS_2D: [(&str, Field2); 3] = [
    ("quadratic", |y| y[0] * y[0] + y[1] * y[1]),
    ("trig", |y| (0.7 * y[0]).sin() * (0.4 * y[1]).cos()),
    ("gaussian", |y| (-(y[0] * y[0] + y[1] * y[1]) / 20.0).exp() * y[0]),
];

const FIELDS_3D: [(&str, Field3); 3] = [
    ("quadratic", |y| y[0] * y[0] + y[1] * y[1] + y[2] * y[2]),
    ("trig", |y| (0.7 * y[0]).sin() * (0.4 * y[1]).cos() * (0.3 * y[2]).cos()),
    ("gaussian", |y| (-(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) / 20.0).exp() * y[2]),
];

/// Finite-difference check of the Laplacian pullback in two and three
/// dimensions: three fields, 100 points in the compressed annulus each.
pub fn lemmas_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1e44a5);
    let map = canonical_map();
    let (a, b) = (map.inner_radius(), map.outer_radius());
    let band = 0.05 * (b - a);
    let coarse = 1e-2 * (b - a);
    let fine = default_fd_step(&map);

    let pts2: Vec<[f64; 2]> = (0..100)
        .map(|_| {
            let r = rng.random_range(a + band..b - band);
            let t = rng.random_range(0.0..TAU);
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    // Polar angles with sin θ ≥ 0.1 keep the spherical frame regular.
    let theta_min = 0.1f64.asin();
    let pts3: Vec<[f64; 3]> = (0..100)
        .map(|_| {
            let r = rng.random_range(a + band..b - band);
            let th = rng.random_range(theta_min..PI - theta_min);
            let ph = rng.random_range(0.0..TAU);
            [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()]
        })
        .collect();

    let mut out = Vec::new();
    let (mut min_order, mut max_error) = (f64::INFINITY, 0.0f64);
    for (name, f) in FIELDS_2D {
        let e1 = verify_laplacian_pullback_2d(&map, f, &pts2, coarse)?;
        let e2 = verify_laplacian_pullback_2d(&map, f, &pts2, coarse / 2.0)?;
        let ef = verify_laplacian_pullback_2d(&map, f, &pts2, fine)?;
        let order = (e1 / e2).log2();
        out.push(Check::at_least(format!("lemmas.order_2d_{name}"), order, 1.9));
        min_order = min_order.min(order);
        max_error = max_error.max(ef);
    }
    for (name, f) in FIELDS_3D {
        let e1 = verify_laplacian_pullback_3d(&map, f, &pts3, coarse)?;
        let e2 = verify_laplacian_pullback_3d(&map, f, &pts3, coarse / 2.0)?;
        let ef = verify_laplacian_pullback_3d(&map, f, &pts3, fine)?;
        let order = (e1 / e2).log2();
        out.push(Check::at_least(format!("lemmas.order_3d_{name}"), order, 1.9));
        min_order = min_order.min(order);
        max_error = max_error.max(ef);
    }
    out.push(Check::at_least("lemmas.min_order", min_order, 1.9));
    out.push(Check::at_most("lemmas.error_at_default_step", max_error, 1e-5));
    Ok(out)
}

/// Largest `max_abs` over every observed state.
#[derive(Debug, Default)]
struct PeakMagnitude(f64);

impl Observer for PeakMagnitude {
    fn observe(&mut self, _step: usize, state: &StateVector) -> Result<()> {
        self.0 = self.0.max(state.max_abs());
        Ok(())
    }
}

/// Pressure bump of radius 0.2 centred at `(0.8, 0)`, at rest.
pub fn canonical_energy_scenario() -> Scenario {
    let bump = Bump::new([0.8, 0.0], 0.2, 1.0).expect("valid constants");
    Scenario::Raw(RawData::zero().with_initial_pressure(move |x| bump.eval(x)))
}

/// Relative drift of the conserved energy over `steps` steps of size
/// `dt_factor · 0.2 h / c`.
pub fn energy_drift(sim: &Simulation, dt_factor: f64, steps: usize) -> Result<f64> {
    let grid = TimeGrid::new(sim.default_time_step() * dt_factor, steps)?;
    let mut energy = EnergyRecorder::new(sim, 1);
    let mut work = WorkRecorder::new(sim, 1);
    sim.run(&grid, &mut [&mut energy, &mut work])?;
    check_energy_identity(&energy.trace, &work.times, &work.work)
}

/// `max |L + Eᵀ|` on the canonical mesh.
pub fn interface_checks() -> Result<Vec<Check>> {
    let sys = AssembledSystem::new(&canonical_mesh()?, &canonical_map(), canonical_params())?;
    let sum = CsrMatrix::linear_combination(1.0, &sys.interface_transfer(), 1.0, &sys.interface.transpose());
    let cancellation = sum.iter().fold(0.0f64, |m, (_, _, v)| m.max(v.abs()));
    Ok(vec![Check::at_most("energy.interface_cancellation", cancellation, 1e-12)])
}

/// Largest unknown over 200 steps with all data zero.
pub fn uniqueness_checks() -> Result<Vec<Check>> {
    let quiet = Simulation::new(canonical_mesh()?, canonical_map(), canonical_params(), Scenario::zero())?;
    let mut peak = PeakMagnitude::default();
    sim_steps(&quiet, 200, &mut peak)?;
    Ok(vec![Check::at_most("energy.zero_data_peak", peak.0, 0.0)])
}

/// Drift over 1000 steps at `dt = 0.2 h / c`, and over the same horizon at
/// `dt / 2`.
pub fn conservation_checks() -> Result<Vec<Check>> {
    let sim = Simulation::new(canonical_mesh()?, canonical_map(), canonical_params(), canonical_energy_scenario())?;
    let drift = energy_drift(&sim, 1.0, 1000)?;
    let drift_half = energy_drift(&sim, 0.5, 2000)?;
    Ok(vec![
        Check::at_most("energy.relative_drift", drift, 1e-3),
        Check::at_most("energy.relative_drift_half_step", drift_half, 1e-3),
        Check::at_least("energy.drift_reduction_on_halving", drift / drift_half, 3.0),
    ])
}

pub fn energy_suite() -> Result<Vec<Check>> {
    let mut out = interface_checks()?;
    out.extend(uniqueness_checks()?);
    out.extend(conservation_checks()?);
    Ok(out)
}

fn sim_steps(sim: &Simulation, steps: usize, observer: &mut dyn Observer) -> Result<StateVector> {
    let grid = TimeGrid::new(sim.default_time_step(), steps)?;
    sim.run(&grid, &mut [observer])
}

/// Probes on the illuminated side at three radii inside `|x| ≤ a`.
pub const CAUSALITY_PROBES: [[f64; 2]; 3] = [[-0.7, 0.0], [-0.85, 0.0], [-1.0, 0.0]];

/// Pressure probes stay below `1e-6` of the recorded peak until 90% of the
/// incident front's arrival time.
pub fn causality_suite() -> Result<Vec<Check>> {
    let wave = canonical_wave();
    let scenario = Scenario::Incident { wave, formulation: Formulation::ScatteredField };
    let sim = Simulation::new(canonical_mesh()?, canonical_map(), canonical_params(), scenario)?;
    let grid = TimeGrid::covering(4.0, sim.default_time_step())?;
    let mut sampler = ProbeSampler::new(&sim, &CAUSALITY_PROBES, 1)?;
    sim.run(&grid, &mut [&mut sampler])?;
    let series = sampler.series;

    let (threshold, margin) = (1e-6, 0.1);
    let a = sim.map().inner_radius();
    let violations = check_finite_speed(&series, |x| wave.front_time(x), a, threshold, margin)?;
    let peak = series.peak();
    let mut early = 0.0f64;
    let mut weakest = f64::INFINITY;
    for (x, values) in series.positions.iter().zip(&series.values) {
        let cutoff = (1.0 - margin) * wave.front_time(*x);
        for (&t, &v) in series.times.iter().zip(values) {
            if t < cutoff {
                early = early.max(v.abs() / peak);
            }
        }
        weakest = weakest.min(values.iter().fold(0.0f64, |m, v| m.max(v.abs())) / peak);
    }
    Ok(vec![
        Check::at_most("causality.violations", violations.len() as f64, 0.0),
        Check::at_most("causality.max_relative_before_arrival", early, threshold),
        Check::at_least("causality.weakest_probe_peak", weakest, 0.1),
    ])
}

/// Compressed vs. direct solve with `a = 1, b = 2, R = 6, T = 4`.
pub fn canonical_equivalence_case() -> EquivalenceCase {
    EquivalenceCase {
        inclusion_radius: INCLUSION_RADIUS,
        a: 1.0,
        b: 2.0,
        big_r: 6.0,
        params: canonical_params(),
        wave: IncidentWave::new([1.0, 0.0], 1.0, 0.95, 0.6, 1.0).expect("valid constants"),
        final_time: 4.0,
        n_radial: 32,
        n_angular: 128,
        probes: vec![[-0.8, 0.0], [0.0, 0.8], [0.8, 0.0]],
    }
}

pub fn equivalence_suite() -> Result<Vec<Check>> {
    let coarse = canonical_equivalence_case();
    let fine = coarse.refined();
    let (c, f) = std::thread::scope(|s| {
        let hc = s.spawn(|| coarse.run());
        let hf = s.spawn(|| fine.run());
        (hc.join(), hf.join())
    });
    let panicked = |_| Error::Diagnostic("equivalence solve panicked".into());
    let (c, f) = (c.map_err(panicked)??, f.map_err(panicked)??);
    Ok(vec![
        Check::at_most("equivalence.difference", c.difference, 5e-2),
        Check::at_least("equivalence.refinement_rate", (c.difference / f.difference).log2(), 1.0),
    ])
}

/// One rung of a manufactured-solution refinement ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceLevel {
    pub n_radial: usize,
    pub n_angular: usize,
    pub dt: f64,
    pub steps: usize,
    pub error: f64,
    /// `log₂` of the error ratio to the previous level.
    pub order: Option<f64>,
}

pub const MMS_FINAL_TIME: f64 = 1.0;

/// Runs `case` to `t = 1` on `levels` meshes starting at `(6, 24)`, halving
/// both `h` and `dt` at each level, and records the `L²(Ω)` pressure error.
pub fn convergence_study(case: CaseId, levels: usize) -> Result<Vec<ConvergenceLevel>> {
    if levels < 2 {
        return Err(Error::Config(format!("a convergence study needs at least 2 levels, got {levels}")));
    }
    let map = canonical_map();
    let params = canonical_params();
    let mms = ManufacturedCase::new(case, map, params.sound_speed(), INCLUSION_RADIUS, PI)?;
    let mut out: Vec<ConvergenceLevel> = Vec::with_capacity(levels);
    let mut dt = 0.0;
    for level in 0..levels {
        let (nr, na) = (6 << level, 24 << level);
        let mesh = generate_disk_annulus(INCLUSION_RADIUS, map.inner_radius(), map.outer_radius(), nr, na)?;
        let sim = Simulation::new(mesh, map, params, mms.to_scenario())?;
        dt = if level == 0 { sim.default_time_step() } else { dt / 2.0 };
        let steps = (MMS_FINAL_TIME / dt).round() as usize;
        let grid = TimeGrid::new(MMS_FINAL_TIME / steps as f64, steps)?;
        let end = sim.run(&grid, &mut [])?;
        let p = sim.fluid_pressure(&end);
        let error = fluid_l2_error(sim.mesh(), sim.dofs(), &p, |x| mms.pressure(x, end.t));
        let order = out.last().map(|prev| (prev.error / error).log2());
        out.push(ConvergenceLevel { n_radial: nr, n_angular: na, dt: grid.dt(), steps, error, order });
    }
    Ok(out)
}

/// Residual check of the dipole manufactured solution, then a three-level
/// convergence study.
pub fn mms_suite() -> Result<Vec<Check>> {
    let map = canonical_map();
    let mms = ManufacturedCase::new(CaseId::Dipole, map, 1.0, INCLUSION_RADIUS, PI)?;
    let points: Vec<[f64; 2]> = (0..100)
        .map(|k| {
            let r = 0.55 + 1.4 * (k as f64 + 0.5) / 100.0;
            let t = 2.399963 * k as f64;
            [r * t.cos(), r * t.sin()]
        })
        .filter(|x| (x[0].hypot(x[1]) - map.inner_radius()).abs() > 0.01)
        .collect();
    let residual = mms.residual(&points, 0.37, default_fd_step(&map))?;
    let study = convergence_study(CaseId::Dipole, 3)?;
    let decreasing = study.windows(2).all(|w| w[1].error < w[0].error);
    let finest = study.last().and_then(|l| l.order).unwrap_or(f64::NAN);
    Ok(vec![
        Check::at_most("mms.source_residual", residual, 1e-5),
        Check::at_most("mms.non_decreasing_levels", f64::from(u8::from(!decreasing)), 0.0),
        Check::at_least("mms.order_finest", finest, 1.8),
    ])
}

/// Source bump of radius 0.25 at `(0, 0.75)` switched on as the pulse
/// `ϑ(t / 0.5)`; initial pressure at `(0.8, 0)` and rate at `(-0.75, 0.2)`.
pub struct AprioriData {
    source: Bump,
    pressure: Bump,
    rate: Bump,
    on_time: f64,
}

impl Default for AprioriData {
    fn default() -> Self {
        AprioriData {
            source: Bump::new([0.0, 0.75], 0.25, 1.0).expect("valid constants"),
            pressure: Bump::new([0.8, 0.0], 0.2, 1.0).expect("valid constants"),
            rate: Bump::new([-0.75, 0.2], 0.2, 1.0).expect("valid constants"),
            on_time: 0.5,
        }
    }
}

impl AprioriData {
    pub fn scenario(&self) -> Scenario {
        let (f, g, h, tau) = (self.source, self.pressure, self.rate, self.on_time);
        Scenario::Raw(
            RawData::zero()
                .with_source(move |x, t| f.eval(x) * pulse(t / tau))
                .with_initial_pressure(move |x| g.eval(x))
                .with_initial_rate(move |x| h.eval(x)),
        )
    }

    /// `‖g‖`, `‖h‖` over the fluid and `‖f‖_{L¹(0,T; L²)}`, all scaled by `alpha`.
    pub fn norms(&self, mesh: &Mesh, final_time: f64, alpha: f64) -> DataNorms {
        let end = final_time.min(self.on_time);
        let time_l1: f64 =
            gauss_legendre_on(8, 0.0, end).into_iter().map(|(t, w)| w * pulse(t / self.on_time).abs()).sum();
        DataNorms {
            g: alpha * region_l2_norm(mesh, Region::Fluid, |x| self.pressure.eval(x)),
            h: alpha * region_l2_norm(mesh, Region::Fluid, |x| self.rate.eval(x)),
            f: alpha * region_l2_norm(mesh, Region::Fluid, |x| self.source.eval(x)) * time_l1,
        }
    }
}

fn bound_run(data: &AprioriData, alpha: f64, final_time: f64) -> Result<BoundQuantities> {
    let sim = Simulation::new(canonical_mesh()?, canonical_map(), canonical_params(), data.scenario().scaled(alpha))?;
    let grid = TimeGrid::covering(final_time, sim.default_time_step())?;
    let mut rec = EnergyRecorder::new(&sim, 1);
    sim.run(&grid, &mut [&mut rec])?;
    BoundQuantities::from_trace(&rec.trace, data.norms(sim.mesh(), final_time, alpha))
}

/// Linear scaling in the data for `α ∈ {1, 2, 4}` at `T = 1`, and growth of
/// both left sides over `T ∈ {1, 2, 4}`.
pub fn apriori_suite() -> Result<Vec<Check>> {
    let data = AprioriData::default();
    let alphas = [1.0, 2.0, 4.0];
    let scaled = alphas.iter().map(|&a| bound_run(&data, a, 1.0)).collect::<Result<Vec<_>>>()?;
    let structure = check_apriori_structure(&scaled, &alphas)?;
    let mut timed = vec![scaled[0].clone()];
    for t in [2.0, 4.0] {
        timed.push(bound_run(&data, 1.0, t)?);
    }
    let growth = check_time_growth(&timed)?;
    let worst = |g: &[f64], a: &[f64]| g.iter().zip(a).map(|(g, a)| g / a).fold(0.0, f64::max);
    Ok(vec![
        Check::at_most("apriori.homogeneity", structure.homogeneity_error, 1e-8),
        Check::at_most("apriori.ratio_spread", structure.ratio_spread, 1e-8),
        Check::at_most("apriori.sup_growth_over_t2", worst(&growth.sup_growth, &growth.sup_allowed), 1.2),
        Check::at_most("apriori.l2_growth_over_t3", worst(&growth.l2_growth, &growth.l2_allowed), 1.2),
    ])
}
