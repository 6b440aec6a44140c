//! Average-acceleration Newmark integration of `A U'' + B U = F(t)`.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::MatMut;

use crate::assembly::AssembledSystem;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Displacement/pressure values `u` with first and second time
/// derivatives `v`, `w` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub t: f64,
}

impl StateVector {
    pub fn zeros(n: usize) -> Self {
        StateVector { u: vec![0.0; n], v: vec![0.0; n], w: vec![0.0; n], t: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Largest magnitude over all three vectors.
    pub fn max_abs(&self) -> f64 {
        self.u.iter().chain(&self.v).chain(&self.w).fold(0.0, |m, x| m.max(x.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, n_steps: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        if n_steps == 0 {
            return Err(Error::Config("at least one time step is required".into()));
        }
        Ok(TimeGrid { dt, n_steps })
    }

    /// Smallest number of equal steps no longer than `max_dt` that ends
    /// exactly at `final_time`.
    pub fn covering(final_time: f64, max_dt: f64) -> Result<Self> {
        if !(final_time > 0.0 && final_time.is_finite()) {
            return Err(Error::Config(format!("final time must be positive, got {final_time}")));
        }
        if !(max_dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {max_dt}")));
        }
        let n = (final_time / max_dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        TimeGrid::new(final_time / n as f64, n)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn final_time(&self) -> f64 {
        self.dt * self.n_steps as f64
    }

    pub fn time(&self, step: usize) -> f64 {
        self.dt * step as f64
    }
}

/// Right-hand side `F(t)` of the semi-discrete system.
pub trait Load {
    /// Overwrites `out` with `F(t)`.
    fn load_at(&self, t: f64, out: &mut [f64]) -> Result<()>;
}

impl<F: Fn(f64, &mut [f64]) -> Result<()>> Load for F {
    fn load_at(&self, t: f64, out: &mut [f64]) -> Result<()> {
        self(t, out)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroLoad;

impl Load for ZeroLoad {
    fn load_at(&self, _t: f64, out: &mut [f64]) -> Result<()> {
        out.fill(0.0);
        Ok(())
    }
}

/// Receives the state at step 0 and every `stride()` steps afterwards.
pub trait Observer {
    fn stride(&self) -> usize {
        1
    }

    fn observe(&mut self, step: usize, state: &StateVector) -> Result<()>;

    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

fn factor(m: &CsrMatrix, what: &str) -> Result<Lu<usize, f64>> {
    let lu = m.to_faer()?.sp_lu().map_err(|e| Error::Solver(format!("{what} is singular: {e}")))?;
    // Numeric breakdown shows up as non-finite entries rather than as an error.
    let mut probe: Vec<f64> = (0..m.nrows()).map(|i| 1.0 + (i % 7) as f64).collect();
    solve_in_place(&lu, &mut probe);
    if probe.iter().any(|x| !x.is_finite()) {
        return Err(Error::Solver(format!("{what} is numerically singular (zero pivot)")));
    }
    Ok(lu)
}

fn solve_in_place(lu: &Lu<usize, f64>, x: &mut [f64]) {
    let n = x.len();
    lu.solve_in_place(MatMut::from_column_major_slice_mut(x, n, 1));
}

/// Newmark scheme with `β = 1/4`, `γ = 1/2`. The effective matrix
/// `A + dt²/4 B` is factorized once.
pub struct Newmark<'a> {
    a: &'a CsrMatrix,
    b: &'a CsrMatrix,
    dt: f64,
    effective: Lu<usize, f64>,
}

impl<'a> Newmark<'a> {
    pub fn new(a: &'a CsrMatrix, b: &'a CsrMatrix, dt: f64) -> Result<Self> {
        if a.nrows() != a.ncols() || b.nrows() != b.ncols() || a.nrows() != b.nrows() {
            return Err(Error::Solver("A and B must be square and of equal size".into()));
        }
        if !(dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        let s = CsrMatrix::linear_combination(1.0, a, 0.25 * dt * dt, b);
        let effective = factor(&s, "effective matrix A + dt²/4 B")?;
        Ok(Newmark { a, b, dt, effective })
    }

    pub fn for_system(sys: &'a AssembledSystem, dt: f64) -> Result<Self> {
        Newmark::new(&sys.a, &sys.b, dt)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Completes `(u0, v0)` at time `t0` with the acceleration solving
    /// `A W = F(t0) - B u0`.
    pub fn initial_state(&self, u0: Vec<f64>, v0: Vec<f64>, t0: f64, load: &dyn Load) -> Result<StateVector> {
        let n = self.a.nrows();
        if u0.len() != n || v0.len() != n {
            return Err(Error::Solver(format!("initial data has length {}/{}, expected {n}", u0.len(), v0.len())));
        }
        let mut w = vec![0.0; n];
        load.load_at(t0, &mut w)?;
        self.b.mul_vec_add(-1.0, &u0, &mut w);
        if w.iter().any(|x| *x != 0.0) {
            let mass = factor(self.a, "mass matrix A")?;
            solve_in_place(&mass, &mut w);
        }
        Ok(StateVector { u: u0, v: v0, w, t: t0 })
    }

    /// One step from `state.t` to `state.t + dt`.
    pub fn step(&self, state: &mut StateVector, load: &dyn Load) -> Result<()> {
        let dt = self.dt;
        let q = 0.25 * dt * dt;
        let n = state.u.len();
        let predictor: Vec<f64> = (0..n).map(|i| state.u[i] + dt * state.v[i] + q * state.w[i]).collect();
        let t_new = state.t + dt;
        let mut w_new = vec![0.0; n];
        load.load_at(t_new, &mut w_new)?;
        self.b.mul_vec_add(-1.0, &predictor, &mut w_new);
        solve_in_place(&self.effective, &mut w_new);
        if w_new.iter().any(|x| !x.is_finite()) {
            return Err(Error::Solver(format!("non-finite acceleration at t = {t_new}")));
        }
        for i in 0..n {
            state.u[i] = predictor[i] + q * w_new[i];
            state.v[i] += 0.5 * dt * (state.w[i] + w_new[i]);
        }
        state.w = w_new;
        state.t = t_new;
        Ok(())
    }

    /// Advances `grid.n_steps()` steps, calling each observer at step 0 and
    /// at multiples of its stride.
    pub fn run(
        &self,
        mut state: StateVector,
        grid: &TimeGrid,
        load: &dyn Load,
        observers: &mut [&mut dyn Observer],
    ) -> Result<StateVector> {
        if (grid.dt() - self.dt).abs() > 1e-14 * self.dt {
            return Err(Error::Config(format!(
                "time grid step {} differs from the factorized step {}",
                grid.dt(),
                self.dt
            )));
        }
        let t0 = state.t;
        notify(observers, 0, &state)?;
        for step in 1..=grid.n_steps() {
            self.step(&mut state, load)?;
            // Keep the clock on the grid instead of accumulating rounding.
            state.t = t0 + grid.time(step);
            notify(observers, step, &state)?;
        }
        for obs in observers.iter_mut() {
            obs.finish()?;
        }
        Ok(state)
    }
}

fn notify(observers: &mut [&mut dyn Observer], step: usize, state: &StateVector) -> Result<()> {
    for obs in observers.iter_mut() {
        if step.is_multiple_of(obs.stride().max(1)) {
            obs.observe(step, state)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::TripletBuilder;

    fn scalar(x: f64) -> CsrMatrix {
        let mut b = TripletBuilder::new(1, 1);
        b.add(0, 0, x);
        b.build()
    }

    fn oscillator_error(omega: f64, dt: f64, steps: usize) -> (f64, f64) {
        let (a, b) = (scalar(1.0), scalar(omega * omega));
        let nm = Newmark::new(&a, &b, dt).unwrap();
        let mut s = nm.initial_state(vec![1.0], vec![0.0], 0.0, &ZeroLoad).unwrap();
        assert!((s.w[0] + omega * omega).abs() < 1e-14);
        // The average-acceleration amplification matrix is a rotation by
        // 2 atan(ω dt / 2) per step.
        let phase = 2.0 * (0.5 * omega * dt).atan();
        let (mut vs_closed, mut vs_exact) = (0.0f64, 0.0f64);
        for n in 1..=steps {
            nm.step(&mut s, &ZeroLoad).unwrap();
            vs_closed = vs_closed.max((s.u[0] - (phase * n as f64).cos()).abs());
            vs_exact = vs_exact.max((s.u[0] - (omega * dt * n as f64).cos()).abs());
        }
        (vs_closed, vs_exact)
    }

    #[test]
    fn scalar_oscillator_matches_closed_form() {
        let (closed, exact) = oscillator_error(2.0, 0.05, 100);
        assert!(closed < 1e-12, "{closed}");
        // 100 steps at ω dt = 0.1 lag by 100 (0.1 - 2 atan 0.05) ≈ 8.3e-3 rad.
        let lag = (1..=100)
            .map(|n| ((2.0 * 0.05f64.atan() * n as f64).cos() - (0.1 * n as f64).cos()).abs())
            .fold(0.0, f64::max);
        assert!((exact - lag).abs() < 1e-12 && exact > 6e-3, "{exact} vs {lag}");
    }

    #[test]
    fn scalar_oscillator_phase_error_is_second_order() {
        let (_, coarse) = oscillator_error(1.0, 0.1, 100);
        let (_, fine) = oscillator_error(1.0, 0.05, 200);
        let order = (coarse / fine).log2();
        assert!((order - 2.0).abs() < 0.05, "{order}");
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let (a, b) = (scalar(2.0), scalar(3.0));
        let nm = Newmark::new(&a, &b, 0.01).unwrap();
        let mut s = nm.initial_state(vec![0.0], vec![0.0], 0.0, &ZeroLoad).unwrap();
        for _ in 0..50 {
            nm.step(&mut s, &ZeroLoad).unwrap();
        }
        assert_eq!(s.max_abs(), 0.0);
    }

    #[test]
    fn singular_effective_matrix_is_reported() {
        let (a, b) = (scalar(0.0), scalar(0.0));
        assert!(matches!(Newmark::new(&a, &b, 0.1), Err(Error::Solver(_))));
    }

    #[test]
    fn grid_covering() {
        let g = TimeGrid::covering(1.0, 0.3).unwrap();
        assert_eq!(g.n_steps(), 4);
        assert!((g.final_time() - 1.0).abs() < 1e-15);
        assert_eq!(TimeGrid::covering(1.0, 0.25).unwrap().n_steps(), 4);
        assert!(TimeGrid::new(0.0, 3).is_err());
        assert!(TimeGrid::new(0.1, 0).is_err());
    }
}
