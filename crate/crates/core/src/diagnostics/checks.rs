use super::energy::EnergyTrace;
use crate::error::{Error, Result};
use crate::field::{trapezoid, ProbeSeries};
use crate::scenario::IncidentWave;

/// Largest `|E(t) - E(0) - W(t)|` relative to `max(E(0), max_t E)`, where
/// `W` is the accumulated source work sampled on the trace's grid. Returns 0
/// when the energy is identically zero.
pub fn check_energy_identity(trace: &EnergyTrace, work_times: &[f64], work: &[f64]) -> Result<f64> {
    if trace.samples.len() != work_times.len() || work.len() != work_times.len() {
        return Err(Error::Diagnostic(format!(
            "energy trace has {} samples but the work series has {}/{}",
            trace.samples.len(),
            work_times.len(),
            work.len()
        )));
    }
    for (s, &t) in trace.samples.iter().zip(work_times) {
        if (s.t - t).abs() > 1e-12 * t.abs().max(1.0) {
            return Err(Error::Diagnostic(format!("sample times differ: {} vs {t}", s.t)));
        }
    }
    let Some(first) = trace.samples.first() else {
        return Ok(0.0);
    };
    let e0 = first.energy.total;
    let scale = trace.samples.iter().fold(e0, |m, s| m.max(s.energy.total));
    let drift = trace.samples.iter().zip(work).fold(0.0f64, |m, (s, w)| m.max((s.energy.total - e0 - w).abs()));
    Ok(if scale > 0.0 { drift / scale } else { drift })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpeedViolation {
    pub probe: usize,
    pub time: f64,
    pub value: f64,
    pub arrival: f64,
}

/// Flags probe samples with `|p| > threshold · peak` taken before
/// `(1 - margin) · arrival(x)`. `peak` is the largest magnitude recorded
/// by any probe. Probes must lie in `|x| ≤ identity_radius`.
pub fn check_finite_speed(
    series: &ProbeSeries,
    arrival: impl Fn([f64; 2]) -> f64,
    identity_radius: f64,
    threshold: f64,
    margin: f64,
) -> Result<Vec<FiniteSpeedViolation>> {
    for (k, x) in series.positions.iter().enumerate() {
        let r = x[0].hypot(x[1]);
        if r > identity_radius * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "probe {k} at radius {r} lies outside the identity region r <= {identity_radius}"
            )));
        }
    }
    let bound = threshold * series.peak();
    let mut out = Vec::new();
    for (k, (x, values)) in series.positions.iter().zip(&series.values).enumerate() {
        let t_arr = arrival(*x);
        for (&t, &v) in series.times.iter().zip(values) {
            if t < (1.0 - margin) * t_arr && v.abs() > bound {
                out.push(FiniteSpeedViolation { probe: k, time: t, value: v, arrival: t_arr });
            }
        }
    }
    Ok(out)
}

/// Earliest time a scattered signal can reach `x`: the pulse front touches
/// a source point `y` on the scatterer, then travels `|x - y|` at speed `c`.
pub fn scattered_front_time(wave: &IncidentWave, scatterer: &[[f64; 2]], x: [f64; 2]) -> f64 {
    scatterer
        .iter()
        .map(|&y| wave.front_time(y) + (x[0] - y[0]).hypot(x[1] - y[1]) / wave.speed())
        .fold(f64::INFINITY, f64::min)
}

/// Data norms entering the bound: `‖g‖`, `‖h‖` over the fluid and
/// `‖f‖_{L¹(0,T; L²)}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DataNorms {
    pub g: f64,
    pub h: f64,
    pub f: f64,
}

/// Both sides of the a priori bounds for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundQuantities {
    pub final_time: f64,
    /// `sup_t` of each squared norm, in [`super::FieldNorms::as_array`] order.
    pub sup_norms: [f64; 5],
    /// `∫₀ᵀ` of each squared norm.
    pub l2_norms: [f64; 5],
    pub data: DataNorms,
}

impl BoundQuantities {
    pub fn from_trace(trace: &EnergyTrace, data: DataNorms) -> Result<Self> {
        if trace.samples.len() < 2 {
            return Err(Error::Diagnostic("trace needs at least two samples".into()));
        }
        let times = trace.times();
        let mut sup_norms = [0.0; 5];
        let mut l2_norms = [0.0; 5];
        for k in 0..5 {
            let sq: Vec<f64> = trace.samples.iter().map(|s| s.norms.as_array()[k].powi(2)).collect();
            sup_norms[k] = sq.iter().fold(0.0f64, |m, v| m.max(*v));
            l2_norms[k] = trapezoid(&times, &sq);
        }
        Ok(BoundQuantities { final_time: *times.last().unwrap() - times[0], sup_norms, l2_norms, data })
    }

    pub fn lhs_sup(&self) -> f64 {
        self.sup_norms.iter().sum()
    }

    pub fn lhs_l2(&self) -> f64 {
        self.l2_norms.iter().sum()
    }

    /// `‖g‖² + T²‖f‖² + T²‖h‖²`
    pub fn rhs_sup(&self) -> f64 {
        let (d, t) = (&self.data, self.final_time);
        d.g * d.g + t * t * (d.f * d.f + d.h * d.h)
    }

    /// `T‖g‖² + T³‖f‖² + T³‖h‖²`
    pub fn rhs_l2(&self) -> f64 {
        let (d, t) = (&self.data, self.final_time);
        t * d.g * d.g + t.powi(3) * (d.f * d.f + d.h * d.h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AprioriReport {
    /// Largest relative deviation of any left-side norm from linear scaling.
    pub homogeneity_error: f64,
    /// Largest relative deviation of the bound ratios from the first run's.
    pub ratio_spread: f64,
    pub ratios_sup: Vec<f64>,
    pub ratios_l2: Vec<f64>,
}

/// Runs with data scaled by `alphas[i]` and a common final time.
pub fn check_apriori_structure(runs: &[BoundQuantities], alphas: &[f64]) -> Result<AprioriReport> {
    if runs.len() < 3 {
        return Err(Error::Diagnostic(format!("need at least 3 scaled runs, got {}", runs.len())));
    }
    if alphas.len() != runs.len() {
        return Err(Error::Diagnostic("one scale factor per run is required".into()));
    }
    let base = &runs[0];
    let rel = |got: f64, want: f64| if want != 0.0 { (got - want).abs() / want.abs() } else { got.abs() };
    let mut homogeneity_error = 0.0f64;
    for (run, &alpha) in runs.iter().zip(alphas).skip(1) {
        let s = alpha / alphas[0];
        for k in 0..5 {
            homogeneity_error = homogeneity_error
                .max(rel(run.sup_norms[k].sqrt(), s * base.sup_norms[k].sqrt()))
                .max(rel(run.l2_norms[k].sqrt(), s * base.l2_norms[k].sqrt()));
        }
    }
    let ratios_sup: Vec<f64> = runs.iter().map(|r| r.lhs_sup() / r.rhs_sup()).collect();
    let ratios_l2: Vec<f64> = runs.iter().map(|r| r.lhs_l2() / r.rhs_l2()).collect();
    let ratio_spread = ratios_sup
        .iter()
        .map(|r| rel(*r, ratios_sup[0]))
        .chain(ratios_l2.iter().map(|r| rel(*r, ratios_l2[0])))
        .fold(0.0, f64::max);
    Ok(AprioriReport { homogeneity_error, ratio_spread, ratios_sup, ratios_l2 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrowthReport {
    /// `lhs_sup(T_{i+1}) / lhs_sup(T_i)` for consecutive runs.
    pub sup_growth: Vec<f64>,
    pub l2_growth: Vec<f64>,
    /// Growth allowed by the bound's powers of `T` for each step.
    pub sup_allowed: Vec<f64>,
    pub l2_allowed: Vec<f64>,
}

impl TimeGrowthReport {
    /// Whether every observed growth stays within `(1 + slack)` times the
    /// allowed one.
    pub fn within(&self, slack: f64) -> bool {
        let ok = |g: &[f64], a: &[f64]| g.iter().zip(a).all(|(g, a)| *g <= a * (1.0 + slack));
        ok(&self.sup_growth, &self.sup_allowed) && ok(&self.l2_growth, &self.l2_allowed)
    }
}

/// Runs with fixed data and increasing final times.
pub fn check_time_growth(runs: &[BoundQuantities]) -> Result<TimeGrowthReport> {
    if runs.len() < 2 {
        return Err(Error::Diagnostic("need at least two final times".into()));
    }
    let mut report =
        TimeGrowthReport { sup_growth: vec![], l2_growth: vec![], sup_allowed: vec![], l2_allowed: vec![] };
    for pair in runs.windows(2) {
        let ratio = pair[1].final_time / pair[0].final_time;
        if !(ratio > 1.0) {
            return Err(Error::Diagnostic("final times must increase".into()));
        }
        report.sup_growth.push(pair[1].lhs_sup() / pair[0].lhs_sup());
        report.l2_growth.push(pair[1].lhs_l2() / pair[0].lhs_l2());
        report.sup_allowed.push(ratio * ratio);
        report.l2_allowed.push(ratio.powi(3));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{Energy, EnergySample, FieldNorms};

    fn trace(values: &[(f64, f64)]) -> EnergyTrace {
        EnergyTrace {
            samples: values
                .iter()
                .map(|&(t, e)| EnergySample {
                    t,
                    energy: Energy { total: e, acoustic: e, ..Default::default() },
                    norms: FieldNorms { p: e.sqrt(), ..Default::default() },
                })
                .collect(),
        }
    }

    #[test]
    fn energy_identity_drift() {
        let tr = trace(&[(0.0, 1.0), (0.1, 1.5), (0.2, 2.0)]);
        let drift = check_energy_identity(&tr, &[0.0, 0.1, 0.2], &[0.0, 0.5, 0.9]).unwrap();
        assert!((drift - 0.05).abs() < 1e-15);
        let zero = trace(&[(0.0, 0.0), (0.1, 0.0)]);
        assert_eq!(check_energy_identity(&zero, &[0.0, 0.1], &[0.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(check_energy_identity(&tr, &[0.0, 0.1], &[0.0, 0.0]), Err(Error::Diagnostic(_))));
        assert!(check_energy_identity(&tr, &[0.0, 0.1, 0.3], &[0.0; 3]).is_err());
    }

    #[test]
    fn violations_shrink_as_threshold_grows() {
        let mut s = ProbeSeries::new(vec![[0.5, 0.0]]);
        for (i, v) in [0.0, 1e-9, 1e-7, 1e-4, 1.0].iter().enumerate() {
            s.push(i as f64, &[*v]);
        }
        let count = |th| check_finite_speed(&s, |_| 10.0, 1.0, th, 0.1).unwrap().len();
        assert_eq!(count(1e-10), 4);
        assert_eq!(count(1e-6), 2);
        assert!(count(1e-8) >= count(1e-6) && count(1e-6) >= count(1e-3));
        assert!(matches!(check_finite_speed(&s, |_| 1.0, 0.4, 1e-6, 0.1), Err(Error::Config(_))));
    }

    #[test]
    fn apriori_needs_three_runs() {
        let q = BoundQuantities::from_trace(&trace(&[(0.0, 1.0), (1.0, 1.0)]), DataNorms { g: 1.0, h: 0.0, f: 0.0 })
            .unwrap();
        assert!(matches!(check_apriori_structure(&[q.clone(), q.clone()], &[1.0, 2.0]), Err(Error::Diagnostic(_))));
        assert_eq!(q.lhs_sup(), 1.0);
        assert_eq!(q.rhs_l2(), 1.0);
    }
}
