//! Excitations: user-supplied source and initial data, or an incident
//! plane pulse.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// `s⁴(1-s)⁴` on `[0, 1]`, zero elsewhere. Three times continuously
/// differentiable.
pub fn pulse(s: f64) -> f64 {
    if (0.0..=1.0).contains(&s) {
        (s * (1.0 - s)).powi(4)
    } else {
        0.0
    }
}

pub fn pulse_derivative(s: f64) -> f64 {
    if (0.0..=1.0).contains(&s) {
        let q = s * (1.0 - s);
        4.0 * q.powi(3) * (1.0 - 2.0 * s)
    } else {
        0.0
    }
}

pub fn pulse_second_derivative(s: f64) -> f64 {
    if (0.0..=1.0).contains(&s) {
        let q = s * (1.0 - s);
        let dq = 1.0 - 2.0 * s;
        12.0 * q * q * dq * dq - 8.0 * q.powi(3)
    } else {
        0.0
    }
}

/// Plane pulse `amplitude · ϑ((c t - θ·x - delay) / width)` travelling in
/// direction `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave {
    direction: [f64; 2],
    amplitude: f64,
    width: f64,
    delay: f64,
    speed: f64,
}

impl IncidentWave {
    /// `direction` must already be a unit vector.
    pub fn new(direction: [f64; 2], amplitude: f64, width: f64, delay: f64, speed: f64) -> Result<Self> {
        let norm = direction[0].hypot(direction[1]);
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::Config(format!("incident direction must be a unit vector, |θ| = {norm}")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::Config(format!("pulse width must be positive, got {width}")));
        }
        if !(speed > 0.0) {
            return Err(Error::Config(format!("wave speed must be positive, got {speed}")));
        }
        if !amplitude.is_finite() || !delay.is_finite() {
            return Err(Error::Config("pulse amplitude and delay must be finite".into()));
        }
        Ok(IncidentWave { direction, amplitude, width, delay, speed })
    }

    pub fn direction(&self) -> [f64; 2] {
        self.direction
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Same pulse with the amplitude multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        IncidentWave { amplitude: self.amplitude * s, ..*self }
    }

    fn phase(&self, x: [f64; 2], t: f64) -> f64 {
        (self.speed * t - self.direction[0] * x[0] - self.direction[1] * x[1] - self.delay) / self.width
    }

    pub fn value(&self, x: [f64; 2], t: f64) -> f64 {
        self.amplitude * pulse(self.phase(x, t))
    }

    pub fn time_derivative(&self, x: [f64; 2], t: f64) -> f64 {
        self.amplitude * self.speed / self.width * pulse_derivative(self.phase(x, t))
    }

    pub fn second_time_derivative(&self, x: [f64; 2], t: f64) -> f64 {
        let k = self.speed / self.width;
        self.amplitude * k * k * pulse_second_derivative(self.phase(x, t))
    }

    pub fn gradient(&self, x: [f64; 2], t: f64) -> [f64; 2] {
        let d = -self.amplitude / self.width * pulse_derivative(self.phase(x, t));
        [d * self.direction[0], d * self.direction[1]]
    }

    /// Time at which the pulse support reaches `x`.
    pub fn front_time(&self, x: [f64; 2]) -> f64 {
        (self.direction[0] * x[0] + self.direction[1] * x[1] + self.delay) / self.speed
    }

    /// Time at which the pulse support has passed `x`.
    pub fn tail_time(&self, x: [f64; 2]) -> f64 {
        self.front_time(x) + self.width / self.speed
    }
}

/// How the incident pulse enters the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Unknown is the scattered pressure; the incident traces force the
    /// interface and the outer circle is homogeneous.
    ScatteredField,
    /// Unknown is the total pressure; the incident field is prescribed on
    /// the outer circle, pulled back through the radial map.
    TotalField,
}

impl std::str::FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scattered" => Ok(Formulation::ScatteredField),
            "total" => Ok(Formulation::TotalField),
            other => Err(Error::Config(format!("unknown formulation `{other}` (expected scattered or total)"))),
        }
    }
}

/// Smooth bump `amplitude · (1 - |x - centre|²/radius²)⁴` inside the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: [f64; 2],
    pub radius: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(center: [f64; 2], radius: f64, amplitude: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Config(format!("bump radius must be positive, got {radius}")));
        }
        Ok(Bump { center, radius, amplitude })
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        let d2 = ((x[0] - self.center[0]).powi(2) + (x[1] - self.center[1]).powi(2)) / (self.radius * self.radius);
        if d2 < 1.0 {
            self.amplitude * (1.0 - d2).powi(4)
        } else {
            0.0
        }
    }
}

pub type SpaceFn = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;
pub type SourceFn = Arc<dyn Fn([f64; 2], f64) -> f64 + Send + Sync>;

/// Volume source `f`, initial pressure `g` and initial rate `h`; the outer
/// circle is homogeneous. Missing entries are zero.
#[derive(Clone, Default)]
pub struct RawData {
    pub source: Option<SourceFn>,
    pub initial_pressure: Option<SpaceFn>,
    pub initial_rate: Option<SpaceFn>,
}

impl fmt::Debug for RawData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RawData")
            .field("source", &self.source.is_some())
            .field("initial_pressure", &self.initial_pressure.is_some())
            .field("initial_rate", &self.initial_rate.is_some())
            .finish()
    }
}

impl RawData {
    pub fn zero() -> Self {
        RawData::default()
    }

    pub fn with_source(mut self, f: impl Fn([f64; 2], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Some(Arc::new(f));
        self
    }

    pub fn with_initial_pressure(mut self, g: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        self.initial_pressure = Some(Arc::new(g));
        self
    }

    pub fn with_initial_rate(mut self, h: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        self.initial_rate = Some(Arc::new(h));
        self
    }

    /// Every datum multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        RawData {
            source: self.source.clone().map(|f| Arc::new(move |x, t| s * f(x, t)) as SourceFn),
            initial_pressure: self.initial_pressure.clone().map(|g| Arc::new(move |x| s * g(x)) as SpaceFn),
            initial_rate: self.initial_rate.clone().map(|h| Arc::new(move |x| s * h(x)) as SpaceFn),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Scenario {
    Raw(RawData),
    Incident { wave: IncidentWave, formulation: Formulation },
}

impl Scenario {
    pub fn zero() -> Self {
        Scenario::Raw(RawData::zero())
    }

    pub fn scaled(&self, s: f64) -> Self {
        match self {
            Scenario::Raw(d) => Scenario::Raw(d.scaled(s)),
            Scenario::Incident { wave, formulation } => {
                Scenario::Incident { wave: wave.scaled(s), formulation: *formulation }
            }
        }
    }
}
