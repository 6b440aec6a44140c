//! Flat `key = value` scenario files with dotted section prefixes.
//!
//! ```text
//! # comment
//! geometry.a = 1.0
//! scenario.direction = 1 0
//! observers.probes = -0.7 0, -0.85 0
//! ```

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use acoustoelastic::oracle::CaseId;
use acoustoelastic::scenario::{Bump, Formulation, IncidentWave};
use acoustoelastic::{Error, MaterialParams, Result};

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed but untyped configuration. Every typed read marks its key as
/// used so that leftovers can be reported.
#[derive(Debug, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
    used: RefCell<BTreeSet<String>>,
}

fn config_error(key: &str, message: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key}: {message}"))
}

fn detail(e: Error) -> String {
    match e {
        Error::Config(m) | Error::Domain(m) => m,
        other => other.to_string(),
    }
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected 'key = value', got '{line}'", i + 1)));
            };
            let key = key.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(Error::Config(format!("line {}: invalid key '{key}'", i + 1)));
            }
            let entry = Entry { value: value.trim().to_string(), line: i + 1 };
            if let Some(prev) = entries.insert(key.to_string(), entry) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key '{key}' (first set on line {})",
                    i + 1,
                    prev.line
                )));
            }
        }
        Ok(RawConfig { entries, used: RefCell::default() })
    }

    fn get(&self, key: &str) -> Option<&str> {
        let entry = self.entries.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some(entry.value.as_str())
    }

    fn number(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.get(key) {
            Some(v) => {
                let x: f64 = v.parse().map_err(|_| config_error(key, format!("expected a number, got '{v}'")))?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(config_error(key, "must be finite"))
                }
            }
            None => default.ok_or_else(|| config_error(key, "missing")),
        }
    }

    fn positive(&self, key: &str, default: Option<f64>) -> Result<f64> {
        let x = self.number(key, default)?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(config_error(key, format!("must be positive, got {x}")))
        }
    }

    fn count(&self, key: &str, default: Option<usize>) -> Result<usize> {
        match self.get(key) {
            Some(v) => v.parse().map_err(|_| config_error(key, format!("expected a non-negative integer, got '{v}'"))),
            None => default.ok_or_else(|| config_error(key, "missing")),
        }
    }

    fn text(&self, key: &str, default: Option<&str>) -> Result<String> {
        self.get(key).or(default).map(str::to_string).ok_or_else(|| config_error(key, "missing"))
    }

    fn numbers(&self, key: &str, value: &str) -> Result<Vec<f64>> {
        value
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| config_error(key, format!("expected numbers, got '{t}'"))))
            .collect()
    }

    fn point(&self, key: &str, value: &str) -> Result<[f64; 2]> {
        match self.numbers(key, value)?.as_slice() {
            &[x, y] => Ok([x, y]),
            _ => Err(config_error(key, format!("expected two coordinates, got '{value}'"))),
        }
    }

    /// `bump cx cy radius amplitude`
    fn bump(&self, key: &str) -> Result<Option<Bump>> {
        let Some(v) = self.get(key) else {
            return Ok(None);
        };
        let rest = v
            .strip_prefix("bump")
            .ok_or_else(|| config_error(key, format!("expected 'bump cx cy radius amplitude', got '{v}'")))?;
        match self.numbers(key, rest)?.as_slice() {
            &[cx, cy, r, amp] => Bump::new([cx, cy], r, amp).map(Some).map_err(|e| config_error(key, detail(e))),
            _ => Err(config_error(key, "expected 'bump cx cy radius amplitude'")),
        }
    }

    fn unused(&self) -> Vec<(String, usize)> {
        let used = self.used.borrow();
        self.entries.iter().filter(|(k, _)| !used.contains(*k)).map(|(k, e)| (k.clone(), e.line)).collect()
    }
}

#[derive(Debug, Clone)]
pub enum MeshSource {
    Generated { n_radial: usize, n_angular: usize },
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub enum ScenarioKind {
    Incident {
        wave: IncidentWave,
        formulation: Formulation,
    },
    Manufactured {
        case: CaseId,
        omega: f64,
    },
    /// Source `f(x) ϑ(t / duration)`, initial pressure `g`, initial rate `h`.
    Raw {
        f: Option<(Bump, f64)>,
        g: Option<Bump>,
        h: Option<Bump>,
    },
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub inclusion_radius: f64,
    pub a: f64,
    pub b: f64,
    pub big_r: f64,
    pub mesh: MeshSource,
    pub params: MaterialParams,
    pub final_time: f64,
    /// `None` picks `0.2 h_min / c`.
    pub dt: Option<f64>,
    pub scenario: ScenarioKind,
    pub energy_stride: usize,
    pub probe_stride: usize,
    pub probes: Vec<[f64; 2]>,
    /// 0 disables snapshots.
    pub snapshot_stride: usize,
    pub output_dir: PathBuf,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_text(&text, base)
    }

    /// A relative mesh path resolves against `base`; the output directory is
    /// taken as given.
    pub fn from_text(text: &str, base: &Path) -> Result<Self> {
        let raw = RawConfig::parse(text)?;
        let inclusion_radius = raw.positive("geometry.inclusion_radius", Some(0.5))?;
        let a = raw.positive("geometry.a", None)?;
        let b = raw.positive("geometry.b", None)?;
        let big_r = raw.positive("geometry.R", None)?;
        if !(a > inclusion_radius) {
            return Err(config_error(
                "geometry.a",
                format!("must exceed geometry.inclusion_radius ({a} <= {inclusion_radius})"),
            ));
        }
        if !(b > a) {
            return Err(config_error("geometry.b", format!("must exceed geometry.a ({b} <= {a})")));
        }
        if !(big_r >= b) {
            return Err(config_error("geometry.R", format!("must be at least geometry.b ({big_r} < {b})")));
        }
        let mesh = match raw.get("geometry.mesh") {
            Some(file) => MeshSource::File(base.join(file)),
            None => {
                let n_radial = raw.count("geometry.n_radial", Some(24))?;
                let n_angular = raw.count("geometry.n_angular", Some(96))?;
                if n_radial < 2 {
                    return Err(config_error("geometry.n_radial", "must be at least 2"));
                }
                if n_angular < 6 {
                    return Err(config_error("geometry.n_angular", "must be at least 6"));
                }
                MeshSource::Generated { n_radial, n_angular }
            }
        };

        let params = MaterialParams::new(
            raw.positive("materials.c", None)?,
            raw.positive("materials.rho_fluid", None)?,
            raw.positive("materials.rho_solid", None)?,
            raw.positive("materials.mu", None)?,
            raw.number("materials.lambda", None)?,
        )
        .map_err(|e| config_error("materials", detail(e)))?;

        let final_time = raw.positive("time.T", None)?;
        let dt = match raw.text("time.dt", Some("auto"))?.as_str() {
            "auto" => None,
            _ => Some(raw.positive("time.dt", None)?),
        };

        let kind = raw.text("scenario.kind", None)?;
        let scenario = match kind.as_str() {
            "incident" => {
                let dir_text = raw.text("scenario.direction", None)?;
                let dir = raw.point("scenario.direction", &dir_text)?;
                let norm = dir[0].hypot(dir[1]);
                if !(norm > 0.0) {
                    return Err(config_error("scenario.direction", "must be a nonzero vector"));
                }
                let wave = IncidentWave::new(
                    [dir[0] / norm, dir[1] / norm],
                    raw.number("scenario.amplitude", Some(1.0))?,
                    raw.positive("scenario.width", None)?,
                    raw.number("scenario.delay", None)?,
                    params.sound_speed(),
                )
                .map_err(|e| config_error("scenario", detail(e)))?;
                let formulation = raw
                    .text("scenario.formulation", Some("scattered"))?
                    .parse()
                    .map_err(|e| config_error("scenario.formulation", detail(e)))?;
                ScenarioKind::Incident { wave, formulation }
            }
            "manufactured" => ScenarioKind::Manufactured {
                case: raw.text("scenario.case", None)?.parse().map_err(|e| config_error("scenario.case", detail(e)))?,
                omega: raw.positive("scenario.omega", Some(PI))?,
            },
            "raw" => {
                let f = match raw.bump("scenario.f")? {
                    Some(bump) => Some((bump, raw.positive("scenario.f_duration", Some(1.0))?)),
                    None => None,
                };
                ScenarioKind::Raw { f, g: raw.bump("scenario.g")?, h: raw.bump("scenario.h")? }
            }
            other => {
                return Err(config_error(
                    "scenario.kind",
                    format!("expected incident, manufactured or raw, got '{other}'"),
                ))
            }
        };

        let energy_stride = raw.count("observers.energy_stride", Some(1))?.max(1);
        let probe_stride = raw.count("observers.probe_stride", Some(1))?.max(1);
        let probes = match raw.get("observers.probes") {
            Some(list) if !list.is_empty() => {
                list.split(',').map(|p| raw.point("observers.probes", p)).collect::<Result<Vec<_>>>()?
            }
            _ => Vec::new(),
        };
        let snapshot_stride = raw.count("observers.snapshot_stride", Some(0))?;
        let output_dir = PathBuf::from(raw.text("output.dir", Some("out"))?);

        if let Some((key, line)) = raw.unused().into_iter().next() {
            return Err(Error::Config(format!(
                "line {line}: unknown or inapplicable key '{key}' for scenario.kind = {kind}"
            )));
        }

        Ok(ScenarioConfig {
            inclusion_radius,
            a,
            b,
            big_r,
            mesh,
            params,
            final_time,
            dt,
            scenario,
            energy_stride,
            probe_stride,
            probes,
            snapshot_stride,
            output_dir,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
geometry.a = 1
geometry.b = 2
geometry.R = 6
materials.c = 1
materials.rho_fluid = 1
materials.rho_solid = 2
materials.mu = 1
materials.lambda = 1
time.T = 1
";

    fn with(extra: &str) -> Result<ScenarioConfig> {
        ScenarioConfig::from_text(&format!("{MINIMAL}{extra}"), Path::new("/tmp"))
    }

    #[test]
    fn raw_scenario_with_defaults() {
        let cfg = with("scenario.kind = raw\nscenario.g = bump 0.8 0 0.2 1 # pulse\n").unwrap();
        assert!(matches!(cfg.mesh, MeshSource::Generated { n_radial: 24, n_angular: 96 }));
        assert!(cfg.dt.is_none());
        assert_eq!(cfg.output_dir, Path::new("out"));
        match cfg.scenario {
            ScenarioKind::Raw { f: None, g: Some(_), h: None } => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn direction_is_normalized() {
        let cfg =
            with("scenario.kind = incident\nscenario.direction = 3 4\nscenario.width = 0.5\nscenario.delay = 1\n")
                .unwrap();
        let ScenarioKind::Incident { wave, formulation } = cfg.scenario else { panic!() };
        assert_eq!(formulation, Formulation::ScatteredField);
        let d = wave.direction();
        assert!((d[0] - 0.6).abs() < 1e-15 && (d[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn probes_list() {
        let cfg = with("scenario.kind = raw\nobservers.probes = -0.7 0, 0 0.75\n").unwrap();
        assert_eq!(cfg.probes, vec![[-0.7, 0.0], [0.0, 0.75]]);
    }

    #[test]
    fn ordering_violation_names_the_key() {
        let text = MINIMAL.replace("geometry.b = 2", "geometry.b = 0.9") + "scenario.kind = raw\n";
        let err = ScenarioConfig::from_text(&text, Path::new(".")).unwrap_err().to_string();
        assert!(err.contains("geometry.b"), "{err}");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(RawConfig::parse("no equals sign").is_err());
        assert!(RawConfig::parse("a = 1\na = 2").is_err());
        assert!(with("scenario.kind = raw\ntime.dt = fast\n").is_err());
        assert!(with("scenario.kind = raw\nscenario.case = dipole\n").is_err());
        assert!(with("scenario.kind = sideways\n").is_err());
        assert!(with("scenario.kind = incident\nscenario.direction = 0 0\nscenario.width = 1\nscenario.delay = 1\n")
            .is_err());
    }
}
