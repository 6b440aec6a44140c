//! Manufactured pressures `p = sin(ωt) P(r) cos(kθ)` with the matching
//! volume source for the compressed wave equation.
//!
//! The catalog profiles vanish on the outer circle. Except for `bubble`,
//! they also vanish together with their normal derivative on the
//! inclusion boundary, so the exact displacement is zero and the coupled
//! interface conditions hold exactly.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::radial_map::{fd_divergence_of_flux, RadialMap};
use crate::scalar::{Mat, Real};
use crate::scenario::{RawData, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    /// `p ≡ 0`
    Zero,
    /// `P = b² - r²`; not compatible with the interface conditions.
    Bubble,
    /// `P = (r² - r_D²)² (b² - r²)`, `k = 0`
    Radial,
    /// Same profile with `k = 1`.
    Dipole,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::Zero, CaseId::Bubble, CaseId::Radial, CaseId::Dipole];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Zero => "zero",
            CaseId::Bubble => "bubble",
            CaseId::Radial => "radial",
            CaseId::Dipole => "dipole",
        }
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            Error::Config(format!("unknown manufactured case `{s}` (expected zero, bubble, radial or dipole)"))
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ManufacturedCase<T> {
    pub id: CaseId,
    map: RadialMap<T>,
    speed: T,
    inclusion_radius: T,
    omega: T,
}

impl<T: Real> ManufacturedCase<T> {
    pub fn new(id: CaseId, map: RadialMap<T>, speed: T, inclusion_radius: T, omega: T) -> Result<Self> {
        if !(speed > T::zero()) {
            return Err(Error::Config("wave speed must be positive".into()));
        }
        if !(inclusion_radius > T::zero() && inclusion_radius < map.inner_radius()) {
            return Err(Error::Config("inclusion radius must lie in (0, a)".into()));
        }
        Ok(ManufacturedCase { id, map, speed, inclusion_radius, omega })
    }

    pub fn map(&self) -> &RadialMap<T> {
        &self.map
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    fn mode(&self) -> i32 {
        match self.id {
            CaseId::Dipole => 1,
            _ => 0,
        }
    }

    /// `(P, P', P'')` at radius `r`.
    fn profile(&self, r: T) -> (T, T, T) {
        let b = self.map.outer_radius();
        let two = T::two();
        match self.id {
            CaseId::Zero => (T::zero(), T::zero(), T::zero()),
            CaseId::Bubble => (b * b - r * r, -two * r, -two),
            CaseId::Radial | CaseId::Dipole => {
                let rd = self.inclusion_radius;
                let q = r * r - rd * rd;
                let s = b * b - r * r;
                let four = T::lit(4.0);
                let eight = T::lit(8.0);
                let p = q * q * s;
                let dp = four * r * q * s - two * r * q * q;
                let ddp = four * q * s + eight * r * r * s - T::lit(16.0) * r * r * q - two * q * q;
                (p, dp, ddp)
            }
        }
    }

    /// `cos(kθ)` at `x`, written without the angle for `k = 1`.
    fn angular(&self, x: [T; 2]) -> T {
        match self.mode() {
            0 => T::one(),
            _ => x[0] / x[0].hypot(x[1]),
        }
    }

    pub fn pressure(&self, x: [T; 2], t: T) -> T {
        let (p, _, _) = self.profile(x[0].hypot(x[1]));
        (self.omega * t).sin() * p * self.angular(x)
    }

    pub fn pressure_rate(&self, x: [T; 2], t: T) -> T {
        let (p, _, _) = self.profile(x[0].hypot(x[1]));
        self.omega * (self.omega * t).cos() * p * self.angular(x)
    }

    /// The exact displacement is zero for every catalog entry.
    pub fn displacement(&self, _x: [T; 2], _t: T) -> [T; 2] {
        [T::zero(); 2]
    }

    pub fn initial_pressure(&self, x: [T; 2]) -> T {
        self.pressure(x, T::zero())
    }

    pub fn initial_rate(&self, x: [T; 2]) -> T {
        self.pressure_rate(x, T::zero())
    }

    /// Spatial part of `∇·(M ∇p)` divided by `sin(ωt)`, from the polar form
    /// `r⁻¹ ((ζ/ζ') P')' - k² ζ' P / (r ζ)` times `cos(kθ)`.
    fn operator_profile(&self, x: [T; 2]) -> Result<T> {
        let r = x[0].hypot(x[1]);
        let v = self.map.eval(r)?;
        let (p, dp, ddp) = self.profile(r);
        let flux_slope = T::one() - v.zeta * v.zeta_second / (v.zeta_prime * v.zeta_prime);
        let k2 = T::lit(f64::from(self.mode() * self.mode()));
        let radial = (flux_slope * dp + v.zeta / v.zeta_prime * ddp) / r;
        Ok((radial - k2 * v.zeta_prime * p / (r * v.zeta)) * self.angular(x))
    }

    /// `f = (β/c²) ∂_t² p - ∇·(M ∇p)`
    pub fn source(&self, x: [T; 2], t: T) -> Result<T> {
        let beta = self.map.coefficients_at_2d(x)?.beta;
        let (p, _, _) = self.profile(x[0].hypot(x[1]));
        let s = (self.omega * t).sin();
        let ptt = -self.omega * self.omega * s * p * self.angular(x);
        Ok(beta / (self.speed * self.speed) * ptt - s * self.operator_profile(x)?)
    }

    /// Largest `|(β/c²) p_tt - ∇·(M∇p) - f|` over `points`, with the
    /// divergence taken by nested central differences of step `h`,
    /// relative to the largest `|f|`.
    pub fn residual(&self, points: &[[T; 2]], t: T, h: T) -> Result<T> {
        let tensor = |z: [T; 2]| -> Result<Mat<T, 2>> { Ok(self.map.coefficients_at_2d(z)?.m) };
        let field = |z: [T; 2]| -> Result<T> { Ok(self.pressure(z, t)) };
        let (mut err, mut scale) = (T::zero(), T::zero());
        for &x in points {
            let beta = self.map.coefficients_at_2d(x)?.beta;
            let ptt = -self.omega * self.omega * self.pressure(x, t);
            let div = fd_divergence_of_flux(&tensor, &field, x, h)?;
            let f = self.source(x, t)?;
            err = err.max((beta / (self.speed * self.speed) * ptt - div - f).abs());
            scale = scale.max(f.abs());
        }
        Ok(if scale > T::zero() { err / scale } else { err })
    }
}

impl ManufacturedCase<f64> {
    /// Source and initial data as a raw-data scenario.
    pub fn to_scenario(&self) -> Scenario {
        let (c1, c2, c3) = (*self, *self, *self);
        Scenario::Raw(
            RawData::zero()
                .with_source(move |x, t| c1.source(x, t).unwrap_or(f64::NAN))
                .with_initial_pressure(move |x| c2.initial_pressure(x))
                .with_initial_rate(move |x| c3.initial_rate(x)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(id: CaseId) -> ManufacturedCase<f64> {
        ManufacturedCase::new(id, RadialMap::new(1.0, 2.0, 6.0).unwrap(), 1.0, 0.5, std::f64::consts::PI).unwrap()
    }

    #[test]
    fn zero_case_has_zero_data() {
        let c = case(CaseId::Zero);
        for x in [[0.7, 0.2], [1.5, -0.4]] {
            assert_eq!(c.source(x, 0.3).unwrap(), 0.0);
            assert_eq!(c.initial_pressure(x), 0.0);
            assert_eq!(c.initial_rate(x), 0.0);
        }
    }

    #[test]
    fn bubble_source_in_identity_region() {
        let c = case(CaseId::Bubble);
        let w = std::f64::consts::PI;
        for (x, t) in [([0.6, 0.3], 0.4), ([-0.2, 0.9], 1.3)] {
            let r2: f64 = x[0] * x[0] + x[1] * x[1];
            let expect = (-w * w * (4.0 - r2) + 4.0) * (w * t).sin();
            assert!((c.source(x, t).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn unknown_catalog_id() {
        assert!(matches!("tripole".parse::<CaseId>(), Err(Error::Config(_))));
        assert_eq!("dipole".parse::<CaseId>().unwrap(), CaseId::Dipole);
    }

    #[test]
    fn profiles_vanish_with_slope_on_inclusion() {
        let c = case(CaseId::Dipole);
        let (p, dp, _) = c.profile(0.5);
        assert_eq!((p, dp), (0.0, 0.0));
        assert_eq!(c.profile(2.0).0, 0.0);
    }
}
