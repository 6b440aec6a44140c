//! Compressed radial coordinate map and the coefficients of the transformed
//! wave operator.
//!
//! The map `ζ` is the identity on `[0, a]` and sends the thin annulus
//! `a ≤ r ≤ b` onto the physical annulus `a ≤ ρ ≤ R` through the rational
//! function
//!
//! ```text
//! η(r) = ξ(r) / ((b - r)(R - b) + (b - a)²),   ξ(r) = a²(R - b) + r(a² + (b - 2a)R)
//! ```
//!
//! which satisfies `η(a) = a`, `η(b) = R`, `η'(a) = 1`. Pulling the Laplacian
//! back through `x ↦ ζ(|x|) x/|x|` gives `Δ_ρ u = β⁻¹ ∇·(M ∇v)`; this module
//! evaluates `β`, `M`, the divergence weight `K` and the local frame `Q` in two
//! and three dimensions.

mod pullback;

pub use pullback::{
    default_fd_step, fd_divergence_of_flux, verify_divergence_pullback_2d, verify_divergence_pullback_3d,
    verify_gradient_pullback_2d, verify_gradient_pullback_3d, verify_laplacian_pullback_2d,
    verify_laplacian_pullback_3d,
};

use crate::error::{Error, Result};
use crate::scalar::{identity, rotate_diag, Field, Mat, Real};

/// Radial compression parameters `0 < a < b ≤ R`.
///
/// `b == R` is accepted and yields the identity map on `[0, b]`, which is how
/// the uncompressed reference solve is expressed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMap<T> {
    a: T,
    b: T,
    big_r: T,
}

/// `ζ(r)` and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapValue<T> {
    pub zeta: T,
    pub zeta_prime: T,
    pub zeta_second: T,
}

impl<T: Field> RadialMap<T> {
    pub fn new(a: T, b: T, big_r: T) -> Result<Self> {
        if !(a > T::zero()) {
            return Err(Error::Config(format!("radial map requires a > 0, got a = {a:?}")));
        }
        if !(b > a) {
            return Err(Error::Config(format!("radial map requires b > a, got a = {a:?}, b = {b:?}")));
        }
        if !(big_r >= b) {
            return Err(Error::Config(format!("radial map requires R >= b, got b = {b:?}, R = {big_r:?}")));
        }
        Ok(Self { a, b, big_r })
    }

    /// Identity map on `[0, radius]`, with the kink radius placed at `a`.
    pub fn identity(a: T, radius: T) -> Result<Self> {
        Self::new(a, radius, radius)
    }

    pub fn inner_radius(&self) -> T {
        self.a
    }

    pub fn outer_radius(&self) -> T {
        self.b
    }

    pub fn truncation_radius(&self) -> T {
        self.big_r
    }

    pub fn is_identity(&self) -> bool {
        self.b == self.big_r
    }

    /// `(ζ(r), ζ'(r))` for `0 ≤ r ≤ b`.
    pub fn eval_map(&self, r: T) -> Result<(T, T)> {
        let v = self.eval(r)?;
        Ok((v.zeta, v.zeta_prime))
    }

    pub fn eval(&self, r: T) -> Result<MapValue<T>> {
        if r < T::zero() || r > self.b {
            return Err(Error::Domain(format!("radius {r:?} outside [0, {:?}]", self.b)));
        }
        if r <= self.a {
            return Ok(MapValue { zeta: r, zeta_prime: T::one(), zeta_second: T::zero() });
        }
        let (a, b, big_r) = (self.a, self.b, self.big_r);
        let gap = b - a;
        let den = (b - r) * (big_r - b) + gap * gap;
        let span = big_r - a;
        // ξ(r) - a·den(r) = (r - a)(b - a)(R - a), so this form is exact at r = a
        // and avoids the cancellation inside ξ when b < 2a.
        let zeta = a + (r - a) * gap * span / den;
        let num = span * span * gap * gap;
        let zeta_prime = num / (den * den);
        let zeta_second = T::two() * num * (big_r - b) / (den * den * den);
        Ok(MapValue { zeta, zeta_prime, zeta_second })
    }
}

/// Coefficients of the pulled-back operator at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedCoefficients<T, const D: usize> {
    /// Jacobian factor multiplying the time derivative term.
    pub beta: T,
    /// Symmetric positive definite diffusion tensor.
    pub m: Mat<T, D>,
    /// Divergence pullback weight.
    pub k: Mat<T, D>,
    /// Local orthonormal frame; columns are the radial and angular unit vectors.
    pub q: Mat<T, D>,
}

pub type Coefficients2<T> = TransformedCoefficients<T, 2>;
pub type Coefficients3<T> = TransformedCoefficients<T, 3>;

pub fn polar_frame<T: Real>(theta: T) -> Mat<T, 2> {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

/// Columns `e_ρ, e_θ, e_φ` for polar angle `theta` and azimuth `phi`.
pub fn spherical_frame<T: Real>(theta: T, phi: T) -> Mat<T, 3> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [[st * cp, ct * cp, -sp], [st * sp, ct * sp, cp], [ct, -st, T::zero()]]
}

impl<T: Real> RadialMap<T> {
    pub fn coefficients_2d(&self, r: T, theta: T) -> Result<Coefficients2<T>> {
        let q = polar_frame(theta);
        if r < T::zero() {
            return Err(Error::Domain(format!("negative radius {r:?}")));
        }
        let v = self.eval(r)?;
        if r <= self.a {
            return Ok(TransformedCoefficients { beta: T::one(), m: identity(), k: identity(), q });
        }
        let stretch = v.zeta / r;
        Ok(TransformedCoefficients {
            beta: stretch * v.zeta_prime,
            m: rotate_diag(&q, [stretch / v.zeta_prime, v.zeta_prime / stretch]),
            k: rotate_diag(&q, [stretch, v.zeta_prime]),
            q,
        })
    }

    /// Three-dimensional coefficients. The Jacobian factor is
    /// `β = ζ²ζ'/r²`, the determinant of the map's differential; the
    /// divergence and Laplacian pullback identities hold only with this
    /// factor.
    pub fn coefficients_3d(&self, r: T, theta: T, phi: T) -> Result<Coefficients3<T>> {
        if r < T::zero() {
            return Err(Error::Domain(format!("negative radius {r:?}")));
        }
        if theta < T::zero() || theta > T::lit(std::f64::consts::PI) {
            return Err(Error::Domain(format!("polar angle {theta:?} outside [0, π]")));
        }
        let q = spherical_frame(theta, phi);
        let v = self.eval(r)?;
        if r <= self.a {
            return Ok(TransformedCoefficients { beta: T::one(), m: identity(), k: identity(), q });
        }
        let stretch = v.zeta / r;
        let radial = stretch * stretch;
        let tangential = stretch * v.zeta_prime;
        Ok(TransformedCoefficients {
            beta: radial * v.zeta_prime,
            m: rotate_diag(&q, [radial / v.zeta_prime, v.zeta_prime, v.zeta_prime]),
            k: rotate_diag(&q, [radial, tangential, tangential]),
            q,
        })
    }

    /// Physical-gradient pullback `∇_ρ u = G ∇_r v` in two dimensions.
    pub fn gradient_pullback_2d(&self, r: T, theta: T) -> Result<Mat<T, 2>> {
        let v = self.eval(r)?;
        if r <= self.a {
            return Ok(identity());
        }
        Ok(rotate_diag(&polar_frame(theta), [T::one() / v.zeta_prime, r / v.zeta]))
    }

    pub fn gradient_pullback_3d(&self, r: T, theta: T, phi: T) -> Result<Mat<T, 3>> {
        let v = self.eval(r)?;
        if r <= self.a {
            return Ok(identity());
        }
        let t = r / v.zeta;
        Ok(rotate_diag(&spherical_frame(theta, phi), [T::one() / v.zeta_prime, t, t]))
    }

    /// Coefficients at a Cartesian point of the computational domain.
    pub fn coefficients_at_2d(&self, x: [T; 2]) -> Result<Coefficients2<T>> {
        let r = x[0].hypot(x[1]);
        self.coefficients_2d(r, x[1].atan2(x[0]))
    }

    pub fn coefficients_at_3d(&self, x: [T; 3]) -> Result<Coefficients3<T>> {
        let (r, theta, phi) = spherical_coordinates(x);
        self.coefficients_3d(r, theta, phi)
    }

    /// Physical position `ζ(|x|) x/|x|` of a computational point.
    pub fn map_point<const D: usize>(&self, x: [T; D]) -> Result<[T; D]> {
        let r = x.iter().fold(T::zero(), |s, &c| s + c * c).sqrt();
        let v = self.eval(r)?;
        if r <= self.a {
            return Ok(x);
        }
        let s = v.zeta / r;
        Ok(x.map(|c| c * s))
    }
}

pub(crate) fn spherical_coordinates<T: Real>(x: [T; 3]) -> (T, T, T) {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let theta = if r > T::zero() { (x[2] / r).max(-T::one()).min(T::one()).acos() } else { T::zero() };
    (r, theta, x[1].atan2(x[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn q(n: i128) -> Ratio<i128> {
        Ratio::from_integer(n)
    }

    fn reference() -> RadialMap<f64> {
        RadialMap::new(1.0, 2.0, 10.0).unwrap()
    }

    #[test]
    fn exact_values_on_rationals() {
        let map = RadialMap::new(q(1), q(2), q(10)).unwrap();
        assert_eq!(map.eval_map(q(1)).unwrap(), (q(1), q(1)));
        assert_eq!(map.eval_map(q(2)).unwrap(), (q(10), q(81)));
        let half = Ratio::new(1, 2);
        assert_eq!(map.eval_map(half).unwrap(), (half, q(1)));
        // η(r) = (8 + r)/(17 - 8r), η'(r) = 81/(17 - 8r)² at r = 3/2
        let r = Ratio::new(3, 2);
        assert_eq!(map.eval_map(r).unwrap(), (Ratio::new(19, 10), Ratio::new(81, 25)));
    }

    #[test]
    fn rejects_bad_parameters_and_radii() {
        assert!(RadialMap::new(0.0, 1.0, 2.0).is_err());
        assert!(RadialMap::new(1.0, 1.0, 2.0).is_err());
        assert!(RadialMap::new(1.0, 2.0, 1.5).is_err());
        let map = reference();
        assert!(matches!(map.eval_map(-0.1), Err(Error::Domain(_))));
        assert!(matches!(map.eval_map(2.0 + 1e-9), Err(Error::Domain(_))));
        assert!(map.coefficients_2d(-1.0, 0.0).is_err());
        assert!(map.coefficients_3d(1.5, 4.0, 0.0).is_err());
    }

    #[test]
    fn second_derivative_matches_difference_quotient() {
        let map = reference();
        for &r in &[1.1, 1.5, 1.9] {
            let h = 1e-5;
            let fd = (map.eval(r + h).unwrap().zeta_prime - map.eval(r - h).unwrap().zeta_prime) / (2.0 * h);
            let exact = map.eval(r).unwrap().zeta_second;
            assert!((fd - exact).abs() <= 1e-6 * exact.abs(), "{fd} vs {exact}");
        }
    }

    #[test]
    fn coefficients_2d_at_outer_radius() {
        let c = reference().coefficients_2d(2.0, 0.0).unwrap();
        assert!((c.beta - 405.0).abs() < 1e-10);
        assert!((c.m[0][0] - 5.0 / 81.0).abs() < 1e-14);
        assert!((c.m[1][1] - 81.0 / 5.0).abs() < 1e-12);
        assert!(c.m[0][1].abs() < 1e-14);
    }

    #[test]
    fn coefficients_3d_at_outer_radius() {
        // ζ = 10, ζ' = 81 at r = 2: β = ζ²ζ'/r² = 25·81
        let c = reference().coefficients_3d(2.0, 0.5, 0.3).unwrap();
        assert!((c.beta - 2025.0).abs() < 1e-9);
    }

    #[test]
    fn identity_region_is_exact() {
        let map = reference();
        for &r in &[0.0, 0.5, 1.0] {
            let c2 = map.coefficients_2d(r, 0.7).unwrap();
            assert_eq!(c2.beta, 1.0);
            assert_eq!(c2.m, identity());
            assert_eq!(c2.k, identity());
            let c3 = map.coefficients_3d(r, 0.7, 2.0).unwrap();
            assert_eq!(c3.beta, 1.0);
            assert_eq!(c3.m, identity());
            assert_eq!(c3.k, identity());
        }
    }

    #[test]
    fn axis_frame_is_orthonormal() {
        for &theta in &[0.0, std::f64::consts::PI] {
            let qm = reference().coefficients_3d(1.5, theta, 1.0).unwrap().q;
            for i in 0..3 {
                for j in 0..3 {
                    let dot: f64 = (0..3).map(|k| qm[k][i] * qm[k][j]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn identity_map_when_b_equals_r() {
        let map = RadialMap::<f64>::identity(1.0, 6.0).unwrap();
        assert!(map.is_identity());
        for &r in &[0.3, 1.0, 2.5, 6.0] {
            let (z, zp) = map.eval_map(r).unwrap();
            assert!((z - r).abs() < 1e-14 && (zp - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn single_precision_map() {
        let map = RadialMap::<f32>::new(1.0, 2.0, 10.0).unwrap();
        let (z, zp) = map.eval_map(2.0).unwrap();
        assert!((z - 10.0).abs() < 1e-5 && (zp - 81.0).abs() < 1e-3);
    }
}
