//! Finite-difference checks of the pullback identities for the gradient,
//! the divergence and the Laplacian.
//!
//! Each check evaluates the physical-side operator at `y = Φ(x)` and the
//! computational-side operator at `x` with central differences of step `h`,
//! and returns the largest discrepancy relative to the largest physical-side
//! value over all sample points. These are oracles for tests and the
//! `verify lemmas` suite, not part of the solver.

use super::{spherical_coordinates, RadialMap};
use crate::error::{Error, Result};
use crate::scalar::{mat_vec, Field, Mat, Real};

/// Step used when none is given: `1e-4 (b - a)`.
pub fn default_fd_step<T: Real>(map: &RadialMap<T>) -> T {
    T::lit(1e-4) * (map.outer_radius() - map.inner_radius())
}

fn unit<T: Field, const D: usize>(i: usize) -> [T; D] {
    let mut e = [T::zero(); D];
    e[i] = T::one();
    e
}

fn shift<T: Field, const D: usize>(x: [T; D], i: usize, s: T) -> [T; D] {
    let mut y = x;
    y[i] = y[i] + s * unit::<T, D>(i)[i];
    y
}

fn norm<T: Real, const D: usize>(x: &[T; D]) -> T {
    x.iter().fold(T::zero(), |s, &c| s + c * c).sqrt()
}

fn fd_gradient<T: Real, const D: usize>(f: &impl Fn([T; D]) -> Result<T>, x: [T; D], h: T) -> Result<[T; D]> {
    let mut g = [T::zero(); D];
    for (i, gi) in g.iter_mut().enumerate() {
        *gi = (f(shift(x, i, h))? - f(shift(x, i, -h))?) / (T::two() * h);
    }
    Ok(g)
}

fn fd_laplacian<T: Real, const D: usize>(f: &impl Fn([T; D]) -> T, y: [T; D], h: T) -> T {
    let centre = f(y);
    (0..D).fold(T::zero(), |s, i| s + (f(shift(y, i, h)) - T::two() * centre + f(shift(y, i, -h))) / (h * h))
}

fn fd_divergence<T: Real, const D: usize>(flux: &impl Fn([T; D]) -> Result<[T; D]>, x: [T; D], h: T) -> Result<T> {
    let mut s = T::zero();
    for i in 0..D {
        s = s + (flux(shift(x, i, h))?[i] - flux(shift(x, i, -h))?[i]) / (T::two() * h);
    }
    Ok(s)
}

/// `∇·(M ∇v)` at `x` by nested central differences, with `M` supplied by
/// `tensor`. Shared by the manufactured-solution residual checks.
pub fn fd_divergence_of_flux<T: Real, const D: usize>(
    tensor: &impl Fn([T; D]) -> Result<Mat<T, D>>,
    v: &impl Fn([T; D]) -> Result<T>,
    x: [T; D],
    h: T,
) -> Result<T> {
    let flux = |z: [T; D]| -> Result<[T; D]> {
        let g = fd_gradient(v, z, h)?;
        Ok(mat_vec(&tensor(z)?, &g))
    };
    fd_divergence(&flux, x, h)
}

fn check_points<T: Real, const D: usize>(map: &RadialMap<T>, points: &[[T; D]], h: T) -> Result<()> {
    if !(h > T::zero()) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {h:?}")));
    }
    let reach = T::two() * h * T::lit(D as f64).sqrt();
    for (i, x) in points.iter().enumerate() {
        let r = norm(x);
        if !(r > T::zero()) || r + reach > map.outer_radius() {
            return Err(Error::Domain(format!(
                "sample point {i} at radius {r:?} (stencil reach {reach:?}) is not inside (0, {:?})",
                map.outer_radius()
            )));
        }
    }
    Ok(())
}

fn relative(max_err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        max_err / scale
    } else {
        max_err
    }
}

fn reduce<T: Real>(pairs: impl Iterator<Item = Result<(T, T)>>) -> Result<T> {
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for pair in pairs {
        let (lhs, rhs) = pair?;
        let (lhs, rhs) = (lhs.to_f64().unwrap_or(f64::NAN), rhs.to_f64().unwrap_or(f64::NAN));
        err = err.max((lhs - rhs).abs());
        scale = scale.max(lhs.abs());
    }
    Ok(T::lit(relative(err, scale)))
}

fn laplacian_pullback<T: Real, const D: usize>(
    map: &RadialMap<T>,
    coeffs: impl Fn([T; D]) -> Result<(T, Mat<T, D>)>,
    field: &impl Fn([T; D]) -> T,
    points: &[[T; D]],
    h: T,
) -> Result<T> {
    check_points(map, points, h)?;
    let pulled = |z: [T; D]| -> Result<T> { Ok(field(map.map_point(z)?)) };
    let tensor = |z: [T; D]| -> Result<Mat<T, D>> { Ok(coeffs(z)?.1) };
    reduce(points.iter().map(|&x| {
        let lhs = fd_laplacian(field, map.map_point(x)?, h);
        let rhs = fd_divergence_of_flux(&tensor, &pulled, x, h)? / coeffs(x)?.0;
        Ok((lhs, rhs))
    }))
}

/// Checks `Δ_ρ u = β⁻¹ ∇·(M ∇v)` with `v = u ∘ Φ` at each sample point.
pub fn verify_laplacian_pullback_2d<T: Real>(
    map: &RadialMap<T>,
    field: impl Fn([T; 2]) -> T,
    points: &[[T; 2]],
    h: T,
) -> Result<T> {
    let coeffs = |z: [T; 2]| map.coefficients_at_2d(z).map(|c| (c.beta, c.m));
    laplacian_pullback(map, coeffs, &field, points, h)
}

/// Three-dimensional variant; callers should keep samples off the polar axis
/// because the spherical frame degenerates there.
pub fn verify_laplacian_pullback_3d<T: Real>(
    map: &RadialMap<T>,
    field: impl Fn([T; 3]) -> T,
    points: &[[T; 3]],
    h: T,
) -> Result<T> {
    let coeffs = |z: [T; 3]| map.coefficients_at_3d(z).map(|c| (c.beta, c.m));
    laplacian_pullback(map, coeffs, &field, points, h)
}

fn divergence_pullback<T: Real, const D: usize>(
    map: &RadialMap<T>,
    coeffs: impl Fn([T; D]) -> Result<(T, Mat<T, D>)>,
    field: &impl Fn([T; D]) -> [T; D],
    points: &[[T; D]],
    h: T,
) -> Result<T> {
    check_points(map, points, h)?;
    let physical = |y: [T; D]| -> Result<[T; D]> { Ok(field(y)) };
    let weighted = |z: [T; D]| -> Result<[T; D]> {
        let v = field(map.map_point(z)?);
        Ok(mat_vec(&coeffs(z)?.1, &v))
    };
    reduce(points.iter().map(|&x| {
        let lhs = fd_divergence(&physical, map.map_point(x)?, h)?;
        let rhs = fd_divergence(&weighted, x, h)? / coeffs(x)?.0;
        Ok((lhs, rhs))
    }))
}

/// Checks `∇_ρ·u = β⁻¹ ∇·(K v)` for a vector field given in Cartesian
/// components.
pub fn verify_divergence_pullback_2d<T: Real>(
    map: &RadialMap<T>,
    field: impl Fn([T; 2]) -> [T; 2],
    points: &[[T; 2]],
    h: T,
) -> Result<T> {
    let coeffs = |z: [T; 2]| map.coefficients_at_2d(z).map(|c| (c.beta, c.k));
    divergence_pullback(map, coeffs, &field, points, h)
}

pub fn verify_divergence_pullback_3d<T: Real>(
    map: &RadialMap<T>,
    field: impl Fn([T; 3]) -> [T; 3],
    points: &[[T; 3]],
    h: T,
) -> Result<T> {
    let coeffs = |z: [T; 3]| map.coefficients_at_3d(z).map(|c| (c.beta, c.k));
    divergence_pullback(map, coeffs, &field, points, h)
}

fn gradient_pullback<T: Real, const D: usize>(
    map: &RadialMap<T>,
    pullback: impl Fn([T; D]) -> Result<Mat<T, D>>,
    field: &impl Fn([T; D]) -> T,
    points: &[[T; D]],
    h: T,
) -> Result<T> {
    check_points(map, points, h)?;
    let physical = |y: [T; D]| -> Result<T> { Ok(field(y)) };
    let pulled = |z: [T; D]| -> Result<T> { Ok(field(map.map_point(z)?)) };
    let mut pairs = Vec::with_capacity(points.len() * D);
    for &x in points {
        let lhs = fd_gradient(&physical, map.map_point(x)?, h)?;
        let rhs = mat_vec(&pullback(x)?, &fd_gradient(&pulled, x, h)?);
        pairs.extend((0..D).map(|i| Ok((lhs[i], rhs[i]))));
    }
    reduce(pairs.into_iter())
}

/// Checks `∇_ρ u = G ∇_r v` with `G = Q diag(1/ζ', r/ζ) Qᵀ`.
pub fn verify_gradient_pullback_2d<T: Real>(
    map: &RadialMap<T>,
    field: impl Fn([T; 2]) -> T,
    points: &[[T; 2]],
    h: T,
) -> Result<T> {
    let g = |z: [T; 2]| map.gradient_pullback_2d(z[0].hypot(z[1]), z[1].atan2(z[0]));
    gradient_pullback(map, g, &field, points, h)
}

pub fn verify_gradient_pullback_3d<T: Real>(
    map: &RadialMap<T>,
    field: impl Fn([T; 3]) -> T,
    points: &[[T; 3]],
    h: T,
) -> Result<T> {
    let g = |z: [T; 3]| {
        let (r, theta, phi) = spherical_coordinates(z);
        map.gradient_pullback_3d(r, theta, phi)
    };
    gradient_pullback(map, g, &field, points, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map() -> RadialMap<f64> {
        RadialMap::new(1.0, 2.0, 10.0).unwrap()
    }

    fn ring(n: usize, r0: f64, r1: f64) -> Vec<[f64; 2]> {
        (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                let r = r0 + (r1 - r0) * t;
                let th = 2.399963 * i as f64;
                [r * th.cos(), r * th.sin()]
            })
            .collect()
    }

    #[test]
    fn radius_squared_in_2d() {
        let m = map();
        let pts = ring(20, 1.1, 1.9);
        let err = verify_laplacian_pullback_2d(&m, |y| y[0] * y[0] + y[1] * y[1], &pts, 1e-4).unwrap();
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn constant_field_is_exact() {
        let m = map();
        let pts = ring(10, 1.1, 1.9);
        let err = verify_laplacian_pullback_2d(&m, |_| 3.5, &pts, 1e-4).unwrap();
        assert_eq!(err, 0.0);
    }

    #[test]
    fn second_order_refinement() {
        let m = map();
        let pts = ring(20, 1.1, 1.9);
        let f = |y: [f64; 2]| (0.3 * y[0]).sin() * (0.2 * y[1]).cos() + 0.05 * (y[0] * y[0] + y[1] * y[1]);
        let e1 = verify_laplacian_pullback_2d(&m, f, &pts, 0.02).unwrap();
        let e2 = verify_laplacian_pullback_2d(&m, f, &pts, 0.01).unwrap();
        let order = (e1 / e2).log2();
        assert!(order > 1.9, "order {order} ({e1}, {e2})");
    }

    #[test]
    fn gradient_and_divergence_pullbacks() {
        let m = map();
        let pts = ring(20, 1.1, 1.9);
        let g = verify_gradient_pullback_2d(&m, |y| y[0] * y[1] + y[0], &pts, 1e-4).unwrap();
        assert!(g < 1e-6, "{g}");
        let d = verify_divergence_pullback_2d(&m, |y| [y[0] * y[1], y[1] * y[1] - y[0]], &pts, 1e-4).unwrap();
        assert!(d < 1e-5, "{d}");
    }

    #[test]
    fn three_dimensional_identities() {
        let m = map();
        let pts: Vec<[f64; 3]> = (0..20)
            .map(|i| {
                let r = 1.1 + 0.04 * i as f64;
                let th = 0.3 + 0.12 * i as f64;
                let ph = 0.7 * i as f64;
                [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()]
            })
            .collect();
        let lap = verify_laplacian_pullback_3d(&m, |y| y[0] * y[0] + y[1] * y[1] + y[2] * y[2], &pts, 1e-4).unwrap();
        assert!(lap < 1e-5, "{lap}");
        let div = verify_divergence_pullback_3d(&m, |y| [y[0] * y[2], y[1], y[2] * y[2]], &pts, 1e-4).unwrap();
        assert!(div < 1e-5, "{div}");
        let grad = verify_gradient_pullback_3d(&m, |y| y[0] * y[1] * y[2], &pts, 1e-4).unwrap();
        assert!(grad < 1e-6, "{grad}");
    }

    #[test]
    fn point_outside_domain_is_rejected() {
        let m = map();
        let err = verify_laplacian_pullback_2d(&m, |y| y[0], &[[1.99995, 0.0]], 1e-4);
        assert!(matches!(err, Err(Error::Domain(_))));
        let err = verify_laplacian_pullback_2d(&m, |y| y[0], &[[0.0, 0.0]], 1e-4);
        assert!(matches!(err, Err(Error::Domain(_))));
    }
}
