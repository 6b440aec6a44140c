//! Quadrature rules on the reference triangle and on intervals.

use crate::scalar::Real;

/// A rule on a triangle in barycentric coordinates. Weights sum to one, so
/// an integral is `area * Σ w_q f(x_q)`.
#[derive(Debug, Clone)]
pub struct TriangleRule<T> {
    pub points: Vec<[T; 3]>,
    pub weights: Vec<T>,
}

impl<T: Real> TriangleRule<T> {
    /// Three interior points, exact for quadratics.
    pub fn degree2() -> Self {
        let (p, q) = (T::lit(2.0 / 3.0), T::lit(1.0 / 6.0));
        let w = T::lit(1.0 / 3.0);
        TriangleRule { points: vec![[p, q, q], [q, p, q], [q, q, p]], weights: vec![w, w, w] }
    }

    /// Seven-point rule exact for quintics.
    pub fn degree5() -> Self {
        let third = T::lit(1.0 / 3.0);
        let (a1, b1) = (T::lit(0.059_715_871_789_770), T::lit(0.470_142_064_105_115));
        let (a2, b2) = (T::lit(0.797_426_985_353_087), T::lit(0.101_286_507_323_456));
        let (w1, w2) = (T::lit(0.132_394_152_788_506), T::lit(0.125_939_180_544_827));
        TriangleRule {
            points: vec![
                [third, third, third],
                [a1, b1, b1],
                [b1, a1, b1],
                [b1, b1, a1],
                [a2, b2, b2],
                [b2, a2, b2],
                [b2, b2, a2],
            ],
            weights: vec![T::lit(0.225), w1, w1, w1, w2, w2, w2],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Physical points for the triangle with the given corners.
    pub fn map_points(&self, corners: &[[T; 2]; 3]) -> impl Iterator<Item = [T; 2]> + '_ {
        let corners = *corners;
        self.points.iter().map(move |l| {
            let mut x = [T::zero(); 2];
            for (k, c) in corners.iter().enumerate() {
                x[0] = x[0] + l[k] * c[0];
                x[1] = x[1] + l[k] * c[1];
            }
            x
        })
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let pi = T::from_f64(std::f64::consts::PI).unwrap();
    let nf = T::lit(n as f64);
    for i in 0..n.div_ceil(2) {
        let mut x = (pi * (T::lit(i as f64) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = T::two() / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))`
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = T::lit(k as f64);
        let p2 = ((T::two() * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::lit(n as f64);
    (p1, nf * (x * p1 - p0) / (x * x - T::one()))
}

/// Gauss–Legendre rule mapped to `[lo, hi]`.
pub fn gauss_legendre_on<T: Real>(n: usize, lo: T, hi: T) -> Vec<(T, T)> {
    let (x, w) = gauss_legendre::<T>(n);
    let half = (hi - lo) / T::two();
    let mid = (hi + lo) / T::two();
    x.into_iter().zip(w).map(|(x, w)| (mid + half * x, half * w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monomial_exact(p: i32, q: i32) -> f64 {
        // ∫ x^p y^q over the unit right triangle = p! q! / (p + q + 2)!
        let f = |n: i32| (1..=n).map(f64::from).product::<f64>();
        f(p) * f(q) / f(p + q + 2)
    }

    fn integrate(rule: &TriangleRule<f64>, p: i32, q: i32) -> f64 {
        let corners = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        rule.map_points(&corners).zip(&rule.weights).map(|(x, w)| w * 0.5 * x[0].powi(p) * x[1].powi(q)).sum()
    }

    #[test]
    fn triangle_rules_integrate_their_degree_exactly() {
        for (rule, deg) in [(TriangleRule::degree2(), 2), (TriangleRule::degree5(), 5)] {
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-14);
            for p in 0..=deg {
                for q in 0..=(deg - p) {
                    let err = (integrate(&rule, p, q) - monomial_exact(p, q)).abs();
                    assert!(err < 1e-14, "degree {deg}: x^{p} y^{q} off by {err}");
                }
            }
        }
        let rule = TriangleRule::<f64>::degree2();
        assert!((integrate(&rule, 3, 0) - monomial_exact(3, 0)).abs() > 1e-6);
    }

    #[test]
    fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
        for n in 1..=8 {
            let (x, w) = gauss_legendre::<f64>(n);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn five_point_nodes_in_single_precision() {
        let (x, _) = gauss_legendre::<f32>(5);
        assert!((x[4] - 0.906_179_85).abs() < 1e-6);
        assert_eq!(x[2], 0.0);
    }
}
