//! Local P1 element matrices on a single triangle.

use crate::quadrature::TriangleRule;
use crate::scalar::Mat;

/// Area and constant gradients of the three barycentric hat functions.
pub(crate) fn p1_gradients(p: &[[f64; 2]; 3]) -> (f64, [[f64; 2]; 3]) {
    let two_area = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let g = [
        [(p[1][1] - p[2][1]) / two_area, (p[2][0] - p[1][0]) / two_area],
        [(p[2][1] - p[0][1]) / two_area, (p[0][0] - p[2][0]) / two_area],
        [(p[0][1] - p[1][1]) / two_area, (p[1][0] - p[0][0]) / two_area],
    ];
    (0.5 * two_area, g)
}

/// Consistent mass `area/12 · (1 + δ_ij)`.
pub(crate) fn mass(area: f64) -> [[f64; 3]; 3] {
    let mut m = [[area / 12.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = area / 6.0;
    }
    m
}

pub(crate) fn stiffness(area: f64, g: &[[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
        }
    }
    k
}

/// `∫ w φ_i φ_j` with `w` sampled at the rule's points.
pub(crate) fn weighted_mass(area: f64, rule: &TriangleRule<f64>, weight: &[f64]) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for ((l, wq), w) in rule.points.iter().zip(&rule.weights).zip(weight) {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += area * wq * w * l[i] * l[j];
            }
        }
    }
    m
}

/// `∫ (T ∇φ_j)·∇φ_i` with the tensor `T` sampled at the rule's points.
pub(crate) fn weighted_stiffness(
    area: f64,
    g: &[[f64; 2]; 3],
    rule: &TriangleRule<f64>,
    tensor: &[Mat<f64, 2>],
) -> [[f64; 3]; 3] {
    let mut avg = [[0.0; 2]; 2];
    for (wq, t) in rule.weights.iter().zip(tensor) {
        for r in 0..2 {
            for c in 0..2 {
                avg[r][c] += wq * t[r][c];
            }
        }
    }
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let tg = [avg[0][0] * g[j][0] + avg[0][1] * g[j][1], avg[1][0] * g[j][0] + avg[1][1] * g[j][1]];
            k[i][j] = area * (g[i][0] * tg[0] + g[i][1] * tg[1]);
        }
    }
    k
}

/// `∫ ∂_c φ_i ∂_d φ_j`, the local divergence pairing for vector P1 fields.
pub(crate) fn divergence_pairing(area: f64, g: &[[f64; 2]; 3]) -> [[[[f64; 2]; 2]; 3]; 3] {
    let mut k = [[[[0.0; 2]; 2]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for c in 0..2 {
                for d in 0..2 {
                    k[i][j][c][d] = area * g[i][c] * g[j][d];
                }
            }
        }
    }
    k
}

/// `∫_e φ_i φ_j ds` on a straight edge of the given length.
pub(crate) fn edge_mass(length: f64) -> [[f64; 2]; 2] {
    [[length / 3.0, length / 6.0], [length / 6.0, length / 3.0]]
}
