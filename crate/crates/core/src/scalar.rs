//! Scalar abstractions shared by the geometric kernels.
//!
//! The radial map only needs field arithmetic, so it also runs on exact
//! rationals. Anything that touches angles, square roots or quadrature needs
//! [`Real`].

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num};

/// Ordered field arithmetic: `f32`, `f64`, and `num_rational::Ratio<_>`.
pub trait Field: Num + Copy + PartialOrd + Debug {
    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl<T: Num + Copy + PartialOrd + Debug> Field for T {}

/// Floating point scalar: f32 or f64.
pub trait Real: Field + Float + FromPrimitive + Send + Sync + 'static {
    /// Converts an `f64` literal. Panics only if the target cannot represent
    /// finite doubles, which never happens for `f32`/`f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in target float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) type Mat<T, const D: usize> = [[T; D]; D];

pub(crate) fn identity<T: Field, const D: usize>() -> Mat<T, D> {
    let mut out = [[T::zero(); D]; D];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = T::one();
    }
    out
}

/// `q · diag(d) · qᵀ`, exactly symmetric.
pub(crate) fn rotate_diag<T: Field, const D: usize>(q: &Mat<T, D>, d: [T; D]) -> Mat<T, D> {
    let mut out = [[T::zero(); D]; D];
    for i in 0..D {
        for j in i..D {
            let mut s = T::zero();
            for k in 0..D {
                s = s + q[i][k] * d[k] * q[j][k];
            }
            out[i][j] = s;
            out[j][i] = s;
        }
    }
    out
}

pub(crate) fn mat_vec<T: Field, const D: usize>(m: &Mat<T, D>, v: &[T; D]) -> [T; D] {
    let mut out = [T::zero(); D];
    for i in 0..D {
        let mut s = T::zero();
        for k in 0..D {
            s = s + m[i][k] * v[k];
        }
        out[i] = s;
    }
    out
}
