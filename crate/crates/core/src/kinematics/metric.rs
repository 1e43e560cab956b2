use nalgebra::Matrix4;

use super::vector::{FourVector, Variance};
use super::velocity::FourVelocity;

/// `g_{μν}(u)` together with its inverse `g^{μν}(u)`.
///
/// ```text
///          ⎡ 1        u⁰ uᵀ              ⎤          ⎡ (u⁰)²   u⁰ uᵀ ⎤
/// g_{μν} = ⎣ u⁰ u    −I + (u⁰)² u ⊗ uᵀ   ⎦  g^{μν} = ⎣ u⁰ u    −I    ⎦
/// ```
///
/// `det g = −1` for every `u`, so the Levi-Civita symbol needs no density factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricTensor {
    lower: Matrix4<f64>,
    upper: Matrix4<f64>,
}

pub fn metric_of(u: &FourVelocity) -> MetricTensor {
    MetricTensor::new(u)
}

impl MetricTensor {
    pub fn new(u: &FourVelocity) -> Self {
        let u0 = u.u0();
        let s = u.spatial();
        let mut lower = Matrix4::zeros();
        let mut upper = Matrix4::zeros();
        lower[(0, 0)] = 1.0;
        upper[(0, 0)] = u0 * u0;
        for i in 0..3 {
            lower[(0, i + 1)] = u0 * s[i];
            lower[(i + 1, 0)] = u0 * s[i];
            upper[(0, i + 1)] = u0 * s[i];
            upper[(i + 1, 0)] = u0 * s[i];
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                lower[(i + 1, j + 1)] = -delta + u0 * u0 * s[i] * s[j];
                upper[(i + 1, j + 1)] = -delta;
            }
        }
        Self { lower, upper }
    }

    pub fn minkowski() -> Self {
        Self::new(&FourVelocity::preferred())
    }

    /// `g_{μν}`.
    pub fn lower_matrix(&self) -> &Matrix4<f64> {
        &self.lower
    }

    /// `g^{μν}`.
    pub fn upper_matrix(&self) -> &Matrix4<f64> {
        &self.upper
    }

    /// `g_{μν} a^μ b^ν` for contravariant inputs.
    pub fn dot(&self, a: &FourVector, b: &FourVector) -> f64 {
        debug_assert!(a.is_contravariant() && b.is_contravariant());
        (a.components.transpose() * self.lower * b.components)[0]
    }

    /// Invariant interval `ds² = g_{μν} dx^μ dx^ν`.
    pub fn interval(&self, dx: &FourVector) -> f64 {
        self.dot(dx, dx)
    }

    pub fn lower(&self, v: &FourVector) -> FourVector {
        match v.variance {
            Variance::Covariant => *v,
            Variance::Contravariant => FourVector {
                components: self.lower * v.components,
                variance: Variance::Covariant,
            },
        }
    }

    pub fn raise(&self, v: &FourVector) -> FourVector {
        match v.variance {
            Variance::Contravariant => *v,
            Variance::Covariant => FourVector {
                components: self.upper * v.components,
                variance: Variance::Contravariant,
            },
        }
    }
}
