use nalgebra::{Matrix4, Vector4};

use super::tensor::FieldTensor;
use crate::error::{Error, Result};
use crate::kinematics::{FourVector, FourVelocity};

/// Contravariant potential `A^ν` at a point, optionally with its gradient
/// `gradient[(μ, ν)] = ∂_μ A^ν` (derivative index covariant).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourPotential {
    pub value: Vector4<f64>,
    pub gradient: Option<Matrix4<f64>>,
}

impl FourPotential {
    pub fn new(value: Vector4<f64>, gradient: Matrix4<f64>) -> Self {
        Self {
            value,
            gradient: Some(gradient),
        }
    }

    pub fn value_only(value: Vector4<f64>) -> Self {
        Self { value, gradient: None }
    }

    pub fn zero() -> Self {
        Self::new(Vector4::zeros(), Matrix4::zeros())
    }
}

/// Potential known throughout spacetime.
pub trait PotentialField: Sync {
    fn potential_at(&self, x: &FourVector) -> FourPotential;
}

/// Wraps a value-only closure and supplies its gradient by fourth-order
/// central differences with step `h`.
pub struct NumericGradient<F> {
    f: F,
    h: f64,
}

impl<F> NumericGradient<F>
where
    F: Fn(&FourVector) -> Vector4<f64> + Sync,
{
    pub fn new(f: F, h: f64) -> Self {
        Self { f, h }
    }

    /// Step of `1e-4` characteristic wavelengths.
    pub fn for_wavelength(f: F, wavelength: f64) -> Self {
        Self::new(f, 1e-4 * wavelength)
    }
}

impl<F> PotentialField for NumericGradient<F>
where
    F: Fn(&FourVector) -> Vector4<f64> + Sync,
{
    fn potential_at(&self, x: &FourVector) -> FourPotential {
        let mut grad = Matrix4::zeros();
        for mu in 0..4 {
            let shifted = |s: f64| {
                let mut y = *x;
                y.components[mu] += s * self.h;
                (self.f)(&y)
            };
            let d = (shifted(-2.0) - shifted(2.0) + (shifted(1.0) - shifted(-1.0)) * 8.0) / (12.0 * self.h);
            for nu in 0..4 {
                grad[(mu, nu)] = d[nu];
            }
        }
        FourPotential::new((self.f)(x), grad)
    }
}

/// `F^{μν} = ∂^μA^ν − ∂^νA^μ − α(u^μA^ν − u^νA^μ)` with `∂^μ = g^{μρ}(u) ∂_ρ`.
pub fn field_from_potential(a: &FourPotential, u: &FourVelocity, alpha: f64) -> Result<FieldTensor> {
    let grad = a
        .gradient
        .ok_or_else(|| Error::InvalidInput("potential has no derivative data".into()))?;
    let raised = u.metric().upper_matrix() * grad;
    let uc = u.contravariant().components;
    let wedge = uc * a.value.transpose() - a.value * uc.transpose();
    Ok(FieldTensor::from_matrix_unchecked(
        raised - raised.transpose() - wedge * alpha,
    ))
}

/// Value, gradient `∂_μχ` and Hessian `∂_μ∂_νχ` of a gauge function at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeJet {
    pub value: f64,
    pub gradient: Vector4<f64>,
    pub hessian: Matrix4<f64>,
}

pub trait GaugeFunction: Sync {
    fn jet(&self, x: &FourVector) -> GaugeJet;
}

/// `χ = c` everywhere.
#[derive(Clone, Copy, Debug)]
pub struct ConstantGauge(pub f64);

impl GaugeFunction for ConstantGauge {
    fn jet(&self, _x: &FourVector) -> GaugeJet {
        GaugeJet {
            value: self.0,
            gradient: Vector4::zeros(),
            hessian: Matrix4::zeros(),
        }
    }
}

/// One spatial Gaussian bump `A exp(−|x−c|²/(2σ²)) (1 + β t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub center: [f64; 3],
    pub width: f64,
    pub amplitude: f64,
    pub drift: f64,
}

/// Sum of Gaussian bumps; smooth and effectively compactly supported.
#[derive(Clone, Debug, Default)]
pub struct GaussianBumps(pub Vec<Bump>);

impl GaugeFunction for GaussianBumps {
    fn jet(&self, x: &FourVector) -> GaugeJet {
        let t = x.t0();
        let s = x.spatial();
        let mut value = 0.0;
        let mut gradient = Vector4::zeros();
        let mut hessian = Matrix4::zeros();
        for b in &self.0 {
            let d = [s[0] - b.center[0], s[1] - b.center[1], s[2] - b.center[2]];
            let inv = 1.0 / (b.width * b.width);
            let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            let g = b.amplitude * (-0.5 * r2 * inv).exp();
            let time = 1.0 + b.drift * t;
            value += g * time;
            gradient[0] += g * b.drift;
            for i in 0..3 {
                let gi = -d[i] * inv * g;
                gradient[i + 1] += gi * time;
                hessian[(0, i + 1)] += gi * b.drift;
                hessian[(i + 1, 0)] += gi * b.drift;
                for j in 0..3 {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    hessian[(i + 1, j + 1)] += (d[i] * d[j] * inv * inv - delta * inv) * g * time;
                }
            }
        }
        GaugeJet {
            value,
            gradient,
            hessian,
        }
    }
}

/// `A^μ → A^μ + (∂^μ − α u^μ) χ`, applied to the value and, when present, the gradient.
pub fn gauge_transform(a: &FourPotential, chi: &GaugeJet, u: &FourVelocity, alpha: f64) -> FourPotential {
    let g_up = u.metric().upper_matrix().to_owned();
    let uc = u.contravariant().components;
    let value = a.value + g_up * chi.gradient - uc * (alpha * chi.value);
    let gradient = a
        .gradient
        .map(|grad| grad + chi.hessian * g_up - chi.gradient * uc.transpose() * alpha);
    FourPotential { value, gradient }
}
