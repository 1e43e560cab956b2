use nalgebra::Matrix4;

use super::vector::{FourVector, ThreeVector, Variance};
use super::velocity::FourVelocity;
use crate::error::{Error, Result};

/// A boost from frame `[x]` to frame `[x']`.
///
/// Parameterized by the PF four-velocity `u` seen from `[x]` and the spatial
/// part `w` of the four-velocity of `[x']`. The time part `w⁰` is always
/// derived from the normalization `(1 + u⁰ u·V)² − V² = 1/(w⁰)²` with
/// `V = w/w⁰`, never stored independently.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostParameters {
    u: FourVelocity,
    w: ThreeVector,
}

impl BoostParameters {
    /// Identity boost in the frame described by `u`.
    pub fn identity(u: FourVelocity) -> Self {
        Self {
            u,
            w: ThreeVector::zeros(),
        }
    }

    /// From the spatial four-velocity `w` of the target frame.
    pub fn from_w(u: FourVelocity, w: ThreeVector) -> Result<Self> {
        if !w.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidInput("boost parameter w must be finite".into()));
        }
        let p = Self { u, w };
        p.check_admissible()?;
        Ok(p)
    }

    /// From the coordinate three-velocity `V` of the target frame.
    pub fn from_three_velocity(u: FourVelocity, v: ThreeVector) -> Result<Self> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidInput("frame velocity V must be finite".into()));
        }
        if v.norm() >= 1.0 {
            return Err(Error::InadmissibleBoost(format!("|V| = {} must be < 1", v.norm())));
        }
        let lead = 1.0 + u.u0() * u.spatial().dot(&v);
        let radicand = lead * lead - v.norm_squared();
        if lead <= 0.0 || radicand <= 0.0 {
            return Err(Error::InadmissibleBoost(format!(
                "V is not timelike for this PF velocity: (1 + u0 u.V)^2 - V^2 = {radicand}"
            )));
        }
        let w0 = 1.0 / radicand.sqrt();
        Ok(Self { u, w: v * w0 })
    }

    fn check_admissible(&self) -> Result<()> {
        let v = self.three_velocity();
        if v.norm() >= 1.0 {
            return Err(Error::InadmissibleBoost(format!("|V| = {} must be < 1", v.norm())));
        }
        Ok(())
    }

    pub fn u(&self) -> &FourVelocity {
        &self.u
    }

    pub fn w(&self) -> ThreeVector {
        self.w
    }

    /// `w⁰ = √(1 + w²) − u⁰ u·w`, the positive root of the normalization.
    pub fn w0(&self) -> f64 {
        (1.0 + self.w.norm_squared()).sqrt() - self.u.u0() * self.u.spatial().dot(&self.w)
    }

    /// `V = w/w⁰`.
    pub fn three_velocity(&self) -> ThreeVector {
        self.w / self.w0()
    }

    fn gamma_term(&self) -> f64 {
        1.0 + (1.0 + self.w.norm_squared()).sqrt()
    }

    /// Parameters of the boost that follows this one, seen from the target frame.
    pub fn then(&self, w_next: ThreeVector) -> Result<BoostParameters> {
        BoostParameters::from_w(boost_velocity(self), w_next)
    }
}

/// `x'⁰ = x⁰/w⁰`, `x' = x − w (x⁰ + u⁰ u·x − w·x/(1 + √(1+w²)))`.
pub fn boost_coordinates(x: &FourVector, p: &BoostParameters) -> Result<FourVector> {
    if x.variance != Variance::Contravariant {
        return Err(Error::InvalidInput(
            "boost_coordinates expects a contravariant vector".into(),
        ));
    }
    let (t, s) = (x.t0(), x.spatial());
    let u = p.u.spatial();
    let w = p.w;
    let bracket = t + p.u.u0() * u.dot(&s) - w.dot(&s) / p.gamma_term();
    Ok(FourVector::contravariant(t / p.w0(), s - w * bracket))
}

/// Transformed PF four-velocity. The normalization of the result is not
/// imposed; it follows from the transformation law.
pub fn boost_velocity(p: &BoostParameters) -> FourVelocity {
    let u0 = p.u.u0();
    let u = p.u.spatial();
    let w = p.w;
    let spatial = u - w * (1.0 / u0 - u.dot(&w) / p.gamma_term());
    FourVelocity::from_raw(u0 / p.w0(), spatial)
}

/// Matrix `D` with `x' = D x`. Row 0 is `(1/w⁰, 0, 0, 0)`.
pub fn boost_matrix(p: &BoostParameters) -> Matrix4<f64> {
    let u0 = p.u.u0();
    let u = p.u.spatial();
    let w = p.w;
    let g = p.gamma_term();
    let mut d = Matrix4::zeros();
    d[(0, 0)] = 1.0 / p.w0();
    for i in 0..3 {
        d[(i + 1, 0)] = -w[i];
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            d[(i + 1, j + 1)] = delta - u0 * w[i] * u[j] + w[i] * w[j] / g;
        }
    }
    d
}

/// Closed-form `D⁻¹`.
///
/// The spatial block is `M = I + w cᵀ` with `c = −u⁰u + w/(1 + √(1+w²))` and
/// `1 + c·w = w⁰`, so `M⁻¹ = I − w cᵀ/w⁰`.
pub fn inverse_boost_matrix(p: &BoostParameters) -> Matrix4<f64> {
    let w0 = p.w0();
    let w = p.w;
    let c = -p.u.spatial() * p.u.u0() + w / p.gamma_term();
    let m_inv = nalgebra::Matrix3::identity() - w * c.transpose() / w0;
    let col0 = m_inv * w * w0;
    let mut d = Matrix4::zeros();
    d[(0, 0)] = w0;
    for i in 0..3 {
        d[(i + 1, 0)] = col0[i];
        for j in 0..3 {
            d[(i + 1, j + 1)] = m_inv[(i, j)];
        }
    }
    d
}

/// `k'_μ = k_ν (D⁻¹)^ν_μ`. The spatial covariant components transform among
/// themselves; the contravariant time component of the raised vector is
/// rescaled by `1/w⁰ > 0`.
pub fn boost_covector(k: &FourVector, p: &BoostParameters) -> Result<FourVector> {
    if k.variance != Variance::Covariant {
        return Err(Error::InvalidInput("boost_covector expects a covariant vector".into()));
    }
    let inv = inverse_boost_matrix(p);
    Ok(FourVector {
        components: inv.transpose() * k.components,
        variance: Variance::Covariant,
    })
}

/// Volume of a region on the hyperplane `x⁰ = const` scales as `V' = w⁰ V`.
pub fn volume_scale(p: &BoostParameters) -> f64 {
    p.w0()
}
