use super::metric::MetricTensor;
use super::vector::{FourVector, ThreeVector};
use crate::error::{Error, Result};
use crate::IDENTITY_TOL;

/// Four-velocity of the preferred frame as seen from some inertial frame.
///
/// The spatial part `u` is free; the time part is fixed by
/// `u⁰ = 1/√(1 + |u|²)`, which is equivalent to the `g(u)`-normalization
/// together with the vanishing of the covariant spatial components `u_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVelocity {
    u0: f64,
    u: ThreeVector,
}

impl FourVelocity {
    /// The preferred frame itself: `u = (1, 0)`.
    pub fn preferred() -> Self {
        Self {
            u0: 1.0,
            u: ThreeVector::zeros(),
        }
    }

    pub fn new(u: ThreeVector) -> Self {
        Self {
            u0: 1.0 / (1.0 + u.norm_squared()).sqrt(),
            u,
        }
    }

    /// Accepts externally supplied components, rejecting a violated normalization.
    pub fn try_from_components(u0: f64, u: ThreeVector) -> Result<Self> {
        if !(u0.is_finite() && u.iter().all(|c| c.is_finite())) || u0 <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "four-velocity must be finite with u0 > 0, got u0 = {u0}"
            )));
        }
        let defect = u0 * (1.0 + u.norm_squared()).sqrt() - 1.0;
        if defect.abs() > 1e3 * IDENTITY_TOL {
            return Err(Error::InvalidInput(format!(
                "four-velocity violates u0*sqrt(1+|u|^2) = 1 (defect {defect:e})"
            )));
        }
        Ok(Self { u0, u })
    }

    /// Stores components without renormalizing; used where the normalization
    /// must follow from the transformation law itself.
    pub(crate) fn from_raw(u0: f64, u: ThreeVector) -> Self {
        Self { u0, u }
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn spatial(&self) -> ThreeVector {
        self.u
    }

    pub fn is_preferred(&self) -> bool {
        self.u.iter().all(|&c| c == 0.0)
    }

    pub fn contravariant(&self) -> FourVector {
        FourVector::contravariant(self.u0, self.u)
    }

    /// `u_μ = (1/u⁰, 0, 0, 0)` in every frame.
    pub fn covariant(&self) -> FourVector {
        FourVector::covariant(1.0 / self.u0, ThreeVector::zeros())
    }

    /// `u⁰ √(1 + |u|²) − 1`; zero for a consistent four-velocity.
    pub fn normalization_defect(&self) -> f64 {
        self.u0 * (1.0 + self.u.norm_squared()).sqrt() - 1.0
    }

    pub fn metric(&self) -> MetricTensor {
        MetricTensor::new(self)
    }

    /// PF three-velocity `v = u/u⁰`.
    pub fn three_velocity(&self) -> ThreeVector {
        self.u / self.u0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covariant_components_are_pure_time() {
        let u = FourVelocity::new(ThreeVector::new(0.3, -1.2, 0.7));
        let g = u.metric();
        let lowered = g.lower(&u.contravariant());
        assert!((lowered.t0() - 1.0 / u.u0()).abs() < 1e-14);
        assert!(lowered.spatial().norm() < 1e-14);
        assert_eq!(u.covariant().t0(), 1.0 / u.u0());
    }

    #[test]
    fn rejects_unnormalized_components() {
        assert!(FourVelocity::try_from_components(1.0, ThreeVector::new(0.5, 0.0, 0.0)).is_err());
        assert!(FourVelocity::try_from_components(-1.0, ThreeVector::zeros()).is_err());
        let ok = FourVelocity::new(ThreeVector::new(0.5, 0.0, 0.0));
        assert!(FourVelocity::try_from_components(ok.u0(), ok.spatial()).is_ok());
    }
}
