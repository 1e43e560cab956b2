use super::vector::{FourVector, ThreeVector};
use super::velocity::FourVelocity;
use crate::error::{Error, Result};
use crate::IDENTITY_TOL;

/// Converts to Einstein–Poincaré synchronization: `x⁰_E = x⁰ + u⁰ u·x`, `x_E = x`.
pub fn to_einstein_sync(x: &FourVector, u: &FourVelocity) -> Result<FourVector> {
    if !x.is_contravariant() {
        return Err(Error::InvalidInput(
            "synchronization change expects a contravariant vector".into(),
        ));
    }
    let s = x.spatial();
    Ok(FourVector::contravariant(x.t0() + u.u0() * u.spatial().dot(&s), s))
}

pub fn from_einstein_sync(x: &FourVector, u: &FourVelocity) -> Result<FourVector> {
    if !x.is_contravariant() {
        return Err(Error::InvalidInput(
            "synchronization change expects a contravariant vector".into(),
        ));
    }
    let s = x.spatial();
    Ok(FourVector::contravariant(x.t0() - u.u0() * u.spatial().dot(&s), s))
}

/// Total path length over total light travel time around a closed polygon.
///
/// Each leg `Δx` is traversed by a future-directed null ray of `g(u)`, which
/// takes coordinate time `|Δx| − u⁰ u·Δx`. The anisotropic terms cancel on
/// any closed loop.
pub fn round_trip_light_speed(legs: &[ThreeVector], u: &FourVelocity) -> Result<f64> {
    if legs.is_empty() {
        return Err(Error::InvalidInput("path has no legs".into()));
    }
    let length: f64 = legs.iter().map(|l| l.norm()).sum();
    if length <= 0.0 {
        return Err(Error::InvalidInput("path has zero length".into()));
    }
    let closure = legs.iter().fold(ThreeVector::zeros(), |acc, l| acc + l).norm();
    if closure > IDENTITY_TOL * length {
        return Err(Error::NonClosedPath(closure));
    }
    let tilt = u.u0() * u.spatial();
    let time: f64 = legs.iter().map(|l| l.norm() - tilt.dot(l)).sum();
    Ok(length / time)
}
