//! Triangular (nonstandard-synchronization) realization of the Lorentz group.
//!
//! A preferred frame (PF) is singled out by its four-velocity `u` as seen
//! from each inertial observer. Coordinates use the synchronization in which
//! boosts act triangularly: the time coordinate is only rescaled, so the
//! hyperplane `x⁰ = const` is frame independent. All quantities use `c = 1`.

mod boost;
mod metric;
mod sync;
mod vector;
mod velocity;

pub use boost::{
    boost_coordinates, boost_covector, boost_matrix, boost_velocity, inverse_boost_matrix, volume_scale,
    BoostParameters,
};
pub use metric::{metric_of, MetricTensor};
pub use sync::{from_einstein_sync, round_trip_light_speed, to_einstein_sync};
pub use vector::{FourVector, ThreeVector, Variance};
pub use velocity::FourVelocity;
