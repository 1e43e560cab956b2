//! Field-strength algebra in a frame with PF four-velocity `u`: duality,
//! potentials and gauge freedom, invariants, Lagrangian and the canonical
//! energy-momentum tensor.

mod equations;
mod invariants;
mod potential;
mod stress;
mod tensor;

pub use equations::field_equation_residual;
pub use invariants::{invariant_f2, invariant_f_fdual, lagrangian_density};
pub use potential::{
    field_from_potential, gauge_transform, Bump, ConstantGauge, FourPotential, GaugeFunction, GaugeJet, GaussianBumps,
    NumericGradient, PotentialField,
};
pub use stress::{four_momentum, momentum_density, stress_tensor, SampledRegion, StressTensor};
pub use tensor::{dual_matrix, levi_civita, ComplexFieldTensor, FieldTensor, LEVI_CIVITA_0123};
