//! Finite-difference time-domain solver for the preferred-frame field
//! equations on periodic grids.
//!
//! Spatial derivatives use the Yee staggering; time integration is the
//! kick-drift-kick leapfrog for the curl terms with the reaction terms
//! `−αE`, `+αB` integrated exactly and split symmetrically around it. For a
//! mode with grid wavenumber `K = (2/Δx) sin(kΔx/2)` the update has
//! `cos(ωΔt) = cosh(αΔt)(1 − Δt²K²/2)`.

mod diagnostics;
mod equations;
mod grid;
mod measure;
mod snapshot;
mod spectral;

pub use diagnostics::{
    diagnostics, divergence_residuals, node_region, DiagnosticEntry, DiagnosticSeries, PotentialPolicy,
};
pub use equations::{derive_pf_equations, FieldJet, PfEquations, PfResidual, PF_EQUATIONS};
pub use grid::{run, step, step_reverse, Component, GridSpec, GridState, CFL_NUMBER};
pub use measure::{
    fit_alpha, fit_slope, global_error, init_packet, init_planewave, measure_dispersion, measure_instability,
    measure_packet_speed, spectral_centroid, track_packet, track_packet_analytic, AlphaFit, DispersionSample,
    GrowthFit, PacketSpeed, PacketTrack, MIN_FIT_PERIODS, PACKET_PERIODS,
};
pub use snapshot::{read_raw, write_csv, write_raw, RawSidecar};
pub use spectral::{is_growing_mode, lattice_growth_rate, remove_growing_modes};
