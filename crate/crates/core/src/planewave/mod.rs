//! Monochromatic solutions, their polarization amplitudes and potentials,
//! boosted solutions, and wave packets over the invariant measure.

mod boosted;
mod packet;
mod polarization;
mod wave;

pub use boosted::{boost_planewave, BoostedPlaneWave};
pub use packet::{
    packet_field_at, packet_potential_at, synthesize_packet, ComplexThreeVector, GaussianSpectrum, PacketMode,
    Quadrature, SpectralPacket,
};
pub use polarization::{
    amplitude_residuals, polarization_formula, polarization_prefactor, polarization_tensor, potential_amplitude,
    potential_for_planewave, PlaneWavePotential,
};
pub use wave::{dispersion_k0, momentum_shell, transverse_basis, PlaneWave, Polarization, WaveVector};
