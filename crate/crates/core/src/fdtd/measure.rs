use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{run, Component, GridSpec, GridState};
use super::spectral::remove_growing_modes;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kinematics::{FourVector, ThreeVector};
use crate::planewave::{dispersion_k0, PlaneWave, Polarization, SpectralPacket};

/// Minimum number of periods covered by a phase fit.
pub const MIN_FIT_PERIODS: f64 = 5.0;
/// Periods of the central mode tracked by the packet-speed fit.
pub const PACKET_PERIODS: f64 = 10.0;

fn mode_wavenumber(spec: &GridSpec, mode: i64) -> f64 {
    2.0 * PI * mode as f64 / spec.length
}

/// Samples the preferred-frame fields of `pw` on the staggered grid at `t = 0`.
pub fn init_planewave(spec: &GridSpec, pw: &PlaneWave, exec: Exec) -> Result<GridState> {
    if !pw.wave().frame().is_preferred() {
        return Err(Error::InvalidInput(
            "grid initialization needs a preferred-frame wave".into(),
        ));
    }
    let k = pw.wave().spatial();
    let shape = spec.shape();
    for axis in 0..3 {
        let m = k[axis] * spec.length / (2.0 * PI);
        if shape[axis] == 1 {
            if k[axis] != 0.0 {
                return Err(Error::Incommensurate(format!(
                    "one-dimensional grids resolve z only; k[{axis}] = {}",
                    k[axis]
                )));
            }
        } else if (m - m.round()).abs() > 1e-9 * m.abs().max(1.0) {
            return Err(Error::Incommensurate(format!(
                "k[{axis}] = {} gives mode number {m}",
                k[axis]
            )));
        }
    }
    GridState::from_fn(spec, |x| pw.fields_at(x).expect("preferred frame"), exec)
}

/// Samples a packet at minimum-image positions in `[−L/2, L/2)`.
pub fn init_packet(spec: &GridSpec, packet: &SpectralPacket, exec: Exec) -> Result<GridState> {
    let shape = spec.shape();
    if packet
        .modes()
        .iter()
        .any(|m| (0..3).any(|a| shape[a] == 1 && m.k[a] != 0.0))
    {
        return Err(Error::InvalidInput(
            "one-dimensional grids need packets with k along z".into(),
        ));
    }
    let half = 0.5 * spec.length;
    GridState::from_fn(
        spec,
        |x| {
            let s = x.spatial().map(|c| if c >= half { c - spec.length } else { c });
            packet.field_at(&FourVector::event(x.t0(), s.x, s.y, s.z))
        },
        exec,
    )
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn unwrap_phases(phases: &mut [f64]) {
    for i in 1..phases.len() {
        let mut d = phases[i] - phases[i - 1];
        d -= 2.0 * PI * (d / (2.0 * PI)).round();
        phases[i] = phases[i - 1] + d;
    }
}

/// Measured angular frequency of one spatial mode.
#[derive(Clone, Debug, PartialEq)]
pub struct DispersionSample {
    pub mode: i64,
    pub k: f64,
    /// `Err(Evanescent)` marks a mode with `|k| ≤ α`.
    pub omega: Result<f64>,
}

/// Evolves single-mode states and fits the phase of the `E_x` Fourier
/// coefficient at `k` over at least [`MIN_FIT_PERIODS`] periods.
pub fn measure_dispersion(spec: &GridSpec, modes: &[i64], exec: Exec) -> Result<Vec<DispersionSample>> {
    spec.validate()?;
    Ok(exec.map(modes, |&mode| {
        let k = mode_wavenumber(spec, mode);
        DispersionSample {
            mode,
            k,
            omega: fit_mode_frequency(spec, k),
        }
    }))
}

fn fit_mode_frequency(spec: &GridSpec, k: f64) -> Result<f64> {
    let k0 = dispersion_k0(k.abs(), spec.alpha)?;
    let pol = Polarization::new(ThreeVector::x(), ThreeVector::zeros(), 0.0);
    let pw = PlaneWave::preferred(ThreeVector::new(0.0, 0.0, k), spec.alpha, pol)?;
    let mut state = init_planewave(spec, &pw, Exec::Serial)?;
    let needed = (MIN_FIT_PERIODS * 2.0 * PI / (k0 * spec.dt)).ceil() as usize;
    let steps = spec.steps().max(needed);
    let basis: Vec<Complex64> = (0..state.len())
        .map(|i| Complex64::from_polar(1.0, k * state.position(Component::Ex, i).z))
        .collect();
    let coefficient = |s: &GridState| s.ex.iter().zip(&basis).map(|(v, b)| b * v).sum::<Complex64>();
    let mut times = Vec::with_capacity(steps + 1);
    let mut phases = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        if n > 0 {
            run(&mut state, spec, 1, Exec::Serial)?;
        }
        times.push(state.time);
        phases.push(coefficient(&state).arg());
    }
    unwrap_phases(&mut phases);
    Ok(fit_slope(&times, &phases).abs())
}

/// Fitted exponential growth of an evanescent mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub mode: i64,
    pub k: f64,
    pub rate: f64,
    /// `√(α² − k²)`.
    pub expected: f64,
}

/// Starts from `E_x = B_y = cos(kz)` and fits `ln ‖(E, B)‖` over the second
/// half of `spec.duration`.
pub fn measure_instability(spec: &GridSpec, mode: i64, exec: Exec) -> Result<GrowthFit> {
    spec.validate()?;
    let k = mode_wavenumber(spec, mode);
    if k.abs() >= spec.alpha {
        return Err(Error::InvalidInput(format!(
            "mode {mode} has |k| = {} >= alpha = {} and does not grow",
            k.abs(),
            spec.alpha
        )));
    }
    let steps = spec.steps();
    if steps < 20 {
        return Err(Error::InvalidInput("instability fit needs at least 20 steps".into()));
    }
    let mut state = GridState::from_fn(
        spec,
        |x| {
            let c = (k * x.spatial().z).cos();
            (ThreeVector::new(c, 0.0, 0.0), ThreeVector::new(0.0, c, 0.0))
        },
        exec,
    )?;
    let norm = |s: &GridState| {
        let sq: f64 = Component::ALL
            .iter()
            .map(|&c| s.component(c).iter().map(|v| v * v).sum::<f64>())
            .sum();
        0.5 * sq.ln()
    };
    let mut times = Vec::new();
    let mut logs = Vec::new();
    for n in 1..=steps {
        run(&mut state, spec, 1, exec)?;
        if 2 * n >= steps {
            times.push(state.time);
            logs.push(norm(&state));
        }
    }
    Ok(GrowthFit {
        mode,
        k,
        rate: fit_slope(&times, &logs),
        expected: (spec.alpha * spec.alpha - k * k).sqrt(),
    })
}

/// Packet transport measured from the energy centroid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketSpeed {
    pub speed: f64,
    /// `|v_g|` at the energy-weighted spectral centroid.
    pub expected: f64,
    pub duration: f64,
}

/// Energy-weighted mean wave vector of a packet.
pub fn spectral_centroid(packet: &SpectralPacket) -> ThreeVector {
    let mut num = ThreeVector::zeros();
    let mut den = 0.0;
    for m in packet.modes() {
        let w = m.momentum_density()[0];
        num += m.k * w;
        den += w;
    }
    num / den
}

/// Centroid of `½(E² + B²)` along `z`, minimum image about `reference`.
fn energy_centroid(state: &GridState, length: f64, reference: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for c in Component::ALL {
        for (i, v) in state.component(c).iter().enumerate() {
            let z = state.position(c, i).z;
            let mut d = z - reference;
            d -= length * (d / length).round();
            let w = v * v;
            num += w * d;
            den += w;
        }
    }
    reference + num / den
}

/// Sampled centroid trajectory of a packet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketTrack {
    pub times: Vec<f64>,
    pub centers: Vec<f64>,
    /// Least-squares slope of `centers` against `times`.
    pub speed: f64,
    /// `|v_g|` at the energy-weighted spectral centroid.
    pub expected: f64,
}

impl PacketTrack {
    fn new(times: Vec<f64>, centers: Vec<f64>, expected: f64) -> Self {
        let speed = fit_slope(&times, &centers).abs();
        Self {
            times,
            centers,
            speed,
            expected,
        }
    }

    pub fn summary(&self) -> PacketSpeed {
        PacketSpeed {
            speed: self.speed,
            expected: self.expected,
            duration: self.times.last().copied().unwrap_or(0.0),
        }
    }
}

fn packet_prelude(spec: &GridSpec, packet: &SpectralPacket) -> Result<(f64, usize)> {
    spec.validate()?;
    if spec.dimension != 1 {
        return Err(Error::InvalidInput(
            "packet tracking runs on one-dimensional grids".into(),
        ));
    }
    if packet.modes().is_empty() {
        return Err(Error::InvalidInput("packet has no propagating modes".into()));
    }
    if (packet.alpha() - spec.alpha).abs() > 0.0 {
        return Err(Error::InvalidInput(format!(
            "packet alpha {} differs from grid alpha {}",
            packet.alpha(),
            spec.alpha
        )));
    }
    let kc = spectral_centroid(packet);
    let k0 = dispersion_k0(kc.norm(), spec.alpha)?;
    let needed = (PACKET_PERIODS * 2.0 * PI / (k0 * spec.dt)).ceil() as usize;
    Ok((kc.norm() / k0, spec.steps().max(needed)))
}

/// Evolves a packet on the grid and records its energy centroid after every
/// step, over at least [`PACKET_PERIODS`] periods of the central mode.
pub fn track_packet(spec: &GridSpec, packet: &SpectralPacket, exec: Exec) -> Result<PacketTrack> {
    let (expected, steps) = packet_prelude(spec, packet)?;
    let mut state = init_packet(spec, packet, exec)?;
    remove_growing_modes(&mut state, spec)?;
    let mut center = energy_centroid(&state, spec.length, 0.0);
    center = energy_centroid(&state, spec.length, center);
    let mut times = vec![state.time];
    let mut centers = vec![center];
    for _ in 0..steps {
        run(&mut state, spec, 1, exec)?;
        center = energy_centroid(&state, spec.length, center);
        times.push(state.time);
        centers.push(center);
    }
    Ok(PacketTrack::new(times, centers, expected))
}

/// Same time span as [`track_packet`], but the fields come from the exact
/// mode sum sampled on `spec.cells` points in a window that follows the
/// packet. `samples` times are recorded.
pub fn track_packet_analytic(
    spec: &GridSpec,
    packet: &SpectralPacket,
    samples: usize,
    exec: Exec,
) -> Result<PacketTrack> {
    let (expected, steps) = packet_prelude(spec, packet)?;
    if samples < 2 {
        return Err(Error::InvalidInput("analytic tracking needs at least 2 samples".into()));
    }
    let t_end = steps as f64 * spec.dt;
    let dx = spec.dx();
    let n = spec.cells;
    let centroid = |t: f64, reference: f64| {
        let sums = exec.sum_range::<2, _>(n, |i| {
            let z = reference + (i as f64 - 0.5 * n as f64) * dx;
            let (e, b) = packet.field_at(&FourVector::event(t, 0.0, 0.0, z));
            let w = 0.5 * (e.norm_squared() + b.norm_squared());
            [w * z, w]
        });
        sums[0] / sums[1]
    };
    let mut times = Vec::with_capacity(samples);
    let mut centers = Vec::with_capacity(samples);
    let mut center = centroid(0.0, 0.0);
    for j in 0..samples {
        let t = t_end * j as f64 / (samples - 1) as f64;
        // predict with the group velocity, then refine once on the moved window
        let guess = if j == 0 {
            center
        } else {
            center + expected * (t - times[j - 1])
        };
        center = centroid(t, centroid(t, guess));
        times.push(t);
        centers.push(center);
    }
    Ok(PacketTrack::new(times, centers, expected))
}

/// Regresses the grid energy centroid of a packet; see [`track_packet`].
pub fn measure_packet_speed(spec: &GridSpec, packet: &SpectralPacket, exec: Exec) -> Result<PacketSpeed> {
    Ok(track_packet(spec, packet, exec)?.summary())
}

/// Least-squares estimate of `α²` from `ω² = k² − α²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaFit {
    /// Mean of `k² − ω²`; may be slightly negative in vacuum.
    pub alpha_squared: f64,
    /// `√max(α², 0)`.
    pub alpha: f64,
    /// RMS of `ω² − k² + α²` over the fitted modes.
    pub residual: f64,
    pub used: usize,
    /// Modes without a frequency (evanescent or failed fits).
    pub excluded: Vec<i64>,
}

/// Fits `α²` to the propagating entries of a dispersion campaign.
pub fn fit_alpha(samples: &[DispersionSample]) -> Result<AlphaFit> {
    let mut values = Vec::new();
    let mut excluded = Vec::new();
    for s in samples {
        match &s.omega {
            Ok(w) => values.push(s.k * s.k - w * w),
            Err(_) => excluded.push(s.mode),
        }
    }
    if values.is_empty() {
        return Err(Error::InvalidInput("no propagating modes to fit".into()));
    }
    let n = values.len() as f64;
    let alpha_squared = values.iter().sum::<f64>() / n;
    let residual = (values.iter().map(|v| (v - alpha_squared).powi(2)).sum::<f64>() / n).sqrt();
    Ok(AlphaFit {
        alpha_squared,
        alpha: alpha_squared.max(0.0).sqrt(),
        residual,
        used: values.len(),
        excluded,
    })
}

/// Relative L2 distance between the evolved mode `m` and the exact
/// solution after `spec.duration`.
pub fn global_error(spec: &GridSpec, mode: i64, exec: Exec) -> Result<f64> {
    let k = mode_wavenumber(spec, mode);
    let pol = Polarization::new(ThreeVector::x(), ThreeVector::zeros(), 0.0);
    let pw = PlaneWave::preferred(ThreeVector::new(0.0, 0.0, k), spec.alpha, pol)?;
    let mut state = init_planewave(spec, &pw, exec)?;
    run(&mut state, spec, spec.steps(), exec)?;
    let mut diff = 0.0;
    let mut norm = 0.0;
    for c in Component::ALL {
        for (i, v) in state.component(c).iter().enumerate() {
            let x = state.position(c, i);
            let (e, b) = pw.fields_at(&FourVector::event(state.time, x.x, x.y, x.z))?;
            let exact = if c.is_electric() { e[c.axis()] } else { b[c.axis()] };
            diff += (v - exact) * (v - exact);
            norm += exact * exact;
        }
    }
    Ok((diff / norm).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        assert!((fit_slope(&x, &y) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unwrap_follows_linear_phase() {
        let mut p: Vec<f64> = (0..50)
            .map(|i| (0.9 * i as f64 + PI).rem_euclid(2.0 * PI) - PI)
            .collect();
        unwrap_phases(&mut p);
        for w in p.windows(2) {
            assert!((w[1] - w[0] - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn incommensurate_wave_rejected() {
        let spec = GridSpec::with_courant(1, 32, 10.0, 0.1, 1.0, 0.9);
        let pw = PlaneWave::preferred(
            ThreeVector::new(0.0, 0.0, 1.0),
            0.1,
            Polarization::new(ThreeVector::x(), ThreeVector::zeros(), 0.0),
        )
        .unwrap();
        assert!(matches!(
            init_planewave(&spec, &pw, Exec::Serial),
            Err(Error::Incommensurate(_))
        ));
    }
}
