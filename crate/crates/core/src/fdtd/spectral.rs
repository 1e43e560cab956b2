//! Periodic Fourier transforms of grid data.
//!
//! Used to move staggered samples onto the nodes and to reconstruct a
//! potential from `B`. Both operations are exact for band-limited data.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Vector4;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{unravel, Component, GridSpec, GridState};
use crate::error::Result;
use crate::kinematics::ThreeVector;

pub(crate) struct Fft3 {
    shape: [usize; 3],
    forward: [Option<Arc<dyn Fft<f64>>>; 3],
    inverse: [Option<Arc<dyn Fft<f64>>>; 3],
}

impl Fft3 {
    pub(crate) fn new(shape: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        let plan = |p: &mut FftPlanner<f64>, n: usize, inv: bool| {
            (n > 1).then(|| {
                if inv {
                    p.plan_fft_inverse(n)
                } else {
                    p.plan_fft_forward(n)
                }
            })
        };
        let forward = std::array::from_fn(|a| plan(&mut planner, shape[a], false));
        let inverse = std::array::from_fn(|a| plan(&mut planner, shape[a], true));
        Self {
            shape,
            forward,
            inverse,
        }
    }

    /// Unnormalized transform along every non-trivial axis.
    pub(crate) fn process(&self, data: &mut [Complex64], inverse: bool) {
        let plans = if inverse { &self.inverse } else { &self.forward };
        let [n0, n1, n2] = self.shape;
        if let Some(f) = &plans[2] {
            f.process(data);
        }
        let mut line = Vec::new();
        for axis in [1usize, 0] {
            let Some(f) = &plans[axis] else { continue };
            let n = self.shape[axis];
            let stride = if axis == 1 { n2 } else { n1 * n2 };
            let outer = if axis == 1 { n0 } else { 1 };
            let inner = if axis == 1 { n2 } else { n1 * n2 };
            line.resize(n, Complex64::default());
            for o in 0..outer {
                for i in 0..inner {
                    let base = o * n1 * n2 + i;
                    for (m, v) in line.iter_mut().enumerate() {
                        *v = data[base + m * stride];
                    }
                    f.process(&mut line);
                    for (m, v) in line.iter().enumerate() {
                        data[base + m * stride] = *v;
                    }
                }
            }
        }
    }
}

/// Signed mode number of index `m` on an axis of `n` points.
pub(crate) fn signed_mode(m: usize, n: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// Spectral representation of a grid state with every component at the nodes.
pub(crate) struct NodeSpectrum {
    pub shape: [usize; 3],
    pub dx: f64,
    pub e: [Vec<Complex64>; 3],
    pub b: [Vec<Complex64>; 3],
    fft: Fft3,
}

impl NodeSpectrum {
    pub(crate) fn new(state: &GridState) -> Self {
        let shape = state.shape();
        let dx = state.dx();
        let fft = Fft3::new(shape);
        let spectrum = |c: Component| {
            let mut data: Vec<Complex64> = state.component(c).iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fft.process(&mut data, false);
            let o = c.offset();
            for (idx, v) in data.iter_mut().enumerate() {
                let q = wavevector(shape, dx, idx);
                let phase: f64 = (0..3).map(|a| q[a] * o[a] * dx).sum();
                *v *= Complex64::from_polar(1.0, -phase);
            }
            data
        };
        Self {
            shape,
            dx,
            e: [
                spectrum(Component::Ex),
                spectrum(Component::Ey),
                spectrum(Component::Ez),
            ],
            b: [
                spectrum(Component::Bx),
                spectrum(Component::By),
                spectrum(Component::Bz),
            ],
            fft,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.e[0].len()
    }

    pub(crate) fn wavevector(&self, idx: usize) -> ThreeVector {
        wavevector(self.shape, self.dx, idx)
    }

    fn to_real(&self, mut data: Vec<Complex64>) -> Vec<f64> {
        self.fft.process(&mut data, true);
        let n = data.len() as f64;
        data.into_iter().map(|v| v.re / n).collect()
    }

    fn vector_field(&self, parts: [Vec<Complex64>; 3]) -> Vec<ThreeVector> {
        let [x, y, z] = parts.map(|p| self.to_real(p));
        (0..x.len()).map(|i| ThreeVector::new(x[i], y[i], z[i])).collect()
    }

    pub(crate) fn node_fields(&self) -> (Vec<ThreeVector>, Vec<ThreeVector>) {
        (self.vector_field(self.e.clone()), self.vector_field(self.b.clone()))
    }

    /// Radiation-gauge potential: `A⁰ = 0`, `Â = −i q×B̂/|q|²` for `q ≠ 0`,
    /// and for the uniform mode the decaying solution `A = −E/(2α)`.
    pub(crate) fn transverse_potential(&self, alpha: f64) -> Vec<Vector4<f64>> {
        let n = self.len();
        let mut parts: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::default(); n]);
        for idx in 0..n {
            let q = self.wavevector(idx);
            let q2 = q.norm_squared();
            if q2 == 0.0 {
                if alpha > 0.0 {
                    for a in 0..3 {
                        parts[a][idx] = -self.e[a][idx] / (2.0 * alpha);
                    }
                }
                continue;
            }
            let b = [self.b[0][idx], self.b[1][idx], self.b[2][idx]];
            let cross = [
                b[2] * q[1] - b[1] * q[2],
                b[0] * q[2] - b[2] * q[0],
                b[1] * q[0] - b[0] * q[1],
            ];
            for a in 0..3 {
                parts[a][idx] = -Complex64::i() * cross[a] / q2;
            }
        }
        self.vector_field(parts)
            .into_iter()
            .map(|a| Vector4::new(0.0, a.x, a.y, a.z))
            .collect()
    }

    /// `½(|Ê|² + |B̂|²)/N · ΔV` binned by integer shell `round(|m|)`.
    pub(crate) fn energy_spectrum(&self, cell_volume: f64) -> Vec<f64> {
        let max_shell = self
            .shape
            .iter()
            .map(|&n| (n / 2) as f64)
            .map(|m| m * m)
            .sum::<f64>()
            .sqrt()
            .round() as usize;
        let mut bins = vec![0.0; max_shell + 1];
        let n = self.len() as f64;
        for idx in 0..self.len() {
            let mvec = unravel(self.shape, idx);
            let shell = (0..3)
                .map(|a| signed_mode(mvec[a], self.shape[a]) as f64)
                .map(|m| m * m)
                .sum::<f64>()
                .sqrt()
                .round() as usize;
            let p: f64 = (0..3)
                .map(|a| self.e[a][idx].norm_sqr() + self.b[a][idx].norm_sqr())
                .sum();
            bins[shell] += 0.5 * p / n * cell_volume;
        }
        bins
    }
}

/// Whether the lattice mode with wave vector `k` grows under the leapfrog
/// scheme, i.e. `cosh(αh)(1 − h²K²/2) > 1` with `K` the discrete wavenumber.
pub fn is_growing_mode(k: &ThreeVector, dx: f64, dt: f64, alpha: f64) -> bool {
    let kk: f64 = k.iter().map(|c| (2.0 / dx * (0.5 * c * dx).sin()).powi(2)).sum();
    (alpha * dt).cosh() * (1.0 - 0.5 * dt * dt * kk) > 1.0
}

/// Growth rate `λ` of a lattice mode from `cosh(λh) = cosh(αh)(1 − h²K²/2)`;
/// zero for modes that oscillate.
pub fn lattice_growth_rate(k: &ThreeVector, dx: f64, dt: f64, alpha: f64) -> f64 {
    let kk: f64 = k.iter().map(|c| (2.0 / dx * (0.5 * c * dx).sin()).powi(2)).sum();
    let rhs = (alpha * dt).cosh() * (1.0 - 0.5 * dt * dt * kk);
    if rhs > 1.0 {
        rhs.acosh() / dt.abs()
    } else {
        0.0
    }
}

/// Removes every exponentially growing lattice mode from `state`.
///
/// Sampled packets leak a small amount of content into `|k| ≤ α`; left in
/// place it overtakes the propagating part after a few e-foldings.
pub fn remove_growing_modes(state: &mut GridState, spec: &GridSpec) -> Result<()> {
    state.check_compatible(spec)?;
    let shape = state.shape();
    let dx = state.dx();
    let n = state.ex.len();
    let growing: Vec<bool> = (0..n)
        .map(|i| is_growing_mode(&wavevector(shape, dx, i), dx, spec.dt, spec.alpha))
        .collect();
    if !growing.contains(&true) {
        return Ok(());
    }
    let fft = Fft3::new(shape);
    let mut buf = vec![Complex64::default(); n];
    for c in Component::ALL {
        let data = state.component_mut(c);
        for (b, v) in buf.iter_mut().zip(data.iter()) {
            *b = Complex64::new(*v, 0.0);
        }
        fft.process(&mut buf, false);
        for (b, &g) in buf.iter_mut().zip(&growing) {
            if g {
                *b = Complex64::default();
            }
        }
        fft.process(&mut buf, true);
        for (v, b) in data.iter_mut().zip(&buf) {
            *v = b.re / n as f64;
        }
    }
    Ok(())
}

pub(crate) fn wavevector(shape: [usize; 3], dx: f64, idx: usize) -> ThreeVector {
    let m = unravel(shape, idx);
    ThreeVector::from_fn(|a, _| 2.0 * PI * signed_mode(m[a], shape[a]) as f64 / (shape[a] as f64 * dx))
}
