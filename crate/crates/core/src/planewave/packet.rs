use nalgebra::{Matrix4, Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{FourPotential, PotentialField};
use crate::kinematics::{FourVector, ThreeVector};

use super::wave::{dispersion_k0, transverse_basis};

/// Spatial polarization vector `n(k)` of a preferred-frame spectrum.
pub type ComplexThreeVector = Vector3<Complex64>;

/// Midpoint quadrature over the spatial wave vectors of the upper shell.
#[derive(Clone, Debug, PartialEq)]
pub enum Quadrature {
    /// One mode with unit weight.
    Single(ThreeVector),
    /// `points` samples of `|k| ∈ [k_min, k_max]` along `direction`, weight `dk/(2k⁰)`.
    Line {
        direction: ThreeVector,
        k_min: f64,
        k_max: f64,
        points: usize,
    },
    /// Tensor grid over a box, weight `d³k/(2k⁰)`; axes with one point contribute a factor 1.
    Box {
        min: ThreeVector,
        max: ThreeVector,
        points: [usize; 3],
    },
}

impl Quadrature {
    fn nodes(&self) -> Result<Vec<(ThreeVector, f64)>> {
        match self {
            Quadrature::Single(k) => Ok(vec![(*k, 1.0)]),
            Quadrature::Line {
                direction,
                k_min,
                k_max,
                points,
            } => {
                let norm = direction.norm();
                if *points == 0 || !(norm > 0.0) || !(k_max > k_min) {
                    return Err(Error::InvalidInput(
                        "line quadrature needs points > 0, k_max > k_min and a direction".into(),
                    ));
                }
                let dk = (k_max - k_min) / *points as f64;
                let dir = direction / norm;
                Ok((0..*points)
                    .map(|i| (dir * (k_min + (i as f64 + 0.5) * dk), dk))
                    .collect())
            }
            Quadrature::Box { min, max, points } => {
                let mut steps = [0.0; 3];
                for ax in 0..3 {
                    if points[ax] == 0 || max[ax] < min[ax] || (points[ax] > 1 && max[ax] == min[ax]) {
                        return Err(Error::InvalidInput(format!("invalid box quadrature on axis {ax}")));
                    }
                    steps[ax] = if points[ax] == 1 {
                        0.0
                    } else {
                        (max[ax] - min[ax]) / points[ax] as f64
                    };
                }
                let coord = |ax: usize, i: usize| {
                    if points[ax] == 1 {
                        0.5 * (min[ax] + max[ax])
                    } else {
                        min[ax] + (i as f64 + 0.5) * steps[ax]
                    }
                };
                let weight: f64 = (0..3).map(|ax| if points[ax] == 1 { 1.0 } else { steps[ax] }).product();
                let mut out = Vec::with_capacity(points.iter().product());
                for i in 0..points[0] {
                    for j in 0..points[1] {
                        for l in 0..points[2] {
                            out.push((ThreeVector::new(coord(0, i), coord(1, j), coord(2, l)), weight));
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    fn is_single(&self) -> bool {
        matches!(self, Quadrature::Single(_))
    }
}

/// One sampled mode: `E = 2Re(Ê e^{iθ})`, `B = 2Re(B̂ e^{iθ})`, `A = 2Re(â e^{iθ})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketMode {
    pub k: ThreeVector,
    pub k0: f64,
    pub e: ComplexThreeVector,
    pub b: ComplexThreeVector,
    pub a: ComplexThreeVector,
}

impl PacketMode {
    /// Mode amplitudes for weighted spatial `n ⟂ k` in the preferred frame.
    fn new(k: ThreeVector, alpha: f64, n: ComplexThreeVector) -> Result<Self> {
        let k0 = dispersion_k0(k.norm(), alpha)?;
        let kmag = k.norm();
        let kc = k.map(|x| Complex64::new(x, 0.0));
        let khat = kc / Complex64::new(kmag, 0.0);
        // longitudinal n is pure gauge in the preferred frame
        let nt = n - khat * khat.dot(&n);
        let xi = (k0 / kmag).clamp(-1.0, 1.0).acos();
        let kn = kc.cross(&nt);
        Ok(Self {
            k,
            k0,
            e: kc.cross(&kn) * (Complex64::from_polar(1.0, xi) / kmag),
            b: -kn,
            a: nt * Complex64::i(),
        })
    }

    fn phase(&self, x: &FourVector) -> Complex64 {
        Complex64::from_polar(1.0, self.k0 * x.t0() - self.k.dot(&x.spatial()))
    }

    /// Period-averaged `(p⁰, p)`: `2|n|²k⁰(k⁰, k)`.
    pub fn momentum_density(&self) -> Vector4<f64> {
        let n2 = self.a.norm_squared();
        let s = 2.0 * n2 * self.k0;
        Vector4::new(s * self.k0, s * self.k.x, s * self.k.y, s * self.k.z)
    }
}

fn re2(v: &ComplexThreeVector, z: Complex64) -> ThreeVector {
    v.map(|c| 2.0 * (c * z).re)
}

/// Superposition of preferred-frame modes over the invariant measure.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPacket {
    alpha: f64,
    modes: Vec<PacketMode>,
}

/// Relative spectral weight below which samples inside `|k| ≤ α` are ignored.
const NEGLIGIBLE: f64 = 1e-12;

pub fn synthesize_packet<S>(spectrum: S, alpha: f64, quadrature: &Quadrature) -> Result<SpectralPacket>
where
    S: Fn(&ThreeVector) -> ComplexThreeVector,
{
    let nodes = quadrature.nodes()?;
    let samples: Vec<(ThreeVector, f64, ComplexThreeVector)> = nodes
        .into_iter()
        .map(|(k, w)| {
            let k0 = (k.norm_squared() - alpha * alpha).max(0.0).sqrt();
            let scale = if quadrature.is_single() {
                w
            } else {
                w / (2.0 * k0.max(f64::MIN_POSITIVE))
            };
            (k, scale, spectrum(&k))
        })
        .collect();
    let peak = samples.iter().map(|s| s.2.norm()).fold(0.0, f64::max);
    let mut modes = Vec::with_capacity(samples.len());
    for (k, w, n) in samples {
        if k.norm() <= alpha {
            if n.norm() > NEGLIGIBLE * peak {
                return Err(Error::Evanescent { kmag: k.norm(), alpha });
            }
            continue;
        }
        if n.norm() == 0.0 {
            continue;
        }
        modes.push(PacketMode::new(k, alpha, n * Complex64::new(w, 0.0))?);
    }
    Ok(SpectralPacket { alpha, modes })
}

impl SpectralPacket {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn modes(&self) -> &[PacketMode] {
        &self.modes
    }

    /// Sum of per-mode period-averaged densities; exact for well-separated modes.
    pub fn incoherent_momentum_density(&self) -> Vector4<f64> {
        self.modes.iter().map(PacketMode::momentum_density).sum()
    }

    pub fn field_at(&self, x: &FourVector) -> (ThreeVector, ThreeVector) {
        let mut e = ThreeVector::zeros();
        let mut b = ThreeVector::zeros();
        for m in &self.modes {
            let z = m.phase(x);
            e += re2(&m.e, z);
            b += re2(&m.b, z);
        }
        (e, b)
    }

    /// Radiation-gauge potential `A = (0, Σ 2Re(i n e^{iθ}))` with its gradient.
    pub fn potential_at(&self, x: &FourVector) -> FourPotential {
        let mut value = Vector4::zeros();
        let mut grad = Matrix4::zeros();
        for m in &self.modes {
            let z = m.phase(x);
            let a = re2(&m.a, z);
            let da = re2(&m.a, z * Complex64::i());
            let kl = Vector4::new(m.k0, -m.k.x, -m.k.y, -m.k.z);
            let da4 = Vector4::new(0.0, da.x, da.y, da.z);
            value += Vector4::new(0.0, a.x, a.y, a.z);
            grad += kl * da4.transpose();
        }
        FourPotential::new(value, grad)
    }

    pub fn sample_fields(&self, points: &[FourVector], exec: Exec) -> Vec<(ThreeVector, ThreeVector)> {
        exec.map(points, |x| self.field_at(x))
    }
}

impl PotentialField for SpectralPacket {
    fn potential_at(&self, x: &FourVector) -> FourPotential {
        SpectralPacket::potential_at(self, x)
    }
}

pub fn packet_field_at(packet: &SpectralPacket, x: &FourVector) -> (ThreeVector, ThreeVector) {
    packet.field_at(x)
}

pub fn packet_potential_at(packet: &SpectralPacket, x: &FourVector) -> FourPotential {
    packet.potential_at(x)
}

/// Gaussian amplitude `|a| = amplitude · exp(−|k − k_c|²/(2σ²))`, linearly
/// polarized along the first transverse basis vector of `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianSpectrum {
    pub center: ThreeVector,
    pub width: f64,
    pub amplitude: f64,
}

impl GaussianSpectrum {
    pub fn n(&self, k: &ThreeVector) -> ComplexThreeVector {
        let g = self.amplitude * (-(k - self.center).norm_squared() / (2.0 * self.width * self.width)).exp();
        let (e1, _) = transverse_basis(k);
        e1.map(|x| Complex64::new(-0.5 * g * x, 0.0))
    }
}
