use nalgebra::{Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fdtd::FieldJet;
use crate::field::FieldTensor;
use crate::kinematics::{FourVector, FourVelocity, ThreeVector};

/// `k⁰ = √(|k|² − α²)` on the upper tachyonic shell.
pub fn dispersion_k0(kmag: f64, alpha: f64) -> Result<f64> {
    if !(kmag.is_finite() && alpha.is_finite()) || alpha < 0.0 {
        return Err(Error::InvalidInput(format!(
            "need finite |k| and alpha >= 0, got {kmag}, {alpha}"
        )));
    }
    if kmag <= alpha {
        return Err(Error::Evanescent { kmag, alpha });
    }
    Ok((kmag * kmag - alpha * alpha).sqrt())
}

/// Contravariant on-shell wave vector `(k⁰, k)` in the frame of `u`,
/// satisfying `g_{μν}(u) k^μ k^ν = −α²` and `k⁰ > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveVector {
    k0: f64,
    k: ThreeVector,
    alpha: f64,
    u: FourVelocity,
}

impl WaveVector {
    pub fn preferred(k: ThreeVector, alpha: f64) -> Result<Self> {
        let k0 = dispersion_k0(k.norm(), alpha)?;
        Ok(Self {
            k0,
            k,
            alpha,
            u: FourVelocity::preferred(),
        })
    }

    pub fn from_contravariant(k: &FourVector, alpha: f64, u: FourVelocity) -> Result<Self> {
        if !k.is_contravariant() {
            return Err(Error::InvalidInput("wave vector must be contravariant".into()));
        }
        let k0 = k.t0();
        if !(k0 > 0.0) {
            return Err(Error::InvalidInput(format!("spectral condition k0 > 0 violated: {k0}")));
        }
        let shell = u.metric().interval(k) + alpha * alpha;
        let scale = k.components.norm_squared().max(alpha * alpha).max(1e-300);
        if shell.abs() > 1e-10 * scale {
            return Err(Error::InvalidInput(format!("wave vector is off shell by {shell:e}")));
        }
        if k.spatial().norm() <= alpha && u.is_preferred() {
            return Err(Error::Evanescent {
                kmag: k.spatial().norm(),
                alpha,
            });
        }
        Ok(Self {
            k0,
            k: k.spatial(),
            alpha,
            u,
        })
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn spatial(&self) -> ThreeVector {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn frame(&self) -> &FourVelocity {
        &self.u
    }

    pub fn contravariant(&self) -> FourVector {
        FourVector::contravariant(self.k0, self.k)
    }

    pub fn covariant(&self) -> FourVector {
        self.u.metric().lower(&self.contravariant())
    }

    /// `k_μ x^μ`.
    pub fn phase(&self, x: &FourVector) -> f64 {
        self.covariant().components.dot(&x.components)
    }
}

/// Real polarization data `(a, b, φ)` with `n = −(a + i b) e^{iφ}/2`, `n⁰ = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polarization {
    pub a: ThreeVector,
    pub b: ThreeVector,
    pub phi: f64,
}

impl Polarization {
    pub fn new(a: ThreeVector, b: ThreeVector, phi: f64) -> Self {
        Self { a, b, phi }
    }

    /// `a = amp_a ê₁`, `b = amp_b ê₂` with `(ê₁, ê₂, k̂)` right handed.
    pub fn transverse(k: &ThreeVector, amp_a: f64, amp_b: f64, phi: f64) -> Self {
        let (e1, e2) = transverse_basis(k);
        Self::new(e1 * amp_a, e2 * amp_b, phi)
    }

    pub fn complex_n(&self) -> Vector4<Complex64> {
        let rot = Complex64::from_polar(1.0, self.phi);
        let s = |i: usize| -Complex64::new(self.a[i], self.b[i]) * rot * 0.5;
        Vector4::new(Complex64::new(0.0, 0.0), s(0), s(1), s(2))
    }

    fn validate(&self, k: &ThreeVector) -> Result<()> {
        let (na, nb, nk) = (self.a.norm(), self.b.norm(), k.norm());
        let tol = 1e-12;
        if self.a.dot(&self.b).abs() > tol * na * nb {
            return Err(Error::InvalidInput("polarization requires a ⟂ b".into()));
        }
        if self.a.dot(k).abs() > tol * na * nk || self.b.dot(k).abs() > tol * nb * nk {
            return Err(Error::InvalidInput("polarization requires a ⟂ k and b ⟂ k".into()));
        }
        if !self.phi.is_finite() {
            return Err(Error::InvalidInput("polarization phase must be finite".into()));
        }
        Ok(())
    }
}

/// Orthonormal `(ê₁, ê₂)` with `(ê₁, ê₂, k̂)` right handed; `ê₁ = x̂` for `k ∥ ẑ`.
pub fn transverse_basis(k: &ThreeVector) -> (ThreeVector, ThreeVector) {
    let khat = k.normalize();
    let reference = if khat.y.abs() < 0.9 { Vector3::y() } else { Vector3::x() };
    let e1 = reference.cross(&khat).normalize();
    let e2 = khat.cross(&e1);
    (e1, e2)
}

/// Monochromatic solution of the field equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWave {
    wave: WaveVector,
    pol: Polarization,
    xi: f64,
}

impl PlaneWave {
    pub fn new(wave: WaveVector, pol: Polarization) -> Result<Self> {
        pol.validate(&wave.spatial())?;
        let xi = if wave.frame().is_preferred() {
            (wave.k0() / wave.spatial().norm()).clamp(-1.0, 1.0).acos()
        } else {
            f64::NAN
        };
        Ok(Self { wave, pol, xi })
    }

    /// Preferred-frame wave from spatial `k`, `α` and polarization.
    pub fn preferred(k: ThreeVector, alpha: f64, pol: Polarization) -> Result<Self> {
        Self::new(WaveVector::preferred(k, alpha)?, pol)
    }

    pub fn wave(&self) -> &WaveVector {
        &self.wave
    }

    pub fn polarization(&self) -> &Polarization {
        &self.pol
    }

    pub fn alpha(&self) -> f64 {
        self.wave.alpha()
    }

    /// `ξ = arccos(k⁰/|k|)` on the principal branch `[0, π/2)`.
    pub fn xi(&self) -> f64 {
        self.xi
    }

    fn require_preferred(&self) -> Result<()> {
        if self.wave.frame().is_preferred() {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "closed-form fields need the preferred frame; boost the preferred-frame wave instead".into(),
            ))
        }
    }

    /// Electric and magnetic fields in the preferred frame:
    ///
    /// ```text
    /// E = (1/|k|) k × {k × [−cos(kx+φ+ξ) a + sin(kx+φ+ξ) b]}
    /// B = k × [cos(kx+φ) a − sin(kx+φ) b]
    /// ```
    pub fn fields_at(&self, x: &FourVector) -> Result<(ThreeVector, ThreeVector)> {
        self.require_preferred()?;
        let j = self.jet_unchecked(x);
        Ok((j.e, j.b))
    }

    pub fn field_tensor_at(&self, x: &FourVector) -> Result<FieldTensor> {
        let (e, b) = self.fields_at(x)?;
        Ok(FieldTensor::from_eb(&e, &b))
    }

    /// Fields with analytic first derivatives.
    pub fn jet(&self, x: &FourVector) -> Result<FieldJet> {
        self.require_preferred()?;
        Ok(self.jet_unchecked(x))
    }

    pub(crate) fn jet_unchecked(&self, x: &FourVector) -> FieldJet {
        let k = self.wave.spatial();
        let kmag = k.norm();
        let (a, b) = (self.pol.a, self.pol.b);
        let theta = self.wave.phase(x);
        let pe = theta + self.pol.phi + self.xi;
        let pb = theta + self.pol.phi;
        let transverse = |v: ThreeVector| k.cross(&k.cross(&v)) / kmag;
        let e = transverse(-a * pe.cos() + b * pe.sin());
        let de = transverse(a * pe.sin() + b * pe.cos());
        let bf = k.cross(&(a * pb.cos() - b * pb.sin()));
        let db = k.cross(&(-a * pb.sin() - b * pb.cos()));
        // θ = k⁰t − k·x, so ∂_t = k⁰ d/dθ and ∂_i = −k_i d/dθ
        let k0 = self.wave.k0();
        FieldJet {
            e,
            b: bf,
            de_dt: de * k0,
            db_dt: db * k0,
            grad_e: -k * de.transpose(),
            grad_b: -k * db.transpose(),
        }
    }

    /// `v_g = (√(k⁰² + α²)/k⁰) k̂`.
    pub fn group_velocity(&self) -> Result<ThreeVector> {
        self.require_preferred()?;
        let k0 = self.wave.k0();
        let a = self.alpha();
        Ok(self.wave.spatial().normalize() * ((k0 * k0 + a * a).sqrt() / k0))
    }

    /// `v_ph = (k⁰/√(k⁰² + α²)) k̂`.
    pub fn phase_velocity(&self) -> Result<ThreeVector> {
        self.require_preferred()?;
        let k0 = self.wave.k0();
        let a = self.alpha();
        Ok(self.wave.spatial().normalize() * (k0 / (k0 * k0 + a * a).sqrt()))
    }

    /// `E·B = ∓α|a||b||k|`, negative when `(a, b, k)` is right handed.
    pub fn e_dot_b(&self) -> f64 {
        let (a, b, k) = (self.pol.a, self.pol.b, self.wave.spatial());
        let handed = a.cross(&b).dot(&k);
        let sign = if handed > 0.0 {
            -1.0
        } else if handed < 0.0 {
            1.0
        } else {
            0.0
        };
        sign * self.alpha() * a.norm() * b.norm() * k.norm()
    }

    /// `B² − E² = α(a² − b²)|k| sin(2kx + 2φ + ξ)`.
    pub fn b2_minus_e2(&self, x: &FourVector) -> f64 {
        let (a, b) = (self.pol.a, self.pol.b);
        let theta = self.wave.phase(x);
        self.alpha()
            * (a.norm_squared() - b.norm_squared())
            * self.wave.spatial().norm()
            * (2.0 * theta + 2.0 * self.pol.phi + self.xi).sin()
    }

    /// Period-averaged `(p⁰, p)` of the canonical tensor:
    /// `p⁰ = (k⁰)²(a² + b²)/2`, `p = k k⁰ (a² + b²)/2`.
    pub fn momentum_density(&self) -> Vector4<f64> {
        let amp = self.pol.a.norm_squared() + self.pol.b.norm_squared();
        let k0 = self.wave.k0();
        let p = self.wave.spatial() * (k0 * amp / 2.0);
        Vector4::new(k0 * k0 * amp / 2.0, p.x, p.y, p.z)
    }
}

/// `(p⁰)² − p² = −α²(k⁰)²(a² + b²)²/4` for the preferred-frame wave.
pub fn momentum_shell(p: &Vector4<f64>) -> f64 {
    p[0] * p[0] - (p[1] * p[1] + p[2] * p[2] + p[3] * p[3])
}
