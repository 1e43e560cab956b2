use nalgebra::{Matrix3, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ComplexFieldTensor, FourPotential, PotentialField};
use crate::kinematics::{FourVector, FourVelocity};

use super::wave::{PlaneWave, WaveVector};

type C4 = Vector4<Complex64>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn complexify(v: &Vector4<f64>) -> C4 {
    v.map(c)
}

fn lower_c(g: &Matrix4<f64>, v: &C4) -> C4 {
    g.map(c) * v
}

fn pair(a: &C4, b: &C4) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// `(α(un) + i(kn)) / (α + i(uk))`.
pub fn polarization_prefactor(k: &FourVector, u: &FourVelocity, alpha: f64, n: &C4) -> Result<Complex64> {
    let g = u.metric();
    let ul = complexify(&u.covariant().components);
    let kl = lower_c(g.lower_matrix(), &complexify(&k.components));
    let uk = pair(&ul, &complexify(&k.components));
    let den = c(alpha) + Complex64::i() * uk;
    if den.norm() <= 1e-14 * (1.0 + k.components.norm()) {
        return Err(Error::SingularPrefactor);
    }
    Ok((c(alpha) * pair(&ul, n) + Complex64::i() * pair(&kl, n)) / den)
}

/// Evaluates the closed-form amplitude without admissibility checks.
pub fn polarization_formula(
    k: &FourVector,
    u: &FourVelocity,
    alpha: f64,
    n: &C4,
    prefactor: Complex64,
) -> ComplexFieldTensor {
    let kc = complexify(&k.components);
    let uc = complexify(&u.contravariant().components);
    ComplexFieldTensor::wedge(&kc, &uc)
        .scale(prefactor)
        .add(&ComplexFieldTensor::wedge(&kc, n).scale(c(-1.0)))
        .add(&ComplexFieldTensor::wedge(&uc, n).scale(Complex64::new(0.0, -alpha)))
}

/// Rejects `n` in the span of `k` and `u`: the amplitude then vanishes
/// identically (pure gauge).
fn check_basis(k: &FourVector, u: &FourVelocity, n: &C4) -> Result<()> {
    let vs = [complexify(&k.components), complexify(&u.contravariant().components), *n];
    let gram = Matrix3::from_fn(|i, j| vs[i].dotc(&vs[j]));
    let det = gram.determinant().norm();
    let scale: f64 = vs.iter().map(|v| v.norm_squared()).product();
    if !(det > 1e-10 * scale) {
        return Err(Error::DegenerateBasis);
    }
    Ok(())
}

/// Amplitude `e^{μν}` of the mode `e^{μν}e^{ikx} + c.c.`:
///
/// ```text
/// e^{μν} = [(α(un) + i(kn)) / (α + i(uk))] (k^μu^ν − k^νu^μ)
///        − (k^μn^ν − k^νn^μ) − iα(u^μn^ν − u^νn^μ)
/// ```
pub fn polarization_tensor(pw: &PlaneWave, n: &C4) -> Result<ComplexFieldTensor> {
    let wave = pw.wave();
    tensor_for(wave, n)
}

pub(crate) fn tensor_for(wave: &WaveVector, n: &C4) -> Result<ComplexFieldTensor> {
    let k = wave.contravariant();
    let u = wave.frame();
    check_basis(&k, u, n)?;
    let p = polarization_prefactor(&k, u, wave.alpha(), n)?;
    Ok(polarization_formula(&k, u, wave.alpha(), n, p))
}

/// `((ik_μ + αu_μ)e^{μν}, (ik_μ − αu_μ)ê^{μν})`.
pub fn amplitude_residuals(e: &ComplexFieldTensor, k: &FourVector, u: &FourVelocity, alpha: f64) -> (C4, C4) {
    let g = u.metric();
    let kl = lower_c(g.lower_matrix(), &complexify(&k.components));
    let ul = complexify(&u.covariant().components);
    let i = Complex64::i();
    let first = (kl * i + ul * c(alpha)).transpose() * e.matrix();
    let second = (kl * i - ul * c(alpha)).transpose() * e.dual(&g).matrix();
    (first.transpose(), second.transpose())
}

/// Complex potential amplitude `a^μ = i n^μ − iP u^μ`, `P` the prefactor of
/// the amplitude formula; `(ik^μ − αu^μ)∧a` reproduces `e^{μν}`.
pub fn potential_amplitude(wave: &WaveVector, n: &C4) -> Result<C4> {
    let k = wave.contravariant();
    let u = wave.frame();
    let p = polarization_prefactor(&k, u, wave.alpha(), n)?;
    let uc = complexify(&u.contravariant().components);
    Ok(n * Complex64::i() - uc * (Complex64::i() * p))
}

/// Real potential `A = a e^{ikx} + c.c.` of a plane wave.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWavePotential {
    pub amplitude: C4,
    pub k_lower: Vector4<f64>,
}

impl PlaneWavePotential {
    pub fn evaluate(&self, x: &FourVector) -> FourPotential {
        let phase = Complex64::from_polar(1.0, self.k_lower.dot(&x.components));
        let z = self.amplitude * phase;
        let value = z.map(|v| 2.0 * v.re);
        // ∂_μ A^ν = 2 Re(i k_μ a^ν e^{ikx})
        let dz = z.map(|v| -2.0 * v.im);
        FourPotential::new(value, self.k_lower * dz.transpose())
    }
}

impl PotentialField for PlaneWavePotential {
    fn potential_at(&self, x: &FourVector) -> FourPotential {
        self.evaluate(x)
    }
}

pub fn potential_for_planewave(pw: &PlaneWave) -> Result<PlaneWavePotential> {
    let n = pw.polarization().complex_n();
    Ok(PlaneWavePotential {
        amplitude: potential_amplitude(pw.wave(), &n)?,
        k_lower: pw.wave().covariant().components,
    })
}
