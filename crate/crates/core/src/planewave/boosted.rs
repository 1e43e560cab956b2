use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::field::{field_equation_residual, FieldTensor, FourPotential, PotentialField};
use crate::kinematics::{boost_matrix, boost_velocity, BoostParameters, FourVector, FourVelocity, Variance};

use super::polarization::{potential_for_planewave, PlaneWavePotential};
use super::wave::{PlaneWave, WaveVector};

/// Preferred-frame plane wave seen from a boosted frame:
/// `F'(x') = D F(D⁻¹x') Dᵀ`.
#[derive(Clone, Debug)]
pub struct BoostedPlaneWave {
    source: PlaneWave,
    d: Matrix4<f64>,
    d_inv: Matrix4<f64>,
    u: FourVelocity,
    potential: Option<PlaneWavePotential>,
}

pub fn boost_planewave(pw: &PlaneWave, p: &BoostParameters) -> Result<BoostedPlaneWave> {
    if !pw.wave().frame().is_preferred() || !p.u().is_preferred() {
        return Err(Error::InvalidInput(
            "boost_planewave starts from a preferred-frame wave and a boost out of the preferred frame".into(),
        ));
    }
    let d = boost_matrix(p);
    let d_inv = crate::kinematics::inverse_boost_matrix(p);
    Ok(BoostedPlaneWave {
        source: *pw,
        d,
        d_inv,
        u: boost_velocity(p),
        potential: potential_for_planewave(pw).ok(),
    })
}

impl BoostedPlaneWave {
    pub fn frame(&self) -> &FourVelocity {
        &self.u
    }

    pub fn source(&self) -> &PlaneWave {
        &self.source
    }

    pub fn alpha(&self) -> f64 {
        self.source.alpha()
    }

    fn preimage(&self, x: &FourVector) -> FourVector {
        FourVector {
            components: self.d_inv * x.components,
            variance: x.variance,
        }
    }

    pub fn field_at(&self, x: &FourVector) -> FieldTensor {
        let (e, b) = self
            .source
            .fields_at(&self.preimage(x))
            .expect("source is preferred-frame");
        FieldTensor::from_eb(&e, &b).transformed(&self.d)
    }

    /// `F'` and `∂'_λ F'^{μν}`.
    pub fn jet_at(&self, x: &FourVector) -> (FieldTensor, [Matrix4<f64>; 4]) {
        let (f, grad) = self.source.jet_unchecked(&self.preimage(x)).to_tensor_gradient();
        let moved: [Matrix4<f64>; 4] = std::array::from_fn(|r| self.d * grad[r] * self.d.transpose());
        let boosted = std::array::from_fn(|l| (0..4).map(|r| moved[r] * self.d_inv[(r, l)]).sum());
        (f.transformed(&self.d), boosted)
    }

    /// Field-equation residuals with the boosted PF four-velocity.
    pub fn residual_at(&self, x: &FourVector) -> (Vector4<f64>, Vector4<f64>) {
        let (f, grad) = self.jet_at(x);
        field_equation_residual(&f, &grad, &self.u, self.alpha())
    }

    pub fn wave_vector(&self) -> Result<WaveVector> {
        let k = FourVector {
            components: self.d * self.source.wave().contravariant().components,
            variance: Variance::Contravariant,
        };
        WaveVector::from_contravariant(&k, self.alpha(), self.u)
    }
}

impl PotentialField for BoostedPlaneWave {
    fn potential_at(&self, x: &FourVector) -> FourPotential {
        let Some(pot) = &self.potential else {
            return FourPotential::zero();
        };
        let a = pot.evaluate(&self.preimage(x));
        let grad = a.gradient.expect("analytic potential");
        FourPotential::new(self.d * a.value, self.d_inv.transpose() * grad * self.d.transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_from_potential;
    use crate::kinematics::ThreeVector;
    use crate::planewave::Polarization;

    fn wave() -> PlaneWave {
        let k = ThreeVector::new(0.4, -1.0, 2.2);
        PlaneWave::preferred(k, 0.9, Polarization::transverse(&k, 0.6, 0.25, 0.8)).unwrap()
    }

    #[test]
    fn identity_boost_is_transparent() {
        let pw = wave();
        let b = boost_planewave(&pw, &BoostParameters::identity(FourVelocity::preferred())).unwrap();
        let x = FourVector::event(0.3, 1.0, -0.2, 0.5);
        assert!((b.field_at(&x).matrix() - pw.field_tensor_at(&x).unwrap().matrix()).norm() < 1e-14);
    }

    #[test]
    fn boosted_solution_and_wave_vector() {
        let pw = wave();
        let p = BoostParameters::from_w(FourVelocity::preferred(), ThreeVector::new(0.3, 0.5, -0.4)).unwrap();
        let b = boost_planewave(&pw, &p).unwrap();
        for x in [
            FourVector::event(0.0, 0.0, 0.0, 0.0),
            FourVector::event(1.3, -0.7, 2.0, 0.4),
        ] {
            let (r1, r2) = b.residual_at(&x);
            assert!(r1.amax() < 1e-10 && r2.amax() < 1e-10);
            let f = field_from_potential(&b.potential_at(&x), b.frame(), b.alpha()).unwrap();
            assert!((f.matrix() - b.field_at(&x).matrix()).norm() < 1e-11);
        }
        let k = b.wave_vector().unwrap();
        assert!(k.k0() > 0.0);
    }

    #[test]
    fn rejects_non_preferred_source() {
        let p = BoostParameters::identity(FourVelocity::new(ThreeVector::new(0.1, 0.0, 0.0)));
        assert!(boost_planewave(&wave(), &p).is_err());
    }
}
