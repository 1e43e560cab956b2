//! Preferred-frame form of the field equations.
//!
//! At `u = (1, 0)` the metric is `diag(1, −1, −1, −1)`, `u_μ = (1, 0, 0, 0)`,
//! `F^{0k} = E^k`, `F^{ij} = ε^{ijk}B^k`, and with `ε^{0123} = +1` the dual
//! has `Ê = B`, `B̂ = −E`. Component by component:
//!
//! ```text
//! ν = 0 of  ∂_μF^{μν} + αu_μF^{μν} = 0:   −∇·E = 0
//! ν = j:    ∂_t E^j + ε^{ijk}∂_i B^k + α E^j = 0   ⇒  ∂_t E = ∇×B − αE
//! ν = 0 of  ∂_μF̂^{μν} − αu_μF̂^{μν} = 0:   −∇·B = 0
//! ν = j:    ∂_t B^j − ε^{ijk}∂_i E^k − α B^j = 0   ⇒  ∂_t B = −∇×E + αB
//! ```
//!
//! Eliminating `B` with `∇·E = 0`:
//! `∂_t²E = ∇×(−∇×E + αB) − α(∇×B − αE) = ∇²E + α²E`, the tachyonic wave
//! equation `(∂_t² − ∇²)F = α²F`; the same holds for `B`.

use nalgebra::{Matrix3, Matrix4};

use crate::field::FieldTensor;
use crate::kinematics::ThreeVector;

/// Coefficients of
/// `∂_t E = curl_e ∇×B + react_e α E` and `∂_t B = curl_b ∇×E + react_b α B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PfEquations {
    pub curl_e: f64,
    pub react_e: f64,
    pub curl_b: f64,
    pub react_b: f64,
}

pub const PF_EQUATIONS: PfEquations = PfEquations {
    curl_e: 1.0,
    react_e: -1.0,
    curl_b: -1.0,
    react_b: 1.0,
};

pub fn derive_pf_equations() -> PfEquations {
    PF_EQUATIONS
}

/// Fields with first derivatives at a point; `grad_e[(i, j)] = ∂_i E^j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldJet {
    pub e: ThreeVector,
    pub b: ThreeVector,
    pub de_dt: ThreeVector,
    pub db_dt: ThreeVector,
    pub grad_e: Matrix3<f64>,
    pub grad_b: Matrix3<f64>,
}

fn curl(grad: &Matrix3<f64>) -> ThreeVector {
    ThreeVector::new(
        grad[(1, 2)] - grad[(2, 1)],
        grad[(2, 0)] - grad[(0, 2)],
        grad[(0, 1)] - grad[(1, 0)],
    )
}

/// Residuals `[∇·E, ∂_tE − ∇×B + αE, ∇·B, ∂_tB + ∇×E − αB]` (scalar, vector, scalar, vector).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PfResidual {
    pub div_e: f64,
    pub ampere: ThreeVector,
    pub div_b: f64,
    pub faraday: ThreeVector,
}

impl PfResidual {
    pub fn max_abs(&self) -> f64 {
        self.div_e
            .abs()
            .max(self.div_b.abs())
            .max(self.ampere.amax())
            .max(self.faraday.amax())
    }
}

impl FieldJet {
    pub fn curl_e(&self) -> ThreeVector {
        curl(&self.grad_e)
    }

    pub fn curl_b(&self) -> ThreeVector {
        curl(&self.grad_b)
    }

    pub fn residual(&self, alpha: f64) -> PfResidual {
        let eq = derive_pf_equations();
        PfResidual {
            div_e: self.grad_e.trace(),
            ampere: self.de_dt - self.curl_b() * eq.curl_e - self.e * (eq.react_e * alpha),
            div_b: self.grad_b.trace(),
            faraday: self.db_dt - self.curl_e() * eq.curl_b - self.b * (eq.react_b * alpha),
        }
    }

    /// `F^{μν}` and `∂_λ F^{μν}` for the covariant residual.
    pub fn to_tensor_gradient(&self) -> (FieldTensor, [Matrix4<f64>; 4]) {
        let f = FieldTensor::from_eb(&self.e, &self.b);
        let mut grad = [*FieldTensor::from_eb(&self.de_dt, &self.db_dt).matrix(); 4];
        for i in 0..3 {
            let de = self.grad_e.row(i).transpose();
            let db = self.grad_b.row(i).transpose();
            grad[i + 1] = *FieldTensor::from_eb(&de, &db).matrix();
        }
        (f, grad)
    }
}
