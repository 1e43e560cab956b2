use nalgebra::{ComplexField, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{MetricTensor, ThreeVector};

/// `ε^{0123}`. Every duality-dependent sign in the crate derives from this value.
pub const LEVI_CIVITA_0123: f64 = 1.0;

/// Sign of the permutation `(a, b, c, d)` of `(0, 1, 2, 3)` times `ε^{0123}`, or 0.
pub fn levi_civita(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let idx = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return 0.0;
            }
        }
    }
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        LEVI_CIVITA_0123
    } else {
        -LEVI_CIVITA_0123
    }
}

/// Real antisymmetric field strength `F^{μν}` (contravariant indices).
///
/// Identification with the fields: `F^{0k} = E^k`, `F^{ij} = ε^{ijk} B^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldTensor(Matrix4<f64>);

/// Complex antisymmetric polarization amplitude `e^{μν}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexFieldTensor(Matrix4<Complex64>);

impl FieldTensor {
    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        let scale = m.abs().max().max(1.0);
        if (m + m.transpose()).abs().max() > 1e-12 * scale {
            return Err(Error::InvalidInput("field tensor must be antisymmetric".into()));
        }
        Ok(Self(m))
    }

    /// Antisymmetrizes without checking; for internal constructions that are
    /// antisymmetric up to round-off.
    pub(crate) fn from_matrix_unchecked(m: Matrix4<f64>) -> Self {
        Self((m - m.transpose()) * 0.5)
    }

    pub fn from_eb(e: &ThreeVector, b: &ThreeVector) -> Self {
        Self(eb_matrix(e, b))
    }

    pub fn to_eb(&self) -> (ThreeVector, ThreeVector) {
        let m = &self.0;
        (
            ThreeVector::new(m[(0, 1)], m[(0, 2)], m[(0, 3)]),
            ThreeVector::new(m[(2, 3)], m[(3, 1)], m[(1, 2)]),
        )
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// `F_{μν} = g_{μα} F^{αβ} g_{βν}`.
    pub fn lowered(&self, g: &MetricTensor) -> Matrix4<f64> {
        g.lower_matrix() * self.0 * g.lower_matrix()
    }

    /// Rank-2 contravariant transformation `D F Dᵀ`.
    pub fn transformed(&self, d: &Matrix4<f64>) -> Self {
        Self(d * self.0 * d.transpose())
    }

    pub fn dual(&self, g: &MetricTensor) -> Self {
        Self(dual_matrix(&self.0, g))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0 * s)
    }

    pub fn add(&self, other: &FieldTensor) -> Self {
        Self(self.0 + other.0)
    }
}

impl ComplexFieldTensor {
    pub fn from_matrix(m: Matrix4<Complex64>) -> Result<Self> {
        let scale = m.map(|z| z.norm()).max().max(1.0);
        if (m + m.transpose()).map(|z| z.norm()).max() > 1e-12 * scale {
            return Err(Error::InvalidInput("field tensor must be antisymmetric".into()));
        }
        Ok(Self(m))
    }

    /// `a ∧ b = a^μ b^ν − a^ν b^μ`.
    pub fn wedge(a: &nalgebra::Vector4<Complex64>, b: &nalgebra::Vector4<Complex64>) -> Self {
        Self(a * b.transpose() - b * a.transpose())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn dual(&self, g: &MetricTensor) -> Self {
        Self(dual_matrix(&self.0, g))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0 * s)
    }

    pub fn add(&self, other: &ComplexFieldTensor) -> Self {
        Self(self.0 + other.0)
    }

    pub fn transformed(&self, d: &Matrix4<f64>) -> Self {
        let dc = d.map(Complex64::from);
        Self(dc * self.0 * dc.transpose())
    }

    /// Real field `e·z + conj(e)·conj(z) = 2 Re(e z)`.
    pub fn real_part_times(&self, z: Complex64) -> FieldTensor {
        FieldTensor::from_matrix_unchecked(self.0.map(|c| 2.0 * (c * z).re))
    }

    pub fn to_eb(&self) -> ([Complex64; 3], [Complex64; 3]) {
        let m = &self.0;
        ([m[(0, 1)], m[(0, 2)], m[(0, 3)]], [m[(2, 3)], m[(3, 1)], m[(1, 2)]])
    }
}

fn eb_matrix(e: &ThreeVector, b: &ThreeVector) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for k in 0..3 {
        m[(0, k + 1)] = e[k];
        m[(k + 1, 0)] = -e[k];
    }
    m[(1, 2)] = b[2];
    m[(2, 1)] = -b[2];
    m[(2, 3)] = b[0];
    m[(3, 2)] = -b[0];
    m[(3, 1)] = b[1];
    m[(1, 3)] = -b[1];
    m
}

/// `F̂^{μν} = ½ ε^{μνσλ} F_{σλ}` with indices lowered by `g`.
pub fn dual_matrix<T>(f: &Matrix4<T>, g: &MetricTensor) -> Matrix4<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let gl = g.lower_matrix().map(T::from_real);
    let low = gl * f * gl;
    let mut out = Matrix4::<T>::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            if mu == nu {
                continue;
            }
            let mut acc = T::zero();
            for s in 0..4 {
                for l in 0..4 {
                    let eps = levi_civita(mu, nu, s, l);
                    if eps != 0.0 {
                        acc += low[(s, l)] * T::from_real(0.5 * eps);
                    }
                }
            }
            out[(mu, nu)] = acc;
        }
    }
    out
}
