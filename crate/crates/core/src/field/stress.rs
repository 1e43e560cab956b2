use nalgebra::{Matrix4, Vector4};

use super::invariants::invariant_f2;
use super::tensor::FieldTensor;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kinematics::{FourVector, FourVelocity};

/// Canonical energy-momentum tensor in mixed form, `entry(μ, ν) = T_μ^ν`.
///
/// ```text
/// T_μ^ν = ¼ δ_μ^ν F² − F_{μλ} F^{νλ} − α F^ν_λ A^λ u_μ
/// ```
///
/// The lower index `μ` labels the translation generator, the upper index
/// `ν` the current, so `∂_ν T_μ^ν = 0` on shell and the momentum on a
/// hyperplane `x⁰ = const` is `P_μ = ∫ d³x T_μ^0`. Neither symmetric nor
/// gauge invariant pointwise. With `α = 0` this is the standard canonical
/// Maxwell tensor (`T_0^0 = ½(E² + B²)` in the preferred frame).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StressTensor(pub Matrix4<f64>);

impl StressTensor {
    pub fn entry(&self, lower: usize, upper: usize) -> f64 {
        self.0[(lower, upper)]
    }

    /// `T_μ^0` for `μ = 0..3`: the density whose integral is `P_μ`.
    pub fn momentum_density(&self) -> Vector4<f64> {
        self.0.column(0).into_owned()
    }
}

pub fn stress_tensor(f: &FieldTensor, a: &Vector4<f64>, u: &FourVelocity, alpha: f64) -> StressTensor {
    let g = u.metric();
    let gl = g.lower_matrix();
    let fm = f.matrix();
    let f_low = gl * fm * gl;
    let f2 = invariant_f2(f, u);
    let quad = f_low * fm.transpose();
    let f_mixed_a = fm * gl * a;
    let u_low = g.lower(&u.contravariant()).components;
    let t = Matrix4::identity() * (0.25 * f2) - quad - u_low * f_mixed_a.transpose() * alpha;
    StressTensor(t)
}

/// Field and potential samples on a rectangular patch of the hyperplane
/// `x⁰ = const`, in row-major order with the last axis fastest.
#[derive(Clone, Debug)]
pub struct SampledRegion {
    shape: [usize; 3],
    spacing: [f64; 3],
    fields: Vec<FieldTensor>,
    potentials: Vec<Vector4<f64>>,
}

impl SampledRegion {
    pub fn new(
        shape: [usize; 3],
        spacing: [f64; 3],
        fields: Vec<FieldTensor>,
        potentials: Vec<Vector4<f64>>,
    ) -> Result<Self> {
        let n: usize = shape.iter().product();
        if n == 0 || spacing.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::InvalidInput("region needs positive shape and spacing".into()));
        }
        if fields.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                got: fields.len(),
            });
        }
        if potentials.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                got: potentials.len(),
            });
        }
        Ok(Self {
            shape,
            spacing,
            fields,
            potentials,
        })
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn volume(&self) -> f64 {
        self.cell_volume() * self.len() as f64
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn potentials_mut(&mut self) -> &mut [Vector4<f64>] {
        &mut self.potentials
    }
}

/// `P_μ = ∫ d³x T_μ^0`, by the rectangle rule (exact for band-limited
/// periodic data) with compensated, partition-independent summation.
pub fn four_momentum(region: &SampledRegion, u: &FourVelocity, alpha: f64, exec: Exec) -> FourVector {
    let sums = exec.sum_range::<4, _>(region.len(), |i| {
        let d = stress_tensor(&region.fields[i], &region.potentials[i], u, alpha).momentum_density();
        [d[0], d[1], d[2], d[3]]
    });
    let dv = region.cell_volume();
    FourVector::from_array(sums.map(|s| s * dv), crate::kinematics::Variance::Covariant)
}

/// Average contravariant density `p^μ = g^{μν} P_ν / V` over the region.
pub fn momentum_density(region: &SampledRegion, u: &FourVelocity, alpha: f64, exec: Exec) -> FourVector {
    let p = four_momentum(region, u, alpha, exec);
    let raised = u.metric().raise(&p);
    FourVector {
        components: raised.components / region.volume(),
        variance: raised.variance,
    }
}
