use nalgebra::{Matrix4, Vector4};

use super::tensor::{dual_matrix, FieldTensor};
use crate::kinematics::FourVelocity;

/// Residuals of the field equations at a point:
///
/// ```text
/// ∂_μ F^{μν} + α u_μ F^{μν}  (first)
/// ∂_μ F̂^{μν} − α u_μ F̂^{μν}  (second)
/// ```
///
/// `gradient[λ]` holds `∂_λ F^{μν}`.
pub fn field_equation_residual(
    f: &FieldTensor,
    gradient: &[Matrix4<f64>; 4],
    u: &FourVelocity,
    alpha: f64,
) -> (Vector4<f64>, Vector4<f64>) {
    let g = u.metric();
    let u_low = g.lower(&u.contravariant()).components;
    let dual = dual_matrix(f.matrix(), &g);
    let mut first = f.matrix().transpose() * u_low * alpha;
    let mut second = -dual.transpose() * u_low * alpha;
    for mu in 0..4 {
        let grad_dual = dual_matrix(&gradient[mu], &g);
        first += gradient[mu].row(mu).transpose();
        second += grad_dual.row(mu).transpose();
    }
    (first, second)
}
