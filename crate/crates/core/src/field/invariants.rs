use super::potential::{field_from_potential, FourPotential};
use super::tensor::{levi_civita, FieldTensor};
use crate::error::Result;
use crate::kinematics::FourVelocity;

/// `F^{μν} F̂_{μν}`.
///
/// Because `det g(u) = −1` in every frame, `ε_{μνσλ} = −ε^{μνσλ}` and the
/// contraction needs no metric: `F F̂ = −½ ε^{μνσλ} F^{μν} F^{σλ} = −4 E·B`.
pub fn invariant_f_fdual(f: &FieldTensor) -> f64 {
    let m = f.matrix();
    let mut acc = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let e = levi_civita(a, b, c, d);
                    if e != 0.0 {
                        acc += e * m[(a, b)] * m[(c, d)];
                    }
                }
            }
        }
    }
    -0.5 * acc
}

/// `F^{μν} F_{μν} = −Tr(g F g F)` with `g = g(u)`.
pub fn invariant_f2(f: &FieldTensor, u: &FourVelocity) -> f64 {
    let g = u.metric();
    let m = g.lower_matrix() * f.matrix() * g.lower_matrix() * f.matrix();
    -m.trace()
}

/// `Σ F_{μν} G^{μν}` for two contravariant tensors in the frame of `u`.
pub(crate) fn contract(f: &FieldTensor, g_tensor: &FieldTensor, u: &FourVelocity) -> f64 {
    let low = f.lowered(&u.metric());
    low.component_mul(g_tensor.matrix()).sum()
}

/// First-order Lagrangian density with `F` and `A` independent:
/// `L = −¼ F_{μν}F^{μν} + ½ F_{μν}[∂^μA^ν − ∂^νA^μ − α(u^μA^ν − u^νA^μ)]`.
pub fn lagrangian_density(f: &FieldTensor, a: &FourPotential, u: &FourVelocity, alpha: f64) -> Result<f64> {
    let from_a = field_from_potential(a, u, alpha)?;
    Ok(-0.25 * contract(f, f, u) + 0.5 * contract(f, &from_a, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{boost_matrix, boost_velocity, BoostParameters, ThreeVector};
    use nalgebra::{Matrix4, Vector4};

    #[test]
    fn ffdual_closed_forms() {
        let e = ThreeVector::new(1.0, 0.0, 0.0);
        let b = ThreeVector::new(0.0, 1.0, 0.0);
        assert_eq!(invariant_f_fdual(&FieldTensor::from_eb(&e, &b)), 0.0);
        let z = ThreeVector::new(0.0, 0.0, 1.0);
        assert!((invariant_f_fdual(&FieldTensor::from_eb(&z, &z)) + 4.0).abs() < 1e-15);
    }

    #[test]
    fn ffdual_matches_metric_contraction_in_moving_frame() {
        let u = FourVelocity::new(ThreeVector::new(0.5, -1.1, 0.3));
        let g = u.metric();
        let f = FieldTensor::from_eb(&ThreeVector::new(0.4, 1.3, -0.2), &ThreeVector::new(-0.8, 0.6, 1.9));
        let dual_low = f.dual(&g).lowered(&g);
        let explicit = f.matrix().component_mul(&dual_low).sum();
        assert!((explicit - invariant_f_fdual(&f)).abs() < 1e-12);
    }

    #[test]
    fn f2_closed_forms() {
        let pf = FourVelocity::preferred();
        let b = ThreeVector::new(0.0, 0.0, 1.0);
        assert!((invariant_f2(&FieldTensor::from_eb(&ThreeVector::zeros(), &b), &pf) - 2.0).abs() < 1e-15);
        let null = FieldTensor::from_eb(&ThreeVector::new(1.0, 0.0, 0.0), &ThreeVector::new(0.0, 1.0, 0.0));
        assert_eq!(invariant_f2(&null, &pf), 0.0);
    }

    #[test]
    fn f2_matches_expanded_form() {
        // expansion with explicit u-dependent terms, checked against the trace
        let u = FourVelocity::new(ThreeVector::new(0.7, 0.2, -0.9));
        let e = ThreeVector::new(0.4, 1.3, -0.2);
        let b = ThreeVector::new(-0.8, 0.6, 1.9);
        let us = u.spatial();
        let expanded = 2.0 * (b.norm_squared() - e.norm_squared()) + 4.0 * u.u0() * us.dot(&b.cross(&e))
            - 2.0 * u.u0().powi(2) * us.cross(&b).norm_squared();
        let f = FieldTensor::from_eb(&e, &b);
        assert!((invariant_f2(&f, &u) - expanded).abs() < 1e-12);
    }

    #[test]
    fn invariants_survive_a_boost() {
        let u = FourVelocity::new(ThreeVector::new(0.3, 0.1, -0.2));
        let p = BoostParameters::from_three_velocity(u, ThreeVector::new(-0.3, 0.2, 0.4)).unwrap();
        let f = FieldTensor::from_eb(&ThreeVector::new(0.4, 1.3, -0.2), &ThreeVector::new(-0.8, 0.6, 1.9));
        let fp = f.transformed(&boost_matrix(&p));
        let up = boost_velocity(&p);
        assert!((invariant_f2(&f, &u) - invariant_f2(&fp, &up)).abs() < 1e-10);
        assert!((invariant_f_fdual(&f) - invariant_f_fdual(&fp)).abs() < 1e-10);
    }

    #[test]
    fn lagrangian_vanishes_for_zero_fields() {
        let l = lagrangian_density(
            &FieldTensor::zero(),
            &FourPotential::zero(),
            &FourVelocity::preferred(),
            0.3,
        )
        .unwrap();
        assert_eq!(l, 0.0);
    }

    #[test]
    fn lagrangian_on_shell_and_stationary() {
        let u = FourVelocity::new(ThreeVector::new(0.2, -0.6, 0.4));
        let alpha = 0.7;
        let grad = Matrix4::from_fn(|i, j| ((i * 4 + j) as f64 * 0.37).sin());
        let a = FourPotential::new(Vector4::new(0.3, -1.2, 0.8, 0.5), grad);
        let f = field_from_potential(&a, &u, alpha).unwrap();
        let l = lagrangian_density(&f, &a, &u, alpha).unwrap();
        assert!((l - 0.25 * invariant_f2(&f, &u)).abs() < 1e-12);
        // finite-difference functional derivative along random antisymmetric directions
        let h = 1e-5;
        for seed in 0..6 {
            let dir = Matrix4::from_fn(|i, j| ((i * 7 + j * 3 + seed * 11) as f64).cos());
            let dir = FieldTensor::from_matrix(dir - dir.transpose()).unwrap();
            let lp = lagrangian_density(&f.add(&dir.scaled(h)), &a, &u, alpha).unwrap();
            let lm = lagrangian_density(&f.add(&dir.scaled(-h)), &a, &u, alpha).unwrap();
            assert!(((lp - lm) / (2.0 * h)).abs() < 1e-8);
        }
    }
}
