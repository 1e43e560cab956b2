use nalgebra::{Matrix4, Vector4};
use pfem::field::{
    field_from_potential, gauge_transform, invariant_f2, invariant_f_fdual, lagrangian_density, FieldTensor,
    FourPotential, GaugeJet,
};
use pfem::kinematics::{boost_matrix, boost_velocity, BoostParameters, FourVelocity, ThreeVector};
use proptest::prelude::*;

fn vec3(max: f64) -> impl Strategy<Value = ThreeVector> {
    prop::array::uniform3(-max..max).prop_map(|a| ThreeVector::new(a[0], a[1], a[2]))
}

fn velocity() -> impl Strategy<Value = FourVelocity> {
    vec3(1.5).prop_map(FourVelocity::new)
}

fn field() -> impl Strategy<Value = FieldTensor> {
    (vec3(3.0), vec3(3.0)).prop_map(|(e, b)| FieldTensor::from_eb(&e, &b))
}

fn matrix4(max: f64) -> impl Strategy<Value = Matrix4<f64>> {
    prop::collection::vec(-max..max, 16).prop_map(Matrix4::from_iterator)
}

fn vector4(max: f64) -> impl Strategy<Value = Vector4<f64>> {
    prop::array::uniform4(-max..max).prop_map(Vector4::from)
}

fn potential() -> impl Strategy<Value = FourPotential> {
    (vector4(2.0), matrix4(2.0)).prop_map(|(v, g)| FourPotential::new(v, g))
}

fn gauge_jet() -> impl Strategy<Value = GaugeJet> {
    (-2.0..2.0, vector4(2.0), matrix4(2.0)).prop_map(|(value, gradient, h)| GaugeJet {
        value,
        gradient,
        hessian: (h + h.transpose()) * 0.5,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn double_dual_is_minus_identity(f in field(), u in velocity()) {
        let g = u.metric();
        let dd = f.dual(&g).dual(&g);
        prop_assert!((dd.matrix() + f.matrix()).amax() < 1e-11 * (1.0 + f.matrix().amax()));
    }

    #[test]
    fn invariants_are_boost_invariant(
        f in field(),
        u in velocity(),
        dir in vec3(1.0),
        speed in 0.0..0.9f64,
    ) {
        prop_assume!(dir.norm() > 1e-3);
        let Ok(p) = BoostParameters::from_three_velocity(u, dir.normalize() * speed) else {
            return Ok(());
        };
        let fp = f.transformed(&boost_matrix(&p));
        let up = boost_velocity(&p);
        let scale = f.matrix().norm_squared() * boost_matrix(&p).norm_squared().powi(2);
        prop_assert!((invariant_f2(&f, &u) - invariant_f2(&fp, &up)).abs() < 1e-10 * scale.max(1.0));
        prop_assert!((invariant_f_fdual(&f) - invariant_f_fdual(&fp)).abs() < 1e-10 * scale.max(1.0));
    }

    #[test]
    fn gauge_transformation_leaves_field(
        a in potential(),
        chi in gauge_jet(),
        u in velocity(),
        alpha in 0.0..2.0f64,
    ) {
        let f = field_from_potential(&a, &u, alpha).unwrap();
        let g = field_from_potential(&gauge_transform(&a, &chi, &u, alpha), &u, alpha).unwrap();
        prop_assert!((f.matrix() - g.matrix()).amax() < 1e-11 * (1.0 + f.matrix().amax()));
    }

    #[test]
    fn lagrangian_reduces_on_shell(a in potential(), u in velocity(), alpha in 0.0..2.0f64) {
        let f = field_from_potential(&a, &u, alpha).unwrap();
        let l = lagrangian_density(&f, &a, &u, alpha).unwrap();
        let quarter = 0.25 * invariant_f2(&f, &u);
        let metric_scale = (1.0 + u.spatial().norm_squared()).powi(2);
        prop_assert!((l - quarter).abs() < 1e-12 * (1.0 + f.matrix().norm_squared() * metric_scale));
    }
}
