use std::f64::consts::PI;

use nalgebra::Vector4;
use num_complex::Complex64;
use pfem::field::{field_from_potential, invariant_f2, invariant_f_fdual, PotentialField};
use pfem::kinematics::{BoostParameters, FourVector, FourVelocity, ThreeVector};
use pfem::planewave::{amplitude_residuals, boost_planewave, polarization_tensor, PlaneWave, Polarization, WaveVector};
use proptest::prelude::*;

fn vec3(max: f64) -> impl Strategy<Value = ThreeVector> {
    prop::array::uniform3(-max..max).prop_map(|a| ThreeVector::new(a[0], a[1], a[2]))
}

fn event() -> impl Strategy<Value = FourVector> {
    prop::array::uniform4(-5.0..5.0f64).prop_map(|a| FourVector::event(a[0], a[1], a[2], a[3]))
}

/// Preferred-frame wave with `|k| ∈ (α, α + 5)` and amplitudes up to 2.
fn wave() -> impl Strategy<Value = PlaneWave> {
    (
        vec3(1.0),
        0.05..5.0f64,
        0.0..3.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
        0.0..2.0 * PI,
    )
        .prop_filter_map("degenerate direction", |(dir, extra, alpha, a, b, phi)| {
            let n = dir.norm();
            (n > 1e-2).then(|| {
                let k = dir * ((alpha + extra) / n);
                PlaneWave::preferred(k, alpha, Polarization::transverse(&k, a, b, phi)).unwrap()
            })
        })
}

fn amplitude_scale(pw: &PlaneWave) -> f64 {
    let p = pw.polarization();
    pw.wave().spatial().norm_squared() * (p.a.norm() + p.b.norm()) + 1e-300
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn amplitude_solves_momentum_space_equations(
        u in vec3(1.5),
        ks in vec3(4.0),
        alpha in 0.0..2.5f64,
        re in prop::array::uniform4(-1.0..1.0f64),
        im in prop::array::uniform4(-1.0..1.0f64),
    ) {
        let u = FourVelocity::new(u);
        prop_assume!(ks.norm() > alpha + 1e-3);
        let k0 = (ks.norm_squared() - alpha * alpha).sqrt() - u.u0() * u.spatial().dot(&ks);
        let Ok(wave) = WaveVector::from_contravariant(&FourVector::contravariant(k0, ks), alpha, u) else {
            return Ok(());
        };
        let n = Vector4::from_fn(|i, _| Complex64::new(re[i], im[i]));
        let pw = PlaneWave::new(wave, Polarization::new(ThreeVector::zeros(), ThreeVector::zeros(), 0.0)).unwrap();
        let Ok(e) = polarization_tensor(&pw, &n) else { return Ok(()) };
        let (r1, r2) = amplitude_residuals(&e, &wave.contravariant(), &u, alpha);
        prop_assert!(r1.camax() < 1e-12 && r2.camax() < 1e-12);
    }

    #[test]
    fn closed_form_fields_solve_preferred_frame_equations(pw in wave(), x in event()) {
        let r = pw.jet(&x).unwrap().residual(pw.alpha());
        prop_assert!(r.max_abs() < 1e-12 * amplitude_scale(&pw));
    }

    #[test]
    fn invariants_match_closed_forms(pw in wave(), x in event()) {
        let f = pw.field_tensor_at(&x).unwrap();
        let s = amplitude_scale(&pw).powi(2);
        prop_assert!((invariant_f_fdual(&f) + 4.0 * pw.e_dot_b()).abs() < 1e-12 * s);
        prop_assert!((invariant_f2(&f, &FourVelocity::preferred()) - 2.0 * pw.b2_minus_e2(&x)).abs() < 1e-12 * s);
    }

    #[test]
    fn fields_are_transverse(pw in wave(), x in event()) {
        let (e, b) = pw.fields_at(&x).unwrap();
        let k = pw.wave().spatial();
        let s = amplitude_scale(&pw);
        prop_assert!(e.dot(&k).abs() < 1e-12 * s && b.dot(&k).abs() < 1e-12 * s);
    }

    #[test]
    fn e_dot_b_vanishes_only_for_linear_polarization(
        dir in vec3(1.0),
        alpha in 0.1..2.0f64,
        a in prop_oneof![Just(0.0), 0.2..2.0f64],
        b in prop_oneof![Just(0.0), 0.2..2.0f64],
        x in event(),
    ) {
        prop_assume!(dir.norm() > 1e-2 && (a != 0.0 || b != 0.0));
        let k = dir.normalize() * (alpha + 1.0);
        let pw = PlaneWave::preferred(k, alpha, Polarization::transverse(&k, a, b, 0.3)).unwrap();
        let (e, bf) = pw.fields_at(&x).unwrap();
        let linear = a == 0.0 || b == 0.0;
        let s = amplitude_scale(&pw).powi(2);
        prop_assert_eq!(e.dot(&bf).abs() < 1e-12 * s, linear);
        prop_assert!(!(e.norm() == 0.0 && bf.norm() == 0.0));
    }

    #[test]
    fn angle_is_constant_for_linear_and_circular_polarization(
        dir in vec3(1.0),
        alpha in 0.0..2.0f64,
        amp in 0.2..2.0f64,
        circular in any::<bool>(),
        t1 in -5.0..5.0f64,
        t2 in -5.0..5.0f64,
    ) {
        prop_assume!(dir.norm() > 1e-2);
        let k = dir.normalize() * (alpha + 1.0);
        let b = if circular { amp } else { 0.0 };
        let pw = PlaneWave::preferred(k, alpha, Polarization::transverse(&k, amp, b, 0.0)).unwrap();
        let cosine = |t: f64| {
            let (e, bf) = pw.fields_at(&FourVector::event(t, 0.4, -0.2, 0.1)).unwrap();
            e.dot(&bf) / (e.norm() * bf.norm())
        };
        let (c1, c2) = (cosine(t1), cosine(t2));
        prop_assume!(c1.is_finite() && c2.is_finite());
        prop_assert!((c1 - c2).abs() < 1e-9);
    }

    #[test]
    fn group_times_phase_speed_is_one(pw in wave()) {
        let vg = pw.group_velocity().unwrap().norm();
        let vp = pw.phase_velocity().unwrap().norm();
        prop_assert!((vg * vp - 1.0).abs() < 1e-12);
        prop_assert!(vg >= 1.0 && vp <= 1.0);
    }

    #[test]
    fn vacuum_limit_is_continuous(dir in vec3(1.0), kmag in 0.5..4.0f64, x in event()) {
        prop_assume!(dir.norm() > 1e-2);
        let k = dir.normalize() * kmag;
        let pol = Polarization::transverse(&k, 1.0, 0.5, 0.2);
        let vac = PlaneWave::preferred(k, 0.0, pol).unwrap();
        let eps = 1e-7;
        let near = PlaneWave::preferred(k, eps, pol).unwrap();
        let (e0, b0) = vac.fields_at(&x).unwrap();
        let (e1, b1) = near.fields_at(&x).unwrap();
        prop_assert!(vac.xi() == 0.0);
        prop_assert!((e0 - e1).norm() < 1e-5 * kmag && (b0 - b1).norm() < 1e-5 * kmag);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boosted_waves_remain_solutions(pw in wave(), dir in vec3(1.0), speed in 0.0..0.9f64, x in event()) {
        prop_assume!(dir.norm() > 1e-2);
        let p = BoostParameters::from_three_velocity(FourVelocity::preferred(), dir.normalize() * speed).unwrap();
        let b = boost_planewave(&pw, &p).unwrap();
        let (r1, r2) = b.residual_at(&x);
        let gamma2 = 1.0 / (1.0 - speed * speed);
        prop_assert!(r1.amax().max(r2.amax()) < 1e-11 * amplitude_scale(&pw) * gamma2);
        let f = field_from_potential(&b.potential_at(&x), b.frame(), b.alpha()).unwrap();
        prop_assert!((f.matrix() - b.field_at(&x).matrix()).amax() < 1e-11 * amplitude_scale(&pw) * gamma2);
        prop_assert!(b.wave_vector().unwrap().k0() > 0.0);
    }
}

#[test]
fn elliptic_polarization_angle_varies_in_time() {
    let k = ThreeVector::new(0.0, 0.0, 2.0);
    let pw = PlaneWave::preferred(k, 1.0, Polarization::transverse(&k, 1.0, 0.5, 0.0)).unwrap();
    let cosine = |t: f64| {
        let (e, b) = pw.fields_at(&FourVector::event(t, 0.0, 0.0, 0.0)).unwrap();
        e.dot(&b) / (e.norm() * b.norm())
    };
    assert!((cosine(0.0) - cosine(0.7)).abs() > 0.1);
}
