use std::f64::consts::PI;

use pfem::exec::Exec;
use pfem::fdtd::{
    diagnostics, divergence_residuals, fit_alpha, init_planewave, is_growing_mode, lattice_growth_rate,
    measure_dispersion, measure_instability, measure_packet_speed, remove_growing_modes, run, step, step_reverse,
    track_packet, track_packet_analytic, Component, GridSpec, GridState, PotentialPolicy,
};
use pfem::kinematics::{FourVector, ThreeVector};
use pfem::planewave::{synthesize_packet, GaussianSpectrum, PlaneWave, Polarization, Quadrature};
use pfem::Error;

const L: f64 = 2.0 * PI * 16.0;

fn mode_wave(mode: i64, alpha: f64, a: f64, b: f64) -> PlaneWave {
    let k = ThreeVector::new(0.0, 0.0, mode as f64 / 16.0);
    PlaneWave::preferred(
        k,
        alpha,
        Polarization::new(ThreeVector::x() * a, ThreeVector::y() * b, 0.0),
    )
    .unwrap()
}

fn norm(s: &GridState) -> f64 {
    Component::ALL
        .iter()
        .map(|&c| s.component(c).iter().map(|v| v * v).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

fn max_diff(a: &GridState, b: &GridState) -> f64 {
    Component::ALL
        .iter()
        .flat_map(|&c| a.component(c).iter().zip(b.component(c)).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn vacuum_wave_returns_after_one_period() {
    let mut errors = Vec::new();
    for cells in [256, 512] {
        let pw = mode_wave(16, 0.0, 1.0, 0.0);
        let period = 2.0 * PI;
        let mut spec = GridSpec::with_courant(1, cells, L, 0.0, period, 0.95);
        spec.dt = period / (period / spec.dt).ceil();
        let initial = init_planewave(&spec, &pw, Exec::Serial).unwrap();
        let mut s = initial.clone();
        run(&mut s, &spec, spec.steps(), Exec::Serial).unwrap();
        errors.push(max_diff(&s, &initial));
    }
    assert!(errors[0] < 1e-2, "{errors:?}");
    assert!(errors[0] / errors[1] > 3.5, "{errors:?}");
}

#[test]
fn forward_then_backward_recovers_state() {
    // α small enough that round-off in the growing modes stays below 1e-10
    let spec = GridSpec::with_courant(1, 256, L, 0.1, 0.0, 0.95);
    let initial = GridState::from_fn(
        &spec,
        |x| {
            let z = x.spatial().z;
            (
                ThreeVector::new((z / 4.0).sin(), (3.0 * z / 8.0).cos(), 0.0),
                ThreeVector::new(0.0, (5.0 * z / 8.0).sin(), 0.0),
            )
        },
        Exec::Serial,
    )
    .unwrap();
    let mut s = initial.clone();
    for _ in 0..300 {
        step(&mut s, &spec, Exec::Serial).unwrap();
    }
    for _ in 0..300 {
        step_reverse(&mut s, &spec, Exec::Serial).unwrap();
    }
    assert!(max_diff(&s, &initial) < 1e-9, "{}", max_diff(&s, &initial));
    assert!(s.time.abs() < 1e-12);
}

#[cfg(feature = "grid3d")]
fn random_divergence_free(spec: &GridSpec, seed: u64) -> GridState {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    // a curl of random staggered data is divergence free on the lattice
    let mut potential = GridState::zeros(spec).unwrap();
    for c in Component::ALL {
        for v in potential.component_mut(c) {
            *v = rng.random_range(-1.0..1.0);
        }
    }
    let mut zero_alpha = *spec;
    zero_alpha.alpha = 0.0;
    zero_alpha.dt = spec.dx() * 0.5;
    let mut s = potential.clone();
    // one E kick adds ∇×B to E, one B kick adds −∇×E to B
    step(&mut s, &zero_alpha, Exec::Serial).unwrap();
    for c in Component::ALL {
        for (v, p) in s.component_mut(c).iter_mut().zip(potential.component(c)) {
            *v -= p;
        }
    }
    s.time = 0.0;
    s
}

#[cfg(feature = "grid3d")]
#[test]
fn divergence_stays_at_round_off_in_three_dimensions() {
    let spec = GridSpec::with_courant(3, 12, 6.0, 0.0, 0.0, 0.9);
    let mut s = random_divergence_free(&spec, 7);
    let (de0, db0) = divergence_residuals(&s, Exec::Serial);
    assert!(de0 < 1e-12 && db0 < 1e-12, "{de0} {db0}");
    for _ in 0..10 {
        run(&mut s, &spec, 100, Exec::Parallel).unwrap();
        let (de, db) = divergence_residuals(&s, Exec::Serial);
        assert!(de < 1e-10 && db < 1e-10, "{de} {db}");
    }
}

#[cfg(feature = "grid3d")]
#[test]
fn divergence_follows_the_reaction_terms() {
    // ∂t∇·E = −α∇·E and ∂t∇·B = α∇·B, so round-off in ∇·B grows at most like e^{αt}
    let spec = GridSpec::with_courant(3, 12, 6.0, 0.7, 0.0, 0.9);
    let mut s = random_divergence_free(&spec, 11);
    let steps = 100;
    run(&mut s, &spec, steps, Exec::Parallel).unwrap();
    let growth = (spec.alpha * spec.dt * steps as f64).exp();
    let (de, db) = divergence_residuals(&s, Exec::Serial);
    assert!(de < 1e-12, "{de}");
    assert!(
        db < 1e-13 * growth * steps as f64,
        "{db} vs bound {}",
        1e-13 * growth * steps as f64
    );
}

#[cfg(feature = "grid3d")]
#[test]
fn three_dimensional_kernel_matches_one_dimensional() {
    let alpha = 0.4;
    let cells = 16;
    let length = 2.0 * PI * 2.0;
    let mut spec1 = GridSpec::with_courant(3, cells, length, alpha, 0.0, 0.9);
    spec1.dimension = 1;
    let mut spec3 = spec1;
    spec3.dimension = 3;
    let pw = PlaneWave::preferred(
        ThreeVector::new(0.0, 0.0, 1.5),
        alpha,
        Polarization::new(ThreeVector::x(), ThreeVector::y() * 0.4, 0.1),
    )
    .unwrap();
    let mut a = init_planewave(&spec1, &pw, Exec::Serial).unwrap();
    let mut b = init_planewave(&spec3, &pw, Exec::Parallel).unwrap();
    run(&mut a, &spec1, 40, Exec::Serial).unwrap();
    run(&mut b, &spec3, 40, Exec::Parallel).unwrap();
    for c in Component::ALL {
        for (idx, v) in b.component(c).iter().enumerate() {
            assert!((v - a.component(c)[idx % cells]).abs() < 1e-13);
        }
    }
}

#[cfg(feature = "grid3d")]
#[test]
fn three_dimensional_serial_and_parallel_agree_bitwise() {
    let spec = GridSpec::with_courant(3, 16, 8.0, 0.3, 0.0, 0.9);
    let k = ThreeVector::new(2.0 * PI / 8.0, 2.0 * PI * 2.0 / 8.0, -2.0 * PI / 8.0);
    let pw = PlaneWave::preferred(k, 0.3, Polarization::transverse(&k, 1.0, 0.5, 0.7)).unwrap();
    let mut a = init_planewave(&spec, &pw, Exec::Serial).unwrap();
    let mut b = a.clone();
    run(&mut a, &spec, 25, Exec::Serial).unwrap();
    run(&mut b, &spec, 25, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    let da = diagnostics(&a, &spec, PotentialPolicy::Transverse, Exec::Serial).unwrap();
    let db = diagnostics(&b, &spec, PotentialPolicy::Transverse, Exec::Parallel).unwrap();
    assert_eq!(da, db);
}

fn multimode_state(spec: &GridSpec, modes: std::ops::RangeInclusive<i64>) -> GridState {
    GridState::from_fn(
        spec,
        |x| {
            let z = x.spatial().z;
            let mut e = ThreeVector::zeros();
            let mut b = ThreeVector::zeros();
            for m in modes.clone() {
                let k = 2.0 * PI * m as f64 / spec.length;
                e.x += (k * z + m as f64).cos() / m as f64;
                b.y += (k * z - m as f64).sin() / m as f64;
            }
            (e, b)
        },
        Exec::Serial,
    )
    .unwrap()
}

#[test]
fn vacuum_modes_stay_bounded_for_ten_thousand_steps() {
    let spec = GridSpec::with_courant(1, 128, L / 4.0, 0.0, 0.0, 0.95);
    let mut s = multimode_state(&spec, 1..=10);
    let n0 = norm(&s);
    let (mut lo, mut hi) = (n0, n0);
    for _ in 0..100 {
        run(&mut s, &spec, 100, Exec::Serial).unwrap();
        lo = lo.min(norm(&s));
        hi = hi.max(norm(&s));
    }
    assert!(hi < 1.1 * n0 && lo > 0.9 * n0, "norm range ({lo}, {hi}) from {n0}");
}

#[test]
fn propagating_modes_stay_bounded_once_growing_modes_are_removed() {
    let spec = GridSpec::with_courant(1, 128, L / 4.0, 0.5, 0.0, 0.95);
    // the box is 8π long, so mode m has |k| = m/4 and m >= 3 propagates
    let mut s = multimode_state(&spec, 3..=10);
    remove_growing_modes(&mut s, &spec).unwrap();
    let n0 = norm(&s);
    let mut peak: f64 = 0.0;
    for _ in 0..30 {
        run(&mut s, &spec, 10, Exec::Serial).unwrap();
        peak = peak.max(norm(&s));
    }
    assert!(peak < 3.0 * n0, "norm grew from {n0} to {peak}");
}

#[test]
fn growing_mode_test_matches_continuum_threshold() {
    let spec = GridSpec::with_courant(1, 1024, L, 0.5, 0.0, 0.5);
    let dx = spec.dx();
    assert!(is_growing_mode(&ThreeVector::zeros(), dx, spec.dt, 0.5));
    assert!(is_growing_mode(&ThreeVector::new(0.0, 0.0, 0.49), dx, spec.dt, 0.5));
    assert!(!is_growing_mode(&ThreeVector::new(0.0, 0.0, 0.51), dx, spec.dt, 0.5));
    assert!(!is_growing_mode(&ThreeVector::zeros(), dx, spec.dt, 0.0));
}

#[test]
fn planewave_initialization_properties() {
    let spec = GridSpec::with_courant(1, 256, L, 0.5, 0.0, 0.95);
    let s = init_planewave(&spec, &mode_wave(24, 0.5, 0.8, 0.0), Exec::Serial).unwrap();
    let (de, db) = divergence_residuals(&s, Exec::Serial);
    assert!(de < 1e-12 && db < 1e-12);
    // linear polarization: E ⟂ B
    let d = diagnostics(&s, &spec, PotentialPolicy::Transverse, Exec::Serial).unwrap();
    let p = d.momentum_contravariant();
    assert!(p[0] * p[0] - p[1] * p[1] - p[2] * p[2] - p[3] * p[3] <= 0.0);
    let eb: f64 = s.ex.iter().zip(&s.bx).map(|(e, b)| e * b).sum::<f64>()
        + s.ey.iter().zip(&s.by).map(|(e, b)| e * b).sum::<f64>();
    assert!(eb.abs() < 1e-12);
    let total: f64 = d.spectrum.iter().sum();
    assert!(
        (total - p[0] + 0.0).abs() / p[0] < 0.5,
        "field energy and p0 are of the same order"
    );
    assert!(d.spectrum[24] / total > 0.999999);
}

#[test]
fn mode_one_in_vacuum_is_a_sinusoid() {
    let spec = GridSpec::with_courant(1, 64, 2.0 * PI, 0.0, 0.0, 0.95);
    let pw = PlaneWave::preferred(
        ThreeVector::new(0.0, 0.0, 1.0),
        0.0,
        Polarization::new(ThreeVector::x(), ThreeVector::zeros(), 0.0),
    )
    .unwrap();
    let s = init_planewave(&spec, &pw, Exec::Serial).unwrap();
    for (i, v) in s.ex.iter().enumerate() {
        let z = s.position(Component::Ex, i).z;
        assert!((v - (-z).cos()).abs() < 1e-14);
    }
}

#[test]
fn vacuum_dispersion_is_linear() {
    let spec = GridSpec::with_courant(1, 512, L, 0.0, 0.0, 0.95);
    for s in measure_dispersion(&spec, &[4, 8, 16], Exec::Parallel).unwrap() {
        let w = s.omega.unwrap();
        assert!((w - s.k).abs() / s.k < 1e-3);
    }
}

#[test]
fn evanescent_entries_are_marked() {
    let spec = GridSpec::with_courant(1, 128, L, 0.5, 0.0, 0.95);
    let out = measure_dispersion(&spec, &[4, 8, 12], Exec::Serial).unwrap();
    assert!(matches!(out[0].omega, Err(Error::Evanescent { .. })));
    assert!(matches!(out[1].omega, Err(Error::Evanescent { .. })));
    assert!(out[2].omega.is_ok());
}

#[test]
fn marginal_mode_grows_at_the_lattice_rate() {
    let length = 2.0 * PI * 64.0;
    let k = ThreeVector::new(0.0, 0.0, 31.0 / 64.0);
    // k = 31/64 just below α = 0.5: the continuum rate is small and the
    // lattice rate smaller still at large αh
    let coarse = GridSpec::with_courant(1, 512, length, 0.5, 80.0, 0.95);
    let fit = measure_instability(&coarse, 31, Exec::Serial).unwrap();
    let lattice = lattice_growth_rate(&k, coarse.dx(), coarse.dt, 0.5);
    assert!(fit.expected < 0.13 && lattice < fit.expected);
    assert!((fit.rate - lattice).abs() / lattice < 2e-2, "{fit:?} vs {lattice}");

    let fine = GridSpec::with_courant(1, 4096, length, 0.5, 80.0, 0.95);
    let fit = measure_instability(&fine, 31, Exec::Parallel).unwrap();
    assert!((fit.rate - fit.expected).abs() / fit.expected < 5e-2, "{fit:?}");
    assert!(measure_instability(&fine, 40, Exec::Serial).is_err());
}

#[test]
fn vacuum_packet_moves_at_light_speed() {
    let spectrum = GaussianSpectrum {
        center: ThreeVector::new(0.0, 0.0, 4.0),
        width: 0.4,
        amplitude: 1.0,
    };
    let q = Quadrature::Line {
        direction: ThreeVector::z(),
        k_min: 1.6,
        k_max: 6.4,
        points: 200,
    };
    let packet = synthesize_packet(|k| spectrum.n(k), 0.0, &q).unwrap();
    let spec = GridSpec::with_courant(1, 2048, L, 0.0, 0.0, 0.95);
    let m = measure_packet_speed(&spec, &packet, Exec::Parallel).unwrap();
    assert!((m.speed - 1.0).abs() < 1e-2, "{m:?}");
}

#[test]
fn broadband_packet_speed_is_bracketed_by_modal_speeds() {
    let alpha = 0.5;
    let spectrum = GaussianSpectrum {
        center: ThreeVector::new(0.0, 0.0, 1.5),
        width: 0.4,
        amplitude: 1.0,
    };
    let q = Quadrature::Line {
        direction: ThreeVector::z(),
        k_min: 0.55,
        k_max: 3.5,
        points: 300,
    };
    let packet = synthesize_packet(|k| spectrum.n(k), alpha, &q).unwrap();
    let speeds: Vec<f64> = packet.modes().iter().map(|m| m.k.norm() / m.k0).collect();
    let (lo, hi) = speeds
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    let spec = GridSpec::with_courant(1, 2048, 4.0 * L, alpha, 0.0, 0.95);
    let m = measure_packet_speed(&spec, &packet, Exec::Parallel).unwrap();
    assert!(m.speed > lo && m.speed < hi, "{} not in ({lo}, {hi})", m.speed);
    assert!(m.speed > 1.0);
}

#[test]
fn cfl_violation_refuses_to_step() {
    let mut spec = GridSpec::with_courant(1, 64, 10.0, 0.0, 1.0, 0.9);
    let mut s = GridState::zeros(&spec).unwrap();
    spec.dt *= 2.0;
    assert!(matches!(
        step(&mut s, &spec, Exec::Serial),
        Err(Error::CflViolation { .. })
    ));
    let _ = FourVector::event(0.0, 0.0, 0.0, 0.0);
}

#[test]
fn analytic_and_grid_packet_speeds_agree() {
    let alpha = 0.5;
    let spectrum = GaussianSpectrum {
        center: ThreeVector::new(0.0, 0.0, 2.0),
        width: 0.15,
        amplitude: 1.0,
    };
    let q = Quadrature::Line {
        direction: ThreeVector::z(),
        k_min: 2.0 - 0.9,
        k_max: 2.0 + 0.9,
        points: 181,
    };
    let packet = synthesize_packet(|k| spectrum.n(k), alpha, &q).unwrap();
    let spec = GridSpec::with_courant(1, 2048, L, alpha, 0.0, 0.95);
    let grid = track_packet(&spec, &packet, Exec::Parallel).unwrap();
    let exact = track_packet_analytic(&spec, &packet, 12, Exec::Parallel).unwrap();
    assert_eq!(grid.expected, exact.expected);
    assert!(
        (grid.speed - exact.speed).abs() / exact.speed < 1e-2,
        "{} vs {}",
        grid.speed,
        exact.speed
    );
    assert!((exact.speed - exact.expected).abs() / exact.expected < 1e-2);
    assert!(exact.speed > 1.0);
}

#[test]
fn alpha_fit_skips_evanescent_modes() {
    let spec = GridSpec::with_courant(1, 512, L, 0.5, 0.0, 0.95);
    let samples = measure_dispersion(&spec, &(5..=20).collect::<Vec<_>>(), Exec::Parallel).unwrap();
    let fit = fit_alpha(&samples).unwrap();
    assert_eq!(fit.excluded, vec![5, 6, 7, 8]);
    assert!((fit.alpha - 0.5).abs() < 5e-3);
    let vacuum = GridSpec::with_courant(1, 512, L, 0.0, 0.0, 0.95);
    let fit = fit_alpha(&measure_dispersion(&vacuum, &[4, 8, 16], Exec::Serial).unwrap()).unwrap();
    assert!(fit.alpha_squared.abs() < 1e-3, "{fit:?}");
}
