use std::f64::consts::PI;
use std::fs;

use pfem::exec::Exec;
use pfem::fdtd::{
    diagnostics, fit_alpha, init_packet, init_planewave, measure_dispersion, run, track_packet, track_packet_analytic,
    write_csv, write_raw, DiagnosticEntry, DiagnosticSeries, GridSpec, GridState, PacketTrack, PotentialPolicy,
};
use pfem::kinematics::{
    boost_coordinates, boost_matrix, boost_velocity, to_einstein_sync, volume_scale, FourVector, FourVelocity,
    ThreeVector,
};
use pfem::planewave::{momentum_shell, synthesize_packet, GaussianSpectrum, PlaneWave, Polarization, Quadrature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{
    self, parse, BoostConfig, DispersionConfig, InitialConfig, PacketConfig, PlanewaveConfig, Propagation,
    RandomEvents, SimulateConfig, SpectrumConfig, V4,
};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Provenance, Sink, Table};

pub struct Context {
    pub seed: u64,
    pub threads: usize,
    pub exec: Exec,
    pub sink: Sink,
    pub quiet: bool,
}

impl Context {
    fn provenance(&self, command: &'static str, raw: &[u8]) -> Provenance {
        Provenance::new(command, raw, self.seed, self.threads)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("pfem: {msg}");
        }
    }
}

fn arr3(v: &ThreeVector) -> [f64; 3] {
    [v.x, v.y, v.z]
}

fn nums(values: &[f64]) -> Vec<Cell> {
    values.iter().copied().map(Cell::Num).collect()
}

fn events(explicit: &[V4], random: Option<&RandomEvents>, rng: &mut ChaCha8Rng) -> Vec<FourVector> {
    let mut out: Vec<FourVector> = explicit
        .iter()
        .map(|e| FourVector::event(e[0], e[1], e[2], e[3]))
        .collect();
    if let Some(r) = random {
        for _ in 0..r.count {
            let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-r.extent..=r.extent));
            out.push(FourVector::event(c[0], c[1], c[2], c[3]));
        }
    }
    out
}

fn frame_json(u: &FourVelocity) -> Value {
    json!({ "u0": u.u0(), "u": arr3(&u.spatial()) })
}

pub fn boost(ctx: &Context, raw: &[u8]) -> CliResult<()> {
    let cfg: BoostConfig = parse(raw)?;
    let p = cfg.validate()?;
    let prov = ctx.provenance("boost", raw);
    let u = *p.u();
    let up = boost_velocity(&p);
    let d = boost_matrix(&p);

    let mut table = Table::new(
        "events",
        &[
            "t", "x", "y", "z", "t_b", "x_b", "y_b", "z_b", "t_e", "x_e", "y_e", "z_e", "t_be", "x_be", "y_be", "z_be",
            "ds2", "ds2_b",
        ],
    );
    let mut max_change: f64 = 0.0;
    for x in events(&cfg.events, cfg.random_events.as_ref(), &mut ctx.rng()) {
        let xb = boost_coordinates(&x, &p)?;
        let xe = to_einstein_sync(&x, &u)?;
        let xbe = to_einstein_sync(&xb, &up)?;
        let (ds, dsb) = (u.metric().interval(&x), up.metric().interval(&xb));
        max_change = max_change.max((ds - dsb).abs() / ds.abs().max(1.0));
        let row = [x.to_array(), xb.to_array(), xe.to_array(), xbe.to_array()].concat();
        let mut cells = nums(&row);
        cells.extend(nums(&[ds, dsb]));
        table.push(cells);
    }

    let mut waves = Table::new(
        "wave_vectors",
        &["k0", "kx", "ky", "kz", "k0_b", "kx_b", "ky_b", "kz_b"],
    );
    for k in &cfg.wave_vectors {
        let kb = d * FourVector::contravariant(k[0], config::v3([k[1], k[2], k[3]])).components;
        waves.push(nums(&[k[0], k[1], k[2], k[3], kb[0], kb[1], kb[2], kb[3]]));
    }

    let report = json!({
        "boost": {
            "velocity": cfg.velocity,
            "w0": p.w0(),
            "w": arr3(&p.w()),
            "volume_scale": volume_scale(&p),
            "frame_in": frame_json(&u),
            "frame_out": frame_json(&up),
        },
        "events": table.rows.len(),
        "max_relative_interval_change": max_change,
    });
    let tables: Vec<Table> = [table, waves].into_iter().filter(|t| !t.rows.is_empty()).collect();
    ctx.sink.emit(&prov, report, &tables)
}

pub fn planewave(ctx: &Context, raw: &[u8]) -> CliResult<()> {
    let cfg: PlanewaveConfig = parse(raw)?;
    let pw = cfg.validate()?;
    let mut prov = ctx.provenance("planewave", raw);
    prov.alpha = Some(cfg.alpha);

    let points = events(&cfg.points, cfg.random_points.as_ref(), &mut ctx.rng());
    let fields = ctx
        .exec
        .map(&points, |x| pw.fields_at(x).expect("preferred-frame wave"));
    let mut table = Table::new(
        "fields",
        &["t", "x", "y", "z", "Ex", "Ey", "Ez", "Bx", "By", "Bz", "EdotB"],
    );
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, (e, b)) in points.iter().zip(&fields) {
        let eb = e.dot(b);
        lo = lo.min(eb);
        hi = hi.max(eb);
        let row = [x.to_array().as_slice(), &arr3(e), &arr3(b), &[eb]].concat();
        table.push(nums(&row));
    }

    let p = pw.momentum_density();
    let pol = pw.polarization();
    let amp = pol.a.norm_squared() + pol.b.norm_squared();
    let k0 = pw.wave().k0();
    let vg = pw.group_velocity()?;
    let vph = pw.phase_velocity()?;
    let sampled = if points.is_empty() {
        Value::Null
    } else {
        json!({ "min": lo, "max": hi })
    };
    let report = json!({
        "alpha": cfg.alpha,
        "k": cfg.k,
        "k0": k0,
        "xi": pw.xi(),
        "polarization": { "a": arr3(&pol.a), "b": arr3(&pol.b), "phi": pol.phi },
        "group_velocity": arr3(&vg),
        "group_speed": vg.norm(),
        "phase_velocity": arr3(&vph),
        "phase_speed": vph.norm(),
        "e_dot_b": pw.e_dot_b(),
        "e_dot_b_sampled": sampled,
        "momentum_density": [p[0], p[1], p[2], p[3]],
        "momentum_shell": momentum_shell(&p),
        "momentum_shell_closed_form": -cfg.alpha.powi(2) * k0 * k0 * amp * amp / 4.0,
    });
    ctx.sink.emit(&prov, report, &[table])
}

fn line_packet(
    spectrum: &SpectrumConfig,
    alpha: f64,
    lo: f64,
    hi: f64,
    points: usize,
) -> CliResult<pfem::planewave::SpectralPacket> {
    let g = GaussianSpectrum {
        center: config::v3(spectrum.center),
        width: spectrum.width,
        amplitude: spectrum.amplitude,
    };
    let q = Quadrature::Line {
        direction: ThreeVector::z(),
        k_min: lo,
        k_max: hi,
        points,
    };
    Ok(synthesize_packet(|k| g.n(k), alpha, &q)?)
}

fn random_modes(spec: &GridSpec, count: usize, amplitude: f64, max_mode: i64, rng: &mut ChaCha8Rng) -> Vec<PlaneWave> {
    let scale = 2.0 * PI / spec.length;
    let mut waves = Vec::with_capacity(count);
    while waves.len() < count {
        let mut draw = || {
            let m = rng.random_range(1..=max_mode);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        };
        let m = if spec.dimension == 3 {
            [draw(), draw(), draw()]
        } else {
            [0, 0, draw()]
        };
        let k = ThreeVector::new(m[0] as f64, m[1] as f64, m[2] as f64) * scale;
        if k.norm() <= spec.alpha {
            continue;
        }
        let pol = Polarization::transverse(
            &k,
            rng.random_range(-amplitude..=amplitude),
            rng.random_range(-amplitude..=amplitude),
            rng.random_range(0.0..2.0 * PI),
        );
        waves.push(PlaneWave::preferred(k, spec.alpha, pol).expect("propagating mode"));
    }
    waves
}

fn initial_state(ctx: &Context, cfg: &SimulateConfig) -> CliResult<GridState> {
    let spec = &cfg.grid;
    match &cfg.initial {
        InitialConfig::Planewave { k, polarization } => {
            let pw = config::plane_wave(*k, spec.alpha, polarization)?;
            Ok(init_planewave(spec, &pw, ctx.exec)?)
        }
        InitialConfig::Packet { spectrum, quadrature } => {
            let kc = spectrum.center[2];
            let half = quadrature.span * spectrum.width;
            let packet = line_packet(spectrum, spec.alpha, kc - half, kc + half, quadrature.points)?;
            Ok(init_packet(spec, &packet, ctx.exec)?)
        }
        InitialConfig::RandomModes {
            count,
            amplitude,
            max_mode,
        } => {
            let waves = random_modes(spec, *count, *amplitude, *max_mode, &mut ctx.rng());
            Ok(GridState::from_fn(
                spec,
                |x| {
                    waves
                        .iter()
                        .fold((ThreeVector::zeros(), ThreeVector::zeros()), |(e, b), w| {
                            let (we, wb) = w.fields_at(x).expect("preferred-frame wave");
                            (e + we, b + wb)
                        })
                },
                ctx.exec,
            )?)
        }
    }
}

fn diagnostics_row(step: usize, d: &DiagnosticEntry) -> Vec<Cell> {
    let p = d.momentum_contravariant();
    let shell = p[0] * p[0] - p[1] * p[1] - p[2] * p[2] - p[3] * p[3];
    let energy: f64 = d.spectrum.iter().sum();
    let mut row = vec![Cell::Int(step as i64)];
    row.extend(nums(&[d.time, p[0], p[1], p[2], p[3], shell, d.div_e, d.div_b, energy]));
    row
}

pub fn simulate(ctx: &Context, raw: &[u8]) -> CliResult<()> {
    let cfg: SimulateConfig = parse(raw)?;
    let Some(dir) = ctx.sink.dir().map(|d| d.to_path_buf()) else {
        return Err(CliError::validation(
            "invalid_input",
            "simulate writes snapshot files and needs --out",
        ));
    };
    cfg.validate()?;
    let spec = cfg.grid;
    let mut prov = ctx.provenance("simulate", raw);
    prov.alpha = Some(spec.alpha);
    prov.grid = Some(spec);

    let mut state = initial_state(ctx, &cfg)?;
    let snap_dir = dir.join("snapshots");
    fs::create_dir_all(&snap_dir)?;
    let mut snapshots = Vec::new();
    let mut snapshot = |state: &GridState, step: usize| -> CliResult<()> {
        let stem = format!("step_{step:07}");
        let file = fs::File::create(snap_dir.join(format!("{stem}.csv")))?;
        write_csv(state, file)?;
        snapshots.push(format!("snapshots/{stem}.csv"));
        if cfg.raw_snapshots {
            write_raw(state, &spec, &snap_dir, &stem)?;
            snapshots.push(format!("snapshots/{stem}.bin"));
        }
        Ok(())
    };

    let steps = spec.steps();
    let mut series = DiagnosticSeries::new();
    let mut table = Table::new(
        "diagnostics",
        &["step", "t", "p0", "px", "py", "pz", "shell", "div_e", "div_b", "energy"],
    );
    let record = |state: &GridState, step: usize, series: &mut DiagnosticSeries, table: &mut Table| -> CliResult<()> {
        let d = diagnostics(state, &spec, PotentialPolicy::Transverse, ctx.exec)?;
        table.push(diagnostics_row(step, &d));
        series.push(d)?;
        Ok(())
    };
    snapshot(&state, 0)?;
    record(&state, 0, &mut series, &mut table)?;
    let mut done = 0;
    let mut next_note = steps / 10;
    while done < steps {
        let mut next = (done / cfg.diagnostics_every + 1) * cfg.diagnostics_every;
        if let Some(q) = done.checked_div(cfg.snapshot_every) {
            next = next.min((q + 1) * cfg.snapshot_every);
        }
        let next = next.min(steps);
        run(&mut state, &spec, next - done, ctx.exec)?;
        done = next;
        if done % cfg.diagnostics_every == 0 || done == steps {
            record(&state, done, &mut series, &mut table)?;
        }
        if done == steps || (cfg.snapshot_every > 0 && done % cfg.snapshot_every == 0) {
            snapshot(&state, done)?;
        }
        if done >= next_note {
            ctx.note(&format!("simulate: step {done}/{steps}, t = {:.4}", state.time));
            next_note = done + (steps / 10).max(1);
        }
    }

    let entries = series.entries();
    let max_div = |f: fn(&DiagnosticEntry) -> f64| entries.iter().map(f).fold(0.0, f64::max);
    let last = entries.last().expect("at least the initial entry");
    let report = json!({
        "steps": steps,
        "final_time": state.time,
        "diagnostic_entries": entries.len(),
        "max_div_e": max_div(|e| e.div_e),
        "max_div_b": max_div(|e| e.div_b),
        "final_momentum": last.momentum_contravariant(),
        "snapshots": snapshots,
    });
    ctx.sink.emit(&prov, report, &[table])
}

pub fn dispersion(ctx: &Context, raw: &[u8]) -> CliResult<()> {
    let cfg: DispersionConfig = parse(raw)?;
    let (modes, evanescent) = cfg.validate()?;
    let mut prov = ctx.provenance("dispersion", raw);
    prov.alpha = Some(cfg.grid.alpha);
    prov.grid = Some(cfg.grid);
    let warnings: Vec<String> = evanescent
        .iter()
        .map(|m| format!("mode {m} has |k| <= alpha and is excluded from the fit"))
        .collect();
    for w in &warnings {
        ctx.note(&format!("warning: {w}"));
    }

    let samples = measure_dispersion(&cfg.grid, &modes, ctx.exec)?;
    let fit = fit_alpha(&samples)?;
    let mut table = Table::new("dispersion", &["mode", "k", "omega", "omega2_minus_k2", "status"]);
    for s in &samples {
        let mut row = vec![Cell::Int(s.mode), Cell::Num(s.k)];
        match &s.omega {
            Ok(w) => row.extend([Cell::Num(*w), Cell::Num(w * w - s.k * s.k), Cell::Text("ok".into())]),
            Err(e) => row.extend([Cell::Num(f64::NAN), Cell::Num(f64::NAN), Cell::Text(e.code().into())]),
        }
        table.push(row);
    }
    let alpha = cfg.grid.alpha;
    let report = json!({
        "fit": fit,
        "grid_alpha": alpha,
        "relative_error": if alpha > 0.0 { Value::from((fit.alpha - alpha).abs() / alpha) } else { Value::Null },
        "warnings": warnings,
    });
    ctx.sink.emit(&prov, report, &[table])
}

pub fn packet(ctx: &Context, raw: &[u8]) -> CliResult<()> {
    let cfg: PacketConfig = parse(raw)?;
    let (spec, lo, hi) = cfg.validate()?;
    let mut prov = ctx.provenance("packet", raw);
    prov.alpha = Some(cfg.alpha);
    prov.grid = Some(spec);

    let packet = line_packet(&cfg.spectrum, cfg.alpha, lo, hi, cfg.quadrature.points)?;
    let mut tracks: Vec<(&str, PacketTrack)> = Vec::new();
    if cfg.propagation != Propagation::Numeric {
        ctx.note("packet: analytic mode sum");
        tracks.push((
            "analytic",
            track_packet_analytic(&spec, &packet, cfg.analytic_samples, ctx.exec)?,
        ));
    }
    if cfg.propagation != Propagation::Analytic {
        ctx.note("packet: grid propagation");
        tracks.push(("numeric", track_packet(&spec, &packet, ctx.exec)?));
    }

    let mut table = Table::new("trajectory", &["method", "t", "center"]);
    for (name, t) in &tracks {
        for (time, c) in t.times.iter().zip(&t.centers) {
            table.push(vec![Cell::Text(name.to_string()), Cell::Num(*time), Cell::Num(*c)]);
        }
    }
    let expected = tracks[0].1.expected;
    let speeds: serde_json::Map<String, Value> = tracks
        .iter()
        .map(|(name, t)| {
            (
                name.to_string(),
                json!({
                    "speed": t.speed,
                    "relative_error": (t.speed - expected).abs() / expected,
                    "duration": t.times.last().copied().unwrap_or(0.0),
                }),
            )
        })
        .collect();
    let agreement = (tracks.len() == 2).then(|| (tracks[0].1.speed - tracks[1].1.speed).abs() / tracks[0].1.speed);
    let report = json!({
        "alpha": cfg.alpha,
        "central_k": cfg.spectrum.center[2],
        "predicted_group_speed": expected,
        "superluminal": expected > 1.0,
        "measured": speeds,
        "method_relative_difference": agreement,
    });
    ctx.sink.emit(&prov, report, &[table])
}
