//! JSON run configurations. Every `validate` runs before any compute.

use pfem::fdtd::{GridSpec, CFL_NUMBER};
use pfem::kinematics::{BoostParameters, FourVelocity, ThreeVector};
use pfem::planewave::{dispersion_k0, PlaneWave, Polarization};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub type V3 = [f64; 3];
pub type V4 = [f64; 4];

pub fn v3(a: V3) -> ThreeVector {
    ThreeVector::new(a[0], a[1], a[2])
}

pub fn parse<T: DeserializeOwned>(raw: &[u8]) -> CliResult<T> {
    serde_json::from_slice(raw).map_err(|e| CliError::validation("invalid_config", e.to_string()))
}

fn finite(name: &str, values: &[f64]) -> CliResult<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::validation("invalid_input", format!("{name} must be finite")))
    }
}

fn alpha_ok(alpha: f64) -> CliResult<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(CliError::validation(
            "invalid_input",
            format!("alpha must be finite and >= 0, got {alpha}"),
        ))
    }
}

/// Explicit `a`, `b` vectors or amplitudes along the transverse basis of `k`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationConfig {
    pub a: Option<V3>,
    pub b: Option<V3>,
    pub amp_a: Option<f64>,
    pub amp_b: Option<f64>,
    #[serde(default)]
    pub phi: f64,
}

impl PolarizationConfig {
    pub fn build(&self, k: &ThreeVector) -> CliResult<Polarization> {
        let explicit = self.a.is_some() || self.b.is_some();
        let amplitudes = self.amp_a.is_some() || self.amp_b.is_some();
        finite("polarization phi", &[self.phi])?;
        let pol = match (explicit, amplitudes) {
            (true, true) => {
                return Err(CliError::validation(
                    "invalid_config",
                    "polarization takes either a/b vectors or amp_a/amp_b, not both",
                ))
            }
            (true, false) => {
                let a = self.a.unwrap_or_default();
                let b = self.b.unwrap_or_default();
                finite("polarization vectors", &[a, b].concat())?;
                Polarization::new(v3(a), v3(b), self.phi)
            }
            (false, _) => {
                let (aa, bb) = (self.amp_a.unwrap_or(1.0), self.amp_b.unwrap_or(0.0));
                finite("polarization amplitudes", &[aa, bb])?;
                Polarization::transverse(k, aa, bb, self.phi)
            }
        };
        if pol.a.norm() == 0.0 && pol.b.norm() == 0.0 {
            return Err(CliError::validation("invalid_input", "polarization amplitude is zero"));
        }
        Ok(pol)
    }
}

/// Preferred-frame plane wave.
pub fn plane_wave(k: V3, alpha: f64, pol: &PolarizationConfig) -> CliResult<PlaneWave> {
    finite("k", &k)?;
    alpha_ok(alpha)?;
    let k = v3(k);
    dispersion_k0(k.norm(), alpha)?;
    Ok(PlaneWave::preferred(k, alpha, pol.build(&k)?)?)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomEvents {
    pub count: usize,
    /// Coordinates are drawn uniformly from `[−extent, extent]`.
    #[serde(default = "one")]
    pub extent: f64,
}

fn one() -> f64 {
    1.0
}

impl RandomEvents {
    fn validate(&self) -> CliResult<()> {
        if !(self.extent.is_finite() && self.extent > 0.0) {
            return Err(CliError::validation("invalid_input", "random extent must be positive"));
        }
        if self.count > 1_000_000 {
            return Err(CliError::validation("invalid_input", "at most 10^6 random points"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostConfig {
    /// Spatial PF four-velocity `u` seen from the source frame.
    #[serde(default)]
    pub frame: V3,
    /// Coordinate three-velocity `V` of the target frame.
    pub velocity: V3,
    #[serde(default)]
    pub events: Vec<V4>,
    pub random_events: Option<RandomEvents>,
    /// Contravariant wave vectors `(k⁰, k)` in the source frame.
    #[serde(default)]
    pub wave_vectors: Vec<V4>,
}

impl BoostConfig {
    pub fn validate(&self) -> CliResult<BoostParameters> {
        finite("frame", &self.frame)?;
        finite("velocity", &self.velocity)?;
        for e in self.events.iter().chain(&self.wave_vectors) {
            finite("events and wave vectors", e)?;
        }
        if let Some(r) = &self.random_events {
            r.validate()?;
        }
        Ok(BoostParameters::from_three_velocity(
            FourVelocity::new(v3(self.frame)),
            v3(self.velocity),
        )?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanewaveConfig {
    pub alpha: f64,
    pub k: V3,
    #[serde(default)]
    pub polarization: PolarizationConfig,
    /// Events `(t, x, y, z)`.
    #[serde(default)]
    pub points: Vec<V4>,
    pub random_points: Option<RandomEvents>,
}

impl PlanewaveConfig {
    pub fn validate(&self) -> CliResult<PlaneWave> {
        for p in &self.points {
            finite("points", p)?;
        }
        if let Some(r) = &self.random_points {
            r.validate()?;
        }
        plane_wave(self.k, self.alpha, &self.polarization)
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub center: V3,
    pub width: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

impl SpectrumConfig {
    /// Checks a line quadrature along `ẑ` over `center ± span·width`.
    fn validate_line(&self, alpha: f64, span: f64) -> CliResult<(f64, f64)> {
        finite(
            "spectrum",
            &[
                self.center[0],
                self.center[1],
                self.center[2],
                self.width,
                self.amplitude,
            ],
        )?;
        if self.center[0] != 0.0 || self.center[1] != 0.0 || self.center[2] <= 0.0 {
            return Err(CliError::validation(
                "invalid_input",
                "one-dimensional packets need a spectrum centered on +z: center = [0, 0, kc] with kc > 0",
            ));
        }
        if self.width <= 0.0 || self.amplitude <= 0.0 {
            return Err(CliError::validation(
                "invalid_input",
                "spectrum width and amplitude must be positive",
            ));
        }
        let kc = self.center[2];
        let (lo, hi) = (kc - span * self.width, kc + span * self.width);
        if lo <= alpha {
            return Err(CliError::validation(
                "evanescent_mode",
                format!("spectrum support reaches |k| = {lo} <= alpha = {alpha}; need kc - span*width > alpha"),
            ));
        }
        Ok((lo, hi))
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default = "default_points")]
    pub points: usize,
    /// Half-width of the sampled band in units of the spectral width.
    #[serde(default = "default_span")]
    pub span: f64,
}

fn default_points() -> usize {
    241
}

fn default_span() -> f64 {
    6.0
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            points: default_points(),
            span: default_span(),
        }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> CliResult<()> {
        if self.points == 0 || self.points > 100_000 {
            return Err(CliError::validation(
                "invalid_input",
                "quadrature points must be in 1..=100000",
            ));
        }
        if !(self.span.is_finite() && self.span > 0.0) {
            return Err(CliError::validation(
                "invalid_input",
                "quadrature span must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    Planewave {
        k: V3,
        #[serde(default)]
        polarization: PolarizationConfig,
    },
    Packet {
        spectrum: SpectrumConfig,
        #[serde(default)]
        quadrature: QuadratureConfig,
    },
    /// Random superposition of propagating lattice modes, drawn from `--seed`.
    RandomModes {
        count: usize,
        #[serde(default = "one")]
        amplitude: f64,
        /// Largest mode number per axis.
        max_mode: i64,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub grid: GridSpec,
    pub initial: InitialConfig,
    #[serde(default = "default_every")]
    pub diagnostics_every: usize,
    /// Extra CSV snapshots every this many steps; 0 keeps only the first and last.
    #[serde(default)]
    pub snapshot_every: usize,
    /// Also write raw `.bin` + `.json` snapshots.
    #[serde(default)]
    pub raw_snapshots: bool,
}

fn default_every() -> usize {
    10
}

impl SimulateConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.grid.validate()?;
        if self.diagnostics_every == 0 {
            return Err(CliError::validation("invalid_input", "diagnostics_every must be >= 1"));
        }
        if self.grid.steps() == 0 {
            return Err(CliError::validation("invalid_input", "duration covers zero steps"));
        }
        match &self.initial {
            InitialConfig::Planewave { k, polarization } => {
                plane_wave(*k, self.grid.alpha, polarization)?;
            }
            InitialConfig::Packet { spectrum, quadrature } => {
                quadrature.validate()?;
                if self.grid.dimension != 1 {
                    return Err(CliError::validation(
                        "invalid_input",
                        "packet initial data needs a 1D grid",
                    ));
                }
                spectrum.validate_line(self.grid.alpha, quadrature.span)?;
            }
            InitialConfig::RandomModes {
                count,
                amplitude,
                max_mode,
            } => {
                if *count == 0 || *count > 10_000 {
                    return Err(CliError::validation("invalid_input", "count must be in 1..=10000"));
                }
                if !(amplitude.is_finite() && *amplitude > 0.0) {
                    return Err(CliError::validation("invalid_input", "amplitude must be positive"));
                }
                let nyquist = (self.grid.cells / 2) as i64;
                if *max_mode < 1 || *max_mode >= nyquist {
                    return Err(CliError::validation(
                        "invalid_input",
                        format!("max_mode must be in 1..{nyquist}"),
                    ));
                }
                let kmax = 2.0 * std::f64::consts::PI * *max_mode as f64 / self.grid.length;
                let reach = if self.grid.dimension == 3 {
                    kmax * 3f64.sqrt()
                } else {
                    kmax
                };
                if reach <= self.grid.alpha {
                    return Err(CliError::validation(
                        "evanescent_mode",
                        format!("no mode up to max_mode has |k| > alpha = {}", self.grid.alpha),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionConfig {
    pub grid: GridSpec,
    pub modes: Option<Vec<i64>>,
    /// Inclusive `[first, last]`.
    pub mode_range: Option<[i64; 2]>,
}

impl DispersionConfig {
    /// Validated mode list and the subset with `|k| ≤ α`.
    pub fn validate(&self) -> CliResult<(Vec<i64>, Vec<i64>)> {
        self.grid.validate()?;
        let modes: Vec<i64> = match (&self.modes, self.mode_range) {
            (Some(m), None) => m.clone(),
            (None, Some([a, b])) if a <= b => (a..=b).collect(),
            (None, Some(_)) => return Err(CliError::validation("invalid_input", "mode_range must be ascending")),
            _ => {
                return Err(CliError::validation(
                    "invalid_config",
                    "give exactly one of modes or mode_range",
                ))
            }
        };
        if modes.is_empty() || modes.len() > 4096 {
            return Err(CliError::validation("invalid_input", "need 1..=4096 modes"));
        }
        let nyquist = (self.grid.cells / 2) as i64;
        if let Some(m) = modes.iter().find(|m| **m == 0 || m.abs() >= nyquist) {
            return Err(CliError::validation(
                "invalid_input",
                format!("mode {m} outside 0 < |m| < {nyquist}"),
            ));
        }
        let evanescent: Vec<i64> = modes
            .iter()
            .copied()
            .filter(|m| 2.0 * std::f64::consts::PI * m.abs() as f64 / self.grid.length <= self.grid.alpha)
            .collect();
        if evanescent.len() == modes.len() {
            return Err(CliError::validation(
                "evanescent_mode",
                format!("every requested mode has |k| <= alpha = {}", self.grid.alpha),
            ));
        }
        Ok((modes, evanescent))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Propagation {
    Analytic,
    Numeric,
    #[default]
    Both,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketGridConfig {
    pub cells: usize,
    pub length: f64,
    #[serde(default = "default_courant")]
    pub courant: f64,
    /// Minimum tracked time; runs always cover ten periods of the central mode.
    #[serde(default)]
    pub duration: f64,
}

fn default_courant() -> f64 {
    CFL_NUMBER
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    pub alpha: f64,
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub propagation: Propagation,
    pub grid: PacketGridConfig,
    #[serde(default = "default_samples")]
    pub analytic_samples: usize,
}

fn default_samples() -> usize {
    24
}

impl PacketConfig {
    pub fn validate(&self) -> CliResult<(GridSpec, f64, f64)> {
        alpha_ok(self.alpha)?;
        self.quadrature.validate()?;
        let (lo, hi) = self.spectrum.validate_line(self.alpha, self.quadrature.span)?;
        let g = &self.grid;
        finite("grid", &[g.length, g.courant, g.duration])?;
        if !(g.courant > 0.0) {
            return Err(CliError::validation("invalid_input", "courant must be positive"));
        }
        let spec = GridSpec::with_courant(1, g.cells, g.length, self.alpha, g.duration, g.courant);
        spec.validate()?;
        if self.analytic_samples < 2 {
            return Err(CliError::validation("invalid_input", "analytic_samples must be >= 2"));
        }
        Ok((spec, lo, hi))
    }
}
