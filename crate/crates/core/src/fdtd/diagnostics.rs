use serde::{Deserialize, Serialize};

use super::grid::{ravel, unravel, GridSpec, GridState};
use super::spectral::NodeSpectrum;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{four_momentum, gauge_transform, FieldTensor, FourPotential, GaugeFunction, SampledRegion};
use crate::kinematics::{FourVector, FourVelocity};

/// Gauge of the reconstructed potential used by the energy-momentum diagnostics.
#[derive(Clone, Copy, Default)]
pub enum PotentialPolicy<'a> {
    /// Radiation gauge reconstructed from `B` in Fourier space.
    #[default]
    Transverse,
    /// Radiation gauge followed by the gauge transformation generated by `χ`.
    Shifted(&'a dyn GaugeFunction),
}

/// Maximum `|∇·E|` at nodes and `|∇·B|` at cell centres.
pub fn divergence_residuals(state: &GridState, exec: Exec) -> (f64, f64) {
    let shape = state.shape();
    let inv = 1.0 / state.dx();
    let e = [&state.ex, &state.ey, &state.ez];
    let b = [&state.bx, &state.by, &state.bz];
    let pairs = exec.map_range(state.len(), |idx| {
        let n = unravel(shape, idx);
        let shifted = |axis: usize, up: bool| {
            let mut m = n;
            let len = shape[axis];
            m[axis] = if up {
                (n[axis] + 1) % len
            } else {
                (n[axis] + len - 1) % len
            };
            ravel(shape, m[0], m[1], m[2])
        };
        let mut de = 0.0;
        let mut db = 0.0;
        for a in 0..3 {
            de += e[a][idx] - e[a][shifted(a, false)];
            db += b[a][shifted(a, true)] - b[a][idx];
        }
        ((de * inv).abs(), (db * inv).abs())
    });
    pairs
        .into_iter()
        .fold((0.0, 0.0), |(me, mb), (de, db)| (me.max(de), mb.max(db)))
}

/// Node-collocated fields and reconstructed potential; in one dimension the
/// transverse cell size is 1, so integrals are per unit area.
pub fn node_region(state: &GridState, spec: &GridSpec, policy: PotentialPolicy<'_>) -> Result<SampledRegion> {
    state.check_compatible(spec)?;
    let spectrum = NodeSpectrum::new(state);
    let (e, b) = spectrum.node_fields();
    let mut potentials = spectrum.transverse_potential(spec.alpha);
    if let PotentialPolicy::Shifted(chi) = policy {
        let u = FourVelocity::preferred();
        for (idx, a) in potentials.iter_mut().enumerate() {
            let x = state.node(idx);
            let jet = chi.jet(&FourVector::event(state.time, x.x, x.y, x.z));
            *a = gauge_transform(&FourPotential::value_only(*a), &jet, &u, spec.alpha).value;
        }
    }
    let fields = e.iter().zip(&b).map(|(e, b)| FieldTensor::from_eb(e, b)).collect();
    SampledRegion::new(state.shape(), cell_spacing(state), fields, potentials)
}

fn cell_spacing(state: &GridState) -> [f64; 3] {
    let shape = state.shape();
    std::array::from_fn(|a| if shape[a] == 1 { 1.0 } else { state.dx() })
}

/// One diagnostic sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticEntry {
    pub time: f64,
    /// Covariant `P_μ` integrated over the grid.
    pub momentum: [f64; 4],
    pub div_e: f64,
    pub div_b: f64,
    /// Field energy `½∫(E² + B²)` per integer wavenumber shell.
    pub spectrum: Vec<f64>,
}

impl DiagnosticEntry {
    /// Contravariant `(p⁰, p)` in the preferred frame.
    pub fn momentum_contravariant(&self) -> [f64; 4] {
        let p = self.momentum;
        [p[0], -p[1], -p[2], -p[3]]
    }
}

pub fn diagnostics(
    state: &GridState,
    spec: &GridSpec,
    policy: PotentialPolicy<'_>,
    exec: Exec,
) -> Result<DiagnosticEntry> {
    let region = node_region(state, spec, policy)?;
    let p = four_momentum(&region, &FourVelocity::preferred(), spec.alpha, exec);
    let (div_e, div_b) = divergence_residuals(state, exec);
    let cell: f64 = cell_spacing(state).iter().product();
    Ok(DiagnosticEntry {
        time: state.time,
        momentum: p.to_array(),
        div_e,
        div_b,
        spectrum: NodeSpectrum::new(state).energy_spectrum(cell),
    })
}

/// Diagnostic samples with strictly increasing timestamps.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticSeries {
    entries: Vec<DiagnosticEntry>,
}

impl DiagnosticSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: DiagnosticEntry) -> Result<()> {
        if let Some(last) = self.entries.last() {
            if !(entry.time > last.time) {
                return Err(Error::InvalidInput(format!(
                    "diagnostic time {} does not follow {}",
                    entry.time, last.time
                )));
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[DiagnosticEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::ThreeVector;

    #[test]
    fn series_requires_increasing_time() {
        let entry = |t: f64| DiagnosticEntry {
            time: t,
            momentum: [0.0; 4],
            div_e: 0.0,
            div_b: 0.0,
            spectrum: vec![],
        };
        let mut s = DiagnosticSeries::new();
        s.push(entry(0.0)).unwrap();
        s.push(entry(0.5)).unwrap();
        assert!(s.push(entry(0.5)).is_err());
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn longitudinal_field_has_divergence() {
        let spec = GridSpec::with_courant(1, 16, 4.0, 0.0, 0.0, 0.5);
        let state = GridState::from_fn(
            &spec,
            |x| (ThreeVector::new(0.0, 0.0, x.spatial().z.sin()), ThreeVector::zeros()),
            Exec::Serial,
        )
        .unwrap();
        let (de, db) = divergence_residuals(&state, Exec::Serial);
        assert!(de > 0.1 && db == 0.0);
    }
}
