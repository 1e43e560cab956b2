use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kinematics::{FourVector, ThreeVector};

/// Courant number of the vacuum limit, per `1/√d`.
pub const CFL_NUMBER: f64 = 0.95;

const STEP_CHUNK: usize = 2048;

/// Periodic cubic grid and run parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// 1 (fields depend on `z` only) or 3.
    pub dimension: usize,
    /// Cells per axis.
    pub cells: usize,
    /// Domain length per axis.
    pub length: f64,
    pub dt: f64,
    pub alpha: f64,
    pub duration: f64,
}

impl GridSpec {
    /// Spec with `dt = courant · Δx/√d`.
    pub fn with_courant(dimension: usize, cells: usize, length: f64, alpha: f64, duration: f64, courant: f64) -> Self {
        let dx = length / cells as f64;
        Self {
            dimension,
            cells,
            length,
            dt: courant * dx / (dimension as f64).sqrt(),
            alpha,
            duration,
        }
    }

    pub fn dx(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn cfl_limit(&self) -> f64 {
        CFL_NUMBER * self.dx() / (self.dimension as f64).sqrt()
    }

    pub fn shape(&self) -> [usize; 3] {
        match self.dimension {
            3 => [self.cells; 3],
            _ => [1, 1, self.cells],
        }
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of steps covering `duration`.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round().max(0.0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        match self.dimension {
            1 => {}
            3 if cfg!(feature = "grid3d") => {}
            3 => return Err(Error::FeatureDisabled("grid3d")),
            d => return Err(Error::InvalidInput(format!("dimension must be 1 or 3, got {d}"))),
        }
        if self.cells < 8 {
            return Err(Error::InvalidInput(format!(
                "need at least 8 cells per axis, got {}",
                self.cells
            )));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::InvalidInput(format!(
                "domain length must be positive, got {}",
                self.length
            )));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must be finite and non-negative, got {}",
                self.alpha
            )));
        }
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "duration must be non-negative, got {}",
                self.duration
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        let limit = self.cfl_limit();
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt: self.dt, limit });
        }
        Ok(())
    }
}

/// Field component on the Yee lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Ex,
    Ey,
    Ez,
    Bx,
    By,
    Bz,
}

impl Component {
    pub const ALL: [Component; 6] = [
        Component::Ex,
        Component::Ey,
        Component::Ez,
        Component::Bx,
        Component::By,
        Component::Bz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::Ex => "Ex",
            Component::Ey => "Ey",
            Component::Ez => "Ez",
            Component::Bx => "Bx",
            Component::By => "By",
            Component::Bz => "Bz",
        }
    }

    /// Offset from the node in units of `Δx`: `E_i` sits on the `i` edge,
    /// `B_i` on the face normal to `i`.
    pub fn offset(self) -> [f64; 3] {
        match self {
            Component::Ex => [0.5, 0.0, 0.0],
            Component::Ey => [0.0, 0.5, 0.0],
            Component::Ez => [0.0, 0.0, 0.5],
            Component::Bx => [0.0, 0.5, 0.5],
            Component::By => [0.5, 0.0, 0.5],
            Component::Bz => [0.5, 0.5, 0.0],
        }
    }

    pub fn axis(self) -> usize {
        match self {
            Component::Ex | Component::Bx => 0,
            Component::Ey | Component::By => 1,
            Component::Ez | Component::Bz => 2,
        }
    }

    pub fn is_electric(self) -> bool {
        matches!(self, Component::Ex | Component::Ey | Component::Ez)
    }
}

/// Staggered `E` and `B` on a periodic grid, last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridState {
    shape: [usize; 3],
    dx: f64,
    pub time: f64,
    pub ex: Vec<f64>,
    pub ey: Vec<f64>,
    pub ez: Vec<f64>,
    pub bx: Vec<f64>,
    pub by: Vec<f64>,
    pub bz: Vec<f64>,
}

impl GridState {
    pub fn zeros(spec: &GridSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.len();
        Ok(Self {
            shape: spec.shape(),
            dx: spec.dx(),
            time: 0.0,
            ex: vec![0.0; n],
            ey: vec![0.0; n],
            ez: vec![0.0; n],
            bx: vec![0.0; n],
            by: vec![0.0; n],
            bz: vec![0.0; n],
        })
    }

    /// Samples `f(x) -> (E, B)` at `t = 0`, each component at its own position.
    pub fn from_fn<F>(spec: &GridSpec, f: F, exec: Exec) -> Result<Self>
    where
        F: Fn(&FourVector) -> (ThreeVector, ThreeVector) + Sync + Send,
    {
        let mut state = Self::zeros(spec)?;
        let shape = state.shape;
        let dx = state.dx;
        for c in Component::ALL {
            let f = &f;
            exec.for_each_mut(state.component_mut(c), |idx, v| {
                let x = position(shape, dx, c, idx);
                let (e, b) = f(&FourVector::event(0.0, x.x, x.y, x.z));
                *v = if c.is_electric() { e[c.axis()] } else { b[c.axis()] };
            });
        }
        Ok(state)
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.ex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ex.is_empty()
    }

    pub fn component(&self, c: Component) -> &[f64] {
        match c {
            Component::Ex => &self.ex,
            Component::Ey => &self.ey,
            Component::Ez => &self.ez,
            Component::Bx => &self.bx,
            Component::By => &self.by,
            Component::Bz => &self.bz,
        }
    }

    pub fn component_mut(&mut self, c: Component) -> &mut [f64] {
        match c {
            Component::Ex => &mut self.ex,
            Component::Ey => &mut self.ey,
            Component::Ez => &mut self.ez,
            Component::Bx => &mut self.bx,
            Component::By => &mut self.by,
            Component::Bz => &mut self.bz,
        }
    }

    pub fn position(&self, c: Component, idx: usize) -> ThreeVector {
        position(self.shape, self.dx, c, idx)
    }

    pub fn node(&self, idx: usize) -> ThreeVector {
        let [i, j, k] = unravel(self.shape, idx);
        ThreeVector::new(i as f64, j as f64, k as f64) * self.dx
    }

    pub fn is_finite(&self) -> bool {
        Component::ALL
            .iter()
            .all(|&c| self.component(c).iter().all(|v| v.is_finite()))
    }

    pub(crate) fn check_compatible(&self, spec: &GridSpec) -> Result<()> {
        if self.shape != spec.shape() {
            return Err(Error::ShapeMismatch {
                expected: spec.len(),
                got: self.len(),
            });
        }
        if (self.dx - spec.dx()).abs() > 1e-12 * spec.dx() {
            return Err(Error::InvalidInput("state spacing does not match the grid spec".into()));
        }
        Ok(())
    }
}

pub(crate) fn unravel(shape: [usize; 3], idx: usize) -> [usize; 3] {
    let k = idx % shape[2];
    let ij = idx / shape[2];
    [ij / shape[1], ij % shape[1], k]
}

pub(crate) fn ravel(shape: [usize; 3], i: usize, j: usize, k: usize) -> usize {
    (i * shape[1] + j) * shape[2] + k
}

fn position(shape: [usize; 3], dx: f64, c: Component, idx: usize) -> ThreeVector {
    let n = unravel(shape, idx);
    let o = c.offset();
    ThreeVector::from_fn(|a, _| (n[a] as f64 + o[a]) * dx)
}

/// `target += coef · (D_a src_b − D_b src_a)` with forward (`forward`) or
/// backward periodic differences along axes `a` and `b`.
#[allow(clippy::too_many_arguments)]
fn curl_update(
    exec: Exec,
    shape: [usize; 3],
    target: &mut [f64],
    src_a: &[f64],
    src_b: &[f64],
    a: usize,
    b: usize,
    forward: bool,
    coef: f64,
) {
    let neighbor = move |n: [usize; 3], axis: usize| {
        let mut m = n;
        let len = shape[axis];
        m[axis] = if forward {
            if n[axis] + 1 == len {
                0
            } else {
                n[axis] + 1
            }
        } else if n[axis] == 0 {
            len - 1
        } else {
            n[axis] - 1
        };
        ravel(shape, m[0], m[1], m[2])
    };
    exec.for_each_chunk_mut(target, STEP_CHUNK, |start, chunk| {
        let mut n = unravel(shape, start);
        for (off, v) in chunk.iter_mut().enumerate() {
            let idx = start + off;
            let na = neighbor(n, a);
            let nb = neighbor(n, b);
            let (db, da) = if forward {
                (src_b[na] - src_b[idx], src_a[nb] - src_a[idx])
            } else {
                (src_b[idx] - src_b[na], src_a[idx] - src_a[nb])
            };
            *v += coef * (db - da);
            n[2] += 1;
            if n[2] == shape[2] {
                n[2] = 0;
                n[1] += 1;
                if n[1] == shape[1] {
                    n[1] = 0;
                    n[0] += 1;
                }
            }
        }
    });
}

impl GridState {
    /// `B ← B − h ∇×E`.
    fn kick_b(&mut self, h: f64, exec: Exec) {
        let c = -h / self.dx;
        let s = self.shape;
        curl_update(exec, s, &mut self.bx, &self.ey, &self.ez, 1, 2, true, c);
        curl_update(exec, s, &mut self.by, &self.ez, &self.ex, 2, 0, true, c);
        curl_update(exec, s, &mut self.bz, &self.ex, &self.ey, 0, 1, true, c);
    }

    /// `E ← E + h ∇×B`.
    fn kick_e(&mut self, h: f64, exec: Exec) {
        let c = h / self.dx;
        let s = self.shape;
        curl_update(exec, s, &mut self.ex, &self.by, &self.bz, 1, 2, false, c);
        curl_update(exec, s, &mut self.ey, &self.bz, &self.bx, 2, 0, false, c);
        curl_update(exec, s, &mut self.ez, &self.bx, &self.by, 0, 1, false, c);
    }

    /// Exact flow of `∂_t E = −αE`, `∂_t B = αB` over `h`.
    fn react(&mut self, alpha: f64, h: f64, exec: Exec) {
        if alpha == 0.0 {
            return;
        }
        let de = (-alpha * h).exp();
        let db = (alpha * h).exp();
        for c in Component::ALL {
            let s = if c.is_electric() { de } else { db };
            exec.for_each_chunk_mut(self.component_mut(c), STEP_CHUNK, |_, chunk| {
                chunk.iter_mut().for_each(|v| *v *= s);
            });
        }
    }

    /// `R(h/2) · [B kick h/2, E kick h, B kick h/2] · R(h/2)`; symmetric, so
    /// a step with `−h` inverts a step with `h`.
    fn advance(&mut self, alpha: f64, h: f64, exec: Exec) {
        self.react(alpha, 0.5 * h, exec);
        self.kick_b(0.5 * h, exec);
        self.kick_e(h, exec);
        self.kick_b(0.5 * h, exec);
        self.react(alpha, 0.5 * h, exec);
        self.time += h;
    }
}

/// One step forward by `spec.dt`.
pub fn step(state: &mut GridState, spec: &GridSpec, exec: Exec) -> Result<()> {
    spec.validate()?;
    state.check_compatible(spec)?;
    state.advance(spec.alpha, spec.dt, exec);
    Ok(())
}

/// One step backward by `spec.dt`; inverts [`step`] up to round-off.
pub fn step_reverse(state: &mut GridState, spec: &GridSpec, exec: Exec) -> Result<()> {
    spec.validate()?;
    state.check_compatible(spec)?;
    state.advance(spec.alpha, -spec.dt, exec);
    Ok(())
}

/// `n` forward steps with a finiteness check at the end.
pub fn run(state: &mut GridState, spec: &GridSpec, n: usize, exec: Exec) -> Result<()> {
    spec.validate()?;
    state.check_compatible(spec)?;
    for _ in 0..n {
        state.advance(spec.alpha, spec.dt, exec);
    }
    if !state.is_finite() {
        return Err(Error::Numerical(format!(
            "non-finite field values at t = {}",
            state.time
        )));
    }
    Ok(())
}
