use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::grid::{Component, GridSpec, GridState};
use super::spectral::NodeSpectrum;
use crate::error::{Error, Result};

/// Writes node-collocated fields as CSV: `t,z,Ex,...,Bz` in one dimension,
/// `t,x,y,z,Ex,...,Bz` in three.
pub fn write_csv<W: Write>(state: &GridState, out: W) -> Result<()> {
    let (e, b) = NodeSpectrum::new(state).node_fields();
    let one_d = state.shape()[0] == 1 && state.shape()[1] == 1;
    let mut w = BufWriter::new(out);
    if one_d {
        writeln!(w, "t,z,Ex,Ey,Ez,Bx,By,Bz")?;
    } else {
        writeln!(w, "t,x,y,z,Ex,Ey,Ez,Bx,By,Bz")?;
    }
    for idx in 0..state.len() {
        let x = state.node(idx);
        if one_d {
            write!(w, "{:e},{:e}", state.time, x.z)?;
        } else {
            write!(w, "{:e},{:e},{:e},{:e}", state.time, x.x, x.y, x.z)?;
        }
        let (ei, bi) = (e[idx], b[idx]);
        writeln!(w, ",{:e},{:e},{:e},{:e},{:e},{:e}", ei.x, ei.y, ei.z, bi.x, bi.y, bi.z)?;
    }
    w.flush()?;
    Ok(())
}

/// Sidecar describing a raw snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawSidecar {
    pub shape: [usize; 3],
    pub spacing: f64,
    pub time: f64,
    pub alpha: f64,
    pub endianness: String,
    pub dtype: String,
    /// Component order in the file; each block holds `shape` values, last axis fastest.
    pub components: Vec<String>,
    /// Offset of each component from the node, in units of the spacing.
    pub offsets: Vec<[f64; 3]>,
}

/// Writes `<stem>.bin` (little-endian f64, staggered samples) and `<stem>.json`.
pub fn write_raw(state: &GridState, spec: &GridSpec, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    state.check_compatible(spec)?;
    fs::create_dir_all(dir)?;
    let bin = dir.join(format!("{stem}.bin"));
    let json = dir.join(format!("{stem}.json"));
    let mut w = BufWriter::new(fs::File::create(&bin)?);
    for c in Component::ALL {
        for v in state.component(c) {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    let sidecar = RawSidecar {
        shape: state.shape(),
        spacing: state.dx(),
        time: state.time,
        alpha: spec.alpha,
        endianness: "little".into(),
        dtype: "float64".into(),
        components: Component::ALL.iter().map(|c| c.name().to_string()).collect(),
        offsets: Component::ALL.iter().map(|c| c.offset()).collect(),
    };
    let text = serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(&json, text)?;
    Ok((bin, json))
}

/// Reads a raw snapshot back into a state compatible with `spec`.
pub fn read_raw(spec: &GridSpec, dir: &Path, stem: &str) -> Result<GridState> {
    let text = fs::read_to_string(dir.join(format!("{stem}.json")))?;
    let sidecar: RawSidecar = serde_json::from_str(&text).map_err(|e| Error::Io(e.to_string()))?;
    if sidecar.endianness != "little" || sidecar.dtype != "float64" {
        return Err(Error::Io("unsupported raw encoding".into()));
    }
    let mut state = GridState::zeros(spec)?;
    if sidecar.shape != state.shape() {
        return Err(Error::ShapeMismatch {
            expected: state.len(),
            got: sidecar.shape.iter().product(),
        });
    }
    let bytes = fs::read(dir.join(format!("{stem}.bin")))?;
    let n = state.len();
    if bytes.len() != 6 * n * 8 {
        return Err(Error::ShapeMismatch {
            expected: 6 * n,
            got: bytes.len() / 8,
        });
    }
    let mut values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")));
    for c in Component::ALL {
        for v in state.component_mut(c) {
            *v = values.next().expect("length checked");
        }
    }
    state.time = sidecar.time;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::kinematics::ThreeVector;

    #[test]
    fn raw_round_trip_and_csv_header() {
        let spec = GridSpec::with_courant(1, 16, 4.0, 0.2, 1.0, 0.9);
        let mut state = GridState::from_fn(
            &spec,
            |x| {
                (
                    ThreeVector::new(x.spatial().z.sin(), 0.0, 0.0),
                    ThreeVector::new(0.0, 0.5, 0.0),
                )
            },
            Exec::Serial,
        )
        .unwrap();
        state.time = 0.25;
        let dir = tempfile::tempdir().unwrap();
        write_raw(&state, &spec, dir.path(), "snap").unwrap();
        let back = read_raw(&spec, dir.path(), "snap").unwrap();
        assert_eq!(back, state);
        let mut buf = Vec::new();
        write_csv(&state, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,z,Ex,Ey,Ez,Bx,By,Bz\n"));
        assert_eq!(text.lines().count(), 17);
    }
}
