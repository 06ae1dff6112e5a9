use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::io::IoError;
use crate::scheme::{GridState, Mesh, Snapshot, StepRecord};
use crate::state::StateVec;

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"LIGSNAP\0";
pub const FORMAT_VERSION: u32 = 1;

/// Identifies what produced a persisted artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct ArtifactMeta {
    pub config_hash: u64,
    pub model_id: String,
    pub mesh: Mesh,
    pub state_dim: usize,
    pub metric_dim: usize,
}

pub(crate) fn write_header<W: Write>(w: &mut W, magic: &[u8; 8], meta: &ArtifactMeta) -> Result<(), IoError> {
    w.write_all(magic)?;
    w.write_u32::<LittleEndian>(FORMAT_VERSION)?;
    w.write_u64::<LittleEndian>(meta.config_hash)?;
    let id = meta.model_id.as_bytes();
    w.write_u16::<LittleEndian>(id.len() as u16)?;
    w.write_all(id)?;
    w.write_f64::<LittleEndian>(meta.mesh.r_min)?;
    w.write_f64::<LittleEndian>(meta.mesh.r_max)?;
    w.write_u64::<LittleEndian>(meta.mesh.n as u64)?;
    w.write_u8(meta.state_dim as u8)?;
    w.write_u8(meta.metric_dim as u8)?;
    Ok(())
}

pub(crate) fn read_header<R: Read>(r: &mut R, magic: &[u8; 8]) -> Result<ArtifactMeta, IoError> {
    let mut m = [0u8; 8];
    r.read_exact(&mut m)?;
    if &m != magic {
        return Err(IoError::Corrupt(format!("bad magic {:?}", String::from_utf8_lossy(&m))));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != FORMAT_VERSION {
        return Err(IoError::VersionMismatch {
            expected: format!("format {FORMAT_VERSION}"),
            found: format!("format {version}"),
        });
    }
    let config_hash = r.read_u64::<LittleEndian>()?;
    let len = r.read_u16::<LittleEndian>()? as usize;
    let mut id = vec![0u8; len];
    r.read_exact(&mut id)?;
    let model_id = String::from_utf8(id).map_err(|_| IoError::Corrupt("model id is not UTF-8".into()))?;
    let mesh = Mesh {
        r_min: r.read_f64::<LittleEndian>()?,
        r_max: r.read_f64::<LittleEndian>()?,
        n: r.read_u64::<LittleEndian>()? as usize,
    };
    mesh.validate().map_err(|e| IoError::Corrupt(e.to_string()))?;
    let state_dim = r.read_u8()? as usize;
    let metric_dim = r.read_u8()? as usize;
    if !(1..=2).contains(&state_dim) || !(1..=2).contains(&metric_dim) {
        return Err(IoError::Corrupt(format!("dimensions {state_dim}/{metric_dim} out of range")));
    }
    Ok(ArtifactMeta { config_hash, model_id, mesh, state_dim, metric_dim })
}

/// Checks the identifying fields of `found` against `expected`.
pub fn check_meta(expected: &ArtifactMeta, found: &ArtifactMeta) -> Result<(), IoError> {
    if expected.model_id != found.model_id {
        return Err(IoError::VersionMismatch {
            expected: format!("model {}", expected.model_id),
            found: format!("model {}", found.model_id),
        });
    }
    if expected.mesh != found.mesh {
        return Err(IoError::MeshMismatch { expected: expected.mesh, found: found.mesh });
    }
    if expected.config_hash != found.config_hash {
        return Err(IoError::HashMismatch { expected: expected.config_hash, found: found.config_hash });
    }
    Ok(())
}

fn write_states<W: Write>(w: &mut W, v: &[StateVec]) -> Result<(), IoError> {
    for s in v {
        for x in s.iter() {
            w.write_f64::<LittleEndian>(x)?;
        }
    }
    Ok(())
}

fn read_states<R: Read>(r: &mut R, count: usize, dim: usize) -> Result<Vec<StateVec>, IoError> {
    let mut buf = [0.0; 2];
    (0..count)
        .map(|_| {
            for b in buf.iter_mut().take(dim) {
                *b = r.read_f64::<LittleEndian>()?;
            }
            Ok(StateVec::from_slice(&buf[..dim]))
        })
        .collect()
}

pub(crate) fn write_grid_state<W: Write>(w: &mut W, s: &GridState) -> Result<(), IoError> {
    w.write_f64::<LittleEndian>(s.time)?;
    w.write_u64::<LittleEndian>(s.step as u64)?;
    write_states(w, &s.u)?;
    write_states(w, &s.metric)?;
    write_states(w, &s.metric_edges)?;
    write_states(w, &s.metric_slope)?;
    write_states(w, &s.boundary)?;
    Ok(())
}

pub(crate) fn read_grid_state<R: Read>(r: &mut R, meta: &ArtifactMeta) -> Result<GridState, IoError> {
    let cells = meta.mesh.cells();
    let (d, m) = (meta.state_dim, meta.metric_dim);
    let time = r.read_f64::<LittleEndian>()?;
    let step = r.read_u64::<LittleEndian>()? as usize;
    let u = read_states(r, cells, d)?;
    let metric = read_states(r, cells, m)?;
    let metric_edges = read_states(r, cells + 1, m)?;
    let metric_slope = read_states(r, cells, m)?;
    let b = read_states(r, 2, d)?;
    Ok(GridState { time, step, u, metric, metric_edges, metric_slope, boundary: [b[0], b[1]] })
}

pub fn write_snapshot<W: Write>(w: &mut W, meta: &ArtifactMeta, snap: &Snapshot) -> Result<(), IoError> {
    if snap.state.cells() != meta.mesh.cells() {
        return Err(IoError::MeshMismatch {
            expected: meta.mesh,
            found: Mesh { n: snap.state.cells().saturating_sub(1), ..meta.mesh },
        });
    }
    write_header(w, SNAPSHOT_MAGIC, meta)?;
    write_grid_state(w, &snap.state)?;
    match &snap.step {
        None => w.write_u8(0)?,
        Some(rec) => {
            w.write_u8(1)?;
            w.write_f64::<LittleEndian>(rec.dt)?;
            w.write_u8(rec.cfl_limited as u8)?;
            write_states(w, &rec.averages)?;
            write_states(w, &rec.traces)?;
        }
    }
    Ok(())
}

/// Reads a snapshot, whatever produced it.
pub fn read_snapshot_any<R: Read>(r: &mut R) -> Result<(ArtifactMeta, Snapshot), IoError> {
    let meta = read_header(r, SNAPSHOT_MAGIC)?;
    let state = read_grid_state(r, &meta)?;
    let cells = meta.mesh.cells();
    let step = match r.read_u8()? {
        0 => None,
        1 => {
            let dt = r.read_f64::<LittleEndian>()?;
            let cfl_limited = r.read_u8()? != 0;
            let averages = read_states(r, cells, meta.state_dim)?;
            let traces = read_states(r, cells + 1, meta.state_dim)?;
            Some(StepRecord { dt, cfl_limited, averages, traces })
        }
        t => return Err(IoError::Corrupt(format!("bad step tag {t}"))),
    };
    Ok((meta, Snapshot { state, step }))
}

/// Reads a snapshot and checks that it belongs to `expected`.
pub fn read_snapshot<R: Read>(r: &mut R, expected: &ArtifactMeta) -> Result<Snapshot, IoError> {
    let (meta, snap) = read_snapshot_any(r)?;
    check_meta(expected, &meta)?;
    Ok(snap)
}

/// Column names of [`write_csv_rows`].
pub fn csv_header(state_dim: usize, metric_dim: usize) -> String {
    let mut cols = vec!["t".to_string(), "x".to_string()];
    cols.extend((0..state_dim).map(|k| format!("u{k}")));
    cols.extend((0..metric_dim).map(|k| format!("a{k}")));
    cols.extend((0..state_dim).map(|k| format!("ubar{k}")));
    cols.join(",")
}

/// One row per cell at 17 significant digits; `ubar` is empty for the final level.
pub fn write_csv_rows<W: Write>(w: &mut W, mesh: &Mesh, snap: &Snapshot) -> Result<(), IoError> {
    let num = |v: f64| format!("{v:.16e}");
    let d = snap.state.u.first().map_or(1, |u| u.len());
    for i in 0..snap.state.cells() {
        let mut row = vec![num(snap.state.time), num(mesh.center(i))];
        row.extend(snap.state.u[i].iter().map(num));
        row.extend(snap.state.metric[i].iter().map(num));
        match &snap.step {
            Some(rec) => row.extend(rec.averages[i].iter().map(num)),
            None => row.extend((0..d).map(|_| String::new())),
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
