use std::io::{Read, Write};
use std::sync::Arc;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::io::snapshot::{check_meta, read_grid_state, read_header, write_grid_state, write_header};
use crate::io::{ArtifactMeta, IoError};
use crate::model::BalanceLaw;
use crate::scheme::{SchemeOptions, Simulation};
use crate::state::StateVec;

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"LIGCKPT\0";

/// Writes everything needed to continue `sim` bitwise-identically.
pub fn checkpoint<W: Write>(w: &mut W, config_hash: u64, sim: &Simulation) -> Result<(), IoError> {
    let model = sim.model();
    let meta = ArtifactMeta {
        config_hash,
        model_id: model.id().to_string(),
        mesh: *sim.mesh(),
        state_dim: model.state_dim(),
        metric_dim: model.metric_dim(),
    };
    write_header(w, CHECKPOINT_MAGIC, &meta)?;
    let o = sim.options();
    w.write_f64::<LittleEndian>(o.t_start)?;
    w.write_f64::<LittleEndian>(o.t_end)?;
    w.write_f64::<LittleEndian>(o.cfl)?;
    w.write_u8(o.correction as u8)?;
    w.write_u32::<LittleEndian>(o.metric_substeps as u32)?;
    for x in sim.metric_boundary().iter() {
        w.write_f64::<LittleEndian>(x)?;
    }
    write_grid_state(w, sim.state())?;
    Ok(())
}

/// Rebuilds a simulation for `model`. A different model id, mesh or config
/// hash is an error.
pub fn restore<R: Read>(r: &mut R, model: Arc<dyn BalanceLaw>, config_hash: u64) -> Result<Simulation, IoError> {
    let meta = read_header(r, CHECKPOINT_MAGIC)?;
    let expected = ArtifactMeta {
        config_hash,
        model_id: model.id().to_string(),
        mesh: meta.mesh,
        state_dim: model.state_dim(),
        metric_dim: model.metric_dim(),
    };
    check_meta(&expected, &meta)?;
    if (meta.state_dim, meta.metric_dim) != (expected.state_dim, expected.metric_dim) {
        return Err(IoError::Corrupt("dimensions do not match the model".into()));
    }
    let options = SchemeOptions {
        t_start: r.read_f64::<LittleEndian>()?,
        t_end: r.read_f64::<LittleEndian>()?,
        cfl: r.read_f64::<LittleEndian>()?,
        correction: r.read_u8()? != 0,
        metric_substeps: r.read_u32::<LittleEndian>()? as usize,
    };
    let mut b = [0.0; 2];
    for x in b.iter_mut().take(meta.metric_dim) {
        *x = r.read_f64::<LittleEndian>()?;
    }
    let boundary = StateVec::from_slice(&b[..meta.metric_dim]);
    let state = read_grid_state(r, &meta)?;
    Ok(Simulation::resume(model, meta.mesh, options, boundary, state)?)
}
