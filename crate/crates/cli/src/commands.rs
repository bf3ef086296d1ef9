//! File-driven subcommands. Each returns a JSON payload without the envelope.

use std::fs;
use std::path::Path;

use fidelity_lab::channels::{min_fidelity, ChannelClass};
use fidelity_lab::fidelity::{bures_angle, fidelity_detailed, Sandwich};
use fidelity_lab::io::{self, ChannelJson, MatrixJson};
use fidelity_lab::orbits::{extremal_unitary, orbit_max, orbit_min, Extremum};
use fidelity_lab::subspaces::{
    canonical_angles, overlap_dimension, projection_fidelity, projection_fidelity_bounds,
    OVERLAP_TOL,
};
use fidelity_lab::{fidelity, DensityMatrix, Subspace};
use serde_json::{json, Value};

use crate::error::CliError;

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: Some(path.to_path_buf()),
        message: e.to_string(),
    })
}

fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    io::parse_density(&read_file(path)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn load_subspace(path: &Path) -> Result<Subspace, CliError> {
    io::parse_subspace(&read_file(path)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn load_pair(rho: &Path, sigma: &Path) -> Result<(DensityMatrix, DensityMatrix), CliError> {
    let (r, s) = (load_state(rho)?, load_state(sigma)?);
    if r.dim() != s.dim() {
        return Err(CliError::Validation(format!(
            "dimension mismatch: {} vs {}",
            r.dim(),
            s.dim()
        )));
    }
    Ok((r, s))
}

pub fn fidelity_report(rho: &Path, sigma: &Path) -> Result<Value, CliError> {
    let (r, s) = load_pair(rho, sigma)?;
    let f = fidelity_detailed(&r, &s, Sandwich::Rho)?;
    let mut out = json!({
        "dim": r.dim(),
        "fidelity": f.value,
        "bures_angle": bures_angle(&r, &s)?,
    });
    if f.overshoot() {
        out["unclipped"] = json!(f.unclipped);
    }
    Ok(out)
}

pub fn orbit_bounds_report(rho: &Path, sigma: &Path) -> Result<Value, CliError> {
    let (r, s) = load_pair(rho, sigma)?;
    let mut out = json!({
        "dim": r.dim(),
        "orbit_min": orbit_min(&r, &s)?,
        "orbit_max": orbit_max(&r, &s)?,
    });
    for (which, key) in [(Extremum::Min, "min"), (Extremum::Max, "max")] {
        let u = extremal_unitary(&r, &s, which)?;
        let achieved = fidelity(&r, &s.conjugate_by(&u))?;
        out[format!("{key}_unitary")] =
            serde_json::to_value(MatrixJson::from(&u)).expect("matrix serializes");
        out[format!("achieved_{key}")] = json!(achieved);
    }
    Ok(out)
}

pub fn channel_min_report(
    rho: &Path,
    sigma: &Path,
    class: ChannelClass,
) -> Result<Value, CliError> {
    let (r, s) = load_pair(rho, sigma)?;
    let m = min_fidelity(&r, &s, class)?;
    let achieved = fidelity(&r, &m.witness.apply(&s)?)?;
    Ok(json!({
        "dim": r.dim(),
        "class": class_name(class),
        "value": m.value,
        "achieved": achieved,
        "witness": serde_json::to_value(ChannelJson::from(&m.witness)).expect("channel serializes"),
    }))
}

pub fn class_name(class: ChannelClass) -> &'static str {
    match class {
        ChannelClass::All => "all",
        ChannelClass::Unital => "unital",
        ChannelClass::MixedUnitary => "mixed-unitary",
    }
}

pub fn angles_report(s_path: &Path, t_path: &Path) -> Result<Value, CliError> {
    let (s, t) = (load_subspace(s_path)?, load_subspace(t_path)?);
    if s.ambient_dim() != t.ambient_dim() {
        return Err(CliError::Validation(format!(
            "ambient dimension mismatch: {} vs {}",
            s.ambient_dim(),
            t.ambient_dim()
        )));
    }
    let angles = canonical_angles(&s, &t)?;
    let pf = projection_fidelity(&s, &t)?;
    let (lower, upper) = projection_fidelity_bounds(s.dim(), t.dim(), s.ambient_dim())?;
    Ok(json!({
        "ambient_dim": s.ambient_dim(),
        "m": s.dim(),
        "n": t.dim(),
        "angles_rad": angles.angles(),
        "angles_deg": angles.degrees(),
        "projection_fidelity": {
            "via_states": pf.via_states,
            "via_angles": pf.via_angles,
        },
        "overlap_dimension": overlap_dimension(&s, &t, OVERLAP_TOL)?,
        "bounds": { "lower": lower, "upper": upper },
    }))
}
