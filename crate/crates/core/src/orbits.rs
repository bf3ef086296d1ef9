//! Extremal fidelity over the unitary orbit `{UσU†}` and the unitaries that
//! attain it.

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::states::{DensityMatrix, Order};

/// Which end of the orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

fn paired_root_sum(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x * y).sqrt()).sum()
}

/// `max_U F(ρ, UσU†) = Σ √(λ↓_i(ρ) λ↓_i(σ))`.
pub fn orbit_max(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok(paired_root_sum(
        rho.spectrum(Order::Descending).values(),
        sigma.spectrum(Order::Descending).values(),
    ))
}

/// `min_U F(ρ, UσU†) = Σ √(λ↓_i(ρ) λ↑_i(σ))`.
pub fn orbit_min(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok(paired_root_sum(
        rho.spectrum(Order::Descending).values(),
        sigma.spectrum(Order::Ascending).values(),
    ))
}

pub fn orbit_extremum(rho: &DensityMatrix, sigma: &DensityMatrix, which: Extremum) -> Result<f64> {
    match which {
        Extremum::Min => orbit_min(rho, sigma),
        Extremum::Max => orbit_max(rho, sigma),
    }
}

/// Unitary `U` with `F(ρ, UσU†)` at the requested end of the orbit.
///
/// `U = V_ρ · Π · V_σ†` with both eigenbases sorted descending; `Π` is the
/// identity for the maximum and the order reversal for the minimum, so `UσU†`
/// commutes with `ρ` and pairs the spectra as required.
pub fn extremal_unitary(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    which: Extremum,
) -> Result<ComplexMatrix> {
    check_dims(rho, sigma)?;
    let d = rho.dim();
    let descending: Vec<usize> = (0..d).rev().collect();
    let v_rho = rho.eig().eigenvectors.select_columns(&descending);
    let v_sigma = sigma.eig().eigenvectors.select_columns(&descending);
    let v_rho = match which {
        Extremum::Max => v_rho,
        Extremum::Min => v_rho.select_columns(&descending),
    };
    Ok(&v_rho * &v_sigma.adjoint())
}
