//! Fidelity `F(ρ, σ) = Tr √(√ρ σ √ρ)` and its relatives.

use crate::error::{Error, Result};
use crate::numerics::{self, ComplexMatrix, NOISE_FLOOR};
use crate::states::{DensityMatrix, PureState};

/// Tolerance on the unit sum of a probability vector.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

/// Overshoot outside `[0, 1]` beyond which the raw value is worth reporting.
pub const OVERSHOOT_REPORT: f64 = 1e-9;

/// Which state sits inside the square roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sandwich {
    /// `Tr √(√ρ σ √ρ)`
    Rho,
    /// `Tr √(√σ ρ √σ)`
    Sigma,
}

/// Fidelity with the value before clipping into `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityValue {
    pub value: f64,
    pub unclipped: f64,
}

impl FidelityValue {
    fn from_raw(unclipped: f64) -> Self {
        Self {
            value: unclipped.clamp(0.0, 1.0),
            unclipped,
        }
    }

    /// True when clipping moved the value by more than [`OVERSHOOT_REPORT`].
    pub fn overshoot(&self) -> bool {
        (self.value - self.unclipped).abs() > OVERSHOOT_REPORT
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// `Tr √(R·B·R)` for Hermitian `R` and PSD `B`, summing roots of the clamped
/// spectrum of the sandwich.
pub(crate) fn trace_sqrt_sandwich(root: &ComplexMatrix, inner: &ComplexMatrix) -> f64 {
    let m = root * &(inner * root);
    let scale = root.max_abs().powi(2) * inner.max_abs() * m.rows() as f64;
    let values = numerics::hermitian_eigenvalues(&m).expect("sandwich is Hermitian");
    let floor = NOISE_FLOOR * scale.max(values.last().copied().unwrap_or(0.0));
    values
        .iter()
        .filter(|&&v| v > floor)
        .map(|v| v.sqrt())
        .sum()
}

/// Fidelity between two states.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(fidelity_detailed(rho, sigma, Sandwich::Rho)?.value)
}

/// Fidelity with an explicit choice of sandwich and the pre-clip value.
pub fn fidelity_detailed(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    sandwich: Sandwich,
) -> Result<FidelityValue> {
    check_dims(rho.dim(), sigma.dim())?;
    let (outer, inner) = match sandwich {
        Sandwich::Rho => (rho, sigma),
        Sandwich::Sigma => (sigma, rho),
    };
    let raw = trace_sqrt_sandwich(&outer.sqrt(), inner.matrix());
    Ok(FidelityValue::from_raw(raw))
}

/// Fidelity against a fixed `ρ`, with `√ρ` computed once.
#[derive(Clone, Debug)]
pub struct FidelityProbe {
    sqrt_rho: ComplexMatrix,
}

impl FidelityProbe {
    pub fn new(rho: &DensityMatrix) -> Self {
        Self {
            sqrt_rho: rho.sqrt(),
        }
    }

    pub fn dim(&self) -> usize {
        self.sqrt_rho.rows()
    }

    /// `F(ρ, σ)`.
    pub fn eval(&self, sigma: &DensityMatrix) -> Result<f64> {
        check_dims(self.dim(), sigma.dim())?;
        Ok(trace_sqrt_sandwich(&self.sqrt_rho, sigma.matrix()).clamp(0.0, 1.0))
    }

    /// `F(ρ, U σ U†)` without materializing a validated state.
    pub fn eval_conjugated(&self, sigma: &DensityMatrix, u: &ComplexMatrix) -> Result<f64> {
        check_dims(self.dim(), sigma.dim())?;
        check_dims(self.dim(), u.rows())?;
        let rotated = sigma.matrix().conjugate_by(u);
        Ok(trace_sqrt_sandwich(&self.sqrt_rho, &rotated).clamp(0.0, 1.0))
    }
}

/// `√⟨ψ|σ|ψ⟩`.
pub fn fidelity_pure(psi: &PureState, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(psi.dim(), sigma.dim())?;
    let q = sigma.matrix().quadratic_form(psi.vector()).re;
    Ok(q.max(0.0).sqrt().min(1.0))
}

pub(crate) fn validate_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Empty("probability vector"));
    }
    if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidDistribution(format!(
            "entry {x} is negative or not finite"
        )));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::InvalidDistribution(format!("entries sum to {s}")));
    }
    Ok(())
}

/// Bhattacharyya coefficient `Σ √(p_j q_j)`.
pub fn classical_fidelity(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    validate_distribution(p)?;
    validate_distribution(q)?;
    Ok(p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum())
}

/// `arccos F(ρ, σ)`, in `[0, π/2]`.
pub fn bures_angle(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(fidelity(rho, sigma)?.acos())
}
