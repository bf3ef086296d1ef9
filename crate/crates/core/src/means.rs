//! Matrix geometric mean `A # B`, spectral geometric mean `A ◇ B`, and the
//! trace identity `F(ρ, σ) = Tr(ρ ◇ σ)`.

use crate::error::{Error, Result};
use crate::fidelity::trace_sqrt_sandwich;
use crate::numerics::{self, ComplexMatrix, HermitianEig};
use crate::states::DensityMatrix;

/// A matrix counts as positive definite when `λ_min > PD_TOL · ‖A‖_max`.
pub const PD_TOL: f64 = 1e-10;

/// Mixing weight toward `I/d` applied to singular states before `Tr(ρ ◇ σ)`.
pub const STATE_REGULARIZATION: f64 = 1e-8;

/// What to do when an argument that must be PD is singular.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingularPolicy {
    Reject,
    /// Replace `A` by `A + ε·I`.
    Ridge(f64),
}

/// A mean together with the ridges that were applied, if any.
#[derive(Clone, Debug)]
pub struct MeanResult {
    pub matrix: ComplexMatrix,
    pub left_ridge: Option<f64>,
    pub right_ridge: Option<f64>,
}

fn square_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let defect = a.hermiticity_defect();
    if defect > numerics::HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

fn same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    Ok(())
}

/// Eigendecomposition of a matrix that must be PD, applying the policy.
fn pd_eig(a: &ComplexMatrix, policy: SingularPolicy) -> Result<(HermitianEig, Option<f64>)> {
    let mut eig = numerics::hermitian_eig(a)?;
    let tol = PD_TOL * a.max_abs();
    let lowest = eig.eigenvalues[0];
    if lowest > tol {
        return Ok((eig, None));
    }
    match policy {
        SingularPolicy::Reject => Err(Error::NotPositiveDefinite { eigenvalue: lowest }),
        SingularPolicy::Ridge(eps) => {
            eig.eigenvalues.iter_mut().for_each(|v| *v += eps);
            if eig.eigenvalues[0] <= tol {
                return Err(Error::NotPositiveDefinite {
                    eigenvalue: eig.eigenvalues[0],
                });
            }
            Ok((eig, Some(eps)))
        }
    }
}

fn geometric_mean_from_eig(a: &HermitianEig, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let half = a.map_spectrum(f64::sqrt);
    let inv_half = a.map_spectrum(|v| v.sqrt().recip());
    let inner = (&inv_half * &(b * &inv_half)).hermitian_part();
    let root = numerics::psd_sqrt(&inner)?;
    Ok((&half * &(&root * &half)).hermitian_part())
}

/// `A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}` for PD `A` and PSD `B`.
pub fn geometric_mean(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(geometric_mean_with(a, b, SingularPolicy::Reject)?.matrix)
}

pub fn geometric_mean_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    policy: SingularPolicy,
) -> Result<MeanResult> {
    square_hermitian(a)?;
    square_hermitian(b)?;
    same_shape(a, b)?;
    let (eig, left_ridge) = pd_eig(a, policy)?;
    Ok(MeanResult {
        matrix: geometric_mean_from_eig(&eig, b)?,
        left_ridge,
        right_ridge: None,
    })
}

/// `A ◇ B = (A^{-1} # B)^{1/2} · A · (A^{-1} # B)^{1/2}` for PD `A`, `B`.
pub fn spectral_geometric_mean(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(spectral_geometric_mean_with(a, b, SingularPolicy::Reject)?.matrix)
}

pub fn spectral_geometric_mean_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    policy: SingularPolicy,
) -> Result<MeanResult> {
    square_hermitian(a)?;
    square_hermitian(b)?;
    same_shape(a, b)?;
    let (a_eig, left_ridge) = pd_eig(a, policy)?;
    let (b_eig, right_ridge) = pd_eig(b, policy)?;
    let a_used = a_eig.reconstruct();
    let b_used = b_eig.reconstruct();
    let inverse = HermitianEig {
        eigenvalues: a_eig.eigenvalues.iter().map(|v| v.recip()).collect(),
        eigenvectors: a_eig.eigenvectors.clone(),
    };
    let g = geometric_mean_from_eig(&inverse, &b_used)?;
    let x = numerics::psd_sqrt(&g)?;
    Ok(MeanResult {
        matrix: (&x * &(&a_used * &x)).hermitian_part(),
        left_ridge,
        right_ridge,
    })
}

/// Eigenvalues of `ρσ`, ascending, taken from the similar Hermitian matrix `√ρ σ √ρ`.
pub fn product_eigenvalues(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Vec<f64>> {
    same_shape(rho.matrix(), sigma.matrix())?;
    let root = rho.sqrt();
    numerics::hermitian_eigenvalues(&(&root * &(sigma.matrix() * &root)))
}

/// Fidelity through the spectral geometric mean, plus the eigenvalue route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiamondFidelity {
    /// `Tr(ρ ◇ σ)`.
    pub trace_diamond: f64,
    /// `Σ_i √λ_i(ρσ)`.
    pub eigen_route: f64,
    /// Set when a singular state was replaced by `(1−ε)ρ + ε·I/d`.
    pub regularization: Option<f64>,
}

fn regularized(rho: &DensityMatrix) -> (DensityMatrix, bool) {
    let values = rho.spectrum(crate::states::Order::Ascending);
    if values.values()[0] > PD_TOL * rho.matrix().max_abs() {
        return (rho.clone(), false);
    }
    let mixed = DensityMatrix::maximally_mixed(rho.dim());
    (
        rho.mix(&mixed, 1.0 - STATE_REGULARIZATION)
            .expect("same dimension, weight in range"),
        true,
    )
}

pub fn fidelity_via_diamond(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DiamondFidelity> {
    same_shape(rho.matrix(), sigma.matrix())?;
    let (r, r_reg) = regularized(rho);
    let (s, s_reg) = regularized(sigma);
    let diamond = spectral_geometric_mean(r.matrix(), s.matrix())?;
    let eigen_route = trace_sqrt_sandwich(&r.sqrt(), s.matrix());
    Ok(DiamondFidelity {
        trace_diamond: diamond.trace().re,
        eigen_route,
        regularization: (r_reg || s_reg).then_some(STATE_REGULARIZATION),
    })
}
