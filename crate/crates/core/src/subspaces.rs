//! Subspaces of `C^d`, canonical angles, and fidelity between the normalized
//! projections `P_S / m`.

use crate::error::{Error, Result};
use crate::fidelity::fidelity;
use crate::numerics::{self, ComplexMatrix};
use crate::states::{projection_state, DensityMatrix, Order};

/// Tolerance for `Q†Q = I` on a subspace frame.
pub const FRAME_TOL: f64 = 1e-12;

/// Default tolerance for counting singular values equal to one.
pub const OVERLAP_TOL: f64 = 1e-8;

/// Subspace stored as a `d × m` frame with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    frame: ComplexMatrix,
}

impl Subspace {
    /// Orthonormalizes the columns of `a`; the dimension is their numerical rank.
    pub fn from_columns(a: &ComplexMatrix, rank_tol: f64) -> Result<Self> {
        Ok(Self {
            frame: numerics::qr_orthonormalize(a, rank_tol)?,
        })
    }

    /// Accepts a frame that is already orthonormal.
    pub fn from_frame(frame: ComplexMatrix) -> Result<Self> {
        if frame.cols() > frame.rows() {
            return Err(Error::OutOfRange {
                name: "subspace dimension",
                value: frame.cols() as f64,
                range: "[1, d]",
            });
        }
        let defect = frame.unitarity_defect();
        if defect > FRAME_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self { frame })
    }

    pub fn frame(&self) -> &ComplexMatrix {
        &self.frame
    }

    /// `m`.
    pub fn dim(&self) -> usize {
        self.frame.cols()
    }

    /// `d`.
    pub fn ambient_dim(&self) -> usize {
        self.frame.rows()
    }

    /// `P_S = Q·Q†`.
    pub fn projector(&self) -> ComplexMatrix {
        &self.frame * &self.frame.adjoint()
    }
}

fn check_ambient(s: &Subspace, t: &Subspace) -> Result<()> {
    if s.ambient_dim() != t.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim(),
            found: t.ambient_dim(),
        });
    }
    Ok(())
}

/// Cosines of the canonical angles: singular values of `Q_S†·Q_T`, clipped to `[0, 1]`.
fn principal_cosines(s: &Subspace, t: &Subspace) -> Vec<f64> {
    let overlap = &s.frame.adjoint() * &t.frame;
    numerics::singular_values(&overlap)
        .into_iter()
        .map(|c| c.clamp(0.0, 1.0))
        .collect()
}

/// Canonical angles, ascending in `[0, π/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalAngles {
    angles: Vec<f64>,
}

impl CanonicalAngles {
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Descending.
    pub fn cosines(&self) -> Vec<f64> {
        self.angles.iter().map(|a| a.cos()).collect()
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.angles.iter().map(|a| a.to_degrees()).collect()
    }
}

pub fn canonical_angles(s: &Subspace, t: &Subspace) -> Result<CanonicalAngles> {
    check_ambient(s, t)?;
    Ok(CanonicalAngles {
        angles: principal_cosines(s, t).into_iter().map(f64::acos).collect(),
    })
}

/// Both routes to `F(ρ_S, ρ_T)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionFidelity {
    /// Direct evaluation of `Tr √(√ρ_S ρ_T √ρ_S)`.
    pub via_states: f64,
    /// `(1/√(mn)) Σ_k cos θ_k`.
    pub via_angles: f64,
}

impl ProjectionFidelity {
    pub fn value(&self) -> f64 {
        self.via_states
    }

    pub fn discrepancy(&self) -> f64 {
        (self.via_states - self.via_angles).abs()
    }
}

pub fn projection_fidelity(s: &Subspace, t: &Subspace) -> Result<ProjectionFidelity> {
    check_ambient(s, t)?;
    let via_states = fidelity(&projection_state(s), &projection_state(t))?;
    let norm = ((s.dim() * t.dim()) as f64).sqrt();
    let via_angles = principal_cosines(s, t).iter().sum::<f64>() / norm;
    Ok(ProjectionFidelity {
        via_states,
        via_angles,
    })
}

/// `(max(m+n−d, 0)/√(mn), min(√(m/n), √(n/m)))`.
pub fn projection_fidelity_bounds(m: usize, n: usize, d: usize) -> Result<(f64, f64)> {
    for (name, v) in [("m", m), ("n", n)] {
        if v == 0 || v > d {
            return Err(Error::OutOfRange {
                name,
                value: v as f64,
                range: "[1, d]",
            });
        }
    }
    let mn = ((m * n) as f64).sqrt();
    let lower = (m + n).saturating_sub(d) as f64 / mn;
    let ratio = m as f64 / n as f64;
    let upper = ratio.sqrt().min(ratio.recip().sqrt());
    Ok((lower, upper))
}

/// Numerical `dim(S ∩ T)`: singular values of `Q_S†Q_T` within `tol` of one.
pub fn overlap_dimension(s: &Subspace, t: &Subspace, tol: f64) -> Result<usize> {
    check_ambient(s, t)?;
    Ok(principal_cosines(s, t)
        .iter()
        .filter(|&&c| c >= 1.0 - tol)
        .count())
}

/// Extremes of `F(ρ, ρ_S)` over `m`-dimensional `S`, with attaining subspaces.
#[derive(Clone, Debug)]
pub struct ProjectionBounds {
    pub lower: f64,
    pub upper: f64,
    /// Span of the eigenvectors of the `m` smallest eigenvalues.
    pub s_min: Subspace,
    /// Span of the eigenvectors of the `m` largest eigenvalues.
    pub s_max: Subspace,
}

pub fn state_vs_projection_bounds(rho: &DensityMatrix, m: usize) -> Result<ProjectionBounds> {
    let d = rho.dim();
    if m == 0 || m > d {
        return Err(Error::OutOfRange {
            name: "m",
            value: m as f64,
            range: "[1, d]",
        });
    }
    let lambda = rho.spectrum(Order::Descending);
    let lambda = lambda.values();
    let root = |v: &f64| (v / m as f64).sqrt();
    let upper = lambda[..m].iter().map(root).sum();
    let lower = lambda[d - m..].iter().map(root).sum();

    // eigenvectors come ascending
    let vectors = rho.eig().eigenvectors;
    let smallest: Vec<usize> = (0..m).collect();
    let largest: Vec<usize> = (d - m..d).collect();
    Ok(ProjectionBounds {
        lower,
        upper,
        s_min: Subspace::from_frame(vectors.select_columns(&smallest))?,
        s_max: Subspace::from_frame(vectors.select_columns(&largest))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;
    use crate::states::{random_density, random_unitary};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn span(cols: &[&[f64]]) -> Subspace {
        let d = cols[0].len();
        let columns: Vec<Vec<C64>> = cols
            .iter()
            .map(|c| c.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        assert!(columns.iter().all(|c| c.len() == d));
        Subspace::from_columns(&ComplexMatrix::from_columns(&columns).unwrap(), 1e-10).unwrap()
    }

    #[test]
    fn from_columns_examples() {
        let s = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert_eq!(s.dim(), 2);
        assert!(
            s.frame().max_abs_diff(
                &ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]).unwrap()
            ) < 1e-15
        );
        assert_eq!(span(&[&[1.0, 2.0, 0.0], &[1.0, 2.0, 0.0]]).dim(), 1);
        let s = span(&[&[1.0, 1.0, 0.0]]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.frame()[(0, 0)].re - h).abs() < 1e-15);
        assert!(matches!(
            Subspace::from_columns(&ComplexMatrix::zeros(3, 2), 1e-10),
            Err(Error::RankZero)
        ));
    }

    #[test]
    fn from_frame_rejects_non_orthonormal() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            Subspace::from_frame(m),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn angle_examples() {
        let s = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0]]);
        assert!(canonical_angles(&s, &s)
            .unwrap()
            .angles()
            .iter()
            .all(|a| a.abs() < 1e-7));

        let t = FRAC_PI_3;
        let a = canonical_angles(&span(&[&[1.0, 0.0]]), &span(&[&[t.cos(), t.sin()]])).unwrap();
        assert_eq!(a.angles().len(), 1);
        assert!((a.angles()[0] - t).abs() < 1e-14);
        assert!((a.degrees()[0] - 60.0).abs() < 1e-12);

        let a = canonical_angles(
            &span(&[&[1.0, 0.0, 0.0]]),
            &span(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        )
        .unwrap();
        assert!(a.angles().iter().all(|x| (x - FRAC_PI_2).abs() < 1e-15));

        let other = span(&[&[1.0, 0.0]]);
        assert!(canonical_angles(&s, &other).is_err());
    }

    #[test]
    fn angles_ascending() {
        let s = Subspace::from_frame(random_unitary(6, 1).select_columns(&[0, 1, 2])).unwrap();
        let t = Subspace::from_frame(random_unitary(6, 2).select_columns(&[0, 1, 2, 3])).unwrap();
        let a = canonical_angles(&s, &t).unwrap();
        assert_eq!(a.angles().len(), 3);
        assert!(a.angles().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn projection_fidelity_examples() {
        let s = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let t = span(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let f = projection_fidelity(&s, &t).unwrap();
        assert!((f.value() - 0.5).abs() < 1e-12);
        assert!((f.via_angles - 0.5).abs() < 1e-12);
        assert_eq!(overlap_dimension(&s, &t, OVERLAP_TOL).unwrap(), 1);

        assert!((projection_fidelity(&s, &s).unwrap().value() - 1.0).abs() < 1e-12);

        let th = FRAC_PI_3;
        let f =
            projection_fidelity(&span(&[&[1.0, 0.0]]), &span(&[&[th.cos(), th.sin()]])).unwrap();
        assert!((f.value() - 0.5).abs() < 1e-12);
        assert!(f.discrepancy() < 1e-12);
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = projection_fidelity_bounds(2, 2, 3).unwrap();
        assert!((lo - 0.5).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        assert_eq!(projection_fidelity_bounds(4, 4, 4).unwrap(), (1.0, 1.0));
        assert_eq!(projection_fidelity_bounds(1, 1, 5).unwrap(), (0.0, 1.0));
        let (_, hi) = projection_fidelity_bounds(1, 4, 5).unwrap();
        assert!((hi - 0.5).abs() < 1e-15);
        assert!(projection_fidelity_bounds(0, 1, 3).is_err());
        assert!(projection_fidelity_bounds(2, 4, 3).is_err());
    }

    #[test]
    fn overlap_examples() {
        let s = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert_eq!(overlap_dimension(&s, &s, OVERLAP_TOL).unwrap(), 2);
        let perp = span(&[&[0.0, 0.0, 1.0]]);
        assert_eq!(overlap_dimension(&s, &perp, OVERLAP_TOL).unwrap(), 0);
    }

    #[test]
    fn interlacing_examples() {
        let rho = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let b = state_vs_projection_bounds(&rho, 1).unwrap();
        assert!((b.lower - 0.2f64.sqrt()).abs() < 1e-14);
        assert!((b.upper - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((b.lower - 0.4472136).abs() < 1e-7 && (b.upper - 0.5f64.sqrt()).abs() < 1e-15);
        let lo = fidelity(&rho, &projection_state(&b.s_min)).unwrap();
        let hi = fidelity(&rho, &projection_state(&b.s_max)).unwrap();
        assert!((lo - b.lower).abs() < 1e-9 && (hi - b.upper).abs() < 1e-9);

        let b = state_vs_projection_bounds(&rho, 3).unwrap();
        let want: f64 = [0.5f64, 0.3, 0.2].iter().map(|l| (l / 3.0).sqrt()).sum();
        assert!((b.lower - want).abs() < 1e-14 && (b.upper - want).abs() < 1e-14);

        let mm = DensityMatrix::maximally_mixed(5);
        for m in 1..=5 {
            let b = state_vs_projection_bounds(&mm, m).unwrap();
            let want = (m as f64 / 5.0).sqrt();
            assert!((b.lower - want).abs() < 1e-14 && (b.upper - want).abs() < 1e-14);
        }
        assert!(state_vs_projection_bounds(&rho, 0).is_err());
        assert!(state_vs_projection_bounds(&rho, 4).is_err());
    }

    #[test]
    fn random_pairs_agree_and_respect_bounds() {
        for seed in 0..60u64 {
            let d = 2 + (seed as usize % 9);
            let m = 1 + (seed as usize * 7) % d;
            let n = 1 + (seed as usize * 3) % d;
            let s = Subspace::from_frame(
                random_unitary(d, seed).select_columns(&(0..m).collect::<Vec<_>>()),
            )
            .unwrap();
            let t = Subspace::from_frame(
                random_unitary(d, seed + 1000).select_columns(&(0..n).collect::<Vec<_>>()),
            )
            .unwrap();
            let f = projection_fidelity(&s, &t).unwrap();
            assert!(f.discrepancy() <= 1e-9, "seed {seed}: {f:?}");
            let (lo, hi) = projection_fidelity_bounds(m, n, d).unwrap();
            assert!(f.value() >= lo - 1e-9 && f.value() <= hi + 1e-9);
            if m == n {
                let mean: f64 = canonical_angles(&s, &t)
                    .unwrap()
                    .cosines()
                    .iter()
                    .sum::<f64>()
                    / m as f64;
                let bures =
                    crate::fidelity::bures_angle(&projection_state(&s), &projection_state(&t))
                        .unwrap();
                assert!((bures.cos() - mean).abs() <= 1e-9);
            }
            let rho = random_density(d, d, seed + 7).unwrap();
            let b = state_vs_projection_bounds(&rho, m).unwrap();
            let fs = fidelity(&rho, &projection_state(&s)).unwrap();
            assert!(fs >= b.lower - 1e-9 && fs <= b.upper + 1e-9);
        }
    }
}
