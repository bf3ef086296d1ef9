//! Validated quantum states, spectra, projection states, random generators and
//! the decomposition of a state into a boundary point mixed with `I/d`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::{self, ComplexMatrix, HermitianEig, C64, HERMITIAN_TOL, PSD_TOL};
use crate::subspaces::Subspace;

/// Allowed deviation of a density matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-10;

/// Allowed deviation of a pure-state vector norm from 1.
pub const NORM_TOL: f64 = 1e-12;

/// Sort order for spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Ascending,
    Descending,
}

/// Hermitian, PSD, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `m` as a density matrix. Hermiticity noise below
    /// [`HERMITIAN_TOL`] is symmetrized away.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let defect = m.hermiticity_defect();
        if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        let m = m.hermitian_part();
        let trace = m.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace });
        }
        let lowest = numerics::hermitian_eigenvalues(&m)?[0];
        if lowest < -PSD_TOL * m.max_abs() {
            return Err(Error::NotPsd { eigenvalue: lowest });
        }
        Ok(Self { matrix: m })
    }

    /// `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(diag))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &PureState) -> Self {
        Self {
            matrix: ComplexMatrix::outer(psi.vector(), psi.vector()),
        }
    }

    /// Skips the spectral check for matrices that are states by construction.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self {
            matrix: m.hermitian_part(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eig(&self) -> HermitianEig {
        numerics::hermitian_eig(&self.matrix).expect("density matrix is Hermitian")
    }

    /// Sorted eigenvalues clamped to `[0, 1]`. Not renormalized.
    pub fn spectrum(&self, order: Order) -> Spectrum {
        let values =
            numerics::hermitian_eigenvalues(&self.matrix).expect("density matrix is Hermitian");
        Spectrum::from_raw(values, order)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum(Order::Ascending).values[0]
    }

    /// `√ρ`.
    pub fn sqrt(&self) -> ComplexMatrix {
        numerics::psd_sqrt(&self.matrix).expect("density matrix is PSD")
    }

    /// `U ρ U†` for unitary `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::from_trusted(self.matrix.conjugate_by(u))
    }

    /// `t·self + (1−t)·other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                range: "[0, 1]",
            });
        }
        Ok(Self::from_trusted(
            &self.matrix.scale(t) + &other.matrix.scale(1.0 - t),
        ))
    }
}

/// Eigenvalues of a state in a fixed sort order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    order: Order,
}

impl Spectrum {
    /// Clamps into `[0, 1]`, zeroes values at the noise floor and sorts.
    pub fn from_raw(mut values: Vec<f64>, order: Order) -> Self {
        let top = values.iter().copied().fold(0.0, f64::max);
        values.iter_mut().for_each(|v| {
            *v = if *v <= numerics::NOISE_FLOOR * top {
                0.0
            } else {
                v.min(1.0)
            }
        });
        match order {
            Order::Ascending => values.sort_by(f64::total_cmp),
            Order::Descending => values.sort_by(|a, b| b.total_cmp(a)),
        }
        Self { values, order }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    vector: Vec<C64>,
}

impl PureState {
    pub fn new(vector: Vec<C64>) -> Result<Self> {
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vector.is_empty() {
            return Err(Error::Empty("pure state vector"));
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { vector })
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(mut vector: Vec<C64>) -> Result<Self> {
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        vector.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { vector })
    }

    /// Standard basis vector `e_k` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut vector = vec![C64::new(0.0, 0.0); d];
        vector[k] = C64::new(1.0, 0.0);
        Self { vector }
    }

    pub fn vector(&self) -> &[C64] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::pure(self)
    }
}

/// `ρ = p·ω + (1−p)·I/d` with `ω` singular.
#[derive(Clone, Debug)]
pub struct BoundaryDecomposition {
    pub p: f64,
    pub omega: DensityMatrix,
}

/// `(1/m)·Q_S·Q_S†`.
pub fn projection_state(s: &Subspace) -> DensityMatrix {
    let q = s.frame();
    DensityMatrix::from_trusted((q * &q.adjoint()).scale(1.0 / s.dim() as f64))
}

/// Splits `ρ` into its boundary direction and the maximally mixed state.
///
/// `p = 1 − d·λ_min(ρ)`. The boundary state is built spectrally as
/// `V·diag(λ − λ_min)·V† / Σ(λ − λ_min)`, which is exactly singular. At
/// `ρ = I/d` the direction is arbitrary and `diag(1/(d−1), …, 1/(d−1), 0)` is
/// returned.
pub fn boundary_decompose(rho: &DensityMatrix) -> Result<BoundaryDecomposition> {
    let d = rho.dim();
    if d == 1 {
        return Err(Error::NoBoundary);
    }
    let mut eig = rho.eig();
    eig.eigenvalues.iter_mut().for_each(|v| *v = v.max(0.0));
    let lambda_min = eig.eigenvalues[0];
    let p = (1.0 - d as f64 * lambda_min).clamp(0.0, 1.0);

    let shifted: Vec<f64> = eig.eigenvalues.iter().map(|v| v - lambda_min).collect();
    let mass: f64 = shifted.iter().sum();
    let omega = if mass > 0.0 {
        let weights: Vec<f64> = shifted.iter().map(|v| v / mass).collect();
        let w = HermitianEig {
            eigenvalues: weights,
            eigenvectors: eig.eigenvectors,
        };
        DensityMatrix::from_trusted(w.reconstruct())
    } else {
        let mut diag = vec![1.0 / (d - 1) as f64; d];
        diag[d - 1] = 0.0;
        DensityMatrix::from_trusted(ComplexMatrix::from_diagonal(&diag))
    };
    Ok(BoundaryDecomposition { p, omega })
}

/// Deterministic generator for an explicit seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let m = DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    });
    ComplexMatrix::from_dmatrix(m)
}

/// Haar-random unitary from an explicit seed.
pub fn random_unitary(d: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(&mut seeded_rng(seed), d)
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` folded back into `Q`.
pub fn random_unitary_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    assert!(d >= 1, "unitary dimension must be at least 1");
    let g = gaussian_matrix(rng, d, d);
    let qr = g.as_dmatrix().clone().qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let rk = r[(k, k)];
        let n = rk.norm();
        let phase = if n > 0.0 { rk / n } else { C64::new(1.0, 0.0) };
        q.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    ComplexMatrix::from_dmatrix(q)
}

/// `G·G† / Tr(G·G†)` for a `d × rank` complex Gaussian `G`.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(&mut seeded_rng(seed), d, rank)
}

pub fn random_density_with<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    rank: usize,
) -> Result<DensityMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::OutOfRange {
            name: "rank",
            value: rank as f64,
            range: "[1, d]",
        });
    }
    let g = gaussian_matrix(rng, d, rank);
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    DensityMatrix::new(w.scale(1.0 / t))
}

/// Uniform (flat Dirichlet) probability vector.
pub fn random_probability_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}
