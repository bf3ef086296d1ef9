//! Dense complex linear algebra used by every other module.
//!
//! [`ComplexMatrix`] wraps an `nalgebra` matrix and keeps the finiteness
//! invariant at construction. The decompositions here add the validation and
//! ordering contracts the rest of the crate relies on: ascending Hermitian
//! spectra, descending singular values, and rank-revealing orthonormalization.

use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Inputs whose anti-Hermitian part is below this (relative to `max(1, ‖A‖_max)`)
/// are symmetrized; anything larger is rejected.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues down to `-PSD_TOL · ‖A‖_max` are treated as zero.
pub const PSD_TOL: f64 = 1e-10;

/// Eigenvalues at or below `NOISE_FLOOR · λ_max` are zeroed before square roots.
///
/// A backward-stable eigensolver leaves zero eigenvalues at about `ε‖A‖`, and
/// `√ε ≈ 1.5e-8` would otherwise leak into every trace of a square root.
pub const NOISE_FLOOR: f64 = 1e-13;

/// Dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("matrix must have at least one row and column"));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                found: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &data)))
    }

    /// Builds a real matrix from rows of equal length.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    left: cols,
                    right: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape {
                rows,
                cols: columns.len(),
                found: columns.iter().map(Vec::len).sum(),
            });
        }
        let mut data = Vec::with_capacity(rows * columns.len());
        for i in 0..rows {
            data.extend(columns.iter().map(|c| c[i]));
        }
        Self::from_row_major(rows, columns.len(), data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// Matrix unit `E_ij` of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = C64::new(1.0, 0.0);
        Self(m)
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self(DMatrix::from_fn(u.len(), v.len(), |i, j| {
            u[i] * v[j].conj()
        }))
    }

    pub(crate) fn from_dmatrix(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Sub-matrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self(self.0.select_columns(idx))
    }

    /// Rows `start..start + count`.
    pub fn row_block(&self, start: usize, count: usize) -> Self {
        Self(self.0.rows(start, count).into_owned())
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.0.diagonal().iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// Largest entry modulus, `‖A‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `‖A − B‖_max`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `‖A − A†‖_max`, or infinity for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.0.adjoint() * &self.0;
        Self(gram).max_abs_diff(&Self::identity(self.cols()))
    }

    /// `U · A · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// `⟨u|A|u⟩`.
    pub fn quadratic_form(&self, u: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows() {
            let row: C64 = (0..self.cols()).map(|j| self.0[(i, j)] * u[j]).sum();
            acc += u[i].conj() * row;
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors.0;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= w);
        }
        ComplexMatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

fn checked_hermitian(a: &ComplexMatrix) -> Result<DMatrix<C64>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let defect = a.hermiticity_defect();
    if defect > HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(a.hermitian_part().0)
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    let sym = checked_hermitian(a)?;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    Ok(HermitianEig {
        eigenvalues: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        eigenvectors: ComplexMatrix(eig.eigenvectors.select_columns(&order)),
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let sym = checked_hermitian(a)?;
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Clamps a PSD spectrum: negatives within tolerance and sub-floor noise go to zero.
///
/// `scale` is the `‖A‖_max` the tolerance is relative to.
pub(crate) fn clamp_psd_spectrum(values: &mut [f64], scale: f64) -> Result<()> {
    let tol = PSD_TOL * scale;
    let top = values.iter().copied().fold(0.0, f64::max);
    for v in values.iter_mut() {
        if *v < -tol {
            return Err(Error::NotPsd { eigenvalue: *v });
        }
        if *v <= NOISE_FLOOR * top {
            *v = 0.0;
        }
    }
    Ok(())
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut eig = hermitian_eig(a)?;
    clamp_psd_spectrum(&mut eig.eigenvalues, a.max_abs())?;
    Ok(eig.map_spectrum(f64::sqrt))
}

/// Thin singular value decomposition `A = U · diag(s) · V†`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// `rows × k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: ComplexMatrix,
    /// `cols × k` with orthonormal columns.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.u.0.clone();
        for (k, &s) in self.singular_values.iter().enumerate() {
            us.column_mut(k).iter_mut().for_each(|z| *z *= s);
        }
        ComplexMatrix(us * self.v.0.adjoint())
    }
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    let dec = a.0.clone().svd(true, true);
    let u = dec.u.expect("requested U");
    let v = dec.v_t.expect("requested V^dagger").adjoint();
    let s = dec.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    Svd {
        singular_values: order.iter().map(|&k| s[k].max(0.0)).collect(),
        u: ComplexMatrix(u.select_columns(&order)),
        v: ComplexMatrix(v.select_columns(&order)),
    }
}

/// Singular values only, descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.0.singular_values().iter().map(|x| x.max(0.0)).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis for the column space of `a`, by two-pass modified
/// Gram–Schmidt.
///
/// A column is kept when its residual after projection exceeds
/// `rank_tol` times the largest column norm of `a`, so the output column count
/// is the numerical rank at that tolerance.
pub fn qr_orthonormalize(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let columns: Vec<Vec<C64>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let scale = columns.iter().map(|c| norm(c)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::RankZero);
    }
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for mut v in columns {
        for _ in 0..2 {
            for q in &basis {
                let coeff: C64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= coeff * qi);
            }
        }
        let n = norm(&v);
        if n > rank_tol * scale {
            v.iter_mut().for_each(|z| *z /= n);
            basis.push(v);
        }
    }
    if basis.is_empty() {
        return Err(Error::RankZero);
    }
    ComplexMatrix::from_columns(&basis)
}
