//! Quantum channels in Kraus form, their Choi matrices, standard
//! constructions, and the minimum of `F(ρ, Φ(σ))` over a channel class.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{self, ComplexMatrix, C64};
use crate::orbits::{extremal_unitary, orbit_min, Extremum};
use crate::states::{
    gaussian_matrix, random_probability_with, random_unitary_with, DensityMatrix, PureState,
};

/// Allowed `‖Σ V†V − I‖_max` for a channel.
pub const TP_TOL: f64 = 1e-9;

/// Allowed `‖U†U − I‖_max` for members of a mixed-unitary channel.
pub const UNITARY_TOL: f64 = 1e-10;

/// Completely positive, trace-preserving map given by Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    /// Validates shapes and trace preservation.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::Empty("Kraus family"))?;
        let dim = first.rows();
        for k in &kraus {
            if !k.is_square() {
                return Err(Error::NotSquare {
                    rows: k.rows(),
                    cols: k.cols(),
                });
            }
            if k.rows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.rows(),
                });
            }
        }
        let channel = Self { dim, kraus };
        let defect = channel.tp_defect();
        if defect > TP_TOL {
            return Err(Error::NotTracePreserving { defect });
        }
        Ok(channel)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim: d,
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    /// `ρ ↦ UρU†`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        check_unitary(&u)?;
        Ok(Self {
            dim: u.rows(),
            kraus: vec![u],
        })
    }

    /// Completely depolarizing channel `ρ ↦ Tr(ρ)·I/d`.
    pub fn depolarizing(d: usize) -> Self {
        let w = (1.0 / d as f64).sqrt();
        let kraus = (0..d)
            .flat_map(|i| (0..d).map(move |j| ComplexMatrix::unit(d, i, j).scale(w)))
            .collect();
        Self { dim: d, kraus }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `‖Σ V†V − I‖_max`.
    pub fn tp_defect(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for v in &self.kraus {
            acc = &acc + &(&v.adjoint() * v);
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// The linear map on an arbitrary `d × d` matrix.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.rows(),
            });
        }
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for v in &self.kraus {
            acc = &acc + &x.conjugate_by(v);
        }
        Ok(acc)
    }

    /// `Σ V σ V†`, revalidated as a state.
    pub fn apply(&self, sigma: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.apply_matrix(sigma.matrix())?)
    }

    /// `‖Σ V V† − I‖_max ≤ tol`.
    pub fn is_unital(&self, tol: f64) -> bool {
        let image = self
            .apply_matrix(&ComplexMatrix::identity(self.dim))
            .expect("identity has channel dimension");
        image.max_abs_diff(&ComplexMatrix::identity(self.dim)) <= tol
    }

    /// `C = Σ_ij E_ij ⊗ Φ(E_ij)`, assembled as `Σ_k vec(V_k) vec(V_k)†`.
    pub fn choi(&self) -> ChoiMatrix {
        let d = self.dim;
        let columns: Vec<Vec<C64>> = self
            .kraus
            .iter()
            .map(|v| {
                let mut col = Vec::with_capacity(d * d);
                for i in 0..d {
                    for a in 0..d {
                        col.push(v[(a, i)]);
                    }
                }
                col
            })
            .collect();
        let w = ComplexMatrix::from_columns(&columns).expect("Kraus vectors share a length");
        ChoiMatrix {
            dim: d,
            matrix: &w * &w.adjoint(),
        }
    }

    /// Largest entry difference of `Φ(E_ij)` and `Ψ(E_ij)` over all matrix units.
    ///
    /// Kraus families are not unique, so channels are compared by action.
    pub fn action_distance(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = ComplexMatrix::unit(self.dim, i, j);
                worst = worst.max(
                    self.apply_matrix(&e)?
                        .max_abs_diff(&other.apply_matrix(&e)?),
                );
            }
        }
        Ok(worst)
    }
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

/// Choi matrix of a channel on `C^d`, size `d² × d²`.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        numerics::hermitian_eigenvalues(&self.matrix).expect("Choi matrix is Hermitian")
    }

    /// Number of eigenvalues above `tol · λ_max`: the minimal Kraus count.
    pub fn rank(&self, tol: f64) -> usize {
        let ev = self.eigenvalues();
        let top = ev.last().copied().unwrap_or(0.0);
        ev.iter().filter(|&&v| v > tol * top).count()
    }

    /// Smallest eigenvalue; nonnegative up to rounding for a CP map.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Trace over the output factor; the identity for a trace-preserving map.
    pub fn output_partial_trace(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                data.push((0..d).map(|a| self.matrix[(i * d + a, j * d + a)]).sum());
            }
        }
        ComplexMatrix::from_row_major(d, d, data).expect("finite partial trace")
    }
}

/// `ρ ↦ Σ p_i U_i ρ U_i†`.
pub fn mixed_unitary(weights: &[f64], unitaries: &[ComplexMatrix]) -> Result<QuantumChannel> {
    if weights.len() != unitaries.len() {
        return Err(Error::LengthMismatch {
            left: weights.len(),
            right: unitaries.len(),
        });
    }
    crate::fidelity::validate_distribution(weights)?;
    let dim = unitaries[0].rows();
    for u in unitaries {
        check_unitary(u)?;
        if u.rows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: u.rows(),
            });
        }
    }
    let kraus = weights
        .iter()
        .zip(unitaries)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, u)| u.scale(w.sqrt()))
        .collect();
    QuantumChannel::new(kraus)
}

/// `σ ↦ Tr(σ)·τ`, with Kraus operators `√μ_k |v_k⟩⟨e_j|` over the eigenpairs of `τ`.
pub fn replacement_channel(tau: &DensityMatrix) -> QuantumChannel {
    let d = tau.dim();
    let mut eig = tau.eig();
    numerics::clamp_psd_spectrum(&mut eig.eigenvalues, tau.matrix().max_abs())
        .expect("density matrix is PSD");
    let mut kraus = Vec::new();
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        if mu == 0.0 {
            continue;
        }
        let v: Vec<C64> = eig
            .eigenvectors
            .column(k)
            .iter()
            .map(|z| z * mu.sqrt())
            .collect();
        for j in 0..d {
            kraus.push(ComplexMatrix::outer(&v, PureState::basis(d, j).vector()));
        }
    }
    QuantumChannel { dim: d, kraus }
}

/// `σ ↦ Tr(σ)·|ψ⟩⟨ψ|`.
pub fn replacement_pure(psi: &PureState) -> QuantumChannel {
    let d = psi.dim();
    let kraus = (0..d)
        .map(|j| ComplexMatrix::outer(psi.vector(), PureState::basis(d, j).vector()))
        .collect();
    QuantumChannel { dim: d, kraus }
}

/// `p·Ψ + (1−p)·Ω` with `Ω` the completely depolarizing channel.
pub fn convex_with_depolarizing(psi: &QuantumChannel, p: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    let d = psi.dim;
    let mut kraus = Vec::new();
    if p > 0.0 {
        kraus.extend(psi.kraus.iter().map(|v| v.scale(p.sqrt())));
    }
    if p < 1.0 {
        let w = ((1.0 - p) / d as f64).sqrt();
        for i in 0..d {
            for j in 0..d {
                kraus.push(ComplexMatrix::unit(d, i, j).scale(w));
            }
        }
    }
    Ok(QuantumChannel { dim: d, kraus })
}

/// Channel class for [`min_fidelity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelClass {
    All,
    Unital,
    MixedUnitary,
}

/// Analytic minimum together with a channel that attains it.
#[derive(Clone, Debug)]
pub struct MinFidelity {
    pub value: f64,
    pub witness: QuantumChannel,
}

/// `min_Φ F(ρ, Φ(σ))` over the given class.
///
/// Over all channels the minimum is `√λ_min(ρ)`, attained by replacing every
/// input with the eigenvector of `λ_min(ρ)`. Over unital and mixed-unitary
/// channels it is the unitary-orbit minimum, attained by a single unitary.
pub fn min_fidelity(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    class: ChannelClass,
) -> Result<MinFidelity> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    match class {
        ChannelClass::All => {
            let eig = rho.eig();
            let value = rho.min_eigenvalue().sqrt();
            let psi = PureState::normalized(eig.eigenvectors.column(0))?;
            Ok(MinFidelity {
                value,
                witness: replacement_pure(&psi),
            })
        }
        ChannelClass::Unital | ChannelClass::MixedUnitary => {
            let value = orbit_min(rho, sigma)?;
            let u = extremal_unitary(rho, sigma, Extremum::Min)?;
            Ok(MinFidelity {
                value,
                witness: QuantumChannel::unitary(u)?,
            })
        }
    }
}

/// Random channel with `k` Kraus operators: a Gaussian `dk × d` matrix is
/// orthonormalized into an isometry and sliced into `d × d` blocks.
pub fn random_channel_with<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> QuantumChannel {
    assert!(
        d >= 1 && k >= 1,
        "channel needs a dimension and at least one Kraus operator"
    );
    let g = gaussian_matrix(rng, d * k, d);
    let qr = g.as_dmatrix().clone().qr();
    let iso = ComplexMatrix::from_dmatrix(qr.q());
    let kraus = (0..k).map(|b| iso.row_block(b * d, d)).collect();
    QuantumChannel { dim: d, kraus }
}

/// Mixed-unitary channel with flat-Dirichlet weights over `k` Haar unitaries.
pub fn random_mixed_unitary_with<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    k: usize,
) -> QuantumChannel {
    let weights = random_probability_with(rng, k);
    let kraus = weights
        .iter()
        .map(|w| random_unitary_with(rng, d).scale(w.sqrt()))
        .collect();
    QuantumChannel { dim: d, kraus }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::fidelity;
    use crate::majorization::{majorizes, MAJORIZATION_TOL};
    use crate::states::{random_density, random_unitary, seeded_rng, Order};
    use proptest::prelude::*;
    use rand::Rng;

    fn diag(v: &[f64]) -> DensityMatrix {
        DensityMatrix::from_diagonal(v).unwrap()
    }

    fn pauli() -> [ComplexMatrix; 4] {
        let z0 = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        [
            ComplexMatrix::identity(2),
            ComplexMatrix::from_row_major(2, 2, vec![z0, one, one, z0]).unwrap(),
            ComplexMatrix::from_row_major(2, 2, vec![z0, -i, i, z0]).unwrap(),
            ComplexMatrix::from_row_major(2, 2, vec![one, z0, z0, -one]).unwrap(),
        ]
    }

    #[test]
    fn apply_examples() {
        let sigma = random_density(3, 3, 21).unwrap();
        let out = QuantumChannel::identity(3).apply(&sigma).unwrap();
        assert!(out.matrix().max_abs_diff(sigma.matrix()) < 1e-15);

        let out = QuantumChannel::depolarizing(3).apply(&sigma).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(3).matrix())
                < 1e-15
        );

        let tau = random_density(3, 2, 22).unwrap();
        let out = replacement_channel(&tau).apply(&sigma).unwrap();
        assert!(out.matrix().max_abs_diff(tau.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_malformed_families() {
        assert_eq!(
            QuantumChannel::new(vec![]).unwrap_err(),
            Error::Empty("Kraus family")
        );
        assert!(matches!(
            QuantumChannel::new(vec![ComplexMatrix::identity(2).scale(0.5)]),
            Err(Error::NotTracePreserving { .. })
        ));
        assert!(matches!(
            QuantumChannel::new(vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(3, 3)]),
            Err(Error::DimensionMismatch { .. })
        ));
        let sigma = DensityMatrix::maximally_mixed(3);
        assert!(QuantumChannel::identity(2).apply(&sigma).is_err());
    }

    #[test]
    fn unital_predicate() {
        let u = random_unitary(3, 4);
        assert!(QuantumChannel::unitary(u).unwrap().is_unital(1e-12));
        let mut rng = seeded_rng(5);
        assert!(random_mixed_unitary_with(&mut rng, 3, 4).is_unital(1e-12));
        let tau = diag(&[0.7, 0.2, 0.1]);
        assert!(!replacement_channel(&tau).is_unital(1e-6));
    }

    #[test]
    fn choi_examples() {
        let c = QuantumChannel::identity(2).choi();
        assert_eq!(c.rank(1e-10), 1);
        assert!((c.matrix().trace().re - 2.0).abs() < 1e-15);

        let c = QuantumChannel::depolarizing(2).choi();
        assert!(
            c.matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale(0.5))
                < 1e-15
        );
        assert_eq!(c.rank(1e-10), 4);

        let mut rng = seeded_rng(6);
        let ch = random_channel_with(&mut rng, 3, 2);
        let c = ch.choi();
        assert_eq!(c.rank(1e-10), 2);
        assert!(c.rank(1e-10) < 9);
    }

    #[test]
    fn choi_contracts_on_constructions() {
        let mut rng = seeded_rng(7);
        let tau = random_density(3, 3, 8).unwrap();
        let family = [
            QuantumChannel::identity(3),
            QuantumChannel::depolarizing(3),
            replacement_channel(&tau),
            random_channel_with(&mut rng, 3, 3),
            random_mixed_unitary_with(&mut rng, 3, 3),
            convex_with_depolarizing(&random_channel_with(&mut rng, 3, 2), 0.3).unwrap(),
        ];
        for ch in &family {
            let c = ch.choi();
            assert!(c.min_eigenvalue() > -1e-12);
            assert!(
                c.output_partial_trace()
                    .max_abs_diff(&ComplexMatrix::identity(3))
                    < 1e-9
            );
            assert!(ch.tp_defect() < 1e-9);
        }
    }

    #[test]
    fn mixed_unitary_examples() {
        let u = random_unitary(2, 10);
        let ch = mixed_unitary(&[1.0], std::slice::from_ref(&u)).unwrap();
        assert!(
            ch.action_distance(&QuantumChannel::unitary(u).unwrap())
                .unwrap()
                < 1e-15
        );

        let p = pauli();
        let twirl = mixed_unitary(&[0.25; 4], &p).unwrap();
        assert!(
            twirl
                .action_distance(&QuantumChannel::depolarizing(2))
                .unwrap()
                < 1e-15
        );

        let ch = mixed_unitary(&[0.6, 0.4], &p[..2]).unwrap();
        assert!(ch.is_unital(1e-12));
        let out = ch.apply(&diag(&[0.9, 0.1])).unwrap();
        let want = ComplexMatrix::from_diagonal(&[0.6 * 0.9 + 0.4 * 0.1, 0.4 * 0.9 + 0.6 * 0.1]);
        assert!(out.matrix().max_abs_diff(&want) < 1e-15);

        assert!(matches!(
            mixed_unitary(&[0.5, 0.6], &p[..2]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            mixed_unitary(&[1.0], &[ComplexMatrix::identity(2).scale(2.0)]),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn replacement_examples() {
        let psi = PureState::normalized(vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)]).unwrap();
        let ch = replacement_channel(&psi.density());
        assert_eq!(ch.kraus().len(), 2);
        assert!(ch.tp_defect() < 1e-12);
        let rho = random_density(2, 2, 30).unwrap();
        let sigma = random_density(2, 1, 31).unwrap();
        let f = fidelity(&rho, &replacement_channel(&rho).apply(&sigma).unwrap()).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn convex_with_depolarizing_examples() {
        let mut rng = seeded_rng(40);
        let psi = random_channel_with(&mut rng, 2, 2);
        let one = convex_with_depolarizing(&psi, 1.0).unwrap();
        assert!(one.action_distance(&psi).unwrap() < 1e-15);
        let zero = convex_with_depolarizing(&psi, 0.0).unwrap();
        assert!(
            zero.action_distance(&QuantumChannel::depolarizing(2))
                .unwrap()
                < 1e-15
        );

        let half = convex_with_depolarizing(&QuantumChannel::identity(2), 0.5).unwrap();
        let out = half.apply(&diag(&[1.0, 0.0])).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.75, 0.25]))
                < 1e-15
        );

        let sigma = random_density(2, 2, 41).unwrap();
        let p = 0.35;
        let mixed = convex_with_depolarizing(&psi, p)
            .unwrap()
            .apply(&sigma)
            .unwrap();
        let direct = &psi.apply(&sigma).unwrap().matrix().scale(p)
            + &DensityMatrix::maximally_mixed(2).matrix().scale(1.0 - p);
        assert!(mixed.matrix().max_abs_diff(&direct) < 1e-10);

        assert!(matches!(
            convex_with_depolarizing(&psi, 1.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn min_fidelity_examples() {
        let rho = diag(&[0.7, 0.3]);
        let sigma = diag(&[0.6, 0.4]);
        let all = min_fidelity(&rho, &sigma, ChannelClass::All).unwrap();
        assert!((all.value - 0.3f64.sqrt()).abs() < 1e-14);
        assert!((all.value - 0.5477226).abs() < 1e-7);
        let unital = min_fidelity(&rho, &sigma, ChannelClass::Unital).unwrap();
        assert!((unital.value - 0.9534143).abs() < 1e-7);
        let mixed = min_fidelity(&rho, &sigma, ChannelClass::MixedUnitary).unwrap();
        assert_eq!(unital.value.to_bits(), mixed.value.to_bits());

        let mm = DensityMatrix::maximally_mixed(4);
        let v = min_fidelity(&mm, &sigma_for(4), ChannelClass::All)
            .unwrap()
            .value;
        assert!((v - 0.5).abs() < 1e-14);

        for m in [all, unital, mixed] {
            let f = fidelity(&rho, &m.witness.apply(&sigma).unwrap()).unwrap();
            assert!((f - m.value).abs() < 1e-9);
        }
    }

    fn sigma_for(d: usize) -> DensityMatrix {
        random_density(d, d, 99).unwrap()
    }

    #[test]
    fn random_all_channels_stay_above_floor() {
        let mut rng = seeded_rng(50);
        let rho = diag(&[0.7, 0.3]);
        let sigma = diag(&[0.6, 0.4]);
        let floor = 0.3f64.sqrt();
        for _ in 0..20_000 {
            let k = rng.random_range(1..=4);
            let ch = random_channel_with(&mut rng, 2, k);
            let f = fidelity(&rho, &ch.apply(&sigma).unwrap()).unwrap();
            assert!(f >= floor - 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn mixed_unitary_floor_and_uhlmann_step(seed in any::<u64>(), d in 2usize..5) {
            let mut rng = seeded_rng(seed);
            let rho = random_density(d, d, seed ^ 1).unwrap();
            let sigma = random_density(d, d, seed ^ 2).unwrap();
            let lo = orbit_min(&rho, &sigma).unwrap();
            for _ in 0..20 {
                let ch = random_mixed_unitary_with(&mut rng, d, d);
                let out = ch.apply(&sigma).unwrap();
                prop_assert!(fidelity(&rho, &out).unwrap() >= lo - 1e-9);
                let majorized = majorizes(
                    sigma.spectrum(Order::Descending).values(),
                    out.spectrum(Order::Descending).values(),
                    MAJORIZATION_TOL,
                ).unwrap();
                prop_assert!(majorized);
            }
        }

        #[test]
        fn witnesses_attain(seed in any::<u64>(), d in 2usize..6) {
            let rho = random_density(d, d, seed).unwrap();
            let sigma = random_density(d, 1 + seed as usize % d, seed ^ 9).unwrap();
            let values: Vec<f64> = [ChannelClass::All, ChannelClass::Unital, ChannelClass::MixedUnitary]
                .into_iter()
                .map(|class| {
                    let m = min_fidelity(&rho, &sigma, class).unwrap();
                    let f = fidelity(&rho, &m.witness.apply(&sigma).unwrap()).unwrap();
                    assert!((f - m.value).abs() <= 1e-9, "{class:?}: {f} vs {}", m.value);
                    m.value
                })
                .collect();
            prop_assert!(values[0] <= values[1] + 1e-12);
            prop_assert_eq!(values[1].to_bits(), values[2].to_bits());
        }
    }
}
