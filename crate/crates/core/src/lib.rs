//! Quantum fidelity `F(ρ, σ) = Tr √(√ρ σ √ρ)` and its extrema.
//!
//! - [`fidelity`]: the fidelity, its pure-state and classical forms, Bures angle.
//! - [`orbits`]: closed-form max/min over `{UσU†}` and the attaining unitaries.
//! - [`channels`]: Kraus channels, Choi matrices, and the minimum of
//!   `F(ρ, Φ(σ))` over all, unital, and mixed-unitary channels.
//! - [`majorization`]: majorization predicates, the Schur-concave pairing
//!   function, brute-force rearrangement extrema.
//! - [`subspaces`]: canonical angles and fidelity between normalized projections.
//! - [`means`]: geometric and spectral geometric means.
//!
//! Everything sits on the dense complex kernel in [`numerics`].

pub mod channels;
pub mod error;
pub mod fidelity;
pub mod io;
pub mod majorization;
pub mod means;
pub mod numerics;
pub mod orbits;
pub mod states;
pub mod subspaces;

pub use channels::{ChannelClass, ChoiMatrix, MinFidelity, QuantumChannel};
pub use error::{Error, Result};
pub use fidelity::{bures_angle, classical_fidelity, fidelity, fidelity_pure, FidelityProbe};
pub use numerics::{ComplexMatrix, C64};
pub use orbits::{extremal_unitary, orbit_max, orbit_min, Extremum};
pub use states::{DensityMatrix, Order, PureState, Spectrum};
pub use subspaces::{CanonicalAngles, Subspace};
