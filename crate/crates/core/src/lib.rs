//! Generalized discrete symmetries of finite Hermitian Hamiltonians.
//!
//! Given a Hermitian matrix `H`, this crate builds its spectral decomposition
//! and from it the generalized parity `P = Σ (-1)^n Ψ_n Ψ_n†`, the antilinear
//! time reversal `T = (Σ Ψ_n Ψ_nᵗ) K₀`, their composite `PT`, and `C = P`,
//! `CPT = T`. Every operator comes with residual checks for its involution,
//! commutation and eigenstate relations.
//!
//! The [`schrodinger`] module applies the same machinery to finite-difference
//! discretizations of `p²/2m + V(x)` and classifies bound states by node
//! parity and asymptotic sign product.

pub mod error;
pub mod formats;
pub mod matrix;
pub mod random;
pub mod schrodinger;
pub mod spectral;
pub mod symmetry;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, ComplexVector, C64};
pub use spectral::{
    check_hermitian, eigendecompose, DegeneracyWarning, EigenOrdering, HermitianMatrix, PhaseConvention,
    SpectralDecomposition,
};
pub use symmetry::{
    AntilinearOperator, ChiLabel, LinearOperator, NaiveTimeReversalAudit, NormReport, SymmetryOperator, SymmetrySuite,
};
pub use tolerances::Tolerances;
pub use verify::{Residual, ResidualSet};
