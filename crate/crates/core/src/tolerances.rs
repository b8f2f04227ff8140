//! Default numerical thresholds.
//!
//! All absolute thresholds are compared against max-norm residuals. Scaled
//! thresholds multiply by `max(1, ‖H‖)` where `‖H‖` is the largest entry
//! magnitude of the Hamiltonian.

use serde::{Deserialize, Serialize};

/// Max-norm of `M - M†` accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-10;
/// Involution, commutator, eigen-residual and norm checks.
pub const VERIFICATION: f64 = 1e-10;
/// Relative eigenvalue gap below which a spectrum is flagged degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;
/// Relative magnitude a component needs before it may fix a vector's phase.
pub const PHASE_FLOOR: f64 = 1e-8;
/// Relative amplitude below which grid samples are treated as zero.
pub const AMPLITUDE_FLOOR: f64 = 1e-6;
/// Relative spread under which eigenvalues are treated as numerically tied.
pub const NUMERICAL_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub verification: f64,
    pub degeneracy_gap: f64,
    pub phase_floor: f64,
    pub amplitude_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: HERMITICITY,
            verification: VERIFICATION,
            degeneracy_gap: DEGENERACY_GAP,
            phase_floor: PHASE_FLOOR,
            amplitude_floor: AMPLITUDE_FLOOR,
        }
    }
}

impl Tolerances {
    pub fn with_verification(mut self, tol: f64) -> Self {
        self.verification = tol;
        self
    }

    /// Verification tolerance scaled by `max(1, norm)`.
    pub fn scaled(&self, norm: f64) -> f64 {
        self.verification * norm.max(1.0)
    }
}
