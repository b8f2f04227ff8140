//! Generalized discrete symmetries built from a spectral decomposition.
//!
//! * `P = Σ (-1)^n Ψ_n Ψ_n†` (linear)
//! * `T = U K₀` with `U = Σ Ψ_n Ψ_nᵗ` (antilinear)
//! * `PT = (P U) K₀`
//! * `C = P`, hence `CPT = P² T = T`
//!
//! An antilinear operator is stored as its linear part `U` and acts as
//! `ψ ↦ U · conj(ψ)`. With that convention the composition rules are
//! `(L ∘ A) = (L U) K₀`, `(A ∘ L) = (U L*) K₀` and `(A₁ ∘ A₂) = U₁ U₂*`.

use std::ops::Mul;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{complex_gemm, vec_conj, ComplexMatrix, ComplexVector, C64};
use crate::spectral::{DegeneracyWarning, EigenOrdering, HermitianMatrix, SpectralDecomposition};
use crate::tolerances::Tolerances;
use crate::verify::ResidualSet;

/// Operations shared by linear and antilinear operators.
pub trait SymmetryOperator {
    /// The matrix for a linear operator, the linear part `U` for an
    /// antilinear one.
    fn matrix(&self) -> &ComplexMatrix;

    fn is_antilinear(&self) -> bool;

    fn dim(&self) -> usize {
        self.matrix().dim()
    }

    fn apply(&self, psi: &ComplexVector) -> ComplexVector {
        if self.is_antilinear() {
            self.matrix().mul_vec(&vec_conj(psi))
        } else {
            self.matrix().mul_vec(psi)
        }
    }

    /// Applies the operator to every column of `v`.
    fn apply_columns(&self, v: &DMatrix<C64>) -> DMatrix<C64> {
        if self.is_antilinear() {
            complex_gemm(self.matrix().inner(), &v.map(|z| z.conj()))
        } else {
            complex_gemm(self.matrix().inner(), v)
        }
    }

    /// `‖M² - I‖` for linear operators, `‖U U* - I‖` for antilinear ones.
    fn involution_residual(&self) -> f64 {
        let m = self.matrix();
        let square = if self.is_antilinear() {
            m.matmul(&m.conj())
        } else {
            m.matmul(m)
        };
        square.identity_deviation()
    }

    /// `‖M H - H M‖` for linear operators, `‖U H* - H U‖` for antilinear
    /// ones, since `(T H)(ψ) = U H* ψ*` while `(H T)(ψ) = H U ψ*`.
    fn commutator_residual(&self, h: &HermitianMatrix) -> f64 {
        let m = self.matrix();
        let hm = h.matrix();
        let left = if self.is_antilinear() {
            m.matmul(&hm.conj())
        } else {
            m.matmul(hm)
        };
        left.max_abs_diff(&hm.matmul(m))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    matrix: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    linear_part: ComplexMatrix,
}

impl LinearOperator {
    pub fn new(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(ComplexMatrix::identity(n))
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

impl AntilinearOperator {
    pub fn new(linear_part: ComplexMatrix) -> Self {
        Self { linear_part }
    }

    /// Bare complex conjugation `K₀`.
    pub fn conjugation(n: usize) -> Self {
        Self::new(ComplexMatrix::identity(n))
    }

    pub fn linear_part(&self) -> &ComplexMatrix {
        &self.linear_part
    }
}

impl SymmetryOperator for LinearOperator {
    fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    fn is_antilinear(&self) -> bool {
        false
    }
}

impl SymmetryOperator for AntilinearOperator {
    fn matrix(&self) -> &ComplexMatrix {
        &self.linear_part
    }

    fn is_antilinear(&self) -> bool {
        true
    }
}

impl Mul for &LinearOperator {
    type Output = LinearOperator;

    fn mul(self, rhs: Self) -> LinearOperator {
        LinearOperator::new(self.matrix.matmul(&rhs.matrix))
    }
}

impl Mul<&AntilinearOperator> for &LinearOperator {
    type Output = AntilinearOperator;

    fn mul(self, rhs: &AntilinearOperator) -> AntilinearOperator {
        AntilinearOperator::new(self.matrix.matmul(&rhs.linear_part))
    }
}

impl Mul<&LinearOperator> for &AntilinearOperator {
    type Output = AntilinearOperator;

    fn mul(self, rhs: &LinearOperator) -> AntilinearOperator {
        AntilinearOperator::new(self.linear_part.matmul(&rhs.matrix.conj()))
    }
}

impl Mul for &AntilinearOperator {
    type Output = LinearOperator;

    fn mul(self, rhs: Self) -> LinearOperator {
        LinearOperator::new(self.linear_part.matmul(&rhs.linear_part.conj()))
    }
}

fn parity_sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `P = Σ (-1)^n Ψ_n Ψ_n†`.
pub fn construct_parity(s: &SpectralDecomposition) -> LinearOperator {
    let v = s.vector_matrix();
    let mut signed = v.clone();
    for (n, mut col) in signed.column_iter_mut().enumerate() {
        col *= C64::new(parity_sign(n), 0.0);
    }
    LinearOperator::new(ComplexMatrix::from_inner_unchecked(complex_gemm(&signed, &v.adjoint())))
}

/// `T = (Σ Ψ_n Ψ_nᵗ) K₀`. The linear part depends on the eigenvector phases.
pub fn construct_time_reversal(s: &SpectralDecomposition) -> AntilinearOperator {
    let v = s.vector_matrix();
    AntilinearOperator::new(ComplexMatrix::from_inner_unchecked(complex_gemm(&v, &v.transpose())))
}

/// `PT` with linear part `P U`, after checking it agrees with `TP = U P*`.
pub fn compose_pt(p: &LinearOperator, t: &AntilinearOperator, tol: f64) -> Result<AntilinearOperator> {
    if p.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: t.dim(),
        });
    }
    let pt = p * t;
    let tp = t * p;
    let residual = pt.linear_part.max_abs_diff(&tp.linear_part);
    if residual > tol {
        return Err(Error::CompositionMismatch {
            residual,
            tolerance: tol,
        });
    }
    Ok(pt)
}

pub fn involution_residual(op: &impl SymmetryOperator) -> f64 {
    op.involution_residual()
}

pub fn commutator_residual(op: &impl SymmetryOperator, h: &HermitianMatrix) -> f64 {
    op.commutator_residual(h)
}

/// `max_n ‖χ Ψ_n - λ_n Ψ_n‖₂` for expected eigenvalues `λ_n = expected(n)`.
pub fn eigenstate_action_residual(
    op: &impl SymmetryOperator,
    s: &SpectralDecomposition,
    expected: impl Fn(usize) -> f64,
) -> f64 {
    let v = s.vector_matrix();
    let applied = op.apply_columns(&v);
    (0..s.dim())
        .map(|n| {
            let lambda = expected(n);
            applied
                .column(n)
                .iter()
                .zip(v.column(n).iter())
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// `(χ ψ_m)† ψ_n`.
pub fn chi_inner_product(chi: &impl SymmetryOperator, psi_m: &ComplexVector, psi_n: &ComplexVector) -> C64 {
    chi.apply(psi_m).dotc(psi_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChiLabel {
    P,
    T,
    PT,
    CPT,
}

impl ChiLabel {
    pub const ALL: [ChiLabel; 4] = [ChiLabel::P, ChiLabel::T, ChiLabel::PT, ChiLabel::CPT];

    pub fn as_str(self) -> &'static str {
        match self {
            ChiLabel::P => "P",
            ChiLabel::T => "T",
            ChiLabel::PT => "PT",
            ChiLabel::CPT => "CPT",
        }
    }
}

/// Diagonal and off-diagonal structure of the χ-Gram matrix
/// `C_mn = (χ Ψ_m)† Ψ_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub chi: ChiLabel,
    pub gram_diagonal: Vec<C64>,
    pub off_diagonal_max: f64,
    pub signature: Vec<i8>,
}

impl NormReport {
    pub fn is_positive_definite(&self) -> bool {
        self.signature.iter().all(|&s| s > 0)
    }

    pub fn is_alternating(&self) -> bool {
        self.signature
            .iter()
            .enumerate()
            .all(|(n, &s)| f64::from(s) == parity_sign(n))
    }
}

/// χ-norms of every eigenstate. Fails with `NormAnomalous` when a diagonal
/// entry is not of unit magnitude within `tol`.
pub fn chi_norm_signature(
    chi: &impl SymmetryOperator,
    label: ChiLabel,
    s: &SpectralDecomposition,
    tol: f64,
) -> Result<NormReport> {
    let v = s.vector_matrix();
    let gram = complex_gemm(&chi.apply_columns(&v).adjoint(), &v);
    let n = s.dim();
    let gram_diagonal: Vec<C64> = (0..n).map(|k| gram[(k, k)]).collect();
    let mut off_diagonal_max = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                off_diagonal_max = off_diagonal_max.max(gram[(i, j)].norm());
            }
        }
    }
    if let Some((index, z)) = gram_diagonal
        .iter()
        .enumerate()
        .find(|(_, z)| (z.norm() - 1.0).abs() > tol)
    {
        return Err(Error::NormAnomalous { index, value: z.norm() });
    }
    let signature = gram_diagonal.iter().map(|z| if z.re >= 0.0 { 1 } else { -1 }).collect();
    Ok(NormReport {
        chi: label,
        gram_diagonal,
        off_diagonal_max,
        signature,
    })
}

/// P, T, PT, C and CPT for one Hamiltonian, with every verification residual.
#[derive(Debug, Clone)]
pub struct SymmetrySuite {
    pub p: LinearOperator,
    pub t: AntilinearOperator,
    pub pt: AntilinearOperator,
    pub c: LinearOperator,
    pub cpt: AntilinearOperator,
    pub source_ordering: EigenOrdering,
    pub degeneracy: Option<DegeneracyWarning>,
    pub residuals: ResidualSet,
}

impl SymmetrySuite {
    pub fn degeneracy_flag(&self) -> bool {
        self.degeneracy.is_some()
    }

    pub fn norm_report(&self, label: ChiLabel, s: &SpectralDecomposition, tol: f64) -> Result<NormReport> {
        match label {
            ChiLabel::P => chi_norm_signature(&self.p, label, s, tol),
            ChiLabel::T => chi_norm_signature(&self.t, label, s, tol),
            ChiLabel::PT => chi_norm_signature(&self.pt, label, s, tol),
            ChiLabel::CPT => chi_norm_signature(&self.cpt, label, s, tol),
        }
    }
}

/// Builds the full suite and records every residual with its tolerance.
///
/// Involution and eigenstate-action residuals use the absolute verification
/// tolerance; commutators and the eigen-residual use it scaled by
/// `max(1, ‖H‖)`.
pub fn construct_suite(h: &HermitianMatrix, s: &SpectralDecomposition, tol: &Tolerances) -> Result<SymmetrySuite> {
    if h.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: s.dim(),
        });
    }
    let abs = tol.verification;
    let scaled = tol.scaled(h.norm());

    let p = construct_parity(s);
    let t = construct_time_reversal(s);
    let pt = compose_pt(&p, &t, abs)?;
    let c = p.clone();
    let cpt = t.clone();

    let mut residuals = ResidualSet::default();
    residuals.push("spectral.eigen_residual", s.eigen_residual(h), scaled);
    residuals.push("spectral.orthonormality", s.verify_orthonormality(), abs);
    residuals.push("spectral.completeness", s.verify_completeness(), abs);

    let pt_tp = pt.linear_part.max_abs_diff(&(&t * &p).linear_part);
    residuals.push("P.hermiticity", p.matrix.max_abs_diff(&p.matrix.adjoint()), abs);
    record(&mut residuals, "P", &p, h, s, parity_sign, abs, scaled);
    record(&mut residuals, "T", &t, h, s, |_| 1.0, abs, scaled);
    record(&mut residuals, "PT", &pt, h, s, parity_sign, abs, scaled);
    residuals.push("PT.tp_agreement", pt_tp, abs);
    record(&mut residuals, "C", &c, h, s, parity_sign, abs, scaled);
    record(&mut residuals, "CPT", &cpt, h, s, |_| 1.0, abs, scaled);
    // CPT is stored as T; this is how far the literal product C·P·T is from it.
    let composed = &(&c * &p) * &t;
    residuals.push(
        "CPT.composition",
        composed.linear_part.max_abs_diff(&cpt.linear_part),
        abs,
    );

    Ok(SymmetrySuite {
        p,
        t,
        pt,
        c,
        cpt,
        source_ordering: s.ordering(),
        degeneracy: s.degeneracy().cloned(),
        residuals,
    })
}

#[allow(clippy::too_many_arguments)]
fn record(
    out: &mut ResidualSet,
    name: &str,
    op: &impl SymmetryOperator,
    h: &HermitianMatrix,
    s: &SpectralDecomposition,
    expected: impl Fn(usize) -> f64,
    abs: f64,
    scaled: f64,
) {
    out.push(format!("{name}.involution"), op.involution_residual(), abs);
    out.push(format!("{name}.commutator"), op.commutator_residual(h), scaled);
    out.push(
        format!("{name}.eigenstate_action"),
        eigenstate_action_residual(op, s, expected),
        abs,
    );
}

/// What goes wrong when time reversal is taken to be bare conjugation `K₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaiveTimeReversalAudit {
    /// `‖H* - H‖`.
    pub k0_commutator: f64,
    /// `‖P H* - H P‖`.
    pub pk0_commutator: f64,
    /// `(P K₀ Ψ₀)ᵗ Ψ₁`, transpose without conjugation.
    pub overlap: C64,
}

pub fn naive_time_reversal_audit(h: &HermitianMatrix, s: &SpectralDecomposition) -> Result<NaiveTimeReversalAudit> {
    if s.dim() < 2 {
        return Err(Error::InvalidInput(
            "the naive-T audit needs at least two states".into(),
        ));
    }
    if h.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: s.dim(),
        });
    }
    let p = construct_parity(s);
    let k0 = AntilinearOperator::conjugation(h.dim());
    let pk0 = &p * &k0;
    let left = pk0.apply(s.eigenvector(0));
    Ok(NaiveTimeReversalAudit {
        k0_commutator: k0.commutator_residual(h),
        pk0_commutator: pk0.commutator_residual(h),
        overlap: left.dot(s.eigenvector(1)),
    })
}
