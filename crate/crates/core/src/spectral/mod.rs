//! Hermitian matrices and their spectral decompositions.
//!
//! [`eigendecompose`] dispatches on structure: real symmetric tridiagonal
//! input goes through implicit QL (with an even/odd sector split when the
//! matrix is invariant under index reversal), everything else through
//! cyclic complex Jacobi. Either way the result is checked against the
//! eigen-residual bound before it is returned.

mod jacobi;
mod tridiagonal;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{complex_gemm, vec_norm, ComplexMatrix, ComplexVector, C64};
use crate::tolerances::{Tolerances, NUMERICAL_TIE};

/// A complex matrix accepted as Hermitian within a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    matrix: ComplexMatrix,
    residual: f64,
}

/// Accepts `m` when `max |M - M†| <= tol`.
pub fn check_hermitian(m: ComplexMatrix, tol: f64) -> Result<HermitianMatrix> {
    let residual = m.max_abs_diff(&m.adjoint());
    if residual > tol {
        return Err(Error::NotHermitian {
            residual,
            tolerance: tol,
        });
    }
    Ok(HermitianMatrix { matrix: m, residual })
}

impl HermitianMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.residual
    }

    /// Largest entry magnitude; the `‖H‖` used by every scaled tolerance.
    pub fn norm(&self) -> f64 {
        self.matrix.max_norm()
    }

    fn tridiagonal_parts(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if !(self.matrix.is_real() && self.matrix.is_tridiagonal()) {
            return None;
        }
        let n = self.dim();
        let diag = (0..n).map(|i| self.matrix.get(i, i).re).collect();
        // average the two triangles so a tolerated asymmetry cannot bias one side
        let off = (0..n.saturating_sub(1))
            .map(|i| 0.5 * (self.matrix.get(i, i + 1).re + self.matrix.get(i + 1, i).re))
            .collect();
        Some((diag, off))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenOrdering {
    /// Nondecreasing eigenvalues, n = 0 is the ground state.
    #[default]
    Ascending,
    /// Nonincreasing eigenvalues: the 2x2 illustration labels the larger
    /// eigenvalue `a + sqrt(b² + c²)` as n = 0.
    PaperTwoByTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// First component above the phase floor is real and positive.
    FirstComponentRealPositive,
    /// Phases supplied by the caller.
    Explicit,
}

/// Raised (non-fatally) when neighbouring eigenvalues are closer than the
/// degeneracy gap; P and T then depend on the solver's basis choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyWarning {
    pub min_gap: f64,
    pub threshold: f64,
    /// Index pairs (n, n + 1) whose gap is below the threshold.
    pub pairs: Vec<(usize, usize)>,
}

impl std::fmt::Display for DegeneracyWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "degenerate spectrum: {} pair(s) closer than {:e} (min gap {:e})",
            self.pairs.len(),
            self.threshold,
            self.min_gap
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<ComplexVector>,
    ordering: EigenOrdering,
    phase: PhaseConvention,
    degeneracy: Option<DegeneracyWarning>,
}

/// Eigendecomposition with default tolerances.
pub fn eigendecompose(h: &HermitianMatrix, ordering: EigenOrdering) -> Result<SpectralDecomposition> {
    eigendecompose_with(h, ordering, &Tolerances::default())
}

pub fn eigendecompose_with(
    h: &HermitianMatrix,
    ordering: EigenOrdering,
    tol: &Tolerances,
) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let scale = h.norm().max(1.0);

    let (mut values, mut vectors): (Vec<f64>, Vec<ComplexVector>) = match h.tridiagonal_parts() {
        Some((diag, off)) => {
            let eig = if tridiagonal::is_centrosymmetric(&diag, &off) {
                tridiagonal::centrosymmetric_tridiagonal(&diag, &off, NUMERICAL_TIE * scale)?.0
            } else {
                tridiagonal::symmetric_tridiagonal(&diag, &off)?
            };
            let vectors = eig
                .vectors
                .iter()
                .map(|v| ComplexVector::from_iterator(n, v.iter().map(|&x| C64::new(x, 0.0))))
                .collect();
            (eig.values, vectors)
        }
        None => {
            let (values, columns) = jacobi::hermitian_jacobi(h.matrix())?;
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            (
                order.iter().map(|&k| values[k]).collect(),
                order
                    .iter()
                    .map(|&k| ComplexVector::from_column_slice(&columns[k]))
                    .collect(),
            )
        }
    };

    if ordering == EigenOrdering::PaperTwoByTwo {
        values.reverse();
        vectors.reverse();
    }
    let vectors = vectors
        .into_iter()
        .enumerate()
        .map(|(k, v)| canonical_phase(&v, tol.phase_floor).map_err(|_| Error::ZeroVector { index: k }))
        .collect::<Result<Vec<_>>>()?;

    let decomposition = SpectralDecomposition {
        degeneracy: degeneracy_check(&values, tol.degeneracy_gap * scale),
        eigenvalues: values,
        eigenvectors: vectors,
        ordering,
        phase: PhaseConvention::FirstComponentRealPositive,
    };
    let residual = decomposition.eigen_residual(h);
    if residual > tol.scaled(h.norm()) {
        return Err(Error::ConvergenceFailure(format!(
            "eigen-residual {residual:e} exceeds {:e}",
            tol.scaled(h.norm())
        )));
    }
    Ok(decomposition)
}

fn degeneracy_check(values: &[f64], threshold: f64) -> Option<DegeneracyWarning> {
    let mut min_gap = f64::INFINITY;
    let mut pairs = Vec::new();
    for (k, w) in values.windows(2).enumerate() {
        let gap = (w[1] - w[0]).abs();
        min_gap = min_gap.min(gap);
        if gap < threshold {
            pairs.push((k, k + 1));
        }
    }
    (!pairs.is_empty()).then_some(DegeneracyWarning {
        min_gap,
        threshold,
        pairs,
    })
}

impl SpectralDecomposition {
    /// Wraps caller-supplied eigenpairs after checking every invariant.
    ///
    /// Vectors keep their phases; the convention is recorded as
    /// [`PhaseConvention::Explicit`].
    pub fn from_explicit(
        h: &HermitianMatrix,
        eigenvalues: Vec<f64>,
        eigenvectors: Vec<ComplexVector>,
        ordering: EigenOrdering,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = h.dim();
        if eigenvalues.len() != n || eigenvectors.len() != n {
            return Err(Error::InvalidDecomposition(format!(
                "expected {n} eigenpairs, got {} values and {} vectors",
                eigenvalues.len(),
                eigenvectors.len()
            )));
        }
        if let Some(v) = eigenvectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let ordered = eigenvalues.windows(2).all(|w| match ordering {
            EigenOrdering::Ascending => w[0] <= w[1],
            EigenOrdering::PaperTwoByTwo => w[0] >= w[1],
        });
        if !ordered {
            return Err(Error::InvalidDecomposition(format!(
                "eigenvalues violate {ordering:?} ordering"
            )));
        }
        let scale = h.norm().max(1.0);
        let s = Self {
            degeneracy: degeneracy_check(&eigenvalues, tol.degeneracy_gap * scale),
            eigenvalues,
            eigenvectors,
            ordering,
            phase: PhaseConvention::Explicit,
        };
        let checks = [
            ("eigen-residual", s.eigen_residual(h), tol.scaled(h.norm())),
            ("orthonormality", s.verify_orthonormality(), tol.verification),
            ("completeness", s.verify_completeness(), tol.verification),
        ];
        for (label, value, limit) in checks {
            if value > limit {
                return Err(Error::InvalidDecomposition(format!(
                    "{label} residual {value:e} exceeds {limit:e}"
                )));
            }
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[ComplexVector] {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, n: usize) -> &ComplexVector {
        &self.eigenvectors[n]
    }

    pub fn ordering(&self) -> EigenOrdering {
        self.ordering
    }

    pub fn phase_convention(&self) -> PhaseConvention {
        self.phase
    }

    pub fn degeneracy(&self) -> Option<&DegeneracyWarning> {
        self.degeneracy.as_ref()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy.is_some()
    }

    /// Eigenvectors as the columns of a dense matrix.
    pub fn vector_matrix(&self) -> DMatrix<C64> {
        columns_matrix(&self.eigenvectors, self.dim())
    }

    /// `max_n ‖H Ψ_n - E_n Ψ_n‖₂`.
    pub fn eigen_residual(&self, h: &HermitianMatrix) -> f64 {
        let v = self.vector_matrix();
        let hv = complex_gemm(h.matrix().inner(), &v);
        (0..self.dim())
            .map(|k| {
                let e = self.eigenvalues[k];
                hv.column(k)
                    .iter()
                    .zip(v.column(k).iter())
                    .map(|(a, b)| (a - b * e).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max |Σ Ψ_n Ψ_n† - I|`.
    pub fn verify_completeness(&self) -> f64 {
        completeness_residual(&self.eigenvectors, self.dim())
    }

    /// `max |Ψ_m† Ψ_n - δ_mn|`.
    pub fn verify_orthonormality(&self) -> f64 {
        orthonormality_residual(&self.eigenvectors, self.dim())
    }

    /// Rescales every eigenvector so its first significant component is
    /// real and positive.
    pub fn canonicalize_phases(&self, floor: f64) -> Result<Self> {
        let eigenvectors = self
            .eigenvectors
            .iter()
            .enumerate()
            .map(|(k, v)| canonical_phase(v, floor).map_err(|_| Error::ZeroVector { index: k }))
            .collect::<Result<_>>()?;
        Ok(Self {
            eigenvectors,
            phase: PhaseConvention::FirstComponentRealPositive,
            ..self.clone()
        })
    }

    /// Multiplies eigenvector n by `phases[n]`, each of which must have unit
    /// modulus.
    pub fn with_phases(&self, phases: &[C64]) -> Result<Self> {
        if phases.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: phases.len(),
            });
        }
        if let Some(bad) = phases.iter().find(|z| (z.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidInput(format!("phase {bad} is not unimodular")));
        }
        Ok(Self {
            eigenvectors: self.eigenvectors.iter().zip(phases).map(|(v, z)| v * *z).collect(),
            phase: PhaseConvention::Explicit,
            ..self.clone()
        })
    }
}

fn columns_matrix(vectors: &[ComplexVector], dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, vectors.len(), |i, j| vectors[j][i])
}

/// `max |Σ v v† - I|` over an arbitrary (possibly incomplete) vector set.
pub fn completeness_residual(vectors: &[ComplexVector], dim: usize) -> f64 {
    let v = columns_matrix(vectors, dim);
    let sum = complex_gemm(&v, &v.adjoint());
    ComplexMatrix::from_inner_unchecked(sum).identity_deviation()
}

/// `max |G - I|` for the Gram matrix `G_mn = v_m† v_n`.
pub fn orthonormality_residual(vectors: &[ComplexVector], dim: usize) -> f64 {
    let v = columns_matrix(vectors, dim);
    let gram = complex_gemm(&v.adjoint(), &v);
    ComplexMatrix::from_inner_unchecked(gram).identity_deviation()
}

/// Removes the global phase of `v`: its first component with magnitude above
/// `floor * ‖v‖` becomes real and positive.
pub fn canonical_phase(v: &ComplexVector, floor: f64) -> Result<ComplexVector> {
    let norm = vec_norm(v);
    if norm.is_nan() || norm <= f64::EPSILON {
        return Err(Error::ZeroVector { index: 0 });
    }
    let pivot = v
        .iter()
        .find(|z| z.norm() > floor * norm)
        .copied()
        .ok_or(Error::ZeroVector { index: 0 })?;
    let phase = pivot.conj() / pivot.norm();
    let mut out = v * phase;
    // the pivot is real up to rounding; make it exactly so
    if let Some(z) = out.iter_mut().find(|z| z.norm() > floor * norm) {
        *z = C64::new(z.norm(), 0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn herm(rows: &[Vec<C64>]) -> HermitianMatrix {
        check_hermitian(ComplexMatrix::from_rows(rows).unwrap(), 1e-12).unwrap()
    }

    fn illustration(a: f64, b: f64, cc: f64) -> HermitianMatrix {
        herm(&[vec![c(a, 0.0), c(b, cc)], vec![c(b, -cc), c(a, 0.0)]])
    }

    fn explicit_vectors(theta: f64) -> Vec<ComplexVector> {
        let e = C64::from_polar(FRAC_1_SQRT_2, theta);
        vec![
            ComplexVector::from_vec(vec![e, c(FRAC_1_SQRT_2, 0.0)]),
            ComplexVector::from_vec(vec![e, c(-FRAC_1_SQRT_2, 0.0)]),
        ]
    }

    #[test]
    fn check_hermitian_accepts_and_rejects() {
        let d = check_hermitian(ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]), 1e-12).unwrap();
        assert_eq!(d.hermiticity_residual(), 0.0);
        assert_eq!(illustration(1.0, 3.0, 4.0).hermiticity_residual(), 0.0);

        let bad = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        match check_hermitian(bad, 1e-12) {
            Err(Error::NotHermitian { residual, .. }) => assert!((residual - 2.0).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn diagonal_matrix_gives_standard_basis() {
        let h = check_hermitian(ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]), 0.0).unwrap();
        let s = eigendecompose(&h, EigenOrdering::Ascending).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 2.0]);
        assert_eq!(
            s.eigenvector(0),
            &ComplexVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])
        );
        assert_eq!(
            s.eigenvector(1),
            &ComplexVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)])
        );
        assert_eq!(s.verify_completeness(), 0.0);
        assert_eq!(s.verify_orthonormality(), 0.0);
    }

    #[test]
    fn illustration_eigenvalues_in_both_orderings() {
        let h = illustration(1.0, 3.0, 4.0);
        let asc = eigendecompose(&h, EigenOrdering::Ascending).unwrap();
        assert!((asc.eigenvalues()[0] + 4.0).abs() < 1e-13);
        assert!((asc.eigenvalues()[1] - 6.0).abs() < 1e-13);
        let descending = eigendecompose(&h, EigenOrdering::PaperTwoByTwo).unwrap();
        assert!((descending.eigenvalues()[0] - 6.0).abs() < 1e-13);
        assert!((descending.eigenvalues()[1] + 4.0).abs() < 1e-13);
    }

    #[test]
    fn explicit_illustration_vectors_are_complete_and_orthonormal() {
        for theta in [0.0, 0.3, PI / 4.0, 1.2, (4.0f64).atan2(3.0)] {
            let h = illustration(0.0, theta.cos(), theta.sin());
            let s = SpectralDecomposition::from_explicit(
                &h,
                vec![1.0, -1.0],
                explicit_vectors(theta),
                EigenOrdering::PaperTwoByTwo,
                &Tolerances::default(),
            )
            .unwrap();
            assert!(s.verify_completeness() <= 1e-14);
            assert!(s.verify_orthonormality() <= 1e-14);
            assert_eq!(s.phase_convention(), PhaseConvention::Explicit);
        }
    }

    #[test]
    fn incomplete_and_duplicated_sets_are_detected() {
        let basis: Vec<ComplexVector> = (0..3)
            .map(|k| ComplexVector::from_fn(3, |i, _| c(if i == k { 1.0 } else { 0.0 }, 0.0)))
            .collect();
        assert_eq!(completeness_residual(&basis, 3), 0.0);
        assert_eq!(completeness_residual(&basis[..2], 3), 1.0);
        let dup = vec![basis[0].clone(), basis[0].clone()];
        assert_eq!(orthonormality_residual(&dup, 3), 1.0);
    }

    #[test]
    fn canonical_phase_examples() {
        let v = ComplexVector::from_vec(vec![c(0.0, 1.0), c(0.0, 0.0)]);
        assert_eq!(
            canonical_phase(&v, 1e-8).unwrap(),
            ComplexVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])
        );

        // (e^{iθ}, 1)/√2 -> (1, e^{-iθ})/√2
        let theta = 0.7;
        let v = &explicit_vectors(theta)[0];
        let got = canonical_phase(v, 1e-8).unwrap();
        let want = ComplexVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.0), C64::from_polar(FRAC_1_SQRT_2, -theta)]);
        assert!((got - &want).norm() < 1e-15);
        assert_eq!(canonical_phase(&want, 1e-8).unwrap(), want);

        // a tiny leading component must not set the phase
        let v = ComplexVector::from_vec(vec![c(1e-12, 0.0), c(0.0, -1.0)]);
        let got = canonical_phase(&v, 1e-8).unwrap();
        assert_eq!(got[1], c(1.0, 0.0));

        let zero = ComplexVector::from_vec(vec![c(0.0, 0.0); 2]);
        assert!(matches!(canonical_phase(&zero, 1e-8), Err(Error::ZeroVector { .. })));
    }

    #[test]
    fn degenerate_spectrum_is_flagged() {
        let h = check_hermitian(ComplexMatrix::identity(3), 0.0).unwrap();
        let s = eigendecompose(&h, EigenOrdering::Ascending).unwrap();
        let warn = s.degeneracy().expect("identity is degenerate");
        assert_eq!(warn.pairs, vec![(0, 1), (1, 2)]);
        assert!(s.verify_completeness() < 1e-15);
    }

    #[test]
    fn from_explicit_rejects_wrong_vectors() {
        let h = illustration(0.0, 1.0, 0.0);
        let mut v = explicit_vectors(0.0);
        v.swap(0, 1);
        let err = SpectralDecomposition::from_explicit(
            &h,
            vec![1.0, -1.0],
            v,
            EigenOrdering::PaperTwoByTwo,
            &Tolerances::default(),
        );
        assert!(matches!(err, Err(Error::InvalidDecomposition(_))));
    }
}
