//! Bound states of `H = p²/2m + V(x)` on a uniform grid (ħ = 1).
//!
//! The Hamiltonian is discretized with the three-point stencil and
//! Dirichlet boundaries, giving a real symmetric tridiagonal matrix with
//! diagonal `1/(m Δx²) + V(x_i)` and off-diagonal `-1/(2 m Δx²)`.
//!
//! Each state is classified E-type (even node count) or O-type (odd node
//! count). The asymptotic sign product `ψ(-L) ψ(R)` is computed as an
//! independent cross-check.

pub mod expr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectral::{check_hermitian, eigendecompose_with, EigenOrdering, HermitianMatrix, SpectralDecomposition};
use crate::symmetry::{LinearOperator, SymmetryOperator};
use crate::tolerances::{Tolerances, AMPLITUDE_FLOOR};

pub use expr::{parse_potential, ParseError, PotentialExpr};

/// Uniform grid with Dirichlet endpoints just outside `[xmin, xmax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    xmin: f64,
    xmax: f64,
    npoints: usize,
}

impl Grid1D {
    pub fn new(xmin: f64, xmax: f64, npoints: usize) -> Result<Self> {
        if !(xmin.is_finite() && xmax.is_finite()) || xmin >= xmax {
            return Err(Error::InvalidGrid(format!(
                "need finite xmin < xmax, got [{xmin}, {xmax}]"
            )));
        }
        if npoints < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {npoints}")));
        }
        Ok(Self { xmin, xmax, npoints })
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    pub fn spacing(&self) -> f64 {
        (self.xmax - self.xmin) / (self.npoints - 1) as f64
    }

    /// Sample `i`. The left half is measured from `xmin` and the right half
    /// from `xmax`, so a grid with `xmin == -xmax` is mirror-symmetric
    /// bitwise and has its midpoint exactly at zero.
    pub fn x(&self, i: usize) -> f64 {
        let n = self.npoints;
        let dx = self.spacing();
        if 2 * i + 1 == n {
            0.5 * self.xmin + 0.5 * self.xmax
        } else if 2 * i < n {
            self.xmin + i as f64 * dx
        } else {
            self.xmax - (n - 1 - i) as f64 * dx
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.npoints).map(|i| self.x(i)).collect()
    }

    /// `|xmin + xmax|` small relative to the extent.
    pub fn is_symmetric(&self) -> bool {
        (self.xmin + self.xmax).abs() <= 1e-12 * self.xmin.abs().max(self.xmax.abs())
    }
}

/// True when `V(x_i) == V(x_{n-1-i})` within `tol` at every sample.
pub fn potential_is_symmetric(v: &PotentialExpr, grid: &Grid1D, tol: f64) -> bool {
    let n = grid.npoints();
    grid.is_symmetric()
        && (0..n / 2).all(|i| {
            let (a, b) = (v.eval(grid.x(i)), v.eval(grid.x(n - 1 - i)));
            (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
        })
}

/// Three-point finite-difference Hamiltonian.
pub fn discretize(v: &PotentialExpr, grid: &Grid1D, mass: f64) -> Result<HermitianMatrix> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidMass(mass));
    }
    let n = grid.npoints();
    let dx = grid.spacing();
    let kinetic = 1.0 / (mass * dx * dx);
    let hop = -0.5 * kinetic;
    let mut h = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        let x = grid.x(i);
        let value = v.eval(x);
        if !value.is_finite() {
            return Err(Error::Evaluation { x, value });
        }
        h[(i, i)] = C64::new(kinetic + value, 0.0);
        if i + 1 < n {
            h[(i, i + 1)] = C64::new(hop, 0.0);
            h[(i + 1, i)] = C64::new(hop, 0.0);
        }
    }
    check_hermitian(ComplexMatrix::new(h)?, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateClass {
    /// Even node count, `ψ(-L) ψ(R) > 0`.
    EType,
    /// Odd node count, `ψ(-L) ψ(R) < 0`.
    OType,
}

impl StateClass {
    pub fn from_nodes(nodes: usize) -> Self {
        if nodes.is_multiple_of(2) {
            StateClass::EType
        } else {
            StateClass::OType
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            StateClass::EType => "E",
            StateClass::OType => "O",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignProduct {
    Positive,
    Negative,
    /// A tail station could not be placed above the amplitude floor.
    Indeterminate,
}

impl SignProduct {
    pub fn symbol(self) -> &'static str {
        match self {
            SignProduct::Positive => "+",
            SignProduct::Negative => "-",
            SignProduct::Indeterminate => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub index: usize,
    pub energy: f64,
    /// Unit-normalized in the discrete 2-norm; first above-floor sample positive.
    pub amplitudes: Vec<f64>,
    pub node_count: usize,
    pub sign_product: SignProduct,
    pub classification: StateClass,
    pub classifier_agreement: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Relative to `max |ψ|`.
    pub amplitude_floor: f64,
    /// Samples kept clear of each boundary when placing tail stations.
    pub edge_offset: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            amplitude_floor: AMPLITUDE_FLOOR,
            edge_offset: 1,
        }
    }
}

/// Strict sign changes along the samples whose magnitude exceeds
/// `floor * max |ψ|`; sub-floor samples are skipped, so a node that falls
/// exactly on a grid point still counts.
pub fn count_nodes(amplitudes: &[f64], floor: f64) -> Result<usize> {
    let cutoff = floor * max_abs(amplitudes);
    let mut significant = amplitudes.iter().filter(|a| a.abs() > cutoff).peekable();
    if significant.peek().is_none() {
        return Err(Error::AllBelowFloor);
    }
    let mut nodes = 0;
    let mut previous: Option<f64> = None;
    for &a in significant {
        if let Some(p) = previous {
            if (p > 0.0) != (a > 0.0) {
                nodes += 1;
            }
        }
        previous = Some(a);
    }
    Ok(nodes)
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, a| m.max(a.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: StateClass,
    pub node_count: usize,
    pub sign_product: SignProduct,
    pub agreement: bool,
}

/// Node-parity class plus the asymptotic sign-product cross-check.
///
/// The left and right stations are the outermost samples above the floor,
/// searched inward from `edge_offset` points inside each boundary.
pub fn classify_state(amplitudes: &[f64], grid: &Grid1D, opts: &ClassifyOptions) -> Result<Classification> {
    let n = amplitudes.len();
    if n != grid.npoints() {
        return Err(Error::DimensionMismatch {
            expected: grid.npoints(),
            found: n,
        });
    }
    let node_count = count_nodes(amplitudes, opts.amplitude_floor)?;
    let class = StateClass::from_nodes(node_count);
    let cutoff = opts.amplitude_floor * max_abs(amplitudes);
    let band = opts.edge_offset..n.saturating_sub(opts.edge_offset);
    let left = band.clone().find(|&i| amplitudes[i].abs() > cutoff);
    let right = band.rev().find(|&i| amplitudes[i].abs() > cutoff);
    let sign_product = match (left, right) {
        (Some(l), Some(r)) if l < r => {
            if (amplitudes[l] > 0.0) == (amplitudes[r] > 0.0) {
                SignProduct::Positive
            } else {
                SignProduct::Negative
            }
        }
        _ => SignProduct::Indeterminate,
    };
    let agreement = match sign_product {
        SignProduct::Positive => class == StateClass::EType,
        SignProduct::Negative => class == StateClass::OType,
        SignProduct::Indeterminate => false,
    };
    Ok(Classification {
        class,
        node_count,
        sign_product,
        agreement,
    })
}

/// Ascending eigendecomposition of a discretized Hamiltonian.
pub fn solve_spectrum(hd: &HermitianMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    eigendecompose_with(hd, EigenOrdering::Ascending, tol)
}

/// The `k` lowest states of `hd`, classified.
pub fn solve_bound_states(
    hd: &HermitianMatrix,
    grid: &Grid1D,
    k: usize,
    opts: &ClassifyOptions,
) -> Result<Vec<BoundState>> {
    let spectrum = solve_spectrum(hd, &Tolerances::default())?;
    bound_states_from(&spectrum, grid, k, opts)
}

/// Classifies the `k` lowest states of an already solved spectrum.
pub fn bound_states_from(
    spectrum: &SpectralDecomposition,
    grid: &Grid1D,
    k: usize,
    opts: &ClassifyOptions,
) -> Result<Vec<BoundState>> {
    if spectrum.ordering() != EigenOrdering::Ascending {
        return Err(Error::InvalidInput("bound states need an ascending spectrum".into()));
    }
    if k > spectrum.dim() {
        return Err(Error::TooManyStates {
            requested: k,
            available: spectrum.dim(),
        });
    }
    (0..k)
        .map(|index| {
            let v = spectrum.eigenvector(index);
            let mut amplitudes: Vec<f64> = v.iter().map(|z| z.re).collect();
            let cutoff = opts.amplitude_floor * max_abs(&amplitudes);
            if amplitudes.iter().find(|a| a.abs() > cutoff).is_some_and(|a| *a < 0.0) {
                amplitudes.iter_mut().for_each(|a| *a = -*a);
            }
            let c = classify_state(&amplitudes, grid, opts)?;
            Ok(BoundState {
                index,
                energy: spectrum.eigenvalues()[index],
                amplitudes,
                node_count: c.node_count,
                sign_product: c.sign_product,
                classification: c.class,
                classifier_agreement: c.agreement,
            })
        })
        .collect()
}

/// The spatial reflection `x → -x` on a symmetric grid: the anti-diagonal
/// permutation.
pub fn reflection_operator(grid: &Grid1D) -> Result<LinearOperator> {
    if !grid.is_symmetric() {
        return Err(Error::AsymmetricGrid {
            xmin: grid.xmin(),
            xmax: grid.xmax(),
        });
    }
    let n = grid.npoints();
    let r = DMatrix::from_fn(n, n, |i, j| C64::new(if i + j == n - 1 { 1.0 } else { 0.0 }, 0.0));
    Ok(LinearOperator::new(ComplexMatrix::new(r)?))
}

/// `max |P - R|`.
pub fn compare_parity_to_reflection(p: &LinearOperator, r: &LinearOperator) -> Result<f64> {
    if p.dim() != r.dim() {
        return Err(Error::DimensionMismatch {
            expected: r.dim(),
            found: p.dim(),
        });
    }
    Ok(p.matrix().max_abs_diff(r.matrix()))
}
