use std::path::Path;

use hermsym::formats::{MatrixFile, ProblemFile};
use hermsym::random::{random_hermitian, trial_rng};
use hermsym::schrodinger::{
    bound_states_from, compare_parity_to_reflection, discretize, parse_potential, potential_is_symmetric,
    reflection_operator, solve_spectrum, ClassifyOptions, SignProduct,
};
use hermsym::spectral::{check_hermitian, eigendecompose_with};
use hermsym::symmetry::{
    construct_parity, construct_suite, eigenstate_action_residual, naive_time_reversal_audit, SymmetrySuite,
};
use hermsym::{
    ChiLabel, ComplexMatrix, ComplexVector, EigenOrdering, ResidualSet, SpectralDecomposition, SymmetryOperator,
    Tolerances, C64,
};
use rayon::prelude::*;

use crate::report::{MatrixJson, RunReport, StateRow};
use crate::CliError;

/// `‖P − R‖` bound for symmetric potentials.
pub const REFLECTION_TOLERANCE: f64 = 1e-8;

/// The solver's own acceptance check never runs tighter than the default, so
/// a strict `--tol` shows up as failed residuals in a report instead of an
/// aborted decomposition.
fn solver_tolerances(tol: &Tolerances) -> Tolerances {
    tol.with_verification(tol.verification.max(hermsym::tolerances::VERIFICATION))
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub tolerances: Tolerances,
    pub ordering: EigenOrdering,
}

/// The 2x2 illustration `H = [[a, b + ic], [b − ic, a]]` with its hand-written
/// eigenvectors `(e^{iθ}, ±1)/√2`, larger eigenvalue first.
pub fn demo_2x2(a: f64, b: f64, c: f64, opts: &RunOptions) -> Result<RunReport, CliError> {
    if b == 0.0 && c == 0.0 {
        return Err(CliError::DegenerateInput);
    }
    let tol = &opts.tolerances;
    let h = check_hermitian(
        ComplexMatrix::from_rows(&[
            vec![C64::new(a, 0.0), C64::new(b, c)],
            vec![C64::new(b, -c), C64::new(a, 0.0)],
        ])?,
        tol.hermiticity,
    )?;
    let theta = c.atan2(b);
    let r = b.hypot(c);
    let e = C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, theta);
    let half = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let s = SpectralDecomposition::from_explicit(
        &h,
        vec![a + r, a - r],
        vec![
            ComplexVector::from_vec(vec![e, half]),
            ComplexVector::from_vec(vec![e, -half]),
        ],
        EigenOrdering::PaperTwoByTwo,
        tol,
    )?;

    let mut report = RunReport::new("demo", tol);
    report.input("a", a);
    report.input("b", b);
    report.input("c", c);
    report.detail("theta", theta);
    report.detail("energies", s.eigenvalues());

    let suite = construct_suite(&h, &s, &solver_tolerances(tol))?;
    report_suite(&mut report, &suite, &s, tol)?;
    report.detail("P", MatrixJson::from(suite.p.matrix()));
    report.detail("T", MatrixJson::from(suite.t.linear_part()));
    report.detail("PT", MatrixJson::from(suite.pt.linear_part()));

    let audit = naive_time_reversal_audit(&h, &s)?;
    report.detail("naive_time_reversal", audit);
    Ok(report.finish())
}

/// Full suite on a matrix file.
pub fn verify_matrix(path: &Path, opts: &RunOptions) -> Result<RunReport, CliError> {
    let tol = &opts.tolerances;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| CliError::Format(e.to_string()))?;
    let h = check_hermitian(file.to_matrix()?, tol.hermiticity)?;
    let s = eigendecompose_with(&h, opts.ordering, &solver_tolerances(tol))?;
    let suite = construct_suite(&h, &s, &solver_tolerances(tol))?;

    let mut report = RunReport::new("verify", tol);
    report.input("path", path.display().to_string());
    report.input("dim", h.dim());
    report.input("ordering", opts.ordering);
    report.detail("eigenvalues", s.eigenvalues());
    report_suite(&mut report, &suite, &s, tol)?;
    Ok(report.finish())
}

/// A 1D problem, either from a problem file or assembled from flags.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProblem {
    pub potential: String,
    pub xmin: f64,
    pub xmax: f64,
    pub npoints: usize,
    pub mass: f64,
    pub num_states: usize,
}

impl Default for PotentialProblem {
    fn default() -> Self {
        Self {
            potential: String::new(),
            xmin: -12.0,
            xmax: 12.0,
            npoints: 1201,
            mass: 1.0,
            num_states: 4,
        }
    }
}

impl From<ProblemFile> for PotentialProblem {
    fn from(f: ProblemFile) -> Self {
        Self {
            potential: f.potential,
            xmin: f.xmin,
            xmax: f.xmax,
            npoints: f.npoints,
            mass: f.mass,
            num_states: f.num_states,
        }
    }
}

impl PotentialProblem {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file: ProblemFile = serde_json::from_str(&text).map_err(|e| CliError::Format(e.to_string()))?;
        Ok(file.into())
    }
}

/// Bound-state table, generalized parity checks and, for a symmetric
/// potential on a symmetric grid, the comparison of P with reflection.
pub fn analyze_potential(problem: &PotentialProblem, opts: &RunOptions) -> Result<RunReport, CliError> {
    let tol = &opts.tolerances;
    let v = parse_potential(&problem.potential).map_err(hermsym::Error::from)?;
    let grid = hermsym::schrodinger::Grid1D::new(problem.xmin, problem.xmax, problem.npoints)?;
    let h = discretize(&v, &grid, problem.mass)?;
    let s = solve_spectrum(&h, &solver_tolerances(tol))?;
    let classify = ClassifyOptions {
        amplitude_floor: tol.amplitude_floor,
        ..ClassifyOptions::default()
    };
    let states = bound_states_from(&s, &grid, problem.num_states, &classify)?;

    let mut report = RunReport::new("analyze", tol);
    report.input("potential", &problem.potential);
    report.input("parsed", v.to_string());
    report.input("xmin", problem.xmin);
    report.input("xmax", problem.xmax);
    report.input("npoints", problem.npoints);
    report.input("mass", problem.mass);
    report.input("num_states", problem.num_states);
    report
        .tolerances
        .insert("edge_offset".into(), classify.edge_offset as f64);

    let scaled = tol.scaled(h.norm());
    report.residual("spectral.eigen_residual", s.eigen_residual(&h), scaled);
    report.residual("spectral.orthonormality", s.verify_orthonormality(), tol.verification);
    report.residual("spectral.completeness", s.verify_completeness(), tol.verification);
    let p = construct_parity(&s);
    report.residual("P.involution", p.involution_residual(), tol.verification);
    report.residual("P.commutator", p.commutator_residual(&h), scaled);
    let parity = |n: usize| if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    report.residual(
        "P.eigenstate_action",
        eigenstate_action_residual(&p, &s, parity),
        tol.verification,
    );

    let mut disagreements = 0usize;
    for st in &states {
        match st.sign_product {
            SignProduct::Indeterminate => {
                report.warn(format!("state {}: tail sign product is indeterminate", st.index))
            }
            _ if !st.classifier_agreement => disagreements += 1,
            _ => {}
        }
        report.states.push(StateRow {
            n: st.index,
            energy: st.energy,
            node_count: st.node_count,
            classification: st.classification.letter().to_string(),
            sign_product: st.sign_product.symbol().to_string(),
            agreement: st.classifier_agreement,
        });
    }
    report.residual("states.classifier_disagreements", disagreements as f64, 0.0);

    if grid.is_symmetric() {
        let r = reflection_operator(&grid)?;
        let diff = compare_parity_to_reflection(&p, &r)?;
        let symmetric = potential_is_symmetric(&v, &grid, tol.verification);
        report.detail("potential_symmetric", symmetric);
        if symmetric {
            report.tolerances.insert("reflection".into(), REFLECTION_TOLERANCE);
            report.residual("reflection.parity_difference", diff, REFLECTION_TOLERANCE);
        } else {
            report.detail("parity_reflection_difference", diff);
        }
    }
    if let Some(w) = s.degeneracy() {
        report.warn(w.to_string());
    }
    Ok(report.finish())
}

/// Seeded random Hermitian matrices through the full suite; the worst
/// residual per label (by value/tolerance) is reported.
pub fn random_suite(n: usize, trials: usize, seed: u64, opts: &RunOptions) -> Result<RunReport, CliError> {
    if n < 2 {
        return Err(CliError::Usage("random suite needs n >= 2".into()));
    }
    if trials == 0 {
        return Err(CliError::Usage("random suite needs at least one trial".into()));
    }
    let tol = opts.tolerances;
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|trial| run_trial(n, seed, trial as u64, opts.ordering, &tol))
        .collect::<Result<_, _>>()?;

    let mut report = RunReport::new("random", &tol);
    report.input("n", n);
    report.input("trials", trials);
    report.input("seed", seed);
    report.input("ordering", opts.ordering);

    let mut worst: std::collections::BTreeMap<String, (f64, f64, usize)> = Default::default();
    let mut pt_bad = 0usize;
    let mut cpt_bad = 0usize;
    let mut degenerate = 0usize;
    for (trial, o) in outcomes.iter().enumerate() {
        for r in o.residuals.iter() {
            let ratio = ratio(r.value, r.tolerance);
            let entry = worst.entry(r.label.clone()).or_insert((r.value, r.tolerance, trial));
            if ratio > self::ratio(entry.0, entry.1) {
                *entry = (r.value, r.tolerance, trial);
            }
        }
        pt_bad += usize::from(!o.pt_alternating);
        cpt_bad += usize::from(!o.cpt_positive);
        degenerate += usize::from(o.degenerate);
    }
    let mut worst_trial = std::collections::BTreeMap::new();
    for (label, (value, tolerance, trial)) in worst {
        report.residual(label.clone(), value, tolerance);
        worst_trial.insert(label, trial);
    }
    report.residual("signatures.PT_not_alternating", pt_bad as f64, 0.0);
    report.residual("signatures.CPT_not_positive", cpt_bad as f64, 0.0);
    report.signatures = outcomes[0].signatures.clone();
    report.detail("worst_trial", worst_trial);
    if degenerate > 0 {
        report.warn(format!("{degenerate} of {trials} trials had a degenerate spectrum"));
    }
    Ok(report.finish())
}

struct TrialOutcome {
    residuals: ResidualSet,
    signatures: std::collections::BTreeMap<String, Vec<i8>>,
    pt_alternating: bool,
    cpt_positive: bool,
    degenerate: bool,
}

fn run_trial(
    n: usize,
    seed: u64,
    trial: u64,
    ordering: EigenOrdering,
    tol: &Tolerances,
) -> Result<TrialOutcome, CliError> {
    let h = random_hermitian(n, &mut trial_rng(seed, trial));
    let s = eigendecompose_with(&h, ordering, &solver_tolerances(tol))?;
    let suite = construct_suite(&h, &s, &solver_tolerances(tol))?;
    let mut scratch = RunReport::new("", tol);
    report_suite(&mut scratch, &suite, &s, tol)?;
    let mut residuals = ResidualSet::default();
    for (label, r) in &scratch.residuals {
        residuals.push(label.clone(), r.value, r.tolerance);
    }
    let pt_alternating = scratch.signatures["PT"]
        .iter()
        .enumerate()
        .all(|(k, &x)| x == if k % 2 == 0 { 1 } else { -1 });
    let cpt_positive = scratch.signatures["CPT"].iter().all(|&x| x > 0);
    Ok(TrialOutcome {
        residuals,
        signatures: scratch.signatures,
        pt_alternating,
        cpt_positive,
        degenerate: suite.degeneracy_flag(),
    })
}

fn ratio(value: f64, tolerance: f64) -> f64 {
    if tolerance > 0.0 {
        value / tolerance
    } else if value > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Residuals, χ-norm signatures and degeneracy warning of a suite built with
/// [`solver_tolerances`]; every residual is re-judged against `tol`.
fn report_suite(
    report: &mut RunReport,
    suite: &SymmetrySuite,
    s: &SpectralDecomposition,
    tol: &Tolerances,
) -> Result<(), CliError> {
    let built = solver_tolerances(tol).verification;
    for r in suite.residuals.iter() {
        report.residual(r.label.clone(), r.value, tol.verification * (r.tolerance / built));
    }
    report.tolerances.insert("chi_norm_modulus".into(), built);
    for label in ChiLabel::ALL {
        let norms = suite.norm_report(label, s, built)?;
        report.residual(
            format!("{}.gram_off_diagonal", label.as_str()),
            norms.off_diagonal_max,
            tol.verification,
        );
        report.signatures.insert(label.as_str().to_string(), norms.signature);
    }
    if let Some(w) = &suite.degeneracy {
        report.warn(w.to_string());
    }
    Ok(())
}
