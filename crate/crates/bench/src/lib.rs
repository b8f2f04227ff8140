//! Fixtures shared by the criterion benches.

use hermsym::random::{random_hermitian, trial_rng};
use hermsym::schrodinger::{discretize, parse_potential, Grid1D};
use hermsym::HermitianMatrix;

pub fn dense_fixture(n: usize) -> HermitianMatrix {
    random_hermitian(n, &mut trial_rng(7, n as u64))
}

pub fn grid_fixture(potential: &str, npoints: usize) -> HermitianMatrix {
    let v = parse_potential(potential).expect("valid potential");
    let grid = Grid1D::new(-12.0, 12.0, npoints).expect("valid grid");
    discretize(&v, &grid, 1.0).expect("finite potential")
}
