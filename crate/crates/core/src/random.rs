//! Seeded random Hermitian matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{ComplexMatrix, C64};
use crate::spectral::{check_hermitian, HermitianMatrix};

/// Generator for trial `stream` of a run seeded with `seed`. Streams are
/// independent, so trials can run in any order or in parallel.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `(A + A†)/2` with real and imaginary parts of `A` uniform in [-1, 1).
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let a: Vec<C64> = (0..n * n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let h = nalgebra::DMatrix::from_fn(n, n, |i, j| (a[i * n + j] + a[j * n + i].conj()) * 0.5);
    let m = ComplexMatrix::new(h).expect("finite square matrix");
    check_hermitian(m, 0.0).expect("symmetrized matrix is exactly Hermitian")
}

/// A unit-modulus complex number with uniformly distributed argument.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}
