//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Each rotation is the unitary `G = D R D†`, where `D = diag(1, e^{-iφ})`
//! removes the phase of the pivot `a_pq = |a_pq| e^{iφ}` and `R` is the real
//! symmetric Jacobi rotation of the resulting 2x2 block.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 64;

/// Returns unsorted eigenvalues and the matching eigenvectors (as columns).
pub(crate) fn hermitian_jacobi(h: &ComplexMatrix) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
    let n = h.dim();
    let zero = C64::new(0.0, 0.0);
    // row-major working copy
    let mut a: Vec<C64> = (0..n * n).map(|k| h.get(k / n, k % n)).collect();
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
    }
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { zero }).collect())
        .collect();

    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = 1e-2 * f64::EPSILON * frob;

    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[i * n + j].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= target || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure(format!(
                "Jacobi off-diagonal norm {off:e} after {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // skip pivots that can no longer move the diagonal
                if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = zero;
                    a[q * n + p] = zero;
                    continue;
                }
                rotated = true;
                let e = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.is_finite() && theta.abs() < 1e150 {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.5 / theta
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let g_pq = e * s; // G = [[c, s e], [-s ē, c]]
                let g_qp = -(e.conj() * s);

                // A <- A G
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c + akq * g_qp;
                    a[k * n + q] = akp * g_pq + akq * c;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c + aqk * g_qp.conj();
                    a[q * n + k] = apk * g_pq.conj() + aqk * c;
                }
                a[p * n + p] = C64::new(app - t * mag, 0.0);
                a[q * n + q] = C64::new(aqq + t * mag, 0.0);
                a[p * n + q] = zero;
                a[q * n + p] = zero;

                // V <- V G
                let (lo, hi) = v.split_at_mut(q);
                let vp = &mut lo[p];
                let vq = &mut hi[0];
                for k in 0..n {
                    let x = vp[k];
                    let y = vq[k];
                    vp[k] = x * c + y * g_qp;
                    vq[k] = x * g_pq + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let values = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((values, v))
}
