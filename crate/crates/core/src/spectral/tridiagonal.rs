//! Real symmetric tridiagonal eigensolvers.
//!
//! [`symmetric_tridiagonal`] is the implicit-shift QL iteration with
//! eigenvector accumulation. [`centrosymmetric_tridiagonal`] handles
//! matrices that are invariant under index reversal by splitting them into
//! an even and an odd sector, so every eigenvector has exact reflection
//! parity even where the spectrum is numerically degenerate.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenpairs sorted ascending; `vectors[k]` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub(crate) struct RealEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// `diag` has length n, `off` has length n - 1 (`off[i]` couples i and i + 1).
pub(crate) fn symmetric_tridiagonal(diag: &[f64], off: &[f64]) -> Result<RealEigen> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1), "off-diagonal length");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(off);
    // z[i] holds eigenvector i as a contiguous row.
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::ConvergenceFailure(format!(
                    "QL iteration for eigenvalue {l} exceeded {MAX_QL_ITERATIONS} steps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let (lo, hi) = z.split_at_mut(i + 1);
                let zi = &mut lo[i];
                let zn = &mut hi[0];
                for (x, y) in zi.iter_mut().zip(zn.iter_mut()) {
                    let f = *y;
                    *y = s * *x + c * f;
                    *x = c * *x - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(RealEigen {
        values: order.iter().map(|&k| d[k]).collect(),
        vectors: order.into_iter().map(|k| std::mem::take(&mut z[k])).collect(),
    })
}

/// True when `diag[i] == diag[n-1-i]` and `off[i] == off[n-2-i]` bitwise.
pub(crate) fn is_centrosymmetric(diag: &[f64], off: &[f64]) -> bool {
    let n = diag.len();
    (0..n / 2).all(|i| diag[i] == diag[n - 1 - i]) && (0..off.len() / 2).all(|i| off[i] == off[off.len() - 1 - i])
}

/// Eigenpairs of a centrosymmetric tridiagonal matrix, sorted ascending.
///
/// Returns the reflection parity (+1 or -1) of every eigenvector alongside.
/// Eigenvalues whose spread is within `tie` are treated as one cluster: the
/// members are ordered so parity keeps alternating, and share the cluster
/// mean as their eigenvalue.
pub(crate) fn centrosymmetric_tridiagonal(diag: &[f64], off: &[f64], tie: f64) -> Result<(RealEigen, Vec<i8>)> {
    let n = diag.len();
    if n < 2 {
        let eig = symmetric_tridiagonal(diag, off)?;
        return Ok((eig, vec![1; n]));
    }
    let m = n / 2;
    let (even_d, even_e, odd_d, odd_e) = if n % 2 == 1 {
        let mut ed = diag[..=m].to_vec();
        let mut ee = off[..m].to_vec();
        ee[m - 1] *= SQRT_2;
        ed[m] = diag[m];
        (ed, ee, diag[..m].to_vec(), off[..m - 1].to_vec())
    } else {
        let mut ed = diag[..m].to_vec();
        let mut od = diag[..m].to_vec();
        ed[m - 1] += off[m - 1];
        od[m - 1] -= off[m - 1];
        (ed, off[..m - 1].to_vec(), od, off[..m - 1].to_vec())
    };

    let even = symmetric_tridiagonal(&even_d, &even_e)?;
    let odd = symmetric_tridiagonal(&odd_d, &odd_e)?;

    let embed = |w: &[f64], parity: f64| -> Vec<f64> {
        let mut psi = vec![0.0; n];
        for i in 0..m {
            psi[i] = w[i] / SQRT_2;
            psi[n - 1 - i] = parity * psi[i];
        }
        if n % 2 == 1 && parity > 0.0 {
            psi[m] = w[m];
        }
        psi
    };

    let mut pairs: Vec<(f64, Vec<f64>, i8)> = Vec::with_capacity(n);
    for (value, w) in even.values.iter().zip(&even.vectors) {
        pairs.push((*value, embed(w, 1.0), 1));
    }
    for (value, w) in odd.values.iter().zip(&odd.vectors) {
        pairs.push((*value, embed(w, -1.0), -1));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && pairs[end + 1].0 - pairs[end].0 <= tie {
            end += 1;
        }
        if end > start {
            resolve_tie(&mut pairs[..=end], start);
        }
        start = end + 1;
    }

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut parities = Vec::with_capacity(n);
    for (value, v, parity) in pairs {
        values.push(value);
        vectors.push(v);
        parities.push(parity);
    }
    Ok((RealEigen { values, vectors }, parities))
}

// Reorders `pairs[start..]` so parity alternates after `pairs[start - 1]`.
fn resolve_tie(pairs: &mut [(f64, Vec<f64>, i8)], start: usize) {
    let cluster = &mut pairs[start..];
    let mean = cluster.iter().map(|p| p.0).sum::<f64>() / cluster.len() as f64;
    let mut want = if start == 0 { cluster[0].2 } else { -pairs[start - 1].2 };
    let cluster = &mut pairs[start..];
    for k in 0..cluster.len() {
        if let Some(pos) = (k..cluster.len()).find(|&j| cluster[j].2 == want) {
            cluster[k..=pos].rotate_right(1);
        }
        want = -cluster[k].2;
    }
    for p in cluster.iter_mut() {
        p.0 = mean;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(diag: &[f64], off: &[f64]) -> Vec<Vec<f64>> {
        let n = diag.len();
        let mut h = vec![vec![0.0; n]; n];
        for i in 0..n {
            h[i][i] = diag[i];
            if i + 1 < n {
                h[i][i + 1] = off[i];
                h[i + 1][i] = off[i];
            }
        }
        h
    }

    fn max_residual(diag: &[f64], off: &[f64], eig: &RealEigen) -> f64 {
        let h = dense(diag, off);
        let n = diag.len();
        let mut worst = 0.0_f64;
        for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
            for i in 0..n {
                let hv: f64 = (0..n).map(|j| h[i][j] * v[j]).sum();
                worst = worst.max((hv - lambda * v[i]).abs());
            }
        }
        worst
    }

    #[test]
    fn free_particle_three_sites_closed_form() {
        // [[1,-1/2,0],[-1/2,1,-1/2],[0,-1/2,1]]: eigenvalues 1 - cos(kπ/4), k = 1..3
        let d = [1.0, 1.0, 1.0];
        let e = [-0.5, -0.5];
        let eig = symmetric_tridiagonal(&d, &e).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [1.0 - h, 1.0, 1.0 + h];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
        assert!(max_residual(&d, &e, &eig) < 1e-14);
    }

    #[test]
    fn centrosymmetric_split_matches_plain_ql() {
        for n in [2usize, 3, 4, 7, 10, 31] {
            let d: Vec<f64> = (0..n)
                .map(|i| {
                    let x = i as f64 - (n - 1) as f64 / 2.0;
                    x * x
                })
                .collect();
            let e: Vec<f64> = (0..n - 1)
                .map(|i| -1.0 - 0.1 * ((i as f64) - (n - 2) as f64 / 2.0).abs())
                .collect();
            assert!(is_centrosymmetric(&d, &e));
            let plain = symmetric_tridiagonal(&d, &e).unwrap();
            let (split, parity) = centrosymmetric_tridiagonal(&d, &e, 1e-12).unwrap();
            for (a, b) in plain.values.iter().zip(&split.values) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!(max_residual(&d, &e, &split) < 1e-12);
            for (k, (v, p)) in split.vectors.iter().zip(&parity).enumerate() {
                let norm: f64 = v.iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-13);
                for i in 0..n {
                    assert_eq!(v[n - 1 - i], *p as f64 * v[i]);
                }
                // negative couplings: ground state even, parity alternates
                assert_eq!(*p, if k % 2 == 0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn tied_pair_is_ordered_by_alternating_parity() {
        let mut pairs = [(0.0, vec![], 1), (1.0, vec![], 1), (1.0, vec![], -1), (2.0, vec![], 1)];
        resolve_tie(&mut pairs[..3], 1);
        let parities: Vec<i8> = pairs.iter().map(|p| p.2).collect();
        assert_eq!(parities, vec![1, -1, 1, 1]);
    }
}
