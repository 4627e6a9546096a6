//! Thick-restart block Krylov solver for the lowest eigenpairs of a sparse
//! Hermitian operator.
//!
//! The search space is grown block by block (`H` applied to the newest block,
//! then orthogonalized twice against everything kept). A Rayleigh-Ritz step
//! on the explicitly projected matrix gives Ritz pairs; on restart the lowest
//! Ritz vectors are kept and their residuals seed the next block.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::{sorted_lowest, EigenConfig};
use crate::error::{Error, Result};
use crate::fockspace::ManyBodyOperator;
use crate::linalg::hermitian_eigen;

const DEFLATION: f64 = 1e-10;

pub(crate) fn lowest(
    h: &ManyBodyOperator,
    k: usize,
    config: &EigenConfig,
) -> Result<(Vec<f64>, Vec<DVector<Complex64>>)> {
    let n = h.dim();
    let block = k.clamp(2, 8).min(n);
    let max_basis = (4 * k + 4 * block).max(40).min(n);
    let keep = (k + block).min(max_basis.saturating_sub(block)).max(k);
    let norm = operator_norm_bound(h).max(f64::MIN_POSITIVE);
    let target = config.tolerance * norm;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut v: Vec<DVector<Complex64>> = Vec::with_capacity(max_basis);
    let mut w: Vec<DVector<Complex64>> = Vec::with_capacity(max_basis);
    let mut pending: Vec<DVector<Complex64>> =
        (0..block).map(|_| random_vector(n, &mut rng)).collect();
    let mut best_residual = f64::INFINITY;

    for _restart in 0..=config.max_restarts {
        // expand
        while v.len() < max_basis {
            let mut added = Vec::new();
            for mut x in pending.drain(..) {
                if v.len() + added.len() >= max_basis {
                    break;
                }
                if !orthonormalize(&mut x, v.iter().chain(added.iter())) {
                    x = random_vector(n, &mut rng);
                    if !orthonormalize(&mut x, v.iter().chain(added.iter())) {
                        continue;
                    }
                }
                added.push(x);
            }
            if added.is_empty() {
                break;
            }
            for x in added {
                let hx = h.matvec(&x);
                pending.push(hx.clone());
                v.push(x);
                w.push(hx);
            }
        }

        // Rayleigh-Ritz
        let m = v.len();
        let mut t = DMatrix::<Complex64>::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let z = v[i].dotc(&w[j]);
                t[(i, j)] = z;
                t[(j, i)] = z.conj();
            }
        }
        for i in 0..m {
            t[(i, i)] = Complex64::new(t[(i, i)].re, 0.0);
        }
        let eig = hermitian_eigen(&t);
        let want = keep.min(m);
        let (theta, y) = sorted_lowest(&eig.eigenvalues, &eig.eigenvectors, want);

        let combine = |basis: &[DVector<Complex64>], c: &DVector<Complex64>| {
            let mut out = DVector::<Complex64>::zeros(n);
            for (b, &ci) in basis.iter().zip(c.iter()) {
                out.axpy(ci, b, Complex64::new(1.0, 0.0));
            }
            out
        };
        let ritz: Vec<DVector<Complex64>> = y.iter().map(|c| combine(&v, c)).collect();
        let hritz: Vec<DVector<Complex64>> = y.iter().map(|c| combine(&w, c)).collect();
        let residuals: Vec<DVector<Complex64>> = ritz
            .iter()
            .zip(&hritz)
            .zip(&theta)
            .map(|((x, hx), &th)| hx - x * Complex64::new(th, 0.0))
            .collect();
        let worst = residuals[..k].iter().map(|r| r.norm()).fold(0.0, f64::max);
        best_residual = best_residual.min(worst);

        if worst <= target || m == n {
            let values = theta[..k].to_vec();
            return Ok((values, ritz.into_iter().take(k).collect()));
        }

        // thick restart
        pending = residuals
            .iter()
            .take(k.max(block))
            .filter(|r| r.norm() > target)
            .take(block)
            .cloned()
            .collect();
        v = ritz;
        w = hritz;
    }
    Err(Error::NoConvergence {
        iterations: config.max_restarts,
        best_residual: best_residual / norm,
    })
}

/// Largest absolute row sum, an upper bound on the spectral norm.
fn operator_norm_bound(h: &ManyBodyOperator) -> f64 {
    (0..h.dim())
        .map(|r| h.row(r).map(|(_, z)| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> DVector<Complex64> {
    DVector::from_iterator(
        n,
        (0..n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)),
    )
}

/// Two passes of Gram-Schmidt; false if `x` is numerically in the span.
fn orthonormalize<'a>(
    x: &mut DVector<Complex64>,
    basis: impl Iterator<Item = &'a DVector<Complex64>> + Clone,
) -> bool {
    let start = x.norm();
    if start == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for b in basis.clone() {
            let c = b.dotc(x);
            x.axpy(-c, b, Complex64::new(1.0, 0.0));
        }
    }
    let left = x.norm();
    if left <= DEFLATION * start {
        return false;
    }
    *x /= Complex64::new(left, 0.0);
    true
}
