use std::sync::Arc;

use nalgebra::{DMatrix};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::generator::PhaseGenerator;
use super::qfi::mixed_qfi;
use crate::error::{Error, Result};
use crate::fockspace::{BasisConfig, DensityMatrix, DensitySector, FockBasis, PureState};
use crate::models::ln_factorials;
use crate::linalg::hermitian_eigen;

/// Rows of a loss sector whose amplitudes all fall below this are dropped.
pub const SUPPORT_CUTOFF: f64 = 1e-10;
pub const DEFAULT_LOSS_POINTS: usize = 50;
pub const DEFAULT_MAX_LOSS: f64 = 0.5;

/// Independent beam-splitter loss of transmissivity `η` on every mode.
///
/// Each lost pattern `j⃗` contributes the Kraus image
/// `Π_m √(C(n_m, j_m)(1−η)^{j_m} η^{n_m−j_m}) |n⃗ − j⃗⟩`, and the images of one
/// total loss `J` form the columns of the factor of the `N − J` sector.
pub fn apply_loss(state: &PureState, eta: f64) -> Result<DensityMatrix> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::config(format!(
            "transmissivity must lie in (0, 1], got {eta}"
        )));
    }
    if eta == 1.0 {
        return Ok(DensityMatrix::from_pure(state));
    }
    let basis = state.basis();
    let n = basis.num_particles();
    let modes = basis.modes();
    let m = modes.len();
    let lf = ln_factorials(n);
    let (ln_eta, ln_loss) = (eta.ln(), (1.0 - eta).ln());

    let mut sectors = Vec::new();
    for lost in 0..=n {
        let target = Arc::new(FockBasis::build(
            n - lost,
            modes.clone(),
            basis.cap().cloned(),
            &BasisConfig::default(),
        )?);
        let patterns = FockBasis::new(lost, modes.clone())?;
        let mut factor = DMatrix::<Complex64>::zeros(target.dim(), patterns.dim());
        let mut rest = vec![0u8; m];
        for (col, src) in basis.states().enumerate() {
            let amp = state.amplitudes()[col];
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            for (pc, j) in patterns.states().enumerate() {
                if j.iter().zip(src).any(|(a, b)| a > b) {
                    continue;
                }
                let mut ln_w = 0.0;
                for ((&nk, &jk), r) in src.iter().zip(j).zip(rest.iter_mut()) {
                    let (nk, jk) = (nk as usize, jk as usize);
                    ln_w += 0.5
                        * (lf[nk] - lf[jk] - lf[nk - jk]
                            + jk as f64 * ln_loss
                            + (nk - jk) as f64 * ln_eta);
                    *r = (nk - jk) as u8;
                }
                let row = target
                    .rank(&rest)
                    .expect("weights only decrease under loss");
                factor[(row, pc)] += amp * ln_w.exp();
            }
        }
        if let Some(sector) = compress(target, factor)? {
            sectors.push(sector);
        }
    }
    DensityMatrix::from_sectors(sectors)
}

/// Drops negligible rows and columns and, when the factor is wider than
/// tall, replaces it with a square root of `F F†`.
fn compress(basis: Arc<FockBasis>, factor: DMatrix<Complex64>) -> Result<Option<DensitySector>> {
    let support: Vec<usize> = (0..factor.nrows())
        .filter(|&r| factor.row(r).iter().any(|z| z.norm() > SUPPORT_CUTOFF))
        .collect();
    let cols: Vec<usize> = (0..factor.ncols())
        .filter(|&c| support.iter().any(|&r| factor[(r, c)].norm() > 0.0))
        .collect();
    if support.is_empty() || cols.is_empty() {
        return Ok(None);
    }
    let f = DMatrix::from_fn(support.len(), cols.len(), |r, c| {
        factor[(support[r], cols[c])]
    });
    let f = if f.ncols() > f.nrows() {
        let eig = hermitian_eigen(&(&f * f.adjoint()));
        let keep: Vec<usize> = (0..f.nrows())
            .filter(|&k| eig.eigenvalues[k] > 0.0)
            .collect();
        DMatrix::from_fn(f.nrows(), keep.len(), |r, c| {
            eig.eigenvectors[(r, keep[c])] * eig.eigenvalues[keep[c]].sqrt()
        })
    } else {
        f
    };
    Ok(Some(DensitySector::new(basis, support, f)?))
}

/// Fisher information against loss fraction `l = 1 − η`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QfiCurve {
    pub state: String,
    pub generator: String,
    pub loss: Vec<f64>,
    pub qfi: Vec<f64>,
    /// Cramér-Rao bound `1/√F` per point.
    pub delta_phi_min: Vec<f64>,
}

pub fn cramer_rao_bound(qfi: f64) -> f64 {
    1.0 / qfi.sqrt()
}

/// Loss points are evaluated in parallel and stored by index.
pub fn qfi_vs_loss(
    state: &PureState,
    state_tag: &str,
    generator: &PhaseGenerator,
    grid: &[f64],
) -> Result<QfiCurve> {
    if let Some(&bad) = grid.iter().find(|&&l| !(0.0..1.0).contains(&l)) {
        return Err(Error::config(format!("loss fraction {bad} outside [0, 1)")));
    }
    let qfi: Vec<Result<f64>> = grid
        .par_iter()
        .map(|&l| apply_loss(state, 1.0 - l).map(|rho| mixed_qfi(&rho, generator)))
        .collect();
    let qfi = qfi.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(QfiCurve {
        state: state_tag.to_string(),
        generator: generator.tag(),
        loss: grid.to_vec(),
        delta_phi_min: qfi.iter().map(|&f| cramer_rao_bound(f)).collect(),
        qfi,
    })
}
