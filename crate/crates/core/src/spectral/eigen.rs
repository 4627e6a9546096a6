use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::krylov;
use crate::error::{Error, Result};
use crate::fockspace::{canonicalize_phase, ManyBodyOperator, PureState};
use crate::linalg::hermitian_eigen;

pub const DEFAULT_DENSE_THRESHOLD: usize = 4096;
pub const DEFAULT_RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Two lowest levels closer than this count as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenConfig {
    /// Dimensions up to this use the dense solver.
    pub dense_threshold: usize,
    /// Krylov convergence: `‖Hv − λv‖ ≤ tolerance·‖H‖`.
    pub tolerance: f64,
    /// Krylov restarts before giving up.
    pub max_restarts: usize,
    /// Seed of the Krylov start block.
    pub seed: u64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            tolerance: DEFAULT_RESIDUAL_TOLERANCE,
            max_restarts: 500,
            seed: 0x5eed,
        }
    }
}

/// Lowest eigenpairs, values ascending.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<PureState>,
}

pub fn eigensolve(h: &ManyBodyOperator, k: usize) -> Result<Eigenpairs> {
    eigensolve_with(h, k, &EigenConfig::default())
}

pub fn eigensolve_with(h: &ManyBodyOperator, k: usize, config: &EigenConfig) -> Result<Eigenpairs> {
    if k == 0 || k > h.dim() {
        return Err(Error::config(format!(
            "requested {k} eigenpairs of a {}-dimensional operator",
            h.dim()
        )));
    }
    let (values, vectors) = if h.dim() <= config.dense_threshold {
        dense_lowest(h, k)
    } else {
        krylov::lowest(h, k, config)?
    };
    let vectors = vectors
        .into_iter()
        .map(|mut v| {
            canonicalize_phase(&mut v);
            PureState::normalized(h.basis().clone(), v)
        })
        .collect::<Result<_>>()?;
    Ok(Eigenpairs { values, vectors })
}

/// Full dense diagonalization, truncated to the `k` lowest pairs.
pub fn dense_lowest(h: &ManyBodyOperator, k: usize) -> (Vec<f64>, Vec<DVector<Complex64>>) {
    let eig = hermitian_eigen(&h.to_dense());
    sorted_lowest(&eig.eigenvalues, &eig.eigenvectors, k)
}

pub(crate) fn sorted_lowest(
    values: &DVector<f64>,
    vectors: &DMatrix<Complex64>,
    k: usize,
) -> (Vec<f64>, Vec<DVector<Complex64>>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
        .into_iter()
        .take(k)
        .map(|i| (values[i], vectors.column(i).into_owned()))
        .unzip()
}

/// Ground state with the gap to the first excited level.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: PureState,
    /// `E₁ − E₀`, infinite for a one-dimensional space.
    pub gap: f64,
    /// Set when `gap < DEGENERACY_TOLERANCE`; `state` is then one member of
    /// the degenerate pair, chosen deterministically by the solver.
    pub degenerate: bool,
}

pub fn ground_state(h: &ManyBodyOperator) -> Result<GroundState> {
    ground_state_with(h, &EigenConfig::default())
}

pub fn ground_state_with(h: &ManyBodyOperator, config: &EigenConfig) -> Result<GroundState> {
    let k = h.dim().min(2);
    let mut pairs = eigensolve_with(h, k, config)?;
    let gap = if k == 2 {
        pairs.values[1] - pairs.values[0]
    } else {
        f64::INFINITY
    };
    let degenerate = gap < DEGENERACY_TOLERANCE;
    if degenerate {
        log::warn!("ground state is degenerate (gap {gap:.3e}); returning one member");
    }
    Ok(GroundState {
        energy: pairs.values[0],
        state: pairs.vectors.swap_remove(0),
        gap,
        degenerate,
    })
}
