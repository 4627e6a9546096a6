//! Eigensolvers, parameter sweeps and anti-crossing search.
//!
//! Operators up to [`DEFAULT_DENSE_THRESHOLD`] rows are diagonalized densely;
//! larger ones go through a restarted block Krylov solver with a fixed seed.
//! Every eigenvector has its largest amplitude made real and positive, so
//! repeated runs return identical vectors.

mod anticrossing;
mod eigen;
mod krylov;
mod sweep;

pub use anticrossing::{
    find_anticrossing, find_anticrossing_with, find_first_anticrossing,
    find_first_anticrossing_with, AntiCrossing, DEFAULT_COARSE_POINTS,
};
pub use eigen::{
    dense_lowest, eigensolve, eigensolve_with, ground_state, ground_state_with, EigenConfig,
    Eigenpairs, GroundState, DEFAULT_DENSE_THRESHOLD, DEFAULT_RESIDUAL_TOLERANCE,
    DEGENERACY_TOLERANCE,
};
pub use sweep::{linspace, sweep, sweep_with, SpectrumSweep};
