//! Probe states, particle loss and quantum Fisher information.
//!
//! Phases are imprinted by `e^{−iφG}` with a generator `G` that is diagonal
//! in the Fock basis: `n̂_b` for two-mode states and `L̂` on the ring. Loss
//! acts mode by mode, so its output is block-diagonal in particle number and
//! is kept as one low-rank factor per block.

mod generator;
mod loss;
mod qfi;
mod sagnac;
mod states;

pub use generator::PhaseGenerator;
pub use loss::{
    apply_loss, cramer_rao_bound, qfi_vs_loss, QfiCurve, DEFAULT_LOSS_POINTS, DEFAULT_MAX_LOSS,
    SUPPORT_CUTOFF,
};
pub use qfi::{
    mixed_qfi, mixed_qfi_dense, phase_derivative, pure_qfi, pure_qfi_derivative, sld, SLD_FLOOR,
};
pub use sagnac::{
    atom_photon_ratio, photon_angular_frequency, sagnac_phase, SagnacQuery, HBAR, RUBIDIUM_87_MASS,
    SPEED_OF_LIGHT,
};
pub use states::{bat_state, noon_in, noon_state, unentangled_state};
