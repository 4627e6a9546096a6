//! Unitary evolution under frozen and ramped Hamiltonians, and the
//! rotation-sensing protocol built from them. Time is measured in units of
//! ħ over the model's energy unit.

mod evolve;
mod protocol;
mod ramp;

pub use evolve::{evolve, Propagator};
pub use protocol::{
    fringe_frequency, gyroscope_protocol, gyroscope_scan, ProtocolConfig, ProtocolResult,
};
pub use ramp::{
    ramp_evolve, ramp_propagator, AdiabaticityReport, RampSchedule, DEFAULT_ADIABATICITY_FLOOR,
    DEFAULT_MAX_PHASE_STEP,
};
