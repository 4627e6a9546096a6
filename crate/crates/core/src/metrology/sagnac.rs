use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const RUBIDIUM_87_MASS: f64 = 1.443_160_6e-25;

/// Inputs of the Sagnac phase `Δφ = (4π/λv)·Ω·A` and the matter-wave to
/// optical sensitivity ratio `Mc²/ħω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SagnacQuery {
    /// Wavelength λ of the interfering wave, m.
    pub wavelength: f64,
    /// Propagation speed v, m/s.
    pub speed: f64,
    /// Angular velocity Ω, rad/s.
    pub angular_velocity: f64,
    /// Enclosed area A, m².
    pub area: f64,
    /// Atom mass M, kg.
    pub mass: f64,
    /// Photon angular frequency ω, rad/s.
    pub photon_frequency: f64,
}

pub fn sagnac_phase(q: &SagnacQuery) -> Result<f64> {
    for (name, v) in [
        ("wavelength", q.wavelength),
        ("speed", q.speed),
        ("area", q.area),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::config(format!("{name} must be positive")));
        }
    }
    if !(q.angular_velocity >= 0.0) || !q.angular_velocity.is_finite() {
        return Err(Error::config("angular velocity must be non-negative"));
    }
    Ok(4.0 * PI / (q.wavelength * q.speed) * q.angular_velocity * q.area)
}

/// `Mc²/(ħω)`.
pub fn atom_photon_ratio(mass: f64, photon_frequency: f64) -> Result<f64> {
    if !(mass > 0.0 && photon_frequency > 0.0) {
        return Err(Error::config("mass and photon frequency must be positive"));
    }
    Ok(mass * SPEED_OF_LIGHT * SPEED_OF_LIGHT / (HBAR * photon_frequency))
}

/// `ω = 2πc/λ`.
pub fn photon_angular_frequency(wavelength: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength
}
