//! Hamiltonian builders for the three rotating-trap geometries.
//!
//! Each parameter struct implements [`RotatingModel`], which lets the
//! spectral and dynamics code vary the rotation control without knowing the
//! geometry. [`Model`] is the closed sum of all of them for configuration
//! files and bindings.

mod pancake;
mod ring;
mod rotation;
mod three_site;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fockspace::ManyBodyOperator;
use crate::EnergyUnit;

pub use pancake::{critical_rotation_pancake, pancake_hamiltonian, PancakeParams};
pub use ring::{
    angular_momentum_sectors, ring_hamiltonian, RingParams, DEFAULT_K_MAX, DEFAULT_K_MIN,
};
pub(crate) use rotation::ln_factorials;
pub use rotation::{
    check_unitary, dominant_pair_distribution, mode_rotation, mode_rotation_into,
    quasi_momentum_unitary, OrbitalPairDistribution, UNITARITY_TOLERANCE,
};
pub use three_site::{
    flow_mode_energies, flow_weights, three_site_flow_basis, three_site_site_basis, FlowWeights,
    ThreeSiteFlow, ThreeSiteParams, FLOW_LABELS, SITE_LABELS,
};

/// A Hamiltonian family with one rotation control.
pub trait RotatingModel: Clone + Send + Sync {
    /// `"phi"` or `"omega"`.
    fn parameter_name(&self) -> &'static str;
    fn rotation(&self) -> f64;
    fn with_rotation(&self, value: f64) -> Self;
    fn hamiltonian(&self) -> Result<ManyBodyOperator>;
    fn energy_unit(&self) -> EnergyUnit;
    fn num_particles(&self) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    ThreeSite(ThreeSiteParams),
    ThreeSiteFlow(ThreeSiteParams),
    Pancake(PancakeParams),
    Ring(RingParams),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::ThreeSite(_) => "three-site",
            Model::ThreeSiteFlow(_) => "three-site-flow",
            Model::Pancake(_) => "pancake",
            Model::Ring(_) => "ring",
        }
    }
}

impl RotatingModel for Model {
    fn parameter_name(&self) -> &'static str {
        match self {
            Model::ThreeSite(p) | Model::ThreeSiteFlow(p) => p.parameter_name(),
            Model::Pancake(p) => p.parameter_name(),
            Model::Ring(p) => p.parameter_name(),
        }
    }

    fn rotation(&self) -> f64 {
        match self {
            Model::ThreeSite(p) | Model::ThreeSiteFlow(p) => p.phase,
            Model::Pancake(p) => p.rotation,
            Model::Ring(p) => p.rotation,
        }
    }

    fn with_rotation(&self, value: f64) -> Self {
        match self {
            Model::ThreeSite(p) => Model::ThreeSite(p.with_rotation(value)),
            Model::ThreeSiteFlow(p) => Model::ThreeSiteFlow(p.with_rotation(value)),
            Model::Pancake(p) => Model::Pancake(p.with_rotation(value)),
            Model::Ring(p) => Model::Ring(p.with_rotation(value)),
        }
    }

    fn hamiltonian(&self) -> Result<ManyBodyOperator> {
        match self {
            Model::ThreeSite(p) => three_site_site_basis(p),
            Model::ThreeSiteFlow(p) => three_site_flow_basis(p),
            Model::Pancake(p) => pancake_hamiltonian(p),
            Model::Ring(p) => ring_hamiltonian(p),
        }
    }

    fn energy_unit(&self) -> EnergyUnit {
        match self {
            Model::ThreeSite(_) | Model::ThreeSiteFlow(_) => EnergyUnit::Tunneling,
            Model::Pancake(_) => EnergyUnit::TrapQuantum,
            Model::Ring(_) => EnergyUnit::RingKinetic,
        }
    }

    fn num_particles(&self) -> usize {
        match self {
            Model::ThreeSite(p) | Model::ThreeSiteFlow(p) => p.num_particles,
            Model::Pancake(p) => p.num_particles,
            Model::Ring(p) => p.num_particles,
        }
    }
}
