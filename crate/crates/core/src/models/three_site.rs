use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::RotatingModel;
use crate::error::{Error, Result};
use crate::fockspace::{
    FockBasis, HermitianBuilder, LadderMonomial, ManyBodyOperator, ModeSet, PureState,
};
use crate::EnergyUnit;

/// Site labels `a, b, c`.
pub const SITE_LABELS: [i64; 3] = [0, 1, 2];

/// Quasi-momentum labels `α, β, γ`: zero flow, one quantum clockwise, one
/// quantum anticlockwise.
pub const FLOW_LABELS: [i64; 3] = [0, 1, -1];

/// Three-site Bose-Hubbard ring with a Peierls phase `φ` around the loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeSiteParams {
    pub num_particles: usize,
    /// Tunneling J.
    pub tunneling: f64,
    /// On-site interaction U.
    pub interaction: f64,
    /// Total phase φ around the loop, radians.
    pub phase: f64,
}

impl ThreeSiteParams {
    pub fn new(num_particles: usize, tunneling: f64, interaction: f64, phase: f64) -> Self {
        Self {
            num_particles,
            tunneling,
            interaction,
            phase,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_particles < 1 {
            return Err(Error::config(
                "three-site model needs at least one particle",
            ));
        }
        if !(self.tunneling >= 0.0) || !self.tunneling.is_finite() {
            return Err(Error::config(format!(
                "tunneling must be non-negative, got {}",
                self.tunneling
            )));
        }
        if !self.interaction.is_finite() || !self.phase.is_finite() {
            return Err(Error::config("interaction and phase must be finite"));
        }
        Ok(())
    }

    pub fn site_basis(&self) -> Result<Arc<FockBasis>> {
        Ok(Arc::new(FockBasis::new(
            self.num_particles,
            ModeSet::new(SITE_LABELS.to_vec())?,
        )?))
    }

    pub fn flow_basis(&self) -> Result<Arc<FockBasis>> {
        Ok(Arc::new(FockBasis::new(
            self.num_particles,
            ModeSet::new(FLOW_LABELS.to_vec())?,
        )?))
    }
}

/// Twisted Bose-Hubbard Hamiltonian on sites `a, b, c`:
/// `−J[e^{iφ/3}(a†b + b†c + c†a) + h.c.] + U Σ a†²a²`.
pub fn three_site_site_basis(p: &ThreeSiteParams) -> Result<ManyBodyOperator> {
    p.validate()?;
    let [a, b, c] = SITE_LABELS;
    let hop = Complex64::from_polar(-p.tunneling, p.phase / 3.0);
    let mut h = HermitianBuilder::new(p.site_basis()?);
    for (to, from) in [(a, b), (b, c), (c, a)] {
        h.push_raise(LadderMonomial::hop(hop, to, from));
    }
    for s in SITE_LABELS {
        h.push_full(LadderMonomial::pair(p.interaction, s, s, s, s));
    }
    h.build()
}

/// The same Hamiltonian written over the quasi-momentum modes `α, β, γ`.
pub fn three_site_flow_basis(p: &ThreeSiteParams) -> Result<ManyBodyOperator> {
    p.validate()?;
    let [al, be, ga] = FLOW_LABELS;
    let (s, c) = (p.phase / 3.0).sin_cos();
    let j = p.tunneling;
    let u3 = p.interaction / 3.0;
    let sq3 = 3f64.sqrt();

    let mut h = HermitianBuilder::new(p.flow_basis()?);
    h.push_full(LadderMonomial::number(-2.0 * j * c, al));
    h.push_full(LadderMonomial::number(j * c - sq3 * j * s, be));
    h.push_full(LadderMonomial::number(j * c + sq3 * j * s, ga));
    for m in FLOW_LABELS {
        h.push_full(LadderMonomial::pair(u3, m, m, m, m));
    }
    for (x, y) in [(al, be), (al, ga), (be, ga)] {
        h.push_full(LadderMonomial::pair(4.0 * u3, x, y, x, y));
    }
    // pair scattering conserving quasi-momentum mod 3, plus h.c.
    for (pair_mode, x, y) in [(al, be, ga), (be, al, ga), (ga, al, be)] {
        h.push_raise(LadderMonomial::pair(2.0 * u3, x, y, pair_mode, pair_mode));
    }
    h.build()
}

/// Single-particle flow-mode energies `(α, β, γ)` at phase `φ`.
pub fn flow_mode_energies(tunneling: f64, phase: f64) -> [f64; 3] {
    let (s, c) = (phase / 3.0).sin_cos();
    let sq3 = 3f64.sqrt();
    [
        -2.0 * tunneling * c,
        tunneling * c - sq3 * tunneling * s,
        tunneling * c + sq3 * tunneling * s,
    ]
}

/// Weights of a flow-basis state on the two sides of the `α ↔ β` mirror.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowWeights {
    /// Probability of `n_α > n_β`.
    pub alpha_majority: f64,
    /// Probability of `n_β > n_α`.
    pub beta_majority: f64,
    /// `|⟨N00|ψ⟩|²` and `|⟨0N0|ψ⟩|²`.
    pub alpha_extreme: f64,
    pub beta_extreme: f64,
    /// Overlap with `(|N00⟩ + e^{iθ}|0N0⟩)/√2`, maximized over `θ`.
    pub noon_overlap: f64,
}

/// Requires a state over the flow modes `α, β, γ`.
pub fn flow_weights(state: &PureState) -> Result<FlowWeights> {
    let b = state.basis();
    if b.modes().labels() != FLOW_LABELS {
        return Err(Error::config(
            "flow weights need a state over the flow modes",
        ));
    }
    let (mut am, mut bm) = (0.0, 0.0);
    for (s, a) in b.states().zip(state.amplitudes().iter()) {
        let p = a.norm_sqr();
        if s[0] > s[1] {
            am += p;
        } else if s[1] > s[0] {
            bm += p;
        }
    }
    let n = b.num_particles() as u8;
    let a = state.amplitude_of(&[n, 0, 0]).norm();
    let c = state.amplitude_of(&[0, n, 0]).norm();
    Ok(FlowWeights {
        alpha_majority: am,
        beta_majority: bm,
        alpha_extreme: a * a,
        beta_extreme: c * c,
        noon_overlap: 0.5 * (a + c).powi(2),
    })
}

impl RotatingModel for ThreeSiteParams {
    fn parameter_name(&self) -> &'static str {
        "phi"
    }

    fn rotation(&self) -> f64 {
        self.phase
    }

    fn with_rotation(&self, value: f64) -> Self {
        Self {
            phase: value,
            ..*self
        }
    }

    fn hamiltonian(&self) -> Result<ManyBodyOperator> {
        three_site_site_basis(self)
    }

    fn energy_unit(&self) -> EnergyUnit {
        EnergyUnit::Tunneling
    }

    fn num_particles(&self) -> usize {
        self.num_particles
    }
}

/// [`ThreeSiteParams`] diagonalized in the flow basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeSiteFlow(pub ThreeSiteParams);

impl RotatingModel for ThreeSiteFlow {
    fn parameter_name(&self) -> &'static str {
        "phi"
    }

    fn rotation(&self) -> f64 {
        self.0.phase
    }

    fn with_rotation(&self, value: f64) -> Self {
        ThreeSiteFlow(self.0.with_rotation(value))
    }

    fn hamiltonian(&self) -> Result<ManyBodyOperator> {
        three_site_flow_basis(&self.0)
    }

    fn energy_unit(&self) -> EnergyUnit {
        EnergyUnit::Tunneling
    }

    fn num_particles(&self) -> usize {
        self.0.num_particles
    }
}
