use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::RotatingModel;
use crate::error::{Error, Result};
use crate::fockspace::{FockBasis, HermitianBuilder, LadderMonomial, ManyBodyOperator, ModeSet};
use crate::EnergyUnit;

pub const DEFAULT_K_MIN: i64 = -5;
pub const DEFAULT_K_MAX: i64 = 6;

/// One-dimensional ring with a delta barrier, in the angular-momentum basis.
/// Energies are in units of `E₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingParams {
    pub num_particles: usize,
    /// Barrier strength b/L.
    pub barrier: f64,
    /// Contact interaction g/L.
    pub interaction: f64,
    /// Rotation phase Ω; the k=0 and k=1 levels cross at Ω = π.
    pub rotation: f64,
    pub k_min: i64,
    pub k_max: i64,
    /// Multiplies the interaction to compensate for the momentum cutoff.
    pub interaction_scale: f64,
}

impl RingParams {
    /// Window `−5..=6` (12 modes, symmetric about k = ½) and no rescaling.
    pub fn new(num_particles: usize, barrier: f64, interaction: f64, rotation: f64) -> Self {
        Self {
            num_particles,
            barrier,
            interaction,
            rotation,
            k_min: DEFAULT_K_MIN,
            k_max: DEFAULT_K_MAX,
            interaction_scale: 1.0,
        }
    }

    pub fn with_window(self, k_min: i64, k_max: i64) -> Self {
        Self {
            k_min,
            k_max,
            ..self
        }
    }

    pub fn with_interaction_scale(self, interaction_scale: f64) -> Self {
        Self {
            interaction_scale,
            ..self
        }
    }

    pub fn num_modes(&self) -> usize {
        (self.k_max - self.k_min + 1).max(0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_min <= 0 && self.k_max >= 1) {
            return Err(Error::config(format!(
                "momentum window {}..{} must contain k=0 and k=1",
                self.k_min, self.k_max
            )));
        }
        for (name, v) in [
            ("barrier", self.barrier),
            ("interaction", self.interaction),
            ("rotation", self.rotation),
            ("interaction_scale", self.interaction_scale),
        ] {
            if !v.is_finite() {
                return Err(Error::config(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<Arc<FockBasis>> {
        Ok(Arc::new(FockBasis::new(
            self.num_particles,
            ModeSet::range(self.k_min, self.k_max)?,
        )?))
    }
}

/// `Σ_k (k − Ω/2π)² n_k + (b/L) Σ a†_{k₁} a_{k₂}
///  + (g/2L) Σ a†_{k₁} a†_{k₂} a_{k₁−q} a_{k₂+q}`, with every term whose modes
/// leave the window dropped.
pub fn ring_hamiltonian(p: &RingParams) -> Result<ManyBodyOperator> {
    p.validate()?;
    let basis = p.basis()?;
    let ks: Vec<i64> = (p.k_min..=p.k_max).collect();
    let shift = p.rotation / (2.0 * PI);
    let mut h = HermitianBuilder::new(basis);

    for &k in &ks {
        let d = k as f64 - shift;
        h.push_full(LadderMonomial::number(d * d, k));
    }
    if p.barrier != 0.0 {
        for &k1 in &ks {
            for &k2 in &ks {
                h.push_full(LadderMonomial::hop(p.barrier, k1, k2));
            }
        }
    }
    let g = 0.5 * p.interaction * p.interaction_scale;
    if g != 0.0 {
        let inside = |k: i64| (p.k_min..=p.k_max).contains(&k);
        for &k1 in &ks {
            for &k2 in &ks {
                for &k3 in &ks {
                    // k₃ = k₁ − q, so k₂ + q = k₁ + k₂ − k₃
                    let k4 = k1 + k2 - k3;
                    if inside(k4) {
                        h.push_full(LadderMonomial::pair(g, k1, k2, k3, k4));
                    }
                }
            }
        }
    }
    h.build()
}

/// Total angular momentum `L = Σ k n_k` of every basis state.
pub fn angular_momentum_sectors(basis: &FockBasis) -> Vec<i64> {
    (0..basis.dim()).map(|i| basis.label_weight(i)).collect()
}

impl RotatingModel for RingParams {
    fn parameter_name(&self) -> &'static str {
        "omega"
    }

    fn rotation(&self) -> f64 {
        self.rotation
    }

    fn with_rotation(&self, value: f64) -> Self {
        Self {
            rotation: value,
            ..*self
        }
    }

    fn hamiltonian(&self) -> Result<ManyBodyOperator> {
        ring_hamiltonian(self)
    }

    fn energy_unit(&self) -> EnergyUnit {
        EnergyUnit::RingKinetic
    }

    fn num_particles(&self) -> usize {
        self.num_particles
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn free_particle_spectrum_is_parabolic() {
        let p = RingParams::new(1, 0.0, 0.0, 1.3).with_window(-2, 3);
        let h = ring_hamiltonian(&p).unwrap();
        assert!(h.is_diagonal());
        for (i, d) in h.diagonal_entries().iter().enumerate() {
            let k = h.basis().label_weight(i) as f64;
            assert_relative_eq!(d.re, (k - 1.3 / (2.0 * PI)).powi(2), epsilon = 1e-14);
        }
    }

    #[test]
    fn barrier_couples_every_pair_of_momenta() {
        let p = RingParams::new(1, 0.1, 0.0, 0.0).with_window(-1, 2);
        let d = ring_hamiltonian(&p).unwrap().to_dense();
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    assert_relative_eq!(d[(r, c)].re, 0.1, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn barrier_free_ring_conserves_angular_momentum() {
        let p = RingParams::new(3, 0.0, 2.0, 2.0).with_window(-2, 3);
        let h = ring_hamiltonian(&p).unwrap();
        let l = angular_momentum_sectors(h.basis());
        for (r, c, v) in h.triplets() {
            assert!(l[r] == l[c] || v.norm() == 0.0);
        }
    }

    #[test]
    fn window_must_contain_both_crossing_modes() {
        assert!(ring_hamiltonian(&RingParams::new(1, 0.0, 0.0, 0.0).with_window(1, 3)).is_err());
        assert!(ring_hamiltonian(&RingParams::new(1, 0.0, 0.0, 0.0).with_window(-3, 0)).is_err());
    }

    #[test]
    fn uniform_condensate_mean_field_energy() {
        // N atoms in k=0: E = N(Ω/2π)² + (g/2L)·N(N−1)
        let p = RingParams::new(4, 0.0, 0.3, 0.5).with_window(-1, 2);
        let h = ring_hamiltonian(&p).unwrap();
        let i = h.basis().rank(&[0, 4, 0, 0]).unwrap();
        let s = 0.5 / (2.0 * PI);
        assert_relative_eq!(h.get(i, i).re, 4.0 * s * s + 0.15 * 12.0, epsilon = 1e-13);
    }
}
