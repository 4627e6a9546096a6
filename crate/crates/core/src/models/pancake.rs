use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::RotatingModel;
use crate::error::{Error, Result};
use crate::fockspace::{
    BasisConfig, FockBasis, HermitianBuilder, LadderMonomial, ManyBodyOperator, ModeSet, WeightCap,
};
use crate::EnergyUnit;

/// Rotating pancake trap restricted to the lowest Landau level, in units of
/// the radial trap quantum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PancakeParams {
    pub num_particles: usize,
    /// Dimensionless contact interaction g.
    pub interaction: f64,
    /// Quadrupolar trap asymmetry A.
    pub asymmetry: f64,
    /// Rotation rate Ω in units of ω_xy.
    pub rotation: f64,
    /// Largest single-particle angular momentum kept.
    pub m_max: usize,
    /// Optional cap on total angular momentum Σ m n_m.
    pub l_max: Option<usize>,
}

impl PancakeParams {
    /// Modes `0..=N` and no angular-momentum cap.
    pub fn new(num_particles: usize, interaction: f64, asymmetry: f64, rotation: f64) -> Self {
        Self {
            num_particles,
            interaction,
            asymmetry,
            rotation,
            m_max: num_particles,
            l_max: None,
        }
    }

    pub fn with_cutoff(self, m_max: usize, l_max: Option<usize>) -> Self {
        Self {
            m_max,
            l_max,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.asymmetry >= 0.0) || !self.asymmetry.is_finite() {
            return Err(Error::config(format!(
                "asymmetry must be non-negative, got {}",
                self.asymmetry
            )));
        }
        if !self.interaction.is_finite() || !self.rotation.is_finite() {
            return Err(Error::config("interaction and rotation must be finite"));
        }
        if self.m_max < self.num_particles {
            log::warn!(
                "pancake cutoff m_max={} is below N={}; the L=N sector is truncated",
                self.m_max,
                self.num_particles
            );
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<Arc<FockBasis>> {
        let modes = ModeSet::sequential(self.m_max + 1)?;
        let cap = self.l_max.map(|l| WeightCap {
            weights: (0..=self.m_max as u64).collect(),
            max: l as u64,
        });
        Ok(Arc::new(FockBasis::build(
            self.num_particles,
            modes,
            cap,
            &BasisConfig::default(),
        )?))
    }
}

/// Critical rotation rate `1 − gN/(8π)` where the vortex-free and vortex
/// branches become degenerate.
pub fn critical_rotation_pancake(num_particles: usize, interaction: f64) -> f64 {
    1.0 - interaction * num_particles as f64 / (8.0 * PI)
}

/// `ln[(m₁+m₂)! / (2^{m₁+m₂} √(m₁! m₂! n₁! n₂!))]` with `ln_fact[k] = ln k!`.
fn ln_interaction_weight(ln_fact: &[f64], m1: usize, m2: usize, n1: usize, n2: usize) -> f64 {
    let total = m1 + m2;
    ln_fact[total]
        - total as f64 * std::f64::consts::LN_2
        - 0.5 * (ln_fact[m1] + ln_fact[m2] + ln_fact[n1] + ln_fact[n2])
}

/// Lowest-Landau-level Hamiltonian:
/// `Σ_m [1 + (1−Ω)m] n_m + (A/2) Σ_m √((m+1)(m+2)) a†_m a_{m+2} + h.c.
///  + (g/4π) Σ W(m₁,m₂,n₁,n₂) a†_{m₁}a†_{m₂}a_{n₁}a_{n₂}` with `m₁+m₂ = n₁+n₂`.
pub fn pancake_hamiltonian(p: &PancakeParams) -> Result<ManyBodyOperator> {
    p.validate()?;
    let basis = p.basis()?;
    let mm = p.m_max;
    let ln_fact = super::rotation::ln_factorials(2 * mm);
    let mut h = HermitianBuilder::new(basis);

    for m in 0..=mm {
        h.push_full(LadderMonomial::number(
            1.0 + (1.0 - p.rotation) * m as f64,
            m as i64,
        ));
    }
    if p.asymmetry != 0.0 {
        for m in 0..mm.saturating_sub(1) {
            let c = 0.5 * p.asymmetry * (((m + 1) * (m + 2)) as f64).sqrt();
            h.push_raise(LadderMonomial::hop(c, m as i64, m as i64 + 2));
        }
    }
    if p.interaction != 0.0 {
        let g = p.interaction / (4.0 * PI);
        for m1 in 0..=mm {
            for m2 in 0..=mm {
                let total = m1 + m2;
                for n1 in total.saturating_sub(mm)..=total.min(mm) {
                    let n2 = total - n1;
                    let c = g * ln_interaction_weight(&ln_fact, m1, m2, n1, n2).exp();
                    h.push_full(LadderMonomial::pair(
                        c, m1 as i64, m2 as i64, n1 as i64, n2 as i64,
                    ));
                }
            }
        }
    }
    h.build()
}

impl RotatingModel for PancakeParams {
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
        pancake_hamiltonian(self)
    }

    fn energy_unit(&self) -> EnergyUnit {
        EnergyUnit::TrapQuantum
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
    fn critical_rotation_values() {
        assert_eq!(critical_rotation_pancake(7, 0.0), 1.0);
        assert_relative_eq!(
            critical_rotation_pancake(12, 0.5),
            0.761_267_6,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            critical_rotation_pancake(2, 0.5),
            0.960_211_3,
            epsilon = 1e-6
        );
    }

    #[test]
    fn noninteracting_symmetric_trap_is_diagonal_in_l() {
        let p = PancakeParams::new(3, 0.0, 0.0, 0.8);
        let h = pancake_hamiltonian(&p).unwrap();
        assert!(h.is_diagonal());
        let b = h.basis();
        for (i, d) in h.diagonal_entries().iter().enumerate() {
            let l = b.label_weight(i) as f64;
            assert_relative_eq!(d.re, 3.0 + 0.2 * l, epsilon = 1e-13);
        }
    }

    #[test]
    fn two_body_contact_energy_in_l0() {
        // ⟨2,0,…|H|2,0,…⟩ = N + (g/4π)·2 for two atoms in m=0
        let p = PancakeParams::new(2, 0.5, 0.0, 0.9);
        let h = pancake_hamiltonian(&p).unwrap();
        let i = h.basis().rank(&[2, 0, 0]).unwrap();
        assert_relative_eq!(
            h.get(i, i).re,
            2.0 + 0.5 / (4.0 * PI) * 2.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn asymmetry_lowering_side_is_hermitian_conjugate() {
        let p = PancakeParams::new(1, 0.0, 0.2, 1.0).with_cutoff(4, None);
        let h = pancake_hamiltonian(&p).unwrap();
        let b = h.basis();
        let one = |m: usize| {
            let mut o = vec![0u8; 5];
            o[m] = 1;
            b.rank(&o).unwrap()
        };
        for m in 0..3 {
            let up = h.get(one(m), one(m + 2)).re;
            let down = h.get(one(m + 2), one(m)).re;
            assert_relative_eq!(
                up,
                0.1 * (((m + 1) * (m + 2)) as f64).sqrt(),
                epsilon = 1e-14
            );
            assert_relative_eq!(up, down, epsilon = 1e-14);
        }
    }

    #[test]
    fn l_cap_restricts_basis() {
        let p = PancakeParams::new(4, 0.5, 0.01, 0.9).with_cutoff(6, Some(4));
        let b = p.basis().unwrap();
        assert!((0..b.dim()).all(|i| b.label_weight(i) <= 4));
        // partitions of 0..=4 into at most 4 parts: 1+1+2+3+5
        assert_eq!(b.dim(), 12);
    }
}
