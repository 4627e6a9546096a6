use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{FockBasis, ManyBodyOperator, ModeSet};

/// Phase generator `G = Σ_m w_m n̂_m`, diagonal in every Fock basis and
/// therefore defined on all particle-number sectors at once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseGenerator {
    /// Number of particles in one mode.
    ModeNumber(i64),
    /// `L̂ = Σ k n̂_k`, using each mode label as its weight.
    AngularMomentum,
    /// Explicit `(label, weight)` pairs; unlisted modes weigh zero.
    Weights(Vec<(i64, f64)>),
}

impl PhaseGenerator {
    /// `n̂_b` for the two-mode states, mode label 1.
    pub fn second_mode() -> Self {
        PhaseGenerator::ModeNumber(1)
    }

    pub fn weight(&self, label: i64) -> f64 {
        match self {
            PhaseGenerator::ModeNumber(m) => f64::from(u8::from(*m == label)),
            PhaseGenerator::AngularMomentum => label as f64,
            PhaseGenerator::Weights(w) => w.iter().find(|(l, _)| *l == label).map_or(0.0, |p| p.1),
        }
    }

    pub fn mode_weights(&self, modes: &ModeSet) -> Vec<f64> {
        modes.labels().iter().map(|&l| self.weight(l)).collect()
    }

    /// Eigenvalue of `G` on every basis state.
    pub fn diagonal(&self, basis: &FockBasis) -> Vec<f64> {
        let w = self.mode_weights(basis.modes());
        basis
            .states()
            .map(|s| s.iter().zip(&w).map(|(&n, &x)| n as f64 * x).sum())
            .collect()
    }

    pub fn operator(&self, basis: std::sync::Arc<FockBasis>) -> ManyBodyOperator {
        let d = self.diagonal(&basis);
        ManyBodyOperator::diagonal(basis, &d)
    }

    pub fn tag(&self) -> String {
        self.to_string()
    }
}

/// `L` for total angular momentum, `n:<label>` (or `n_<label>`) for the
/// number in one mode.
impl FromStr for PhaseGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "L" {
            return Ok(PhaseGenerator::AngularMomentum);
        }
        let label = s
            .strip_prefix("n:")
            .or_else(|| s.strip_prefix("n_"))
            .ok_or_else(|| Error::config(format!("generator must be L or n:<label>, got {s:?}")))?;
        label
            .parse::<i64>()
            .map(PhaseGenerator::ModeNumber)
            .map_err(|e| Error::config(format!("bad generator mode label {label:?}: {e}")))
    }
}

impl fmt::Display for PhaseGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseGenerator::ModeNumber(m) => write!(f, "n_{m}"),
            PhaseGenerator::AngularMomentum => f.write_str("L"),
            PhaseGenerator::Weights(w) => {
                f.write_str("sum")?;
                for (l, x) in w {
                    write!(f, "_{x}*n_{l}")?;
                }
                Ok(())
            }
        }
    }
}
