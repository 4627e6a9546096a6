use rayon::prelude::*;

use super::eigen::{eigensolve_with, EigenConfig};
use crate::error::{Error, Result};
use crate::fockspace::PureState;
use crate::models::RotatingModel;
use crate::EnergyUnit;

/// Lowest levels of a model on a grid of its rotation parameter.
#[derive(Debug, Clone)]
pub struct SpectrumSweep {
    pub parameter: String,
    pub grid: Vec<f64>,
    /// `levels[i]` holds the ascending lowest energies at `grid[i]`.
    pub levels: Vec<Vec<f64>>,
    pub ground_states: Option<Vec<PureState>>,
    pub unit: EnergyUnit,
}

impl SpectrumSweep {
    /// `E_upper − E_lower` at every grid point.
    pub fn gaps(&self, lower: usize, upper: usize) -> Vec<f64> {
        self.levels.iter().map(|l| l[upper] - l[lower]).collect()
    }

    /// Grid index of the smallest `E₁ − E₀` (first on ties).
    pub fn min_gap_index(&self) -> Option<usize> {
        let gaps = self.gaps(0, 1);
        (0..gaps.len()).min_by(|&a, &b| gaps[a].total_cmp(&gaps[b]).then(a.cmp(&b)))
    }
}

/// `count` evenly spaced points from `start` to `stop`, both included.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        stop
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

pub fn sweep<M: RotatingModel>(
    model: &M,
    grid: &[f64],
    k: usize,
    keep_states: bool,
) -> Result<SpectrumSweep> {
    sweep_with(model, grid, k, keep_states, &EigenConfig::default())
}

/// Grid points are diagonalized in parallel; results are placed by index.
pub fn sweep_with<M: RotatingModel>(
    model: &M,
    grid: &[f64],
    k: usize,
    keep_states: bool,
    config: &EigenConfig,
) -> Result<SpectrumSweep> {
    if grid.is_empty() {
        return Err(Error::config("sweep grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::config("sweep grid must be strictly increasing"));
    }
    let name = model.parameter_name();
    let points: Vec<Result<(Vec<f64>, Option<PureState>)>> = grid
        .par_iter()
        .enumerate()
        .map(|(index, &x)| {
            let point = || -> Result<_> {
                let h = model.with_rotation(x).hamiltonian()?;
                let mut e = eigensolve_with(&h, k.min(h.dim()), config)?;
                let gs = keep_states.then(|| e.vectors.swap_remove(0));
                Ok((e.values, gs))
            };
            point().map_err(|e| Error::AtGridPoint {
                parameter: name.to_string(),
                value: x,
                index,
                source: Box::new(e),
            })
        })
        .collect();
    // first failing index wins, independent of scheduling
    let points = points.into_iter().collect::<Result<Vec<_>>>()?;
    let (levels, states): (Vec<_>, Vec<_>) = points.into_iter().unzip();
    Ok(SpectrumSweep {
        parameter: name.to_string(),
        grid: grid.to_vec(),
        levels,
        ground_states: if keep_states {
            states.into_iter().collect()
        } else {
            None
        },
        unit: model.energy_unit(),
    })
}
