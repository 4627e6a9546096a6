use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::evolve::Propagator;
use crate::error::{Error, Result};
use crate::fockspace::PureState;
use crate::models::RotatingModel;

pub const DEFAULT_MAX_PHASE_STEP: f64 = 0.1;
pub const DEFAULT_ADIABATICITY_FLOOR: f64 = 0.9;

/// Piecewise-linear path of the rotation control. Each segment moves the
/// control from the previous value to `target` over `duration`; a zero
/// duration is an instantaneous quench.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RampSchedule {
    pub start: f64,
    pub segments: Vec<(f64, f64)>,
    /// Upper bound on `(E_max − E_min)·dt` per sub-step.
    pub max_phase_step: f64,
}

impl RampSchedule {
    pub fn new(start: f64, segments: Vec<(f64, f64)>) -> Self {
        Self {
            start,
            segments,
            max_phase_step: DEFAULT_MAX_PHASE_STEP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::config("ramp schedule has no segments"));
        }
        if self
            .segments
            .iter()
            .any(|&(x, d)| !x.is_finite() || !(d >= 0.0) || !d.is_finite())
        {
            return Err(Error::config(
                "ramp segments need finite targets and non-negative durations",
            ));
        }
        if !(self.max_phase_step > 0.0) {
            return Err(Error::config("max phase step must be positive"));
        }
        Ok(())
    }

    pub fn end(&self) -> f64 {
        self.segments.last().map_or(self.start, |s| s.0)
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.1).sum()
    }
}

/// Worst and final overlap with the instantaneous ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticityReport {
    pub min_overlap: f64,
    pub final_overlap: f64,
    pub steps: usize,
    /// `min_overlap` fell below the configured floor.
    pub warning: bool,
}

/// Sub-step plan: `(control at midpoint, dt)`.
fn plan<M: RotatingModel>(model: &M, schedule: &RampSchedule) -> Result<Vec<(f64, f64)>> {
    schedule.validate()?;
    let mut out = Vec::new();
    let mut from = schedule.start;
    for &(to, duration) in &schedule.segments {
        if duration == 0.0 {
            from = to;
            continue;
        }
        let width = [from, to]
            .iter()
            .map(|&x| {
                model
                    .with_rotation(x)
                    .hamiltonian()
                    .map(|h| Propagator::new(&h).spectral_width())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let steps = ((width * duration / schedule.max_phase_step).ceil() as usize).max(1);
        let dt = duration / steps as f64;
        for s in 0..steps {
            let mid = from + (to - from) * (s as f64 + 0.5) / steps as f64;
            out.push((mid, dt));
        }
        from = to;
    }
    Ok(out)
}

/// Evolves through the schedule with the Hamiltonian frozen at each
/// sub-step midpoint, tracking the overlap with that Hamiltonian's ground
/// state after every sub-step.
pub fn ramp_evolve<M: RotatingModel>(
    model: &M,
    schedule: &RampSchedule,
    state: &PureState,
    adiabaticity_floor: f64,
) -> Result<(PureState, AdiabaticityReport)> {
    let steps = plan(model, schedule)?;
    let basis = model
        .with_rotation(schedule.end())
        .hamiltonian()?
        .basis()
        .clone();
    if !basis.same_space(state.basis()) {
        return Err(Error::config(
            "initial state does not match the model basis",
        ));
    }
    let mut psi = state.amplitudes().clone();
    let mut min_overlap: f64 = 1.0;
    let mut last = f64::NAN;
    for &(mid, dt) in &steps {
        let prop = Propagator::new(&model.with_rotation(mid).hamiltonian()?);
        psi = prop.apply_vector(&psi, dt);
        last = prop.ground_vector().dotc(&psi).norm_sqr();
        min_overlap = min_overlap.min(last);
    }
    if steps.is_empty() {
        let g =
            Propagator::new(&model.with_rotation(schedule.end()).hamiltonian()?).ground_vector();
        last = g.dotc(&psi).norm_sqr();
        min_overlap = last;
    }
    let report = AdiabaticityReport {
        min_overlap,
        final_overlap: last,
        steps: steps.len(),
        warning: min_overlap < adiabaticity_floor,
    };
    if report.warning {
        log::warn!("ramp is not adiabatic: ground-state overlap dropped to {min_overlap:.4}");
    }
    Ok((PureState::normalized(basis, psi)?, report))
}

/// The full ramp as one unitary matrix, for reuse across many inputs.
pub fn ramp_propagator<M: RotatingModel>(
    model: &M,
    schedule: &RampSchedule,
) -> Result<DMatrix<Complex64>> {
    let steps = plan(model, schedule)?;
    let dim = model.with_rotation(schedule.start).hamiltonian()?.dim();
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for &(mid, dt) in &steps {
        u = Propagator::new(&model.with_rotation(mid).hamiltonian()?).matrix(dt) * u;
    }
    Ok(u)
}

pub(crate) fn apply_matrix(u: &DMatrix<Complex64>, psi: &DVector<Complex64>) -> DVector<Complex64> {
    u * psi
}
