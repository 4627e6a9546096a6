use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evolve::Propagator;
use super::ramp::{
    apply_matrix, ramp_evolve, ramp_propagator, AdiabaticityReport, RampSchedule,
    DEFAULT_ADIABATICITY_FLOOR, DEFAULT_MAX_PHASE_STEP,
};
use crate::error::{Error, Result};
use crate::fockspace::{canonicalize_phase, PureState};
use crate::models::RotatingModel;

/// Ramp up to the critical rotation, quench by `shift`, hold, quench back,
/// optionally ramp away from the critical point, then count atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Rotation at which the system starts in its ground state.
    pub initial_rotation: f64,
    /// Segments ending at the critical rotation.
    pub ramp_up: Vec<(f64, f64)>,
    /// Sudden change of the rotation during the hold.
    pub shift: f64,
    /// Segments leaving the critical rotation before readout; empty reads
    /// out at the critical point.
    pub ramp_down: Vec<(f64, f64)>,
    /// Mode labels of the non-rotating and rotating flow states.
    pub readout_modes: (i64, i64),
    pub max_phase_step: f64,
    pub adiabaticity_floor: f64,
}

impl ProtocolConfig {
    pub fn new(
        ramp_up: Vec<(f64, f64)>,
        shift: f64,
        ramp_down: Vec<(f64, f64)>,
        readout_modes: (i64, i64),
    ) -> Self {
        Self {
            initial_rotation: 0.0,
            ramp_up,
            shift,
            ramp_down,
            readout_modes,
            max_phase_step: DEFAULT_MAX_PHASE_STEP,
            adiabaticity_floor: DEFAULT_ADIABATICITY_FLOOR,
        }
    }

    pub fn critical_rotation(&self) -> f64 {
        self.ramp_up.last().map_or(self.initial_rotation, |s| s.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolResult {
    pub hold: f64,
    pub shift: f64,
    /// All atoms in the non-rotating mode.
    pub p_first: f64,
    /// All atoms in the rotating mode.
    pub p_second: f64,
    pub p_other: f64,
    pub adiabaticity: AdiabaticityReport,
}

pub fn gyroscope_protocol<M: RotatingModel>(
    model: &M,
    config: &ProtocolConfig,
    hold: f64,
) -> Result<ProtocolResult> {
    Ok(gyroscope_scan(model, config, &[hold])?.remove(0))
}

/// Shares the ramps and the hold propagator across all hold times.
pub fn gyroscope_scan<M: RotatingModel>(
    model: &M,
    config: &ProtocolConfig,
    holds: &[f64],
) -> Result<Vec<ProtocolResult>> {
    if holds.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::config("hold times must be finite and non-negative"));
    }
    let start = model.with_rotation(config.initial_rotation).hamiltonian()?;
    let basis = start.basis().clone();
    let modes = basis.modes();
    let (first, second) = (
        modes.require(config.readout_modes.0)?,
        modes.require(config.readout_modes.1)?,
    );
    let n = basis.num_particles() as u8;
    let fock_index = |pos: usize| {
        let mut occ = vec![0u8; modes.len()];
        occ[pos] = n;
        basis
            .rank(&occ)
            .ok_or_else(|| Error::config("readout state missing from the basis"))
    };
    let (i_first, i_second) = (fock_index(first)?, fock_index(second)?);

    let mut psi0 = Propagator::new(&start).ground_vector();
    canonicalize_phase(&mut psi0);
    let psi0 = PureState::normalized(basis.clone(), psi0)?;

    let critical = config.critical_rotation();
    let (psi_c, report) = if config.ramp_up.is_empty() {
        let report = AdiabaticityReport {
            min_overlap: 1.0,
            final_overlap: 1.0,
            steps: 0,
            warning: false,
        };
        (psi0, report)
    } else {
        let up = RampSchedule {
            start: config.initial_rotation,
            segments: config.ramp_up.clone(),
            max_phase_step: config.max_phase_step,
        };
        ramp_evolve(model, &up, &psi0, config.adiabaticity_floor)?
    };

    let hold_prop = Propagator::new(&model.with_rotation(critical + config.shift).hamiltonian()?);
    let down: DMatrix<Complex64> = if config.ramp_down.is_empty() {
        DMatrix::identity(basis.dim(), basis.dim())
    } else {
        ramp_propagator(
            model,
            &RampSchedule {
                start: critical,
                segments: config.ramp_down.clone(),
                max_phase_step: config.max_phase_step,
            },
        )?
    };

    let results = holds
        .par_iter()
        .map(|&t| {
            let f = apply_matrix(&down, &hold_prop.apply_vector(psi_c.amplitudes(), t));
            let p_first = f[i_first].norm_sqr();
            let p_second = if i_second == i_first {
                0.0
            } else {
                f[i_second].norm_sqr()
            };
            ProtocolResult {
                hold: t,
                shift: config.shift,
                p_first,
                p_second,
                p_other: (f.norm_squared() - p_first - p_second).max(0.0),
                adiabaticity: report,
            }
        })
        .collect();
    Ok(results)
}

/// Dominant angular frequency of a sampled signal: the frequency on
/// `[omega_min, omega_max]` whose least-squares sinusoid (with offset)
/// explains the most variance, refined by golden section around the best
/// grid point.
pub fn fringe_frequency(
    times: &[f64],
    signal: &[f64],
    omega_min: f64,
    omega_max: f64,
) -> Result<f64> {
    if times.len() != signal.len() || times.len() < 3 {
        return Err(Error::config(
            "fringe fit needs at least three matching samples",
        ));
    }
    if !(0.0 <= omega_min && omega_min < omega_max) {
        return Err(Error::config(
            "frequency window must satisfy 0 <= min < max",
        ));
    }
    let len = signal.len() as f64;
    let mean = signal.iter().sum::<f64>() / len;
    let power = |w: f64| {
        let (mut mc, mut ms) = (0.0, 0.0);
        for &t in times {
            let (s, c) = (w * t).sin_cos();
            mc += c;
            ms += s;
        }
        let (mc, ms) = (mc / len, ms / len);
        let (mut scc, mut sss, mut scs, mut syc, mut sys) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&t, &p) in times.iter().zip(signal) {
            let (s, c) = (w * t).sin_cos();
            let (c, s, y) = (c - mc, s - ms, p - mean);
            scc += c * c;
            sss += s * s;
            scs += c * s;
            syc += y * c;
            sys += y * s;
        }
        let det = scc * sss - scs * scs;
        if det <= 1e-12 * (scc * sss).max(f64::MIN_POSITIVE) {
            return 0.0;
        }
        let a = (sss * syc - scs * sys) / det;
        let b = (scc * sys - scs * syc) / det;
        a * syc + b * sys
    };
    let count = 4000;
    let step = (omega_max - omega_min) / (count - 1) as f64;
    let grid: Vec<f64> = (0..count).map(|i| omega_min + step * i as f64).collect();
    let best = (0..count)
        .max_by(|&a, &b| power(grid[a]).total_cmp(&power(grid[b])).then(b.cmp(&a)))
        .expect("non-empty grid");
    let (mut a, mut b) = (
        grid[best.saturating_sub(1)],
        grid[(best + 1).min(count - 1)],
    );
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    for _ in 0..60 {
        let c = b - INV_PHI * (b - a);
        let d = a + INV_PHI * (b - a);
        if power(c) > power(d) {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(0.5 * (a + b))
}
