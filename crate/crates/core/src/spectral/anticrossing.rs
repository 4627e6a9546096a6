use serde::Serialize;

use super::eigen::{dense_lowest, eigensolve_with, EigenConfig, DEGENERACY_TOLERANCE};
use super::sweep::{linspace, sweep_with};
use crate::error::{Error, Result};
use crate::models::RotatingModel;
use crate::Complex64;

const INV_PHI: f64 = 0.618_033_988_749_894_8;
pub const DEFAULT_COARSE_POINTS: usize = 41;

/// Minimum of `E₁ − E₀` inside a bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AntiCrossing {
    pub location: f64,
    pub gap: f64,
    /// Final golden-section bracket.
    pub bracket: (f64, f64),
    /// The bracket shrank below the requested tolerance.
    pub converged: bool,
    /// The minimum gap exceeds the degeneracy tolerance (an avoided rather
    /// than a true crossing).
    pub avoided: bool,
}

pub fn find_anticrossing<M: RotatingModel>(
    model: &M,
    bracket: (f64, f64),
    tol: f64,
) -> Result<AntiCrossing> {
    find_anticrossing_with(
        model,
        bracket,
        tol,
        DEFAULT_COARSE_POINTS,
        &EigenConfig::default(),
    )
}

/// Coarse scan, golden-section refinement of the best interior sample, then
/// (for avoided crossings) a root search on the Hellmann-Feynman slope of the
/// gap to pin the location well below the golden-section resolution.
pub fn find_anticrossing_with<M: RotatingModel>(
    model: &M,
    bracket: (f64, f64),
    tol: f64,
    coarse_points: usize,
    config: &EigenConfig,
) -> Result<AntiCrossing> {
    let (lo, hi) = bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "bracket must satisfy lo < hi".into(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let coarse = linspace(lo, hi, coarse_points.max(3));
    let scan = sweep_with(model, &coarse, 2, false, config)?;
    let gaps = scan.gaps(0, 1);
    let i = scan.min_gap_index().expect("non-empty scan");
    if i == 0 || i == coarse.len() - 1 {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: format!(
                "no interior sample lies below the endpoints (gaps {:.6e}, {:.6e}, minimum at {})",
                gaps[0],
                gaps[coarse.len() - 1],
                coarse[i]
            ),
        });
    }

    let gap_at = |x: f64| -> Result<f64> {
        let h = model.with_rotation(x).hamiltonian()?;
        let e = eigensolve_with(&h, 2, config)?;
        Ok(e.values[1] - e.values[0])
    };

    let mut best = (coarse[i], gaps[i]);
    let (mut a, mut b) = (coarse[i - 1], coarse[i + 1]);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = gap_at(c)?;
    let mut fd = gap_at(d)?;
    for (x, f) in [(c, fc), (d, fd)] {
        if f < best.1 {
            best = (x, f);
        }
    }
    let mut iterations = 0;
    while b - a > tol && iterations < 200 {
        iterations += 1;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = gap_at(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = gap_at(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    let converged = b - a <= tol;
    let avoided = best.1 > DEGENERACY_TOLERANCE;

    if avoided {
        // The gap is flat to rounding near its minimum, so the value search
        // can settle off-center; widen until the slope changes sign.
        let spacing = coarse[1] - coarse[0];
        let mut w = (b - a).max(1e-7 * best.0.abs().max(1.0));
        while w <= spacing {
            if let Some(polished) = slope_root(model, (best.0 - w, best.0 + w), config)? {
                let g = gap_at(polished)?;
                let slack = 1e-12 * best.1.abs().max(1.0);
                if g <= best.1 + slack {
                    best = (polished, g.min(best.1));
                }
                break;
            }
            w *= 10.0;
        }
    }

    Ok(AntiCrossing {
        location: best.0,
        gap: best.1,
        bracket: (a, b),
        converged,
        avoided,
    })
}

pub fn find_first_anticrossing<M: RotatingModel>(
    model: &M,
    bracket: (f64, f64),
    tol: f64,
) -> Result<AntiCrossing> {
    find_first_anticrossing_with(
        model,
        bracket,
        tol,
        DEFAULT_COARSE_POINTS,
        &EigenConfig::default(),
    )
}

/// Like [`find_anticrossing_with`], but refines the first interior local
/// minimum of the coarse gap scan rather than the lowest one. Useful when the
/// bracket holds a sequence of crossings and the one met first from `lo` is
/// wanted.
pub fn find_first_anticrossing_with<M: RotatingModel>(
    model: &M,
    bracket: (f64, f64),
    tol: f64,
    coarse_points: usize,
    config: &EigenConfig,
) -> Result<AntiCrossing> {
    let (lo, hi) = bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "bracket must satisfy lo < hi".into(),
        });
    }
    let coarse = linspace(lo, hi, coarse_points.max(3));
    let gaps = sweep_with(model, &coarse, 2, false, config)?.gaps(0, 1);
    let i = (1..coarse.len() - 1)
        .find(|&i| gaps[i] < gaps[i - 1] && gaps[i] <= gaps[i + 1])
        .ok_or_else(|| Error::Bracket {
            lo,
            hi,
            reason: "the gap has no interior local minimum".into(),
        })?;
    find_anticrossing_with(
        model,
        (coarse[i - 1], coarse[i + 1]),
        tol,
        coarse_points,
        config,
    )
}

/// `d(E₁ − E₀)/dx` from first-order perturbation theory with a centered
/// finite-difference `∂H/∂x`. `None` when `E₁` is degenerate with `E₂`.
fn gap_slope<M: RotatingModel>(model: &M, x: f64, config: &EigenConfig) -> Result<Option<f64>> {
    let h = model.with_rotation(x).hamiltonian()?;
    if h.dim() < 2 {
        return Ok(None);
    }
    let k = h.dim().min(3);
    let (values, vectors) = if h.dim() <= config.dense_threshold {
        dense_lowest(&h, k)
    } else {
        let e = eigensolve_with(&h, k, config)?;
        (
            e.values,
            e.vectors.into_iter().map(|s| s.into_amplitudes()).collect(),
        )
    };
    if k == 3 && values[2] - values[1] < 1e-8 {
        return Ok(None);
    }
    let step = 1e-5 * x.abs().max(1.0);
    let plus = model.with_rotation(x + step).hamiltonian()?;
    let minus = model.with_rotation(x - step).hamiltonian()?;
    let dh = plus.add(&minus.scaled(Complex64::new(-1.0, 0.0)))?;
    let slope = (dh.expectation(&vectors[1]) - dh.expectation(&vectors[0])) / (2.0 * step);
    Ok(Some(slope))
}

/// Illinois regula falsi on the gap slope.
fn slope_root<M: RotatingModel>(
    model: &M,
    (mut a, mut b): (f64, f64),
    config: &EigenConfig,
) -> Result<Option<f64>> {
    let (Some(mut sa), Some(mut sb)) =
        (gap_slope(model, a, config)?, gap_slope(model, b, config)?)
    else {
        return Ok(None);
    };
    if !(sa < 0.0 && sb > 0.0) {
        return Ok(None);
    }
    let resolution = 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
    let mut side = 0i8;
    for _ in 0..100 {
        if b - a <= resolution {
            break;
        }
        let mut m = (a * sb - b * sa) / (sb - sa);
        if !(m > a && m < b) {
            m = 0.5 * (a + b);
        }
        match gap_slope(model, m, config)? {
            Some(s) if s < 0.0 => {
                a = m;
                sa = s;
                if side == -1 {
                    sb *= 0.5;
                }
                side = -1;
            }
            Some(s) if s > 0.0 => {
                b = m;
                sb = s;
                if side == 1 {
                    sa *= 0.5;
                }
                side = 1;
            }
            Some(_) => return Ok(Some(m)),
            None => return Ok(None),
        }
    }
    Ok(Some(if -sa < sb { a } else { b }))
}
