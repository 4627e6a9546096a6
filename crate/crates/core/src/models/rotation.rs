use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{natural_orbitals, FockBasis, PureState};

pub const UNITARITY_TOLERANCE: f64 = 1e-12;

/// Discrete Fourier transform taking site modes `(a, b, c)` to the flow modes
/// `(α, β, γ)`: row `j` holds the site coefficients of flow annihilator `j`.
pub fn quasi_momentum_unitary() -> DMatrix<Complex64> {
    let s = 1.0 / 3f64.sqrt();
    let w = |k: i64| Complex64::from_polar(s, 2.0 * PI * k as f64 / 3.0);
    DMatrix::from_row_slice(
        3,
        3,
        &[w(0), w(0), w(0), w(0), w(1), w(2), w(0), w(-1), w(-2)],
    )
}

pub fn check_unitary(u: &DMatrix<Complex64>) -> Result<()> {
    if !u.is_square() {
        return Err(Error::config("mode transformation must be square"));
    }
    let n = u.nrows();
    let defect = (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if defect > UNITARITY_TOLERANCE {
        return Err(Error::config(format!(
            "mode transformation is not unitary (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// Re-expresses a many-body state in new modes `b_j` related to the old ones
/// by `a†_i = Σ_j u_{ji} b†_j`, so a single particle's amplitudes map as
/// `u · amplitudes`. The result lives on the full `N`-particle basis over the
/// same mode set.
pub fn mode_rotation(state: &PureState, u: &DMatrix<Complex64>) -> Result<PureState> {
    let basis = state.basis();
    let target = if basis.cap().is_none() {
        basis.clone()
    } else {
        Arc::new(FockBasis::new(
            basis.num_particles(),
            basis.modes().clone(),
        )?)
    };
    mode_rotation_into(state, u, target)
}

/// [`mode_rotation`] onto an explicit target basis (same `N` and mode count;
/// labels may differ, e.g. site labels in, quasi-momentum labels out).
pub fn mode_rotation_into(
    state: &PureState,
    u: &DMatrix<Complex64>,
    target: Arc<FockBasis>,
) -> Result<PureState> {
    let source = state.basis();
    let m = source.num_modes();
    check_unitary(u)?;
    if u.nrows() != m || target.num_modes() != m {
        return Err(Error::config(format!(
            "mode transformation of size {} for {m} modes",
            u.nrows()
        )));
    }
    if target.num_particles() != source.num_particles() || target.cap().is_some() {
        return Err(Error::config(
            "target must be the full basis with the same particle number",
        ));
    }
    let n = source.num_particles();
    let ln_fact = ln_factorials(n);

    // compositions of k particles over m target modes, for k = 0..=n
    let compositions: Vec<Vec<Vec<u8>>> = (0..=n)
        .map(|k| {
            FockBasis::new(k, target.modes().clone())
                .map(|b| b.states().map(<[u8]>::to_vec).collect())
        })
        .collect::<Result<_>>()?;

    let mut out = DVector::<Complex64>::zeros(target.dim());
    let mut occ = vec![0u8; m];
    for (col, src) in source.states().enumerate() {
        let amp = state.amplitudes()[col];
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let mut ctx = Expansion {
            u,
            src,
            compositions: &compositions,
            ln_fact: &ln_fact,
            target: &target,
            out: &mut out,
        };
        ctx.expand(0, &mut occ, amp);
    }
    PureState::normalized(target, out)
}

struct Expansion<'a> {
    u: &'a DMatrix<Complex64>,
    src: &'a [u8],
    compositions: &'a [Vec<Vec<u8>>],
    ln_fact: &'a [f64],
    target: &'a FockBasis,
    out: &'a mut DVector<Complex64>,
}

impl Expansion<'_> {
    fn expand(&mut self, mode: usize, occ: &mut [u8], coeff: Complex64) {
        if mode == self.src.len() {
            let norm: f64 = occ
                .iter()
                .map(|&k| 0.5 * self.ln_fact[k as usize])
                .sum::<f64>();
            let row = self.target.rank(occ).expect("full target basis");
            self.out[row] += coeff * norm.exp();
            return;
        }
        let n_i = self.src[mode] as usize;
        let base = 0.5 * self.ln_fact[n_i];
        for comp in &self.compositions[n_i] {
            let mut c = coeff * base.exp();
            let mut zero = false;
            for (j, &k) in comp.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let uji = self.u[(j, mode)];
                if uji.norm_sqr() == 0.0 {
                    zero = true;
                    break;
                }
                c *= uji.powu(k as u32) / self.ln_fact[k as usize].exp();
            }
            if zero {
                continue;
            }
            for (o, &k) in occ.iter_mut().zip(comp) {
                *o += k;
            }
            self.expand(mode + 1, occ, c);
            for (o, &k) in occ.iter_mut().zip(comp) {
                *o -= k;
            }
        }
    }
}

/// Number distribution over the two most occupied natural orbitals.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OrbitalPairDistribution {
    /// Natural occupations of the two orbitals.
    pub occupations: [f64; 2],
    /// `probabilities[n]`: `n` atoms in the first orbital, `N − n` in the second.
    pub probabilities: Vec<f64>,
    /// Total weight of the two-orbital subspace.
    pub weight: f64,
}

impl OrbitalPairDistribution {
    /// Mean and variance of `n` under the renormalized distribution.
    pub fn moments(&self) -> (f64, f64) {
        let w: f64 = self.probabilities.iter().sum();
        let mean = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum::<f64>()
            / w;
        let var = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64 - mean).powi(2) * p)
            .sum::<f64>()
            / w;
        (mean, var)
    }
}

/// Re-expresses the state in its natural orbitals and reads off the joint
/// number distribution of the two dominant ones.
pub fn dominant_pair_distribution(state: &PureState) -> Result<OrbitalPairDistribution> {
    let basis = state.basis();
    let m = basis.num_modes();
    if m < 2 {
        return Err(Error::config("need at least two modes"));
    }
    let (occ, v) = natural_orbitals(state);
    let n = basis.num_particles();
    let ln_fact = ln_factorials(n);
    let fact = |k: usize| ln_fact[k].exp();
    // Only targets with all atoms in orbitals 0 and 1 are needed: each source
    // mode splits its atoms between the two, tracked by the count in orbital 0.
    let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut poly = Vec::with_capacity(n + 1);
    let mut next = Vec::with_capacity(n + 1);
    for (col, src) in basis.states().enumerate() {
        let c = state.amplitudes()[col];
        if c.norm_sqr() == 0.0 {
            continue;
        }
        poly.clear();
        poly.push(c);
        for (i, &ni) in src.iter().enumerate() {
            let ni = ni as usize;
            if ni == 0 {
                continue;
            }
            let (u0, u1) = (v[(i, 0)], v[(i, 1)]);
            next.clear();
            next.resize(poly.len() + ni, Complex64::new(0.0, 0.0));
            let scale = fact(ni).sqrt();
            for k in 0..=ni {
                let w = u0.powu(k as u32) * u1.powu((ni - k) as u32) * scale
                    / (fact(k) * fact(ni - k));
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                for (j, &p) in poly.iter().enumerate() {
                    next[j + k] += p * w;
                }
            }
            std::mem::swap(&mut poly, &mut next);
        }
        for (k, &p) in poly.iter().enumerate() {
            amps[k] += p * (fact(k) * fact(n - k)).sqrt();
        }
    }
    let probabilities: Vec<f64> = amps.iter().map(|a| a.norm_sqr()).collect();
    Ok(OrbitalPairDistribution {
        occupations: [occ[0], occ[1]],
        weight: probabilities.iter().sum(),
        probabilities,
    })
}

/// `ln k!` for `k = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    v.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        v.push(acc);
    }
    v
}
