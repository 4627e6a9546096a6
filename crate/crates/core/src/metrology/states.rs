use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{FockBasis, ModeSet, PureState};
use crate::models::ln_factorials;

fn two_mode_basis(n: usize) -> Result<Arc<FockBasis>> {
    Ok(Arc::new(FockBasis::new(n, ModeSet::sequential(2)?)?))
}

fn require_atoms(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::config("probe states need at least one particle"));
    }
    Ok(())
}

/// `(|N,0⟩ + |0,N⟩)/√2` over two modes.
pub fn noon_state(n: usize) -> Result<PureState> {
    require_atoms(n)?;
    let b = two_mode_basis(n)?;
    noon_in(b, 0, 1)
}

/// NOON superposition of all particles in mode `first` or all in `second`,
/// over an arbitrary full basis.
pub fn noon_in(basis: Arc<FockBasis>, first: i64, second: i64) -> Result<PureState> {
    let n = basis.num_particles();
    require_atoms(n)?;
    let modes = basis.modes();
    let (i, j) = (modes.require(first)?, modes.require(second)?);
    if i == j {
        return Err(Error::config("NOON modes must differ"));
    }
    let mut amps = DVector::zeros(basis.dim());
    let h = Complex64::new(0.5f64.sqrt(), 0.0);
    for p in [i, j] {
        let mut occ = vec![0u8; modes.len()];
        occ[p] = n as u8;
        let r = basis
            .rank(&occ)
            .ok_or_else(|| Error::config("NOON component missing from the basis"))?;
        amps[r] = h;
    }
    PureState::new(basis, amps)
}

/// Dual Fock state `|N,N⟩` after a 50:50 beam splitter:
/// `Σ_m C_m |2m, 2N−2m⟩`, `C_m = √((2m)!(2N−2m)!) / (2^N m!(N−m)!)`.
pub fn bat_state(n: usize) -> Result<PureState> {
    require_atoms(n)?;
    let b = two_mode_basis(2 * n)?;
    let lf = ln_factorials(2 * n);
    let mut amps = DVector::zeros(b.dim());
    for m in 0..=n {
        let ln_c = 0.5 * (lf[2 * m] + lf[2 * n - 2 * m])
            - n as f64 * std::f64::consts::LN_2
            - lf[m]
            - lf[n - m];
        let r = b
            .rank(&[(2 * m) as u8, (2 * n - 2 * m) as u8])
            .expect("two-mode basis");
        amps[r] = Complex64::new(ln_c.exp(), 0.0);
    }
    PureState::new(b, amps)
}

/// `N` independent particles each in `(|a⟩ + |b⟩)/√2`.
pub fn unentangled_state(n: usize) -> Result<PureState> {
    require_atoms(n)?;
    let b = two_mode_basis(n)?;
    let lf = ln_factorials(n);
    let amps = DVector::from_iterator(
        b.dim(),
        b.states().map(|s| {
            let k = s[0] as usize;
            let ln = 0.5 * (lf[n] - lf[k] - lf[n - k]) - 0.5 * n as f64 * std::f64::consts::LN_2;
            Complex64::new(ln.exp(), 0.0)
        }),
    );
    PureState::new(b, amps)
}
