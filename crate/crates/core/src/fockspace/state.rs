use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::basis::{FockBasis, ModeSet};
use super::operator::ManyBodyOperator;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;

pub const NORM_TOLERANCE: f64 = 1e-10;

/// Normalized amplitude vector over a Fock basis.
#[derive(Debug, Clone)]
pub struct PureState {
    basis: Arc<FockBasis>,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(basis: Arc<FockBasis>, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidState(format!(
                "{} amplitudes for a basis of dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn normalized(basis: Arc<FockBasis>, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::new(basis, amplitudes.unscale(norm))
    }

    /// The Fock state `|occupation⟩`.
    pub fn fock(basis: Arc<FockBasis>, occupation: &[u8]) -> Result<Self> {
        let i = basis
            .rank(occupation)
            .ok_or_else(|| Error::config(format!("{occupation:?} is not in the basis")))?;
        let mut amps = DVector::zeros(basis.dim());
        amps[i] = Complex64::new(1.0, 0.0);
        Ok(Self {
            basis,
            amplitudes: amps,
        })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude_of(&self, occupation: &[u8]) -> Complex64 {
        self.basis
            .rank(occupation)
            .map_or(Complex64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if !self.basis.same_space(&other.basis) {
            return Err(Error::config("states live on different bases"));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn expectation(&self, op: &ManyBodyOperator) -> Result<f64> {
        if !self.basis.same_space(op.basis()) {
            return Err(Error::config("operator and state live on different bases"));
        }
        Ok(op.expectation(&self.amplitudes))
    }

    /// Multiplies by a global phase so the largest-magnitude amplitude
    /// (first one on ties within 1e−12) is real and positive.
    pub fn with_canonical_phase(mut self) -> Self {
        canonicalize_phase(&mut self.amplitudes);
        self
    }

    /// Probability weight per value of `Σ label·n`, ascending by value.
    pub fn label_weight_distribution(&self) -> Vec<(i64, f64)> {
        let mut acc = std::collections::BTreeMap::new();
        for (i, a) in self.amplitudes.iter().enumerate() {
            *acc.entry(self.basis.label_weight(i)).or_insert(0.0) += a.norm_sqr();
        }
        acc.into_iter().collect()
    }
}

pub(crate) fn canonicalize_phase(v: &mut DVector<Complex64>) {
    let max = v.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|a| a.norm() >= max * (1.0 - 1e-12))
        .expect("maximum exists");
    let phase = v[pivot] / v[pivot].norm();
    let rot = phase.conj();
    v.iter_mut().for_each(|a| *a *= rot);
    v[pivot] = Complex64::new(v[pivot].norm(), 0.0);
}

/// `ρ¹_ij = ⟨a†_i a_j⟩`, indexed by mode position.
pub fn one_body_density_matrix(state: &PureState) -> DMatrix<Complex64> {
    let basis = state.basis();
    let m = basis.num_modes();
    let psi = state.amplitudes();
    let mut rho = DMatrix::zeros(m, m);
    let mut scratch: Vec<u8> = Vec::with_capacity(m);
    for (col, src) in basis.states().enumerate() {
        let a = psi[col];
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for j in 0..m {
            if src[j] == 0 {
                continue;
            }
            for i in 0..m {
                scratch.clear();
                scratch.extend_from_slice(src);
                let f = (src[j] as f64).sqrt();
                scratch[j] -= 1;
                scratch[i] += 1;
                let f = f * (scratch[i] as f64).sqrt();
                if let Some(row) = basis.rank(&scratch) {
                    rho[(i, j)] += psi[row].conj() * a * f;
                }
            }
        }
    }
    rho
}

/// Natural orbitals: occupations (descending) and matching eigenvectors of
/// the one-body density matrix, as columns.
pub fn natural_orbitals(state: &PureState) -> (Vec<f64>, DMatrix<Complex64>) {
    let rho = one_body_density_matrix(state);
    let m = rho.nrows();
    let eig = hermitian_eigen(&rho);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });
    let occ = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(m, m);
    for (dst, &k) in order.iter().enumerate() {
        let mut col: DVector<Complex64> = eig.eigenvectors.column(k).into_owned();
        canonicalize_phase(&mut col);
        vecs.set_column(dst, &col);
    }
    (occ, vecs)
}

/// Applies the mode annihilator `d = Σ_i coeffs_i a_i` to an amplitude vector
/// over an `N`-particle basis, returning the (unnormalized) image over the
/// `N − 1` basis of the same modes.
pub fn apply_annihilator(
    basis: &FockBasis,
    amplitudes: &DVector<Complex64>,
    coeffs: &[Complex64],
) -> Result<(Arc<FockBasis>, DVector<Complex64>)> {
    if basis.num_particles() == 0 {
        return Err(Error::config("cannot annihilate from the vacuum"));
    }
    if basis.cap().is_some() {
        return Err(Error::config(
            "annihilation on a constrained basis is not supported",
        ));
    }
    let target = Arc::new(FockBasis::new(
        basis.num_particles() - 1,
        basis.modes().clone(),
    )?);
    let mut out = DVector::zeros(target.dim());
    let mut scratch: Vec<u8> = Vec::with_capacity(basis.num_modes());
    for (col, src) in basis.states().enumerate() {
        let a = amplitudes[col];
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for (i, &c) in coeffs.iter().enumerate() {
            if src[i] == 0 || c.norm_sqr() == 0.0 {
                continue;
            }
            scratch.clear();
            scratch.extend_from_slice(src);
            scratch[i] -= 1;
            let row = target
                .rank(&scratch)
                .expect("full basis contains every image");
            out[row] += c * a * (src[i] as f64).sqrt();
        }
    }
    Ok((target, out))
}

/// One particle-number block of a [`DensityMatrix`], stored as a factor:
/// `ρ_block = P F F† P†`, where `P` embeds the support rows into the block basis.
#[derive(Debug, Clone)]
pub struct DensitySector {
    basis: Arc<FockBasis>,
    support: Vec<usize>,
    factor: DMatrix<Complex64>,
}

impl DensitySector {
    pub fn new(
        basis: Arc<FockBasis>,
        support: Vec<usize>,
        factor: DMatrix<Complex64>,
    ) -> Result<Self> {
        if factor.nrows() != support.len() {
            return Err(Error::InvalidState(format!(
                "factor has {} rows for a support of {}",
                factor.nrows(),
                support.len()
            )));
        }
        if support.iter().any(|&i| i >= basis.dim()) || support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidState(
                "support must be strictly increasing basis indices".into(),
            ));
        }
        Ok(Self {
            basis,
            support,
            factor,
        })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn num_particles(&self) -> usize {
        self.basis.num_particles()
    }

    /// Basis indices the block is supported on.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn factor(&self) -> &DMatrix<Complex64> {
        &self.factor
    }

    pub fn trace(&self) -> f64 {
        self.factor.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `F F†` on the support rows.
    pub fn support_matrix(&self) -> DMatrix<Complex64> {
        &self.factor * self.factor.adjoint()
    }

    /// The block as a dense matrix over its whole basis.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.basis.dim();
        let s = self.support_matrix();
        let mut out = DMatrix::zeros(d, d);
        for (a, &i) in self.support.iter().enumerate() {
            for (b, &j) in self.support.iter().enumerate() {
                out[(i, j)] = s[(a, b)];
            }
        }
        out
    }
}

/// Hermitian, positive semidefinite, unit-trace state, block-diagonal in
/// particle number.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    sectors: Vec<DensitySector>,
}

impl DensityMatrix {
    /// Sectors must share a mode set and have distinct particle numbers.
    pub fn from_sectors(mut sectors: Vec<DensitySector>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::InvalidState(
                "density matrix needs at least one sector".into(),
            ));
        }
        sectors.sort_by_key(|s| std::cmp::Reverse(s.num_particles()));
        let modes: &ModeSet = sectors[0].basis.modes();
        for w in sectors.windows(2) {
            if w[0].num_particles() == w[1].num_particles() {
                return Err(Error::InvalidState(
                    "duplicate particle-number sector".into(),
                ));
            }
        }
        if sectors.iter().any(|s| s.basis.modes() != modes) {
            return Err(Error::InvalidState(
                "sectors use different mode sets".into(),
            ));
        }
        let tr: f64 = sectors.iter().map(DensitySector::trace).sum();
        if (tr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(Self { sectors })
    }

    pub fn from_pure(state: &PureState) -> Self {
        let dim = state.dim();
        let factor = DMatrix::from_column_slice(dim, 1, state.amplitudes().as_slice());
        Self {
            sectors: vec![DensitySector {
                basis: state.basis().clone(),
                support: (0..dim).collect(),
                factor,
            }],
        }
    }

    /// Single-sector density matrix from a dense Hermitian matrix.
    pub fn from_dense(basis: Arc<FockBasis>, rho: &DMatrix<Complex64>) -> Result<Self> {
        let d = basis.dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::InvalidState(
                "matrix shape does not match basis".into(),
            ));
        }
        let defect = (rho - rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let eig = hermitian_eigen(rho);
        if let Some(min) = eig.eigenvalues.iter().copied().reduce(f64::min) {
            if min < -NORM_TOLERANCE {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        let keep: Vec<usize> = (0..d).filter(|&k| eig.eigenvalues[k] > 0.0).collect();
        let mut factor = DMatrix::zeros(d, keep.len());
        for (c, &k) in keep.iter().enumerate() {
            let s = eig.eigenvalues[k].sqrt();
            factor.set_column(c, &(eig.eigenvectors.column(k) * Complex64::new(s, 0.0)));
        }
        Self::from_sectors(vec![DensitySector::new(basis, (0..d).collect(), factor)?])
    }

    /// Sectors ordered by decreasing particle number.
    pub fn sectors(&self) -> &[DensitySector] {
        &self.sectors
    }

    pub fn sector(&self, num_particles: usize) -> Option<&DensitySector> {
        self.sectors
            .iter()
            .find(|s| s.num_particles() == num_particles)
    }

    pub fn trace(&self) -> f64 {
        self.sectors.iter().map(DensitySector::trace).sum()
    }

    pub fn modes(&self) -> &ModeSet {
        self.sectors[0].basis.modes()
    }

    /// `(N, trace)` per sector.
    pub fn sector_traces(&self) -> Vec<(usize, f64)> {
        self.sectors
            .iter()
            .map(|s| (s.num_particles(), s.trace()))
            .collect()
    }

    /// Tr ρ² summed over sectors.
    pub fn purity(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| {
                let g = s.factor.adjoint() * &s.factor;
                g.iter().map(|z| z.norm_sqr()).sum::<f64>()
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn basis(n: usize, m: usize) -> Arc<FockBasis> {
        Arc::new(FockBasis::new(n, ModeSet::sequential(m).unwrap()).unwrap())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn condensate_in_mode_zero() {
        let b = basis(4, 3);
        let s = PureState::fock(b, &[4, 0, 0]).unwrap();
        let r = one_body_density_matrix(&s);
        assert_relative_eq!(r[(0, 0)].re, 4.0, epsilon = 1e-14);
        assert_eq!(r.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn noon_one_body_matrix_is_diagonal() {
        let b = basis(2, 2);
        let h = 0.5f64.sqrt();
        let s = PureState::new(b, DVector::from_vec(vec![c(h), c(0.0), c(h)])).unwrap();
        let r = one_body_density_matrix(&s);
        assert_relative_eq!(r[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(r[(1, 1)].re, 1.0, epsilon = 1e-14);
        assert!(r[(0, 1)].norm() < 1e-15 && r[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn single_atom_superposition() {
        let b = basis(1, 2);
        let h = 0.5f64.sqrt();
        let s = PureState::new(b, DVector::from_vec(vec![c(h), c(h)])).unwrap();
        let r = one_body_density_matrix(&s);
        for z in r.iter() {
            assert_relative_eq!(z.re, 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn norm_is_enforced() {
        let b = basis(1, 2);
        assert!(PureState::new(b.clone(), DVector::from_vec(vec![c(1.0), c(1.0)])).is_err());
        assert!(PureState::normalized(b.clone(), DVector::from_vec(vec![c(1.0), c(1.0)])).is_ok());
        assert!(PureState::normalized(b, DVector::from_vec(vec![c(0.0), c(0.0)])).is_err());
    }

    #[test]
    fn canonical_phase_makes_pivot_real_positive() {
        let b = basis(1, 3);
        let v = DVector::from_vec(vec![
            Complex64::new(0.1, 0.2),
            Complex64::new(0.0, -0.9),
            Complex64::new(0.3, 0.0),
        ]);
        let s = PureState::normalized(b, v).unwrap().with_canonical_phase();
        let a = s.amplitudes()[1];
        assert!(a.im == 0.0 && a.re > 0.0);
    }

    #[test]
    fn annihilator_on_noon() {
        let b = basis(2, 2);
        let h = 0.5f64.sqrt();
        let amps = DVector::from_vec(vec![c(h), c(0.0), c(h)]);
        let (t, out) = apply_annihilator(&b, &amps, &[c(1.0), c(0.0)]).unwrap();
        assert_eq!(t.num_particles(), 1);
        // a_0 |2,0> = sqrt(2) |1,0>
        assert_relative_eq!(out[0].re, 1.0, epsilon = 1e-14);
        assert_eq!(out[1].norm(), 0.0);
    }

    #[test]
    fn dense_round_trip() {
        let b = basis(1, 2);
        let rho = DMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.7),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                c(0.3),
            ],
        );
        let dm = DensityMatrix::from_dense(b, &rho).unwrap();
        let back = dm.sectors()[0].to_dense();
        for (x, y) in back.iter().zip(rho.iter()) {
            assert_relative_eq!(x.re, y.re, epsilon = 1e-12);
            assert_relative_eq!(x.im, y.im, epsilon = 1e-12);
        }
        assert!(dm.purity() < 1.0);
    }

    #[test]
    fn dense_rejects_negative_eigenvalues() {
        let b = basis(1, 2);
        let rho = DMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(DensityMatrix::from_dense(b, &rho).is_err());
    }
}
