use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{FockBasis, ManyBodyOperator, PureState};
use crate::linalg::hermitian_eigen;

/// Spectral decomposition of a frozen Hamiltonian, reusable for any time.
#[derive(Debug, Clone)]
pub struct Propagator {
    basis: Arc<FockBasis>,
    energies: DVector<f64>,
    vectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(h: &ManyBodyOperator) -> Self {
        let eig = hermitian_eigen(&h.to_dense());
        Self {
            basis: h.basis().clone(),
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        }
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    /// `E_max − E_min`.
    pub fn spectral_width(&self) -> f64 {
        self.energies.max() - self.energies.min()
    }

    /// `e^{−iHt}ψ` on a raw amplitude vector.
    pub fn apply_vector(&self, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let mut c = self.vectors.ad_mul(psi);
        for (ci, &e) in c.iter_mut().zip(self.energies.iter()) {
            *ci *= Complex64::from_polar(1.0, -e * t);
        }
        &self.vectors * c
    }

    pub fn apply(&self, state: &PureState, t: f64) -> Result<PureState> {
        if !self.basis.same_space(state.basis()) {
            return Err(Error::config(
                "state and Hamiltonian live on different bases",
            ));
        }
        PureState::normalized(self.basis.clone(), self.apply_vector(state.amplitudes(), t))
    }

    /// `e^{−iHt}` as a dense matrix.
    pub fn matrix(&self, t: f64) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (j, &e) in self.energies.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, -e * t);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= ph);
        }
        scaled * self.vectors.adjoint()
    }

    /// Ground state of the frozen Hamiltonian (lowest eigenvector).
    pub fn ground_vector(&self) -> DVector<Complex64> {
        let i = self.energies.argmin().0;
        self.vectors.column(i).into_owned()
    }
}

/// `e^{−iHt}|ψ⟩` with `ħ = 1`.
pub fn evolve(h: &ManyBodyOperator, state: &PureState, t: f64) -> Result<PureState> {
    if !t.is_finite() {
        return Err(Error::config("evolution time must be finite"));
    }
    Propagator::new(h).apply(state, t)
}
