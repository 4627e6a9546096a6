use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::generator::PhaseGenerator;
use crate::error::{Error, Result};
use crate::fockspace::{DensityMatrix, DensitySector, PureState};
use crate::linalg::hermitian_eigen;

/// Eigenvalue pairs with `λ_i + λ_j` at or below this (times the trace) are
/// dropped from the logarithmic derivative.
pub const SLD_FLOOR: f64 = 1e-12;

/// `4 Var_ψ(G)`.
pub fn pure_qfi(state: &PureState, generator: &PhaseGenerator) -> f64 {
    let g = generator.diagonal(state.basis());
    let (mut m1, mut m2) = (0.0, 0.0);
    for (a, &x) in state.amplitudes().iter().zip(&g) {
        let p = a.norm_sqr();
        m1 += p * x;
        m2 += p * x * x;
    }
    4.0 * (m2 - m1 * m1).max(0.0)
}

/// `4(⟨ψ′|ψ′⟩ − |⟨ψ|ψ′⟩|²)` with `|ψ′⟩` a centered difference of
/// `e^{−iφG}|ψ⟩` at `φ = 0`.
pub fn pure_qfi_derivative(state: &PureState, generator: &PhaseGenerator, step: f64) -> f64 {
    let g = generator.diagonal(state.basis());
    let psi = state.amplitudes();
    let dpsi = DVector::from_iterator(
        psi.len(),
        psi.iter().zip(&g).map(|(a, &x)| {
            let plus = Complex64::from_polar(1.0, -step * x);
            let minus = Complex64::from_polar(1.0, step * x);
            a * (plus - minus) / (2.0 * step)
        }),
    );
    4.0 * (dpsi.norm_squared() - psi.dotc(&dpsi).norm_sqr())
}

/// Symmetric logarithmic derivative in the original basis:
/// `A_ij = 2⟨i|ρ′|j⟩/(λ_i + λ_j)` in the eigenbasis of `ρ`, zero where
/// `λ_i + λ_j ≤ SLD_FLOOR·Tr ρ`.
pub fn sld(rho: &DMatrix<Complex64>, drho: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if !rho.is_square() || rho.shape() != drho.shape() {
        return Err(Error::config(
            "rho and its derivative must be square and of equal size",
        ));
    }
    let scale = drho.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let defect = (drho - drho.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if defect > 1e-10 * scale {
        return Err(Error::config(format!(
            "derivative is not Hermitian (defect {defect:.3e})"
        )));
    }
    let trace: f64 = rho.diagonal().iter().map(|z| z.re).sum();
    let floor = SLD_FLOOR * trace.abs().max(f64::MIN_POSITIVE);
    let eig = hermitian_eigen(rho);
    let u = &eig.eigenvectors;
    let d = u.adjoint() * drho * u;
    let n = rho.nrows();
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = eig.eigenvalues[i] + eig.eigenvalues[j];
            if s > floor {
                a[(i, j)] = d[(i, j)] * (2.0 / s);
            }
        }
    }
    Ok(u * a * u.adjoint())
}

/// `ρ′ = −i[G, ρ]` for a diagonal generator.
pub fn phase_derivative(rho: &DMatrix<Complex64>, g: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(rho.nrows(), rho.ncols(), |i, j| {
        Complex64::new(0.0, -(g[i] - g[j])) * rho[(i, j)]
    })
}

/// `Tr[ρA²]` summed over sectors, with `A` from [`sld`] on dense blocks.
pub fn mixed_qfi_dense(rho: &DensityMatrix, generator: &PhaseGenerator) -> Result<f64> {
    let mut total = 0.0;
    for s in rho.sectors() {
        let r = s.to_dense();
        let g = generator.diagonal(s.basis());
        let a = sld(&r, &phase_derivative(&r, &g))?;
        total += (&r * &a * &a).trace().re;
    }
    Ok(total)
}

/// `Σ_{λ_i+λ_j>floor} 2|⟨i|ρ′|j⟩|²/(λ_i+λ_j)`, sector by sector, working on
/// the low-rank factor of each block.
pub fn mixed_qfi(rho: &DensityMatrix, generator: &PhaseGenerator) -> f64 {
    let floor = SLD_FLOOR * rho.trace();
    rho.sectors()
        .iter()
        .map(|s| sector_qfi(s, generator, floor))
        .sum()
}

fn sector_qfi(sector: &DensitySector, generator: &PhaseGenerator, floor: f64) -> f64 {
    let full = generator.diagonal(sector.basis());
    let g: Vec<f64> = sector.support().iter().map(|&i| full[i]).collect();
    let f = sector.factor();
    let (rows, rank) = f.shape();
    if rows == 0 || rank == 0 {
        return 0.0;
    }

    // eigenpairs of F F† restricted to eigenvalues above the floor
    let (lambda, vecs): (Vec<f64>, Vec<DVector<Complex64>>) = if rank <= rows {
        let eig = hermitian_eigen(&(f.adjoint() * f));
        (0..rank)
            .filter(|&k| eig.eigenvalues[k] > floor)
            .map(|k| {
                let l = eig.eigenvalues[k];
                (
                    l,
                    f * eig.eigenvectors.column(k) / Complex64::new(l.sqrt(), 0.0),
                )
            })
            .unzip()
    } else {
        let eig = hermitian_eigen(&(f * f.adjoint()));
        (0..rows)
            .filter(|&k| eig.eigenvalues[k] > floor)
            .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned()))
            .unzip()
    };
    let p = lambda.len();
    if p == 0 {
        return 0.0;
    }

    let gv: Vec<DVector<Complex64>> = vecs
        .iter()
        .map(|v| DVector::from_iterator(rows, v.iter().zip(&g).map(|(a, &x)| a * x)))
        .collect();
    let mut total = 0.0;
    for i in 0..p {
        let g2 = gv[i].norm_squared();
        let mut inside = 0.0;
        for j in 0..p {
            let gij = vecs[i].dotc(&gv[j]).norm_sqr();
            inside += gij;
            let s = lambda[i] + lambda[j];
            if i != j && s > floor {
                total += 2.0 * (lambda[i] - lambda[j]).powi(2) * gij / s;
            }
        }
        total += 4.0 * lambda[i] * (g2 - inside).max(0.0);
    }
    total
}
