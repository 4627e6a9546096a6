//! Dense Hermitian eigendecomposition on a sequential faer backend, so that
//! results never depend on the worker count.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::traits::ComplexField;
use faer::diag::Diag;
use faer::{Mat, MatRef, Par};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Ascending eigenvalues with eigenvectors as columns.
pub(crate) struct HermitianEigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

/// Reads the lower triangle. A matrix with no imaginary part takes the
/// cheaper real solve.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> HermitianEigen {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    let solved = if m.iter().all(|z| z.im == 0.0) {
        let a = Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)].re);
        evd(a.as_ref()).map(|(s, u)| HermitianEigen {
            eigenvalues: DVector::from_vec(s),
            eigenvectors: DMatrix::from_fn(n, n, |i, j| Complex64::new(u[(i, j)], 0.0)),
        })
    } else {
        let a = Mat::<Complex64>::from_fn(n, n, |i, j| m[(i, j)]);
        evd(a.as_ref()).map(|(s, u)| HermitianEigen {
            eigenvalues: DVector::from_iterator(n, s.iter().map(|z| z.re)),
            eigenvectors: DMatrix::from_fn(n, n, |i, j| u[(i, j)]),
        })
    };
    solved.unwrap_or_else(|| {
        log::warn!("dense eigensolver did not converge; falling back to the QR iteration");
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        HermitianEigen {
            eigenvalues: DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i])),
            eigenvectors: DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]),
        }
    })
}

fn evd<T: ComplexField>(a: MatRef<'_, T>) -> Option<(Vec<T>, Mat<T>)> {
    let n = a.nrows();
    let mut s = Diag::<T>::zeros(n);
    let mut u = Mat::<T>::zeros(n, n);
    let par = Par::Seq;
    let mut buf = MemBuffer::new(self_adjoint_evd_scratch::<T>(
        n,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    self_adjoint_evd(
        a,
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .ok()?;
    let values = s.column_vector().iter().cloned().collect();
    Some((values, u))
}
