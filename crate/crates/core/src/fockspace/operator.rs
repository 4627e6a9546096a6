use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::basis::FockBasis;
use super::ladder::LadderMonomial;
use crate::error::{Error, Result};

/// Relative tolerance of the Hermiticity check.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// How [`build_hermitian`] treats the supplied terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assembly {
    /// Terms already form a Hermitian operator; only verify.
    Verify,
    /// Add the conjugate transpose of the off-diagonal part.
    RaiseOnly,
}

/// Sparse operator over a [`FockBasis`] in compressed-row form.
#[derive(Clone)]
pub struct ManyBodyOperator {
    basis: Arc<FockBasis>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<Complex64>,
}

impl std::fmt::Debug for ManyBodyOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManyBodyOperator")
            .field("dim", &self.dim())
            .field("nnz", &self.nnz())
            .finish()
    }
}

impl ManyBodyOperator {
    /// Freezes coordinate triplets; duplicates are summed and exact zeros dropped.
    pub fn from_triplets(
        basis: Arc<FockBasis>,
        mut triplets: Vec<(usize, usize, Complex64)>,
    ) -> Self {
        let dim = basis.dim();
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(
                r < dim && c < dim,
                "triplet ({r}, {c}) outside dimension {dim}"
            );
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                cols.push(c);
                values.push(v);
            }
        }
        let mut kept_cols = Vec::with_capacity(cols.len());
        let mut kept_vals = Vec::with_capacity(values.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(values) {
            if v != Complex64::new(0.0, 0.0) {
                row_ptr[r + 1] += 1;
                kept_cols.push(c);
                kept_vals.push(v);
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            basis,
            row_ptr,
            cols: kept_cols,
            values: kept_vals,
        }
    }

    /// Diagonal operator.
    pub fn diagonal(basis: Arc<FockBasis>, diag: &[f64]) -> Self {
        let trip = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, i, Complex64::new(d, 0.0)))
            .collect();
        Self::from_triplets(basis, trip)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim()).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(r, c, _)| r == c)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        assert_eq!(x.len(), self.dim());
        DVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()),
        )
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let trip = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.basis.clone(), trip)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn add(&self, other: &ManyBodyOperator) -> Result<Self> {
        if !self.basis.same_space(&other.basis) {
            return Err(Error::config("operators live on different bases"));
        }
        let trip = self.triplets().chain(other.triplets()).collect();
        Ok(Self::from_triplets(self.basis.clone(), trip))
    }

    /// Largest `|H_rc − conj(H_cr)|`, with its location.
    pub fn hermiticity_defect(&self) -> (f64, Option<(usize, usize)>) {
        let mut worst = 0.0;
        let mut at = None;
        for (r, c, v) in self.triplets() {
            let d = (v - self.get(c, r).conj()).norm();
            if d > worst {
                worst = d;
                at = Some((r, c));
            }
        }
        (worst, at)
    }

    /// Errors unless `‖H − H†‖_max ≤ 1e−12 · ‖H‖_max`.
    pub fn check_hermitian(&self) -> Result<()> {
        let (defect, at) = self.hermiticity_defect();
        if defect > HERMITIAN_TOLERANCE * self.max_abs() {
            let (row, col) = at.expect("nonzero defect has a location");
            return Err(Error::NotHermitian {
                row,
                col,
                value: format!("{}", self.get(row, col)),
                mirror: format!("{}", self.get(col, row).conj()),
                defect,
            });
        }
        Ok(())
    }

    /// `⟨x|H|x⟩` (real part).
    pub fn expectation(&self, x: &DVector<Complex64>) -> f64 {
        let hx = self.matvec(x);
        x.dotc(&hx).re
    }
}

/// Collects the coordinate triplets of `Σ terms` over `basis`.
pub fn assemble_triplets(
    basis: &FockBasis,
    terms: &[LadderMonomial],
) -> Result<Vec<(usize, usize, Complex64)>> {
    let resolved = terms
        .iter()
        .map(|t| {
            if !t.is_particle_conserving() {
                return Err(Error::config(format!(
                    "monomial with {} creators and {} annihilators does not conserve particle number",
                    t.creators.len(),
                    t.annihilators.len()
                )));
            }
            t.resolve(basis.modes())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut triplets = Vec::new();
    let mut scratch = Vec::with_capacity(basis.num_modes());
    for (col, src) in basis.states().enumerate() {
        for mono in &resolved {
            if let Some(f) = mono.apply_into(src, &mut scratch) {
                // images outside a constrained basis are dropped
                if let Some(row) = basis.rank(&scratch) {
                    triplets.push((row, col, mono.coefficient * f));
                }
            }
        }
    }
    Ok(triplets)
}

/// Sum of the monomial matrices with no Hermiticity requirement.
pub fn build_operator(basis: Arc<FockBasis>, terms: &[LadderMonomial]) -> Result<ManyBodyOperator> {
    let trip = assemble_triplets(&basis, terms)?;
    Ok(ManyBodyOperator::from_triplets(basis, trip))
}

/// Builds a Hermitian operator from `terms` and verifies it.
pub fn build_hermitian(
    basis: Arc<FockBasis>,
    terms: &[LadderMonomial],
    assembly: Assembly,
) -> Result<ManyBodyOperator> {
    let mut b = HermitianBuilder::new(basis);
    match assembly {
        Assembly::Verify => b = b.full(terms),
        Assembly::RaiseOnly => b = b.raise_only(terms),
    }
    b.build()
}

/// Accumulates full and raise-only term groups before a single verified freeze.
pub struct HermitianBuilder {
    basis: Arc<FockBasis>,
    full: Vec<LadderMonomial>,
    raise: Vec<LadderMonomial>,
}

impl HermitianBuilder {
    pub fn new(basis: Arc<FockBasis>) -> Self {
        Self {
            basis,
            full: Vec::new(),
            raise: Vec::new(),
        }
    }

    pub fn full(mut self, terms: &[LadderMonomial]) -> Self {
        self.full.extend_from_slice(terms);
        self
    }

    pub fn raise_only(mut self, terms: &[LadderMonomial]) -> Self {
        self.raise.extend_from_slice(terms);
        self
    }

    pub fn push_full(&mut self, term: LadderMonomial) {
        self.full.push(term);
    }

    pub fn push_raise(&mut self, term: LadderMonomial) {
        self.raise.push(term);
    }

    pub fn build(self) -> Result<ManyBodyOperator> {
        let mut trip = assemble_triplets(&self.basis, &self.full)?;
        let raise = ManyBodyOperator::from_triplets(
            self.basis.clone(),
            assemble_triplets(&self.basis, &self.raise)?,
        );
        for (r, c, v) in raise.triplets() {
            trip.push((r, c, v));
            if r != c {
                trip.push((c, r, v.conj()));
            }
        }
        let op = ManyBodyOperator::from_triplets(self.basis, trip);
        op.check_hermitian()?;
        Ok(op)
    }
}
