use num_complex::Complex64;

use super::basis::{ModeSet, Occupation};
use crate::error::{Error, Result};

/// Normal-ordered product `c · a†_{i1} … a†_{ip} a_{j1} … a_{jq}` over mode labels.
///
/// Annihilators act right to left, then creators right to left.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderMonomial {
    pub coefficient: Complex64,
    pub creators: Vec<i64>,
    pub annihilators: Vec<i64>,
}

impl LadderMonomial {
    pub fn new(
        coefficient: impl Into<Complex64>,
        creators: Vec<i64>,
        annihilators: Vec<i64>,
    ) -> Self {
        Self {
            coefficient: coefficient.into(),
            creators,
            annihilators,
        }
    }

    /// `c · n̂_label`
    pub fn number(coefficient: impl Into<Complex64>, label: i64) -> Self {
        Self::new(coefficient, vec![label], vec![label])
    }

    /// `c · a†_to a_from`
    pub fn hop(coefficient: impl Into<Complex64>, to: i64, from: i64) -> Self {
        Self::new(coefficient, vec![to], vec![from])
    }

    /// `c · a†_i a†_j a_k a_l`
    pub fn pair(coefficient: impl Into<Complex64>, i: i64, j: i64, k: i64, l: i64) -> Self {
        Self::new(coefficient, vec![i, j], vec![k, l])
    }

    pub fn is_particle_conserving(&self) -> bool {
        self.creators.len() == self.annihilators.len()
    }

    /// Hermitian conjugate: `c* · a†_{jq} … a†_{j1} a_{ip} … a_{i1}`.
    pub fn adjoint(&self) -> Self {
        let mut creators = self.annihilators.clone();
        creators.reverse();
        let mut annihilators = self.creators.clone();
        annihilators.reverse();
        Self {
            coefficient: self.coefficient.conj(),
            creators,
            annihilators,
        }
    }

    pub(crate) fn resolve(&self, modes: &ModeSet) -> Result<ResolvedMonomial> {
        let creators = self
            .creators
            .iter()
            .map(|&l| modes.require(l))
            .collect::<Result<Vec<_>>>()?;
        let annihilators = self
            .annihilators
            .iter()
            .map(|&l| modes.require(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(ResolvedMonomial {
            coefficient: self.coefficient,
            creators,
            annihilators,
        })
    }
}

/// A monomial with labels replaced by storage positions.
#[derive(Debug, Clone)]
pub(crate) struct ResolvedMonomial {
    pub coefficient: Complex64,
    pub creators: Vec<usize>,
    pub annihilators: Vec<usize>,
}

impl ResolvedMonomial {
    /// Writes the image of `src` into `dst` and returns the real ladder
    /// factor (without the coefficient), or `None` if the result vanishes.
    #[inline]
    pub fn apply_into(&self, src: &[Occupation], dst: &mut Vec<Occupation>) -> Option<f64> {
        dst.clear();
        dst.extend_from_slice(src);
        let mut factor = 1.0;
        for &p in self.annihilators.iter().rev() {
            let n = dst[p];
            if n == 0 {
                return None;
            }
            factor *= (n as f64).sqrt();
            dst[p] = n - 1;
        }
        for &p in self.creators.iter().rev() {
            let n = dst[p].checked_add(1)?;
            dst[p] = n;
            factor *= (n as f64).sqrt();
        }
        Some(factor)
    }
}

/// Applies `monomial` to the occupation vector `state` over `modes`.
///
/// Returns the amplitude (ladder factors times coefficient) and the resulting
/// occupation, or `None` when an annihilator hits an empty mode.
pub fn apply_monomial(
    monomial: &LadderMonomial,
    modes: &ModeSet,
    state: &[Occupation],
) -> Result<Option<(Complex64, Vec<Occupation>)>> {
    if state.len() != modes.len() {
        return Err(Error::config(format!(
            "occupation vector has {} entries for {} modes",
            state.len(),
            modes.len()
        )));
    }
    let resolved = monomial.resolve(modes)?;
    let mut out = Vec::with_capacity(state.len());
    Ok(resolved
        .apply_into(state, &mut out)
        .map(|f| (monomial.coefficient * f, out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_modes() -> ModeSet {
        ModeSet::sequential(2).unwrap()
    }

    #[test]
    fn hop_carries_sqrt_factors() {
        let m = LadderMonomial::hop(1.0, 1, 0);
        let (amp, out) = apply_monomial(&m, &two_modes(), &[2, 0]).unwrap().unwrap();
        assert_relative_eq!(amp.re, 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(amp.im, 0.0);
        assert_eq!(out, vec![1, 1]);
    }

    #[test]
    fn annihilating_empty_mode_vanishes() {
        let m = LadderMonomial::new(1.0, vec![], vec![0]);
        assert!(apply_monomial(&m, &two_modes(), &[0, 1]).unwrap().is_none());
    }

    #[test]
    fn number_operator_eigenvalue() {
        let m = LadderMonomial::number(1.0, 0);
        let (amp, out) = apply_monomial(&m, &two_modes(), &[3, 0]).unwrap().unwrap();
        assert_relative_eq!(amp.re, 3.0, epsilon = 1e-14);
        assert_eq!(out, vec![3, 0]);
    }

    #[test]
    fn pair_term_is_n_times_n_minus_one() {
        let m = LadderMonomial::pair(1.0, 0, 0, 0, 0);
        let (amp, _) = apply_monomial(&m, &two_modes(), &[4, 1]).unwrap().unwrap();
        assert_relative_eq!(amp.re, 12.0, epsilon = 1e-13);
    }

    #[test]
    fn unknown_label_is_config_error() {
        let m = LadderMonomial::hop(1.0, 5, 0);
        assert!(matches!(
            apply_monomial(&m, &two_modes(), &[1, 0]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn adjoint_reverses_and_conjugates() {
        let m = LadderMonomial::new(Complex64::new(1.0, 2.0), vec![0, 1], vec![2, 3]);
        let a = m.adjoint();
        assert_eq!(a.creators, vec![3, 2]);
        assert_eq!(a.annihilators, vec![1, 0]);
        assert_eq!(a.coefficient, Complex64::new(1.0, -2.0));
    }
}
