use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Occupation number of a single mode.
pub type Occupation = u8;

/// Largest particle number a basis can hold (occupations are stored as `u8`).
pub const MAX_PARTICLES: usize = Occupation::MAX as usize;

/// Default cap on the number of basis states.
pub const DEFAULT_DIMENSION_CAP: usize = 2_000_000;

/// Ordered, duplicate-free list of integer mode labels.
///
/// Labels carry physical meaning: lattice site index, Landau-level index `m`,
/// or angular momentum `k`. Position in the list is the storage index.
#[derive(Clone, PartialEq, Eq)]
pub struct ModeSet {
    labels: Vec<i64>,
    positions: HashMap<i64, usize>,
}

impl ModeSet {
    pub fn new(labels: Vec<i64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::config("mode set must not be empty"));
        }
        let mut positions = HashMap::with_capacity(labels.len());
        for (i, &l) in labels.iter().enumerate() {
            if positions.insert(l, i).is_some() {
                return Err(Error::config(format!("duplicate mode label {l}")));
            }
        }
        Ok(Self { labels, positions })
    }

    /// Modes labelled `0..count`.
    pub fn sequential(count: usize) -> Result<Self> {
        Self::new((0..count as i64).collect())
    }

    /// Modes labelled `lo..=hi`.
    pub fn range(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::config(format!("empty label range {lo}..={hi}")));
        }
        Self::new((lo..=hi).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn label(&self, position: usize) -> i64 {
        self.labels[position]
    }

    pub fn position(&self, label: i64) -> Option<usize> {
        self.positions.get(&label).copied()
    }

    pub(crate) fn require(&self, label: i64) -> Result<usize> {
        self.position(label)
            .ok_or_else(|| Error::config(format!("unknown mode label {label}")))
    }
}

impl fmt::Debug for ModeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ModeSet").field(&self.labels).finish()
    }
}

/// Linear constraint `Σ weight_m · n_m ≤ max` restricting a basis, e.g. a cap
/// on total angular momentum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCap {
    pub weights: Vec<u64>,
    pub max: u64,
}

/// Options for [`FockBasis::build`].
#[derive(Debug, Clone)]
pub struct BasisConfig {
    pub max_dimension: usize,
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self {
            max_dimension: DEFAULT_DIMENSION_CAP,
        }
    }
}

/// All occupation vectors of `N` bosons over a [`ModeSet`], in descending
/// lexicographic order, with an O(1) rank lookup.
pub struct FockBasis {
    modes: ModeSet,
    num_particles: usize,
    /// Row-major occupations, `modes.len()` entries per state.
    occupations: Vec<Occupation>,
    rank: HashMap<Box<[Occupation]>, usize>,
    cap: Option<WeightCap>,
}

impl FockBasis {
    /// Full number-conserving basis with the default dimension cap.
    pub fn new(num_particles: usize, modes: ModeSet) -> Result<Self> {
        Self::build(num_particles, modes, None, &BasisConfig::default())
    }

    pub fn build(
        num_particles: usize,
        modes: ModeSet,
        cap: Option<WeightCap>,
        config: &BasisConfig,
    ) -> Result<Self> {
        if num_particles > MAX_PARTICLES {
            return Err(Error::config(format!(
                "at most {MAX_PARTICLES} particles are supported, got {num_particles}"
            )));
        }
        let m = modes.len();
        if let Some(c) = &cap {
            if c.weights.len() != m {
                return Err(Error::config(format!(
                    "weight cap has {} weights for {m} modes",
                    c.weights.len()
                )));
            }
        } else {
            let dim = full_dimension(num_particles, m);
            if dim > config.max_dimension as u128 {
                return Err(Error::DimensionCap {
                    dimension: dim,
                    cap: config.max_dimension,
                });
            }
        }

        let mut occupations = Vec::new();
        let mut scratch = vec![0 as Occupation; m];
        let mut count = 0usize;
        enumerate(
            &mut scratch,
            0,
            num_particles,
            0,
            cap.as_ref(),
            &mut |occ| {
                count += 1;
                if count > config.max_dimension {
                    return false;
                }
                occupations.extend_from_slice(occ);
                true
            },
        );
        if count > config.max_dimension {
            return Err(Error::DimensionCap {
                dimension: count as u128,
                cap: config.max_dimension,
            });
        }

        let mut rank = HashMap::with_capacity(count);
        for (i, occ) in occupations.chunks_exact(m.max(1)).enumerate() {
            rank.insert(occ.to_vec().into_boxed_slice(), i);
        }
        Ok(Self {
            modes,
            num_particles,
            occupations,
            rank,
            cap,
        })
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn num_particles(&self) -> usize {
        self.num_particles
    }

    pub fn dim(&self) -> usize {
        self.rank.len()
    }

    pub fn cap(&self) -> Option<&WeightCap> {
        self.cap.as_ref()
    }

    pub fn state(&self, index: usize) -> &[Occupation] {
        let m = self.num_modes();
        &self.occupations[index * m..(index + 1) * m]
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = &[Occupation]> + '_ {
        self.occupations.chunks_exact(self.num_modes())
    }

    pub fn rank(&self, occupation: &[Occupation]) -> Option<usize> {
        self.rank.get(occupation).copied()
    }

    /// Same particle number, modes and constraint.
    pub fn same_space(&self, other: &FockBasis) -> bool {
        std::ptr::eq(self, other)
            || (self.num_particles == other.num_particles
                && self.modes == other.modes
                && self.cap == other.cap)
    }

    /// `Σ label · n` for the state at `index`.
    pub fn label_weight(&self, index: usize) -> i64 {
        self.state(index)
            .iter()
            .zip(self.modes.labels())
            .map(|(&n, &l)| n as i64 * l)
            .sum()
    }

    /// Human-readable label like `(2,0,1)`.
    pub fn ket_label(&self, index: usize) -> String {
        let parts: Vec<String> = self.state(index).iter().map(|n| n.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Debug for FockBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockBasis")
            .field("modes", &self.modes)
            .field("num_particles", &self.num_particles)
            .field("dim", &self.dim())
            .field("cap", &self.cap)
            .finish()
    }
}

fn enumerate(
    scratch: &mut [Occupation],
    mode: usize,
    remaining: usize,
    weight: u64,
    cap: Option<&WeightCap>,
    emit: &mut dyn FnMut(&[Occupation]) -> bool,
) -> bool {
    let m = scratch.len();
    if mode + 1 == m {
        if let Some(c) = cap {
            if weight + c.weights[mode] * remaining as u64 > c.max {
                return true;
            }
        }
        scratch[mode] = remaining as Occupation;
        return emit(scratch);
    }
    for n in (0..=remaining).rev() {
        let w = match cap {
            Some(c) => {
                let w = weight + c.weights[mode] * n as u64;
                if w > c.max {
                    continue;
                }
                w
            }
            None => 0,
        };
        scratch[mode] = n as Occupation;
        if !enumerate(scratch, mode + 1, remaining - n, w, cap, emit) {
            return false;
        }
    }
    scratch[mode] = 0;
    true
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// `C(N + M − 1, M − 1)`: number of ways to place `N` bosons in `M` modes.
pub fn full_dimension(num_particles: usize, num_modes: usize) -> u128 {
    if num_modes == 0 {
        return u128::from(num_particles == 0);
    }
    binomial(
        (num_particles + num_modes - 1) as u64,
        (num_modes - 1) as u64,
    )
}

/// Index of `occupation` in the descending-lexicographic order of the full
/// (unconstrained) basis, computed combinatorially.
pub fn combinatorial_rank(occupation: &[Occupation]) -> u128 {
    let mut remaining: usize = occupation.iter().map(|&n| n as usize).sum();
    let mut index = 0u128;
    for (i, &n) in occupation.iter().enumerate() {
        let modes_left = occupation.len() - i;
        if modes_left == 1 {
            break;
        }
        let n = n as usize;
        // states whose mode-i occupation exceeds n come first
        if remaining > n {
            index += full_dimension(remaining - n - 1, modes_left);
        }
        remaining -= n;
    }
    index
}

/// Inverse of [`combinatorial_rank`].
pub fn combinatorial_unrank(
    num_particles: usize,
    num_modes: usize,
    mut index: u128,
) -> Option<Vec<Occupation>> {
    if num_modes == 0 || index >= full_dimension(num_particles, num_modes) {
        return None;
    }
    let mut out = Vec::with_capacity(num_modes);
    let mut remaining = num_particles;
    for i in 0..num_modes {
        let modes_left = num_modes - i;
        if modes_left == 1 {
            out.push(remaining as Occupation);
            break;
        }
        let mut n = remaining;
        loop {
            let block = full_dimension(remaining - n, modes_left - 1);
            if index < block {
                break;
            }
            index -= block;
            n -= 1;
        }
        out.push(n as Occupation);
        remaining -= n;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, m: usize) -> FockBasis {
        FockBasis::new(n, ModeSet::sequential(m).unwrap()).unwrap()
    }

    #[test]
    fn two_bosons_two_modes() {
        let b = basis(2, 2);
        let states: Vec<&[u8]> = b.states().collect();
        assert_eq!(states, vec![&[2, 0][..], &[1, 1], &[0, 2]]);
    }

    #[test]
    fn dimension_matches_stars_and_bars() {
        assert_eq!(basis(3, 3).dim(), 10);
        assert_eq!(full_dimension(3, 3), 10);
        assert_eq!(basis(5, 4).dim() as u128, full_dimension(5, 4));
    }

    #[test]
    fn vacuum() {
        let b = basis(0, 4);
        assert_eq!(b.dim(), 1);
        assert_eq!(b.state(0), &[0, 0, 0, 0]);
    }

    #[test]
    fn rank_is_inverse_of_state() {
        let b = basis(4, 5);
        for i in 0..b.dim() {
            assert_eq!(b.rank(b.state(i)), Some(i));
            assert_eq!(combinatorial_rank(b.state(i)), i as u128);
            assert_eq!(combinatorial_unrank(4, 5, i as u128).unwrap(), b.state(i));
        }
        assert!(combinatorial_unrank(4, 5, full_dimension(4, 5)).is_none());
    }

    #[test]
    fn dimension_cap_is_an_error() {
        let modes = ModeSet::sequential(30).unwrap();
        let cfg = BasisConfig {
            max_dimension: 1000,
        };
        let err = FockBasis::build(10, modes, None, &cfg).unwrap_err();
        assert!(matches!(err, Error::DimensionCap { .. }));
    }

    #[test]
    fn weight_cap_restricts_and_keeps_order() {
        let modes = ModeSet::sequential(5).unwrap();
        let cap = WeightCap {
            weights: vec![0, 1, 2, 3, 4],
            max: 3,
        };
        let b = FockBasis::build(3, modes, Some(cap), &BasisConfig::default()).unwrap();
        let full = basis(3, 5);
        let expected: Vec<&[u8]> = full
            .states()
            .filter(|s| {
                s.iter()
                    .enumerate()
                    .map(|(m, &n)| m * n as usize)
                    .sum::<usize>()
                    <= 3
            })
            .collect();
        assert_eq!(b.states().collect::<Vec<_>>(), expected);
        for i in 0..b.dim() {
            assert!(b.label_weight(i) <= 3);
        }
    }

    #[test]
    fn weight_cap_hits_dimension_cap_by_count() {
        let modes = ModeSet::sequential(13).unwrap();
        let cap = WeightCap {
            weights: (0..13).collect(),
            max: 40,
        };
        let cfg = BasisConfig { max_dimension: 50 };
        assert!(matches!(
            FockBasis::build(12, modes, Some(cap), &cfg),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn mode_set_rejects_duplicates_and_empty() {
        assert!(ModeSet::new(vec![]).is_err());
        assert!(ModeSet::new(vec![0, 1, 0]).is_err());
        let ms = ModeSet::range(-2, 3).unwrap();
        assert_eq!(ms.len(), 6);
        assert_eq!(ms.position(-2), Some(0));
        assert_eq!(ms.position(4), None);
    }

    #[test]
    fn too_many_particles() {
        let modes = ModeSet::sequential(1).unwrap();
        assert!(FockBasis::new(300, modes).is_err());
    }
}
