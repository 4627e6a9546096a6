//! Number-conserving bosonic Fock spaces.
//!
//! A [`FockBasis`] enumerates every occupation vector of `N` bosons in a
//! labelled [`ModeSet`] (descending lexicographic order) and ranks them through
//! a hash map. Operators are assembled from normal-ordered [`LadderMonomial`]s
//! into compressed-row [`ManyBodyOperator`]s. Everything here is immutable
//! once built.

mod basis;
mod ladder;
mod operator;
mod state;

pub use basis::{
    binomial, combinatorial_rank, combinatorial_unrank, full_dimension, BasisConfig, FockBasis,
    ModeSet, Occupation, WeightCap, DEFAULT_DIMENSION_CAP, MAX_PARTICLES,
};
pub use ladder::{apply_monomial, LadderMonomial};
pub use operator::{
    assemble_triplets, build_hermitian, build_operator, Assembly, HermitianBuilder,
    ManyBodyOperator, HERMITIAN_TOLERANCE,
};
pub(crate) use state::canonicalize_phase;
pub use state::{
    apply_annihilator, natural_orbitals, one_body_density_matrix, DensityMatrix, DensitySector,
    PureState, NORM_TOLERANCE,
};
