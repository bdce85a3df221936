//! Concrete systems and the subspace, composition and product combinators.

mod combinators;
mod constructors;
pub mod eja;

pub use combinators::{
    compose_systems, make_plane_subspace_system, make_sort_spin_composition, product_systems,
    restrict_to_subspace, RangeWitness, SubspaceSystem,
};
pub use constructors::{
    distinct_permutations, make_abs_system, make_norm_system, make_rn_sort, make_rn_sort_scaled,
    make_singular_value_system, make_spin_eja, make_sym_eja, rearrangement,
};
pub use eja::{EuclideanJordanAlgebra, JordanKind, Spectral};
