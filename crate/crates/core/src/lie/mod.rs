//! Lie algebra generator sets and group-relative commutativity.

mod generators;
mod predicates;

pub use generators::{
    cp_cone_lie_span, derivation_span, diagonal_lyapunov_basis, eja_cone_lie_span, empty_set,
    permutation_group_lie, skew_basis, spin_automorphisms, uxv_group_lie, uxv_lie, GeneratorKind,
    LieGeneratorSet,
};
pub use predicates::{
    commute_rel, commute_rel_outer, exp_membership_probe, operator_commute, weak_center,
};
