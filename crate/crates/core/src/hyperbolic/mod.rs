//! Hyperbolic polynomials, their eigenvalue maps and induced systems.

mod polynomial;
mod probe;
mod system;

pub use polynomial::{
    degenerate_cubic, det_polynomial, product_polynomial, spin_polynomial, Family,
    HyperbolicPolynomial, Monomial,
};
pub use probe::{isometric_probe, IsometricOutcome, MIN_REFUTATION_RESTARTS};
pub use system::{
    characterization_battery, completeness_check, cone_membership, lidskii_check,
    majorization_excess, majorization_leq, polarization_inner, strong_commute_char,
    CharacterizationOutcome, ConeMembership, HyperbolicSystem, EIG_TOL,
};
