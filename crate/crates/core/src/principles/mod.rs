//! Optimization harnesses for the commutation principles: solvers over
//! invariant sets that emit commutation certificates at their solutions.
//!
//! Certificates check the commutation conditions that hold at stationary
//! points; they make no claim of global optimality.

mod certificate;
mod objective;
mod problem;
mod sets;
mod solvers;

pub use certificate::{
    certify, commutes_with_all, subdifferential_candidates, CommutationCertificate,
};
pub use objective::{fd_gradient, ObjectiveSpec, ScalarFn, StepSchedule, VectorFn};
pub use problem::{run_problem, ProblemOutcome, ProblemSpec};
pub use sets::{InvariantSet, SetKind};
pub use solvers::{
    complementarity_demo, minimize_invariant, normal_cone_certify, orbit_max, orbit_perturbation,
    subgradient_certify, vi_solve_and_certify, ComplementarityOutcome, OrbitMax, SpectralSumOracle,
    FEASIBLE_START_TOL,
};
