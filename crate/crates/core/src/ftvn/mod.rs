//! Semi-FTvN systems and the checks that run against them.

mod checks;
mod report;
mod system;

pub use checks::{
    center_probe, check_axioms, ftvn_residual, lambda_properties, orbit_equal, prop34_battery,
    strong_commute, strong_gap, sublinearity_sampler, AxiomReports, EquivalenceBattery,
    FtvnResidual, LambdaPropertyReports,
};
pub(crate) use report::{summarize, Sample};
pub use report::{CheckReport, Status};
pub use system::{LambdaFn, Metric, OrbitEnumerator, OrbitMaximizer, Sampler, SemiFtvnSystem};
