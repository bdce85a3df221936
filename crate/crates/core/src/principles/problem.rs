//! Problem-spec JSON:
//!
//! ```json
//! {"system": "sym_eja:3", "generators": "deriv:sym_eja:3",
//!  "set": {"kind": "orbit", "u": [..]},
//!  "objective": {"kind": "linear", "params": {"c": [..]}},
//!  "x0": [..], "iters": 500, "tol": 1e-8}
//! ```
//!
//! Set kinds: `orbit {u}`, `spectral_ball {radius}`, `symmetric_cone`,
//! `nonneg_orthant`, `cone_ball {radius}`,
//! `half_space_spectral {normal?, offset}`.
//!
//! Objective kinds and the solver they select: `linear {c}` and
//! `quadratic {q, c}` (projected gradient), `spectral_max_eig` and
//! `spectral_top_k {k}` (projected subgradient), `vi_affine {m, q}`
//! (variational inequality), `complementarity {m, q}`, `orbit_max {c}`,
//! `normal_cone {a, d}`.
//!
//! Optional fields: `generators` (defaults to the system's automorphism
//! generators), `x0`, `iters` (1000), `tol` (1e-8), `seed` (42) and
//! `step` (`{"kind": "auto" | "constant" | "inverse_sqrt" | "geometric", ..}`).

use serde::{Deserialize, Serialize};

use super::certificate::{certify, CommutationCertificate};
use super::objective::{ObjectiveSpec, StepSchedule};
use super::sets::InvariantSet;
use super::solvers::{
    complementarity_demo, minimize_invariant, normal_cone_certify, orbit_max, subgradient_certify,
    vi_solve_and_certify, ComplementarityOutcome, OrbitMax, SpectralSumOracle,
};
use crate::error::{Error, Result};
use crate::ftvn::{strong_gap, Status};
use crate::numkernel::vector::add;
use crate::numkernel::Matrix;
use crate::registry;
use crate::systems::{EuclideanJordanAlgebra, JordanKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Orbit {
        u: Vec<f64>,
    },
    SpectralBall {
        radius: f64,
    },
    SymmetricCone,
    NonnegOrthant,
    ConeBall {
        radius: f64,
    },
    HalfSpaceSpectral {
        #[serde(default)]
        normal: Option<Vec<f64>>,
        offset: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ObjectiveKind {
    Linear {
        c: Vec<f64>,
    },
    Quadratic {
        q: Vec<Vec<f64>>,
        c: Vec<f64>,
    },
    SpectralMaxEig {
        #[serde(default = "default_cluster_tol")]
        cluster_tol: f64,
    },
    SpectralTopK {
        k: usize,
        #[serde(default = "default_cluster_tol")]
        cluster_tol: f64,
    },
    ViAffine {
        m: Vec<Vec<f64>>,
        q: Vec<f64>,
    },
    Complementarity {
        m: Vec<Vec<f64>>,
        q: Vec<f64>,
    },
    OrbitMax {
        c: Vec<f64>,
    },
    NormalCone {
        a: Vec<f64>,
        d: Vec<f64>,
    },
}

impl ObjectiveKind {
    pub fn name(&self) -> &'static str {
        match self {
            ObjectiveKind::Linear { .. } => "linear",
            ObjectiveKind::Quadratic { .. } => "quadratic",
            ObjectiveKind::SpectralMaxEig { .. } => "spectral_max_eig",
            ObjectiveKind::SpectralTopK { .. } => "spectral_top_k",
            ObjectiveKind::ViAffine { .. } => "vi_affine",
            ObjectiveKind::Complementarity { .. } => "complementarity",
            ObjectiveKind::OrbitMax { .. } => "orbit_max",
            ObjectiveKind::NormalCone { .. } => "normal_cone",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepSpec {
    Auto,
    Constant { step: f64 },
    InverseSqrt { step: f64 },
    Geometric { initial: f64, ratio: f64 },
}

impl From<StepSpec> for StepSchedule {
    fn from(s: StepSpec) -> Self {
        match s {
            StepSpec::Auto => StepSchedule::Auto,
            StepSpec::Constant { step } => StepSchedule::Constant(step),
            StepSpec::InverseSqrt { step } => StepSchedule::InverseSqrt(step),
            StepSpec::Geometric { initial, ratio } => StepSchedule::Geometric { initial, ratio },
        }
    }
}

fn default_cluster_tol() -> f64 {
    1e-6
}
fn default_iters() -> usize {
    1000
}
fn default_tol() -> f64 {
    1e-8
}
fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub system: String,
    #[serde(default)]
    pub generators: Option<String>,
    pub set: SetSpec,
    pub objective: ObjectiveKind,
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    #[serde(default = "default_iters")]
    pub iters: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub step: Option<StepSpec>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ProblemSpec =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if !(spec.tol > 0.0 && spec.tol.is_finite()) {
            return Err(Error::Schema("tol must be positive".into()));
        }
        Ok(spec)
    }
}

/// Result of a problem run. Exactly one of the detail fields is present.
#[derive(Debug, Clone, Serialize)]
pub struct ProblemOutcome {
    pub problem: String,
    pub system: String,
    pub generators: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CommutationCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_max: Option<OrbitMax>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complementarity: Option<ComplementarityOutcome>,
}

fn matrix(rows: &[Vec<f64>], dim: usize) -> Result<Matrix> {
    let m = Matrix::from_rows(rows).map_err(|e| Error::Schema(e.to_string()))?;
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.rows(),
        });
    }
    Ok(m)
}

fn expect_len(v: &[f64], dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    Ok(())
}

fn algebra(system: &str) -> Result<EuclideanJordanAlgebra> {
    registry::algebra_by_name(system).map_err(|_| {
        Error::Schema(format!(
            "set requires a Jordan-algebra system, got `{system}`"
        ))
    })
}

fn build_set(spec: &ProblemSpec, sys: &crate::ftvn::SemiFtvnSystem) -> Result<InvariantSet> {
    let d = sys.dim_v;
    Ok(match &spec.set {
        SetSpec::Orbit { u } => {
            expect_len(u, d)?;
            InvariantSet::orbit(sys, u)
        }
        SetSpec::SpectralBall { radius } => InvariantSet::spectral_ball(sys.metric_v(), *radius),
        SetSpec::SymmetricCone => InvariantSet::symmetric_cone(&algebra(&spec.system)?),
        SetSpec::NonnegOrthant => InvariantSet::nonneg_orthant(d),
        SetSpec::ConeBall { radius } => InvariantSet::cone_ball(&algebra(&spec.system)?, *radius),
        SetSpec::HalfSpaceSpectral { normal, offset } => {
            let normal = match normal {
                Some(n) => n.clone(),
                None => algebra(&spec.system)?.unit,
            };
            expect_len(&normal, d)?;
            InvariantSet::half_space_spectral(sys.metric_v(), &normal, *offset)
        }
    })
}

fn symmetric_order(system: &str) -> Result<usize> {
    match algebra(system)?.kind {
        JordanKind::Symmetric { n } => Ok(n),
        _ => Err(Error::Schema(
            "spectral objectives require a symmetric-matrix system".into(),
        )),
    }
}

/// Builds the system, generators and set of `spec`, runs the solver its
/// objective selects and certifies the result.
pub fn run_problem(spec: &ProblemSpec) -> Result<ProblemOutcome> {
    let sys = registry::system_by_name(&spec.system)?;
    let gens_name = match &spec.generators {
        Some(g) => g.clone(),
        None => registry::default_generators(&spec.system)?,
    };
    let gens = registry::generators_by_name(&gens_name)?;
    if gens.dim != sys.dim_v {
        return Err(Error::DimensionMismatch {
            expected: sys.dim_v,
            found: gens.dim,
        });
    }
    let d = sys.dim_v;
    let tol = spec.tol;
    let set = build_set(spec, &sys)?;
    let x0 = match &spec.x0 {
        Some(x) => {
            expect_len(x, d)?;
            x.clone()
        }
        None => match &spec.set {
            SetSpec::Orbit { u } => u.clone(),
            _ => set.project(&vec![0.0; d])?,
        },
    };
    let schedule: StepSchedule = spec.step.unwrap_or(StepSpec::Auto).into();
    let mut out = ProblemOutcome {
        problem: spec.objective.name().into(),
        system: spec.system.clone(),
        generators: gens_name,
        status: Status::Fail,
        certificate: None,
        orbit_max: None,
        complementarity: None,
    };

    let cert = match &spec.objective {
        ObjectiveKind::Linear { c } => {
            expect_len(c, d)?;
            let obj = ObjectiveSpec::linear(sys.metric_v(), c);
            minimize_invariant(&sys, &gens, &set, &obj, &x0, schedule, spec.iters, tol)?.1
        }
        ObjectiveKind::Quadratic { q, c } => {
            expect_len(c, d)?;
            let obj = ObjectiveSpec::quadratic(sys.metric_v(), &matrix(q, d)?, c);
            minimize_invariant(&sys, &gens, &set, &obj, &x0, schedule, spec.iters, tol)?.1
        }
        ObjectiveKind::SpectralMaxEig { cluster_tol }
        | ObjectiveKind::SpectralTopK { cluster_tol, .. } => {
            let n = symmetric_order(&spec.system)?;
            let k = match spec.objective {
                ObjectiveKind::SpectralTopK { k, .. } if (1..=n).contains(&k) => k,
                ObjectiveKind::SpectralTopK { .. } => {
                    return Err(Error::Schema(format!("k must lie in 1..={n}")))
                }
                _ => 1,
            };
            let oracle = SpectralSumOracle {
                n,
                k,
                cluster_tol: *cluster_tol,
            };
            subgradient_certify(
                &sys,
                &gens,
                &set,
                &|x| oracle.eval(x),
                &|x| oracle.subgradients(x),
                &x0,
                schedule,
                spec.iters,
                tol,
                spec.seed,
            )?
            .1
        }
        ObjectiveKind::ViAffine { m, q } => {
            expect_len(q, d)?;
            let m = matrix(m, d)?;
            let h = |x: &[f64]| Ok(add(&m.matvec(x), q));
            let step = match schedule {
                StepSchedule::Constant(s) => s,
                _ => 1.0,
            };
            vi_solve_and_certify(&sys, &gens, &set, &h, &x0, step, spec.iters, tol)?.1
        }
        ObjectiveKind::Complementarity { m, q } => {
            let alg = algebra(&spec.system)?;
            expect_len(q, d)?;
            let outcome = complementarity_demo(&alg, &matrix(m, d)?, q, spec.iters, tol)?;
            out.status = outcome.report.status;
            out.complementarity = Some(outcome);
            return Ok(out);
        }
        ObjectiveKind::OrbitMax { c } => {
            let SetSpec::Orbit { u } = &spec.set else {
                return Err(Error::Schema("orbit_max requires an orbit set".into()));
            };
            expect_len(c, d)?;
            let m = orbit_max(&sys, c, u)?;
            let gap = strong_gap(&sys, c, &m.argmax, tol)?;
            let attained = (m.value - m.predicted).abs() <= tol * m.predicted.abs().max(1.0);
            let mut cert = certify(&m.argmax, c, &gens, sys.metric_v(), tol);
            cert.stationarity = gap;
            if !attained || gap > tol * (sys.norm_v(c) * sys.norm_v(&m.argmax)).max(1.0) {
                cert.verdict = Status::Fail;
            }
            out.orbit_max = Some(m);
            cert
        }
        ObjectiveKind::NormalCone { a, d: dir } => {
            expect_len(a, d)?;
            expect_len(dir, d)?;
            normal_cone_certify(&gens, &set, a, dir, 300, spec.seed, tol)?
        }
    };
    out.status = cert.verdict;
    out.certificate = Some(cert);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_isospectral_problem() {
        let text = r#"{"system":"sym_eja:3","generators":"deriv:sym_eja:3",
            "set":{"kind":"orbit","u":[3,1,-2,0.5,0,1]},
            "objective":{"kind":"linear","params":{"c":[1,0,-1,2,0.3,0]}},
            "iters":200,"tol":1e-8}"#;
        let out = run_problem(&ProblemSpec::from_json(text).unwrap()).unwrap();
        assert_eq!(out.status, Status::Pass);
        assert!(out.certificate.unwrap().max_residual <= 1e-6);
    }

    #[test]
    fn complementarity_problem() {
        let text = r#"{"system":"sym_eja:2","set":{"kind":"symmetric_cone"},
            "objective":{"kind":"complementarity","params":{"m":[[2,0,0],[0,1,0],[0,0,1]],"q":[-1,0.5,0.2]}},
            "iters":10000,"tol":1e-8}"#;
        let out = run_problem(&ProblemSpec::from_json(text).unwrap()).unwrap();
        assert_eq!(out.status, Status::Pass, "{out:?}");
        let json = serde_json::to_string(&out).unwrap();
        assert!(json.contains("\"jordan_product\""));
        assert!(!json.contains("\"certificate\""));
    }

    #[test]
    fn orbit_max_problem() {
        let text = r#"{"system":"rn_sort:4","set":{"kind":"orbit","u":[1,2,3,4]},
            "objective":{"kind":"orbit_max","params":{"c":[4,3,2,1]}}}"#;
        let out = run_problem(&ProblemSpec::from_json(text).unwrap()).unwrap();
        assert_eq!(out.status, Status::Pass);
        assert_eq!(out.orbit_max.unwrap().value, 30.0);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(
            ProblemSpec::from_json("{}"),
            Err(Error::Schema(_))
        ));
        let bad_kind = r#"{"system":"abs","set":{"kind":"torus"},"objective":{"kind":"linear","params":{"c":[1]}}}"#;
        assert!(matches!(
            ProblemSpec::from_json(bad_kind),
            Err(Error::Schema(_))
        ));
        let bad_tol = r#"{"system":"abs","set":{"kind":"nonneg_orthant"},
            "objective":{"kind":"linear","params":{"c":[1]}},"tol":0}"#;
        assert!(matches!(
            ProblemSpec::from_json(bad_tol),
            Err(Error::Schema(_))
        ));
        let wrong_dim = r#"{"system":"rn_sort:3","set":{"kind":"orbit","u":[1,2]},
            "objective":{"kind":"linear","params":{"c":[1,2,3]}}}"#;
        let spec = ProblemSpec::from_json(wrong_dim).unwrap();
        assert!(matches!(
            run_problem(&spec),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn forced_nonconvergence_is_inconclusive() {
        let text = r#"{"system":"sym_eja:3","set":{"kind":"orbit","u":[3,1,-2,0.5,0,1]},
            "objective":{"kind":"linear","params":{"c":[1,0,-1,2,0.3,0]}},
            "step":{"kind":"constant","step":0.001},"iters":1}"#;
        let out = run_problem(&ProblemSpec::from_json(text).unwrap()).unwrap();
        assert_eq!(out.status, Status::Inconclusive);
    }
}
