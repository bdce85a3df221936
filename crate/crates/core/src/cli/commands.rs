use std::fs;
use std::path::Path;

use serde_json::json;

use super::output::{emit, format_vec, Record};
use super::{exit_code, exit_for, HyperbolicCommand, RunConfig, EXIT_IO};
use crate::error::Error;
use crate::ftvn::{
    check_axioms, lambda_properties, prop34_battery, strong_commute, sublinearity_sampler,
    CheckReport, SemiFtvnSystem, Status,
};
use crate::hyperbolic::{
    characterization_battery, completeness_check, cone_membership, isometric_probe, lidskii_check,
    polarization_inner, strong_commute_char, HyperbolicPolynomial, HyperbolicSystem, EIG_TOL,
};
use crate::lie::commute_rel;
use crate::principles::{run_problem, ProblemSpec};
use crate::registry;

pub(crate) enum CmdError {
    Lib(Error),
    Io(String),
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError::Lib(e)
    }
}

type CmdResult = Result<Vec<Record>, CmdError>;

fn failure_report(
    config: &RunConfig,
    status: Status,
    witness: Option<Vec<Vec<f64>>>,
) -> CheckReport {
    CheckReport {
        check_name: config.command.clone(),
        status,
        max_residual: 0.0,
        witness,
        samples: 0,
        seed: config.seed,
        tol: config.tol,
    }
}

/// Emits the records and maps the outcome to an exit code. Errors that
/// carry a verdict (non-convergence, non-real roots) are emitted as reports.
pub(crate) fn finish(config: &RunConfig, result: CmdResult, count_inconclusive: bool) -> i32 {
    let records = match result {
        Ok(r) => r,
        Err(CmdError::Io(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_IO;
        }
        Err(CmdError::Lib(e)) => {
            eprintln!("error: {e}");
            let status = match e {
                Error::NoConvergence { .. } => Status::Inconclusive,
                Error::RootCountMismatch { .. } => Status::Fail,
                _ => return exit_code(&e),
            };
            let r = failure_report(config, status, None);
            if let Err(io) = emit(config, &[Record::report(&r)]) {
                eprintln!("error: {io}");
                return EXIT_IO;
            }
            return exit_code(&e);
        }
    };
    if let Err(e) = emit(config, &records) {
        eprintln!("error: cannot write report: {e}");
        return EXIT_IO;
    }
    exit_for(records.iter().filter_map(|r| r.status), count_inconclusive)
}

/// Comma-separated reals, optionally in brackets.
pub fn parse_vector(s: &str) -> Result<Vec<f64>, Error> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    let v: Vec<f64> = inner
        .split(',')
        .map(|t| match t.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(Error::Parse(format!(
                "`{}` is not a finite number in `{s}`",
                t.trim()
            ))),
        })
        .collect::<Result<_, _>>()?;
    Ok(v)
}

fn parse_dim(s: &str, dim: usize) -> Result<Vec<f64>, Error> {
    let v = parse_vector(s)?;
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    Ok(v)
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path)
        .map_err(|e| CmdError::Io(format!("cannot read {}: {e}", path.display())))
}

pub fn cmd_axioms(config: &RunConfig) -> i32 {
    let run = || -> CmdResult {
        let sys = registry::system_by_name(config.require_system()?)?;
        let (n, seed, tol) = (config.samples, config.seed, config.tol);
        let mut reports = check_axioms(&sys, n, seed, tol)?.all();
        reports.extend(lambda_properties(&sys, n, seed, tol)?.all());
        reports.push(sublinearity_sampler(&sys, n, seed, tol)?);
        Ok(reports.iter().map(Record::report).collect())
    };
    finish(config, run(), true)
}

pub fn cmd_commute(config: &RunConfig, a: &str, b: &str) -> i32 {
    let run = || -> CmdResult {
        let name = config.require_system()?;
        let sys = registry::system_by_name(name)?;
        let gens_name = match &config.generators {
            Some(g) => g.clone(),
            None => registry::default_generators(name)?,
        };
        let gens = registry::generators_by_name(&gens_name)?;
        if gens.dim != sys.dim_v {
            return Err(Error::DimensionMismatch {
                expected: sys.dim_v,
                found: gens.dim,
            }
            .into());
        }
        let (a, b) = (parse_dim(a, sys.dim_v)?, parse_dim(b, sys.dim_v)?);
        let (strong, gap) = strong_commute(&sys, &a, &b, config.tol)?;
        let (relative, residual) = commute_rel(&a, &b, &gens, sys.metric_v(), config.tol);
        let battery = prop34_battery(&sys, &a, &b, config.tol)?;
        let value = json!({
            "system": name,
            "generators": gens_name,
            "a": a,
            "b": b,
            "strong": strong,
            "gap": gap,
            "relative": relative,
            "relative_residual": residual,
            "equivalent_conditions": battery.conditions,
            "equivalent_residuals": battery.residuals,
        });
        let text = format!(
            "strong={strong} gap={gap:.6e} relative[{gens_name}]={relative} residual={residual:.6e} conditions_agree={}",
            battery.agree()
        );
        Ok(vec![Record::value(&value, text, None)])
    };
    finish(config, run(), true)
}

fn load_polynomial(
    config: &RunConfig,
    poly: Option<&Path>,
) -> Result<(HyperbolicPolynomial, String), CmdError> {
    match poly {
        Some(path) => {
            let p = HyperbolicPolynomial::from_json(&read_file(path)?)?;
            let stem = path
                .file_stem()
                .map_or("polynomial".into(), |s| s.to_string_lossy().into_owned());
            Ok((p, stem))
        }
        None => {
            let name = config
                .system
                .as_deref()
                .ok_or_else(|| Error::Parse("hyperbolic requires --poly or --system".into()))?;
            Ok((registry::hyperbolic_by_name(name)?.poly, name.to_string()))
        }
    }
}

fn probe_system(config: &RunConfig, poly: Option<&Path>) -> Result<SemiFtvnSystem, CmdError> {
    if poly.is_none() {
        if let Some(name) = &config.system {
            return Ok(registry::system_by_name(name)?);
        }
    }
    let (p, name) = load_polynomial(config, poly)?;
    Ok(HyperbolicSystem::new(p, name)?.system().clone())
}

pub fn cmd_hyperbolic(config: &RunConfig, poly: Option<&Path>, probe: &HyperbolicCommand) -> i32 {
    let (n, seed, tol) = (config.samples, config.seed, config.tol);
    let run = || -> CmdResult {
        if let HyperbolicCommand::Isometric { y, z, restarts } = probe {
            let sys = probe_system(config, poly)?;
            let (y, z) = (parse_dim(y, sys.dim_v)?, parse_dim(z, sys.dim_v)?);
            let out = isometric_probe(&sys, &y, &z, *restarts, seed, tol)?;
            return Ok(vec![Record::report(
                &out.report(&y, &z, *restarts, seed, tol),
            )]);
        }
        let (p, name) = load_polynomial(config, poly)?;
        let record = match probe {
            HyperbolicCommand::Eig { x } => {
                let x = parse_dim(x, p.dim)?;
                match p.eigmap(&x, EIG_TOL) {
                    Ok(l) => Record::value(
                        &json!({"polynomial": name, "x": x, "eigenvalues": l}),
                        format!("eigenvalues {}", format_vec(&l)),
                        None,
                    ),
                    Err(Error::RootCountMismatch { found, expected }) => {
                        eprintln!("error: {}", Error::RootCountMismatch { found, expected });
                        let mut r = failure_report(config, Status::Fail, Some(vec![x]));
                        r.check_name = "eigmap".into();
                        r.max_residual = expected.abs_diff(found) as f64;
                        r.samples = 1;
                        Record::report(&r)
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            HyperbolicCommand::Cone { x } => {
                let x = parse_dim(x, p.dim)?;
                let m = cone_membership(&p, &x, tol)?;
                let lmin = p.eigmap(&x, EIG_TOL)?.last().copied().unwrap_or(0.0);
                Record::value(
                    &json!({"polynomial": name, "x": x, "membership": m, "min_eigenvalue": lmin}),
                    format!(
                        "membership={} min_eigenvalue={lmin:.6e}",
                        format!("{m:?}").to_lowercase()
                    ),
                    None,
                )
            }
            HyperbolicCommand::Complete => Record::report(&completeness_check(&p, n, seed, tol)?),
            HyperbolicCommand::Inner { x, y } => {
                let (x, y) = (parse_dim(x, p.dim)?, parse_dim(y, p.dim)?);
                let v = polarization_inner(&p, &x, &y)?;
                Record::value(
                    &json!({"polynomial": name, "x": x, "y": y, "inner": v}),
                    format!("inner {v}"),
                    None,
                )
            }
            HyperbolicCommand::Lidskii => Record::report(&lidskii_check(
                &HyperbolicSystem::new(p, name)?,
                n,
                seed,
                tol,
            )?),
            HyperbolicCommand::Char {
                a: Some(a),
                b: Some(b),
            } => {
                let hs = HyperbolicSystem::new(p, name)?;
                let (a, b) = (parse_dim(a, hs.poly.dim)?, parse_dim(b, hs.poly.dim)?);
                let out = strong_commute_char(&hs, &a, &b, tol)?;
                Record::value(
                    &json!({
                        "a": a, "b": b, "strong": out.strong, "spectral": out.spectral,
                        "gap": out.gap, "spectral_residual": out.spectral_residual,
                        "status": out.report.status,
                    }),
                    format!(
                        "strong={} spectral={} gap={:.6e} spectral_residual={:.6e} {}",
                        out.strong, out.spectral, out.gap, out.spectral_residual, out.report.status
                    ),
                    Some(out.report.status),
                )
            }
            HyperbolicCommand::Char { .. } => Record::report(&characterization_battery(
                &HyperbolicSystem::new(p, name)?,
                n,
                seed,
                tol,
            )?),
            HyperbolicCommand::Isometric { .. } => unreachable!("handled above"),
        };
        Ok(vec![record])
    };
    finish(config, run(), true)
}

pub fn cmd_principles(config: &RunConfig, problem_file: &Path) -> i32 {
    let run = || -> CmdResult {
        let spec = ProblemSpec::from_json(&read_file(problem_file)?)?;
        let out = run_problem(&spec)?;
        let residual = out
            .certificate
            .as_ref()
            .map(|c| c.max_residual)
            .or(out.complementarity.as_ref().map(|c| c.report.max_residual))
            .unwrap_or(0.0);
        let text = format!(
            "{:<40} {:<12} max_residual={residual:.3e}",
            format!("principles.{}[{}]", out.problem, out.system),
            out.status.to_string()
        );
        Ok(vec![Record::value(&out, text, Some(out.status))])
    };
    finish(config, run(), true)
}
