//! Systems and generator sets addressable by name.
//!
//! Systems: `rn_sort:N[:scale=S]`, `norm:N`, `abs`, `sym_eja:N`,
//! `spin:N[:scale=S]`, `svd:MxN`, `subspace_ex59`, `compose_ex43`,
//! `hyp_product:N`, `hyp_spin:N`, `hyp_det:N`.
//!
//! Generator sets: `skew:N`, `perm:N`, `diag_lyap:N`, `deriv:sym_eja:N`,
//! `deriv:spin:N`, `cone:sym_eja:N`, `cp_cone:N`, `uxv:N`, `uxv:MxN`
//! (rectangular, experimental), `spin_aut:N`, `none:D`.

use crate::error::{Error, Result};
use crate::ftvn::SemiFtvnSystem;
use crate::hyperbolic::{det_polynomial, product_polynomial, spin_polynomial, HyperbolicSystem};
use crate::lie::{self, LieGeneratorSet};
use crate::systems::{self, EuclideanJordanAlgebra};

/// Systems covered by the axiom battery.
pub const AXIOM_SUITE: &[&str] = &[
    "rn_sort:2",
    "rn_sort:3",
    "rn_sort:4",
    "rn_sort:6",
    "norm:3",
    "abs",
    "sym_eja:2",
    "sym_eja:3",
    "sym_eja:4",
    "spin:2",
    "spin:3",
    "svd:3x4",
    "subspace_ex59",
    "compose_ex43",
    "hyp_product:4",
    "hyp_spin:3",
    "hyp_det:3",
];

fn parse_usize(s: &str, full: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(Error::UnknownSystem(full.to_string())),
    }
}

fn parse_scale(rest: &[&str], default: f64, full: &str) -> Result<f64> {
    match rest {
        [] => Ok(default),
        [s] => match s.strip_prefix("scale=").and_then(|v| v.parse::<f64>().ok()) {
            Some(v) if v > 0.0 && v.is_finite() => Ok(v),
            _ => Err(Error::UnknownSystem(full.to_string())),
        },
        _ => Err(Error::UnknownSystem(full.to_string())),
    }
}

fn parse_shape(s: &str, full: &str) -> Result<(usize, usize)> {
    let (m, n) = s
        .split_once('x')
        .ok_or_else(|| Error::UnknownSystem(full.to_string()))?;
    Ok((parse_usize(m, full)?, parse_usize(n, full)?))
}

pub fn system_by_name(name: &str) -> Result<SemiFtvnSystem> {
    let parts: Vec<&str> = name.split(':').collect();
    let unknown = || Error::UnknownSystem(name.to_string());
    let sys = match parts.as_slice() {
        ["abs"] => systems::make_abs_system(),
        ["subspace_ex59"] => systems::make_plane_subspace_system().system,
        ["compose_ex43"] => systems::make_sort_spin_composition(),
        ["rn_sort", n, rest @ ..] => {
            systems::make_rn_sort_scaled(parse_usize(n, name)?, parse_scale(rest, 1.0, name)?)
        }
        ["norm", n] => systems::make_norm_system(parse_usize(n, name)?),
        ["sym_eja", n] => systems::make_sym_eja(parse_usize(n, name)?).1,
        ["spin", n, rest @ ..] => {
            let n = parse_usize(n, name)?;
            if n < 2 {
                return Err(unknown());
            }
            systems::make_spin_eja(n, parse_scale(rest, 2.0, name)?).1
        }
        ["svd", shape] => {
            let (m, n) = parse_shape(shape, name)?;
            systems::make_singular_value_system(m, n)
        }
        ["hyp_product" | "hyp_spin" | "hyp_det", _] => hyperbolic_by_name(name)?.system().clone(),
        _ => return Err(unknown()),
    };
    Ok(sys.with_name(name))
}

pub fn hyperbolic_by_name(name: &str) -> Result<HyperbolicSystem> {
    let parts: Vec<&str> = name.split(':').collect();
    let poly = match parts.as_slice() {
        ["hyp_product", n] => product_polynomial(parse_usize(n, name)?),
        ["hyp_spin", n] => match parse_usize(n, name)? {
            1 => return Err(Error::UnknownSystem(name.to_string())),
            d => spin_polynomial(d),
        },
        ["hyp_det", n] => det_polynomial(parse_usize(n, name)?),
        _ => return Err(Error::UnknownSystem(name.to_string())),
    };
    HyperbolicSystem::new(poly, name)
}

/// The Jordan algebra behind an algebra-backed system name.
pub fn algebra_by_name(name: &str) -> Result<EuclideanJordanAlgebra> {
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["sym_eja", n] | ["hyp_det", n] => {
            Ok(EuclideanJordanAlgebra::symmetric(parse_usize(n, name)?))
        }
        ["spin", n, ..] | ["hyp_spin", n] => {
            Ok(EuclideanJordanAlgebra::spin(parse_usize(n, name)?))
        }
        ["rn", n] | ["hyp_product", n] | ["rn_sort", n, ..] => {
            Ok(EuclideanJordanAlgebra::componentwise(parse_usize(n, name)?))
        }
        _ => Err(Error::UnknownSystem(name.to_string())),
    }
}

pub fn generators_by_name(name: &str) -> Result<LieGeneratorSet> {
    let parts: Vec<&str> = name.split(':').collect();
    let unknown = || Error::UnknownGenerators(name.to_string());
    let num = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|v| *v >= 1)
            .ok_or_else(unknown)
    };
    let set = match parts.as_slice() {
        ["skew", n] => lie::skew_basis(num(n)?),
        ["perm", n] => lie::permutation_group_lie(num(n)?),
        ["diag_lyap", n] => lie::diagonal_lyapunov_basis(num(n)?),
        ["deriv", "sym_eja", n] => {
            lie::derivation_span(&EuclideanJordanAlgebra::symmetric(num(n)?))
        }
        ["deriv", "spin", n] if num(n)? >= 2 => {
            lie::derivation_span(&EuclideanJordanAlgebra::spin(num(n)?))
        }
        ["cone", "sym_eja", n] => {
            lie::eja_cone_lie_span(&EuclideanJordanAlgebra::symmetric(num(n)?))
        }
        ["cone", "spin", n] if num(n)? >= 2 => {
            lie::eja_cone_lie_span(&EuclideanJordanAlgebra::spin(num(n)?))
        }
        ["cp_cone", n] => lie::cp_cone_lie_span(num(n)?),
        ["uxv", shape] => match shape.split_once('x') {
            Some((m, n)) => lie::uxv_lie(num(m)?, num(n)?),
            None => lie::uxv_group_lie(num(shape)?),
        },
        ["spin_aut", n] if num(n)? >= 2 => lie::spin_automorphisms(num(n)?),
        ["none", d] => lie::empty_set(num(d)?),
        _ => return Err(unknown()),
    };
    Ok(set)
}

/// Generators of the automorphism group of a named system, where known.
pub fn default_generators(system: &str) -> Result<String> {
    let parts: Vec<&str> = system.split(':').collect();
    let sys = system_by_name(system)?;
    Ok(match parts.as_slice() {
        ["rn_sort", n, ..] | ["hyp_product", n] => format!("perm:{n}"),
        ["norm", n] => format!("skew:{n}"),
        ["abs"] => "perm:1".into(),
        ["sym_eja", n] | ["hyp_det", n] => format!("deriv:sym_eja:{n}"),
        ["spin", n, ..] | ["hyp_spin", n] => format!("spin_aut:{n}"),
        ["svd", shape] => match shape.split_once('x') {
            Some((m, n)) if m == n => format!("uxv:{m}"),
            _ => format!("none:{}", sys.dim_v),
        },
        _ => format!("none:{}", sys.dim_v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_system_resolves() {
        for name in AXIOM_SUITE {
            let s = system_by_name(name).unwrap();
            assert_eq!(s.name, *name);
            let g = generators_by_name(&default_generators(name).unwrap()).unwrap();
            assert_eq!(g.dim, s.dim_v, "{name}");
        }
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(
            system_by_name("bogus"),
            Err(Error::UnknownSystem(_))
        ));
        assert!(matches!(
            system_by_name("rn_sort:0"),
            Err(Error::UnknownSystem(_))
        ));
        assert!(matches!(
            system_by_name("spin:1"),
            Err(Error::UnknownSystem(_))
        ));
        assert!(matches!(
            generators_by_name("skew"),
            Err(Error::UnknownGenerators(_))
        ));
    }

    #[test]
    fn scaled_names() {
        let s = system_by_name("spin:2:scale=2").unwrap();
        assert_eq!(s.inner_v(&[1.0, 0.0], &[1.0, 0.0]), 2.0);
        let s = system_by_name("rn_sort:3:scale=2").unwrap();
        assert_eq!(s.inner_v(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), 2.0);
    }

    #[test]
    fn generator_names() {
        assert_eq!(generators_by_name("skew:3").unwrap().len(), 3);
        assert_eq!(generators_by_name("uxv:2x3").unwrap().dim, 6);
        assert_eq!(generators_by_name("cp_cone:3").unwrap().dim, 6);
        assert_eq!(generators_by_name("none:4").unwrap().len(), 0);
    }
}
