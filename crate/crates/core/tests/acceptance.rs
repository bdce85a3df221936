//! Acceptance criteria, one line per criterion. Library results are checked
//! against oracles computed here: nalgebra for eigenvalues, singular values
//! and ranks, plain sorting and permutation enumeration for the ℝⁿ systems.

use std::fmt::Write as _;
use std::process::{Command, ExitCode, Stdio};

use nalgebra::{DMatrix, SymmetricEigen};
use semiftvn::ftvn::{
    center_probe, check_axioms, lambda_properties, strong_commute, strong_gap, SemiFtvnSystem,
    Status,
};
use semiftvn::hyperbolic::{
    characterization_battery, lidskii_check, polarization_inner, strong_commute_char,
};
use semiftvn::lie::{commute_rel, operator_commute, weak_center, LieGeneratorSet};
use semiftvn::principles::{
    certify, complementarity_demo, minimize_invariant, orbit_max, orbit_perturbation, InvariantSet,
    ObjectiveSpec, StepSchedule,
};
use semiftvn::registry::{self, AXIOM_SUITE};
use semiftvn::rng::{self, Rng};
use semiftvn::systems::{
    make_plane_subspace_system, make_sort_spin_composition, EuclideanJordanAlgebra,
};
use semiftvn::Result;

const SEED: u64 = 42;
const TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
    findings: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            detail: String::new(),
            findings: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl AsRef<str>) {
        if !ok {
            self.pass = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(what.as_ref());
        }
    }

    fn note(&mut self, what: impl AsRef<str>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(what.as_ref());
    }
}

// ---- oracles ----

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn diff(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn desc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn asc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

fn gaussian(r: &mut Rng, n: usize) -> Vec<f64> {
    rng::normal_vec(r, n)
}

/// Symmetric matrix from orthonormal coordinates: diagonal first, then the
/// upper triangle row by row, off-diagonal entries scaled by `1/√2`.
fn sym_from_coords(v: &[f64], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = v[i];
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            m[(i, j)] = v[k] / 2f64.sqrt();
            m[(j, i)] = v[k] / 2f64.sqrt();
            k += 1;
        }
    }
    m
}

fn coords_from_sym(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut v: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            v.push((m[(i, j)] + m[(j, i)]) / 2f64.sqrt());
        }
    }
    v
}

fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    desc(SymmetricEigen::new(m.clone()).eigenvalues.as_slice())
}

fn singular_values(x: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(rows, cols, x);
    desc(m.singular_values().as_slice())
}

fn random_orthogonal(r: &mut Rng, n: usize) -> DMatrix<f64> {
    let b = DMatrix::from_row_slice(n, n, &gaussian(r, n * n));
    SymmetricEigen::new(&b + b.transpose()).eigenvectors
}

fn permutations(v: &[f64]) -> Vec<Vec<f64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// `λ` for the systems with a closed form; `None` when only the axioms are
/// recomputed.
fn oracle_lambda(name: &str, x: &[f64]) -> Option<Vec<f64>> {
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["rn_sort", _] | ["hyp_product", _] => Some(desc(x)),
        ["norm", _] => Some(vec![norm(x)]),
        ["abs"] => Some(vec![x[0].abs()]),
        ["sym_eja", n] | ["hyp_det", n] => {
            Some(sym_eigenvalues(&sym_from_coords(x, n.parse().ok()?)))
        }
        ["spin", _] | ["hyp_spin", _] => {
            let r = norm(&x[1..]);
            Some(vec![x[0] + r, x[0] - r])
        }
        ["svd", shape] => {
            let (m, n) = shape.split_once('x')?;
            Some(singular_values(x, m.parse().ok()?, n.parse().ok()?))
        }
        _ => None,
    }
}

/// `max_D |⟨Da, b⟩| / (‖D‖_F‖a‖‖b‖)` recomputed with the system's Gram
/// matrices.
fn relative_residual(sys: &SemiFtvnSystem, gens: &LieGeneratorSet, a: &[f64], b: &[f64]) -> f64 {
    let g = sys.metric_v().gram();
    let n = a.len();
    let gram = DMatrix::from_row_slice(n, n, g.as_slice());
    let (av, bv) = (
        nalgebra::DVector::from_column_slice(a),
        nalgebra::DVector::from_column_slice(b),
    );
    let scale = (av.dot(&(&gram * &av))).sqrt() * (bv.dot(&(&gram * &bv))).sqrt();
    gens.generators
        .iter()
        .map(|d| {
            let dm = DMatrix::from_row_slice(n, n, d.as_slice());
            ((&dm * &av).dot(&(&gram * &bv))).abs() / (dm.norm() * scale + f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

fn mixed(tol: f64, scale: f64) -> f64 {
    tol * scale.max(1.0)
}

// ---- criteria ----

fn axiom_suite() -> Result<Outcome> {
    let mut out = Outcome::new();
    for name in AXIOM_SUITE {
        let sys = registry::system_by_name(name)?;
        let mut reports = check_axioms(&sys, 500, SEED, TOL)?.all();
        reports.extend(lambda_properties(&sys, 500, SEED, TOL)?.all());
        for r in &reports {
            out.require(
                r.passed(),
                format!("{} on {name}: {}", r.check_name, r.max_residual),
            );
        }

        let mut r = rng::stream("acceptance/axioms", SEED);
        let (mut a1, mut a2, mut homog, mut lip, mut orac) = (0f64, 0f64, 0f64, 0f64, 0f64);
        for _ in 0..500 {
            let (x, y) = (sys.sample(&mut r), sys.sample(&mut r));
            let (lx, ly) = (sys.lambda(&x)?, sys.lambda(&y)?);
            let (nx, ny) = (sys.norm_v(&x), sys.norm_v(&y));
            a1 = a1.max((sys.norm_w(&lx) - nx).abs() / nx.max(1.0));
            a2 =
                a2.max((sys.inner_v(&x, &y) - sys.inner_w(&lx, &ly)).max(0.0) / (nx * ny).max(1.0));
            let alpha = rng::uniform(&mut r, 0.0, 3.0);
            let scaled = sys.lambda(&x.iter().map(|v| alpha * v).collect::<Vec<_>>())?;
            let expect: Vec<f64> = lx.iter().map(|v| alpha * v).collect();
            homog = homog.max(sys.norm_w(&diff(&scaled, &expect)) / (alpha * nx).max(1.0));
            let d = sys.norm_w(&diff(&lx, &ly)) - sys.norm_v(&diff(&x, &y));
            lip = lip.max(d.max(0.0) / (nx + ny).max(1.0));
            if let Some(o) = oracle_lambda(name, &x) {
                orac = orac.max(norm(&diff(&lx, &o)) / norm(&o).max(1.0));
            }
        }
        for (label, v) in [
            ("A1", a1),
            ("A2", a2),
            ("homogeneity", homog),
            ("lipschitz", lip),
            ("oracle λ", orac),
        ] {
            out.require(v <= TOL, format!("{label} on {name}: {v:.3e}"));
        }
    }
    out.note(format!("{} systems", AXIOM_SUITE.len()));
    Ok(out)
}

fn micro_example() -> Result<Outcome> {
    let mut out = Outcome::new();
    for n in [2usize, 3, 4, 6] {
        let sys = registry::system_by_name(&format!("rn_sort:{n}"))?;
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        a[0] = 1.0;
        b[1] = 1.0;
        let gap = strong_gap(&sys, &a, &b, TOL)?;
        let oracle = dot(&desc(&a), &desc(&b)) - dot(&a, &b);
        out.require(
            (gap - 1.0).abs() <= 1e-12 && (oracle - 1.0).abs() <= 1e-12,
            format!("n={n}: gap {gap}"),
        );
        let gens = registry::generators_by_name(&format!("perm:{n}"))?;
        let (rel, res) = commute_rel(&a, &b, &gens, sys.metric_v(), TOL);
        out.require(rel, format!("n={n}: commute_rel residual {res}"));
    }
    out.note("gap 1 for e1, e2 with n in {2,3,4,6}");
    Ok(out)
}

fn generator_pairs() -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for s in AXIOM_SUITE {
        pairs.push((s.to_string(), registry::default_generators(s)?));
    }
    for (s, g) in [
        ("spin:2", "deriv:spin:2"),
        ("spin:3", "deriv:spin:3"),
        ("svd:3x3", "uxv:3"),
    ] {
        pairs.push((s.into(), g.into()));
    }
    Ok(pairs)
}

fn strong_implies_relative() -> Result<Outcome> {
    let mut out = Outcome::new();
    let pairs = generator_pairs()?;
    for (sys_name, gens_name) in &pairs {
        let sys = registry::system_by_name(sys_name)?;
        let gens = registry::generators_by_name(gens_name)?;
        let mut r = rng::stream(
            &format!("acceptance/strong_relative/{sys_name}/{gens_name}"),
            SEED,
        );
        let (mut kept, mut attempts, mut worst, mut counterexamples) =
            (0usize, 0usize, 0f64, 0usize);
        while kept < 500 && attempts < 5000 {
            attempts += 1;
            let (x, u) = (sys.sample(&mut r), sys.sample(&mut r));
            let y = sys.orbit_argmax(&x, &u)?;
            let gap = sys.inner_w(&sys.lambda(&x)?, &sys.lambda(&y)?) - sys.inner_v(&x, &y);
            if gap > mixed(TOL, sys.norm_v(&x) * sys.norm_v(&y))
                || !strong_commute(&sys, &x, &y, TOL)?.0
            {
                continue;
            }
            kept += 1;
            let (lib_ok, lib_res) = commute_rel(&x, &y, &gens, sys.metric_v(), TOL);
            let res = relative_residual(&sys, &gens, &x, &y);
            worst = worst.max(res).max(lib_res);
            if !lib_ok || res > TOL {
                counterexamples += 1;
            }
        }
        out.require(
            kept == 500,
            format!("{sys_name}/{gens_name}: only {kept} strongly commuting pairs"),
        );
        out.require(
            counterexamples == 0,
            format!("{sys_name}/{gens_name}: {counterexamples} counterexamples, worst {worst:.3e}"),
        );
    }
    out.note(format!(
        "{} system/generator combinations x 500 pairs",
        pairs.len()
    ));
    Ok(out)
}

fn derivation_equivalence() -> Result<Outcome> {
    let mut out = Outcome::new();
    let tol = 1e-7;
    for n in [2usize, 3, 4] {
        let alg = EuclideanJordanAlgebra::symmetric(n);
        let sys = registry::system_by_name(&format!("sym_eja:{n}"))?;
        let gens = registry::generators_by_name(&format!("deriv:sym_eja:{n}"))?;
        let d = alg.dim;
        let mut r = rng::stream(&format!("acceptance/derivation/{n}"), SEED);
        let mut disagreements = 0;
        for i in 0..1100 {
            let constructed = i >= 1000;
            let (a, b) = if constructed {
                let q = random_orthogonal(&mut r, n);
                let da = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(gaussian(&mut r, n)));
                let db = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(gaussian(&mut r, n)));
                (
                    coords_from_sym(&(&q * da * q.transpose())),
                    coords_from_sym(&(&q * db * q.transpose())),
                )
            } else {
                (gaussian(&mut r, d), gaussian(&mut r, d))
            };
            let (rel, _) = commute_rel(&a, &b, &gens, sys.metric_v(), tol);
            let (op, _) = operator_commute(&alg, &a, &b, tol);
            let (am, bm) = (sym_from_coords(&a, n), sym_from_coords(&b, n));
            let comm =
                (&am * &bm - &bm * &am).norm() / (am.norm() * bm.norm()).max(f64::MIN_POSITIVE);
            let matrix = comm <= tol;
            if rel != op || rel != matrix || (constructed && !rel) {
                disagreements += 1;
            }
        }
        out.require(
            disagreements == 0,
            format!("sym_eja:{n}: {disagreements}/1100 disagreements"),
        );
    }
    out.note("1100 pairs on each of sym_eja:2/3/4, 100% agreement");
    Ok(out)
}

fn uxv_equivalence() -> Result<Outcome> {
    let mut out = Outcome::new();
    let tol = 1e-7;
    for n in [2usize, 3] {
        let sys = registry::system_by_name(&format!("svd:{n}x{n}"))?;
        let gens = registry::generators_by_name(&format!("uxv:{n}"))?;
        let mut r = rng::stream(&format!("acceptance/uxv/{n}"), SEED);
        let mut disagreements = 0;
        for i in 0..1100 {
            let constructed = i >= 1000;
            let (x, y) = if constructed {
                let (u, v) = (random_orthogonal(&mut r, n), random_orthogonal(&mut r, n));
                let s = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(gaussian(&mut r, n)));
                let t = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(gaussian(&mut r, n)));
                (&u * s * v.transpose(), &u * t * v.transpose())
            } else {
                (
                    DMatrix::from_row_slice(n, n, &gaussian(&mut r, n * n)),
                    DMatrix::from_row_slice(n, n, &gaussian(&mut r, n * n)),
                )
            };
            let row_major = |m: &DMatrix<f64>| m.transpose().as_slice().to_vec();
            let (xv, yv) = (row_major(&x), row_major(&y));
            let (rel, _) = commute_rel(&xv, &yv, &gens, sys.metric_v(), tol);
            let (xyt, xty) = (&x * y.transpose(), x.transpose() * &y);
            let asym = (&xyt - xyt.transpose())
                .norm()
                .max((&xty - xty.transpose()).norm());
            let sym = asym <= tol * (x.norm() * y.norm()).max(1.0);
            if rel != sym || (constructed && !rel) {
                disagreements += 1;
            }
        }
        out.require(
            disagreements == 0,
            format!("M{n}: {disagreements}/1100 disagreements"),
        );
    }
    out.note("1100 pairs on each of M2/M3, 100% agreement");
    Ok(out)
}

/// Dimension of the joint kernel of the generators, by SVD rank.
fn kernel_dim(gens: &LieGeneratorSet) -> usize {
    let n = gens.dim;
    if gens.generators.is_empty() {
        return n;
    }
    let rows: Vec<f64> = gens
        .generators
        .iter()
        .flat_map(|d| d.as_slice().to_vec())
        .collect();
    let stacked = DMatrix::from_row_slice(gens.len() * n, n, &rows);
    n - stacked.rank(1e-9 * stacked.norm().max(1.0))
}

fn centers() -> Result<Outcome> {
    let mut out = Outcome::new();
    for n in [2usize, 3, 4, 6] {
        let gens = registry::generators_by_name(&format!("perm:{n}"))?;
        let dim = weak_center(&gens, TOL)?.len();
        out.require(
            dim == n && kernel_dim(&gens) == n,
            format!("perm:{n} center dimension {dim}"),
        );
    }
    for n in [2usize, 3, 4] {
        let gens = registry::generators_by_name(&format!("skew:{n}"))?;
        let dim = weak_center(&gens, TOL)?.len();
        out.require(
            dim == 0 && kernel_dim(&gens) == 0,
            format!("skew:{n} center dimension {dim}"),
        );
    }
    for n in [2usize, 3, 4] {
        let gens = registry::generators_by_name(&format!("deriv:sym_eja:{n}"))?;
        let basis = weak_center(&gens, TOL)?;
        let e = coords_from_sym(&DMatrix::identity(n, n));
        let ok = match basis.as_slice() {
            [b] => 1.0 - (dot(b, &e) / (norm(b) * norm(&e))).abs() <= 1e-8,
            _ => false,
        };
        out.require(
            ok && kernel_dim(&gens) == 1,
            format!("deriv:sym_eja:{n} center {} vectors", basis.len()),
        );
    }
    let sys = registry::system_by_name("sym_eja:3")?;
    let e = coords_from_sym(&DMatrix::identity(3, 3));
    for alpha in [0.0, 1.0, -2.5, 4.0] {
        let x: Vec<f64> = e.iter().map(|v| alpha * v).collect();
        out.require(
            center_probe(&sys, &x, 50, SEED, TOL)?.passed(),
            format!("center_probe rejects {alpha}e"),
        );
    }
    let mut r = rng::stream("acceptance/center", SEED);
    let mut rejected = 0;
    for _ in 0..100 {
        let x = sys.sample(&mut r);
        if center_probe(&sys, &x, 50, SEED, TOL)?.status == Status::Fail {
            rejected += 1;
        }
    }
    out.require(
        rejected == 100,
        format!("center_probe rejected {rejected}/100 non-multiples"),
    );
    out.note(format!("non-multiples rejected {rejected}/100"));
    Ok(out)
}

fn majorized(u: &[f64], v: &[f64], tol: f64) -> bool {
    let (us, vs) = (desc(u), desc(v));
    let mut partial = 0.0;
    for (a, b) in us.iter().zip(&vs) {
        partial += a - b;
        if partial > tol {
            return false;
        }
    }
    partial.abs() <= tol
}

fn hyperbolic() -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut r = rng::stream("acceptance/hyperbolic", SEED);
    for n in [3usize, 4, 6] {
        let hs = registry::hyperbolic_by_name(&format!("hyp_product:{n}"))?;
        let worst = (0..500)
            .map(|_| {
                let x = gaussian(&mut r, n);
                Ok(norm(&diff(&hs.eigmap(&x)?, &desc(&x))) / norm(&x).max(1.0))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.require(
            worst <= TOL,
            format!("product:{n} eigmap vs sort {worst:.3e}"),
        );
    }
    for n in [2usize, 3, 4] {
        let hs = registry::hyperbolic_by_name(&format!("hyp_det:{n}"))?;
        let d = hs.poly.dim;
        let (mut eig, mut pol) = (0f64, 0f64);
        for _ in 0..500 {
            let (x, y) = (gaussian(&mut r, d), gaussian(&mut r, d));
            let oracle = sym_eigenvalues(&sym_from_coords(&x, n));
            eig = eig.max(norm(&diff(&hs.eigmap(&x)?, &oracle)) / norm(&x).max(1.0));
            let trace = (sym_from_coords(&x, n) * sym_from_coords(&y, n)).trace();
            pol = pol.max(
                (polarization_inner(&hs.poly, &x, &y)? - trace).abs()
                    / (norm(&x) * norm(&y)).max(1.0),
            );
        }
        out.require(
            eig <= TOL,
            format!("det:{n} eigmap vs eigenvalues {eig:.3e}"),
        );
        out.require(
            pol <= TOL,
            format!("det:{n} polarization vs trace {pol:.3e}"),
        );
    }
    for name in ["hyp_product:4", "hyp_spin:3", "hyp_det:3"] {
        let hs = registry::hyperbolic_by_name(name)?;
        let lid = lidskii_check(&hs, 1000, SEED, TOL)?;
        out.require(
            lid.passed(),
            format!("{name} lidskii residual {:.3e}", lid.max_residual),
        );
        let char = characterization_battery(&hs, 1000, SEED, TOL)?;
        out.require(
            char.passed(),
            format!("{name} characterization {:.3e}", char.max_residual),
        );
        let sys = hs.system();
        let mut violations = 0;
        for _ in 0..1000 {
            let (x, y) = (sys.sample(&mut r), sys.sample(&mut r));
            let d: Vec<f64> = diff(&hs.eigmap(&x)?, &hs.eigmap(&y)?);
            let l = hs.eigmap(&diff(&x, &y))?;
            if !majorized(&d, &l, 1e-9 * (1.0 + norm(&d) + norm(&l))) {
                violations += 1;
            }
        }
        out.require(
            violations == 0,
            format!("{name}: {violations}/1000 majorization violations"),
        );
    }
    // similarly ordered vectors are exactly the strongly commuting pairs for the product polynomial
    let hs = registry::hyperbolic_by_name("hyp_product:4")?;
    let mut agree = 0;
    for i in 0..1000 {
        let a = gaussian(&mut r, 4);
        let b = if i % 2 == 0 {
            let (w, order) = (desc(&gaussian(&mut r, 4)), {
                let mut idx: Vec<usize> = (0..4).collect();
                idx.sort_by(|&p, &q| a[q].total_cmp(&a[p]));
                idx
            });
            let mut b = vec![0.0; 4];
            for (k, &j) in order.iter().enumerate() {
                b[j] = w[k];
            }
            b
        } else {
            gaussian(&mut r, 4)
        };
        let ordered = (0..4).all(|p| (0..4).all(|q| (a[p] - a[q]) * (b[p] - b[q]) >= 0.0));
        let c = strong_commute_char(&hs, &a, &b, TOL)?;
        if c.strong == ordered && c.spectral == ordered {
            agree += 1;
        }
    }
    out.require(
        agree == 1000,
        format!("characterization vs ordering {agree}/1000"),
    );
    out.note(format!("characterization agreement {agree}/1000"));
    Ok(out)
}

fn counterexamples() -> Result<Outcome> {
    let mut out = Outcome::new();

    let ss = make_plane_subspace_system();
    let (c_parent, u_parent) = (vec![3.0, 1.0, 0.0], vec![-3.0, -1.0, 0.0]);
    let (c, u) = (ss.coordinates(&c_parent), ss.coordinates(&u_parent));
    let orbit = ss.system.enumerate_orbit(&u)?;
    out.require(
        orbit.len() == 1 && norm(&diff(&ss.embed(&orbit[0]), &u_parent)) <= 1e-12,
        format!("subspace orbit has {} points", orbit.len()),
    );
    // plane normal (1,1,1) × (3,1,0)
    let normal = [-1.0, 3.0, -2.0];
    let in_plane: Vec<Vec<f64>> = permutations(&u_parent)
        .into_iter()
        .filter(|p| dot(p, &normal).abs() <= 1e-12)
        .collect();
    out.require(
        in_plane.len() == 1,
        format!("oracle orbit has {} points", in_plane.len()),
    );
    let achieved = in_plane
        .iter()
        .map(|p| dot(&c_parent, p))
        .fold(f64::NEG_INFINITY, f64::max);
    let predicted = dot(&desc(&c_parent), &desc(&u_parent));
    let lib = semiftvn::ftvn::ftvn_residual(&ss.system, &c, &u)?;
    out.require(
        (achieved + 10.0).abs() <= 1e-12 && (predicted + 1.0).abs() <= 1e-12,
        format!("oracle achieved {achieved} predicted {predicted}"),
    );
    out.require(
        (lib.residual - 9.0).abs() <= 1e-9,
        format!("FTvN residual {}", lib.residual),
    );
    match ss.range_nonconvexity(&[-2.0, -1.0, 0.0, 1.0, 2.0])? {
        Some((w1, w2, res)) => {
            let mid: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| 0.5 * (a + b)).collect();
            let oracle = permutations(&mid)
                .iter()
                .map(|p| dot(p, &normal).abs() / norm(&normal))
                .fold(f64::INFINITY, f64::min);
            out.require(
                res > 0.01 && oracle > 0.01,
                format!("range residual {res:.4} oracle {oracle:.4}"),
            );
            out.note(format!("subspace residual 9, range gap {oracle:.3}"));
        }
        None => out.require(false, "no range witness"),
    }

    let sys = make_sort_spin_composition();
    let (c, u) = ([1.0, -1.0], [-1.0, 2.0]);
    let (nc, nu) = (sys.lambda(&c)?, sys.lambda(&u)?);
    out.require(
        nc == [2.0, 0.0] && nu == [3.0, 1.0],
        format!("nu(c)={nc:?} nu(u)={nu:?}"),
    );
    let nu_oracle = |x: &[f64]| {
        let s = desc(x);
        [s[0] + s[1].abs(), s[0] - s[1].abs()]
    };
    let mut candidates = Vec::new();
    for (p, q) in [(2.0, 1.0), (1.0, 2.0)] {
        for (sp, sq) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            candidates.push(vec![sp * p, sq * q]);
        }
    }
    let orbit: Vec<Vec<f64>> = candidates
        .into_iter()
        .filter(|x| nu_oracle(x) == [3.0, 1.0])
        .collect();
    let brute = orbit
        .iter()
        .map(|x| 2.0 * dot(&c, x))
        .fold(f64::NEG_INFINITY, f64::max);
    let lib = sys
        .enumerate_orbit(&u)?
        .iter()
        .map(|x| sys.inner_v(&c, x))
        .fold(f64::NEG_INFINITY, f64::max);
    out.require(
        (brute - lib).abs() <= 1e-12,
        format!("orbit maximum {lib} vs oracle {brute}"),
    );
    let finding = if (brute - 6.0).abs() <= 1e-12 {
        format!(
            "compose orbit maximum {brute} over {} points equals 6",
            orbit.len()
        )
    } else {
        format!("compose orbit maximum {brute} differs from 6")
    };
    out.findings.push(finding);
    let mut r = rng::stream("acceptance/compose_search", SEED);
    let mut worst = 0f64;
    for _ in 0..200 {
        let (c, u) = (sys.sample(&mut r), sys.sample(&mut r));
        let best = sys
            .enumerate_orbit(&u)?
            .iter()
            .map(|x| 2.0 * dot(&c, x))
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((best - dot(&nu_oracle(&c), &nu_oracle(&u))).abs());
    }
    out.findings.push(format!(
        "compose FTvN identity fails on random pairs by up to {worst:.3}"
    ));
    Ok(out)
}

fn principles() -> Result<Outcome> {
    let mut out = Outcome::new();
    let bound = 1e-6;

    let sys = registry::system_by_name("sym_eja:3")?;
    let gens = registry::generators_by_name("deriv:sym_eja:3")?;
    let mut r = rng::stream("acceptance/isospectral", SEED);
    let (mut certified, mut rejected, mut worst_value) = (0, 0, 0f64);
    for _ in 0..50 {
        let (c, u) = (sys.sample(&mut r), sys.sample(&mut r));
        let set = InvariantSet::orbit(&sys, &u);
        let obj = ObjectiveSpec::linear(sys.metric_v(), &c);
        let (a, cert) =
            minimize_invariant(&sys, &gens, &set, &obj, &u, StepSchedule::Auto, 500, TOL)?;
        if cert.verdict == Status::Pass && cert.max_residual <= bound {
            certified += 1;
        }
        // min over the orbit pairs the eigenvalues in opposite order
        let (lc, lu) = (
            sym_eigenvalues(&sym_from_coords(&c, 3)),
            asc(&sym_eigenvalues(&sym_from_coords(&u, 3))),
        );
        worst_value =
            worst_value.max((dot(&c, &a) - dot(&lc, &lu)).abs() / (norm(&c) * norm(&u)).max(1.0));
        let moved = orbit_perturbation(&gens, sys.metric_v(), &a, 0.1 * norm(&a).max(1.0), &mut r);
        if !certify(&moved, &c, &gens, sys.metric_v(), bound).passed() {
            rejected += 1;
        }
    }
    out.require(
        certified == 50,
        format!("isospectral certified {certified}/50"),
    );
    out.require(
        worst_value <= bound,
        format!("isospectral objective off the optimum by {worst_value:.3e}"),
    );
    out.require(
        rejected >= 45,
        format!("perturbations rejected {rejected}/50"),
    );

    let mut cr = rng::stream("acceptance/complementarity", SEED);
    let demos = [
        ("rn:3", EuclideanJordanAlgebra::componentwise(3), None),
        ("sym_eja:2", EuclideanJordanAlgebra::symmetric(2), Some(2)),
        ("sym_eja:3", EuclideanJordanAlgebra::symmetric(3), Some(3)),
        ("spin:3", EuclideanJordanAlgebra::spin(3), None),
    ];
    for (label, alg, sym_n) in demos {
        let d = alg.dim;
        for _ in 0..3 {
            let b = DMatrix::from_row_slice(d, d, &gaussian(&mut cr, d * d));
            let m = b.transpose() * &b / d as f64 + DMatrix::identity(d, d);
            let q = gaussian(&mut cr, d);
            let mm = semiftvn::numkernel::Matrix::from_row_major(
                d,
                d,
                m.transpose().as_slice().to_vec(),
            )?;
            let demo = complementarity_demo(&alg, &mm, &q, 200_000, bound)?;
            let worst = demo
                .feasibility
                .max(demo.complementarity)
                .max(demo.operator_commutativity)
                .max(demo.jordan_product);
            out.require(
                demo.report.passed() && worst <= bound,
                format!("{label} complementarity residual {worst:.3e}"),
            );
            if let Some(n) = sym_n {
                let (x, h) = (sym_from_coords(&demo.x, n), sym_from_coords(&demo.h, n));
                let scale = (x.norm() * h.norm()).max(1.0);
                let min_eig = sym_eigenvalues(&x)
                    .last()
                    .copied()
                    .unwrap()
                    .min(*sym_eigenvalues(&h).last().unwrap());
                let jordan = ((&x * &h + &h * &x) / 2.0).norm() / scale;
                out.require(
                    min_eig >= -bound * scale && jordan <= bound,
                    format!("{label} oracle: min eigenvalue {min_eig:.3e}, x∘h {jordan:.3e}"),
                );
            }
        }
    }

    let ftvn = [
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
        "hyp_product:4",
        "hyp_spin:3",
        "hyp_det:3",
    ];
    for name in ftvn {
        let sys = registry::system_by_name(name)?;
        let mut r = rng::stream(&format!("acceptance/orbit_max/{name}"), SEED);
        let (mut dv, mut dg) = (0f64, 0f64);
        for _ in 0..200 {
            let (c, u) = (sys.sample(&mut r), sys.sample(&mut r));
            let m = orbit_max(&sys, &c, &u)?;
            let predicted = sys.inner_w(&sys.lambda(&c)?, &sys.lambda(&u)?);
            let achieved = sys.inner_v(&c, &m.argmax);
            let scale = (sys.norm_v(&c) * sys.norm_v(&u)).max(1.0);
            let same_orbit = sys.norm_w(&diff(&sys.lambda(&m.argmax)?, &sys.lambda(&u)?))
                <= TOL * sys.norm_v(&u).max(1.0);
            dv = dv.max((achieved - predicted).abs() / scale);
            dg = dg.max(strong_gap(&sys, &c, &m.argmax, TOL)? / scale);
            out.require(same_orbit, format!("{name}: argmax left the orbit"));
        }
        out.require(
            dv <= TOL && dg <= TOL,
            format!("{name}: value {dv:.3e} gap {dg:.3e}"),
        );
    }
    out.note(format!(
        "isospectral 50/50, perturbations rejected {rejected}/50"
    ));
    Ok(out)
}

fn determinism() -> Result<Outcome> {
    let mut out = Outcome::new();
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut bodies = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_semiftvn"))
            .args(["suite", "--seed", "42", "--format", "json", "-o"])
            .arg(&path)
            .stderr(Stdio::null())
            .status()
            .expect("suite binary runs");
        out.require(
            status.code() == Some(0),
            format!("suite exit code {:?}", status.code()),
        );
        bodies.push(std::fs::read(&path).unwrap_or_default());
    }
    out.require(
        !bodies[0].is_empty() && bodies[0] == bodies[1],
        "reports differ",
    );
    out.note(format!("{} bytes, identical", bodies[0].len()));
    Ok(out)
}

type Criterion = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("axiom suite", axiom_suite),
        ("sorting micro-example", micro_example),
        (
            "strong implies relative commutativity",
            strong_implies_relative,
        ),
        (
            "derivations vs operator commutativity",
            derivation_equivalence,
        ),
        ("UXV group vs XYᵀ/XᵀY symmetry", uxv_equivalence),
        ("centers", centers),
        ("hyperbolic eigenvalue maps", hyperbolic),
        ("counterexample reproductions", counterexamples),
        ("commutation principles", principles),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    let mut report = String::new();
    for (i, (label, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("error: {e}"),
            findings: Vec::new(),
        });
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            report,
            "criterion {:>2} {status} {label}: {}",
            i + 1,
            outcome.detail
        );
        for f in &outcome.findings {
            let _ = writeln!(report, "             FINDING {f}");
        }
        if !outcome.pass {
            failed += 1;
        }
    }
    print!("{report}");
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
