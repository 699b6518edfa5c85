use epperturb_core::domain::{
    boundary_locate, grid, metric, pseudo_grid_points, pseudo_point, scan_point, spectrum, Axis, Family, Param, Ray,
    Window,
};
use epperturb_core::hamiltonians::{build, default_g_top, ep_couplings, path_xi, HamiltonianSpec, PathParams};
use epperturb_core::jordan::{
    benchmark_eigenvalue, chain_gauge, detect_block_size, extract_perturbation, jordan_chain, jordan_chain_from_seed,
    rank_sequence,
};
use epperturb_core::numerics::re;
use epperturb_core::puiseux::{
    full_state, leading_order_roots, secular_data, wavefunction, Order, PerturbedJordanProblem, REALITY_TOL,
};
use epperturb_core::{DenseMatrix, Scalar};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Command, ModelArgs, OrderSpec};
use crate::{usage, CliError, SCHEMA_VERSION};

fn c(z: Scalar) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn cs(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|&z| c(z)).collect())
}

fn mat(m: &DenseMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| cs(m.row(i))).collect())
}

fn j_of(n: usize) -> usize {
    n / 2
}

/// Maps `t`, `s`, `a` (= g_J), `b` (= g_{J−1}) and `g1…gJ` to parameters.
fn param(name: &str, n: usize) -> Result<Param, CliError> {
    let j = j_of(n);
    let coupling = |k: usize| {
        if (1..=j).contains(&k) {
            Ok(Param::Coupling(k - 1))
        } else {
            Err(usage(format!("parameter '{name}' does not exist at N = {n} (J = {j})")))
        }
    };
    match name {
        "t" => Ok(Param::T),
        "s" => Ok(Param::Shift),
        "a" => coupling(j),
        "b" => coupling(j.wrapping_sub(1)),
        g if g.starts_with('g') => coupling(g[1..].parse().map_err(|_| usage(format!("unknown parameter '{name}'")))?),
        _ => Err(usage(format!("unknown parameter '{name}'"))),
    }
}

/// Base couplings: `--g`, else the path at `--t`, else zeros when `--a`/`--b`
/// are given, else the EP. `--a`/`--b` are then pinned on top.
fn family(m: &ModelArgs) -> Result<Family, CliError> {
    let n = m.n;
    let j = j_of(n);
    let mut fam = Family::at_ep(n);
    fam.shift = m.s;
    if let Some(g) = &m.g {
        if g.len() != j {
            return Err(usage(format!("--g needs {j} values at N = {n}, got {}", g.len())));
        }
        fam.couplings = g.clone();
    } else if m.t.is_none() && (m.a.is_some() || m.b.is_some()) {
        fam.couplings = vec![0.0; j];
    }
    if let Some(gt) = &m.g_top {
        if gt.len() != j {
            return Err(usage(format!("--G needs {j} values at N = {n}, got {}", gt.len())));
        }
        fam.g_top = gt.clone();
    }
    fam.t = m.t;
    if let Some(a) = m.a {
        fam.pinned.push((j - 1, a));
    }
    if let Some(b) = m.b {
        if j < 2 {
            return Err(usage(format!("--b needs N >= 4, got N = {n}")));
        }
        fam.pinned.push((j - 2, b));
    }
    Ok(fam)
}

fn current_couplings(m: &DenseMatrix) -> Vec<f64> {
    let n = m.rows();
    (1..=n / 2).map(|k| m[(k - 1, k)].re).collect()
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("EPPERTURB_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| usage(format!("EPPERTURB_THREADS='{v}' is not a count")))?;
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| usage(format!("thread pool: {e}")))
}

/// Full JSON report of one command.
pub fn report(cmd: &Command) -> Result<Value, CliError> {
    let results = results(cmd)?;
    let mut v = serde_json::to_value(cmd).map_err(|e| usage(e.to_string()))?;
    let obj = v.as_object_mut().expect("commands serialize as objects");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("results".into(), results);
    Ok(v)
}

fn results(cmd: &Command) -> Result<Value, CliError> {
    let m = cmd.model();
    let fam = family(m)?;
    match cmd {
        Command::Build(_) => {
            let h = fam.matrix_at(&[])?;
            Ok(json!({"couplings": current_couplings(&h), "shift": m.s, "matrix": mat(&h)}))
        }
        Command::Spectrum(_) => {
            let s = spectrum(&fam.matrix_at(&[])?, m.tol)?;
            Ok(json!({
                "eigenvalues": cs(&s.eigenvalues),
                "all_real": s.all_real,
                "is_physical": s.is_physical(),
                "min_gap": s.min_gap,
                "max_imag": s.max_imag,
                "degeneracy_threshold": s.degeneracy_threshold(),
            }))
        }
        Command::Path(_) => {
            let t = m.t.unwrap_or(0.0);
            if m.g.is_some() {
                return Err(usage("path takes --t, not --g"));
            }
            let g_top = m.g_top.clone().unwrap_or_else(|| default_g_top(m.n));
            let xi = path_xi(m.n, &PathParams::with_g_top(t, g_top.clone()))?;
            let h = fam.matrix_at(&[(Param::T, t)])?;
            Ok(json!({
                "t": t,
                "G": g_top,
                "xi": xi,
                "couplings": current_couplings(&h),
                "matrix": mat(&h),
            }))
        }
        Command::Jordan(a) => {
            let h = fam.matrix_at(&[])?;
            let s = benchmark_eigenvalue(&h);
            let k = match a.k {
                Some(k) => k,
                None => detect_block_size(&h, s, m.tol)?,
            };
            let ranks = rank_sequence(&h, s, m.tol)?;
            let jf = jordan_chain(&h, s, k, m.tol)?;
            let mut e1 = vec![re(0.0); m.n];
            e1[0] = re(1.0);
            let krylov = jordan_chain_from_seed(&h, s, k, &e1, m.tol).ok();
            let gauge = krylov.as_ref().and_then(|kq| chain_gauge(&jf.q, &kq.q, 1e-6).ok());
            Ok(json!({
                "eigenvalue": c(s),
                "K": k,
                "rank_sequence": ranks,
                "Q": mat(&jf.q),
                "S": mat(&jf.s),
                "residual": jf.residual(&h)?,
                "krylov_Q": krylov.as_ref().map(|kq| mat(&kq.q)),
                "gauge": gauge.as_deref().map(cs),
            }))
        }
        Command::Perturb(a) => perturb(m, &fam, a.order, a.lambda),
        Command::Scan(a) => {
            if a.axis.is_empty() || a.axis.len() > 2 {
                return Err(usage("scan takes one or two --axis"));
            }
            let axes = a
                .axis
                .iter()
                .map(|s| Ok(Axis { param: param(&s.name, m.n)?, lo: s.lo, hi: s.hi, count: s.count }))
                .collect::<Result<Vec<_>, CliError>>()?;
            let pts = grid(&axes);
            let tol = m.tol;
            let scanned: Vec<_> = thread_pool()?.install(|| pts.par_iter().map(|p| scan_point(&fam, p, tol)).collect());
            let points: Vec<Value> = scanned
                .iter()
                .map(|p| {
                    json!({
                        "values": p.values,
                        "label": p.label.as_str(),
                        "physical": p.label == epperturb_core::domain::Label::Physical,
                        "max_imag": p.max_imag,
                        "min_gap": p.min_gap,
                    })
                })
                .collect();
            Ok(json!({"axes": a.axis.iter().map(|s| s.name.clone()).collect::<Vec<_>>(), "points": points}))
        }
        Command::Boundary(a) => {
            let ray = Ray { param: param(&a.ray.name, m.n)?, from: a.ray.from, to: a.ray.to };
            let b = boundary_locate(&fam, ray, m.tol, m.tol)?;
            Ok(json!({"value": b.value, "inside": b.inside, "outside": b.outside, "iterations": b.iterations}))
        }
        Command::Metric(a) => {
            let h = fam.matrix_at(&[])?;
            let r = metric(&h, m.tol, a.kappa.as_deref())?;
            Ok(json!({
                "theta": mat(&r.theta),
                "intertwine_residual": r.intertwine_residual,
                "min_eigenvalue": r.min_eigenvalue,
                "max_eigenvalue": r.max_eigenvalue,
                "condition": r.condition,
            }))
        }
        Command::Pseudo(a) => {
            if a.res < 2 {
                return Err(usage("--res must be at least 2"));
            }
            let h = fam.matrix_at(&[])?;
            let w = Window { re_min: a.window.re_min, re_max: a.window.re_max, im_min: a.window.im_min, im_max: a.window.im_max };
            let zs = pseudo_grid_points(&w, a.res)?;
            let pts = thread_pool()?
                .install(|| zs.par_iter().map(|&z| pseudo_point(&h, z, &a.eps)).collect::<Result<Vec<_>, _>>())?;
            let points: Vec<Value> = pts
                .iter()
                .map(|p| json!({"re": p.z.re, "im": p.z.im, "s_min": p.s_min, "inside": p.inside}))
                .collect();
            Ok(json!({"levels": a.eps, "points": points}))
        }
    }
}

/// `W = Q⁻¹HQ − S` in the Jordan frame of the EP matrix with the same `N`
/// and shift, then the secular analysis of `S + W`.
fn perturb(m: &ModelArgs, fam: &Family, order: OrderSpec, lambda: Option<f64>) -> Result<Value, CliError> {
    let n = m.n;
    let ep = build(&HamiltonianSpec::new(n, ep_couplings(n)).with_shift(m.s))?;
    let mut e1 = vec![re(0.0); n];
    e1[0] = re(1.0);
    let jf = jordan_chain_from_seed(&ep, re(m.s), n, &e1, m.tol)?;
    let h = fam.matrix_at(&[])?;
    let w = extract_perturbation(&h, &jf)?;
    let lambda = match (lambda, m.t) {
        (Some(l), _) => l,
        (None, Some(t)) if t > 0.0 => t,
        _ if w.norm_inf() > 0.0 => w.norm_inf(),
        _ => 1.0,
    };
    let p = PerturbedJordanProblem::new(re(m.s), w.clone(), lambda)?;
    let data = secular_data(&p, REALITY_TOL)?;
    let leading = leading_order_roots(&p)?;
    let (core_order, at): (Order, Vec<Scalar>) = match order {
        OrderSpec::Leading => (Order::Leading, leading.iter().map(|r| r.root).collect()),
        OrderSpec::Exact => (Order::Exact, data.roots.clone()),
        OrderSpec::Terms(k) => (Order::Terms(k), data.roots.clone()),
    };
    let states = at
        .iter()
        .map(|&eps| {
            let y = wavefunction(&p, eps, core_order)?;
            let psi = full_state(&y);
            let orig = jf.q.matvec(&psi)?;
            Ok(json!({"eps": c(eps), "energy": c(eps + re(m.s)), "y": cs(&y), "psi": cs(&psi), "psi_original": cs(&orig)}))
        })
        .collect::<Result<Vec<_>, epperturb_core::Error>>()?;
    Ok(json!({
        "lambda": lambda,
        "Q": mat(&jf.q),
        "W": mat(&w),
        "W_over_lambda": mat(&w.scale(re(1.0 / lambda))),
        "secular_polynomial": cs(data.polynomial.coeffs()),
        "roots": cs(&data.roots),
        "admissible": cs(&data.admissible),
        "symmetry_breaking": cs(&data.symmetry_breaking),
        "leading": leading
            .iter()
            .map(|r| json!({"root": c(r.root), "exponent": r.exponent.map(|(p, q)| [p, q]), "ramification": r.ramification()}))
            .collect::<Vec<_>>(),
        "states": states,
    }))
}
