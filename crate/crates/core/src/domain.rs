//! Reality of the spectrum, parameter scans, boundary bisection, metric
//! operators and pseudospectra.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hamiltonians::{build, default_g_top, ep_couplings, path_couplings, HamiltonianSpec, PathParams};
use crate::math;
use crate::numerics::{
    certify_real_roots, char_poly, eigenvalues, hermitian_eigenvalues, inverse_iteration, min_singular_value, poly_roots,
    sort_spectrum, DenseMatrix, Scalar, MAX_CHAR_POLY_DIM,
};

/// Largest matrix whose spectrum goes through the characteristic polynomial;
/// bigger ones use QR directly.
const POLY_ROUTE_MAX: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Scalar>,
    pub all_real: bool,
    /// Smallest distance between real eigenvalues (`∞` with fewer than two).
    pub min_gap: f64,
    pub max_imag: f64,
    pub reality_tol: f64,
    /// `max(1, max|E|)`; reality and degeneracy are judged relative to it.
    pub scale: f64,
}

impl SpectrumResult {
    /// Gap below which two real levels count as merged: `√tol · scale`.
    pub fn degeneracy_threshold(&self) -> f64 {
        math::sqrt(self.reality_tol) * self.scale
    }

    /// Real and non-degenerate.
    pub fn is_physical(&self) -> bool {
        self.all_real && self.min_gap > self.degeneracy_threshold()
    }
}

/// Eigenvalues of `h` with reality flags.
///
/// For real matrices up to moderate size the eigenvalues are the roots of the
/// characteristic polynomial, and a root is declared real only when a sign
/// change of that polynomial certifies it; this keeps the decision sharp next
/// to exceptional points where eigenvalues are ill-conditioned.
pub fn spectrum(h: &DenseMatrix, tol: f64) -> Result<SpectrumResult> {
    if !h.is_square() || h.rows() == 0 {
        return Err(Error::DimensionMismatch { expected: (h.rows(), h.rows()), found: (h.rows(), h.cols()) });
    }
    let mut values = if h.rows() <= POLY_ROUTE_MAX.min(MAX_CHAR_POLY_DIM) {
        let p = char_poly(h)?;
        let roots = poly_roots(&p, 1e-8)?;
        let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        certify_real_roots(&p, &roots, scale).0
    } else {
        eigenvalues(h)?
    };
    let scale = values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    sort_spectrum(&mut values, tol * scale);
    let max_imag = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let all_real = max_imag <= tol * scale;
    let mut reals: Vec<f64> = values.iter().filter(|z| z.im.abs() <= tol * scale).map(|z| z.re).collect();
    reals.sort_by(f64::total_cmp);
    let min_gap = reals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Ok(SpectrumResult { eigenvalues: values, all_real, min_gap, max_imag, reality_tol: tol, scale })
}

/// Real, simple spectrum; numerical failures count as not physical.
pub fn is_physical(h: &DenseMatrix, tol: f64) -> bool {
    spectrum(h, tol).map(|s| s.is_physical()).unwrap_or(false)
}

/// A scannable parameter of the benchmark family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    /// Position on the interpolation path.
    T,
    /// Coupling `g_{i+1}` (0-based index).
    Coupling(usize),
    Shift,
}

/// Benchmark family with a base point; [`Family::matrix_at`] overrides
/// individual parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub n: usize,
    /// Couplings used when no path position is set.
    pub couplings: Vec<f64>,
    pub shift: f64,
    pub g_top: Vec<f64>,
    pub t: Option<f64>,
    /// Couplings `(index, value)` that override both the base couplings and
    /// the path.
    pub pinned: Vec<(usize, f64)>,
}

impl Family {
    /// Base point at the maximal exceptional point.
    pub fn at_ep(n: usize) -> Self {
        Self { n, couplings: ep_couplings(n), shift: 0.0, g_top: default_g_top(n), t: None, pinned: Vec::new() }
    }

    pub fn matrix_at(&self, params: &[(Param, f64)]) -> Result<DenseMatrix> {
        let t = params.iter().rev().find(|(p, _)| *p == Param::T).map(|&(_, v)| v).or(self.t);
        let mut g = match t {
            Some(t) => path_couplings(self.n, &PathParams::with_g_top(t, self.g_top.clone()))?,
            None => self.couplings.clone(),
        };
        for &(i, v) in &self.pinned {
            *g.get_mut(i).ok_or(Error::InvalidInput("coupling index out of range"))? = v;
        }
        let mut shift = self.shift;
        for &(p, v) in params {
            match p {
                Param::T => {}
                Param::Shift => shift = v,
                Param::Coupling(i) => {
                    let slot = g.get_mut(i).ok_or(Error::InvalidInput("coupling index out of range"))?;
                    *slot = v;
                }
            }
        }
        build(&HamiltonianSpec::new(self.n, g).with_shift(shift))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    /// `lo + (hi − lo)·i/(count − 1)`, so both ends are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => alloc::vec![self.lo],
            c => (0..c).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (c - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Physical,
    Broken,
    NearBoundary,
    /// The parameters do not define a matrix (e.g. off the path range).
    Undefined,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Physical => "physical",
            Label::Broken => "broken",
            Label::NearBoundary => "near_boundary",
            Label::Undefined => "undefined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub values: Vec<f64>,
    pub label: Label,
    pub max_imag: f64,
    pub min_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainScan {
    pub axes: Vec<Axis>,
    /// Row-major over the axes, the last axis fastest.
    pub points: Vec<ScanPoint>,
}

/// Classifies one parameter point. Points more than `10·tol` clear of both
/// thresholds are `Physical` or `Broken`; the rest are `NearBoundary`.
pub fn scan_point(family: &Family, params: &[(Param, f64)], tol: f64) -> ScanPoint {
    let values = params.iter().map(|&(_, v)| v).collect();
    let spec = family.matrix_at(params).and_then(|h| spectrum(&h, tol));
    match spec {
        Err(_) => ScanPoint { values, label: Label::Undefined, max_imag: f64::NAN, min_gap: f64::NAN },
        Ok(s) => {
            let label = if s.max_imag > 10.0 * tol * s.scale {
                Label::Broken
            } else if s.all_real && s.min_gap > 10.0 * s.degeneracy_threshold() {
                Label::Physical
            } else {
                Label::NearBoundary
            };
            ScanPoint { values, label, max_imag: s.max_imag, min_gap: s.min_gap }
        }
    }
}

/// Parameter tuples of the grid spanned by `axes`, in scan order.
pub fn grid(axes: &[Axis]) -> Vec<Vec<(Param, f64)>> {
    let mut out: Vec<Vec<(Param, f64)>> = alloc::vec![Vec::new()];
    for ax in axes {
        let vals = ax.values();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                vals.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((ax.param, v));
                    p
                })
            })
            .collect();
    }
    out
}

pub fn scan(family: &Family, axes: &[Axis], tol: f64) -> Result<DomainScan> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::InvalidInput("scans take one or two axes"));
    }
    let points = grid(axes).iter().map(|p| scan_point(family, p, tol)).collect();
    Ok(DomainScan { axes: axes.to_vec(), points })
}

/// A straight segment in one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub param: Param,
    pub from: f64,
    pub to: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResult {
    /// Midpoint of the final bracket.
    pub value: f64,
    /// Last physical parameter value.
    pub inside: f64,
    /// First non-physical parameter value.
    pub outside: f64,
    pub iterations: usize,
}

/// Bisects along `ray` for the edge of the physical domain until the
/// bracket is at most `width` long.
pub fn boundary_locate(family: &Family, ray: Ray, width: f64, tol: f64) -> Result<BoundaryResult> {
    if !(width > 0.0) {
        return Err(Error::InvalidInput("bisection width must be positive"));
    }
    let phys = |x: f64| family.matrix_at(&[(ray.param, x)]).map(|h| is_physical(&h, tol)).unwrap_or(false);
    if !phys(ray.from) || phys(ray.to) {
        return Err(Error::NoSignChange);
    }
    let (mut inside, mut outside) = (ray.from, ray.to);
    let mut iterations = 0;
    while (outside - inside).abs() > width && iterations < 200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if phys(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
        iterations += 1;
    }
    Ok(BoundaryResult { value: 0.5 * (inside + outside), inside, outside, iterations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricResult {
    pub theta: DenseMatrix,
    /// `‖H†Θ − ΘH‖∞ / ‖Θ‖∞`.
    pub intertwine_residual: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `max/min` eigenvalue, infinite unless positive definite.
    pub condition: f64,
}

/// `Θ = Σ κ_n u_n u_n†` from unit left eigenvectors `H†u_n = E_n u_n`.
///
/// `kappa` defaults to all ones; it must be positive and have one entry per
/// eigenvalue.
pub fn metric(h: &DenseMatrix, tol: f64, kappa: Option<&[f64]>) -> Result<MetricResult> {
    let spec = spectrum(h, tol)?;
    if !spec.is_physical() {
        return Err(Error::NotPhysical);
    }
    let n = h.rows();
    let ones = alloc::vec![1.0; n];
    let kappa = kappa.unwrap_or(&ones);
    if kappa.len() != n || kappa.iter().any(|&k| !(k > 0.0)) {
        return Err(Error::InvalidInput("metric weights must be positive, one per level"));
    }
    let adj = h.adjoint();
    let mut theta = DenseMatrix::zeros(n, n);
    for (e, &k) in spec.eigenvalues.iter().zip(kappa) {
        let u = inverse_iteration(&adj, Scalar::new(e.re, 0.0))?;
        for i in 0..n {
            for j in 0..n {
                theta[(i, j)] += u[i] * u[j].conj() * k;
            }
        }
    }
    let resid = adj.matmul(&theta)?.sub(&theta.matmul(h)?)?.norm_inf() / theta.norm_inf();
    let ev = hermitian_eigenvalues(&theta)?;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    Ok(MetricResult { theta, intertwine_residual: resid, min_eigenvalue: lo, max_eigenvalue: hi, condition })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoPoint {
    pub z: Scalar,
    pub s_min: f64,
    /// `s_min ≤ ε` for each requested level.
    pub inside: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoGrid {
    pub levels: Vec<f64>,
    pub res: usize,
    /// Imaginary part outer, real part inner.
    pub points: Vec<PseudoPoint>,
}

/// Smallest singular value of `zI − H`.
pub fn pseudo_value(h: &DenseMatrix, z: Scalar) -> Result<f64> {
    min_singular_value(&h.shifted(z))
}

pub fn pseudo_point(h: &DenseMatrix, z: Scalar, levels: &[f64]) -> Result<PseudoPoint> {
    let s_min = pseudo_value(h, z)?;
    Ok(PseudoPoint { z, s_min, inside: levels.iter().map(|&e| s_min <= e).collect() })
}

/// Grid points of the window, `res` per axis.
pub fn pseudo_grid_points(window: &Window, res: usize) -> Result<Vec<Scalar>> {
    if res < 2 {
        return Err(Error::InvalidInput("pseudospectrum resolution must be at least 2"));
    }
    let xs = Axis { param: Param::Shift, lo: window.re_min, hi: window.re_max, count: res }.values();
    let ys = Axis { param: Param::Shift, lo: window.im_min, hi: window.im_max, count: res }.values();
    Ok(ys.iter().flat_map(|&y| xs.iter().map(move |&x| Scalar::new(x, y))).collect())
}

pub fn pseudospectrum(h: &DenseMatrix, window: &Window, res: usize, levels: &[f64]) -> Result<PseudoGrid> {
    let points =
        pseudo_grid_points(window, res)?.into_iter().map(|z| pseudo_point(h, z, levels)).collect::<Result<_>>()?;
    Ok(PseudoGrid { levels: levels.to_vec(), res, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::re;
    use alloc::vec;

    fn two(a: f64) -> DenseMatrix {
        build(&HamiltonianSpec::new(2, vec![a])).unwrap()
    }

    #[test]
    fn four_level_path_spectrum() {
        let h = Family::at_ep(4).matrix_at(&[(Param::T, 0.04)]).unwrap();
        let s = spectrum(&h, 1e-10).unwrap();
        assert!(s.all_real);
        for (e, want) in s.eigenvalues.iter().zip([-0.6, -0.2, 0.2, 0.6]) {
            assert!((e - re(want)).norm() < 1e-10);
        }
    }

    #[test]
    fn two_level_cases() {
        let s = spectrum(&two(2.0), 1e-10).unwrap();
        assert!(!s.all_real);
        assert!((s.eigenvalues[0] - Scalar::new(0.0, -3f64.sqrt())).norm() < 1e-12);
        let d = DenseMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]);
        let s = spectrum(&d, 1e-10).unwrap();
        assert_eq!(s.eigenvalues, vec![re(-1.0), re(1.0)]);
        assert_eq!(s.min_gap, 2.0);
        assert!(is_physical(&two(0.5), 1e-10));
        assert!(!is_physical(&two(1.0), 1e-10));
        assert!(!is_physical(&two(1.5), 1e-10));
    }

    #[test]
    fn two_level_scan() {
        let axis = Axis { param: Param::Coupling(0), lo: -2.0, hi: 2.0, count: 401 };
        let sc = scan(&Family::at_ep(2), &[axis], 1e-10).unwrap();
        assert_eq!(sc.points.len(), 401);
        for p in &sc.points {
            let a = p.values[0];
            assert_eq!(p.label == Label::Physical, a.abs() < 1.0, "a = {a}");
        }
        let axis = Axis { param: Param::Coupling(0), lo: 0.0, hi: 0.5, count: 11 };
        let sc = scan(&Family::at_ep(2), &[axis], 1e-10).unwrap();
        assert!(sc.points.iter().all(|p| p.label == Label::Physical));
    }

    #[test]
    fn two_axis_grid_order() {
        let a = Axis { param: Param::Coupling(0), lo: 0.0, hi: 1.0, count: 2 };
        let b = Axis { param: Param::Coupling(1), lo: 0.0, hi: 1.0, count: 3 };
        let g = grid(&[a, b]);
        assert_eq!(g.len(), 6);
        assert_eq!(g[1], vec![(Param::Coupling(0), 0.0), (Param::Coupling(1), 0.5)]);
        assert!(scan(&Family::at_ep(4), &[a, b, a], 1e-10).is_err());
    }

    #[test]
    fn bisection_rays() {
        let ray = Ray { param: Param::Coupling(0), from: 0.0, to: 2.0 };
        let b = boundary_locate(&Family::at_ep(2), ray, 1e-10, 1e-10).unwrap();
        assert!((b.value - 1.0).abs() < 1e-10);
        let b = boundary_locate(&Family::at_ep(3), ray, 1e-10, 1e-10).unwrap();
        assert!((b.value - 2f64.sqrt()).abs() < 1e-8);
        let ray = Ray { param: Param::T, from: 0.5, to: 0.001 };
        assert_eq!(boundary_locate(&Family::at_ep(4), ray, 1e-10, 1e-10), Err(Error::NoSignChange));
    }

    #[test]
    fn metric_cases() {
        let m = metric(&build(&HamiltonianSpec::new(4, vec![0.0, 0.0])).unwrap(), 1e-10, None).unwrap();
        assert!(m.theta.approx_eq(&DenseMatrix::identity(4), 1e-10));
        let m = metric(&two(0.6), 1e-10, None).unwrap();
        assert!(m.intertwine_residual <= 1e-10 && m.min_eigenvalue > 0.0);
        let fam = Family::at_ep(2);
        let conds: Vec<f64> = [0.5, 0.1, 0.01]
            .iter()
            .map(|&t| metric(&fam.matrix_at(&[(Param::T, t)]).unwrap(), 1e-10, None).unwrap().condition)
            .collect();
        assert!(conds.windows(2).all(|w| w[1] > w[0]), "{conds:?}");
        assert_eq!(metric(&two(1.5), 1e-10, None).unwrap_err(), Error::NotPhysical);
        assert!(metric(&two(0.6), 1e-10, Some(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn metric_theta_is_hermitian() {
        let m = metric(&two(0.6), 1e-10, Some(&[2.0, 0.5])).unwrap();
        assert_eq!(m.theta, m.theta.adjoint());
    }

    #[test]
    fn pseudospectra() {
        let d = DenseMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]);
        assert!((pseudo_value(&d, Scalar::new(1.0, 0.3)).unwrap() - 0.3).abs() < 1e-15);
        let h = two(0.999);
        let dist = (1.0 - 0.999f64 * 0.999).sqrt();
        assert!(pseudo_value(&h, re(0.0)).unwrap() < 0.5 * dist);
        let w = Window { re_min: -1.0, re_max: 1.0, im_min: -1.0, im_max: 1.0 };
        let g = pseudospectrum(&two(1.0), &w, 3, &[1e-2]).unwrap();
        assert_eq!(g.points.len(), 9);
        assert_eq!(g.points[4].z, re(0.0));
        assert!(g.points[4].inside[0]);
        assert!(pseudospectrum(&d, &w, 1, &[]).is_err());
    }
}
