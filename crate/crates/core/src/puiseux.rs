//! Perturbed Jordan blocks `H = s + J_K + W` with `‖W‖ = O(λ)`.
//!
//! Writing the eigenvector as `ψ = (1, y₁, …, y_{K−1})` and the eigenvalue as
//! `s + ε`, the eigenproblem becomes the linear system `(L + Z) y = r` with
//! `L` lower bidiagonal (`1` on the diagonal, `−ε` below), `Z` the shifted
//! perturbation and `r = (ε − W₁₁, −W₂₁, …, −W_{K1})`. The last component
//! `y_K` plays the role of the secular function: it vanishes exactly at the
//! eigenvalue shifts.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;
use crate::numerics::{
    certify_real_roots, char_poly, poly_roots, re, solve_linear, DenseMatrix, Polynomial, Scalar,
};

/// Default reality tolerance for [`classify_roots`].
pub const REALITY_TOL: f64 = 1e-8;

/// Relative size below which an interpolated coefficient counts as zero.
const VALUATION_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedJordanProblem {
    pub k: usize,
    pub s: Scalar,
    pub w: DenseMatrix,
    /// Declared smallness of `W`.
    pub lambda: f64,
}

impl PerturbedJordanProblem {
    pub fn new(s: Scalar, w: DenseMatrix, lambda: f64) -> Result<Self> {
        if !w.is_square() || w.rows() == 0 {
            return Err(Error::DimensionMismatch { expected: (w.rows(), w.rows()), found: (w.rows(), w.cols()) });
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput("lambda must be positive"));
        }
        Ok(Self { k: w.rows(), s, w, lambda })
    }

    /// The full matrix `s + J_K + W`.
    pub fn hamiltonian(&self) -> DenseMatrix {
        let mut h = self.w.clone();
        let j = DenseMatrix::jordan_block(self.k, self.s);
        for r in 0..self.k {
            for c in 0..self.k {
                h[(r, c)] += j[(r, c)];
            }
        }
        h
    }

    /// `λ^(1/K)`, the generic size of the eigenvalue shifts.
    pub fn generic_scale(&self) -> f64 {
        math::powf(self.lambda, 1.0 / self.k as f64)
    }
}

pub fn build_l(k: usize, eps: Scalar) -> DenseMatrix {
    let mut l = DenseMatrix::identity(k);
    for i in 1..k {
        l[(i, i - 1)] = -eps;
    }
    l
}

/// `L⁻¹` with entries `ε^(i−j)` on and below the diagonal.
pub fn build_linv(k: usize, eps: Scalar) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(k, k);
    for j in 0..k {
        let mut p = re(1.0);
        for i in j..k {
            m[(i, j)] = p;
            p *= eps;
        }
    }
    m
}

/// `Z_{i,j} = W_{i,j+1}`, last column zero.
pub fn shifted_z(w: &DenseMatrix) -> DenseMatrix {
    let k = w.rows();
    let mut z = DenseMatrix::zeros(k, w.cols());
    for i in 0..k {
        for j in 0..w.cols().saturating_sub(1) {
            z[(i, j)] = w[(i, j + 1)];
        }
    }
    z
}

pub fn rhs_r(w: &DenseMatrix, eps: Scalar) -> Vec<Scalar> {
    let mut r: Vec<Scalar> = (0..w.rows()).map(|i| -w[(i, 0)]).collect();
    r[0] += eps;
    r
}

fn solve_system(p: &PerturbedJordanProblem, eps: Scalar) -> Result<Vec<Scalar>> {
    let a = build_l(p.k, eps).add(&shifted_z(&p.w))?;
    solve_linear(&a, &rhs_r(&p.w, eps), 1e-14).map_err(|_| Error::SingularSystem)
}

/// `y_K(ε)`; zero exactly when `s + ε` is an eigenvalue whose eigenvector has
/// a non-vanishing first component.
pub fn secular_value(p: &PerturbedJordanProblem, eps: Scalar) -> Result<Scalar> {
    Ok(*solve_system(p, eps)?.last().unwrap())
}

/// Monic degree-`K` polynomial in `ε` whose roots are the eigenvalue shifts,
/// `det(ε − J_K − W)`.
pub fn secular_polynomial(p: &PerturbedJordanProblem) -> Result<Polynomial> {
    let mut m = p.w.clone();
    for i in 1..p.k {
        m[(i - 1, i)] += re(1.0);
    }
    char_poly(&m)
}

/// A leading-order root `ε ≈ λ^(num/den) · η`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingRoot {
    pub root: Scalar,
    /// `(num, den)` in lowest terms; `None` for an exactly vanishing root.
    pub exponent: Option<(usize, usize)>,
}

impl LeadingRoot {
    /// Ramification index: the denominator of the exponent.
    pub fn ramification(&self) -> usize {
        self.exponent.map_or(1, |(_, d)| d)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Coefficients `a[i][m]` of `det(ε − J − μŴ) = Σ a_{i,m} ε^i μ^m`, where
/// `Ŵ = W/λ`, by interpolation on the roots of unity in `μ`.
fn bivariate_coefficients(p: &PerturbedJordanProblem) -> Result<Vec<Vec<Scalar>>> {
    let k = p.k;
    let n = k + 1;
    let w_hat = p.w.scale(re(1.0 / p.lambda));
    let mut samples = Vec::with_capacity(n);
    for j in 0..n {
        let th = 2.0 * PI * j as f64 / n as f64;
        let mu = Scalar::new(math::cos(th), math::sin(th));
        let mut m = w_hat.scale(mu);
        for i in 1..k {
            m[(i - 1, i)] += re(1.0);
        }
        samples.push(char_poly(&m)?);
    }
    let mut a = vec![vec![re(0.0); n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        for (m, slot) in row.iter_mut().enumerate() {
            let mut acc = re(0.0);
            for (j, poly) in samples.iter().enumerate() {
                let th = -2.0 * PI * (j * m) as f64 / n as f64;
                acc += poly.coeff(i) * Scalar::new(math::cos(th), math::sin(th));
            }
            *slot = acc / n as f64;
        }
    }
    Ok(a)
}

/// Dominant-balance roots from the Newton polygon of the secular polynomial,
/// with every entry of `W` counted as order `λ`.
///
/// Each lower-hull edge of slope `p/q` contributes `ε = λ^(p/q)·η` for the
/// non-zero roots `η` of the edge polynomial. Exactly vanishing low-order
/// coefficients contribute exact zero roots.
pub fn leading_order_roots(p: &PerturbedJordanProblem) -> Result<Vec<LeadingRoot>> {
    let k = p.k;
    let a = bivariate_coefficients(p)?;
    let big = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = VALUATION_FLOOR * (1.0 + big);
    let val: Vec<Option<usize>> = a.iter().map(|row| row.iter().position(|z| z.norm() > floor)).collect();
    let first = (0..=k).find(|&i| val[i].is_some()).unwrap_or(k);
    if first == k {
        return Err(Error::AllOrdersVanish);
    }
    let mut out: Vec<LeadingRoot> = (0..first).map(|_| LeadingRoot { root: re(0.0), exponent: None }).collect();

    let pts: Vec<(usize, usize)> = (first..=k).filter_map(|i| val[i].map(|v| (i, v))).collect();
    // Lower convex hull, left to right.
    let mut hull: Vec<(usize, usize)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as i64 - x1 as i64) * (pt.1 as i64 - y1 as i64)
                - (y2 as i64 - y1 as i64) * (pt.0 as i64 - x1 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    for seg in hull.windows(2) {
        let ((i1, v1), (i2, v2)) = (seg[0], seg[1]);
        let rise = v1 - v2;
        let run = i2 - i1;
        let g = gcd(rise, run);
        let (num, den) = (rise / g, run / g);
        let coeffs: Vec<Scalar> = (i1..=i2)
            .map(|i| match val[i] {
                Some(v) if (v1 - v) * run == rise * (i - i1) && v <= v1 => a[i][v],
                _ => re(0.0),
            })
            .collect();
        let edge = Polynomial::new(coeffs);
        let scale = math::powf(p.lambda, num as f64 / den as f64);
        for eta in poly_roots(&edge, 1e-10)? {
            out.push(LeadingRoot { root: eta * scale, exponent: Some((num, den)) });
        }
    }
    Ok(out)
}

/// Partition of roots into real (admissible) and complex (symmetry breaking).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootClasses {
    pub admissible: Vec<Scalar>,
    pub symmetry_breaking: Vec<Scalar>,
}

/// A root is admissible iff `|Im ε| ≤ tol·max(|ε|, scale)`.
pub fn classify_roots(roots: &[Scalar], scale: f64, tol: f64) -> RootClasses {
    let mut c = RootClasses::default();
    for &z in roots {
        if z.im.abs() <= tol * z.norm().max(scale) {
            c.admissible.push(z);
        } else {
            c.symmetry_breaking.push(z);
        }
    }
    c
}

/// Truncation of the Neumann series `y = Σ (−L⁻¹Z)ᵐ L⁻¹ r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// `L⁻¹ r`.
    Leading,
    /// The first `n ≥ 1` terms.
    Terms(usize),
    Exact,
}

/// Components `y = (y₁, …, y_K)`; the state itself is `(1, y₁, …, y_{K−1})`.
pub fn wavefunction(p: &PerturbedJordanProblem, eps: Scalar, order: Order) -> Result<Vec<Scalar>> {
    let terms = match order {
        Order::Exact => return solve_system(p, eps),
        Order::Leading => 1,
        Order::Terms(0) => return Err(Error::InvalidInput("at least one series term is needed")),
        Order::Terms(n) => n,
    };
    let linv = build_linv(p.k, eps);
    let z = shifted_z(&p.w);
    let mut term = linv.matvec(&rhs_r(&p.w, eps))?;
    let mut y = term.clone();
    for _ in 1..terms {
        term = linv.matvec(&z.matvec(&term)?)?;
        term.iter_mut().for_each(|c| *c = -*c);
        y.iter_mut().zip(&term).for_each(|(a, b)| *a += b);
    }
    Ok(y)
}

/// `(1, y₁, …, y_{K−1})`.
pub fn full_state(y: &[Scalar]) -> Vec<Scalar> {
    let mut v = vec![re(1.0)];
    v.extend_from_slice(&y[..y.len().saturating_sub(1)]);
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecularData {
    pub polynomial: Polynomial,
    /// Exact eigenvalue shifts, real ones certified and snapped to the axis.
    pub roots: Vec<Scalar>,
    pub admissible: Vec<Scalar>,
    pub symmetry_breaking: Vec<Scalar>,
    /// Exact `y` for every root, `None` where `L + Z` is singular.
    pub wavefunctions: Vec<Option<Vec<Scalar>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxResult {
    pub secular: SecularData,
    pub leading: Vec<LeadingRoot>,
}

/// Exact roots of the secular polynomial, classified at `tol` against
/// `λ^(1/K)`.
pub fn secular_data(p: &PerturbedJordanProblem, tol: f64) -> Result<SecularData> {
    let polynomial = secular_polynomial(p)?;
    let mut roots = poly_roots(&polynomial, 1e-10)?;
    let scale = p.generic_scale();
    if polynomial.is_real() {
        roots = certify_real_roots(&polynomial, &roots, scale).0;
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let classes = classify_roots(&roots, scale, tol);
    let wavefunctions = roots.iter().map(|&e| solve_system(p, e).ok()).collect();
    Ok(SecularData {
        polynomial,
        roots,
        admissible: classes.admissible,
        symmetry_breaking: classes.symmetry_breaking,
        wavefunctions,
    })
}

pub fn analyze(p: &PerturbedJordanProblem, tol: f64) -> Result<PuiseuxResult> {
    Ok(PuiseuxResult { secular: secular_data(p, tol)?, leading: leading_order_roots(p)? })
}
