use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{DenseMatrix, Scalar};
use crate::error::{Error, Result};
use crate::math;

/// Largest matrix dimension accepted by [`char_poly`].
pub const MAX_CHAR_POLY_DIM: usize = 64;

const ABERTH_MAX_ITER: usize = 2000;

/// Polynomial with complex coefficients in ascending degree.
///
/// Exact zero coefficients above the leading one are dropped, so
/// `degree() == coeffs().len() − 1` except for the zero polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == Scalar::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Scalar::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::new(c, 0.0)).collect())
    }

    /// `Π (x − r_i)`.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        let mut c = vec![Scalar::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Scalar::new(0.0, 0.0); c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        Self::new(c)
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Scalar::new(0.0, 0.0); k + 1];
        c[k] = Scalar::new(1.0, 0.0);
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Scalar::new(0.0, 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Horner evaluation of the real part of the coefficients at a real point.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.re)
    }

    /// `Σ |c_k| |z|^k`, the scale against which residuals at `z` are judged.
    pub fn magnitude_at(&self, z: Scalar) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![Scalar::new(0.0, 0.0)]);
        }
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * Scalar::new(k as f64, 0.0)).collect(),
        )
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficientwise comparison relative to the larger coefficient.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| {
            let (a, b) = (self.coeff(k), other.coeff(k));
            (a - b).norm() <= rel_tol * a.norm().max(b.norm()).max(1.0)
        })
    }
}

/// Characteristic polynomial `det(εI − A)`.
///
/// `A` is brought to upper Hessenberg form by pivoted elementary similarity
/// transforms (a no-op on matrices that are already Hessenberg, so integer
/// tridiagonal input stays exact), then the Hessenberg determinant recurrence
/// is expanded in `ε`.
pub fn char_poly(a: &DenseMatrix) -> Result<Polynomial> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: (a.rows(), a.rows()), found: (a.rows(), a.cols()) });
    }
    let n = a.rows();
    if n > MAX_CHAR_POLY_DIM {
        return Err(Error::DimensionTooLarge { n, max: MAX_CHAR_POLY_DIM });
    }
    let h = hessenberg_elementary(a);
    let zero = Scalar::new(0.0, 0.0);
    // p[k] holds det(εI − H[..k, ..k]) in ascending coefficients.
    let mut p: Vec<Vec<Scalar>> = Vec::with_capacity(n + 1);
    p.push(vec![Scalar::new(1.0, 0.0)]);
    for k in 1..=n {
        let prev = &p[k - 1];
        let mut next = vec![zero; k + 1];
        let d = h[(k - 1, k - 1)];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= d * c;
        }
        let mut prod = Scalar::new(1.0, 0.0);
        for i in (1..k).rev() {
            prod *= h[(i, i - 1)];
            if prod == zero {
                break;
            }
            let f = h[(i - 1, k - 1)] * prod;
            if f == zero {
                continue;
            }
            for (j, &c) in p[i - 1].iter().enumerate() {
                next[j] -= f * c;
            }
        }
        p.push(next);
    }
    Ok(Polynomial::new(p.pop().unwrap_or_default()))
}

/// Upper Hessenberg form by stabilised elementary similarity transforms.
pub(crate) fn hessenberg_elementary(a: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let mut piv = m;
        let mut best = h[(m, m - 1)].norm();
        for i in m + 1..n {
            let v = h[(i, m - 1)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            continue;
        }
        if piv != m {
            for j in 0..n {
                let t = h[(piv, j)];
                h[(piv, j)] = h[(m, j)];
                h[(m, j)] = t;
            }
            for i in 0..n {
                let t = h[(i, piv)];
                h[(i, piv)] = h[(i, m)];
                h[(i, m)] = t;
            }
        }
        let x = h[(m, m - 1)];
        for i in m + 1..n {
            let y = h[(i, m - 1)];
            if y.norm() == 0.0 {
                continue;
            }
            let y = y / x;
            h[(i, m - 1)] = Scalar::new(0.0, 0.0);
            for j in m..n {
                let v = h[(m, j)];
                h[(i, j)] -= y * v;
            }
            for r in 0..n {
                let v = h[(r, i)];
                h[(r, m)] += y * v;
            }
        }
    }
    h
}

/// All complex roots of `p` by Aberth–Ehrlich simultaneous iteration.
///
/// Exactly vanishing low-order coefficients contribute exact zero roots.
/// Every returned root satisfies `|p(z)| ≤ tol · Σ|c_k||z|^k`.
pub fn poly_roots(p: &Polynomial, tol: f64) -> Result<Vec<Scalar>> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::InvalidInput("polynomial must have degree >= 1"));
    }
    let zero = Scalar::new(0.0, 0.0);
    let leading_zeros = p.coeffs().iter().take_while(|&&c| c == zero).count();
    let mut roots = vec![zero; leading_zeros];
    let reduced = Polynomial::new(p.coeffs()[leading_zeros..].to_vec());
    let n = reduced.degree();
    match n {
        0 => return Ok(roots),
        1 => {
            roots.push(-reduced.coeff(0) / reduced.coeff(1));
            return Ok(roots);
        }
        _ => {}
    }
    let lead = reduced.coeff(n);
    let monic = Polynomial::new(reduced.coeffs().iter().map(|&c| c / lead).collect());
    let dmonic = monic.derivative();

    let radius = math::powf(monic.coeff(0).norm(), 1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Scalar> = (0..n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64 + 0.4;
            Scalar::new(radius * math::cos(theta), radius * math::sin(theta))
        })
        .collect();
    let mut done = vec![false; n];
    let eps = f64::EPSILON;
    let mut iterations = 0;
    while iterations < ABERTH_MAX_ITER && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let pv = monic.eval(zi);
            if pv.norm() <= 4.0 * eps * monic.magnitude_at(zi) {
                done[i] = true;
                continue;
            }
            let dv = dmonic.eval(zi);
            let ratio = pv / dv;
            let repulsion: Scalar =
                z.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &zj)| Scalar::new(1.0, 0.0) / (zi - zj)).sum();
            let denom = Scalar::new(1.0, 0.0) - ratio * repulsion;
            let w = if dv.norm() == 0.0 || !ratio.is_finite() || denom.norm() == 0.0 {
                // Kick off a stationary point of p.
                Scalar::new(radius * 1e-3 + zi.norm() * 1e-3, radius * 1e-3)
            } else {
                ratio / denom
            };
            z[i] = zi - w;
            if w.norm() <= 2.0 * eps * z[i].norm() {
                done[i] = true;
            }
        }
    }
    for &zi in &z {
        let residual = monic.eval(zi).norm();
        if !(residual <= tol * monic.magnitude_at(zi)) {
            return Err(Error::NonConvergence { iterations });
        }
    }
    roots.extend(z);
    Ok(roots)
}

/// A group of roots treated as one multiple root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub center: Scalar,
    pub multiplicity: usize,
}

/// Groups approximate roots into multiple roots.
///
/// Around each unassigned root the hypothesised multiplicities `m = 2, 3, …`
/// are tested in turn; the largest `m` with at least `m` roots inside
/// `tol^(1/m)` wins and the `m` nearest roots form the cluster. Distances are measured relative to `max(1, |z|)`.
pub fn cluster_roots(roots: &[Scalar], tol: f64) -> Vec<RootCluster> {
    let mut assigned = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if assigned[i] {
            continue;
        }
        let zi = roots[i];
        let scale = zi.norm().max(1.0);
        let mut dists: Vec<(f64, usize)> = (0..roots.len())
            .filter(|&j| !assigned[j])
            .map(|j| ((roots[j] - zi).norm() / scale, j))
            .collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut m = 1;
        for trial in 2..=dists.len() {
            let radius = math::powf(tol, 1.0 / trial as f64);
            if dists.iter().filter(|(d, _)| *d <= radius).count() >= trial {
                m = trial;
            }
        }
        let members: Vec<usize> = dists.iter().take(m).map(|&(_, j)| j).collect();
        let mut center = Scalar::new(0.0, 0.0);
        for &j in &members {
            assigned[j] = true;
            center += roots[j];
        }
        out.push(RootCluster { center: center / m as f64, multiplicity: m });
    }
    out
}

/// Snaps to the real axis those approximate roots of a real polynomial whose
/// reality is certified by a sign change of `p` on the real line.
///
/// Roots with `|Im z| ≤ 1e-3·max(|z|, scale)` are candidates. Candidates are
/// ordered by real part and separated at midpoints; a candidate is certified
/// when `p` changes sign across its separating interval. Non-certified roots
/// are returned unchanged. The second value counts certified roots.
pub fn certify_real_roots(p: &Polynomial, roots: &[Scalar], scale: f64) -> (Vec<Scalar>, usize) {
    let mut out = roots.to_vec();
    if !p.is_real() || roots.is_empty() {
        return (out, 0);
    }
    let mut cand: Vec<usize> =
        (0..roots.len()).filter(|&i| roots[i].im.abs() <= 1e-3 * roots[i].norm().max(scale)).collect();
    cand.sort_by(|&a, &b| roots[a].re.total_cmp(&roots[b].re));
    let n = p.degree();
    let lead = p.coeff(n).re;
    let sign_neg_inf = if n % 2 == 0 { lead.signum() } else { -lead.signum() };
    let sign_pos_inf = lead.signum();
    let mut certified = 0;
    for (k, &idx) in cand.iter().enumerate() {
        let left = if k == 0 {
            sign_neg_inf
        } else {
            let b = 0.5 * (roots[cand[k - 1]].re + roots[idx].re);
            p.eval_real(b).signum_strict()
        };
        let right = if k + 1 == cand.len() {
            sign_pos_inf
        } else {
            let b = 0.5 * (roots[idx].re + roots[cand[k + 1]].re);
            p.eval_real(b).signum_strict()
        };
        if left != 0.0 && right != 0.0 && left != right {
            out[idx] = Scalar::new(roots[idx].re, 0.0);
            certified += 1;
        }
    }
    (out, certified)
}

trait StrictSign {
    fn signum_strict(self) -> f64;
}

impl StrictSign for f64 {
    /// Like `signum` but zero (and NaN) map to `0.0`.
    fn signum_strict(self) -> f64 {
        if self > 0.0 {
            1.0
        } else if self < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
}
