use alloc::vec::Vec;

use super::{vec_dot, vec_norm, DenseMatrix, Scalar};
use crate::error::{Error, Result};
use crate::math;

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `A = U·diag(σ)·V†`, `σ` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

impl Svd {
    /// Number of singular values above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.sigma.iter().filter(|&&s| s > threshold).count()
    }

    /// Minimal-norm least-squares solution of `A x = b`, discarding singular
    /// values at or below `threshold`.
    pub fn pseudo_solve(&self, b: &[Scalar], threshold: f64) -> Vec<Scalar> {
        let n = self.v.rows();
        let mut x = alloc::vec![Scalar::new(0.0, 0.0); n];
        for (k, &s) in self.sigma.iter().enumerate() {
            if s <= threshold {
                continue;
            }
            let uk = self.u.column(k);
            let coef = vec_dot(&uk, b) / s;
            for i in 0..n {
                x[i] += self.v[(i, k)] * coef;
            }
        }
        x
    }
}

/// One-sided (Hestenes) Jacobi SVD of an `m×n` matrix with `m ≥ n`.
///
/// Columns are rotated pairwise until mutually orthogonal to working
/// precision; the singular values are then the column norms, which keeps
/// small singular values accurate relative to their own size.
pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::DimensionMismatch { expected: (n, n), found: (m, n) });
    }
    let mut cols: Vec<Vec<Scalar>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            let mut e = alloc::vec![Scalar::new(0.0, 0.0); n];
            e[j] = Scalar::new(1.0, 0.0);
            e
        })
        .collect();
    let eps = f64::EPSILON;
    // Pairs whose coupling sits below rounding noise of the whole matrix are
    // left alone; otherwise noise-level columns can rotate forever.
    let total: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum();
    let floor = eps * eps * total;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = vec_dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= floor || g <= eps * math::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + math::sqrt(1.0 + zeta * zeta));
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                // Rotate (a_p, e^{-iφ} a_q), which have a real inner product.
                for i in 0..m {
                    let ap = cols[p][i];
                    let aq = cols[q][i] * phase.conj();
                    cols[p][i] = ap * c - aq * s;
                    cols[q][i] = ap * s + aq * c;
                }
                for i in 0..n {
                    let vp = vcols[p][i];
                    let vq = vcols[q][i] * phase.conj();
                    vcols[p][i] = vp * c - vq * s;
                    vcols[q][i] = vp * s + vq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { iterations: MAX_SWEEPS });
    }
    let mut order: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (vec_norm(c), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut u = DenseMatrix::zeros(m, n);
    let mut v = DenseMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        if s > 0.0 {
            let uk: Vec<Scalar> = cols[j].iter().map(|z| z / s).collect();
            u.set_column(k, &uk);
        }
        v.set_column(k, &vcols[j]);
    }
    complete_left_basis(&mut u, &sigma);
    Ok(Svd { u, sigma, v })
}

/// Fills columns of `u` belonging to zero singular values with an
/// orthonormal completion (Gram–Schmidt against the unit vectors).
fn complete_left_basis(u: &mut DenseMatrix, sigma: &[f64]) {
    let m = u.rows();
    for k in 0..sigma.len() {
        if sigma[k] > 0.0 {
            continue;
        }
        for e in 0..m {
            let mut cand = alloc::vec![Scalar::new(0.0, 0.0); m];
            cand[e] = Scalar::new(1.0, 0.0);
            for j in 0..sigma.len() {
                if j == k || (sigma[j] == 0.0 && j > k) {
                    continue;
                }
                let uj = u.column(j);
                let proj = vec_dot(&uj, &cand);
                for i in 0..m {
                    cand[i] -= uj[i] * proj;
                }
            }
            let nrm = vec_norm(&cand);
            if nrm > 0.5 {
                let c: Vec<Scalar> = cand.iter().map(|z| z / nrm).collect();
                u.set_column(k, &c);
                break;
            }
        }
    }
}

/// Smallest singular value of a square matrix.
pub fn min_singular_value(a: &DenseMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::InvalidInput("min_singular_value needs a square matrix"));
    }
    if a.rows() == 0 {
        return Err(Error::InvalidInput("empty matrix"));
    }
    Ok(*svd(a)?.sigma.last().unwrap_or(&0.0))
}
