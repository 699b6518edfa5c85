//! Jordan chains and transition matrices `Q` with `H Q = Q S`, where `S` is a
//! single Jordan block.
//!
//! A chain for eigenvalue `s` is a sequence `q₁ … q_K` with
//! `(H − s)q₁ = 0` and `(H − s)q_{j+1} = q_j`. It is unique only up to right
//! multiplication of `Q` by an invertible upper-triangular Toeplitz matrix
//! (the matrices commuting with `S`); [`chain_gauge`] recovers that factor.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::numerics::{inverse, re, svd, vec_norm, DenseMatrix, Scalar};

/// Single-block Jordan decomposition `H Q = Q S`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanForm {
    pub eigenvalue: Scalar,
    pub k: usize,
    /// Columns are the chain `q₁ … q_K`.
    pub q: DenseMatrix,
    pub s: DenseMatrix,
}

impl JordanForm {
    /// `‖H Q − Q S‖∞`.
    pub fn residual(&self, h: &DenseMatrix) -> Result<f64> {
        Ok(h.matmul(&self.q)?.sub(&self.q.matmul(&self.s)?)?.norm_inf())
    }
}

/// The degenerate eigenvalue of a fully merged benchmark EP matrix, taken as
/// `trace(H)/N`.
pub fn benchmark_eigenvalue(h: &DenseMatrix) -> Scalar {
    h.trace() / h.rows() as f64
}

/// `rank((H − sI)^k)` for `k = 1, 2, …` until the rank stops dropping.
pub fn rank_sequence(h: &DenseMatrix, s: Scalar, tol: f64) -> Result<Vec<usize>> {
    if !h.is_square() {
        return Err(Error::InvalidInput("matrix must be square"));
    }
    let n = h.rows();
    let a = h.shifted(s);
    let norm = svd(&a)?.sigma.first().copied().unwrap_or(0.0).max(1.0);
    let mut ranks = Vec::new();
    let mut power = DenseMatrix::identity(n);
    for k in 1..=n {
        power = power.matmul(&a)?;
        let thr = tol * math::powf(norm, k as f64) * n as f64;
        let r = svd(&power)?.rank(thr);
        let stalled = ranks.last() == Some(&r);
        ranks.push(r);
        if stalled || r == 0 {
            break;
        }
    }
    Ok(ranks)
}

/// Size of the single Jordan block at `s`, from the rank sequence.
pub fn detect_block_size(h: &DenseMatrix, s: Scalar, tol: f64) -> Result<usize> {
    let n = h.rows();
    let ranks = rank_sequence(h, s, tol)?;
    let deficiency: Vec<usize> = ranks.iter().map(|&r| n - r).collect();
    let single = deficiency.first() == Some(&1)
        && deficiency.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
    if !single {
        return Err(Error::NotSingleBlock { ranks });
    }
    Ok(*deficiency.last().unwrap_or(&0))
}

fn jordan_s(k: usize, s: Scalar) -> DenseMatrix {
    DenseMatrix::jordan_block(k, s)
}

/// Jordan chain of minimal-norm particular solutions.
///
/// `q₁` spans the kernel of `H − sI`, has unit length and a positive first
/// non-negligible component; each `q_{j+1}` is the minimal-norm solution of
/// `(H − s)q = q_j`.
pub fn jordan_chain(h: &DenseMatrix, s: Scalar, k: usize, tol: f64) -> Result<JordanForm> {
    let detected = detect_block_size(h, s, tol)?;
    if detected != k {
        return Err(Error::NotSingleBlock { ranks: rank_sequence(h, s, tol)? });
    }
    let a = h.shifted(s);
    let dec = svd(&a)?;
    let n = h.rows();
    let thr = tol * dec.sigma[0].max(1.0);
    let mut q1 = dec.v.column(n - 1);
    let lead = q1.iter().copied().find(|z| z.norm() > 1e-8).unwrap_or(re(1.0));
    let phase = lead.conj() / lead.norm();
    q1.iter_mut().for_each(|z| *z *= phase);
    let mut chain = vec![q1];
    let anorm = dec.sigma[0];
    for step in 1..k {
        let b = chain[step - 1].clone();
        let x = dec.pseudo_solve(&b, thr);
        let ax = a.matvec(&x)?;
        let res = vec_norm(&ax.iter().zip(&b).map(|(p, q)| p - q).collect::<Vec<_>>());
        let scale = anorm * vec_norm(&x) + vec_norm(&b);
        if res > math::sqrt(tol) * scale {
            return Err(Error::ChainBreakdown { step, residual: res });
        }
        chain.push(x);
    }
    finish(h, s, chain, tol)
}

/// Jordan chain grown downward from a seed: `q_K = seed`,
/// `q_j = (H − s) q_{j+1}`.
///
/// With `seed = e₁` this reproduces the printed benchmark transition
/// matrices exactly.
pub fn jordan_chain_from_seed(h: &DenseMatrix, s: Scalar, k: usize, seed: &[Scalar], tol: f64) -> Result<JordanForm> {
    if seed.len() != h.rows() || k == 0 || k > h.rows() {
        return Err(Error::InvalidInput("seed length or block size does not fit the matrix"));
    }
    let a = h.shifted(s);
    let mut rev = vec![seed.to_vec()];
    for _ in 1..k {
        let next = a.matvec(rev.last().unwrap())?;
        rev.push(next);
    }
    rev.reverse();
    let head = &rev[0];
    let tail = a.matvec(head)?;
    let scale = (a.norm_inf() * vec_norm(head)).max(f64::MIN_POSITIVE);
    if vec_norm(head) <= tol * scale || vec_norm(&tail) > tol * scale * 10.0 {
        return Err(Error::ChainBreakdown { step: k, residual: vec_norm(&tail) });
    }
    finish(h, s, rev, tol)
}

fn finish(h: &DenseMatrix, s: Scalar, chain: Vec<Vec<Scalar>>, tol: f64) -> Result<JordanForm> {
    let k = chain.len();
    let q = DenseMatrix::from_columns(&chain);
    if k == h.rows() && inverse(&q, tol).is_err() {
        return Err(Error::SingularQ);
    }
    Ok(JordanForm { eigenvalue: s, k, q, s: jordan_s(k, s) })
}

/// Upper-triangular Toeplitz factor `T` with `q_to = q_from · T`, returned as
/// its first row `(T₁₁, T₁₂, …)`; the diagonal entry is the common column
/// scale. Fails unless `T` has that structure within `tol·‖T‖`.
pub fn chain_gauge(q_from: &DenseMatrix, q_to: &DenseMatrix, tol: f64) -> Result<Vec<Scalar>> {
    let t = inverse(q_from, tol)?.matmul(q_to)?;
    let k = t.rows();
    let scale = t.max_abs().max(1.0);
    for i in 0..k {
        for j in 0..k {
            let expected = if j >= i { t[(0, j - i)] } else { Scalar::new(0.0, 0.0) };
            if (t[(i, j)] - expected).norm() > tol * scale {
                return Err(Error::ChainBreakdown { step: j + 1, residual: (t[(i, j)] - expected).norm() });
            }
        }
    }
    Ok((0..k).map(|j| t[(0, j)]).collect())
}

/// Printed transition matrix of the `K×K` benchmark EP matrix, `K = 2…5`.
pub fn fixture_q(k: usize) -> Result<DenseMatrix> {
    let s2 = math::sqrt(2.0);
    let s3 = math::sqrt(3.0);
    let s6 = math::sqrt(6.0);
    let m = match k {
        2 => DenseMatrix::from_real_rows(&[[1.0, 1.0], [-1.0, 0.0]]),
        3 => DenseMatrix::from_real_rows(&[[2.0, 2.0, 1.0], [-2.0 * s2, -s2, 0.0], [2.0, 0.0, 0.0]]),
        4 => DenseMatrix::from_real_rows(&[
            [6.0, 6.0, 3.0, 1.0],
            [-6.0 * s3, -4.0 * s3, -s3, 0.0],
            [6.0 * s3, 2.0 * s3, 0.0, 0.0],
            [-6.0, 0.0, 0.0, 0.0],
        ]),
        5 => DenseMatrix::from_real_rows(&[
            [24.0, 24.0, 12.0, 4.0, 1.0],
            [-48.0, -36.0, -12.0, -2.0, 0.0],
            [24.0 * s6, 12.0 * s6, 2.0 * s6, 0.0, 0.0],
            [-48.0, -12.0, 0.0, 0.0, 0.0],
            [24.0, 0.0, 0.0, 0.0, 0.0],
        ]),
        other => return Err(Error::UnsupportedK(other)),
    };
    Ok(m)
}

/// Jordan form of a benchmark EP matrix with the printed `Q`.
pub fn fixture_form(k: usize) -> Result<JordanForm> {
    Ok(JordanForm { eigenvalue: re(0.0), k, q: fixture_q(k)?, s: jordan_s(k, re(0.0)) })
}

/// `W = Q⁻¹ H Q − S`, the perturbation as seen from the Jordan frame.
pub fn extract_perturbation(h: &DenseMatrix, jf: &JordanForm) -> Result<DenseMatrix> {
    if h.rows() != jf.q.rows() || !h.is_square() || jf.q.rows() != jf.q.cols() {
        return Err(Error::DimensionMismatch { expected: (jf.q.rows(), jf.q.rows()), found: (h.rows(), h.cols()) });
    }
    let qinv = inverse(&jf.q, crate::DEFAULT_TOL).map_err(|_| Error::SingularQ)?;
    qinv.matmul(&h.matmul(&jf.q)?)?.sub(&jf.s)
}

/// Complex-symmetric two-mode example split at its exceptional point.
#[derive(Debug, Clone, PartialEq)]
pub struct CsFixture {
    pub h0: DenseMatrix,
    pub q: DenseMatrix,
    pub s: DenseMatrix,
}

/// `H₀ = ¼[[−2iγ₁, γ₁−γ₂], [γ₁−γ₂, −2iγ₂]]` with its transition matrix
/// `Q = ¼[[−i(γ₁−γ₂), 4], [γ₁−γ₂, 0]]` and Jordan block of eigenvalue
/// `−i(γ₁+γ₂)/4`.
pub fn cs_fixture(gamma1: f64, gamma2: f64) -> Result<CsFixture> {
    let d = gamma1 - gamma2;
    if d == 0.0 {
        return Err(Error::DegenerateGammas);
    }
    let i = Scalar::new(0.0, 1.0);
    let h0 = DenseMatrix::from_rows(&[vec![-i * (0.5 * gamma1), re(0.25 * d)], vec![re(0.25 * d), -i * (0.5 * gamma2)]]);
    let q = DenseMatrix::from_rows(&[vec![-i * (0.25 * d), re(1.0)], vec![re(0.25 * d), re(0.0)]]);
    let e = -i * (0.25 * (gamma1 + gamma2));
    Ok(CsFixture { h0, q, s: jordan_s(2, e) })
}
