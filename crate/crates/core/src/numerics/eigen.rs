use alloc::vec;
use alloc::vec::Vec;

use super::linsolve::Lu;
use super::poly::hessenberg_elementary;
use super::{vec_norm, DenseMatrix, Scalar};
use crate::error::{Error, Result};
use crate::math;

/// Eigenvalues with unit-norm right (`A v = E v`) and left (`u† A = E u†`)
/// eigenvectors, sorted by real part, then imaginary part.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<Scalar>,
    pub right: Vec<Vec<Scalar>>,
    pub left: Vec<Vec<Scalar>>,
}

/// Eigenvalues by shifted complex QR iteration on the Hessenberg form.
///
/// This route shares nothing with [`char_poly`](super::char_poly) beyond the
/// Hessenberg reduction, so the two can check each other.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<Scalar>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: (a.rows(), a.rows()), found: (a.rows(), a.cols()) });
    }
    let n = a.rows();
    let mut h = hessenberg_elementary(a);
    let mut out = vec![Scalar::new(0.0, 0.0); n];
    let eps = f64::EPSILON;
    let max_iter = 60 * n.max(1);
    let mut total = 0;
    let mut since_deflation = 0;
    let mut hi = n;
    while hi > 0 {
        if hi == 1 {
            out[0] = h[(0, 0)];
            break;
        }
        // Look for a negligible subdiagonal entry in the active block.
        let mut l = hi - 1;
        while l > 0 {
            let s = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            let s = if s == 0.0 { h.max_abs() } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = Scalar::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi - 1 {
            out[hi - 1] = h[(hi - 1, hi - 1)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::NonConvergence { iterations: total });
        }
        let mu = if since_deflation % 11 == 10 {
            // Exceptional shift.
            h[(hi - 1, hi - 1)] + Scalar::new(0.75 * h[(hi - 1, hi - 2)].norm(), 0.25 * h[(hi - 1, hi - 2)].norm())
        } else {
            wilkinson_shift(h[(hi - 2, hi - 2)], h[(hi - 2, hi - 1)], h[(hi - 1, hi - 2)], h[(hi - 1, hi - 1)])
        };
        qr_step(&mut h, l, hi, mu);
    }
    Ok(out)
}

fn wilkinson_shift(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Scalar {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// One explicitly shifted QR sweep on the active block `[lo, hi)` by Givens
/// rotations.
fn qr_step(h: &mut DenseMatrix, lo: usize, hi: usize, mu: Scalar) {
    for k in lo..hi {
        h[(k, k)] -= mu;
    }
    let mut rots: Vec<(f64, Scalar)> = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = math::sqrt(x.norm_sqr() + y.norm_sqr());
        let (c, s) = if r == 0.0 {
            (1.0, Scalar::new(0.0, 0.0))
        } else if x.norm() == 0.0 {
            (0.0, y.conj() / y.norm())
        } else {
            let xn = x.norm();
            (xn / r, (x / xn) * y.conj() / r)
        };
        for j in k..hi {
            let hk = h[(k, j)];
            let hk1 = h[(k + 1, j)];
            h[(k, j)] = hk * c + s * hk1;
            h[(k + 1, j)] = -s.conj() * hk + hk1 * c;
        }
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        let top = (k + 2).min(hi);
        for i in lo..top {
            let hk = h[(i, k)];
            let hk1 = h[(i, k + 1)];
            h[(i, k)] = hk * c + s.conj() * hk1;
            h[(i, k + 1)] = -s * hk + hk1 * c;
        }
    }
    for k in lo..hi {
        h[(k, k)] += mu;
    }
}

/// Sorts by real part; runs of values whose real parts agree within `tol`
/// are ordered by imaginary part.
pub fn sort_spectrum(values: &mut [Scalar], tol: f64) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && (values[end].re - values[end - 1].re).abs() <= tol {
            end += 1;
        }
        values[start..end].sort_by(|a, b| a.im.total_cmp(&b.im));
        start = end;
    }
}

/// Unit eigenvector of `a` for the (approximate) eigenvalue `e` by inverse
/// iteration.
pub fn inverse_iteration(a: &DenseMatrix, e: Scalar) -> Result<Vec<Scalar>> {
    let n = a.rows();
    let scale = a.norm_inf().max(1.0);
    let lu = Lu::factor(&a.shifted(e))?;
    let floor = f64::EPSILON * scale;
    // Fixed, generic starting vector.
    let mut x: Vec<Scalar> = (0..n).map(|i| Scalar::new(1.0 + 0.37 * i as f64, 0.11 * (i % 3) as f64)).collect();
    let nx = vec_norm(&x);
    x.iter_mut().for_each(|z| *z /= nx);
    for _ in 0..4 {
        let y = lu.solve_with_floor(&x, floor);
        let ny = vec_norm(&y);
        if !(ny.is_finite() && ny > 0.0) {
            return Err(Error::NonConvergence { iterations: 0 });
        }
        x = y.into_iter().map(|z| z / ny).collect();
    }
    Ok(normalize_phase(x))
}

/// Rotates the phase so that the largest component is real and positive.
pub(crate) fn normalize_phase(mut v: Vec<Scalar>) -> Vec<Scalar> {
    let big = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
    if big.norm() > 0.0 {
        let ph = big.conj() / big.norm();
        v.iter_mut().for_each(|z| *z *= ph);
    }
    v
}

/// Eigenvalues with right and left eigenvectors.
///
/// Vectors come from inverse iteration; each pair is checked to satisfy
/// `‖A v − E v‖ ≤ tol · max(1, ‖A‖∞)` (likewise for the left vector).
pub fn eigenpairs(a: &DenseMatrix, tol: f64) -> Result<EigenPairs> {
    let mut values = eigenvalues(a)?;
    let scale = a.norm_inf().max(1.0);
    sort_spectrum(&mut values, tol * scale);
    let adj = a.adjoint();
    let mut right = Vec::with_capacity(values.len());
    let mut left = Vec::with_capacity(values.len());
    for &e in &values {
        let v = inverse_iteration(a, e)?;
        let u = inverse_iteration(&adj, e.conj())?;
        let rv = residual(a, &v, e)?;
        let ru = residual(&adj, &u, e.conj())?;
        if rv > tol * scale || ru > tol * scale {
            return Err(Error::NonConvergence { iterations: 4 });
        }
        right.push(v);
        left.push(u);
    }
    Ok(EigenPairs { values, right, left })
}

fn residual(a: &DenseMatrix, v: &[Scalar], e: Scalar) -> Result<f64> {
    let av = a.matvec(v)?;
    Ok(vec_norm(&av.iter().zip(v).map(|(x, y)| x - e * y).collect::<Vec<_>>()))
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi on the
/// real symmetric embedding `[[Re, −Im], [Im, Re]]`.
pub fn hermitian_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::InvalidInput("hermitian_eigenvalues needs a square matrix"));
    }
    let n = a.rows();
    let m = 2 * n;
    let mut s = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            // Symmetrise so tiny non-Hermitian noise does not matter.
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            s[i * m + j] = z.re;
            s[(i + n) * m + (j + n)] = z.re;
            s[(i + n) * m + j] = z.im;
            s[i * m + (j + n)] = -z.im;
        }
    }
    let eps = f64::EPSILON;
    let floor = eps * eps * s.iter().map(|x| x * x).sum::<f64>();
    let mut converged = false;
    for _ in 0..100 {
        let mut rotated = false;
        for p in 0..m {
            for q in p + 1..m {
                let apq = s[p * m + q];
                let app = s[p * m + p];
                let aqq = s[q * m + q];
                if apq * apq <= floor || apq.abs() <= eps * math::sqrt((app * aqq).abs()) {
                    s[p * m + q] = 0.0;
                    s[q * m + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let sn = t * c;
                for k in 0..m {
                    let akp = s[k * m + p];
                    let akq = s[k * m + q];
                    s[k * m + p] = c * akp - sn * akq;
                    s[k * m + q] = sn * akp + c * akq;
                }
                for k in 0..m {
                    let apk = s[p * m + k];
                    let aqk = s[q * m + k];
                    s[p * m + k] = c * apk - sn * aqk;
                    s[q * m + k] = sn * apk + c * aqk;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { iterations: 100 });
    }
    let mut d: Vec<f64> = (0..m).map(|i| s[i * m + i]).collect();
    d.sort_by(f64::total_cmp);
    // Every eigenvalue appears twice in the embedding.
    Ok(d.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect())
}
