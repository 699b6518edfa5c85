use alloc::vec::Vec;

use super::{DenseMatrix, Scalar};
use crate::error::{Error, Result};

/// LU factorisation with partial pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
    /// True when some pivot was exactly zero.
    singular: bool,
}

impl Lu {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: (a.rows(), a.rows()), found: (a.rows(), a.cols()) });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            if pivot.norm() == 0.0 {
                singular = true;
                continue;
            }
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= m * u;
                }
            }
        }
        Ok(Self { lu, perm, singular })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn is_exactly_singular(&self) -> bool {
        self.singular
    }

    /// Solves `A x = b`. Zero pivots are replaced by `floor` so inverse
    /// iteration can run on exactly singular shifts.
    pub fn solve_with_floor(&self, b: &[Scalar], floor: f64) -> Vec<Scalar> {
        let n = self.dim();
        let mut x: Vec<Scalar> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            let mut d = self.lu[(i, i)];
            if d.norm() < floor {
                d = Scalar::new(floor, 0.0);
            }
            x[i] = acc / d;
        }
        x
    }

    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        if self.singular {
            return Err(Error::SingularMatrix { condition: f64::INFINITY });
        }
        if b.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: (self.dim(), 1), found: (b.len(), 1) });
        }
        Ok(self.solve_with_floor(b, 0.0))
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.dim();
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = alloc::vec![Scalar::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = Scalar::new(0.0, 0.0));
            e[j] = Scalar::new(1.0, 0.0);
            let col = self.solve(&e)?;
            inv.set_column(j, &col);
        }
        Ok(inv)
    }
}

/// One-norm condition number `‖A‖₁·‖A⁻¹‖₁`, infinite for exactly singular `A`.
pub fn condition_one(a: &DenseMatrix) -> Result<f64> {
    let lu = Lu::factor(a)?;
    if lu.is_exactly_singular() {
        return Ok(f64::INFINITY);
    }
    Ok(a.norm_one() * lu.inverse()?.norm_one())
}

/// Inverse of a square matrix, refused when its condition exceeds `1/tol`.
pub fn inverse(a: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let lu = Lu::factor(a)?;
    if lu.is_exactly_singular() {
        return Err(Error::SingularMatrix { condition: f64::INFINITY });
    }
    let inv = lu.inverse()?;
    let condition = a.norm_one() * inv.norm_one();
    if !(condition.is_finite() && condition * tol <= 1.0) {
        return Err(Error::SingularMatrix { condition });
    }
    Ok(inv)
}

/// Solves `A x = b` with partial-pivoting LU.
///
/// Fails with [`Error::SingularMatrix`] when the one-norm condition estimate
/// exceeds `1/tol`.
pub fn solve_linear(a: &DenseMatrix, b: &[Scalar], tol: f64) -> Result<Vec<Scalar>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch { expected: (a.rows(), 1), found: (b.len(), 1) });
    }
    let lu = Lu::factor(a)?;
    if lu.is_exactly_singular() {
        return Err(Error::SingularMatrix { condition: f64::INFINITY });
    }
    let condition = a.norm_one() * lu.inverse()?.norm_one();
    if !(condition.is_finite() && condition * tol <= 1.0) {
        return Err(Error::SingularMatrix { condition });
    }
    lu.solve(b)
}
