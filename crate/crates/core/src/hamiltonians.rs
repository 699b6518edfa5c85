//! The tridiagonal "discrete anharmonic" benchmark family.
//!
//! An `N×N` member has the equidistant diagonal `N−1, N−3, …, 1−N` (plus an
//! optional shift `s`) and `J = ⌊N/2⌋` real couplings placed symmetrically
//! about the centre: `g₁` is the outermost pair, `g_J` the innermost. The
//! upper off-diagonal carries `+g`, the lower one `−g`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::numerics::{re, DenseMatrix};

/// Parameters of one benchmark matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub n: usize,
    /// `g₁ … g_J`, outermost first.
    pub couplings: Vec<f64>,
    pub shift: f64,
}

impl HamiltonianSpec {
    pub fn new(n: usize, couplings: Vec<f64>) -> Self {
        Self { n, couplings, shift: 0.0 }
    }

    pub fn with_shift(mut self, s: f64) -> Self {
        self.shift = s;
        self
    }

    pub fn num_couplings(&self) -> usize {
        self.n / 2
    }
}

/// Index (0-based, into `g`) of the coupling between sites `k` and `k+1`
/// (1-based `k`): `min(k, N−k)`.
pub fn coupling_index(n: usize, k: usize) -> usize {
    k.min(n - k) - 1
}

pub fn build(spec: &HamiltonianSpec) -> Result<DenseMatrix> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::InvalidInput("dimension must be at least 2"));
    }
    if spec.couplings.len() != n / 2 {
        return Err(Error::BadCouplingLength { expected: n / 2, found: spec.couplings.len() });
    }
    let mut h = DenseMatrix::zeros(n, n);
    for k in 1..=n {
        h[(k - 1, k - 1)] = re((n + 1) as f64 - 2.0 * k as f64 + spec.shift);
        if k < n {
            let g = spec.couplings[coupling_index(n, k)];
            h[(k - 1, k)] = re(g);
            h[(k, k - 1)] = re(-g);
        }
    }
    Ok(h)
}

/// Couplings `g_n = √(n(N−n))` of the maximal exceptional point, where all
/// `N` levels merge at zero.
pub fn ep_couplings(n: usize) -> Vec<f64> {
    (1..=n / 2).map(|k| math::sqrt((k * (n - k)) as f64)).collect()
}

/// Point on the interpolation path between the EP (`t = 0`) and the
/// diagonal weak-coupling limit (`t = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct PathParams {
    pub t: f64,
    /// Top-order coefficients `G_n`, one per coupling.
    pub g_top: Vec<f64>,
}

impl PathParams {
    /// Path point with [`default_g_top`] coefficients.
    pub fn new(n: usize, t: f64) -> Self {
        Self { t, g_top: default_g_top(n) }
    }

    pub fn with_g_top(t: f64, g_top: Vec<f64>) -> Self {
        Self { t, g_top }
    }
}

/// Default `G_n`: `2 − J` for every coupling, which makes `ξ_n(1) = 1`.
///
/// This gives `G₁ = 1` at `J = 1` and `G_n = 0` at `J = 2`.
pub fn default_g_top(n: usize) -> Vec<f64> {
    let j = n / 2;
    vec![2.0 - j as f64; j]
}

/// `ξ_n(t) = t + t² + … + t^(J−1) + G_n t^J` for every coupling.
pub fn path_xi(n: usize, p: &PathParams) -> Result<Vec<f64>> {
    let j = n / 2;
    if p.g_top.len() != j {
        return Err(Error::BadCouplingLength { expected: j, found: p.g_top.len() });
    }
    let mut head = 0.0;
    let mut tp = 1.0;
    for _ in 1..j {
        tp *= p.t;
        head += tp;
    }
    let t_j = tp * p.t;
    Ok(p.g_top.iter().map(|g| head + g * t_j).collect())
}

/// `g_n(t) = √(n(N−n)) · √(1 − ξ_n(t))`.
pub fn path_couplings(n: usize, p: &PathParams) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidInput("dimension must be at least 2"));
    }
    let xi = path_xi(n, p)?;
    let g0 = ep_couplings(n);
    xi.iter()
        .zip(&g0)
        .enumerate()
        .map(|(idx, (&x, &g))| {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::PathOutOfRange { index: idx + 1, xi: x });
            }
            Ok(g * math::sqrt(1.0 - x))
        })
        .collect()
}

pub fn build_on_path(n: usize, p: &PathParams, s: f64) -> Result<DenseMatrix> {
    build(&HamiltonianSpec::new(n, path_couplings(n, p)?).with_shift(s))
}

/// `P = diag(+1, −1, +1, …)`, the parity for which `P H P = Hᵀ`.
pub fn parity(n: usize) -> DenseMatrix {
    let d: Vec<_> = (0..n).map(|k| re(if k % 2 == 0 { 1.0 } else { -1.0 })).collect();
    DenseMatrix::from_diagonal(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_rows(h: &DenseMatrix) -> Vec<Vec<f64>> {
        (0..h.rows()).map(|i| h.row(i).iter().map(|z| z.re).collect()).collect()
    }

    #[test]
    fn two_by_two() {
        let h = build(&HamiltonianSpec::new(2, vec![0.3])).unwrap();
        assert_eq!(real_rows(&h), vec![vec![1.0, 0.3], vec![-0.3, -1.0]]);
    }

    #[test]
    fn printed_ep_matrices() {
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let s6 = 6f64.sqrt();
        let expect: [(usize, Vec<Vec<f64>>); 4] = [
            (2, vec![vec![1.0, 1.0], vec![-1.0, -1.0]]),
            (3, vec![vec![2.0, s2, 0.0], vec![-s2, 0.0, s2], vec![0.0, -s2, -2.0]]),
            (
                4,
                vec![
                    vec![3.0, s3, 0.0, 0.0],
                    vec![-s3, 1.0, 2.0, 0.0],
                    vec![0.0, -2.0, -1.0, s3],
                    vec![0.0, 0.0, -s3, -3.0],
                ],
            ),
            (
                5,
                vec![
                    vec![4.0, 2.0, 0.0, 0.0, 0.0],
                    vec![-2.0, 2.0, s6, 0.0, 0.0],
                    vec![0.0, -s6, 0.0, s6, 0.0],
                    vec![0.0, 0.0, -s6, -2.0, 2.0],
                    vec![0.0, 0.0, 0.0, -2.0, -4.0],
                ],
            ),
        ];
        for (n, rows) in expect {
            let h = build(&HamiltonianSpec::new(n, ep_couplings(n))).unwrap();
            let want = DenseMatrix::from_real_rows(&rows);
            assert!(h.approx_eq(&want, 1e-15), "N = {n}");
        }
    }

    #[test]
    fn four_by_four_general_couplings() {
        // g = (b, a): b on the outer pairs, a in the centre.
        let (a, b) = (0.7, 0.2);
        let h = build(&HamiltonianSpec::new(4, vec![b, a])).unwrap();
        assert_eq!(
            real_rows(&h),
            vec![
                vec![3.0, b, 0.0, 0.0],
                vec![-b, 1.0, a, 0.0],
                vec![0.0, -a, -1.0, b],
                vec![0.0, 0.0, -b, -3.0]
            ]
        );
    }

    #[test]
    fn zero_couplings_leave_the_diagonal() {
        let h = build(&HamiltonianSpec::new(5, vec![0.0, 0.0])).unwrap();
        let want: Vec<_> = [4.0, 2.0, 0.0, -2.0, -4.0].iter().map(|&x| re(x)).collect();
        assert_eq!(h, DenseMatrix::from_diagonal(&want));
    }

    #[test]
    fn shift_enters_only_the_diagonal() {
        let h = build(&HamiltonianSpec::new(2, vec![0.5]).with_shift(0.25)).unwrap();
        assert_eq!(real_rows(&h), vec![vec![1.25, 0.5], vec![-0.5, -0.75]]);
    }

    #[test]
    fn bad_coupling_length() {
        assert_eq!(
            build(&HamiltonianSpec::new(4, vec![1.0])),
            Err(Error::BadCouplingLength { expected: 2, found: 1 })
        );
    }

    #[test]
    fn ep_coupling_values() {
        assert_eq!(ep_couplings(2), vec![1.0]);
        assert_eq!(ep_couplings(5), vec![2.0, 6f64.sqrt()]);
        assert_eq!(ep_couplings(4), vec![3f64.sqrt(), 2.0]);
    }

    #[test]
    fn path_examples() {
        let g = path_couplings(2, &PathParams::with_g_top(0.19, vec![1.0])).unwrap();
        assert!((g[0] - 0.9).abs() < 1e-15);
        assert_eq!(path_couplings(3, &PathParams::new(3, 0.0)).unwrap(), vec![2f64.sqrt()]);
        let g = path_couplings(4, &PathParams::with_g_top(1.0, vec![0.0, 0.0])).unwrap();
        assert_eq!(g, vec![0.0, 0.0]);
        let h = build_on_path(2, &PathParams::new(2, 1.0), 0.0).unwrap();
        assert_eq!(real_rows(&h), vec![vec![1.0, 0.0], vec![0.0, -1.0]]);
    }

    #[test]
    fn default_top_coefficients() {
        assert_eq!(default_g_top(2), vec![1.0]);
        assert_eq!(default_g_top(3), vec![1.0]);
        assert_eq!(default_g_top(4), vec![0.0, 0.0]);
        assert_eq!(default_g_top(6), vec![-1.0; 3]);
        for n in 2..=7 {
            let xi = path_xi(n, &PathParams::new(n, 1.0)).unwrap();
            assert!(xi.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        }
    }

    #[test]
    fn path_out_of_range() {
        let err = path_couplings(4, &PathParams::with_g_top(0.9, vec![0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::PathOutOfRange { index: 2, .. }));
        assert!(path_couplings(2, &PathParams::new(2, -0.1)).is_err());
    }

    #[test]
    fn three_by_three_path_matrix() {
        let h = build_on_path(3, &PathParams::new(3, 0.25), 0.0).unwrap();
        let c = 2f64.sqrt() * 0.75f64.sqrt();
        let want = DenseMatrix::from_real_rows(&[[2.0, c, 0.0], [-c, 0.0, c], [0.0, -c, -2.0]]);
        assert!(h.approx_eq(&want, 1e-15));
    }
}
