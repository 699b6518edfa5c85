use epperturb_core::domain::{is_physical, metric, pseudo_value, Family, Param};
use epperturb_core::hamiltonians::{build, build_on_path, ep_couplings, parity, HamiltonianSpec, PathParams};
use epperturb_core::jordan::{jordan_chain, JordanForm};
use epperturb_core::numerics::{
    char_poly, eigenpairs, min_singular_value, poly_roots, re, solve_linear, vec_norm,
};
use epperturb_core::puiseux::{secular_polynomial, secular_value, PerturbedJordanProblem};
use epperturb_core::{DenseMatrix, Scalar};
use proptest::prelude::*;

fn matrix(n: usize, vals: &[f64]) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let k = 2 * (i * n + j);
            a[(i, j)] = Scalar::new(vals[k], vals[k + 1]);
        }
    }
    a
}

fn sized_matrix(max: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |v| matrix(n, &v)))
}

/// Greedy nearest matching; fine for well-separated spectra.
fn multiset_distance(a: &[Scalar], b: &[Scalar]) -> f64 {
    let mut left: Vec<Scalar> = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, d) = left
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        worst = worst.max(d);
        left.swap_remove(idx);
    }
    worst
}

fn min_separation(v: &[Scalar]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            m = m.min((v[i] - v[j]).norm());
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_residual_is_small(a in sized_matrix(32), bv in prop::collection::vec(-1.0f64..1.0, 64)) {
        let n = a.rows();
        // Diagonal dominance keeps the system well conditioned.
        let mut a = a;
        for i in 0..n {
            a[(i, i)] += re(2.0 * n as f64);
        }
        let b: Vec<Scalar> = (0..n).map(|i| Scalar::new(bv[2 * i % 64], bv[(2 * i + 1) % 64])).collect();
        let x = solve_linear(&a, &b, 1e-10).unwrap();
        let ax = a.matvec(&x).unwrap();
        let r: Vec<Scalar> = ax.iter().zip(&b).map(|(p, q)| p - q).collect();
        prop_assert!(vec_norm(&r) <= 1e-10 * vec_norm(&b).max(1e-300));
    }

    #[test]
    fn char_poly_roots_match_qr(a in sized_matrix(8)) {
        let pairs = eigenpairs(&a, 1e-8).unwrap();
        prop_assume!(min_separation(&pairs.values) > 1e-3);
        let roots = poly_roots(&char_poly(&a).unwrap(), 1e-10).unwrap();
        prop_assert!(multiset_distance(&roots, &pairs.values) <= 1e-8);
    }

    #[test]
    fn normal_matrix_singular_value_is_distance(
        d in prop::collection::vec(-2.0f64..2.0, 12),
        v in prop::collection::vec(-1.0f64..1.0, 6),
        z in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let n = 6;
        let nv: f64 = v.iter().map(|x| x * x).sum();
        prop_assume!(nv > 1e-3);
        // Householder reflection Q = I − 2vvᵀ/|v|² is real orthogonal.
        let mut q = DenseMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                q[(i, j)] -= re(2.0 * v[i] * v[j] / nv);
            }
        }
        let diag: Vec<Scalar> = (0..n).map(|k| Scalar::new(d[2 * k], d[2 * k + 1])).collect();
        let a = q.matmul(&DenseMatrix::from_diagonal(&diag)).unwrap().matmul(&q.transpose()).unwrap();
        let z = Scalar::new(z.0, z.1);
        let dist = diag.iter().map(|e| (z - e).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!((min_singular_value(&a.shifted(z)).unwrap() - dist).abs() <= 1e-10);
        prop_assert!((pseudo_value(&a, z).unwrap() - dist).abs() <= 1e-10);
    }

    #[test]
    fn parity_pseudo_hermiticity(n in 2usize..9, g in prop::collection::vec(-3.0f64..3.0, 4), s in -2.0f64..2.0) {
        let h = build(&HamiltonianSpec::new(n, g[..n / 2].to_vec()).with_shift(s)).unwrap();
        let p = parity(n);
        prop_assert_eq!(p.matmul(&h).unwrap().matmul(&p).unwrap(), h.transpose());
    }

    #[test]
    fn spectrum_is_symmetric_about_zero(n in 2usize..9, g in prop::collection::vec(-3.0f64..3.0, 4)) {
        let h = build(&HamiltonianSpec::new(n, g[..n / 2].to_vec())).unwrap();
        let p = char_poly(&h).unwrap();
        let scale = p.max_coeff();
        // Only powers with the parity of N survive.
        for k in 0..=n {
            if (n - k) % 2 == 1 {
                prop_assert!(p.coeff(k).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn benchmark_eigenpair_residuals(n in 2usize..7, t in 0.05f64..0.95) {
        let h = build_on_path(n, &PathParams::new(n, t), 0.0).unwrap();
        let ep = eigenpairs(&h, 1e-9).unwrap();
        for (e, v) in ep.values.iter().zip(&ep.right) {
            let hv = h.matvec(v).unwrap();
            let r: Vec<Scalar> = hv.iter().zip(v).map(|(a, b)| a - e * b).collect();
            prop_assert!(vec_norm(&r) <= 1e-9 * h.norm_inf().max(1.0));
        }
    }

    #[test]
    fn small_paths_have_closed_form_spectra(t in 0.001f64..0.999) {
        let h = build_on_path(2, &PathParams::new(2, t), 0.0).unwrap();
        let e = eigenpairs(&h, 1e-9).unwrap().values;
        prop_assert!((e[0] - re(-t.sqrt())).norm() < 1e-10 && (e[1] - re(t.sqrt())).norm() < 1e-10);
        let h = build_on_path(3, &PathParams::new(3, t), 0.0).unwrap();
        let e = eigenpairs(&h, 1e-9).unwrap().values;
        let want = [-2.0 * t.sqrt(), 0.0, 2.0 * t.sqrt()];
        for (x, w) in e.iter().zip(want) {
            prop_assert!((x - re(w)).norm() < 1e-9);
        }
    }

    #[test]
    fn path_interior_is_physical(n in 2usize..7, t in 0.005f64..0.995) {
        let h = build_on_path(n, &PathParams::new(n, t), 0.0).unwrap();
        prop_assert!(is_physical(&h, 1e-10));
    }

    #[test]
    fn metric_intertwines(n in 2usize..9, t in 0.05f64..0.5) {
        let h = Family::at_ep(n).matrix_at(&[(Param::T, t)]).unwrap();
        let m = metric(&h, 1e-10, None).unwrap();
        prop_assert_eq!(&m.theta, &m.theta.adjoint());
        prop_assert!(m.intertwine_residual <= 1e-8);
        prop_assert!(m.min_eigenvalue > 0.0);
    }

    #[test]
    fn shifted_ep_chains_satisfy_the_chain_equations(k in 2usize..7, s in -3.0f64..3.0) {
        let h = build(&HamiltonianSpec::new(k, ep_couplings(k)).with_shift(s)).unwrap();
        let jf: JordanForm = jordan_chain(&h, re(s), k, 1e-10).unwrap();
        let scale = h.norm_inf() * jf.q.norm_inf();
        prop_assert!(jf.residual(&h).unwrap() <= 1e-7 * scale);
    }

    #[test]
    fn secular_value_vanishes_on_roots(k in 2usize..6, vals in prop::collection::vec(-1.0f64..1.0, 36)) {
        let lambda = 1e-3;
        let mut w = DenseMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                w[(i, j)] = re(lambda * vals[i * 6 + j]);
            }
        }
        prop_assume!(vals[(k - 1) * 6].abs() > 0.05);
        let p = PerturbedJordanProblem::new(re(0.0), w, lambda).unwrap();
        let roots = poly_roots(&secular_polynomial(&p).unwrap(), 1e-12).unwrap();
        for e in roots {
            prop_assert!(secular_value(&p, e).unwrap().norm() <= 1e-10);
        }
    }
}

#[test]
fn path_start_is_the_ep() {
    for n in 2..=6 {
        let h = build_on_path(n, &PathParams::new(n, 0.0), 0.0).unwrap();
        assert_eq!(h, build(&HamiltonianSpec::new(n, ep_couplings(n))).unwrap());
        assert!(!is_physical(&h, 1e-10), "N = {n}");
    }
}
