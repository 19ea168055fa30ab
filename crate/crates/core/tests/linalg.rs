mod common;

use common::{dense_complement_projector, fro, gaussian, low_rank, sym_eigen};
use voronoi_cur_core::cssp::reconstruction_error;
use voronoi_cur_core::linalg::{
    fro_norm, orthonormal_residual, pinv_apply, singular_values, thin_qr, thin_svd,
    truncated_svd, OrthonormalBasis,
};
use voronoi_cur_core::DenseMatrix;

#[test]
fn svd_of_identity_and_diagonal() {
    let s = truncated_svd(&DenseMatrix::identity(4), 4).unwrap();
    assert!(s.singular_values.iter().all(|v| (v - 1.0).abs() < 1e-15));

    let d = DenseMatrix::from_fn(3, 3, |i, j| if i == j { [1.0, 3.0, 2.0][i] } else { 0.0 });
    let s = truncated_svd(&d, 3).unwrap();
    assert_eq!(s.singular_values, vec![3.0, 2.0, 1.0]);
    // Largest |entry| of each left vector is positive.
    assert_eq!(s.left[(1, 0)], 1.0);
    assert_eq!(s.left[(2, 1)], 1.0);
    assert_eq!(s.left[(0, 2)], 1.0);
}

#[test]
fn svd_matches_eigen_oracle() {
    let a = gaussian(8, 5, 11);
    let s = truncated_svd(&a, 3).unwrap();
    let (evals, evecs) = sym_eigen(&a.t_matmul(&a).unwrap());
    for i in 0..3 {
        assert!((s.singular_values[i] - evals[i].sqrt()).abs() < 1e-10 * evals[0].sqrt());
        // Right vectors agree with the eigenvectors up to sign.
        let dot: f64 = (0..5).map(|t| s.right[(t, i)] * evecs[(t, i)]).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-8);
    }
    let u = &s.left;
    let utu = u.t_matmul(u).unwrap();
    assert!(fro(&utu.sub(&DenseMatrix::identity(3)).unwrap()) < 1e-12);
}

#[test]
fn svd_reconstruction_and_tail() {
    for (m, n) in [(12, 7), (7, 12), (9, 9)] {
        let a = gaussian(m, n, (m * 31 + n) as u64);
        let full = thin_svd(&a);
        let err = fro(&a.sub(&full.reconstruct()).unwrap());
        assert!(err < 1e-12 * fro(&a), "{m}x{n}: {err}");

        // ‖A − A_d‖_F equals the singular-value tail.
        let sv = singular_values(&a);
        let d = 3;
        let trunc = truncated_svd(&a, d).unwrap();
        let tail: f64 = sv[d..].iter().map(|s| s * s).sum::<f64>().sqrt();
        let got = fro(&a.sub(&trunc.reconstruct()).unwrap());
        assert!((got - tail).abs() < 1e-10 * fro(&a));
    }
}

#[test]
fn svd_of_rank_deficient_input() {
    let a = low_rank(15, 10, 3, 2);
    let s = thin_svd(&a);
    assert_eq!(s.rank(), 3);
    assert!(fro(&a.sub(&s.reconstruct()).unwrap()) < 1e-12 * fro(&a));
    assert!(truncated_svd(&a, 0).is_err());
    assert!(truncated_svd(&a, 11).is_err());
}

#[test]
fn orthonormal_residual_matches_dot_products() {
    let q = thin_qr(&gaussian(6, 2, 4)).unwrap();
    let a = gaussian(6, 4, 5);
    let r = orthonormal_residual(&a, &q).unwrap();
    let qm = q.matrix();
    for j in 0..4 {
        for i in 0..6 {
            let mut expected = a[(i, j)];
            for t in 0..2 {
                let c: f64 = (0..6).map(|s| qm[(s, t)] * a[(s, j)]).sum();
                expected -= c * qm[(i, t)];
            }
            assert!((r[(i, j)] - expected).abs() < 1e-12);
        }
    }
    // Projecting twice changes nothing.
    let again = orthonormal_residual(&r, &q).unwrap();
    assert!(fro(&again.sub(&r).unwrap()) < 1e-12);
}

#[test]
fn orthonormal_residual_edge_cases() {
    let a = gaussian(5, 3, 9);
    let none = orthonormal_residual(&a, &OrthonormalBasis::empty(5)).unwrap();
    assert_eq!(none, a);
    let all = OrthonormalBasis::new(DenseMatrix::identity(5)).unwrap();
    assert!(fro(&orthonormal_residual(&a, &all).unwrap()) < 1e-14);
    assert!(orthonormal_residual(&gaussian(4, 3, 1), &all).is_err());
}

#[test]
fn thin_qr_of_tall_gaussian() {
    let a = gaussian(10, 4, 3);
    let q = thin_qr(&a).unwrap();
    assert_eq!(q.dim(), 4);
    let res = orthonormal_residual(&a, &q).unwrap();
    assert!(fro_norm(&res) <= 1e-9 * fro_norm(&a));
}

#[test]
fn pinv_least_squares_solution() {
    let c = gaussian(9, 3, 21);
    let b = gaussian(9, 2, 22);
    let x = pinv_apply(&c, &b).unwrap();
    // Normal equations: Cᵀ(CX − B) = 0.
    let grad = c.t_matmul(&c.matmul(&x).unwrap().sub(&b).unwrap()).unwrap();
    assert!(fro(&grad) < 1e-10 * fro(&b) * fro(&c));
}

#[test]
fn reconstruction_error_examples() {
    let a = gaussian(7, 4, 8);
    assert!(reconstruction_error(&a, &a).unwrap() < 1e-14);

    let e1 = DenseMatrix::from_columns(2, &[vec![1.0, 0.0]]).unwrap();
    let got = reconstruction_error(&DenseMatrix::identity(2), &e1).unwrap();
    assert!((got - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

    let zero = DenseMatrix::zeros(2, 1);
    assert_eq!(reconstruction_error(&DenseMatrix::identity(2), &zero).unwrap(), 1.0);
    assert!(reconstruction_error(&a, &DenseMatrix::zeros(7, 0)).is_err());
    assert!(reconstruction_error(&a, &DenseMatrix::zeros(6, 1)).is_err());
}

#[test]
fn reconstruction_error_matches_dense_projector() {
    for seed in 0..5 {
        let a = gaussian(12, 9, 100 + seed);
        let c = a.select_columns(&[1, 4, 7]);
        let p = dense_complement_projector(&c);
        let oracle = fro(&p.matmul(&a).unwrap()) / fro(&a);
        let got = reconstruction_error(&a, &c).unwrap();
        assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
    }
}
