//! Closed-form provider against the generic symbolic pipeline, plus an
//! eigendecomposition oracle for the Hermitian square root.

mod common;

use common::{rng, sample_box};
use geomlab::ballvol::sqrt_inverse;
use geomlab::metric::{christoffel_at, curvature_at, Axis, HermitianMetric, MetricField, PotentialField};
use geomlab::warren::{self, WarrenField};
use geomlab::{tolerances, Complex64};
use nalgebra::Matrix4;
use rand::Rng;

fn symbolic_field() -> PotentialField {
    PotentialField::new(warren::potential_ast())
}

#[test]
fn closed_forms_match_symbolic_pipeline_at_1000_points() {
    let field = symbolic_field();
    let mut r = rng(11);
    let tol = tolerances::CHRISTOFFEL_ORACLE;
    for _ in 0..1000 {
        let p = sample_box(&mut r, 3.0);
        let g_sym = field.metric_at(p).unwrap();
        let g_cf = warren::metric(p);
        assert!((g_sym.g11 - g_cf.g11).abs() <= tol);
        assert!((g_sym.g22 - g_cf.g22).abs() <= tol);
        assert!((g_sym.g12 - g_cf.g12).norm() <= tol);

        let inv_sym = g_sym.inverse().unwrap();
        let inv_cf = warren::inverse(p);
        let scale = inv_cf.g11.abs().max(inv_cf.g22.abs()).max(1.0);
        assert!((inv_sym.g11 - inv_cf.g11).abs() <= tol * scale);
        assert!((inv_sym.g22 - inv_cf.g22).abs() <= tol * scale);
        assert!((inv_sym.g12 - inv_cf.g12).norm() <= tol * scale);

        let gamma_sym = christoffel_at(&field, p).unwrap();
        let gamma_cf = warren::christoffel(p);
        assert!((gamma_sym.z_zz - gamma_cf.z_zz).norm() <= tol);
        assert!((gamma_sym.z_zw - gamma_cf.z_zw).norm() <= tol);
        assert!((gamma_sym.z_ww - gamma_cf.z_ww).norm() <= tol);
        assert!((gamma_sym.w_zz - gamma_cf.w_zz).norm() <= tol);
        assert!((gamma_sym.w_zw - gamma_cf.w_zw).norm() <= tol);
        assert!((gamma_sym.w_ww - gamma_cf.w_ww).norm() <= tol);
    }
}

#[test]
fn closed_form_entry_derivatives_match_symbolic() {
    // validates the hand-differentiated d and dd tables of the provider
    let field = symbolic_field();
    let cf = WarrenField;
    let mut r = rng(12);
    for _ in 0..200 {
        let p = sample_box(&mut r, 2.0);
        for gamma in Axis::BOTH {
            let a = field.metric_d_at(p, gamma).unwrap();
            let b = cf.metric_d_at(p, gamma).unwrap();
            assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
            for delta in Axis::BOTH {
                let a = field.metric_dd_at(p, gamma, delta).unwrap();
                let b = cf.metric_dd_at(p, gamma, delta).unwrap();
                assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
            }
        }
    }
}

#[test]
fn inverse_composes_to_identity() {
    // the unit-determinant check itself lives in the acceptance suite
    let field = symbolic_field();
    let mut r = rng(13);
    for _ in 0..1000 {
        let p = sample_box(&mut r, 3.0);
        let g = field.metric_at(p).unwrap();
        let prod = g.to_matrix() * g.inverse().unwrap().to_matrix();
        let id = geomlab::metric::Mat2::identity();
        assert!((prod - id).norm() <= 1e-12 * (1.0 + g.to_matrix().norm()));
    }
}

#[test]
fn symbolic_curvature_vanishes_on_the_unimodular_potential() {
    let field = symbolic_field();
    let mut r = rng(14);
    for _ in 0..200 {
        let p = sample_box(&mut r, 3.0);
        let curv = curvature_at(&field, p).unwrap();
        assert!(
            curv.max_abs() <= tolerances::FLATNESS,
            "curvature {} at {}",
            curv.max_abs(),
            p
        );
    }
}

/// Square root via explicit 2x2 Hermitian eigendecomposition, the
/// independent route for the closed-form square root.
fn eigen_sqrt(m: &HermitianMetric) -> (f64, f64, Complex64, Complex64) {
    // returns (s11, s22, s12, s21) of sqrt(m)
    let tr = m.g11 + m.g22;
    let disc = ((m.g11 - m.g22) * (m.g11 - m.g22) + 4.0 * m.g12.norm_sqr()).sqrt();
    let l1 = (tr - disc) / 2.0;
    let l2 = (tr + disc) / 2.0;
    if m.g12.norm() < 1e-300 {
        return (m.g11.sqrt(), m.g22.sqrt(), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    }
    // eigenvector for lambda: (b, lambda - a), normalized
    let mut s = [[Complex64::new(0.0, 0.0); 2]; 2];
    for l in [l1, l2] {
        let v = [m.g12, Complex64::new(l - m.g11, 0.0)];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        let v = [v[0] / n, v[1] / n];
        let sl = l.sqrt();
        for i in 0..2 {
            for j in 0..2 {
                s[i][j] += sl * v[i] * v[j].conj();
            }
        }
    }
    (s[0][0].re, s[1][1].re, s[0][1], s[1][0])
}

fn realify_transpose(s11: f64, s22: f64, s12: Complex64) -> Matrix4<f64> {
    // real embedding of the complex transpose of the Hermitian matrix
    let b = |c: Complex64| [[c.re, -c.im], [c.im, c.re]];
    let t12 = b(s12.conj());
    let t21 = b(s12);
    Matrix4::new(
        s11, 0.0, t12[0][0], t12[0][1],
        0.0, s11, t12[1][0], t12[1][1],
        t21[0][0], t21[0][1], s22, 0.0,
        t21[1][0], t21[1][1], 0.0, s22,
    )
}

#[test]
fn sqrt_inverse_matches_eigendecomposition_oracle() {
    let mut r = rng(15);
    for _ in 0..200 {
        // random positive definite Hermitian with determinant one
        let g11: f64 = r.random_range(0.2..4.0);
        let g12 = Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let g22 = (1.0 + g12.norm_sqr()) / g11;
        let m = HermitianMetric::new(g11, g22, g12);
        assert!((m.det() - 1.0).abs() < 1e-12);

        let closed = sqrt_inverse(&m).unwrap();
        let inv = m.inverse().unwrap();
        let (s11, s22, s12, _) = eigen_sqrt(&inv);
        let oracle = realify_transpose(s11, s22, s12);
        assert!(
            (closed - oracle).norm() <= 1e-11,
            "closed vs eigen oracle: {}",
            (closed - oracle).norm()
        );
        assert!((closed.determinant() - 1.0).abs() <= tolerances::FRAME_DET);
    }
}

#[test]
fn frame_determinant_is_unit_along_the_unimodular_field() {
    let field = WarrenField;
    let mut r = rng(16);
    for _ in 0..100 {
        let p = sample_box(&mut r, 2.0);
        let t = sqrt_inverse(&field.metric_at(p).unwrap()).unwrap();
        assert!((t.determinant() - 1.0).abs() <= tolerances::FRAME_DET);
    }
}
