//! Shared test machinery: finite-difference Wirtinger oracles and seeded
//! point sampling. Everything here is independent of the symbolic
//! differentiation path it is used to check; derivatives come from stencils
//! on plain evaluations.

#![allow(dead_code)]

use geomlab::expr::{eval, ExprRef, Sym};
use geomlab::metric::Mat2;
use geomlab::{CPoint, Complex64};
use nalgebra::Matrix2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the box `|x|, |y|, |u|, |v| <= half`.
pub fn sample_box(rng: &mut ChaCha8Rng, half: f64) -> CPoint {
    CPoint::new(
        rng.random_range(-half..=half),
        rng.random_range(-half..=half),
        rng.random_range(-half..=half),
        rng.random_range(-half..=half),
    )
}

fn shift(p: CPoint, coord: usize, d: f64) -> CPoint {
    let mut a = p.to_array();
    a[coord] += d;
    CPoint::from_array(a)
}

/// Fourth-order central stencil along one real coordinate.
fn stencil_real<F: Fn(CPoint) -> Complex64>(f: &F, p: CPoint, coord: usize, h: f64) -> Complex64 {
    (-f(shift(p, coord, 2.0 * h)) + 8.0 * f(shift(p, coord, h)) - 8.0 * f(shift(p, coord, -h))
        + f(shift(p, coord, -2.0 * h)))
        / (12.0 * h)
}

/// Finite-difference Wirtinger derivative of a complex-valued function:
/// `d/dz = (d/dx - i d/dy)/2` and `d/dzbar = (d/dx + i d/dy)/2`, likewise
/// for `w` with `(u, v)`.
pub fn fd_wirtinger<F: Fn(CPoint) -> Complex64>(
    f: &F,
    p: CPoint,
    sym: Sym,
    h: f64,
) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    match sym {
        Sym::Z => (stencil_real(f, p, 0, h) - i * stencil_real(f, p, 1, h)) / 2.0,
        Sym::ZBar => (stencil_real(f, p, 0, h) + i * stencil_real(f, p, 1, h)) / 2.0,
        Sym::W => (stencil_real(f, p, 2, h) - i * stencil_real(f, p, 3, h)) / 2.0,
        Sym::WBar => (stencil_real(f, p, 2, h) + i * stencil_real(f, p, 3, h)) / 2.0,
    }
}

/// Nested finite-difference derivative for a key of Wirtinger symbols,
/// leftmost symbol applied first. Every level uses the same step.
pub fn fd_wirtinger_key<F: Fn(CPoint) -> Complex64 + Copy>(
    f: F,
    p: CPoint,
    key: &[Sym],
    h: f64,
) -> Complex64 {
    match key.len() {
        0 => f(p),
        1 => fd_wirtinger(&f, p, key[0], h),
        _ => {
            let (rest, last) = key.split_at(key.len() - 1);
            let inner = |q: CPoint| fd_wirtinger_key(f, q, rest, h);
            fd_wirtinger(&inner, p, last[0], h)
        }
    }
}

/// Evaluate a tree, panicking on singularities (test fixtures avoid them).
pub fn eval_fn(ast: &ExprRef) -> impl Fn(CPoint) -> Complex64 + Copy + '_ {
    move |p| eval(ast, p).expect("fixture evaluates")
}

/// Step used by the pure finite-difference curvature oracle. Large enough
/// that fourth-order nesting stays above rounding noise, small enough that
/// the truncation error sits well under the cross-method tolerance.
pub const FD_CURVATURE_STEP: f64 = 0.02;

/// Pure finite-difference curvature: metric entries and their derivatives
/// all come from nested stencils on the potential, assembled with the
/// Kähler shortcut formulas. No symbolic step anywhere.
pub fn fd_curvature<F: Fn(CPoint) -> Complex64 + Copy>(
    f: F,
    p: CPoint,
    h: f64,
) -> [[[[Complex64; 2]; 2]; 2]; 2] {
    let axes = [(Sym::Z, Sym::ZBar), (Sym::W, Sym::WBar)];

    let entry = |alpha: usize, beta: usize, extra: &[Sym]| -> Complex64 {
        let mut key = vec![axes[alpha].0, axes[beta].1];
        key.extend_from_slice(extra);
        fd_wirtinger_key(f, p, &key, h)
    };

    let mut g = Mat2::zeros();
    for alpha in 0..2 {
        for beta in 0..2 {
            g[(alpha, beta)] = entry(alpha, beta, &[]);
        }
    }
    let ginv = g.try_inverse().expect("fd metric invertible");

    let mut d = [Mat2::zeros(), Mat2::zeros()];
    for (gamma, dm) in d.iter_mut().enumerate() {
        for alpha in 0..2 {
            for beta in 0..2 {
                dm[(alpha, beta)] = entry(alpha, beta, &[axes[gamma].0]);
            }
        }
    }

    let zero = Complex64::new(0.0, 0.0);
    let mut r = [[[[zero; 2]; 2]; 2]; 2];
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut dd = Matrix2::zeros();
            for a in 0..2 {
                for b in 0..2 {
                    dd[(a, b)] = entry(a, b, &[axes[alpha].0, axes[beta].1]);
                }
            }
            let dbar_ginv = -ginv * d[beta].adjoint() * ginv;
            let m = dd * ginv + d[alpha] * dbar_ginv;
            for gamma in 0..2 {
                for delta in 0..2 {
                    r[delta][alpha][beta][gamma] = -m[(gamma, delta)];
                }
            }
        }
    }
    r
}

pub fn max_abs_tensor(t: &[[[[Complex64; 2]; 2]; 2]; 2]) -> f64 {
    let mut m = 0.0f64;
    for d in t {
        for a in d {
            for b in a {
                for c in b {
                    m = m.max(c.norm());
                }
            }
        }
    }
    m
}

/// Seeded geodesic initial condition on the unimodular field whose direction
/// is not a blow-up one and whose Q stays at or above 0.05 on `[0, 1]`.
pub fn safe_geodesic_ic(
    r: &mut ChaCha8Rng,
) -> (
    geomlab::geodesic::GeodesicState,
    geomlab::warren::GeodesicParams,
) {
    use geomlab::warren::{classify_direction, q_theta, DirectionClass, GeodesicParams};
    use geomlab::CTangent;
    loop {
        let base = sample_box(r, 3.0);
        let vel = CTangent::new(
            r.random_range(-1.5..=1.5),
            r.random_range(-1.5..=1.5),
            r.random_range(-1.5..=1.5),
            r.random_range(-1.5..=1.5),
        );
        let params = GeodesicParams::new(base, vel);
        if matches!(
            classify_direction(vel.du, vel.dv),
            DirectionClass::Blowup { .. }
        ) {
            continue;
        }
        let norm = params.w_vel.norm_sqr();
        let vertex = if norm > 0.0 {
            (2.0 * params.w_vel.re / norm).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let min_q = q_theta(&params, vertex).q.min(q_theta(&params, 1.0).q);
        if min_q < 0.05 {
            continue;
        }
        return (
            geomlab::geodesic::GeodesicState::new(0.0, base, vel),
            params,
        );
    }
}
