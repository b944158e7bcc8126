//! Closed-form provider for the unimodular metric generated by the potential
//! `f = 4|z|^2 e^{Re w} + e^{-Re w}`: metric entries, inverse, Christoffel
//! symbols, exact geodesics with their blow-up classification, and the unit
//! Jacobian of the exponential map. This is the oracle suite the generic
//! symbolic pipeline is tested against.

use crate::expr::ExprRef;
use crate::metric::{Axis, ChristoffelSet, HermitianMetric, Mat2, MetricError, MetricField};
use crate::point::{CPoint, CTangent};
use num_complex::Complex64;

/// Source text of the potential, parseable by [`crate::expr::parse`].
pub const POTENTIAL_SRC: &str = "4*|z|^2*exp(Re(w)) + exp(-Re(w))";

/// Parsed potential tree.
pub fn potential_ast() -> ExprRef {
    crate::expr::parse(POTENTIAL_SRC).expect("builtin potential parses")
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WarrenError {
    #[error("geodesic closed form out of domain at t = {t} (Q = {q:e} <= 0)")]
    OutOfDomain { t: f64, q: f64 },
    #[error("exponential-map Jacobian undefined: Q(1) = 0 for velocity (U, V) = ({u}, {v})")]
    UndefinedJacobian { u: f64, v: f64 },
}

/// `f(z, w) = 4|z|^2 e^u + e^{-u}` with `u = Re w`. Always positive.
pub fn potential(p: CPoint) -> f64 {
    let eu = p.u.exp();
    4.0 * p.z().norm_sqr() * eu + 1.0 / eu
}

/// Metric entries `[[4e^u, 2 conj(z) e^u], [2z e^u, |z|^2 e^u + e^{-u}/4]]`.
pub fn metric(p: CPoint) -> HermitianMetric {
    let eu = p.u.exp();
    HermitianMetric::new(
        4.0 * eu,
        p.z().norm_sqr() * eu + 0.25 / eu,
        2.0 * p.z().conj() * eu,
    )
}

/// Closed-form inverse `[[e^{-u}/4 + |z|^2 e^u, -2 conj(z) e^u], [-2z e^u, 4e^u]]`.
pub fn inverse(p: CPoint) -> HermitianMetric {
    let eu = p.u.exp();
    HermitianMetric::new(
        0.25 / eu + p.z().norm_sqr() * eu,
        4.0 * eu,
        -2.0 * p.z().conj() * eu,
    )
}

/// The six symbols: only `Gamma^z_{zw} = 1/2`, `Gamma^z_{ww} = z/2` and
/// `Gamma^w_{ww} = -1/2` are nonzero.
pub fn christoffel(p: CPoint) -> ChristoffelSet {
    let zero = Complex64::new(0.0, 0.0);
    ChristoffelSet {
        z_zz: zero,
        z_zw: Complex64::new(0.5, 0.0),
        z_ww: p.z() / 2.0,
        w_zz: zero,
        w_zw: zero,
        w_ww: Complex64::new(-0.5, 0.0),
    }
}

/// Closed-form field satisfying the generic [`MetricField`] queries. The
/// entry derivatives are hand-differentiated from the metric matrix above.
#[derive(Debug, Clone, Copy, Default)]
pub struct WarrenField;

impl MetricField for WarrenField {
    fn metric_at(&self, p: CPoint) -> Result<HermitianMetric, MetricError> {
        Ok(metric(p))
    }

    fn metric_d_at(&self, p: CPoint, gamma: Axis) -> Result<Mat2, MetricError> {
        let eu = Complex64::new(p.u.exp(), 0.0);
        let emu = Complex64::new((-p.u).exp(), 0.0);
        let z = p.z();
        let zbar = z.conj();
        let zero = Complex64::new(0.0, 0.0);
        Ok(match gamma {
            // d/dz: only the z-dependent entries move
            Axis::Z => Mat2::new(zero, zero, 2.0 * eu, zbar * eu),
            // d/dw: e^u differentiates to e^u/2, e^{-u} to -e^{-u}/2
            Axis::W => Mat2::new(
                2.0 * eu,
                zbar * eu,
                z * eu,
                0.5 * z.norm_sqr() * eu - 0.125 * emu,
            ),
        })
    }

    fn metric_dd_at(&self, p: CPoint, gamma: Axis, delta: Axis) -> Result<Mat2, MetricError> {
        let eu = Complex64::new(p.u.exp(), 0.0);
        let emu = Complex64::new((-p.u).exp(), 0.0);
        let z = p.z();
        let zbar = z.conj();
        let zero = Complex64::new(0.0, 0.0);
        Ok(match (gamma, delta) {
            (Axis::Z, Axis::Z) => Mat2::new(zero, zero, zero, eu),
            (Axis::Z, Axis::W) => Mat2::new(zero, zero, eu, 0.5 * zbar * eu),
            (Axis::W, Axis::Z) => Mat2::new(zero, eu, zero, 0.5 * z * eu),
            (Axis::W, Axis::W) => Mat2::new(
                eu,
                0.5 * zbar * eu,
                0.5 * z * eu,
                0.25 * z.norm_sqr() * eu + 0.0625 * emu,
            ),
        })
    }

    fn christoffel(&self, p: CPoint) -> Result<ChristoffelSet, MetricError> {
        Ok(christoffel(p))
    }
}

/// Initial data of a geodesic: start point and complex initial velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicParams {
    pub z0: Complex64,
    pub w0: Complex64,
    pub z_vel: Complex64,
    pub w_vel: Complex64,
}

impl GeodesicParams {
    pub fn new(start: CPoint, velocity: CTangent) -> Self {
        GeodesicParams {
            z0: start.z(),
            w0: start.w(),
            z_vel: velocity.z_vel(),
            w_vel: velocity.w_vel(),
        }
    }

    /// The conserved combination `zdot + z wdot = z_vel + z0 w_vel`.
    pub fn first_integral_constant(&self) -> Complex64 {
        self.z_vel + self.z0 * self.w_vel
    }
}

/// The polynomial `Q(t) = (|W|^2/4) t^2 - U t + 1` controlling the `w`
/// geodesic, together with the angle `theta(t) = v(t) - v0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QTheta {
    pub t: f64,
    pub q: f64,
    pub theta: f64,
}

/// Evaluate `Q` and `theta` at `t`. `Q` factors as `|1 - (W/2) t|^2`, so it
/// is nonnegative everywhere and zero exactly at the blow-up time.
pub fn q_theta(params: &GeodesicParams, t: f64) -> QTheta {
    let u_vel = params.w_vel.re;
    let v_vel = params.w_vel.im;
    let q = 0.25 * params.w_vel.norm_sqr() * t * t - u_vel * t + 1.0;
    let theta = if v_vel != 0.0 {
        2.0 * (u_vel / v_vel).atan()
            - 2.0 * ((u_vel - 0.5 * (u_vel * u_vel + v_vel * v_vel) * t) / v_vel).atan()
    } else {
        0.0
    };
    QTheta { t, q, theta }
}

/// Exact geodesic position at time `t`:
/// `u(t) = u0 - log Q(t)`, `v(t) = v0 + theta(t)` and
/// `z(t) = (1 - (W/2) t) (z0 + (Z + z0 W/2) t)`.
///
/// The arctan form of `theta` is used exactly as written, with no angle
/// unwrapping; on its domain `|theta| < pi`.
pub fn geodesic_closed_form(params: &GeodesicParams, t: f64) -> Result<CPoint, WarrenError> {
    let qt = q_theta(params, t);
    if qt.q <= 0.0 {
        return Err(WarrenError::OutOfDomain { t, q: qt.q });
    }
    let u = params.w0.re - qt.q.ln();
    let v = params.w0.im + qt.theta;
    let half_w = params.w_vel / 2.0;
    let z = (Complex64::new(1.0, 0.0) - half_w * t) * (params.z0 + (params.z_vel + params.z0 * half_w) * t);
    Ok(CPoint::from_zw(z, Complex64::new(u, v)))
}

/// Exact geodesic velocity at time `t`, differentiated from the closed forms:
/// `wdot = (-Qdot + iV) / Q` and the product rule on `z(t)`.
pub fn geodesic_velocity(params: &GeodesicParams, t: f64) -> Result<CTangent, WarrenError> {
    let qt = q_theta(params, t);
    if qt.q <= 0.0 {
        return Err(WarrenError::OutOfDomain { t, q: qt.q });
    }
    let u_vel = params.w_vel.re;
    let v_vel = params.w_vel.im;
    let q_dot = 0.5 * params.w_vel.norm_sqr() * t - u_vel;
    let w_dot = Complex64::new(-q_dot, v_vel) / qt.q;
    let half_w = params.w_vel / 2.0;
    let inner = params.z_vel + params.z0 * half_w;
    let z_dot = -half_w * (params.z0 + inner * t) + (Complex64::new(1.0, 0.0) - half_w * t) * inner;
    Ok(CTangent::from_zw(z_dot, w_dot))
}

/// Long-time behaviour of the `w` geodesic by initial velocity `(U, V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DirectionClass {
    /// `U <= 0`: the closed form is valid for every `t > 0`.
    Complete,
    /// `U > 0`, `V != 0`: `u'` vanishes and switches sign at `t0`.
    SignSwitch { t0: f64 },
    /// `U > 0`, `V = 0`: `u` reaches infinity at `t0 = 2/U`.
    Blowup { t0: f64 },
}

/// Classify an initial `w` velocity. Zero velocity counts as complete.
pub fn classify_direction(u_vel: f64, v_vel: f64) -> DirectionClass {
    if u_vel <= 0.0 {
        DirectionClass::Complete
    } else if v_vel != 0.0 {
        DirectionClass::SignSwitch {
            t0: 2.0 * u_vel / (u_vel * u_vel + v_vel * v_vel),
        }
    } else {
        DirectionClass::Blowup { t0: 2.0 / u_vel }
    }
}

/// `zdot(t) + z(t) wdot(t)`, constant along the geodesic and equal to
/// `z_vel + z0 w_vel`.
pub fn first_integral(params: &GeodesicParams, t: f64) -> Result<Complex64, WarrenError> {
    let pos = geodesic_closed_form(params, t)?;
    let vel = geodesic_velocity(params, t)?;
    Ok(vel.z_vel() + pos.z() * vel.w_vel())
}

/// Jacobian determinant of the exponential map in the normalized tangent
/// variables, computed as the product of the two 2x2 block determinants
/// `Q(1)` and `1/Q(1)`. Returns 1 wherever `Q(1) > 0` and fails at the
/// puncture `(U, V) = (2, 0)` where `Q(1) = 0`.
pub fn exp_jacobian_closed_form(tangent: &CTangent) -> Result<f64, WarrenError> {
    let u_vel = tangent.du;
    let v_vel = tangent.dv;
    let q1 = 0.25 * ((u_vel - 2.0) * (u_vel - 2.0) + v_vel * v_vel);
    if q1 <= 0.0 {
        return Err(WarrenError::UndefinedJacobian { u: u_vel, v: v_vel });
    }
    let top = 0.25 * ((2.0 - u_vel) * (2.0 - u_vel) + v_vel * v_vel);
    let bottom = ((2.0 - u_vel) * (2.0 - u_vel) + v_vel * v_vel) / (4.0 * q1 * q1);
    Ok(top * bottom)
}
