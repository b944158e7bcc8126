//! The family of metrics generated by a real function `h(w, wbar)`:
//!
//! ```text
//! K_h = [[ e^h,              zbar d(e^h)/dwbar                 ],
//!        [ z d(e^h)/dw,      |z|^2 d^2(e^h)/dw dwbar + e^{-h} ]]
//! ```
//!
//! For harmonic `h` this is a flat Kähler metric with unit determinant; the
//! determinant identity `det K_h - 1 = |z|^2 e^{2h} R(e^h)` holds for any
//! generator, which is what makes the non-harmonic controls informative.
//!
//! The field is provided directly as a matrix of entry trees rather than
//! through a potential: the entry `e^{-h}` has no closed-form potential in
//! the expression language, so Kählerness is checked numerically through the
//! symmetry residual instead of being assumed.

use crate::expr::{conjugate, EvalError, Expr, ExprRef, Sym};
use crate::metric::{
    christoffel_at, curvature_at, Axis, Mat2, MetricError, MetricField, MatrixField,
    HermitianMetric,
};
use crate::point::CPoint;
use crate::wirtinger::{derive, derive_key, Differentiator};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("generator depends on z or zbar; it must be a function of w alone")]
    ZDependence,
    #[error("generator is not real-valued (imaginary part {max_imag:e} at probe points)")]
    NonRealGenerator { max_imag: f64 },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Probe points in the `w` plane used by the reality check at build time.
const PROBES: [(f64, f64); 8] = [
    (0.0, 0.0),
    (1.3, 0.0),
    (0.0, -0.8),
    (-0.7, 0.4),
    (0.5, 1.1),
    (-1.2, -1.5),
    (2.0, 0.3),
    (0.1, 2.2),
];

const REALITY_TOL: f64 = 1e-10;

/// Metric field of the generator family, backed by the four entry trees and
/// carrying derivative trees of the generator for the closed-form symbols.
pub struct KhField {
    matrix: MatrixField,
    generator: Differentiator,
    exp_h: ExprRef,
}

impl MetricField for KhField {
    fn metric_at(&self, p: CPoint) -> Result<HermitianMetric, MetricError> {
        self.matrix.metric_at(p)
    }

    fn metric_d_at(&self, p: CPoint, gamma: Axis) -> Result<Mat2, MetricError> {
        self.matrix.metric_d_at(p, gamma)
    }

    fn metric_dd_at(&self, p: CPoint, gamma: Axis, delta: Axis) -> Result<Mat2, MetricError> {
        self.matrix.metric_dd_at(p, gamma, delta)
    }
}

/// Build the field for a generator. Rejects generators that mention `z` and
/// generators that fail the numeric reality check at the probe points.
pub fn build_kh(h: &ExprRef) -> Result<KhField, FamilyError> {
    if h.depends_on(&[Sym::Z, Sym::ZBar]) {
        return Err(FamilyError::ZDependence);
    }
    let mut max_imag = 0.0f64;
    for (u, v) in PROBES {
        let value = crate::expr::eval(h, CPoint::new(0.0, 0.0, u, v))?;
        max_imag = max_imag.max(value.im.abs());
    }
    if max_imag > REALITY_TOL {
        return Err(FamilyError::NonRealGenerator { max_imag });
    }

    let exp_h = Expr::exp(h.clone());
    let z = Expr::var(Sym::Z);
    let zbar = Expr::var(Sym::ZBar);
    let k11 = exp_h.clone();
    let k12 = Expr::mul(zbar.clone(), derive(&exp_h, Sym::WBar));
    let k21 = Expr::mul(z.clone(), derive(&exp_h, Sym::W));
    let k22 = Expr::add(
        Expr::mul(Expr::mul(z, zbar), derive_key(&exp_h, &[Sym::W, Sym::WBar])),
        Expr::exp(Expr::neg(h.clone())),
    );
    Ok(KhField {
        matrix: MatrixField::new([[k11, k12], [k21, k22]]),
        generator: Differentiator::new(h.clone()),
        exp_h,
    })
}

impl KhField {
    pub fn generator(&self) -> &ExprRef {
        self.generator.base()
    }

    /// Closed form `Gamma^z_{ww} = z (2 (dh/dw)^2 + d^2h/dw^2)`.
    pub fn christoffel_z_ww_closed(&self, p: CPoint) -> Result<Complex64, FamilyError> {
        let h_w = self.generator.eval(&[Sym::W], p)?;
        let h_ww = self.generator.eval(&[Sym::W, Sym::W], p)?;
        Ok(p.z() * (2.0 * h_w * h_w + h_ww))
    }

    /// Closed form `Gamma^w_{ww} = -dh/dw`.
    pub fn christoffel_w_ww_closed(&self, p: CPoint) -> Result<Complex64, FamilyError> {
        Ok(-self.generator.eval(&[Sym::W], p)?)
    }

    /// Conformal curvature of the generator line element, evaluated as
    /// `e^{-h} (d^2 e^h/dw dwbar - e^{-h} |d e^h/dw|^2)`; for real `h` this
    /// collapses to `d^2 h / dw dwbar`.
    pub fn conformal_curvature(&self, p: CPoint) -> Result<f64, FamilyError> {
        let eh = crate::expr::eval(&self.exp_h, p)?;
        let d = crate::expr::eval(&derive(&self.exp_h, Sym::W), p)?;
        let dd = crate::expr::eval(&derive_key(&self.exp_h, &[Sym::W, Sym::WBar]), p)?;
        let r = (dd - d.norm_sqr() / eh) / eh;
        Ok(r.re)
    }

    /// Residual of the determinant identity
    /// `det(K_h) - 1 = |z|^2 e^{2h} R(e^h)` at `p`.
    pub fn det_identity_residual(&self, p: CPoint) -> Result<f64, FamilyError> {
        let det = self.metric_at(p)?.det();
        let h = crate::expr::eval(self.generator.base(), p)?.re;
        let rhs = p.z().norm_sqr() * (2.0 * h).exp() * self.conformal_curvature(p)?;
        Ok(((det - 1.0) - rhs).abs())
    }
}

/// `Delta h = 4 d^2 h / dw dwbar` at `p`; real for real generators (the
/// imaginary contamination stays below 1e-12).
pub fn laplacian_h(h: &ExprRef, p: CPoint) -> Result<f64, FamilyError> {
    let value = crate::wirtinger::derive_eval(h, &[Sym::W, Sym::WBar], p)?;
    Ok(4.0 * value.re)
}

/// Worst-case deviations of a field over a set of sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KhReport {
    pub max_det_deviation: f64,
    pub max_curvature: f64,
    pub max_christoffel_deviation: f64,
}

/// Measure `|det - 1|`, curvature magnitude and the deviation of the two
/// nontrivial Christoffel symbols from their closed forms over `points`.
/// For non-harmonic generators the numbers are reported as found; the flat
/// family statement only covers harmonic generators.
pub fn kh_report(field: &KhField, points: &[CPoint]) -> Result<KhReport, FamilyError> {
    let mut report = KhReport {
        max_det_deviation: 0.0,
        max_curvature: 0.0,
        max_christoffel_deviation: 0.0,
    };
    for &p in points {
        let g = field.metric_at(p)?;
        report.max_det_deviation = report.max_det_deviation.max((g.det() - 1.0).abs());
        let r = curvature_at(field, p)?;
        report.max_curvature = report.max_curvature.max(r.max_abs());
        let gamma = christoffel_at(field, p)?;
        let dev_z = (gamma.z_ww - field.christoffel_z_ww_closed(p)?).norm();
        let dev_w = (gamma.w_ww - field.christoffel_w_ww_closed(p)?).norm();
        report.max_christoffel_deviation = report.max_christoffel_deviation.max(dev_z.max(dev_w));
    }
    Ok(report)
}

/// Convenience: `conjugate` re-exported for building real generators in
/// callers that assemble trees by hand.
pub fn real_part(e: &ExprRef) -> ExprRef {
    Expr::div(Expr::add(e.clone(), conjugate(e)), Expr::real(2.0))
}
