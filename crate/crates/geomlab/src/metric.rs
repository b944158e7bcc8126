//! Metric tensors, Christoffel symbols and curvature from a potential or an
//! explicit Hermitian matrix of entry trees.
//!
//! Conventions. The metric matrix is indexed with the holomorphic index as
//! the row and the barred index as the column: `g[(alpha, beta)] = g_{alpha
//! betabar}`. For a potential `f` this is the complex Hessian,
//! `g_{alpha betabar} = d^2 f / dz_alpha dzbar_beta`. The inverse matrix read
//! the same way gives `ginv[(nu, alpha)] = g^{nubar alpha}`.
//!
//! Christoffel symbols use the Kähler shortcut
//! `Gamma^alpha_{beta gamma} = (d g_{gamma nubar} / dz_beta) g^{nubar alpha}`
//! and curvature is its barred derivative,
//! `R^delta_{alpha betabar gamma} = -dbar_beta Gamma^delta_{alpha gamma}`.
//! Validity of the shortcut is what [`kahler_residual`] measures.

use crate::compensated;
use crate::expr::{EvalError, ExprRef, Sym};
use crate::point::{CPoint, CTangent};
use crate::tolerances;
use crate::wirtinger::Differentiator;
use nalgebra::Matrix2;
use num_complex::Complex64;

/// 2x2 complex matrix of metric entries or their derivatives.
pub type Mat2 = Matrix2<Complex64>;

/// Holomorphic coordinate axis of C^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Z = 0,
    W = 1,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::Z, Axis::W];

    /// The plain Wirtinger symbol for this axis.
    pub fn holo(self) -> Sym {
        match self {
            Axis::Z => Sym::Z,
            Axis::W => Sym::W,
        }
    }

    /// The barred Wirtinger symbol for this axis.
    pub fn bar(self) -> Sym {
        match self {
            Axis::Z => Sym::ZBar,
            Axis::W => Sym::WBar,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("singular metric (det = {det:e}) at {point}")]
    Singular { det: f64, point: CPoint },
    #[error("metric not positive definite (g11 = {g11:e}, det = {det:e}) at {point}")]
    NotPositiveDefinite { g11: f64, det: f64, point: CPoint },
    #[error("metric entries not Hermitian (max deviation {deviation:e}) at {point}")]
    NonHermitian { deviation: f64, point: CPoint },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Hermitian 2x2 metric value: real diagonal, one off-diagonal entry
/// (`g21 = conj(g12)` is implicit), determinant stored alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMetric {
    pub g11: f64,
    pub g22: f64,
    pub g12: Complex64,
    det: f64,
}

impl HermitianMetric {
    pub fn new(g11: f64, g22: f64, g12: Complex64) -> Self {
        // compensated determinant: the two products cancel to order one
        // while each reaches ~1e4 on the default box
        let det = compensated::hermitian_det(g11, g22, g12);
        HermitianMetric { g11, g22, g12, det }
    }

    pub fn identity() -> Self {
        HermitianMetric::new(1.0, 1.0, Complex64::new(0.0, 0.0))
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn g21(&self) -> Complex64 {
        self.g12.conj()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.g11 > 0.0 && self.det > 0.0
    }

    /// Closed-form inverse; shares the type since the inverse of a Hermitian
    /// matrix is Hermitian.
    pub fn inverse(&self) -> Result<HermitianMetric, MetricError> {
        if self.det.abs() < tolerances::SINGULAR_DET {
            return Err(MetricError::Singular {
                det: self.det,
                point: CPoint::ORIGIN,
            });
        }
        Ok(HermitianMetric::new(
            self.g22 / self.det,
            self.g11 / self.det,
            -self.g12 / self.det,
        ))
    }

    pub fn to_matrix(&self) -> Mat2 {
        Mat2::new(
            Complex64::new(self.g11, 0.0),
            self.g12,
            self.g21(),
            Complex64::new(self.g22, 0.0),
        )
    }

    /// Hermitian speed `sum g_{alpha betabar} V^alpha conj(V^beta)`.
    ///
    /// With this convention the Euclidean potential `|z|^2 + |w|^2` gives the
    /// standard Euclidean norm of the four real components.
    pub fn speed_sq(&self, t: &CTangent) -> f64 {
        let vz = t.z_vel();
        let vw = t.w_vel();
        self.g11 * vz.norm_sqr()
            + self.g22 * vw.norm_sqr()
            + 2.0 * (self.g12 * vz * vw.conj()).re
    }
}

/// Six independent Christoffel symbols `Gamma^alpha_{beta gamma}`, symmetric
/// in the lower pair, each stored once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelSet {
    pub z_zz: Complex64,
    pub z_zw: Complex64,
    pub z_ww: Complex64,
    pub w_zz: Complex64,
    pub w_zw: Complex64,
    pub w_ww: Complex64,
}

impl ChristoffelSet {
    pub fn zero() -> Self {
        let o = Complex64::new(0.0, 0.0);
        ChristoffelSet {
            z_zz: o,
            z_zw: o,
            z_ww: o,
            w_zz: o,
            w_zw: o,
            w_ww: o,
        }
    }

    /// `Gamma^upper_{lo1 lo2}`; the lower pair is looked up unordered.
    pub fn get(&self, upper: Axis, lo1: Axis, lo2: Axis) -> Complex64 {
        match (upper, lo1, lo2) {
            (Axis::Z, Axis::Z, Axis::Z) => self.z_zz,
            (Axis::Z, Axis::Z, Axis::W) | (Axis::Z, Axis::W, Axis::Z) => self.z_zw,
            (Axis::Z, Axis::W, Axis::W) => self.z_ww,
            (Axis::W, Axis::Z, Axis::Z) => self.w_zz,
            (Axis::W, Axis::Z, Axis::W) | (Axis::W, Axis::W, Axis::Z) => self.w_zw,
            (Axis::W, Axis::W, Axis::W) => self.w_ww,
        }
    }

    pub fn max_abs(&self) -> f64 {
        [
            self.z_zz, self.z_zw, self.z_ww, self.w_zz, self.w_zw, self.w_ww,
        ]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
    }
}

/// The sixteen coefficients `R^delta_{alpha betabar gamma}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    entries: [[[[Complex64; 2]; 2]; 2]; 2],
}

impl CurvatureTensor {
    pub fn entry(&self, delta: Axis, alpha: Axis, beta: Axis, gamma: Axis) -> Complex64 {
        self.entries[delta.index()][alpha.index()][beta.index()][gamma.index()]
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for d in &self.entries {
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
}

/// Queries the curvature pipeline needs from a metric provider. All derivative
/// values must come from one differentiation path per provider (symbolic for
/// the tree-backed fields, closed forms for the hand-written ones).
pub trait MetricField: Send + Sync {
    /// Metric entries `g_{alpha betabar}` at `p`.
    fn metric_at(&self, p: CPoint) -> Result<HermitianMetric, MetricError>;

    /// Entrywise holomorphic derivative `d g_{alpha betabar} / dz_gamma`.
    fn metric_d_at(&self, p: CPoint, gamma: Axis) -> Result<Mat2, MetricError>;

    /// Entrywise mixed derivative `d^2 g_{alpha betabar} / dz_gamma dzbar_delta`.
    fn metric_dd_at(&self, p: CPoint, gamma: Axis, delta: Axis) -> Result<Mat2, MetricError>;

    /// Christoffel symbols at `p`. The default assembles them from the
    /// derivative queries; closed-form providers may override.
    fn christoffel(&self, p: CPoint) -> Result<ChristoffelSet, MetricError> {
        let (_, ginv) = pd_inverse(self.metric_at(p)?, p)?;
        let d_z = self.metric_d_at(p, Axis::Z)?;
        let d_w = self.metric_d_at(p, Axis::W)?;
        Ok(christoffel_algebra(&d_z, &d_w, &ginv))
    }

    /// Curvature coefficients at `p`, assembled from the derivative queries
    /// as `dbar_beta Gamma = DD ginv - (D_alpha ginv)(D_beta^dagger ginv)`.
    ///
    /// The assembly runs in double-double arithmetic: the cancelling
    /// combinations pass through intermediates of magnitude ~1e4 on the
    /// default box, which would leave ~1e-8 of rounding residue in plain
    /// f64 and drown the flatness checks. Compensated, the residue drops to
    /// the quantization floor of the entries (a few 1e-12).
    fn curvature(&self, p: CPoint) -> Result<CurvatureTensor, MetricError> {
        let g = self.metric_at(p)?;
        if !g.is_positive_definite() {
            return Err(MetricError::NotPositiveDefinite {
                g11: g.g11,
                det: g.det(),
                point: p,
            });
        }
        if g.det().abs() < tolerances::SINGULAR_DET {
            return Err(MetricError::Singular { det: g.det(), point: p });
        }
        let ginv = compensated::inverse_hermitian(&compensated::load(&g.to_matrix()));
        let d = [
            compensated::load(&self.metric_d_at(p, Axis::Z)?),
            compensated::load(&self.metric_d_at(p, Axis::W)?),
        ];
        let gamma_mat = [
            compensated::mul(&d[0], &ginv),
            compensated::mul(&d[1], &ginv),
        ];
        let lambda = [
            compensated::mul(&compensated::adjoint(&d[0]), &ginv),
            compensated::mul(&compensated::adjoint(&d[1]), &ginv),
        ];
        let zero = Complex64::new(0.0, 0.0);
        let mut entries = [[[[zero; 2]; 2]; 2]; 2];
        for alpha in Axis::BOTH {
            for beta in Axis::BOTH {
                let dd = compensated::load(&self.metric_dd_at(p, alpha, beta)?);
                let m = compensated::sub(
                    &compensated::mul(&dd, &ginv),
                    &compensated::mul(&gamma_mat[alpha.index()], &lambda[beta.index()]),
                );
                for gamma in Axis::BOTH {
                    for delta in Axis::BOTH {
                        entries[delta.index()][alpha.index()][beta.index()][gamma.index()] =
                            m[gamma.index()][delta.index()].neg().to_c64();
                    }
                }
            }
        }
        Ok(CurvatureTensor { entries })
    }
}

fn hermitian_from_entries(entries: &Mat2, p: CPoint) -> Result<HermitianMetric, MetricError> {
    let herm_dev = (entries[(1, 0)] - entries[(0, 1)].conj()).norm();
    let imag_dev = entries[(0, 0)].im.abs().max(entries[(1, 1)].im.abs());
    let deviation = herm_dev.max(imag_dev);
    if deviation > tolerances::HERMITIAN_IMAG {
        return Err(MetricError::NonHermitian { deviation, point: p });
    }
    Ok(HermitianMetric::new(
        entries[(0, 0)].re,
        entries[(1, 1)].re,
        entries[(0, 1)],
    ))
}

/// Metric field generated by a potential: entries are the four mixed second
/// Wirtinger derivatives, and every further derivative extends the same key.
pub struct PotentialField {
    diff: Differentiator,
}

impl PotentialField {
    pub fn new(potential: ExprRef) -> Self {
        PotentialField {
            diff: Differentiator::new(potential),
        }
    }

    pub fn potential(&self) -> &ExprRef {
        self.diff.base()
    }

    fn entry_key(alpha: Axis, beta: Axis) -> [Sym; 2] {
        [alpha.holo(), beta.bar()]
    }
}

impl MetricField for PotentialField {
    fn metric_at(&self, p: CPoint) -> Result<HermitianMetric, MetricError> {
        let mut m = Mat2::zeros();
        for alpha in Axis::BOTH {
            for beta in Axis::BOTH {
                let key = Self::entry_key(alpha, beta);
                m[(alpha.index(), beta.index())] = self.diff.eval(&key, p)?;
            }
        }
        hermitian_from_entries(&m, p)
    }

    fn metric_d_at(&self, p: CPoint, gamma: Axis) -> Result<Mat2, MetricError> {
        let mut m = Mat2::zeros();
        for alpha in Axis::BOTH {
            for beta in Axis::BOTH {
                let key = [alpha.holo(), beta.bar(), gamma.holo()];
                m[(alpha.index(), beta.index())] = self.diff.eval(&key, p)?;
            }
        }
        Ok(m)
    }

    fn metric_dd_at(&self, p: CPoint, gamma: Axis, delta: Axis) -> Result<Mat2, MetricError> {
        let mut m = Mat2::zeros();
        for alpha in Axis::BOTH {
            for beta in Axis::BOTH {
                let key = [alpha.holo(), beta.bar(), gamma.holo(), delta.bar()];
                m[(alpha.index(), beta.index())] = self.diff.eval(&key, p)?;
            }
        }
        Ok(m)
    }
}

/// Metric field given directly by four entry trees (row = holomorphic index,
/// column = barred index). The entries must evaluate to a Hermitian matrix;
/// nothing guarantees the field is Kähler, which is exactly what makes this
/// useful both for the generator family and for non-Kähler test providers.
pub struct MatrixField {
    entries: [[Differentiator; 2]; 2],
}

impl MatrixField {
    pub fn new(entries: [[ExprRef; 2]; 2]) -> Self {
        let [[e00, e01], [e10, e11]] = entries;
        MatrixField {
            entries: [
                [Differentiator::new(e00), Differentiator::new(e01)],
                [Differentiator::new(e10), Differentiator::new(e11)],
            ],
        }
    }

    fn entry(&self, alpha: Axis, beta: Axis) -> &Differentiator {
        &self.entries[alpha.index()][beta.index()]
    }
}

impl MetricField for MatrixField {
    fn metric_at(&self, p: CPoint) -> Result<HermitianMetric, MetricError> {
        let mut m = Mat2::zeros();
        for alpha in Axis::BOTH {
            for beta in Axis::BOTH {
                m[(alpha.index(), beta.index())] = self.entry(alpha, beta).eval(&[], p)?;
            }
        }
        hermitian_from_entries(&m, p)
    }

    fn metric_d_at(&self, p: CPoint, gamma: Axis) -> Result<Mat2, MetricError> {
        let mut m = Mat2::zeros();
        for alpha in Axis::BOTH {
            for beta in Axis::BOTH {
                m[(alpha.index(), beta.index())] =
                    self.entry(alpha, beta).eval(&[gamma.holo()], p)?;
            }
        }
        Ok(m)
    }

    fn metric_dd_at(&self, p: CPoint, gamma: Axis, delta: Axis) -> Result<Mat2, MetricError> {
        let mut m = Mat2::zeros();
        for alpha in Axis::BOTH {
            for beta in Axis::BOTH {
                m[(alpha.index(), beta.index())] =
                    self.entry(alpha, beta).eval(&[gamma.holo(), delta.bar()], p)?;
            }
        }
        Ok(m)
    }
}

fn pd_inverse(g: HermitianMetric, p: CPoint) -> Result<(HermitianMetric, Mat2), MetricError> {
    if !g.is_positive_definite() {
        return Err(MetricError::NotPositiveDefinite {
            g11: g.g11,
            det: g.det(),
            point: p,
        });
    }
    let inv = g.inverse().map_err(|e| match e {
        MetricError::Singular { det, .. } => MetricError::Singular { det, point: p },
        other => other,
    })?;
    Ok((g, inv.to_matrix()))
}

/// `Gamma^alpha_{beta gamma} = [d_beta g * ginv][(gamma, alpha)]`.
fn christoffel_algebra(d_z: &Mat2, d_w: &Mat2, ginv: &Mat2) -> ChristoffelSet {
    let gamma_z = d_z * ginv;
    let gamma_w = d_w * ginv;
    ChristoffelSet {
        z_zz: gamma_z[(0, 0)],
        z_zw: gamma_z[(1, 0)],
        z_ww: gamma_w[(1, 0)],
        w_zz: gamma_z[(0, 1)],
        w_zw: gamma_z[(1, 1)],
        w_ww: gamma_w[(1, 1)],
    }
}

/// All six Christoffel symbols of `field` at `p`.
pub fn christoffel_at(field: &dyn MetricField, p: CPoint) -> Result<ChristoffelSet, MetricError> {
    field.christoffel(p)
}

/// The sixteen curvature coefficients of `field` at `p`.
///
/// The barred entry derivatives come from Hermiticity,
/// `dbar_beta g = (d_beta g)^dagger`, so a provider only supplies holomorphic
/// first derivatives and holomorphic/barred mixed second derivatives.
pub fn curvature_at(field: &dyn MetricField, p: CPoint) -> Result<CurvatureTensor, MetricError> {
    field.curvature(p)
}

/// Max over `(alpha, beta, gamma)` of
/// `|d_gamma g_{alpha betabar} - d_alpha g_{gamma betabar}|`. Vanishes (to
/// rounding) exactly when the metric is a complex Hessian, i.e. Kähler.
pub fn kahler_residual(field: &dyn MetricField, p: CPoint) -> Result<f64, MetricError> {
    let d_z = field.metric_d_at(p, Axis::Z)?;
    let d_w = field.metric_d_at(p, Axis::W)?;
    let mut worst = 0.0f64;
    for beta in 0..2 {
        // alpha = z, gamma = w and the swap are the only nontrivial pairs
        worst = worst.max((d_w[(0, beta)] - d_z[(1, beta)]).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    const EUCLID: &str = "|z|^2+|w|^2";

    fn warren_field() -> PotentialField {
        PotentialField::new(parse(crate::warren::POTENTIAL_SRC).unwrap())
    }

    #[test]
    fn euclidean_metric_is_identity() {
        let field = PotentialField::new(parse(EUCLID).unwrap());
        let p = CPoint::new(0.4, -1.1, 2.0, 0.3);
        let g = field.metric_at(p).unwrap();
        assert!((g.g11 - 1.0).abs() < 1e-14);
        assert!((g.g22 - 1.0).abs() < 1e-14);
        assert!(g.g12.norm() < 1e-14);
        assert!((g.det() - 1.0).abs() < 1e-14);
        let gamma = christoffel_at(&field, p).unwrap();
        assert!(gamma.max_abs() < 1e-14);
        let r = curvature_at(&field, p).unwrap();
        assert!(r.max_abs() < 1e-14);
        assert!(kahler_residual(&field, p).unwrap() < 1e-14);
    }

    #[test]
    fn warren_metric_values_at_reference_points() {
        let field = warren_field();
        let g0 = field.metric_at(CPoint::ORIGIN).unwrap();
        assert!((g0.g11 - 4.0).abs() < 1e-13);
        assert!((g0.g22 - 0.25).abs() < 1e-13);
        assert!(g0.g12.norm() < 1e-13);

        let g1 = field.metric_at(CPoint::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((g1.g11 - 4.0).abs() < 1e-13);
        assert!((g1.g22 - 1.25).abs() < 1e-13);
        assert!((g1.g12 - Complex64::new(2.0, 0.0)).norm() < 1e-13);
        assert!((g1.det() - 1.0).abs() < 1e-13);

        // off-diagonal orientation: g12 = 2 conj(z) e^u
        let gi = field.metric_at(CPoint::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        assert!((gi.g12 - Complex64::new(0.0, -2.0)).norm() < 1e-13);
    }

    #[test]
    fn inverse_matches_closed_form() {
        let field = warren_field();
        let g = field.metric_at(CPoint::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        let inv = g.inverse().unwrap();
        assert!((inv.g11 - 1.25).abs() < 1e-13);
        assert!((inv.g22 - 4.0).abs() < 1e-13);
        assert!((inv.g12 - Complex64::new(-2.0, 0.0)).norm() < 1e-13);
        // double inverse returns the original
        let back = inv.inverse().unwrap();
        assert!((back.g11 - g.g11).abs() < tolerances::MATRIX_ROUND_TRIP);
        assert!((back.g22 - g.g22).abs() < tolerances::MATRIX_ROUND_TRIP);
        assert!((back.g12 - g.g12).norm() < tolerances::MATRIX_ROUND_TRIP);
    }

    #[test]
    fn diagonal_inverse() {
        let m = HermitianMetric::new(2.0, 0.5, Complex64::new(0.0, 0.0));
        let inv = m.inverse().unwrap();
        assert!((inv.g11 - 0.5).abs() < 1e-15);
        assert!((inv.g22 - 2.0).abs() < 1e-15);
        let id = HermitianMetric::identity().inverse().unwrap();
        assert!((id.g11 - 1.0).abs() < 1e-15 && (id.g22 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_metric_is_an_error() {
        let m = HermitianMetric::new(1.0, 1.0, Complex64::new(1.0, 0.0));
        assert!(matches!(m.inverse(), Err(MetricError::Singular { .. })));
    }

    #[test]
    fn warren_christoffel_closed_values() {
        let field = warren_field();
        for p in [
            CPoint::new(0.3, 0.2, -0.5, 1.0),
            CPoint::new(-1.0, 0.7, 0.4, -0.2),
        ] {
            let gamma = christoffel_at(&field, p).unwrap();
            assert!(gamma.z_zz.norm() < 1e-12);
            assert!((gamma.z_zw - Complex64::new(0.5, 0.0)).norm() < 1e-12);
            assert!((gamma.z_ww - p.z() / 2.0).norm() < 1e-12);
            assert!(gamma.w_zz.norm() < 1e-12);
            assert!(gamma.w_zw.norm() < 1e-12);
            assert!((gamma.w_ww - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
        }
        // z = 2 gives Gamma^z_{ww} = 1
        let gamma = christoffel_at(&field, CPoint::new(2.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((gamma.z_ww - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(gamma.get(Axis::Z, Axis::W, Axis::Z), gamma.z_zw);
    }

    #[test]
    fn warren_curvature_vanishes() {
        let field = warren_field();
        let p = CPoint::new(0.3, 0.1, -0.2, 0.5);
        let r = curvature_at(&field, p).unwrap();
        assert!(r.max_abs() <= tolerances::FLATNESS, "max {}", r.max_abs());
    }

    #[test]
    fn quartic_control_potential_is_curved() {
        let field = PotentialField::new(parse("|z|^2+|w|^2+(|w|^2)^2").unwrap());
        let p = CPoint::new(0.0, 0.0, 1.0, 0.0);
        let r = curvature_at(&field, p).unwrap();
        assert!(r.max_abs() > 1e-3, "max {}", r.max_abs());
        // R^w_{w wbar w} = -4 / (1 + 4|w|^2)^2 at w = 1
        let got = r.entry(Axis::W, Axis::W, Axis::W, Axis::W);
        assert!((got - Complex64::new(-0.16, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kahler_residual_detects_non_hessian_fields() {
        // hand-built Hermitian but non-Kähler provider:
        // g11 = e^{Re w}, everything else Euclidean
        let one = parse("1").unwrap();
        let zero = parse("0").unwrap();
        let field = MatrixField::new([
            [parse("exp(Re(w))").unwrap(), zero.clone()],
            [zero, one],
        ]);
        let res = kahler_residual(&field, CPoint::ORIGIN).unwrap();
        assert!((res - 0.5).abs() < 1e-13, "residual {}", res);
        // the Warren potential stays below the structural threshold
        let warren = warren_field();
        let res = kahler_residual(&warren, CPoint::new(0.7, -0.3, 0.6, 0.1)).unwrap();
        assert!(res <= tolerances::KAHLER_RESIDUAL);
    }

    #[test]
    fn speed_convention_is_euclidean_for_identity() {
        let g = HermitianMetric::identity();
        let t = CTangent::new(1.0, 2.0, 3.0, 4.0);
        assert!((g.speed_sq(&t) - 30.0).abs() < 1e-15);
    }
}
