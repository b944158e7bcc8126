//! Numeric thresholds used across the crate.
//!
//! Two regimes: structural identities that hold to rounding in f64
//! (1e-11..1e-13), and cross-method comparisons between the symbolic pipeline
//! and finite-difference or ODE-based routes (1e-5..1e-7).

/// Determinant of a metric below this is treated as singular.
pub const SINGULAR_DET: f64 = 1e-14;

/// Allowed imaginary contamination on quantities that must be real
/// (diagonal metric entries, Hermitian mismatch).
pub const HERMITIAN_IMAG: f64 = 1e-11;

/// Unit-determinant check for unimodular potentials.
pub const DET_UNIT: f64 = 1e-12;

/// Closed-form Christoffel symbols against the generic pipeline.
pub const CHRISTOFFEL_ORACLE: f64 = 1e-10;

/// Flatness: max curvature component magnitude considered zero.
pub const FLATNESS: f64 = 1e-8;

/// Kähler symmetry residual for complex-Hessian metrics.
pub const KAHLER_RESIDUAL: f64 = 1e-11;

/// Round trip `inverse(inverse(m)) == m` and related exact algebra.
pub const MATRIX_ROUND_TRIP: f64 = 1e-13;

/// Numeric geodesics against closed forms, sup over accepted steps.
pub const GEODESIC_ORACLE: f64 = 1e-6;

/// First-integral drift along traces.
pub const FIRST_INTEGRAL_DRIFT: f64 = 1e-7;

/// Relative Hermitian-speed drift along traces.
pub const SPEED_DRIFT: f64 = 1e-8;

/// Numeric exponential-map Jacobian against the constant 1.
pub const JACOBIAN_ONE: f64 = 1e-5;

/// Frame determinant against 1 for unit-determinant metrics.
pub const FRAME_DET: f64 = 1e-12;

/// Generator-family determinant deviation for harmonic generators.
pub const FAMILY_DET: f64 = 1e-10;

/// Generator-family closed-form Christoffel comparison.
pub const FAMILY_CHRISTOFFEL: f64 = 1e-9;

/// Fourth-order finite-difference stencil step for first derivatives.
pub const FD_STEP: f64 = 1e-4;

/// Agreement between symbolic first derivatives and the stencil.
pub const FD_AGREEMENT: f64 = 1e-7;

/// Cross-method curvature agreement (symbolic vs pure finite differences).
pub const FD_CURVATURE: f64 = 1e-5;
