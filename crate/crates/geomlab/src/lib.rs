//! Verification engine for Kähler metrics on C^2 given by explicit
//! potentials.
//!
//! The crate parses potential expressions over the Wirtinger symbols
//! `z, zbar, w, wbar`, differentiates them symbolically, and builds metric
//! tensors, Christoffel symbols and curvature at arbitrary points. On top of
//! that sit geodesic integration with blow-up detection, exponential-map
//! Jacobians, Monte Carlo geodesic-ball volumes, and the generator family of
//! unit-determinant flat metrics. The closed forms of the unimodular
//! potential `4|z|^2 e^{Re w} + e^{-Re w}` live in [`warren`] and serve as
//! the oracle for the generic pipeline.

mod compensated;

pub mod ballvol;
pub mod expr;
pub mod family;
pub mod geodesic;
pub mod metric;
pub mod point;
pub mod tolerances;
pub mod warren;
pub mod wirtinger;

pub use expr::{parse, Expr, ExprRef, Sym};
pub use metric::{
    christoffel_at, curvature_at, kahler_residual, Axis, ChristoffelSet, CurvatureTensor,
    HermitianMetric, MatrixField, MetricError, MetricField, PotentialField,
};
pub use point::{CPoint, CTangent};

pub use num_complex::Complex64;
