//! Geodesic-ball volume machinery: the positive square root of the inverse
//! metric as a real tangent-space frame, numeric Jacobians of the exponential
//! map, and Monte Carlo volume estimation.
//!
//! A complex scalar `a + bi` acts on an `(x, y)` pair as the block
//! `[[a, -b], [b, a]]`; a complex 2x2 matrix embeds as the real 4x4 of such
//! blocks. Under this embedding a Hermitian matrix `H` represents the real
//! quadratic form of the Hermitian inner product through `transpose(H)`, so
//! the frame actually used is the complex transpose of the square root,
//! realized as a real matrix. For unit-determinant metrics the frame has
//! determinant one.

use crate::geodesic::{exp_map_with, GeodesicError};
use crate::metric::{HermitianMetric, MetricError, MetricField};
use crate::point::{CPoint, CTangent};
use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VolumeError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("exponential map failed in the difference stencil: {0}")]
    Geodesic(#[from] GeodesicError),
    #[error("sample {index} hit a blow-up direction {direction}: {source}")]
    BlowUpSample {
        index: u64,
        direction: CTangent,
        source: GeodesicError,
    },
    #[error("sample count {n} too small, need at least {min}")]
    InvalidSampleCount { n: u64, min: u64 },
}

/// Minimum Monte Carlo sample count.
pub const MIN_SAMPLES: u64 = 1_000;

fn block(c: Complex64) -> [[f64; 2]; 2] {
    [[c.re, -c.im], [c.im, c.re]]
}

fn realify(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Matrix4<f64> {
    let b11 = block(m11);
    let b12 = block(m12);
    let b21 = block(m21);
    let b22 = block(m22);
    Matrix4::new(
        b11[0][0], b11[0][1], b12[0][0], b12[0][1],
        b11[1][0], b11[1][1], b12[1][0], b12[1][1],
        b21[0][0], b21[0][1], b22[0][0], b22[0][1],
        b21[1][0], b21[1][1], b22[1][0], b22[1][1],
    )
}

/// Real 4x4 frame `transpose(sqrt(g^{-1}))` at a positive-definite metric.
///
/// The square root uses the 2x2 closed form
/// `sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A))`.
pub fn sqrt_inverse(m: &HermitianMetric) -> Result<Matrix4<f64>, MetricError> {
    if !m.is_positive_definite() {
        return Err(MetricError::NotPositiveDefinite {
            g11: m.g11,
            det: m.det(),
            point: CPoint::ORIGIN,
        });
    }
    let inv = m.inverse()?;
    let s = inv.det().sqrt();
    let scale = (inv.g11 + inv.g22 + 2.0 * s).sqrt();
    let s11 = Complex64::new((inv.g11 + s) / scale, 0.0);
    let s22 = Complex64::new((inv.g22 + s) / scale, 0.0);
    let s12 = inv.g12 / scale;
    // complex transpose swaps the off-diagonal pair (s21 = conj(s12))
    Ok(realify(s11, s12.conj(), s12, s22))
}

/// Frame at a base point: maps Euclidean tangent coordinates to actual
/// initial velocities whose Hermitian speed equals the Euclidean length.
pub struct TangentFrame {
    pub base: CPoint,
    transform: Matrix4<f64>,
    inverse: Matrix4<f64>,
}

impl TangentFrame {
    pub fn from_metric(base: CPoint, m: &HermitianMetric) -> Result<Self, MetricError> {
        let transform = sqrt_inverse(m)?;
        let inverse = transform
            .try_inverse()
            .ok_or(MetricError::Singular {
                det: transform.determinant(),
                point: base,
            })?;
        Ok(TangentFrame {
            base,
            transform,
            inverse,
        })
    }

    pub fn for_field(field: &dyn MetricField, base: CPoint) -> Result<Self, MetricError> {
        let m = field.metric_at(base)?;
        Self::from_metric(base, &m)
    }

    pub fn transform(&self) -> &Matrix4<f64> {
        &self.transform
    }

    pub fn det(&self) -> f64 {
        self.transform.determinant()
    }

    /// Euclidean coordinates to tangent vector.
    pub fn apply(&self, coords: CTangent) -> CTangent {
        let v = self.transform * Vector4::from(coords.to_array());
        CTangent::new(v[0], v[1], v[2], v[3])
    }

    /// Tangent vector back to Euclidean coordinates.
    pub fn apply_inverse(&self, tangent: CTangent) -> CTangent {
        let v = self.inverse * Vector4::from(tangent.to_array());
        CTangent::new(v[0], v[1], v[2], v[3])
    }
}

/// Step size and inner integrator accuracy for the difference Jacobians.
#[derive(Debug, Clone, Copy)]
pub struct JacobianOptions {
    pub step: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for JacobianOptions {
    fn default() -> Self {
        JacobianOptions {
            step: 1e-5,
            rtol: 1e-12,
            atol: 1e-13,
        }
    }
}

impl JacobianOptions {
    /// Cheaper setting for Monte Carlo, where per-sample accuracy around
    /// 1e-4 suffices: a wider stencil tolerates a looser integrator.
    pub fn monte_carlo() -> Self {
        JacobianOptions {
            step: 1e-4,
            rtol: 1e-9,
            atol: 1e-11,
        }
    }
}

fn jacobian_at_coords(
    field: &dyn MetricField,
    frame: &TangentFrame,
    coords: CTangent,
    opts: &JacobianOptions,
) -> Result<f64, VolumeError> {
    let h = opts.step;
    let mut jac = Matrix4::zeros();
    let center = coords.to_array();
    for j in 0..4 {
        let mut plus = center;
        let mut minus = center;
        plus[j] += h;
        minus[j] -= h;
        let end_plus = exp_map_with(
            field,
            frame.base,
            frame.apply(CTangent::from_array(plus)),
            opts.rtol,
            opts.atol,
        )?;
        let end_minus = exp_map_with(
            field,
            frame.base,
            frame.apply(CTangent::from_array(minus)),
            opts.rtol,
            opts.atol,
        )?;
        let ep = end_plus.to_array();
        let em = end_minus.to_array();
        for i in 0..4 {
            jac[(i, j)] = (ep[i] - em[i]) / (2.0 * h);
        }
    }
    Ok(jac.determinant())
}

/// Determinant of the central-difference Jacobian of the map
/// `coords -> exp(base, frame(coords))`, evaluated at the coordinates of
/// `tangent`. The tangent is given as an actual initial velocity (the
/// normalized variables of the frame), so the stencil differentiates around
/// `frame^{-1}(tangent)`.
pub fn exp_jacobian_numeric(
    field: &dyn MetricField,
    base: CPoint,
    tangent: CTangent,
    h: f64,
) -> Result<f64, VolumeError> {
    let opts = JacobianOptions {
        step: h,
        ..JacobianOptions::default()
    };
    exp_jacobian_with(field, base, tangent, &opts)
}

/// [`exp_jacobian_numeric`] with full control over the stencil and the inner
/// integrator.
pub fn exp_jacobian_with(
    field: &dyn MetricField,
    base: CPoint,
    tangent: CTangent,
    opts: &JacobianOptions,
) -> Result<f64, VolumeError> {
    let frame = TangentFrame::for_field(field, base)?;
    let coords = frame.apply_inverse(tangent);
    jacobian_at_coords(field, &frame, coords, opts)
}

/// Monte Carlo estimate of a geodesic-ball volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples_used: u64,
    pub skipped: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct VolumeOptions {
    /// Skip and count blow-up samples instead of aborting the estimate.
    pub skip_blowup_samples: bool,
    pub jacobian: JacobianOptions,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        VolumeOptions {
            skip_blowup_samples: false,
            jacobian: JacobianOptions::monte_carlo(),
        }
    }
}

/// Volume of the Euclidean ball of radius `r` in 4-space, `pi^2 r^4 / 2`.
pub fn euclidean_ball_volume(r: f64) -> f64 {
    std::f64::consts::PI * std::f64::consts::PI * r.powi(4) / 2.0
}

fn sample_in_ball(rng: &mut ChaCha8Rng, r: f64) -> CTangent {
    // rejection from the bounding cube
    loop {
        let x: f64 = rng.random_range(-r..=r);
        let y: f64 = rng.random_range(-r..=r);
        let u: f64 = rng.random_range(-r..=r);
        let v: f64 = rng.random_range(-r..=r);
        if x * x + y * y + u * u + v * v <= r * r {
            return CTangent::new(x, y, u, v);
        }
    }
}

/// Estimate the volume of the geodesic ball of radius `r` at `base` as the
/// mean of exponential-map Jacobians over uniform samples of the Euclidean
/// `r`-ball, times the Euclidean ball volume.
///
/// Sampling is indexed: sample `i` draws from its own generator stream, so
/// the result depends only on `(seed, n)` and not on the number of threads.
pub fn ball_volume_mc(
    field: &dyn MetricField,
    base: CPoint,
    r: f64,
    n: u64,
    seed: u64,
) -> Result<VolumeEstimate, VolumeError> {
    ball_volume_mc_with(field, base, r, n, seed, &VolumeOptions::default())
}

pub fn ball_volume_mc_with(
    field: &dyn MetricField,
    base: CPoint,
    r: f64,
    n: u64,
    seed: u64,
    opts: &VolumeOptions,
) -> Result<VolumeEstimate, VolumeError> {
    if n < MIN_SAMPLES {
        return Err(VolumeError::InvalidSampleCount {
            n,
            min: MIN_SAMPLES,
        });
    }
    if r == 0.0 {
        return Ok(VolumeEstimate {
            estimate: 0.0,
            stderr: 0.0,
            samples_used: 0,
            skipped: 0,
        });
    }
    let frame = TangentFrame::for_field(field, base)?;

    let results: Vec<Result<f64, (CTangent, GeodesicError)>> = (0..n)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index);
            let coords = sample_in_ball(&mut rng, r);
            jacobian_at_coords(field, &frame, coords, &opts.jacobian).map_err(|e| match e {
                VolumeError::Geodesic(g) => (frame.apply(coords), g),
                other => (frame.apply(coords), GeodesicError::Metric(match other {
                    VolumeError::Metric(m) => m,
                    _ => MetricError::Singular {
                        det: 0.0,
                        point: base,
                    },
                })),
            })
        })
        .collect();

    let mut values = Vec::with_capacity(n as usize);
    let mut skipped = 0u64;
    for (index, res) in results.into_iter().enumerate() {
        match res {
            Ok(j) => values.push(j),
            Err((direction, source)) => {
                if opts.skip_blowup_samples {
                    skipped += 1;
                } else {
                    return Err(VolumeError::BlowUpSample {
                        index: index as u64,
                        direction,
                        source,
                    });
                }
            }
        }
    }

    let k = values.len() as f64;
    let volume = euclidean_ball_volume(r);
    let mean = values.iter().sum::<f64>() / k;
    let variance = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    Ok(VolumeEstimate {
        estimate: mean * volume,
        stderr: (variance / k).sqrt() * volume,
        samples_used: values.len() as u64,
        skipped,
    })
}
