//! Geodesic integration for any [`MetricField`].
//!
//! The second-order complex system `zddot^alpha + sum Gamma^alpha_{beta
//! gamma} zdot^beta zdot^gamma = 0` is integrated as an 8-dimensional real
//! first-order system with an embedded Dormand-Prince 5(4) pair. The
//! Christoffel contraction is evaluated per step from the field.
//!
//! Blow-up handling: the trace terminates early when `|u|` exceeds
//! [`U_BLOWUP_LIMIT`] or when the accepted step collapses below
//! [`MIN_STEP`] while the state keeps growing. The reported `t_est` is the
//! last accepted time. These thresholds are artifact choices; the underlying
//! incompleteness only guarantees that blow-up directions exist.

use crate::metric::{christoffel_at, MetricError, MetricField};
use crate::point::{CPoint, CTangent};
use num_complex::Complex64;

/// `|u|` beyond which a trace is declared blown up.
pub const U_BLOWUP_LIMIT: f64 = 50.0;

/// Accepted steps below this length stop the integration.
pub const MIN_STEP: f64 = 1e-12;

const MAX_STEPS_DEFAULT: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeodesicError {
    #[error("tolerance {value:e} outside [1e-13, 1e-3]")]
    InvalidTolerance { value: f64 },
    #[error("t_end = {t_end} is not after start time {t_start}")]
    InvalidTimeSpan { t_start: f64, t_end: f64 },
    #[error("output stride must be positive, got {stride}")]
    InvalidStride { stride: f64 },
    #[error("start point is not positive definite")]
    NonPositiveDefiniteStart(#[source] MetricError),
    #[error("metric query failed during integration: {0}")]
    Metric(#[from] MetricError),
    #[error("step budget exhausted after {steps} steps at t = {t}")]
    MaxStepsExceeded { steps: u64, t: f64 },
    #[error("geodesic blows up before t = {target} (last accepted t = {t_est})")]
    BlowUpBeforeTarget { target: f64, t_est: f64 },
    #[error("integration stalled at t = {t} before reaching t = {target}")]
    Stalled { t: f64, target: f64 },
}

/// Instantaneous state of a geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub t: f64,
    pub point: CPoint,
    pub velocity: CTangent,
}

impl GeodesicState {
    pub fn new(t: f64, point: CPoint, velocity: CTangent) -> Self {
        GeodesicState { t, point, velocity }
    }

    fn to_vec(self) -> [f64; 8] {
        [
            self.point.x,
            self.point.y,
            self.point.u,
            self.point.v,
            self.velocity.dx,
            self.velocity.dy,
            self.velocity.du,
            self.velocity.dv,
        ]
    }

    fn from_vec(t: f64, y: &[f64; 8]) -> Self {
        GeodesicState {
            t,
            point: CPoint::new(y[0], y[1], y[2], y[3]),
            velocity: CTangent::new(y[4], y[5], y[6], y[7]),
        }
    }
}

/// How a trace ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    ReachedEnd,
    BlowupDetected { t_est: f64 },
    StepCollapse { t: f64 },
}

/// One recorded state with its conserved-quantity log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub state: GeodesicState,
    /// Hermitian speed `sum g_{alpha betabar} v^alpha conj(v^beta)`.
    pub speed_sq: f64,
    /// `zdot + z wdot`, recorded on request (meaningful for the Warren field).
    pub first_integral: Option<Complex64>,
    /// True when the sample sits on the output stride grid.
    pub at_stride: bool,
}

/// Accepted-step record of a geodesic run. Sample times are strictly
/// increasing and the termination event is always set.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicTrace {
    pub samples: Vec<TraceSample>,
    pub termination: Termination,
}

impl GeodesicTrace {
    pub fn final_state(&self) -> &GeodesicState {
        &self.samples.last().expect("trace holds the start sample").state
    }

    /// Max relative drift of the Hermitian speed over the trace.
    pub fn speed_drift(&self) -> f64 {
        let s0 = self.samples[0].speed_sq;
        if s0 == 0.0 {
            return self
                .samples
                .iter()
                .map(|s| s.speed_sq.abs())
                .fold(0.0, f64::max);
        }
        self.samples
            .iter()
            .map(|s| (s.speed_sq - s0).abs() / s0)
            .fold(0.0, f64::max)
    }

    /// Max absolute drift of the logged first integral, when logged.
    pub fn first_integral_drift(&self) -> Option<f64> {
        let c0 = self.samples[0].first_integral?;
        let mut worst = 0.0f64;
        for s in &self.samples {
            worst = worst.max((s.first_integral? - c0).norm());
        }
        Some(worst)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Output stride; accepted steps are clamped so the grid points
    /// `t0 + k*stride` are hit exactly (no interpolation).
    pub stride: f64,
    /// Log `zdot + z wdot` at every accepted step.
    pub log_first_integral: bool,
    pub max_steps: u64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            rtol: 1e-9,
            atol: 1e-12,
            stride: 1e-2,
            log_first_integral: false,
            max_steps: MAX_STEPS_DEFAULT,
        }
    }
}

/// Right-hand side of the first-order system: position' = velocity,
/// velocity' = minus the Christoffel contraction, split into real parts.
pub fn geodesic_rhs(field: &dyn MetricField, state: &GeodesicState) -> Result<[f64; 8], MetricError> {
    let gamma = christoffel_at(field, state.point)?;
    let zd = state.velocity.z_vel();
    let wd = state.velocity.w_vel();
    let acc_z = -(gamma.z_zz * zd * zd + 2.0 * gamma.z_zw * zd * wd + gamma.z_ww * wd * wd);
    let acc_w = -(gamma.w_zz * zd * zd + 2.0 * gamma.w_zw * zd * wd + gamma.w_ww * wd * wd);
    Ok([
        state.velocity.dx,
        state.velocity.dy,
        state.velocity.du,
        state.velocity.dv,
        acc_z.re,
        acc_z.im,
        acc_w.re,
        acc_w.im,
    ])
}

// Dormand-Prince 5(4) tableau. The last stage is the derivative at the
// accepted point (FSAL), reused as the first stage of the next step.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Stepper<'a> {
    field: &'a dyn MetricField,
    rtol: f64,
    atol: f64,
}

struct StepOutcome {
    y_new: [f64; 8],
    k_last: [f64; 8],
    err: f64,
}

impl<'a> Stepper<'a> {
    fn rhs(&self, y: &[f64; 8]) -> Result<[f64; 8], MetricError> {
        let state = GeodesicState::from_vec(0.0, y);
        geodesic_rhs(self.field, &state)
    }

    fn step(&self, y: &[f64; 8], k1: &[f64; 8], h: f64) -> Result<StepOutcome, MetricError> {
        let mut k = [[0.0f64; 8]; 7];
        k[0] = *k1;
        for stage in 0..6 {
            let mut yt = [0.0f64; 8];
            for i in 0..8 {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    acc += A[stage][j] * kj[i];
                }
                yt[i] = y[i] + h * acc;
            }
            k[stage + 1] = self.rhs(&yt)?;
        }
        // the sixth stage row is also the 5th-order weight vector
        let mut y_new = [0.0f64; 8];
        for i in 0..8 {
            let mut acc = 0.0;
            for j in 0..6 {
                acc += A[5][j] * k[j][i];
            }
            y_new[i] = y[i] + h * acc;
        }
        let k_last = self.rhs(&y_new)?;
        k[6] = k_last;
        let mut err_sq = 0.0;
        for i in 0..8 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += ERR[j] * kj[i];
            }
            e *= h;
            let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        Ok(StepOutcome {
            y_new,
            k_last,
            err: (err_sq / 8.0).sqrt(),
        })
    }
}

fn check_tolerance(value: f64) -> Result<(), GeodesicError> {
    if !(1e-13..=1e-3).contains(&value) {
        return Err(GeodesicError::InvalidTolerance { value });
    }
    Ok(())
}

fn state_growth(y: &[f64; 8]) -> f64 {
    y.iter().fold(0.0f64, |m, c| m.max(c.abs()))
}

/// Core adaptive loop. `on_accept` sees every accepted step together with a
/// flag marking stride-grid points.
fn propagate(
    field: &dyn MetricField,
    start: &GeodesicState,
    t_end: f64,
    opts: &IntegrateOptions,
    mut on_accept: impl FnMut(f64, &[f64; 8], bool),
) -> Result<Termination, GeodesicError> {
    check_tolerance(opts.rtol)?;
    check_tolerance(opts.atol)?;
    if t_end <= start.t {
        return Err(GeodesicError::InvalidTimeSpan {
            t_start: start.t,
            t_end,
        });
    }
    if opts.stride <= 0.0 {
        return Err(GeodesicError::InvalidStride { stride: opts.stride });
    }
    let g0 = field
        .metric_at(start.point)
        .map_err(GeodesicError::Metric)?;
    if !g0.is_positive_definite() {
        return Err(GeodesicError::NonPositiveDefiniteStart(
            MetricError::NotPositiveDefinite {
                g11: g0.g11,
                det: g0.det(),
                point: start.point,
            },
        ));
    }

    let stepper = Stepper {
        field,
        rtol: opts.rtol,
        atol: opts.atol,
    };
    let mut t = start.t;
    let mut y = start.to_vec();
    let mut k1 = stepper.rhs(&y)?;
    let initial_growth = state_growth(&y).max(1.0);

    let mut stride_index: u64 = 1;
    let mut next_stop = (start.t + opts.stride).min(t_end);
    let time_eps = 1e-12 * t_end.abs().max(1.0);

    let mut h = (opts.stride / 4.0).min(t_end - t);
    let mut steps: u64 = 0;

    loop {
        if t_end - t <= time_eps {
            return Ok(Termination::ReachedEnd);
        }
        let h_clamped = h.min(next_stop - t).min(t_end - t);
        let outcome = stepper.step(&y, &k1, h_clamped)?;
        steps += 1;
        if steps > opts.max_steps {
            return Err(GeodesicError::MaxStepsExceeded { steps, t });
        }
        let factor = if outcome.err == 0.0 {
            5.0
        } else {
            (0.9 * outcome.err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if outcome.err <= 1.0 {
            t += h_clamped;
            y = outcome.y_new;
            k1 = outcome.k_last;
            let on_stride = (t - next_stop).abs() <= time_eps;
            on_accept(t, &y, on_stride);
            if on_stride {
                stride_index += 1;
                next_stop = (start.t + stride_index as f64 * opts.stride).min(t_end);
            }
            if y[2].abs() > U_BLOWUP_LIMIT {
                return Ok(Termination::BlowupDetected { t_est: t });
            }
            if h_clamped < MIN_STEP && t_end - t > time_eps {
                return Ok(if state_growth(&y) > 10.0 * initial_growth {
                    Termination::BlowupDetected { t_est: t }
                } else {
                    Termination::StepCollapse { t }
                });
            }
            h = (h * factor).min(t_end - start.t);
        } else {
            h = h_clamped * factor.min(1.0);
            if h < MIN_STEP {
                return Ok(if state_growth(&y) > 10.0 * initial_growth {
                    Termination::BlowupDetected { t_est: t }
                } else {
                    Termination::StepCollapse { t }
                });
            }
        }
    }
}

/// Integrate a geodesic and record every accepted step.
pub fn integrate(
    field: &dyn MetricField,
    start: GeodesicState,
    t_end: f64,
    opts: &IntegrateOptions,
) -> Result<GeodesicTrace, GeodesicError> {
    let mut samples = Vec::new();
    let mut record = |t: f64, y: &[f64; 8], at_stride: bool| -> Result<(), MetricError> {
        let state = GeodesicState::from_vec(t, y);
        let g = field.metric_at(state.point)?;
        let first_integral = opts.log_first_integral.then(|| {
            state.velocity.z_vel() + state.point.z() * state.velocity.w_vel()
        });
        samples.push(TraceSample {
            state,
            speed_sq: g.speed_sq(&state.velocity),
            first_integral,
            at_stride,
        });
        Ok(())
    };
    record(start.t, &start.to_vec(), true).map_err(GeodesicError::Metric)?;

    let mut record_err: Option<MetricError> = None;
    let termination = propagate(field, &start, t_end, opts, |t, y, at_stride| {
        if record_err.is_none() {
            if let Err(e) = record(t, y, at_stride) {
                record_err = Some(e);
            }
        }
    })?;
    if let Some(e) = record_err {
        return Err(GeodesicError::Metric(e));
    }
    Ok(GeodesicTrace {
        samples,
        termination,
    })
}

/// Time-1 endpoint of the geodesic from `base` with initial velocity
/// `tangent`; the image of the exponential map.
pub fn exp_map(
    field: &dyn MetricField,
    base: CPoint,
    tangent: CTangent,
) -> Result<CPoint, GeodesicError> {
    exp_map_with(field, base, tangent, 1e-9, 1e-12)
}

/// [`exp_map`] with explicit tolerances (the Jacobian and volume machinery
/// picks its own accuracy/cost point).
pub fn exp_map_with(
    field: &dyn MetricField,
    base: CPoint,
    tangent: CTangent,
    rtol: f64,
    atol: f64,
) -> Result<CPoint, GeodesicError> {
    let start = GeodesicState::new(0.0, base, tangent);
    if tangent == CTangent::ZERO {
        return Ok(base);
    }
    let opts = IntegrateOptions {
        rtol,
        atol,
        stride: 1.0,
        log_first_integral: false,
        max_steps: MAX_STEPS_DEFAULT,
    };
    let mut last = start.to_vec();
    let termination = propagate(field, &start, 1.0, &opts, |_, y, _| {
        last = *y;
    })?;
    match termination {
        Termination::ReachedEnd => Ok(CPoint::new(last[0], last[1], last[2], last[3])),
        Termination::BlowupDetected { t_est } => Err(GeodesicError::BlowUpBeforeTarget {
            target: 1.0,
            t_est,
        }),
        Termination::StepCollapse { t } => Err(GeodesicError::Stalled { t, target: 1.0 }),
    }
}
