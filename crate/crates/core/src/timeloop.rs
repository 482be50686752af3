//! Adaptive explicit Runge-Kutta integration with crash detection.
//!
//! The integrator is Zonneveld's embedded 4(3) pair (Hairer, Norsett and Wanner,
//! *Solving ODEs I*, Table II.4.3): the classical four-stage fourth-order method
//! plus one extra stage at `c = 3/4` for a third-order error estimate. Steps are
//! chosen by a PI controller on the mixed absolute/relative RMS error norm.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, InadmissibleKind, Result};
use crate::schemes::SemiDiscretization;

/// Absolute and relative error tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolPair {
    pub abstol: f64,
    pub reltol: f64,
}

impl Default for TolPair {
    fn default() -> Self {
        Self {
            abstol: 1e-7,
            reltol: 1e-7,
        }
    }
}

impl TolPair {
    pub fn new(abstol: f64, reltol: f64) -> Result<Self> {
        if !(abstol > 0.0 && reltol > 0.0 && abstol.is_finite() && reltol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive, got abstol={abstol} reltol={reltol}"
            )));
        }
        Ok(Self { abstol, reltol })
    }

    pub fn uniform(tol: f64) -> Result<Self> {
        Self::new(tol, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrashCause {
    None,
    NegativeDensity,
    NegativePressure,
    NonFinite,
    DtUnderflow,
}

impl CrashCause {
    pub fn name(self) -> &'static str {
        match self {
            CrashCause::None => "none",
            CrashCause::NegativeDensity => "negative_density",
            CrashCause::NegativePressure => "negative_pressure",
            CrashCause::NonFinite => "non_finite",
            CrashCause::DtUnderflow => "dt_underflow",
        }
    }
}

impl From<InadmissibleKind> for CrashCause {
    fn from(kind: InadmissibleKind) -> Self {
        match kind {
            InadmissibleKind::NegativeDensity => CrashCause::NegativeDensity,
            InadmissibleKind::NegativePressure => CrashCause::NegativePressure,
            InadmissibleKind::NonFinite => CrashCause::NonFinite,
        }
    }
}

impl fmt::Display for CrashCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CrashCause {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            CrashCause::None,
            CrashCause::NegativeDensity,
            CrashCause::NegativePressure,
            CrashCause::NonFinite,
            CrashCause::DtUnderflow,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown crash cause '{s}'")))
    }
}

/// Named `(t, value)` series recorded by observers.
pub type SeriesSet = BTreeMap<String, Vec<(f64, f64)>>;

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub t_final: f64,
    pub end_time: f64,
    pub crashed: bool,
    pub crash_cause: CrashCause,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub rhs_evaluations: usize,
    pub series: SeriesSet,
}

/// Right-hand side of `du/dt = f(u, t)` on flat storage.
pub trait OdeSystem {
    fn rhs(&self, u: &[f64], t: f64, du: &mut [f64]) -> Result<()>;

    /// Optional stability bound on the step size at state `u`.
    fn max_time_step(&self, _u: &[f64]) -> Option<f64> {
        None
    }
}

impl OdeSystem for SemiDiscretization {
    fn rhs(&self, u: &[f64], t: f64, du: &mut [f64]) -> Result<()> {
        self.rhs_slice(u, t, du)
    }

    fn max_time_step(&self, u: &[f64]) -> Option<f64> {
        self.cfl_time_step(u)
    }
}

/// An [`OdeSystem`] from a closure, without a step bound.
pub struct FnSystem<F>(pub F);

impl<F> OdeSystem for FnSystem<F>
where
    F: Fn(&[f64], f64, &mut [f64]) -> Result<()>,
{
    fn rhs(&self, u: &[f64], t: f64, du: &mut [f64]) -> Result<()> {
        (self.0)(u, t, du)
    }
}

/// Called at the initial time and after every accepted step.
pub trait Observer {
    fn observe(&mut self, t: f64, u: &[f64], series: &mut SeriesSet);
}

impl<F: FnMut(f64, &[f64], &mut SeriesSet)> Observer for F {
    fn observe(&mut self, t: f64, u: &[f64], series: &mut SeriesSet) {
        self(t, u, series)
    }
}

/// Result of one step attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Accepted,
    /// Error estimate above one.
    Rejected,
    /// A stage state was inadmissible or not finite.
    Failed(CrashCause),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrashDecision {
    Continue,
    Crash(CrashCause),
}

/// Crash rule: after a rejected or failed attempt, the run is declared crashed once
/// the retry step size falls below `dt_min`. The cause is the last failure reason,
/// or `dt_underflow` when the error controller alone drove the step down.
pub fn detect_crash(
    outcome: StepOutcome,
    last_failure: CrashCause,
    dt_next: f64,
    dt_min: f64,
) -> CrashDecision {
    match outcome {
        StepOutcome::Accepted => CrashDecision::Continue,
        _ if dt_next >= dt_min => CrashDecision::Continue,
        StepOutcome::Failed(cause) => CrashDecision::Crash(cause),
        StepOutcome::Rejected if last_failure != CrashCause::None => CrashDecision::Crash(last_failure),
        StepOutcome::Rejected => CrashDecision::Crash(CrashCause::DtUnderflow),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub tol: TolPair,
    /// Fixed step size; disables error control (used for order checks).
    pub fixed_dt: Option<f64>,
    /// Upper bound on the number of step attempts.
    pub max_attempts: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tol: TolPair::default(),
            fixed_dt: None,
            max_attempts: 10_000_000,
        }
    }
}

impl IntegratorOptions {
    pub fn with_tol(tol: TolPair) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

const C: [f64; 5] = [0.0, 0.5, 0.5, 1.0, 0.75];
const A: [[f64; 4]; 5] = [
    [0.0, 0.0, 0.0, 0.0],
    [0.5, 0.0, 0.0, 0.0],
    [0.0, 0.5, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [5.0 / 32.0, 7.0 / 32.0, 13.0 / 32.0, -1.0 / 32.0],
];
const B: [f64; 5] = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 0.0];
const B_HAT: [f64; 5] = [-0.5, 7.0 / 3.0, 7.0 / 3.0, 13.0 / 6.0, -16.0 / 3.0];

const SAFETY: f64 = 0.9;
const BETA1: f64 = 0.6 / 4.0;
const BETA2: f64 = 0.2 / 4.0;
const FACTOR_MIN: f64 = 0.2;
const FACTOR_MAX: f64 = 5.0;
const FAILURE_FACTOR: f64 = 0.25;

fn cause_of(err: &Error) -> CrashCause {
    err.inadmissible_kind().map(CrashCause::from).unwrap_or(CrashCause::NonFinite)
}

fn rms_norm(x: &[f64], u: &[f64], tol: &TolPair) -> f64 {
    let s: f64 = x
        .iter()
        .zip(u)
        .map(|(e, v)| {
            let r = e / (tol.abstol + tol.reltol * v.abs());
            r * r
        })
        .sum();
    (s / x.len().max(1) as f64).sqrt()
}

fn eval<S: OdeSystem + ?Sized>(sys: &S, u: &[f64], t: f64, out: &mut [f64], count: &mut usize) -> Result<(), CrashCause> {
    *count += 1;
    sys.rhs(u, t, out).map_err(|e| cause_of(&e))?;
    if out.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(CrashCause::NonFinite)
    }
}

/// Starting step size (Hairer, Norsett and Wanner, Sec. II.4).
fn initial_step<S: OdeSystem + ?Sized>(
    sys: &S,
    u0: &[f64],
    t0: f64,
    f0: &[f64],
    tol: &TolPair,
    count: &mut usize,
) -> f64 {
    let d0 = rms_norm(u0, u0, tol);
    let d1 = rms_norm(f0, u0, tol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let u1: Vec<f64> = u0.iter().zip(f0).map(|(u, f)| u + h0 * f).collect();
    let mut f1 = vec![0.0; u0.len()];
    if eval(sys, &u1, t0 + h0, &mut f1, count).is_err() {
        return h0;
    }
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms_norm(&diff, u0, tol) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.25)
    };
    (100.0 * h0).min(h1)
}

/// Integrate from `t_span.0` to `t_span.1`. Failures never escape: an inadmissible
/// or non-finite stage rejects the step and retries with a quarter of the step
/// size, and a crash is recorded once the step falls below `1e-12 (t1 - t0)`.
/// Returns the report and the last accepted state.
pub fn integrate<S: OdeSystem + ?Sized>(
    sys: &S,
    u0: &[f64],
    t_span: (f64, f64),
    opts: &IntegratorOptions,
    observers: &mut [&mut dyn Observer],
) -> (RunReport, Vec<f64>) {
    let (t0, t1) = t_span;
    let n = u0.len();
    let tol = opts.tol;
    let dt_min = 1e-12 * (t1 - t0).abs().max(f64::MIN_POSITIVE);
    let mut report = RunReport {
        t_final: t1,
        end_time: t0,
        crashed: false,
        crash_cause: CrashCause::None,
        steps_accepted: 0,
        steps_rejected: 0,
        rhs_evaluations: 0,
        series: SeriesSet::new(),
    };
    let mut u = u0.to_vec();
    let mut t = t0;
    for obs in observers.iter_mut() {
        obs.observe(t, &u, &mut report.series);
    }
    if t1 <= t0 {
        return (report, u);
    }

    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 5];
    if let Err(cause) = eval(sys, &u, t, &mut k[0], &mut report.rhs_evaluations) {
        report.crashed = true;
        report.crash_cause = cause;
        return (report, u);
    }
    let mut dt = match opts.fixed_dt {
        Some(h) => h,
        None => initial_step(sys, &u, t, &k[0], &tol, &mut report.rhs_evaluations),
    };
    let mut stage = vec![0.0; n];
    let mut unew = vec![0.0; n];
    let mut knext = vec![0.0; n];
    let mut err_prev = 1.0f64;
    let mut last_failure = CrashCause::None;
    let mut attempts = 0usize;

    while t < t1 {
        attempts += 1;
        if attempts > opts.max_attempts {
            report.crashed = true;
            report.crash_cause = CrashCause::DtUnderflow;
            break;
        }
        let mut h = dt;
        if opts.fixed_dt.is_none() {
            if let Some(cap) = sys.max_time_step(&u) {
                h = h.min(cap);
            }
        }
        let last = t + h >= t1 || (t1 - t - h) < dt_min;
        if last {
            h = t1 - t;
        }

        let attempt = (|| -> Result<f64, CrashCause> {
            for s in 1..5 {
                for i in 0..n {
                    let mut acc = u[i];
                    for (j, a) in A[s][..s].iter().enumerate() {
                        if *a != 0.0 {
                            acc += h * a * k[j][i];
                        }
                    }
                    stage[i] = acc;
                }
                if s == 4 {
                    // k1..k4 are complete, so the fourth-order solution is available
                    for i in 0..n {
                        unew[i] = u[i] + h * (B[0] * k[0][i] + B[1] * k[1][i] + B[2] * k[2][i] + B[3] * k[3][i]);
                    }
                }
                eval(sys, &stage, t + C[s] * h, &mut k[s], &mut report.rhs_evaluations)?;
            }
            let err = if opts.fixed_dt.is_some() {
                0.0
            } else {
                let e: Vec<f64> = (0..n)
                    .map(|i| h * (0..5).map(|s| (B[s] - B_HAT[s]) * k[s][i]).sum::<f64>())
                    .collect();
                let scale: Vec<f64> = u.iter().zip(&unew).map(|(a, b)| a.abs().max(b.abs())).collect();
                rms_norm(&e, &scale, &tol)
            };
            if err <= 1.0 {
                eval(sys, &unew, t + h, &mut knext, &mut report.rhs_evaluations)?;
            }
            Ok(err)
        })();

        let outcome = match attempt {
            Ok(err) if err <= 1.0 => {
                t = if last { t1 } else { t + h };
                std::mem::swap(&mut u, &mut unew);
                std::mem::swap(&mut k[0], &mut knext);
                report.steps_accepted += 1;
                report.end_time = t;
                last_failure = CrashCause::None;
                if opts.fixed_dt.is_none() {
                    let factor = (SAFETY * err.powf(-BETA1) * err_prev.powf(BETA2)).clamp(FACTOR_MIN, FACTOR_MAX);
                    dt = h * factor;
                    err_prev = err.max(1e-4);
                }
                for obs in observers.iter_mut() {
                    obs.observe(t, &u, &mut report.series);
                }
                StepOutcome::Accepted
            }
            Ok(err) => {
                report.steps_rejected += 1;
                dt = h * (SAFETY * err.powf(-0.25)).clamp(FACTOR_MIN, 1.0);
                StepOutcome::Rejected
            }
            Err(cause) => {
                report.steps_rejected += 1;
                last_failure = cause;
                dt = h * FAILURE_FACTOR;
                StepOutcome::Failed(cause)
            }
        };
        if let CrashDecision::Crash(cause) = detect_crash(outcome, last_failure, dt, dt_min) {
            report.crashed = true;
            report.crash_cause = cause;
            break;
        }
        if opts.fixed_dt.is_some() && outcome != StepOutcome::Accepted {
            // a fixed-step run cannot adapt: any failure ends it
            report.crashed = true;
            report.crash_cause = if let StepOutcome::Failed(c) = outcome { c } else { CrashCause::DtUnderflow };
            break;
        }
    }
    (report, u)
}
