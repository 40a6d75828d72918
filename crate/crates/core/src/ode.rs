//! Dormand-Prince 5(4) integrator with continuous output for complex 3-vectors.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type State = Vector3<Complex64>;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest allowed step; `None` means unbounded.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: None,
            max_steps: 20_000_000,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::invalid(
                "rel_tol",
                format!("must lie in (0, 1), got {}", self.rel_tol),
            ));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid(
                "abs_tol",
                format!("must be > 0, got {}", self.abs_tol),
            ));
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0) {
                return Err(Error::invalid("max_step", format!("must be > 0, got {h}")));
            }
        }
        Ok(())
    }
}

/// One accepted step with its quartic interpolant.
#[derive(Clone, Copy, Debug)]
pub struct DenseStep {
    pub t0: f64,
    pub t1: f64,
    r: [State; 5],
}

impl DenseStep {
    pub fn start(&self) -> State {
        self.r[0]
    }

    pub fn end(&self) -> State {
        self.r[0] + self.r[1]
    }

    /// Interpolated state for `t` in `[t0, t1]`.
    pub fn eval(&self, t: f64) -> State {
        let s = Complex64::from((t - self.t0) / (self.t1 - self.t0));
        let s1 = Complex64::from(1.0) - s;
        let [r1, r2, r3, r4, r5] = &self.r;
        r1 + (r2 + (r3 + (r4 + r5 * s1) * s) * s1) * s
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn error_norm(err: &State, y0: &State, y1: &State, s: &Settings) -> f64 {
    let sum: f64 = (0..3)
        .map(|i| {
            let scale = s.abs_tol + s.rel_tol * y0[i].norm().max(y1[i].norm());
            (err[i].norm() / scale).powi(2)
        })
        .sum();
    (sum / 3.0).sqrt()
}

fn weighted_rms(v: &State, y: &State, s: &Settings) -> f64 {
    error_norm(v, y, y, s)
}

struct Counted<F> {
    rhs: F,
    calls: usize,
}

impl<F: FnMut(f64, &State) -> Result<State>> Counted<F> {
    fn call(&mut self, t: f64, y: &State) -> Result<State> {
        self.calls += 1;
        (self.rhs)(t, y)
    }
}

fn initial_step<F>(
    rhs: &mut Counted<F>,
    t0: f64,
    y0: &State,
    f0: &State,
    span: f64,
    s: &Settings,
) -> Result<f64>
where
    F: FnMut(f64, &State) -> Result<State>,
{
    let cap = s.max_step.unwrap_or(f64::INFINITY).min(span);
    let d0 = weighted_rms(y0, y0, s);
    let d1 = weighted_rms(f0, y0, s);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(cap);
    let y1 = y0 + f0 * Complex64::from(h0);
    let f1 = rhs.call(t0 + h0, &y1)?;
    let d2 = weighted_rms(&(f1 - f0), y0, s) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6 * span)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(cap))
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` (`t1 > t0`).
///
/// Steps never straddle a point of `stops`; the derivative is re-evaluated
/// after each stop so the right-hand side may have kinks or jumps there.
/// Every accepted step is handed to `observe` in time order.
pub fn solve<F, O>(
    rhs: F,
    (t0, t1): (f64, f64),
    y0: State,
    stops: &[f64],
    settings: &Settings,
    mut observe: O,
) -> Result<(State, Stats)>
where
    F: FnMut(f64, &State) -> Result<State>,
    O: FnMut(&DenseStep) -> Result<()>,
{
    settings.validate()?;
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::invalid(
            "span",
            format!("need finite t0 < t1, got ({t0}, {t1})"),
        ));
    }
    let mut targets: Vec<f64> = stops
        .iter()
        .copied()
        .filter(|&x| x > t0 && x < t1)
        .collect();
    targets.push(t1);
    targets.sort_by(f64::total_cmp);
    targets.dedup();

    let mut rhs = Counted { rhs, calls: 0 };
    let mut stats = Stats::default();
    let max_step = settings.max_step.unwrap_or(f64::INFINITY);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs.call(t, &y)?;
    let mut h = initial_step(&mut rhs, t, &y, &k1, t1 - t0, settings)?;
    let mut last_rejected = false;

    for &target in &targets {
        while t < target {
            if stats.accepted + stats.rejected >= settings.max_steps {
                return Err(Error::StepFailure {
                    t,
                    reason: format!("step budget of {} exhausted", settings.max_steps),
                });
            }
            h = h.min(max_step);
            let mut landing = false;
            if t + 1.01 * h >= target {
                h = target - t;
                landing = true;
            }
            if h <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepFailure {
                    t,
                    reason: format!("step size underflow (h = {h:e})"),
                });
            }

            let c = |x: f64| Complex64::from(x * h);
            let k2 = rhs.call(t + C2 * h, &(y + k1 * c(A21)))?;
            let k3 = rhs.call(t + C3 * h, &(y + k1 * c(A31) + k2 * c(A32)))?;
            let k4 = rhs.call(t + C4 * h, &(y + k1 * c(A41) + k2 * c(A42) + k3 * c(A43)))?;
            let k5 = rhs.call(
                t + C5 * h,
                &(y + k1 * c(A51) + k2 * c(A52) + k3 * c(A53) + k4 * c(A54)),
            )?;
            let k6 = rhs.call(
                t + h,
                &(y + k1 * c(A61) + k2 * c(A62) + k3 * c(A63) + k4 * c(A64) + k5 * c(A65)),
            )?;
            let y_new = y + k1 * c(A71) + k3 * c(A73) + k4 * c(A74) + k5 * c(A75) + k6 * c(A76);
            let t_new = if landing { target } else { t + h };
            let k7 = rhs.call(t_new, &y_new)?;
            let err = k1 * c(E1) + k3 * c(E3) + k4 * c(E4) + k5 * c(E5) + k6 * c(E6) + k7 * c(E7);
            let norm = error_norm(&err, &y, &y_new, settings);
            if !norm.is_finite() {
                return Err(Error::StepFailure {
                    t,
                    reason: "non-finite error estimate".into(),
                });
            }

            if norm <= 1.0 {
                let ydiff = y_new - y;
                let bspl = k1 * c(1.0) - ydiff;
                let dense = DenseStep {
                    t0: t,
                    t1: t_new,
                    r: [
                        y,
                        ydiff,
                        bspl,
                        ydiff - k7 * c(1.0) - bspl,
                        k1 * c(D1) + k3 * c(D3) + k4 * c(D4) + k5 * c(D5) + k6 * c(D6) + k7 * c(D7),
                    ],
                };
                observe(&dense)?;
                stats.accepted += 1;
                let mut factor = if norm == 0.0 {
                    MAX_FACTOR
                } else {
                    SAFETY * norm.powf(-0.2)
                };
                factor = factor.clamp(MIN_FACTOR, MAX_FACTOR);
                if last_rejected {
                    factor = factor.min(1.0);
                }
                last_rejected = false;
                t = t_new;
                y = y_new;
                k1 = k7;
                h *= factor;
            } else {
                stats.rejected += 1;
                last_rejected = true;
                h *= (SAFETY * norm.powf(-0.2)).max(MIN_FACTOR);
            }
        }
        if target < t1 {
            k1 = rhs.call(t, &y)?;
        }
    }
    stats.evaluations = rhs.calls;
    Ok((y, stats))
}
