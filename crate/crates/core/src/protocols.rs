//! Catalog of the eight pump/Stokes pulse families.
//!
//! Every family is parameterized by the dimensionless groups `omega_T`
//! (peak Rabi frequency times pulse width), `tau_T` (half-delay over width)
//! and a reference width `T`. Envelopes are scaled so that the pump reaches
//! `Omega_peak = omega_T / T` (its supremum for the families whose pump only
//! saturates asymptotically).
//!
//! The mixing angle `theta` (with `tan theta = Omega_p / Omega_s`) and its
//! derivative are evaluated through the log-ratio `x = ln(Omega_p / Omega_s)`:
//! `theta = pi/4 + atan(tanh(x/2))` and `theta_dot = x_dot / (2 cosh x)`.
//! Both stay finite deep in the pulse tails where `Omega_p^2 + Omega_s^2`
//! underflows, which matters for the Gaussian family at small delays.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation level for infinite-support pulses, relative to the peak.
pub const DEFAULT_EPS_CUT: f64 = 1e-4;

/// Peak of `sqrt(1 - tanh u) sech u`, reached at `tanh u = -1/3`.
const CARROLL_HIOE_B_PEAK: f64 = 1.088_662_107_903_635_5; // sqrt(32/27)

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    Exponential,
    Sin4,
    SincosArctan,
    Sincos,
    CarrollHioeA,
    CarrollHioeB,
    SechPair,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Gaussian,
        Family::Exponential,
        Family::Sin4,
        Family::SincosArctan,
        Family::Sincos,
        Family::CarrollHioeA,
        Family::CarrollHioeB,
        Family::SechPair,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Exponential => "exponential",
            Family::Sin4 => "sin4",
            Family::SincosArctan => "sincos_arctan",
            Family::Sincos => "sincos",
            Family::CarrollHioeA => "carroll_hioe_a",
            Family::CarrollHioeB => "carroll_hioe_b",
            Family::SechPair => "sech_pair",
        }
    }

    /// Whether the envelopes depend on the delay `tau`.
    pub fn uses_tau(self) -> bool {
        matches!(self, Family::Gaussian | Family::Sin4 | Family::SechPair)
    }

    pub fn uses_alpha(self) -> bool {
        matches!(self, Family::CarrollHioeA | Family::CarrollHioeB)
    }

    /// Pulses vanish identically outside a finite interval.
    pub fn compact_support(self) -> bool {
        matches!(self, Family::Sin4 | Family::Sincos)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// One catalog row plus its shape parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub family: Family,
    /// Stokes/pump amplitude ratio; only for the Carroll-Hioe rows, `0 < alpha < 1`.
    pub alpha: Option<f64>,
}

impl ProtocolSpec {
    /// Spec for a family without shape parameter. Carroll-Hioe rows get `alpha = 0.1`.
    pub fn new(family: Family) -> Self {
        let alpha = family.uses_alpha().then_some(0.1);
        ProtocolSpec { family, alpha }
    }

    pub fn with_alpha(family: Family, alpha: f64) -> Self {
        ProtocolSpec {
            family,
            alpha: Some(alpha),
        }
    }

    pub fn uses_tau(&self) -> bool {
        self.family.uses_tau()
    }

    pub fn validate(&self) -> Result<()> {
        match (self.family.uses_alpha(), self.alpha) {
            (true, Some(a)) if a > 0.0 && a < 1.0 => Ok(()),
            (true, Some(a)) => Err(Error::invalid(
                "alpha",
                format!("must lie in (0, 1), got {a}"),
            )),
            (true, None) => Err(Error::invalid(
                "alpha",
                format!("required for `{}`", self.family),
            )),
            (false, Some(_)) => Err(Error::invalid(
                "alpha",
                format!("`{}` has no alpha parameter", self.family),
            )),
            (false, None) => Ok(()),
        }
    }
}

/// Pump detuning profile `Delta_p(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detuning {
    /// Constant detuning (angular frequency).
    Constant(f64),
    /// `Delta_p(t) = C * Omega_0(t)`; keeps the pump/Stokes corrections of H1 at zero.
    Proportional(f64),
}

impl Default for Detuning {
    fn default() -> Self {
        Detuning::Constant(0.0)
    }
}

impl Detuning {
    /// `(Delta_p, dDelta_p/dt)` given `Omega_0` and its derivative.
    pub fn evaluate(&self, omega_0: f64, domega_0: f64) -> (f64, f64) {
        match *self {
            Detuning::Constant(d) => (d, 0.0),
            Detuning::Proportional(c) => (c * omega_0, c * domega_0),
        }
    }
}

/// Dimensionless drive parameters. Two-photon resonance (`Delta_3 = 0`) is implied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// `Omega_T = Omega_peak * T`.
    #[serde(rename = "omega_T")]
    pub omega_t: f64,
    /// `tau_T = tau / T`; ignored by tau-free families.
    #[serde(rename = "tau_T")]
    pub tau_t: f64,
    /// `Gamma_T = Gamma_2 * T`.
    #[serde(rename = "gamma_T")]
    pub gamma_t: f64,
    /// Reference pulse width `T` in time units.
    #[serde(rename = "T")]
    pub width: f64,
    pub detuning: Detuning,
}

impl Default for DriveParams {
    fn default() -> Self {
        DriveParams {
            omega_t: 1.0,
            tau_t: 0.5,
            gamma_t: 0.0,
            width: 1.0,
            detuning: Detuning::default(),
        }
    }
}

impl DriveParams {
    pub fn new(omega_t: f64, tau_t: f64, gamma_t: f64) -> Self {
        DriveParams {
            omega_t,
            tau_t,
            gamma_t,
            ..Default::default()
        }
    }

    pub fn omega_peak(&self) -> f64 {
        self.omega_t / self.width
    }

    pub fn tau(&self) -> f64 {
        self.tau_t * self.width
    }

    pub fn gamma_2(&self) -> f64 {
        self.gamma_t / self.width
    }

    pub fn validate(&self, spec: &ProtocolSpec) -> Result<()> {
        let finite = [self.omega_t, self.tau_t, self.gamma_t, self.width];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("drive", "parameters must be finite"));
        }
        if self.omega_t < 0.0 {
            return Err(Error::invalid(
                "omega_T",
                format!("must be >= 0, got {}", self.omega_t),
            ));
        }
        if self.gamma_t < 0.0 {
            return Err(Error::invalid(
                "gamma_T",
                format!("must be >= 0, got {}", self.gamma_t),
            ));
        }
        if self.width <= 0.0 {
            return Err(Error::invalid(
                "T",
                format!("must be > 0, got {}", self.width),
            ));
        }
        if spec.uses_tau() && self.tau_t <= 0.0 {
            return Err(Error::invalid(
                "tau_T",
                format!(
                    "counterintuitive ordering requires tau > 0 for `{}`, got {}",
                    spec.family, self.tau_t
                ),
            ));
        }
        if spec.family == Family::Sin4 && self.tau_t >= 0.5 {
            return Err(Error::invalid(
                "tau_T",
                format!(
                    "sin4 pulses only overlap for tau_T < 1/2, got {}",
                    self.tau_t
                ),
            ));
        }
        match self.detuning {
            Detuning::Constant(d) | Detuning::Proportional(d) if !d.is_finite() => {
                Err(Error::invalid("delta_p", "must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// Instantaneous drive values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSample {
    pub t: f64,
    pub omega_p: f64,
    pub omega_s: f64,
    pub domega_p: f64,
    pub domega_s: f64,
    /// `sqrt(Omega_p^2 + Omega_s^2)`, computed without underflow.
    pub omega_0: f64,
    /// Mixing angle, `tan theta = Omega_p / Omega_s`.
    pub theta: f64,
    /// Detuning pulse `Omega_d = 2 theta_dot`.
    pub omega_d: f64,
}

impl PulseSample {
    pub fn domega_0(&self) -> f64 {
        if self.omega_0 == 0.0 {
            0.0
        } else {
            (self.omega_p * self.domega_p + self.omega_s * self.domega_s) / self.omega_0
        }
    }
}

fn theta_from_log_ratio(x: f64) -> f64 {
    FRAC_PI_4 + (0.5 * x).tanh().atan()
}

fn sech(y: f64) -> f64 {
    1.0 / y.cosh()
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Normalized envelope values (unit peak) with time derivatives and mixing angle.
#[derive(Clone, Copy, Debug)]
struct Shape {
    p: f64,
    s: f64,
    dp: f64,
    ds: f64,
    theta: f64,
    theta_dot: f64,
}

impl Shape {
    fn from_log_ratio(p: f64, s: f64, dp: f64, ds: f64, x: f64, x_dot: f64) -> Self {
        Shape {
            p,
            s,
            dp,
            ds,
            theta: theta_from_log_ratio(x),
            theta_dot: x_dot / (2.0 * x.cosh()),
        }
    }

    fn from_angle(theta: f64, theta_dot: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        Shape {
            p: sin,
            s: cos,
            dp: cos * theta_dot,
            ds: -sin * theta_dot,
            theta,
            theta_dot,
        }
    }

    fn dark(theta: f64) -> Self {
        Shape {
            p: 0.0,
            s: 0.0,
            dp: 0.0,
            ds: 0.0,
            theta,
            theta_dot: 0.0,
        }
    }
}

/// Which end of the time axis a tail condition refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Early,
    Late,
}

/// A validated protocol: catalog row plus drive parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pulses {
    spec: ProtocolSpec,
    params: DriveParams,
    alpha: f64,
}

impl Pulses {
    pub fn new(spec: ProtocolSpec, params: DriveParams) -> Result<Self> {
        spec.validate()?;
        params.validate(&spec)?;
        Ok(Pulses {
            spec,
            params,
            alpha: spec.alpha.unwrap_or(0.0),
        })
    }

    pub fn spec(&self) -> &ProtocolSpec {
        &self.spec
    }

    pub fn params(&self) -> &DriveParams {
        &self.params
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    fn width(&self) -> f64 {
        self.params.width
    }

    fn r(&self) -> f64 {
        if self.spec.uses_tau() {
            self.params.tau_t
        } else {
            0.0
        }
    }

    fn shape(&self, t: f64) -> Shape {
        let w = self.width();
        let u = t / w;
        let r = self.r();
        match self.spec.family {
            Family::Gaussian => {
                let p = (-(u - r).powi(2)).exp();
                let s = (-(u + r).powi(2)).exp();
                Shape::from_log_ratio(
                    p,
                    s,
                    -2.0 * (u - r) * p / w,
                    -2.0 * (u + r) * s / w,
                    4.0 * r * u,
                    4.0 * r / w,
                )
            }
            Family::Exponential => {
                let p = logistic(u).sqrt();
                let s = logistic(-u).sqrt();
                Shape::from_log_ratio(
                    p,
                    s,
                    0.5 * p * s * s / w,
                    -0.5 * s * p * p / w,
                    0.5 * u,
                    0.5 / w,
                )
            }
            Family::Sin4 => self.sin4_shape(u),
            Family::SincosArctan => {
                Shape::from_angle(0.5 * u.atan() + FRAC_PI_4, 0.5 / (w * (1.0 + u * u)))
            }
            Family::Sincos => {
                if (0.0..=1.0).contains(&u) {
                    Shape::from_angle(FRAC_PI_2 * u, FRAC_PI_2 / w)
                } else {
                    Shape::dark(if u < 0.0 { 0.0 } else { FRAC_PI_2 })
                }
            }
            Family::CarrollHioeA | Family::CarrollHioeB => {
                let a = self.alpha;
                let tanh = u.tanh();
                let one_minus_tanh = 2.0 * logistic(-2.0 * u);
                let one_plus_tanh = 2.0 * logistic(2.0 * u);
                let x = (SQRT_2 / a).ln() - 0.5 * softplus(-2.0 * u);
                let x_dot = logistic(-2.0 * u) / w;
                let (p, s, dp, ds) = if self.spec.family == Family::CarrollHioeA {
                    let p = sech(u);
                    let s = a * one_minus_tanh.sqrt();
                    (p, s, -p * tanh / w, -0.5 * one_plus_tanh * s / w)
                } else {
                    let p = one_minus_tanh.sqrt() * sech(u) / CARROLL_HIOE_B_PEAK;
                    let s = a * one_minus_tanh / CARROLL_HIOE_B_PEAK;
                    (
                        p,
                        s,
                        -0.5 * p * (1.0 + 3.0 * tanh) / w,
                        -s * one_plus_tanh / w,
                    )
                };
                Shape::from_log_ratio(p, s, dp, ds, x, x_dot)
            }
            Family::SechPair => {
                let p = sech(u - r);
                let s = sech(u + r);
                Shape::from_log_ratio(
                    p,
                    s,
                    -(u - r).tanh() * p / w,
                    -(u + r).tanh() * s / w,
                    ln_cosh(u + r) - ln_cosh(u - r),
                    ((u + r).tanh() - (u - r).tanh()) / w,
                )
            }
        }
    }

    fn sin4_shape(&self, u: f64) -> Shape {
        let w = self.width();
        let r = self.r();
        let a = PI * (u - r);
        let b = PI * (u + r);
        let (sin_a, cos_a) = a.sin_cos();
        let (sin_b, cos_b) = b.sin_cos();
        let pump_on = u > r && u < r + 1.0;
        let stokes_on = u > -r && u < 1.0 - r;
        let p = if pump_on { sin_a.powi(4) } else { 0.0 };
        let s = if stokes_on { sin_b.powi(4) } else { 0.0 };
        let dp = if pump_on {
            4.0 * PI * sin_a.powi(3) * cos_a / w
        } else {
            0.0
        };
        let ds = if stokes_on {
            4.0 * PI * sin_b.powi(3) * cos_b / w
        } else {
            0.0
        };
        if p > 0.0 && s > 0.0 {
            let x = 4.0 * (sin_a / sin_b).ln();
            let x_dot = 4.0 * PI * (cos_a / sin_a - cos_b / sin_b) / w;
            Shape::from_log_ratio(p, s, dp, ds, x, x_dot)
        } else {
            let theta = if p > 0.0 || u >= 1.0 - r {
                FRAC_PI_2
            } else {
                0.0
            };
            Shape {
                p,
                s,
                dp,
                ds,
                theta,
                theta_dot: 0.0,
            }
        }
    }

    /// Drive values at time `t`.
    pub fn sample(&self, t: f64) -> PulseSample {
        let sh = self.shape(t);
        let peak = self.params.omega_peak();
        let omega_p = peak * sh.p;
        let omega_s = peak * sh.s;
        PulseSample {
            t,
            omega_p,
            omega_s,
            domega_p: peak * sh.dp,
            domega_s: peak * sh.ds,
            omega_0: omega_p.hypot(omega_s),
            theta: sh.theta,
            omega_d: 2.0 * sh.theta_dot,
        }
    }

    pub fn theta(&self, t: f64) -> f64 {
        self.shape(t).theta
    }

    /// `Omega_d(t) = 2 theta_dot(t)`.
    pub fn detuning_pulse(&self, t: f64) -> f64 {
        2.0 * self.shape(t).theta_dot
    }

    /// Interval on which the printed closed form of `Omega_d` applies.
    pub fn closed_form_domain(&self) -> (f64, f64) {
        let w = self.width();
        match self.spec.family {
            Family::Sin4 => (self.r() * w, (1.0 - self.r()) * w),
            Family::Sincos => (0.0, w),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Tabulated closed form of the detuning pulse (zero outside its domain).
    pub fn closed_form_detuning(&self, t: f64) -> f64 {
        let w = self.width();
        let tau = self.r() * w;
        let (lo, hi) = self.closed_form_domain();
        if t < lo || t > hi {
            return 0.0;
        }
        match self.spec.family {
            Family::Gaussian => 4.0 * tau / (w * w * (4.0 * tau * t / (w * w)).cosh()),
            Family::Exponential => 1.0 / (2.0 * w * (t / (2.0 * w)).cosh()),
            Family::Sin4 => {
                let k = PI / w;
                let num = k
                    * (2.0 * k * tau).sin()
                    * ((2.0 * k * tau).cos() - (2.0 * k * t).cos()).powi(3);
                let den = (k * (t - tau)).sin().powi(8) + (k * (t + tau)).sin().powi(8);
                num / den
            }
            Family::SincosArctan => w / (t * t + w * w),
            Family::Sincos => PI / w,
            Family::CarrollHioeA | Family::CarrollHioeB => {
                let a = self.alpha;
                let a2 = a * a;
                let u = t / w;
                if u <= 0.0 {
                    let e2 = (2.0 * u).exp();
                    4.0 * a * u.exp() / (w * SQRT_2 * (a2 + e2 * (2.0 + a2)) * (1.0 + e2).sqrt())
                } else {
                    let em2 = (-2.0 * u).exp();
                    4.0 * a * em2 / (w * SQRT_2 * (a2 * em2 + 2.0 + a2) * (em2 + 1.0).sqrt())
                }
            }
            Family::SechPair => {
                let r = self.r();
                2.0 * (2.0 * r).sinh() / (w * (1.0 + (2.0 * t / w).cosh() * (2.0 * r).cosh()))
            }
        }
    }

    /// Boundary deviations `(eps1, eps2)` as tabulated for each row.
    pub fn table_deviations(&self) -> (f64, f64) {
        match self.spec.family {
            Family::CarrollHioeA | Family::CarrollHioeB => (0.0, SQRT_2 * self.alpha),
            Family::SechPair => {
                let e = (-2.0 * self.r()).exp();
                (e, e)
            }
            _ => (0.0, 0.0),
        }
    }

    /// Exact limits `(lim_{t_i} Omega_p/Omega_s, lim_{t_f} Omega_s/Omega_p)` of the envelopes.
    pub fn boundary_limits(&self) -> (f64, f64) {
        match self.spec.family {
            Family::CarrollHioeA | Family::CarrollHioeB => (0.0, self.alpha / SQRT_2),
            _ => self.table_deviations(),
        }
    }

    /// Asymptotic mixing angles `(theta(t_i), theta(t_f))`.
    pub fn mixing_limits(&self) -> (f64, f64) {
        let (e1, e2) = self.boundary_limits();
        (e1.atan(), FRAC_PI_2 - e2.atan())
    }

    fn tail(&self, t: f64, end: End) -> f64 {
        let sh = self.shape(t);
        match (self.spec.family, end) {
            (Family::Exponential | Family::SincosArctan, End::Early) => sh.p,
            (Family::Exponential | Family::SincosArctan, End::Late) => sh.s,
            (Family::CarrollHioeA | Family::CarrollHioeB, End::Early) => sh.p,
            _ => sh.p.max(sh.s),
        }
    }

    fn truncated(&self, t: f64, end: End, eps_cut: f64) -> bool {
        let (theta_i, theta_f) = self.mixing_limits();
        let limit = match end {
            End::Early => theta_i,
            End::Late => theta_f,
        };
        self.tail(t, end) <= eps_cut && (self.theta(t) - limit).abs() <= eps_cut
    }

    fn tail_edge(&self, end: End, eps_cut: f64) -> Result<f64> {
        let w = self.width();
        let sign = match end {
            End::Early => -1.0,
            End::Late => 1.0,
        };
        let fail = || Error::WindowBracket {
            family: self.spec.family.id(),
            eps_cut,
        };
        let mut inner = self.r() * w;
        if self.truncated(sign * inner, end, eps_cut) {
            return Ok(inner);
        }
        let mut outer = inner + w;
        let mut doublings = 0;
        while !self.truncated(sign * outer, end, eps_cut) {
            inner = outer;
            outer *= 2.0;
            doublings += 1;
            if doublings > 60 {
                return Err(fail());
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (inner + outer);
            if mid <= inner || mid >= outer {
                break;
            }
            if self.truncated(sign * mid, end, eps_cut) {
                outer = mid;
            } else {
                inner = mid;
            }
        }
        Ok(outer)
    }

    /// Integration window `(t_i, t_f)`.
    ///
    /// Compact rows return their exact supports. Infinite-support rows return
    /// the smallest symmetric window at whose edges the vanishing envelopes
    /// are below `eps_cut * Omega_peak` and the mixing angle is within
    /// `eps_cut` of its asymptotic value.
    pub fn window(&self, eps_cut: f64) -> Result<(f64, f64)> {
        if !(eps_cut > 0.0 && eps_cut < 1.0) {
            return Err(Error::invalid(
                "eps_cut",
                format!("must lie in (0, 1), got {eps_cut}"),
            ));
        }
        let w = self.width();
        match self.spec.family {
            Family::Sin4 => Ok((-self.r() * w, (1.0 + self.r()) * w)),
            Family::Sincos => Ok((0.0, w)),
            _ => {
                let early = self.tail_edge(End::Early, eps_cut)?;
                let late = self.tail_edge(End::Late, eps_cut)?;
                let edge = early.max(late);
                Ok((-edge, edge))
            }
        }
    }

    /// Time points where the detuning pulse has structure, used as quadrature breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let w = self.width();
        let tau = self.r() * w;
        let mut pts = vec![-tau - w, -tau, 0.0, tau, tau + w];
        pts.extend((1..=12).flat_map(|k| {
            let x = w * 2f64.powi(k);
            [-x, x]
        }));
        let (lo, hi) = self.closed_form_domain();
        if lo.is_finite() {
            pts.push(lo);
            pts.push(hi);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// Drive values of `spec` at time `t`.
pub fn envelope(spec: &ProtocolSpec, params: &DriveParams, t: f64) -> Result<PulseSample> {
    Ok(Pulses::new(*spec, *params)?.sample(t))
}

/// Tabulated closed form of `Omega_d(t)`.
pub fn detuning_closed_form(spec: &ProtocolSpec, params: &DriveParams, t: f64) -> Result<f64> {
    Ok(Pulses::new(*spec, *params)?.closed_form_detuning(t))
}

/// Tabulated boundary deviations `(eps1, eps2)`.
pub fn epsilon_deviations(spec: &ProtocolSpec, params: &DriveParams) -> Result<(f64, f64)> {
    Ok(Pulses::new(*spec, *params)?.table_deviations())
}

/// Integration window with the default truncation level.
pub fn support_window(spec: &ProtocolSpec, params: &DriveParams) -> Result<(f64, f64)> {
    Pulses::new(*spec, *params)?.window(DEFAULT_EPS_CUT)
}
