//! Figures of merit computed from a trajectory.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dynamics::{propagate, Drive, DriveMode, RunConfig, Trajectory};
use crate::error::{Error, Result};
use crate::protocols::Pulses;
use crate::quadrature;

/// Quantum-speed-limit constant: `T_QSL = QSL_CONSTANT / Omega` for the 99 % / 90 % thresholds.
pub const QSL_CONSTANT: f64 = 2.29;

/// Exact value behind [`QSL_CONSTANT`]: for `p3 = sin^2(Omega t / 2)` the crossing
/// times are `2 asin(0.1) / Omega` and `2 asin(sqrt 0.9) / Omega`.
pub fn qsl_constant_exact() -> f64 {
    2.0 * ((0.9f64).sqrt().asin() - (0.1f64).asin())
}

/// `|c3(t_f)|^2`.
pub fn fidelity(trajectory: &Trajectory) -> f64 {
    trajectory.final_state[2].norm_sqr()
}

/// `Gamma_2 * int |c2|^2 dt`.
pub fn loss(trajectory: &Trajectory, gamma_2: f64) -> f64 {
    gamma_2 * trajectory.c2_integral
}

/// Time from the first `|c1|^2 <= 0.99` to the first later `|c3|^2 >= 0.9`.
pub fn transfer_time(trajectory: &Trajectory) -> Option<f64> {
    let c = trajectory.crossings;
    Some(c.target? - c.initial?)
}

pub fn qsl_time(omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::invalid("omega", format!("must be > 0, got {omega}")));
    }
    Ok(QSL_CONSTANT / omega)
}

/// Speed-limit time with `Omega_d` averaged between the two threshold crossings.
pub fn sa_transfer_estimate(omega_d: impl Fn(f64) -> f64, trajectory: &Trajectory) -> Result<f64> {
    let c = trajectory.crossings;
    let start = c.initial.ok_or(Error::MissingCrossing("|c1|^2 <= 0.99"))?;
    let end = c.target.ok_or(Error::MissingCrossing("|c3|^2 >= 0.9"))?;
    let area = quadrature::integrate(&omega_d, start, end, 1e-12 * (end - start).max(1e-300));
    if !(area > 0.0) {
        return Err(Error::invalid(
            "omega_d",
            "no detuning-pulse area between the crossings",
        ));
    }
    Ok(QSL_CONSTANT * (end - start) / area)
}

/// Analytic sin/cos STIRAP fidelity, `sqrt F = 1 - sin^2(eps) [1 - cos(pi / (2 sin eps))]`
/// with `eps = arccot(Omega_T / pi)`. Agrees with direct propagation.
pub fn chen_muga_fidelity(omega_t: f64) -> Result<f64> {
    chen_muga(omega_t, 2.0)
}

/// The same expression with `pi / sin(eps)` in the cosine.
pub fn chen_muga_fidelity_printed(omega_t: f64) -> Result<f64> {
    chen_muga(omega_t, 1.0)
}

fn chen_muga(omega_t: f64, divisor: f64) -> Result<f64> {
    if !(omega_t > 0.0) {
        return Err(Error::invalid(
            "omega_T",
            format!("must be > 0, got {omega_t}"),
        ));
    }
    let eps = (PI / omega_t).atan();
    let sin = eps.sin();
    let root = 1.0 - sin * sin * (1.0 - (PI / (divisor * sin)).cos());
    Ok(root * root)
}

/// `int Omega_d dt` of uniformly or irregularly sampled values.
pub fn detuning_area(times: &[f64], values: &[f64]) -> f64 {
    assert_eq!(times.len(), values.len(), "series must share a grid");
    if times.len() < 2 {
        return 0.0;
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs());
    if uniform {
        quadrature::simpson_uniform(values, dt)
    } else {
        quadrature::trapezoid(times, values)
    }
}

/// `int Omega_d dt` of a protocol over `window`, by adaptive quadrature.
pub fn detuning_area_of(pulses: &Pulses, window: (f64, f64)) -> f64 {
    quadrature::integrate_with_breaks(
        |t| pulses.detuning_pulse(t),
        window.0,
        window.1,
        &pulses.breakpoints(),
        1e-11,
    )
}

/// Maximum of `|Omega_d|` over `window`.
pub fn peak_detuning(pulses: &Pulses, window: (f64, f64)) -> f64 {
    let (a, b) = window;
    let w = pulses.params().width;
    let reach = (pulses.params().tau_t.abs() + 4.0) * w;
    let core = (a.max(-reach), b.min(reach));
    let grid =
        |lo: f64, hi: f64, n: usize| (0..=n).map(move |i| lo + (hi - lo) * i as f64 / n as f64);
    let f = |t: f64| pulses.detuning_pulse(t).abs();
    let (mut best_t, mut best) = (a, f(a));
    let mut spacing = (b - a) / 4000.0;
    for (t, h) in grid(a, b, 4000)
        .map(|t| (t, (b - a) / 4000.0))
        .chain(grid(core.0, core.1, 4000).map(|t| (t, (core.1 - core.0) / 4000.0)))
    {
        let v = f(t);
        if v > best {
            best = v;
            best_t = t;
            spacing = h;
        }
    }
    // Golden-section refinement around the best grid point.
    let (mut lo, mut hi) = ((best_t - spacing).max(a), (best_t + spacing).min(b));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) >= f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    best.max(f(0.5 * (lo + hi)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub fidelity: f64,
    pub loss: f64,
    pub transfer_time: Option<f64>,
    /// `2.29 / Omega~`, with `Omega~` the peak applied detuning pulse (peak Rabi frequency for bare STIRAP).
    pub qsl_time: f64,
    pub qsl_ratio: Option<f64>,
    /// Area of the applied detuning pulse (of the one that would be required, for bare STIRAP).
    pub detuning_area: f64,
    /// `Omega_peak * tau` (`Omega_peak * T` for delay-free families).
    pub global_adiabaticity: f64,
}

pub const METRICS_HEADER: &str =
    "fidelity,loss,transfer_time,qsl_time,qsl_ratio,detuning_area,global_adiabaticity";

impl MetricsReport {
    pub fn compute(config: &RunConfig, trajectory: &Trajectory) -> Result<Self> {
        let drive = Drive::new(config)?;
        let correction = drive.correction_pulses();
        let scale = match config.mode {
            DriveMode::Stirap => 1.0,
            _ => config.correction.area_scale,
        };
        let window = trajectory.window;
        let detuning_area = scale * detuning_area_of(correction, window);
        let characteristic = match config.mode {
            DriveMode::Stirap => config.drive.omega_peak(),
            _ => scale * peak_detuning(correction, window),
        };
        let qsl_time = if characteristic > 0.0 {
            qsl_time(characteristic)?
        } else {
            f64::INFINITY
        };
        let transfer_time = transfer_time(trajectory);
        let params = config.drive;
        let global_adiabaticity = if config.protocol.uses_tau() {
            params.omega_peak() * params.tau()
        } else {
            params.omega_t
        };
        Ok(MetricsReport {
            fidelity: fidelity(trajectory),
            loss: loss(trajectory, params.gamma_2()),
            transfer_time,
            qsl_time,
            qsl_ratio: transfer_time.map(|t| t / qsl_time),
            detuning_area,
            global_adiabaticity,
        })
    }

    pub fn csv_fields(&self) -> [String; 7] {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        [
            format!("{:.16e}", self.fidelity),
            format!("{:.16e}", self.loss),
            opt(self.transfer_time),
            format!("{:.16e}", self.qsl_time),
            opt(self.qsl_ratio),
            format!("{:.16e}", self.detuning_area),
            format!("{:.16e}", self.global_adiabaticity),
        ]
    }

    /// Single-row CSV with header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{METRICS_HEADER}")?;
        writeln!(out, "{}", self.csv_fields().join(","))
    }
}

/// Propagates `config` and evaluates its metrics.
pub fn simulate(config: &RunConfig) -> Result<(Trajectory, MetricsReport)> {
    let trajectory = propagate(config)?;
    let report = MetricsReport::compute(config, &trajectory)?;
    Ok((trajectory, report))
}
