//! Schrodinger propagation with intermediate-state loss.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{dark_state, h1_from_sample, CMatrix3};
use crate::ode::{self, DenseStep, State, Stats};
use crate::protocols::{DriveParams, Family, ProtocolSpec, Pulses, DEFAULT_EPS_CUT};
use crate::quadrature::{GL5_NODES, GL5_WEIGHTS};

pub use crate::ode::Settings as IntegratorSettings;

/// Population thresholds bracketing the transfer time.
pub const INITIAL_THRESHOLD: f64 = 0.99;
pub const FINAL_THRESHOLD: f64 = 0.9;

pub const DEFAULT_SAMPLES: usize = 1001;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriveMode {
    /// Pump and Stokes only.
    #[default]
    Stirap,
    /// Pump and Stokes plus the counterdiabatic correction.
    SaStirap,
    /// The direct `|1> <-> |3>` detuning pulse alone.
    DetuningOnly,
}

impl DriveMode {
    pub fn id(self) -> &'static str {
        match self {
            DriveMode::Stirap => "stirap",
            DriveMode::SaStirap => "sa_stirap",
            DriveMode::DetuningOnly => "detuning_only",
        }
    }
}

impl std::str::FromStr for DriveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            DriveMode::Stirap,
            DriveMode::SaStirap,
            DriveMode::DetuningOnly,
        ]
        .into_iter()
        .find(|m| m.id() == s)
        .ok_or_else(|| Error::invalid("mode", format!("unknown mode `{s}`")))
    }
}

/// Deliberate imperfections of the counterdiabatic correction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    /// Evaluate the correction for this `tau_T` instead of the actual delay.
    pub lock_tau_t: Option<f64>,
    /// Multiplier on the direct `|1> <-> |3>` coupling.
    pub area_scale: f64,
    /// Phase (rad) added to the direct coupling.
    pub phase_offset: f64,
}

impl Default for Correction {
    fn default() -> Self {
        Correction {
            lock_tau_t: None,
            area_scale: 1.0,
            phase_offset: 0.0,
        }
    }
}

impl Correction {
    pub fn validate(&self) -> Result<()> {
        if !(self.area_scale >= 0.0) || !self.area_scale.is_finite() {
            return Err(Error::invalid(
                "area_scale",
                format!("must be >= 0, got {}", self.area_scale),
            ));
        }
        if !(self.phase_offset.abs() <= PI) {
            return Err(Error::invalid(
                "phase_offset",
                format!("must lie in [-pi, pi], got {}", self.phase_offset),
            ));
        }
        Ok(())
    }
}

/// Everything needed to reproduce one simulation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub protocol: ProtocolSpec,
    pub drive: DriveParams,
    pub mode: DriveMode,
    pub correction: Correction,
    pub integrator: IntegratorSettings,
    pub initial_state: State,
    /// Truncation level of infinite-support pulses.
    pub eps_cut: f64,
    /// Number of uniformly spaced output samples.
    pub samples: usize,
}

impl RunConfig {
    pub fn new(protocol: ProtocolSpec, drive: DriveParams, mode: DriveMode) -> Self {
        RunConfig {
            protocol,
            drive,
            mode,
            correction: Correction::default(),
            integrator: IntegratorSettings::default(),
            initial_state: basis(0),
            eps_cut: DEFAULT_EPS_CUT,
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn family(family: Family, drive: DriveParams, mode: DriveMode) -> Self {
        RunConfig::new(ProtocolSpec::new(family), drive, mode)
    }

    pub fn validate(&self) -> Result<()> {
        self.correction.validate()?;
        self.integrator.validate()?;
        if self.samples < 2 {
            return Err(Error::invalid(
                "samples",
                format!("need at least 2, got {}", self.samples),
            ));
        }
        if self.initial_state.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("initial_state", "must be finite"));
        }
        Ok(())
    }

    /// Same physics on a time axis stretched by `scale`.
    pub fn rescaled(&self, scale: f64) -> Self {
        let mut out = *self;
        out.drive.width *= scale;
        if let crate::protocols::Detuning::Constant(d) = self.drive.detuning {
            out.drive.detuning = crate::protocols::Detuning::Constant(d / scale);
        }
        out.integrator.max_step = self.integrator.max_step.map(|h| h * scale);
        out
    }
}

/// Basis state `|k+1>`.
pub fn basis(k: usize) -> State {
    let mut s = State::zeros();
    s[k] = Complex64::new(1.0, 0.0);
    s
}

/// Time-dependent Hamiltonian of one run, including the loss term.
#[derive(Clone, Copy, Debug)]
pub struct Drive {
    pulses: Pulses,
    correction_pulses: Pulses,
    mode: DriveMode,
    coupling: Complex64,
    half_gamma: f64,
}

impl Drive {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let pulses = Pulses::new(config.protocol, config.drive)?;
        let correction_pulses = match config.correction.lock_tau_t {
            Some(tau_t) => {
                let mut locked = config.drive;
                locked.tau_t = tau_t;
                Pulses::new(config.protocol, locked)?
            }
            None => pulses,
        };
        Ok(Drive {
            pulses,
            correction_pulses,
            mode: config.mode,
            coupling: Complex64::from_polar(
                config.correction.area_scale,
                config.correction.phase_offset,
            ),
            half_gamma: 0.5 * config.drive.gamma_2(),
        })
    }

    pub fn pulses(&self) -> &Pulses {
        &self.pulses
    }

    /// Pulses the correction is computed from (differs from [`Drive::pulses`] when locked).
    pub fn correction_pulses(&self) -> &Pulses {
        &self.correction_pulses
    }

    /// Integration window: hull of the pulse window and the correction window.
    pub fn window(&self, eps_cut: f64) -> Result<(f64, f64)> {
        let (a, b) = self.pulses.window(eps_cut)?;
        if self.mode == DriveMode::Stirap {
            return Ok((a, b));
        }
        let (c, d) = self.correction_pulses.window(eps_cut)?;
        Ok((a.min(c), b.max(d)))
    }

    /// Points where the drive is not smooth.
    fn stops(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for p in [&self.pulses, &self.correction_pulses] {
            if matches!(p.family(), Family::Sin4 | Family::Sincos) {
                let (lo, hi) = p.closed_form_domain();
                out.extend([lo, hi]);
                if let Ok((a, b)) = p.window(DEFAULT_EPS_CUT) {
                    out.extend([a, b]);
                }
            }
        }
        out
    }

    /// Effective Hamiltonian `H(t) - i Gamma_2/2 |2><2|`.
    pub fn hamiltonian(&self, t: f64) -> Result<CMatrix3> {
        let sample = self.pulses.sample(t);
        let (delta_p, _) = self
            .pulses
            .params()
            .detuning
            .evaluate(sample.omega_0, sample.domega_0());
        let mut h = CMatrix3::zeros();
        h[(1, 1)] = Complex64::new(delta_p, -self.half_gamma);
        if self.mode != DriveMode::DetuningOnly {
            let (p, s) = (0.5 * sample.omega_p, 0.5 * sample.omega_s);
            h[(0, 1)] = p.into();
            h[(1, 0)] = p.into();
            h[(1, 2)] = s.into();
            h[(2, 1)] = s.into();
        }
        if self.mode != DriveMode::Stirap {
            let c = self.correction_pulses.sample(t);
            let (cd, cdd) = self
                .correction_pulses
                .params()
                .detuning
                .evaluate(c.omega_0, c.domega_0());
            let h1 = h1_from_sample(&c, cd, cdd);
            if self.mode == DriveMode::SaStirap {
                for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
                    h[(i, j)] += h1[(i, j)];
                }
            }
            let direct = I * (0.5 * c.omega_d) * self.coupling;
            h[(0, 2)] = direct;
            h[(2, 0)] = direct.conj();
        }
        if h.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFiniteHamiltonian { t });
        }
        Ok(h)
    }
}

/// Threshold crossing times of a propagation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Crossings {
    /// First time `|c1|^2 <= 0.99`.
    pub initial: Option<f64>,
    /// First later time `|c3|^2 >= 0.9`.
    pub target: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub amplitudes: Vec<State>,
    pub window: (f64, f64),
    pub final_state: State,
    /// `int |c2|^2 dt` over the window, from the continuous output.
    pub c2_integral: f64,
    pub crossings: Crossings,
    pub stats: Stats,
}

impl Trajectory {
    pub fn norms(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm()).collect()
    }

    pub fn populations(&self) -> Vec<[f64; 3]> {
        self.amplitudes.iter().map(populations).collect()
    }

    pub fn final_populations(&self) -> [f64; 3] {
        populations(&self.final_state)
    }

    pub fn final_norm(&self) -> f64 {
        self.final_state.norm()
    }

    /// CSV with one row per output sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,norm,p1,p2,p3")?;
        for (t, a) in self.times.iter().zip(&self.amplitudes) {
            let p = populations(a);
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                t,
                a[0].re,
                a[0].im,
                a[1].re,
                a[1].im,
                a[2].re,
                a[2].im,
                a.norm(),
                p[0],
                p[1],
                p[2]
            )?;
        }
        Ok(())
    }
}

pub fn populations(a: &State) -> [f64; 3] {
    [a[0].norm_sqr(), a[1].norm_sqr(), a[2].norm_sqr()]
}

/// Collects uniform samples, the `|c2|^2` integral and threshold crossings step by step.
struct Recorder {
    grid: Vec<f64>,
    next: usize,
    amplitudes: Vec<State>,
    c2_integral: f64,
    crossings: Crossings,
}

impl Recorder {
    fn new(window: (f64, f64), samples: usize) -> Self {
        let (a, b) = window;
        let grid = (0..samples)
            .map(|i| {
                if i + 1 == samples {
                    b
                } else {
                    a + (b - a) * i as f64 / (samples - 1) as f64
                }
            })
            .collect();
        Recorder {
            grid,
            next: 0,
            amplitudes: Vec::with_capacity(samples),
            c2_integral: 0.0,
            crossings: Crossings::default(),
        }
    }

    fn observe(&mut self, step: &DenseStep) {
        while self.next < self.grid.len() && self.grid[self.next] <= step.t1 {
            let t = self.grid[self.next];
            let y = if t == step.t1 {
                step.end()
            } else {
                step.eval(t)
            };
            self.amplitudes.push(y);
            self.next += 1;
        }

        let half = 0.5 * (step.t1 - step.t0);
        let mid = 0.5 * (step.t1 + step.t0);
        self.c2_integral += half
            * GL5_NODES
                .iter()
                .zip(GL5_WEIGHTS)
                .map(|(x, w)| w * step.eval(mid + half * x)[1].norm_sqr())
                .sum::<f64>();

        if self.crossings.initial.is_none() {
            self.crossings.initial =
                first_crossing(step, step.t0, |y| y[0].norm_sqr() <= INITIAL_THRESHOLD);
        }
        if let (Some(start), None) = (self.crossings.initial, self.crossings.target) {
            if start <= step.t1 {
                self.crossings.target = first_crossing(step, start.max(step.t0), |y| {
                    y[2].norm_sqr() >= FINAL_THRESHOLD
                });
            }
        }
    }
}

/// First time in `[from, step.t1]` where `cond` holds, refined by bisection on the interpolant.
fn first_crossing(step: &DenseStep, from: f64, cond: impl Fn(&State) -> bool) -> Option<f64> {
    const PROBES: usize = 16;
    if cond(&step.eval(from)) {
        return Some(from);
    }
    let mut lo = from;
    for k in 1..=PROBES {
        let hi = from + (step.t1 - from) * k as f64 / PROBES as f64;
        if cond(&step.eval(hi)) {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if cond(&step.eval(m)) {
                    b = m;
                } else {
                    a = m;
                }
            }
            return Some(b);
        }
        lo = hi;
    }
    None
}

/// Integrates `i dPsi/dt = H(t) Psi` on `window`, landing on each of `samples` uniform output times.
pub fn propagate_with<H>(
    hamiltonian: H,
    window: (f64, f64),
    stops: &[f64],
    initial: State,
    settings: &IntegratorSettings,
    samples: usize,
) -> Result<Trajectory>
where
    H: Fn(f64) -> Result<CMatrix3>,
{
    let mut recorder = Recorder::new(window, samples.max(2));
    let mut landings = stops.to_vec();
    landings.extend_from_slice(&recorder.grid[1..recorder.grid.len() - 1]);
    let rhs = |t: f64, y: &State| Ok(hamiltonian(t)? * y * (-I));
    let (final_state, stats) = ode::solve(rhs, window, initial, &landings, settings, |step| {
        recorder.observe(step);
        Ok(())
    })?;
    if recorder.amplitudes.len() < recorder.grid.len() {
        recorder.amplitudes.push(final_state);
    }
    Ok(Trajectory {
        times: recorder.grid,
        amplitudes: recorder.amplitudes,
        window,
        final_state,
        c2_integral: recorder.c2_integral,
        crossings: recorder.crossings,
        stats,
    })
}

/// Propagates one run from its initial state across the integration window.
pub fn propagate(config: &RunConfig) -> Result<Trajectory> {
    let drive = Drive::new(config)?;
    let window = drive.window(config.eps_cut)?;
    propagate_with(
        |t| drive.hamiltonian(t),
        window,
        &drive.stops(),
        config.initial_state,
        &config.integrator,
        config.samples,
    )
}

/// Resonant `|1> <-> |3>` coupling of constant Rabi frequency `omega`, applied for `duration`.
pub fn propagate_constant_pulse(
    omega: f64,
    duration: f64,
    settings: &IntegratorSettings,
    samples: usize,
) -> Result<Trajectory> {
    if !(omega > 0.0) || !(duration > 0.0) {
        return Err(Error::invalid(
            "omega",
            "rabi frequency and duration must be > 0",
        ));
    }
    let mut h = CMatrix3::zeros();
    h[(0, 2)] = I * (0.5 * omega);
    h[(2, 0)] = -I * (0.5 * omega);
    propagate_with(|_| Ok(h), (0.0, duration), &[], basis(0), settings, samples)
}

/// `(t, |<a_0(t)|Psi(t)>|^2)` at every output sample where the drive is on.
pub fn dark_state_overlap(trajectory: &Trajectory, config: &RunConfig) -> Result<Vec<(f64, f64)>> {
    let pulses = Pulses::new(config.protocol, config.drive)?;
    Ok(trajectory
        .times
        .iter()
        .zip(&trajectory.amplitudes)
        .filter_map(|(&t, psi)| {
            let s = pulses.sample(t);
            (s.omega_0 > 0.0).then(|| {
                let a0 = dark_state(s.theta);
                let overlap = psi[0] * a0[0] + psi[2] * a0[2];
                (t, overlap.norm_sqr())
            })
        })
        .collect())
}

/// Final fidelities of `config` and of its twin with all timescales stretched by `scale`.
pub fn timescale_rescale_check(config: &RunConfig, scale: f64) -> Result<(f64, f64)> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::invalid("scale", format!("must be > 0, got {scale}")));
    }
    let f = propagate(config)?.final_populations()[2];
    let g = propagate(&config.rescaled(scale))?.final_populations()[2];
    Ok((f, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::Detuning;

    fn run(family: Family, omega_t: f64, tau_t: f64, gamma_t: f64, mode: DriveMode) -> Trajectory {
        propagate(&RunConfig::family(
            family,
            DriveParams::new(omega_t, tau_t, gamma_t),
            mode,
        ))
        .unwrap()
    }

    #[test]
    fn sa_stirap_transfers_completely() {
        for family in [
            Family::Gaussian,
            Family::Exponential,
            Family::Sin4,
            Family::SincosArctan,
            Family::Sincos,
        ] {
            let tau = if family == Family::Sin4 { 0.3 } else { 1.0 };
            let tr = run(family, 1.0, tau, 0.0, DriveMode::SaStirap);
            let p3 = tr.final_populations()[2];
            assert!((p3 - 1.0).abs() < 1e-6, "{family}: {p3}");
        }
    }

    #[test]
    fn exponential_stirap_reaches_about_seventy_percent() {
        let p3 = run(Family::Exponential, 1.0, 1.0, 0.0, DriveMode::Stirap).final_populations()[2];
        assert!((p3 - 0.7).abs() < 0.05, "{p3}");
    }

    #[test]
    fn lossy_norm_decreases_and_matches_the_c2_integral() {
        let tr = run(Family::Gaussian, 3.0, 0.5, 2.0, DriveMode::Stirap);
        let norms = tr.norms();
        let pops = tr.populations();
        for (k, w) in norms.windows(2).enumerate() {
            assert!(w[1] <= w[0] + 1e-12);
            if pops[k][1] > 1e-6 {
                assert!(w[1] < w[0], "sample {k}");
            }
        }
        let deficit = 1.0 - tr.final_norm().powi(2);
        assert!(
            (deficit - 2.0 * tr.c2_integral).abs() < 1e-8,
            "{deficit} vs {}",
            2.0 * tr.c2_integral
        );
    }

    #[test]
    fn lossless_runs_are_unitary() {
        let settings = IntegratorSettings::default();
        let tr = run(Family::SechPair, 4.0, 0.7, 0.0, DriveMode::Stirap);
        let worst = tr
            .norms()
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst < 10.0 * settings.rel_tol, "{worst}");
        for (p, n) in tr.populations().iter().zip(tr.norms()) {
            assert!((p.iter().sum::<f64>() - n * n).abs() < 1e-14);
        }
    }

    #[test]
    fn output_grid_is_uniform_and_complete() {
        let tr = run(Family::Gaussian, 1.0, 0.5, 0.0, DriveMode::Stirap);
        assert_eq!(tr.times.len(), DEFAULT_SAMPLES);
        assert_eq!(tr.amplitudes.len(), DEFAULT_SAMPLES);
        assert_eq!(tr.times[0], tr.window.0);
        assert_eq!(*tr.times.last().unwrap(), tr.window.1);
        assert_eq!(*tr.amplitudes.last().unwrap(), tr.final_state);
        assert_eq!(tr.amplitudes[0], basis(0));
    }

    #[test]
    fn dark_state_is_followed_exactly_with_correction() {
        let config = RunConfig::family(
            Family::Gaussian,
            DriveParams::new(0.5, 0.7, 0.0),
            DriveMode::SaStirap,
        );
        let tr = propagate(&config).unwrap();
        let overlaps = dark_state_overlap(&tr, &config).unwrap();
        assert!(overlaps.len() > 900);
        assert!(overlaps.iter().all(|&(_, o)| (o - 1.0).abs() < 1e-6));
    }

    #[test]
    fn dark_state_overlap_in_adiabatic_and_diabatic_limits() {
        let adiabatic = RunConfig::family(
            Family::Gaussian,
            DriveParams::new(50.0, 0.5, 0.0),
            DriveMode::Stirap,
        );
        let tr = propagate(&adiabatic).unwrap();
        let min = dark_state_overlap(&tr, &adiabatic)
            .unwrap()
            .iter()
            .map(|x| x.1)
            .fold(1.0, f64::min);
        assert!(min > 0.99, "{min}");

        let fast = RunConfig::family(
            Family::Gaussian,
            DriveParams::new(0.2, 0.5, 0.0),
            DriveMode::Stirap,
        );
        let tr = propagate(&fast).unwrap();
        let min = dark_state_overlap(&tr, &fast)
            .unwrap()
            .iter()
            .map(|x| x.1)
            .fold(1.0, f64::min);
        assert!(min < 0.9, "{min}");
    }

    #[test]
    fn rescaling_preserves_fidelity() {
        let config = RunConfig::family(
            Family::Gaussian,
            DriveParams::new(2.0, 0.5, 1.0),
            DriveMode::Stirap,
        );
        for scale in [10.0, 0.1] {
            let (f, g) = timescale_rescale_check(&config, scale).unwrap();
            assert!((f - g).abs() < 1e-8, "scale {scale}: {f} vs {g}");
        }
        let (f, g) = timescale_rescale_check(&config, 1.0).unwrap();
        assert_eq!(f, g);
        let sa = RunConfig {
            mode: DriveMode::SaStirap,
            ..config
        };
        let mut sa = sa;
        sa.drive.gamma_t = 0.0;
        let (f, g) = timescale_rescale_check(&sa, 0.1).unwrap();
        assert!((f - 1.0).abs() < 1e-6 && (g - 1.0).abs() < 1e-6);
    }

    #[test]
    fn detuning_pulse_alone_is_a_pi_pulse() {
        let tr = run(Family::Gaussian, 1.0, 0.5, 0.0, DriveMode::DetuningOnly);
        assert!((tr.final_populations()[2] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn area_scale_and_phase_enter_the_direct_coupling() {
        let mut config = RunConfig::family(
            Family::Gaussian,
            DriveParams::new(1.0, 0.5, 0.0),
            DriveMode::DetuningOnly,
        );
        config.correction.area_scale = 0.5;
        let tr = propagate(&config).unwrap();
        let pulses = Pulses::new(config.protocol, config.drive).unwrap();
        // The coupling rotates |1> into |3> by area_scale times the swept mixing angle.
        let swept = pulses.theta(tr.window.1) - pulses.theta(tr.window.0);
        let expected = (0.5 * swept).sin().powi(2);
        let p3 = tr.final_populations()[2];
        assert!((p3 - expected).abs() < 1e-9, "{p3} vs {expected}");
        assert!((p3 - 0.5).abs() < 1e-3);
        config.correction.area_scale = 1.0;
        config.correction.phase_offset = 1.0;
        let h = Drive::new(&config).unwrap().hamiltonian(0.0).unwrap();
        assert!((h[(0, 2)] - I * Complex64::cis(1.0)).norm() < 1e-14);
        assert!((h[(2, 0)] - h[(0, 2)].conj()).norm() == 0.0);
    }

    #[test]
    fn locked_correction_uses_the_locked_delay() {
        let mut config = RunConfig::family(
            Family::Gaussian,
            DriveParams::new(5.0, 0.8, 0.0),
            DriveMode::SaStirap,
        );
        config.correction.lock_tau_t = Some(0.5);
        let h = Drive::new(&config).unwrap().hamiltonian(0.0).unwrap();
        assert!((h[(0, 2)] - I).norm() < 1e-14);
        config.correction.lock_tau_t = Some(0.8);
        let p3 = propagate(&config).unwrap().final_populations()[2];
        assert!((p3 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn proportional_detuning_keeps_exact_transfer() {
        let mut drive = DriveParams::new(2.0, 0.6, 0.0);
        drive.detuning = Detuning::Proportional(0.3);
        let tr = propagate(&RunConfig::family(
            Family::Gaussian,
            drive,
            DriveMode::SaStirap,
        ))
        .unwrap();
        assert!((tr.final_populations()[2] - 1.0).abs() < 1e-6);

        drive.detuning = Detuning::Constant(0.8);
        let tr = propagate(&RunConfig::family(
            Family::Gaussian,
            drive,
            DriveMode::SaStirap,
        ))
        .unwrap();
        assert!((tr.final_populations()[2] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn constant_pulse_crossings_follow_rabi_formula() {
        let omega = 1.7;
        let tr = propagate_constant_pulse(omega, PI / omega, &IntegratorSettings::default(), 501)
            .unwrap();
        let t99 = 2.0 * (0.1f64).asin() / omega;
        let t90 = 2.0 * (0.9f64).sqrt().asin() / omega;
        assert!((tr.crossings.initial.unwrap() - t99).abs() < 1e-9);
        assert!((tr.crossings.target.unwrap() - t90).abs() < 1e-9);
    }

    #[test]
    fn halving_the_step_cap_leaves_populations_unchanged() {
        let mut config = RunConfig::family(
            Family::Gaussian,
            DriveParams::new(8.0, 0.5, 3.0),
            DriveMode::Stirap,
        );
        config.integrator.max_step = Some(0.05);
        let a = propagate(&config).unwrap().final_populations();
        config.integrator.max_step = Some(0.025);
        let b = propagate(&config).unwrap().final_populations();
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let mut config = RunConfig::family(
            Family::Sincos,
            DriveParams::new(2.0, 0.5, 0.0),
            DriveMode::Stirap,
        );
        config.samples = 500;
        let tr = propagate(&config).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,norm,p1,p2,p3"
        );
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 500);
        let last: Vec<f64> = rows[499].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(last.len(), 11);
        assert_eq!(last[10], tr.final_populations()[2]);
    }

    #[test]
    fn invalid_corrections_are_rejected() {
        let mut config = RunConfig::family(
            Family::Gaussian,
            DriveParams::default(),
            DriveMode::SaStirap,
        );
        config.correction.area_scale = -0.1;
        assert!(propagate(&config).is_err());
        config.correction.area_scale = 1.0;
        config.correction.phase_offset = 4.0;
        assert!(propagate(&config).is_err());
    }
}
