//! Bare and counterdiabatic Hamiltonians in the `|1>, |2>, |3>` basis (hbar = 1).

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::{DriveParams, PulseSample};

pub type CMatrix3 = Matrix3<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianSample {
    pub t: f64,
    pub matrix: CMatrix3,
}

impl HamiltonianSample {
    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.matrix - self.matrix.adjoint()).camax() <= tol
    }
}

/// `H0 = 1/2 [[0, Op, 0], [Op, 2 Dp, Os], [0, Os, 2 D3]]`.
pub fn h0(sample: &PulseSample, delta_p: f64, delta_3: f64) -> HamiltonianSample {
    let (p, s) = (0.5 * sample.omega_p, 0.5 * sample.omega_s);
    #[rustfmt::skip]
    let matrix = Matrix3::new(
        re(0.0), re(p),       re(0.0),
        re(p),   re(delta_p), re(s),
        re(0.0), re(s),       re(delta_3),
    );
    HamiltonianSample {
        t: sample.t,
        matrix,
    }
}

/// Instantaneous eigenframe of `H0` at two-photon resonance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdiabaticFrame {
    pub t: f64,
    pub theta: f64,
    pub phi: f64,
    pub theta_dot: f64,
    pub phi_dot: f64,
    pub omega_0: f64,
    pub delta_p: f64,
    /// `(lambda_0, lambda_-, lambda_+)`.
    pub eigenvalues: [f64; 3],
    /// `(|a_0>, |a_->, |a_+>)`.
    pub eigenvectors: [Vector3<f64>; 3],
}

impl AdiabaticFrame {
    pub fn dark_state(&self) -> Vector3<f64> {
        self.eigenvectors[0]
    }
}

/// `|a_0> = (cos theta, 0, -sin theta)`.
pub fn dark_state(theta: f64) -> Vector3<f64> {
    let (sin, cos) = theta.sin_cos();
    Vector3::new(cos, 0.0, -sin)
}

/// `phi_dot` from `phi = atan2(Omega_0, Delta_p) / 2`; zero where both vanish.
fn phi_dot(omega_0: f64, domega_0: f64, delta_p: f64, ddelta_p: f64) -> f64 {
    let denom = delta_p * delta_p + omega_0 * omega_0;
    if denom == 0.0 {
        0.0
    } else {
        (delta_p * domega_0 - omega_0 * ddelta_p) / (2.0 * denom)
    }
}

pub fn adiabatic_frame(
    sample: &PulseSample,
    delta_p: f64,
    ddelta_p: f64,
) -> Result<AdiabaticFrame> {
    if sample.omega_0 == 0.0 {
        return Err(Error::DegenerateDrive { t: sample.t });
    }
    let omega_0 = sample.omega_0;
    let theta = sample.theta;
    let phi = 0.5 * omega_0.atan2(delta_p);
    let root = delta_p.hypot(omega_0);
    let (sin_t, cos_t) = theta.sin_cos();
    let (sin_f, cos_f) = phi.sin_cos();
    Ok(AdiabaticFrame {
        t: sample.t,
        theta,
        phi,
        theta_dot: 0.5 * sample.omega_d,
        phi_dot: phi_dot(omega_0, sample.domega_0(), delta_p, ddelta_p),
        omega_0,
        delta_p,
        eigenvalues: [0.0, 0.5 * (delta_p - root), 0.5 * (delta_p + root)],
        eigenvectors: [
            dark_state(theta),
            Vector3::new(sin_t * cos_f, -sin_f, cos_t * cos_f),
            Vector3::new(sin_t * sin_f, cos_f, cos_t * sin_f),
        ],
    })
}

fn h1_matrix(theta: f64, theta_dot: f64, phi_dot: f64) -> CMatrix3 {
    let (sin, cos) = theta.sin_cos();
    let a = phi_dot * sin;
    let b = phi_dot * cos;
    #[rustfmt::skip]
    let m = Matrix3::new(
        re(0.0),         im(a),   im(theta_dot),
        im(-a),          re(0.0), im(-b),
        im(-theta_dot),  im(b),   re(0.0),
    );
    m
}

/// Counterdiabatic correction built from the eigenframe.
pub fn h1(frame: &AdiabaticFrame) -> HamiltonianSample {
    HamiltonianSample {
        t: frame.t,
        matrix: h1_matrix(frame.theta, frame.theta_dot, frame.phi_dot),
    }
}

/// `H1` straight from a drive sample; defined also where `Omega_0 = 0`.
pub(crate) fn h1_from_sample(sample: &PulseSample, delta_p: f64, ddelta_p: f64) -> CMatrix3 {
    let pd = phi_dot(sample.omega_0, sample.domega_0(), delta_p, ddelta_p);
    h1_matrix(sample.theta, 0.5 * sample.omega_d, pd)
}

/// Checks whether `Delta_p(t) = C * Omega_0(t)` for a single constant `C`.
///
/// Returns the fitted `C` when the relation holds to relative `1e-8`.
pub fn vanishing_condition_check(delta_p: &[f64], omega_0: &[f64]) -> Option<f64> {
    assert_eq!(delta_p.len(), omega_0.len(), "profiles must share a grid");
    let scale = delta_p.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if scale == 0.0 {
        return Some(0.0);
    }
    let (num, den) = delta_p
        .iter()
        .zip(omega_0)
        .fold((0.0, 0.0), |(n, d), (&dp, &o)| (n + dp * o, d + o * o));
    if den == 0.0 {
        return None;
    }
    let c = num / den;
    delta_p
        .iter()
        .zip(omega_0)
        .all(|(&dp, &o)| (dp - c * o).abs() <= 1e-8 * scale)
        .then_some(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// `E1 < E2 < E3`; the direct coupling oscillates at `omega_p + omega_s`.
    Ladder,
    /// `E3 < E2`; the direct coupling oscillates at `omega_p - omega_s`.
    Lambda,
}

/// Pump and Stokes Rabi frequencies with time-dependent phases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexDrive {
    pub t: f64,
    pub modulus_p: f64,
    pub modulus_s: f64,
    pub dmodulus_p: f64,
    pub dmodulus_s: f64,
    pub phase_p: f64,
    pub phase_s: f64,
    pub dphase_p: f64,
    pub dphase_s: f64,
    pub geometry: Geometry,
}

impl ComplexDrive {
    /// Real drive from a catalog sample with phases `(phase, dphase)` for pump and Stokes.
    pub fn from_sample(
        sample: &PulseSample,
        pump_phase: (f64, f64),
        stokes_phase: (f64, f64),
        geometry: Geometry,
    ) -> Self {
        ComplexDrive {
            t: sample.t,
            modulus_p: sample.omega_p,
            modulus_s: sample.omega_s,
            dmodulus_p: sample.domega_p,
            dmodulus_s: sample.domega_s,
            phase_p: pump_phase.0,
            phase_s: stokes_phase.0,
            dphase_p: pump_phase.1,
            dphase_s: stokes_phase.1,
            geometry,
        }
    }

    pub fn omega_p(&self) -> Complex64 {
        Complex64::from_polar(self.modulus_p, self.phase_p)
    }

    pub fn omega_s(&self) -> Complex64 {
        Complex64::from_polar(self.modulus_s, self.phase_s)
    }

    pub fn domega_p(&self) -> Complex64 {
        (re(self.dmodulus_p) + I * self.dphase_p * self.modulus_p) * Complex64::cis(self.phase_p)
    }

    pub fn domega_s(&self) -> Complex64 {
        (re(self.dmodulus_s) + I * self.dphase_s * self.modulus_s) * Complex64::cis(self.phase_s)
    }
}

/// Half the generalized detuning pulse, `Omega_d / 2`, for a phase-modulated drive at `Delta_p = 0`.
pub fn generalized_detuning(drive: &ComplexDrive) -> Result<Complex64> {
    let norm = drive.modulus_p.powi(2) + drive.modulus_s.powi(2);
    if norm == 0.0 {
        return Err(Error::DegenerateDrive { t: drive.t });
    }
    let (s, ds) = match drive.geometry {
        Geometry::Ladder => (drive.omega_s(), drive.domega_s()),
        Geometry::Lambda => (drive.omega_s().conj(), drive.domega_s().conj()),
    };
    Ok((drive.domega_p() * s - drive.omega_p() * ds) / norm)
}

/// Resonant counterdiabatic Hamiltonian for a phase-modulated drive.
pub fn complex_sa_hamiltonian(drive: &ComplexDrive) -> Result<HamiltonianSample> {
    let half_d = generalized_detuning(drive)?;
    let p = 0.5 * drive.omega_p();
    let s = 0.5 * drive.omega_s();
    let (s21, s32) = match drive.geometry {
        Geometry::Ladder => (s.conj(), s),
        Geometry::Lambda => (s, s.conj()),
    };
    let zero = re(0.0);
    #[rustfmt::skip]
    let matrix = Matrix3::new(
        zero,        p.conj(), I * half_d.conj(),
        p,           zero,     s21,
        -I * half_d, s32,      zero,
    );
    Ok(HamiltonianSample { t: drive.t, matrix })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticityMargin {
    /// `|theta_dot| / min_pm |Delta_p +- sqrt(Delta_p^2 + Omega_0^2)| / 2`; adiabatic when << 1.
    pub local_ratio: f64,
    /// Area parameter `Omega_peak * tau`; adiabatic when >> 1.
    pub global: f64,
}

pub fn adiabaticity_margin(
    frame: &AdiabaticFrame,
    params: &DriveParams,
) -> Result<AdiabaticityMargin> {
    let root = frame.delta_p.hypot(frame.omega_0);
    let gap = 0.5
        * (frame.delta_p - root)
            .abs()
            .min((frame.delta_p + root).abs());
    if gap == 0.0 {
        return Err(Error::DegenerateDrive { t: frame.t });
    }
    Ok(AdiabaticityMargin {
        local_ratio: frame.theta_dot.abs() / gap,
        global: params.omega_peak() * params.tau(),
    })
}

/// Equal two-photon Rabi frequencies `Omega_1 = Omega_2 = sqrt(2 Delta_1 Omega_d)`
/// whose effective coupling `Omega_1 Omega_2 / (4 Delta_1)` equals `Omega_d / 2`.
pub fn two_photon_mapping(omega_d: f64, delta_1: f64) -> Result<(f64, f64)> {
    if !(omega_d >= 0.0) {
        return Err(Error::invalid(
            "omega_d",
            format!("must be >= 0, got {omega_d}"),
        ));
    }
    if !(delta_1 > 0.0) {
        return Err(Error::invalid(
            "delta_1",
            format!("must be > 0, got {delta_1}"),
        ));
    }
    let omega = (2.0 * delta_1 * omega_d).sqrt();
    Ok((omega, omega))
}
