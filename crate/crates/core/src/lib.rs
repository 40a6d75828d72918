//! Three-level STIRAP and superadiabatic STIRAP simulation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod metrics;
pub mod ode;
pub mod protocols;
pub mod quadrature;
pub mod sweeps;

pub use error::{Error, Result};
pub use protocols::{Detuning, DriveParams, Family, ProtocolSpec, PulseSample, Pulses};
