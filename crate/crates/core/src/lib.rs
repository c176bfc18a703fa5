//! Lateral Casimir-Polder interaction between a ground-state atom and a
//! corrugated surface.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: modified Bessel functions, adaptive quadrature, numerical
//!   differentiation and monotone interpolation.
//! * [`response`]: atomic polarizability α(iξ) and surface permittivity
//!   ε(iξ) on the imaginary frequency axis, including Kramers-Kronig
//!   evaluation of tabulated absorption data.
//! * [`plane`]: the flat-surface potential U⁽⁰⁾(z).
//! * [`kernel`]: the first-order corrugation response g(k, z), its
//!   perfect-reflector closed forms and the ratio ρ = g(k, z)/g(0, z).
//! * [`lateral`]: corrugation profiles, their cosine series and the lateral
//!   potential and force.
//! * [`trap`]: dipole-oscillation frequency shifts of a trapped atom or
//!   condensate.
//! * [`scenarios`]: grid sweeps producing plot-ready tables.
//!
//! All lengths, energies and forces are SI. Polarizabilities carry C·m²/V so
//! that α/(4πε₀) is a volume.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod constants;
mod error;
pub mod exec;
pub mod kernel;
pub mod lateral;
pub mod numerics;
pub mod plane;
pub mod response;
pub mod scenarios;
pub mod trap;

pub use error::{Error, Result};
pub use exec::Execution;
pub use kernel::{KernelKind, NonspecularProvider, Polarization, ResponseKernel};
pub use lateral::{CorrugationProfile, LateralPotentialField, ProfileShape};
pub use numerics::QuadratureSpec;
pub use plane::{PlanePotentialResult, PlaneRegime};
pub use response::{AtomResponse, MaterialResponse, OpticalDataTable};
pub use trap::{ShiftResult, TrapConfiguration};
