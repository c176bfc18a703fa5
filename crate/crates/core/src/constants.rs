//! Physical constants (CODATA 2018, SI) and unit conversions.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Elementary charge, C (also J per eV).
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// One atomic unit of polarizability in C·m²/V.
pub const AU_POLARIZABILITY: f64 = 1.648_777_274_36e-41;

/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Angular frequency (rad/s) corresponding to a photon energy in eV.
pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev * ELECTRON_VOLT / HBAR
}

/// Rubidium stand-in parameters for regression runs.
///
/// These are NOT tabulated dynamic polarizability data: the static value is
/// the commonly quoted ground-state polarizability of Rb and the oscillator
/// frequency is the D-line frequency, used as a single-oscillator stand-in.
pub mod rubidium {
    use super::{ATOMIC_MASS_UNIT, AU_POLARIZABILITY, C};

    /// Static polarizability α(0), C·m²/V (318.6 a.u.).
    pub const STATIC_POLARIZABILITY: f64 = 318.6 * AU_POLARIZABILITY;

    /// Single-oscillator frequency ω_A, rad/s (780.24 nm line).
    pub const OSCILLATOR_FREQUENCY: f64 = 2.0 * std::f64::consts::PI * C / 780.241e-9;

    /// Mass of ⁸⁷Rb, kg.
    pub const MASS: f64 = 86.909_180_527 * ATOMIC_MASS_UNIT;
}
