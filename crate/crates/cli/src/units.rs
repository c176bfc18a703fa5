//! Unit suffixes accepted in run configurations. Values are converted to SI.

use std::f64::consts::PI;

use lateral_casimir::constants::{ev_to_rad_per_s, ATOMIC_MASS_UNIT as AMU, AU_POLARIZABILITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Text,
    Count,
    Dimensionless,
    Length,
    /// Angular frequency; `Hz` means ω/2π.
    Frequency,
    Polarizability,
    Mass,
    Wavevector,
}

impl Dim {
    pub fn si_unit(self) -> &'static str {
        match self {
            Dim::Text | Dim::Count | Dim::Dimensionless => "",
            Dim::Length => "m",
            Dim::Frequency => "rad/s",
            Dim::Polarizability => "C.m2/V",
            Dim::Mass => "kg",
            Dim::Wavevector => "1/m",
        }
    }

    pub fn is_physical(self) -> bool {
        !matches!(self, Dim::Text | Dim::Count | Dim::Dimensionless)
    }

    fn examples(self) -> &'static str {
        match self {
            Dim::Length => "m, mm, um, nm, pm",
            Dim::Frequency => "rad/s, Hz, kHz, MHz, GHz, THz, eV, meV",
            Dim::Polarizability => "au, C.m2/V",
            Dim::Mass => "kg, u",
            Dim::Wavevector => "1/m, 1/mm, 1/um, 1/nm",
            _ => "none",
        }
    }
}

/// Returns a function mapping a value in `unit` to SI.
pub fn converter(dim: Dim, unit: &str) -> Result<Box<dyn Fn(f64) -> f64>, String> {
    let scale = |f: f64| -> Box<dyn Fn(f64) -> f64> { Box::new(move |v| v * f) };
    let length = |u: &str| match u {
        "m" => Some(1.0),
        "cm" => Some(1e-2),
        "mm" => Some(1e-3),
        "um" | "µm" | "μm" => Some(1e-6),
        "nm" => Some(1e-9),
        "pm" => Some(1e-12),
        _ => None,
    };
    let found: Option<Box<dyn Fn(f64) -> f64>> = match dim {
        Dim::Length => length(unit).map(scale),
        Dim::Wavevector => unit.strip_prefix("1/").and_then(length).map(|l| scale(1.0 / l)),
        Dim::Frequency => match unit {
            "rad/s" => Some(scale(1.0)),
            "Hz" => Some(scale(2.0 * PI)),
            "kHz" => Some(scale(2.0 * PI * 1e3)),
            "MHz" => Some(scale(2.0 * PI * 1e6)),
            "GHz" => Some(scale(2.0 * PI * 1e9)),
            "THz" => Some(scale(2.0 * PI * 1e12)),
            "eV" => Some(Box::new(ev_to_rad_per_s)),
            "meV" => Some(Box::new(|v| ev_to_rad_per_s(v * 1e-3))),
            _ => None,
        },
        Dim::Polarizability => match unit {
            "au" => Some(scale(AU_POLARIZABILITY)),
            "C.m2/V" => Some(scale(1.0)),
            _ => None,
        },
        Dim::Mass => match unit {
            "kg" => Some(scale(1.0)),
            "u" | "amu" => Some(scale(AMU)),
            _ => None,
        },
        Dim::Text | Dim::Count | Dim::Dimensionless => None,
    };
    found.ok_or_else(|| format!("unit `{unit}` is not valid here (expected one of: {})", dim.examples()))
}
