//! Optical response of the atom and of the bulk surface on the imaginary
//! frequency axis.

mod atom;
pub mod io;
mod material;
mod optical;

pub use atom::{alpha_at, alpha_integral, AtomKind, AtomResponse, TabulatedPolarizability};
pub use material::{
    epsilon_at, ImaginaryAxisTable, LorentzOscillator, MaterialKind, MaterialResponse,
    DEFAULT_KK_GRID,
};
pub use optical::{
    kramers_kronig, HighFrequencyExtrapolation, KkValue, LowFrequencyExtrapolation,
    OpticalDataTable,
};
