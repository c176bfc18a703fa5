//! Special functions and quadrature primitives.

mod bessel;
mod diff;
mod interp;
mod quadrature;

pub use bessel::{bessel_k, bessel_k01};
pub use diff::{differentiate, try_differentiate, Derivative};
pub use interp::MonotoneCubic;
pub(crate) use quadrature::gauss_legendre8;
pub use quadrature::{
    adaptive, adaptive_with_magnitude, integrate_2d_disk, integrate_finite,
    integrate_semi_infinite, try_integrate_2d_disk, Domain, Estimate, QuadratureSpec,
};
