//! Steady-state transport through multi-level quantum junctions coupled to
//! bosonic or fermionic reservoirs.
//!
//! Units: ħ = k_B = 1, every frequency, energy and temperature in units of a
//! reference frequency ω_ref (see [`units`]). The numerical core is generic
//! over the floating-point type; the aliases below fix it to `f64`.

pub mod bath;
pub mod currents;
pub mod diagrams;
pub mod error;
pub mod linalg;
pub mod model;
pub mod quad;
pub mod rabi;
pub mod real;
pub mod redfield;
pub mod sign;
pub mod special;
pub mod steady;
pub mod units;

pub use error::{Error, Result};
pub use real::Real;
pub use sign::Sign;

pub type C64 = num_complex::Complex<f64>;
pub type Junction = model::JunctionModel<f64>;
pub type Bath = model::Reservoir<f64>;
pub type Drude = model::SpectralDensity<f64>;
pub type Matrix64 = linalg::RMatrix<f64>;
pub type CMatrix64 = linalg::CMatrix<f64>;
