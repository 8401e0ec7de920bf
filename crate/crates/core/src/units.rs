//! Internal units: ħ = k_B = 1 with every frequency measured in a reference
//! angular frequency ω_ref. Conversions to SI happen only at I/O boundaries.

use crate::error::{invalid, Result};
use crate::real::{c, Real};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Unit system anchored at a reference angular frequency (rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Units<T: Real> {
    reference_frequency: T,
}

impl<T: Real> Units<T> {
    pub fn new(reference_frequency: T) -> Result<Self> {
        if !(reference_frequency > T::zero()) || !reference_frequency.is_finite() {
            return invalid("reference frequency must be positive and finite");
        }
        Ok(Self {
            reference_frequency,
        })
    }

    pub fn reference_frequency(&self) -> T {
        self.reference_frequency
    }

    /// Angular frequency in rad/s.
    pub fn frequency_to_si(&self, w: T) -> T {
        w * self.reference_frequency
    }

    pub fn frequency_from_si(&self, w: T) -> T {
        w / self.reference_frequency
    }

    /// Energy in joules.
    pub fn energy_to_si(&self, e: T) -> T {
        e * (c::<T>(HBAR) * self.reference_frequency)
    }

    pub fn energy_from_si(&self, e: T) -> T {
        e / (c::<T>(HBAR) * self.reference_frequency)
    }

    /// Temperature in kelvin.
    pub fn temperature_to_si(&self, t: T) -> T {
        t * (c::<T>(HBAR / K_B) * self.reference_frequency)
    }

    pub fn temperature_from_si(&self, t: T) -> T {
        t / (c::<T>(HBAR / K_B) * self.reference_frequency)
    }

    /// Heat current in watts.
    pub fn heat_current_to_si(&self, i: T) -> T {
        i * (c::<T>(HBAR) * self.reference_frequency * self.reference_frequency)
    }

    pub fn heat_current_from_si(&self, i: T) -> T {
        i / (c::<T>(HBAR) * self.reference_frequency * self.reference_frequency)
    }

    /// Thermal conductance in W/K.
    pub fn conductance_to_si(&self, k: T) -> T {
        k * (c::<T>(K_B) * self.reference_frequency)
    }

    pub fn conductance_from_si(&self, k: T) -> T {
        k / (c::<T>(K_B) * self.reference_frequency)
    }
}
