//! Physical constants used throughout the crate.
//!
//! Values are CODATA 2018. The nucleon radius parameter `R0` is the usual
//! empirical 0.9 fm. The rounded atomic mass unit often quoted in
//! back-of-the-envelope estimates (1.7e-27 kg) is kept alongside the CODATA
//! value for display only; computations always use [`PhysicalConstants::m_u`].

use std::f64::consts::PI;

use crate::units::{Dimension, Quantity};

/// Immutable table of the constants needed by the formula pipeline (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Gravitational constant, m³·kg⁻¹·s⁻².
    pub g: f64,
    /// Speed of light, m·s⁻¹.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Planck constant, J·s.
    pub h: f64,
    /// Boltzmann constant, J·K⁻¹.
    pub k_b: f64,
    /// Atomic mass unit, kg.
    pub m_u: f64,
    /// Nucleon radius parameter, m.
    pub r0: f64,
}

/// Rounded atomic mass unit, kg. Display only.
pub const M_U_ROUNDED: f64 = 1.7e-27;

const PLANCK: f64 = 6.626_070_15e-34;

static CONSTANTS: PhysicalConstants = PhysicalConstants {
    g: 6.674_30e-11,
    c: 299_792_458.0,
    hbar: PLANCK / (2.0 * PI),
    h: PLANCK,
    k_b: 1.380_649e-23,
    m_u: 1.660_539_066_60e-27,
    r0: 0.9e-15,
};

/// The canonical constant table.
pub fn constants() -> &'static PhysicalConstants {
    &CONSTANTS
}

impl PhysicalConstants {
    /// The same table with dimensions attached, for dimensional checks.
    pub fn quantities(&self) -> ConstantQuantities {
        let energy = Dimension::ENERGY;
        ConstantQuantities {
            g: Quantity::new(
                self.g,
                Dimension::LENGTH.powi(3) / Dimension::MASS / Dimension::TIME.powi(2),
            ),
            c: Quantity::new(self.c, Dimension::VELOCITY),
            hbar: Quantity::new(self.hbar, energy * Dimension::TIME),
            h: Quantity::new(self.h, energy * Dimension::TIME),
            k_b: Quantity::new(self.k_b, energy / Dimension::TEMPERATURE),
            m_u: Quantity::new(self.m_u, Dimension::MASS),
            r0: Quantity::new(self.r0, Dimension::LENGTH),
        }
    }
}

/// Dimensioned mirror of [`PhysicalConstants`].
#[derive(Debug, Clone, Copy)]
pub struct ConstantQuantities {
    pub g: Quantity,
    pub c: Quantity,
    pub hbar: Quantity,
    pub h: Quantity,
    pub k_b: Quantity,
    pub m_u: Quantity,
    pub r0: Quantity,
}
