//! Minimal dimensional bookkeeping and SI-prefix display helpers.
//!
//! [`Quantity`] carries an exponent vector over (length, mass, time,
//! temperature). It is used by the test-suite to check that every formula
//! assembles consistent units; the computational paths work on raw `f64`.

use std::fmt;
use std::ops::{Div, Mul};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dimension {
    pub length: i8,
    pub mass: i8,
    pub time: i8,
    pub temperature: i8,
}

impl Dimension {
    pub const NONE: Dimension = Dimension::new(0, 0, 0, 0);
    pub const LENGTH: Dimension = Dimension::new(1, 0, 0, 0);
    pub const MASS: Dimension = Dimension::new(0, 1, 0, 0);
    pub const TIME: Dimension = Dimension::new(0, 0, 1, 0);
    pub const TEMPERATURE: Dimension = Dimension::new(0, 0, 0, 1);
    pub const VELOCITY: Dimension = Dimension::new(1, 0, -1, 0);
    pub const FREQUENCY: Dimension = Dimension::new(0, 0, -1, 0);
    pub const ENERGY: Dimension = Dimension::new(2, 1, -2, 0);

    pub const fn new(length: i8, mass: i8, time: i8, temperature: i8) -> Self {
        Dimension {
            length,
            mass,
            time,
            temperature,
        }
    }

    pub const fn powi(self, n: i8) -> Self {
        Dimension::new(
            self.length * n,
            self.mass * n,
            self.time * n,
            self.temperature * n,
        )
    }

    fn is_even(self) -> bool {
        self.length % 2 == 0 && self.mass % 2 == 0 && self.time % 2 == 0 && self.temperature % 2 == 0
    }
}

impl Mul for Dimension {
    type Output = Dimension;
    fn mul(self, rhs: Dimension) -> Dimension {
        Dimension::new(
            self.length + rhs.length,
            self.mass + rhs.mass,
            self.time + rhs.time,
            self.temperature + rhs.temperature,
        )
    }
}

impl Div for Dimension {
    type Output = Dimension;
    fn div(self, rhs: Dimension) -> Dimension {
        self * rhs.powi(-1)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Dimension::NONE {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        for (sym, e) in [
            ("m", self.length),
            ("kg", self.mass),
            ("s", self.time),
            ("K", self.temperature),
        ] {
            match e {
                0 => {}
                1 => parts.push(sym.to_string()),
                _ => parts.push(format!("{sym}^{e}")),
            }
        }
        f.write_str(&parts.join("·"))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DimensionError {
    #[error("dimension mismatch: {left} vs {right}")]
    Mismatch { left: Dimension, right: Dimension },
    #[error("square root of odd dimension {0}")]
    OddRoot(Dimension),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dim: Dimension,
}

impl Quantity {
    pub const fn new(value: f64, dim: Dimension) -> Self {
        Quantity { value, dim }
    }

    pub const fn scalar(value: f64) -> Self {
        Quantity::new(value, Dimension::NONE)
    }

    pub fn checked_add(self, rhs: Quantity) -> Result<Quantity, DimensionError> {
        self.same_dim(rhs)?;
        Ok(Quantity::new(self.value + rhs.value, self.dim))
    }

    pub fn checked_sub(self, rhs: Quantity) -> Result<Quantity, DimensionError> {
        self.same_dim(rhs)?;
        Ok(Quantity::new(self.value - rhs.value, self.dim))
    }

    pub fn try_partial_cmp(self, rhs: Quantity) -> Result<Option<std::cmp::Ordering>, DimensionError> {
        self.same_dim(rhs)?;
        Ok(self.value.partial_cmp(&rhs.value))
    }

    pub fn powi(self, n: i8) -> Quantity {
        Quantity::new(self.value.powi(n as i32), self.dim.powi(n))
    }

    pub fn sqrt(self) -> Result<Quantity, DimensionError> {
        if !self.dim.is_even() {
            return Err(DimensionError::OddRoot(self.dim));
        }
        let d = self.dim;
        Ok(Quantity::new(
            self.value.sqrt(),
            Dimension::new(d.length / 2, d.mass / 2, d.time / 2, d.temperature / 2),
        ))
    }

    /// Argument of a transcendental function (exp, ln) must be dimensionless.
    pub fn dimensionless(self) -> Result<f64, DimensionError> {
        self.same_dim(Quantity::scalar(0.0))?;
        Ok(self.value)
    }

    fn same_dim(self, rhs: Quantity) -> Result<(), DimensionError> {
        if self.dim == rhs.dim {
            Ok(())
        } else {
            Err(DimensionError::Mismatch {
                left: self.dim,
                right: rhs.dim,
            })
        }
    }
}

impl Mul for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value * rhs.value, self.dim * rhs.dim)
    }
}

impl Div for Quantity {
    type Output = Quantity;
    fn div(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value / rhs.value, self.dim / rhs.dim)
    }
}

impl Mul<f64> for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: f64) -> Quantity {
        Quantity::new(self.value * rhs, self.dim)
    }
}

impl Mul<Quantity> for f64 {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        rhs * self
    }
}

const PREFIXES: [(i32, &str); 13] = [
    (-24, "y"),
    (-21, "z"),
    (-18, "a"),
    (-15, "f"),
    (-12, "p"),
    (-9, "n"),
    (-6, "µ"),
    (-3, "m"),
    (0, ""),
    (3, "k"),
    (6, "M"),
    (9, "G"),
    (12, "T"),
];

/// Formats `value` (in the base unit `unit`) with an SI prefix and two
/// significant digits, e.g. `format_si(6.3e-6, "s") == "6.3 µs"`.
///
/// Masses are passed in kilograms and rendered on the gram scale.
pub fn format_si(value: f64, unit: &str) -> String {
    if value.is_infinite() {
        return format!("inf {unit}");
    }
    if value == 0.0 || !value.is_finite() {
        return format!("{value} {unit}");
    }
    let (value, unit) = if unit == "kg" { (value * 1e3, "g") } else { (value, unit) };
    let rounded: f64 = format!("{:.1e}", value).parse().unwrap_or(value);
    let exp = rounded.abs().log10().floor() as i32;
    let eng = exp.div_euclid(3) * 3;
    // beyond the prefix table, and for long times, plain scientific reads better
    if eng < PREFIXES[0].0 || eng > PREFIXES[PREFIXES.len() - 1].0 || (unit == "s" && eng > 0) {
        return format!("{} {unit}", format_sig2(value));
    }
    let prefix = PREFIXES
        .iter()
        .find(|(e, _)| *e == eng)
        .map(|(_, p)| *p)
        .unwrap_or("");
    let mantissa = rounded / 10f64.powi(eng);
    let digits_before = (mantissa.abs().log10().floor() as i32 + 1).max(1);
    let decimals = (2 - digits_before).max(0) as usize;
    format!("{:.*} {}{}", decimals, mantissa, prefix, unit)
}

/// Two significant digits in plain scientific notation, no unit.
pub fn format_sig2(value: f64) -> String {
    if value.is_infinite() {
        return "inf".to_string();
    }
    format!("{:.1e}", value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_adds_exponents() {
        let energy = Quantity::new(2.0, Dimension::ENERGY);
        let time = Quantity::new(3.0, Dimension::TIME);
        let action = energy * time;
        assert_eq!(action.dim, Dimension::new(2, 1, -1, 0));
        assert_eq!(action.value, 6.0);
    }

    #[test]
    fn addition_requires_same_dimension() {
        let l = Quantity::new(1.0, Dimension::LENGTH);
        let t = Quantity::new(1.0, Dimension::TIME);
        assert!(l.checked_add(l).is_ok());
        assert!(matches!(l.checked_add(t), Err(DimensionError::Mismatch { .. })));
        assert!(l.try_partial_cmp(t).is_err());
    }

    #[test]
    fn sqrt_halves_even_exponents() {
        let area = Quantity::new(4.0, Dimension::LENGTH.powi(2));
        assert_eq!(area.sqrt().unwrap(), Quantity::new(2.0, Dimension::LENGTH));
        assert!(Quantity::new(4.0, Dimension::LENGTH).sqrt().is_err());
    }

    #[test]
    fn si_formatting() {
        assert_eq!(format_si(6.3e-6, "s"), "6.3 µs");
        assert_eq!(format_si(2.73e-15, "m"), "2.7 fm");
        assert_eq!(format_si(5e-13, "kg"), "500 pg");
        assert_eq!(format_si(5e-10, "kg"), "500 ng");
        assert_eq!(format_si(0.0954, "s"), "95 ms");
        assert_eq!(format_si(9.96e-4, "s"), "1.0 ms");
        assert_eq!(format_si(1e7, "Hz"), "10 MHz");
        assert_eq!(format_si(f64::INFINITY, "s"), "inf s");
        assert_eq!(format_si(9.32e-46, "J"), "9.3e-46 J");
        assert_eq!(format_si(3.08, "s"), "3.1 s");
        assert_eq!(format_si(1.13e11, "s"), "1.1e11 s");
    }
}
