//! Closed-form relations for time dilation, gravitational self-energy,
//! zero-point motion and thermal decoherence of mechanical cat states.
//!
//! Everything here is a pure function of its arguments. SI units throughout.

use std::f64::consts::PI;

use thiserror::Error;

use crate::constants::constants;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhysicsError {
    #[error("{name} must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("inside the Schwarzschild radius: 2mG/(rc^2) = {0} >= 1")]
    InsideHorizon(f64),
    #[error(
        "separation too small for point-mass approximation: dx = {dx} m < 2R = {min} m"
    )]
    SeparationTooSmall { dx: f64, min: f64 },
    #[error("cat state of size 0 has no cat coherence time")]
    EmptyCat,
}

fn require(name: &'static str, value: f64, ok: bool, requirement: &'static str) -> Result<(), PhysicsError> {
    if ok {
        Ok(())
    } else {
        Err(PhysicsError::InvalidParameter {
            name,
            requirement,
            value,
        })
    }
}

/// A uniform ball of mass `m` and radius `radius`, superposed over two
/// locations a distance `dx` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSuperposition {
    m: f64,
    radius: f64,
    dx: f64,
}

impl BallSuperposition {
    pub fn new(m: f64, radius: f64, dx: f64) -> Result<Self, PhysicsError> {
        require("m", m, m >= 0.0 && m.is_finite(), "finite and >= 0")?;
        require("R", radius, radius > 0.0 && radius.is_finite(), "finite and > 0")?;
        require("dx", dx, dx >= 0.0, ">= 0")?;
        Ok(BallSuperposition { m, radius, dx })
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn separation(&self) -> f64 {
        self.dx
    }

    /// `m < 1e-3 · R c² / G`, i.e. far from strong-field gravity.
    pub fn weak_field_ok(&self) -> bool {
        let k = constants();
        self.m < 1e-3 * self.radius * k.c * k.c / k.g
    }
}

/// Mass number and the derived radius and mass of a nucleus modelled as a
/// uniform ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NucleusModel {
    mass_number: u32,
    radius: f64,
    mass: f64,
}

impl NucleusModel {
    pub fn mass_number(&self) -> u32 {
        self.mass_number
    }

    /// a = A^(1/3) R0.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// m_a = A m_u.
    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// Builds the nucleus model for mass number `mass_number` (must be >= 1).
pub fn nucleus_model(mass_number: u32) -> Result<NucleusModel, PhysicsError> {
    require("A", mass_number as f64, mass_number >= 1, ">= 1")?;
    let k = constants();
    let a = mass_number as f64;
    Ok(NucleusModel {
        mass_number,
        radius: a.cbrt() * k.r0,
        mass: a * k.m_u,
    })
}

/// A single mechanical mode coupled to a thermal bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorMode {
    f_m: f64,
    m: f64,
    q: f64,
    temperature: f64,
}

impl OscillatorMode {
    pub fn new(f_m: f64, m: f64, q: f64, temperature: f64) -> Result<Self, PhysicsError> {
        require("f_m", f_m, f_m > 0.0 && f_m.is_finite(), "finite and > 0")?;
        require("m", m, m > 0.0 && m.is_finite(), "finite and > 0")?;
        require("Q", q, q > 0.0 && q.is_finite(), "finite and > 0")?;
        require("T", temperature, temperature >= 0.0 && temperature.is_finite(), "finite and >= 0")?;
        Ok(OscillatorMode {
            f_m,
            m,
            q,
            temperature,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.f_m
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.f_m
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn quality_factor(&self) -> f64 {
        self.q
    }

    /// γ_m = ω_m / Q.
    pub fn damping_rate(&self) -> f64 {
        self.omega() / self.q
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }
}

/// Schwarzschild clock rate at distance `r` from mass `m`: the exact factor
/// √(1 − 2mG/rc²) and its weak-field linearisation 1 − mG/rc².
pub fn time_dilation_factor(m: f64, r: f64) -> Result<(f64, f64), PhysicsError> {
    require("m", m, m >= 0.0, ">= 0")?;
    require("r", r, r > 0.0, "> 0")?;
    let k = constants();
    let x = m * k.g / (r * k.c * k.c);
    if 2.0 * x >= 1.0 {
        return Err(PhysicsError::InsideHorizon(2.0 * x));
    }
    Ok(((1.0 - 2.0 * x).sqrt(), 1.0 - x))
}

/// Proper-time ambiguity Δt = t_far G m / (R c²) between the two branches.
/// Needs `dx >= 2R`.
pub fn time_uncertainty(ball: &BallSuperposition, t_far: f64) -> Result<f64, PhysicsError> {
    if ball.dx < 2.0 * ball.radius {
        return Err(PhysicsError::SeparationTooSmall {
            dx: ball.dx,
            min: 2.0 * ball.radius,
        });
    }
    let k = constants();
    Ok(t_far * k.g * ball.m / (ball.radius * k.c * k.c))
}

/// Relative phase uncertainty Δθ = Δt · m c² / ħ accumulated after `t_far`.
pub fn phase_uncertainty(ball: &BallSuperposition, t_far: f64) -> Result<f64, PhysicsError> {
    let k = constants();
    Ok(time_uncertainty(ball, t_far)? * ball.m * k.c * k.c / k.hbar)
}

/// t_GR,H = h R / (G m²), the time at which the phase uncertainty reaches 2π.
pub fn heuristic_gr_time(ball: &BallSuperposition) -> Result<f64, PhysicsError> {
    require("m", ball.m, ball.m > 0.0, "> 0")?;
    let k = constants();
    Ok(k.h * ball.radius / (k.g * ball.m * ball.m))
}

/// Self-energy difference of a uniform ball displaced by `dx`:
/// ΔE = 8πG m² (6/(5R) − 1/Δx). `dx` may be `f64::INFINITY`.
pub fn sphere_delta_e(m: f64, radius: f64, dx: f64) -> Result<f64, PhysicsError> {
    require("m", m, m >= 0.0 && m.is_finite(), "finite and >= 0")?;
    require("R", radius, radius > 0.0 && radius.is_finite(), "finite and > 0")?;
    if dx.is_nan() || dx < 2.0 * radius {
        return Err(PhysicsError::SeparationTooSmall {
            dx,
            min: 2.0 * radius,
        });
    }
    let k = constants();
    Ok(8.0 * PI * k.g * m * m * (6.0 / (5.0 * radius) - 1.0 / dx))
}

/// t_GR,P = ħ / ΔE.
pub fn penrose_gr_time(delta_e: f64) -> Result<f64, PhysicsError> {
    require("delta_E", delta_e, delta_e > 0.0, "> 0")?;
    Ok(constants().hbar / delta_e)
}

/// Coefficient C in t_GR = C / m for a body whose mass sits in nuclei of
/// model `nucleus`, each treated as a ball of radius `size`:
/// C = 5ħ·size / (48πG m_a).
pub fn gr_time_coefficient(nucleus: &NucleusModel, size: f64) -> f64 {
    let k = constants();
    5.0 * k.hbar * size / (48.0 * PI * k.g * nucleus.mass)
}

/// GR time-scale of an oscillator of `total_mass` made of `nucleus`:
/// ħ over (m/m_a) copies of the per-nucleus ΔE in the far-separated limit.
pub fn gr_time_nuclei(total_mass: f64, nucleus: &NucleusModel) -> Result<f64, PhysicsError> {
    gr_time_for_size(total_mass, nucleus, nucleus.radius)
}

/// As [`gr_time_nuclei`] with the nucleus radius replaced by `size`.
pub fn gr_time_for_size(total_mass: f64, nucleus: &NucleusModel, size: f64) -> Result<f64, PhysicsError> {
    require("m", total_mass, total_mass > 0.0, "> 0")?;
    require("R", size, size > 0.0, "> 0")?;
    Ok(gr_time_coefficient(nucleus, size) / total_mass)
}

/// x_zpf = √(ħ / (2 ω_m m)).
pub fn zero_point_fluctuation(mode: &OscillatorMode) -> f64 {
    (constants().hbar / (2.0 * mode.omega() * mode.m)).sqrt()
}

/// Bose-Einstein occupation 1/(exp(ħω/k_BT) − 1); zero at T = 0.
pub fn thermal_occupation(mode: &OscillatorMode) -> f64 {
    if mode.temperature == 0.0 {
        return 0.0;
    }
    let k = constants();
    let x = k.hbar * mode.omega() / (k.k_b * mode.temperature);
    1.0 / x.exp_m1()
}

/// Thermal decoherence time of a cat of `n` phonons:
/// t_coh = 1 / (2 (2 n_th + 1) n γ_m).
pub fn cat_coherence_time(n: u64, mode: &OscillatorMode) -> Result<f64, PhysicsError> {
    if n == 0 {
        return Err(PhysicsError::EmptyCat);
    }
    let n_th = thermal_occupation(mode);
    Ok(1.0 / (2.0 * (2.0 * n_th + 1.0) * n as f64 * mode.damping_rate()))
}

/// Separation of the two branches of an `n`-phonon cat: Δx = 2√n x_zpf.
pub fn cat_separation(n: u64, x_zpf: f64) -> f64 {
    2.0 * (n as f64).sqrt() * x_zpf
}
