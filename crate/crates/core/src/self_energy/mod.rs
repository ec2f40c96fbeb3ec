//! Numerical gravitational self-energy of arbitrary mass distributions.
//!
//! The interaction energy of two densities is
//!
//! ```text
//! E_ij = 4πG ∫∫ ρ_i(r₁) ρ_j(r₂) / |r₁ − r₂| dr₁ dr₂
//! ```
//!
//! and the self-energy difference of a two-branch superposition is
//! `ΔE = |E_11 + E_22 − 2 E_12|`. Distributions are decomposed into uniform
//! components (balls, cuboids); every component pair is integrated
//! separately and the partial results are combined in a fixed order.
//!
//! Determinism: each unit of work draws from its own ChaCha stream keyed by
//! `(seed, pair index, batch index)`, and partial sums are reduced
//! sequentially in that order, so results are bit-identical for any worker
//! count.

mod distribution;
mod grid;
mod monte_carlo;

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::constants::constants;
use crate::physics::{penrose_gr_time, sphere_delta_e, PhysicsError};

pub use distribution::{Body, Component, MassDistribution, NucleusLattice, Vec3, DEFAULT_SHELLS};
pub use grid::cube_pair_kernel;

use distribution::norm;

#[derive(Debug, Error)]
pub enum SelfEnergyError {
    #[error("invalid integration config: {0}")]
    InvalidConfig(String),
    #[error("unsupported mass distribution: {0}")]
    Unsupported(String),
    #[error(
        "integration did not converge: relative error {:.3e} above target {target:.3e} (estimate {:.6e} J)",
        .estimate.relative_error(), .estimate.value
    )]
    NonConvergence {
        estimate: Box<EnergyEstimate>,
        target: f64,
    },
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error("worker pool: {0}")]
    WorkerPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    PlainMc,
    StratifiedMc,
    Grid,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" | "plain-mc" => Ok(Strategy::PlainMc),
            "stratified" | "stratified-mc" => Ok(Strategy::StratifiedMc),
            "grid" => Ok(Strategy::Grid),
            other => Err(format!("unknown strategy '{other}' (plain|stratified|grid)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    /// Total sample budget per pair-energy evaluation (grid: ~pair-cell count).
    pub sample_count: u64,
    pub seed: u64,
    pub strategy: Strategy,
    /// Largest acceptable `std_error / value`.
    pub target_rel_error: f64,
    /// Worker threads; 0 uses the global rayon pool. Never affects results.
    pub workers: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            sample_count: 1_000_000,
            seed: 0,
            strategy: Strategy::PlainMc,
            target_rel_error: 0.01,
            workers: 0,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<(), SelfEnergyError> {
        if self.sample_count < 1_000 {
            return Err(SelfEnergyError::InvalidConfig(format!(
                "sample_count must be >= 1000, got {}",
                self.sample_count
            )));
        }
        if !(self.target_rel_error > 0.0 && self.target_rel_error < 0.5) {
            return Err(SelfEnergyError::InvalidConfig(format!(
                "target_rel_error must lie in (0, 0.5), got {}",
                self.target_rel_error
            )));
        }
        Ok(())
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T, SelfEnergyError> {
        if self.workers == 0 {
            return Ok(job());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| SelfEnergyError::WorkerPool(e.to_string()))?;
        Ok(pool.install(job))
    }
}

/// Estimate of one interaction energy `E_ij` (joules).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    /// One-sigma statistical error (grid: |E(h) − E(2h)|).
    pub std_error: f64,
    pub samples: u64,
    /// Component pairs integrated numerically.
    pub near_pairs: usize,
    /// Component pairs evaluated as point masses (disjoint balls only).
    pub far_pairs: usize,
    /// Part of `value` contributed by the point-mass pairs.
    pub far_field: f64,
}

impl EnergyEstimate {
    pub fn zero() -> Self {
        EnergyEstimate {
            value: 0.0,
            std_error: 0.0,
            samples: 0,
            near_pairs: 0,
            far_pairs: 0,
            far_field: 0.0,
        }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.std_error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.std_error / self.value.abs()
        }
    }
}

/// Self-energy difference `ΔE = |E_11 + E_22 − 2E_12|` with its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEnergy {
    pub value: f64,
    /// Error bound valid for any correlation between the three estimates
    /// (they share random streams).
    pub std_error: f64,
    pub e11: EnergyEstimate,
    pub e22: EnergyEstimate,
    pub e12: EnergyEstimate,
    /// Contribution of point-mass (far-field) pairs to ΔE.
    pub far_field_delta: f64,
}

/// Smallest per-pair sample count (so every pair has an error estimate).
const MIN_PAIR_SAMPLES: u64 = 16;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Kernel {
    /// Supports are disjoint: sample both points, average 1/|r₁ − r₂|.
    Direct,
    /// Supports may overlap: sample r₂ − r₁ with density ∝ 1/|s| on a ball
    /// of radius `reach` that covers every possible separation.
    Importance { reach: f64 },
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PairTask {
    pub p: Component,
    pub q: Component,
    pub kernel: Kernel,
    pub samples: u64,
}

struct Plan {
    tasks: Vec<PairTask>,
    far_pairs: usize,
    /// Σ m_p m_q / d over point-mass pairs (no 4πG).
    far_sum: f64,
}

fn plan(rho_i: &MassDistribution, rho_j: &MassDistribution, budget: u64) -> Plan {
    let ci = rho_i.components();
    let cj = rho_j.components();
    let cutoff = rho_i.near_field_cutoff().min(rho_j.near_field_cutoff());
    let single = ci.len() == 1 && cj.len() == 1;
    let mut near = Vec::new();
    let mut weights = Vec::new();
    let mut far_pairs = 0;
    let mut far_sum = 0.0;
    for p in &ci {
        let (cp, rp) = p.body.bounding_sphere();
        for q in &cj {
            let (cq, rq) = q.body.bounding_sphere();
            let d = norm(distribution::sub(cp, cq));
            let balls = matches!(p.body, Body::Ball { .. }) && matches!(q.body, Body::Ball { .. });
            if !single && balls && d > rp + rq && d > cutoff {
                far_pairs += 1;
                far_sum += p.mass * q.mass / d;
                continue;
            }
            let kernel = if d < rp + rq {
                Kernel::Importance { reach: d + rp + rq }
            } else {
                Kernel::Direct
            };
            weights.push(p.mass * q.mass / d.max(rp + rq));
            near.push(PairTask {
                p: *p,
                q: *q,
                kernel,
                samples: 0,
            });
        }
    }
    let total: f64 = weights.iter().sum();
    for (task, w) in near.iter_mut().zip(&weights) {
        let share = (budget as f64 * w / total).round() as u64;
        task.samples = share.max(MIN_PAIR_SAMPLES);
    }
    Plan {
        tasks: near,
        far_pairs,
        far_sum,
    }
}

/// Partial result of one pair: mean of the normalised kernel and the
/// variance of that mean.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct PairMoments {
    pub mean: f64,
    pub var_of_mean: f64,
}

/// Interaction energy `E_ij` of two distributions.
pub fn pair_energy(
    rho_i: &MassDistribution,
    rho_j: &MassDistribution,
    cfg: &IntegrationConfig,
) -> Result<EnergyEstimate, SelfEnergyError> {
    let estimate = pair_energy_unchecked(rho_i, rho_j, cfg)?;
    if estimate.relative_error() > cfg.target_rel_error {
        return Err(SelfEnergyError::NonConvergence {
            estimate: Box::new(estimate),
            target: cfg.target_rel_error,
        });
    }
    Ok(estimate)
}

fn pair_energy_unchecked(
    rho_i: &MassDistribution,
    rho_j: &MassDistribution,
    cfg: &IntegrationConfig,
) -> Result<EnergyEstimate, SelfEnergyError> {
    cfg.validate()?;
    rho_i.validate()?;
    rho_j.validate()?;
    let plan = plan(rho_i, rho_j, cfg.sample_count);
    let moments = cfg.run(|| match cfg.strategy {
        Strategy::Grid => plan
            .tasks
            .par_iter()
            .map(grid::integrate_pair)
            .collect::<Vec<_>>(),
        Strategy::PlainMc | Strategy::StratifiedMc => {
            monte_carlo::integrate_pairs(&plan.tasks, cfg.strategy, cfg.seed)
        }
    })?;
    let four_pi_g = 4.0 * PI * constants().g;
    let mut value = 0.0;
    let mut var = 0.0;
    let mut err_abs = 0.0;
    for (task, m) in plan.tasks.iter().zip(&moments) {
        let scale = four_pi_g * task.p.mass * task.q.mass;
        value += scale * m.mean;
        match cfg.strategy {
            // grid discretisation errors are systematic: add linearly
            Strategy::Grid => err_abs += scale * m.var_of_mean.sqrt(),
            _ => var += scale * scale * m.var_of_mean,
        }
    }
    let far_field = four_pi_g * plan.far_sum;
    value += far_field;
    Ok(EnergyEstimate {
        value,
        std_error: var.sqrt() + err_abs,
        samples: plan.tasks.iter().map(|t| t.samples).sum(),
        near_pairs: plan.tasks.len(),
        far_pairs: plan.far_pairs,
        far_field,
    })
}

/// `ΔE = |E_11 + E_22 − 2E_12|` for the two branches of a superposition.
pub fn delta_e(
    rho_1: &MassDistribution,
    rho_2: &MassDistribution,
    cfg: &IntegrationConfig,
) -> Result<DeltaEnergy, SelfEnergyError> {
    let e11 = pair_energy(rho_1, rho_1, cfg)?;
    let e22 = pair_energy(rho_2, rho_2, cfg)?;
    let e12 = pair_energy(rho_1, rho_2, cfg)?;
    Ok(combine(e11, e22, e12))
}

fn combine(e11: EnergyEstimate, e22: EnergyEstimate, e12: EnergyEstimate) -> DeltaEnergy {
    DeltaEnergy {
        value: (e11.value + e22.value - 2.0 * e12.value).abs(),
        std_error: e11.std_error + e22.std_error + 2.0 * e12.std_error,
        far_field_delta: (e11.far_field + e22.far_field - 2.0 * e12.far_field).abs(),
        e11,
        e22,
        e12,
    }
}

/// Numerical and closed-form ΔE for a uniform ball superposed over `dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSuperposition {
    pub mass: f64,
    pub radius: f64,
    pub dx: f64,
    pub numeric: DeltaEnergy,
    /// Closed form, available for `dx >= 2R`.
    pub analytic: Option<f64>,
    pub relative_deviation: Option<f64>,
    /// ħ/ΔE; `None` when ΔE vanishes (unbounded).
    pub t_gr_p: Option<f64>,
}

/// Integrates a uniform ball of `mass` and `radius` against a copy of itself
/// displaced by `dx` along x. `dx = ∞` drops the cross term.
pub fn displaced_spheres(
    mass: f64,
    radius: f64,
    dx: f64,
    cfg: &IntegrationConfig,
) -> Result<SphereSuperposition, SelfEnergyError> {
    if dx.is_nan() || dx < 0.0 {
        return Err(SelfEnergyError::Unsupported(format!("separation must be >= 0, got {dx}")));
    }
    let left = MassDistribution::sphere([0.0; 3], radius, mass);
    let numeric = if dx.is_infinite() {
        let e11 = pair_energy(&left, &left, cfg)?;
        combine(e11.clone(), e11, EnergyEstimate::zero())
    } else {
        let right = left.translated([dx, 0.0, 0.0]);
        delta_e(&left, &right, cfg)?
    };
    let analytic = if dx >= 2.0 * radius {
        Some(sphere_delta_e(mass, radius, dx)?)
    } else {
        None
    };
    let relative_deviation = analytic.map(|a| (numeric.value - a) / a);
    Ok(SphereSuperposition {
        mass,
        radius,
        dx,
        analytic,
        relative_deviation,
        t_gr_p: finite_penrose_time(numeric.value),
        numeric,
    })
}

fn finite_penrose_time(delta_e: f64) -> Option<f64> {
    if delta_e > 0.0 {
        penrose_gr_time(delta_e).ok()
    } else {
        None
    }
}

/// ΔE of a whole lattice displaced rigidly, compared to the sum of
/// independent single-nucleus contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSuperposition {
    pub sites: usize,
    pub displacement: Vec3,
    pub lattice: DeltaEnergy,
    /// Numerical ΔE of one isolated nucleus with the same displacement.
    pub single_numeric: DeltaEnergy,
    /// Closed-form single-nucleus ΔE (needs |displacement| >= 2a).
    pub single_analytic: Option<f64>,
    /// lattice ΔE / (N × single-nucleus closed form).
    pub additivity_ratio: Option<f64>,
    pub t_gr_p: Option<f64>,
}

pub fn lattice_superposition(
    lattice: &NucleusLattice,
    displacement: Vec3,
    cfg: &IntegrationConfig,
) -> Result<LatticeSuperposition, SelfEnergyError> {
    let base = MassDistribution::NucleusLattice(lattice.clone());
    let moved = base.translated(displacement);
    let whole = delta_e(&base, &moved, cfg)?;
    let nucleus = lattice.nucleus();
    let one = MassDistribution::sphere([0.0; 3], nucleus.radius(), nucleus.mass());
    let single = delta_e(&one, &one.translated(displacement), cfg)?;
    let dist = norm(displacement);
    let single_analytic = if dist >= 2.0 * nucleus.radius() {
        Some(sphere_delta_e(nucleus.mass(), nucleus.radius(), dist)?)
    } else {
        None
    };
    let n = lattice.sites().len();
    Ok(LatticeSuperposition {
        sites: n,
        displacement,
        additivity_ratio: single_analytic.map(|s| whole.value / (n as f64 * s)),
        single_analytic,
        t_gr_p: finite_penrose_time(whole.value),
        lattice: whole,
        single_numeric: single,
    })
}
