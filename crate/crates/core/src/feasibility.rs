//! Feasibility pipeline: x_zpf → cat size n → n_th → t_coh → t_GR → verdict,
//! the combined separation/coherence window, minimum quality factors and
//! dense parameter sweeps.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::{characteristic_size, CatalogEntry, Material, RModel};
use crate::constants::constants;
use crate::physics::{
    cat_coherence_time, cat_separation, gr_time_coefficient, thermal_occupation, zero_point_fluctuation,
    NucleusModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Unfavorable,
    Marginal,
    Favorable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Favorable => "favorable",
            Verdict::Marginal => "marginal",
            Verdict::Unfavorable => "unfavorable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which coherence time is reported when the ground state or a one-phonon
/// cat already separates the branches enough.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoherenceConvention {
    /// Use the cat of size 1 for both n = 0 and n = 1 (comparison-table
    /// convention).
    #[default]
    CatOfSizeOne,
    /// For n = 0 use the ground-state coherence time 1/(γ_m n_th), unbounded
    /// when n_th = 0.
    GroundState,
}

impl FromStr for CoherenceConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cat1" => Ok(CoherenceConvention::CatOfSizeOne),
            "ground" => Ok(CoherenceConvention::GroundState),
            other => Err(format!("unknown coherence convention '{other}' (cat1|ground)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityConfig {
    pub r_model: RModel,
    /// Minimum t_coh / t_GR for a favorable verdict.
    pub threshold: f64,
    pub convention: CoherenceConvention,
}

impl Default for FeasibilityConfig {
    fn default() -> Self {
        FeasibilityConfig {
            r_model: RModel::Nucleus,
            threshold: 1.0,
            convention: CoherenceConvention::CatOfSizeOne,
        }
    }
}

impl FeasibilityConfig {
    pub fn with_r_model(mut self, r_model: RModel) -> Self {
        self.r_model = r_model;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }
}

/// Cat state needed to separate the branches by at least twice the
/// characteristic size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionPlan {
    pub n: u64,
    /// Branch separation achieved: 2√n x_zpf, or x_zpf for the ground state.
    pub dx: f64,
    pub r_model: RModel,
    pub characteristic_size: f64,
    pub required_dx: f64,
    pub x_zpf: f64,
}

impl SuperpositionPlan {
    /// `0/1` when the ground state or a one-phonon state suffices.
    pub fn display_n(&self) -> String {
        display_phonons(self.n)
    }
}

pub fn display_phonons(n: u64) -> String {
    if n <= 1 {
        "0/1".to_string()
    } else {
        n.to_string()
    }
}

fn separation(n: u64, x_zpf: f64) -> f64 {
    if n == 0 {
        x_zpf
    } else {
        cat_separation(n, x_zpf)
    }
}

pub fn required_cat_size(entry: &CatalogEntry, model: RModel) -> SuperpositionPlan {
    let x_zpf = zero_point_fluctuation(&entry.mode());
    let size = characteristic_size(entry, model);
    let required_dx = 2.0 * size;
    let n = if x_zpf >= required_dx {
        0
    } else {
        // saturating float-to-int conversion
        let mut n = ((size / x_zpf).powi(2).ceil() as u64).max(1);
        while n < u64::MAX && cat_separation(n, x_zpf) < required_dx {
            n += 1;
        }
        while n > 1 && cat_separation(n - 1, x_zpf) >= required_dx {
            n -= 1;
        }
        n
    };
    SuperpositionPlan {
        n,
        dx: separation(n, x_zpf),
        r_model: model,
        characteristic_size: size,
        required_dx,
        x_zpf,
    }
}

/// Which closed form produced a set of margins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// n_th ≈ 0: `f_m K_sep ≲ n/m ≪ (Q/f_m) K_0`.
    ZeroTemperature,
    /// k_B T ≫ ħω_m: `f_m K_sep ≲ (n + ¼)/m ≪ Q K_T`.
    HighTemperature,
    /// Exact Bose-Einstein occupation and cat coherence time.
    Exact,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::ZeroTemperature => "zero-temperature",
            Regime::HighTemperature => "high-temperature",
            Regime::Exact => "exact",
        }
    }
}

/// Both sides of the combined separation/coherence condition, written in
/// terms of (phonon number)/mass in kg⁻¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityMargins {
    pub regime: Regime,
    /// The middle term, n/m or (n + ¼)/m.
    pub n_term: f64,
    /// Separation condition: n_term must reach this.
    pub lower_bound: f64,
    /// Coherence condition: n_term must stay below this.
    pub upper_bound: f64,
    /// n_term / lower_bound (> 1: branches separated enough).
    pub lower_margin: f64,
    /// upper_bound / n_term (> 1: coherence outlasts t_GR).
    pub upper_margin: f64,
    /// lower_bound < upper_bound: some state size satisfies both.
    pub window_exists: bool,
}

/// Separation coefficient 4πR²/ħ (s·kg⁻¹): (Δx)² ≥ (2R)² ⇔ n/m ≥ f_m · this.
pub fn separation_coefficient(size: f64) -> f64 {
    4.0 * PI * size * size / constants().hbar
}

/// Zero-temperature coherence coefficient 1/(4πC) (Hz·kg⁻¹) with
/// C = t_GR · m: t_coh ≥ t_GR ⇔ n/m ≤ (Q/f_m) · this.
pub fn zero_temperature_coefficient(nucleus: &NucleusModel, size: f64) -> f64 {
    1.0 / (4.0 * PI * gr_time_coefficient(nucleus, size))
}

/// High-temperature coherence coefficient ħ/(4 k_B T C) (kg⁻¹):
/// t_coh ≥ t_GR ⇔ (n + ¼)/m ≤ Q · this.
pub fn high_temperature_coefficient(nucleus: &NucleusModel, size: f64, temperature: f64) -> f64 {
    let k = constants();
    k.hbar / (4.0 * k.k_b * temperature * gr_time_coefficient(nucleus, size))
}

/// Occupation below which the zero-temperature form is used.
pub const COLD_OCCUPATION: f64 = 0.1;
/// Occupation above which the high-temperature form is used.
pub const HOT_OCCUPATION: f64 = 10.0;

/// Margins of the combined condition for a state of `n` phonons, choosing
/// the regime from the thermal occupation.
pub fn inequality_margins(entry: &CatalogEntry, n: u64, model: RModel) -> InequalityMargins {
    let n_th = thermal_occupation(&entry.mode());
    let regime = if n_th < COLD_OCCUPATION {
        Regime::ZeroTemperature
    } else if n_th > HOT_OCCUPATION {
        Regime::HighTemperature
    } else {
        Regime::Exact
    };
    inequality_margins_in(entry, n, model, regime)
}

/// As [`inequality_margins`] with the regime forced.
pub fn inequality_margins_in(entry: &CatalogEntry, n: u64, model: RModel, regime: Regime) -> InequalityMargins {
    let mode = entry.mode();
    let nucleus = entry.nucleus();
    let size = characteristic_size(entry, model);
    let c = gr_time_coefficient(&nucleus, size);
    let lower_bound = entry.f_m * separation_coefficient(size);
    let (n_term, upper_bound) = match regime {
        Regime::ZeroTemperature => (
            n as f64 / entry.mass,
            entry.q / entry.f_m * zero_temperature_coefficient(&nucleus, size),
        ),
        Regime::HighTemperature => (
            (n as f64 + 0.25) / entry.mass,
            entry.q * high_temperature_coefficient(&nucleus, size, entry.t_bath),
        ),
        Regime::Exact => {
            let n_th = thermal_occupation(&mode);
            if n == 0 {
                // Δx² = 4 x_zpf² · ¼ and t_coh = 1/(γ n_th)
                let upper = if n_th == 0.0 {
                    f64::INFINITY
                } else {
                    0.25 * entry.q / (2.0 * PI * entry.f_m * n_th * c)
                };
                (0.25 / entry.mass, upper)
            } else {
                (
                    n as f64 / entry.mass,
                    entry.q / (4.0 * PI * entry.f_m * c * (2.0 * n_th + 1.0)),
                )
            }
        }
    };
    InequalityMargins {
        regime,
        n_term,
        lower_bound,
        upper_bound,
        lower_margin: n_term / lower_bound,
        upper_margin: upper_bound / n_term,
        window_exists: lower_bound < upper_bound,
    }
}

/// Smallest Q for which a cat state exists that both separates the branches
/// by 2a and outlives t_GR, at frequency `f_m` and temperature `t`. The mass
/// cancels:
///
/// ```text
/// Q_min = 16π² f_m² a² C (2 n_th + 1) / ħ,   2 n_th + 1 = coth(ħω/2k_BT)
/// ```
pub fn min_quality_factor(f_m: f64, t: f64, nucleus: &NucleusModel) -> f64 {
    min_quality_factor_for_size(f_m, t, nucleus, nucleus.radius())
}

pub fn min_quality_factor_for_size(f_m: f64, t: f64, nucleus: &NucleusModel, size: f64) -> f64 {
    let k = constants();
    let occupancy_factor = if t == 0.0 {
        1.0
    } else {
        let x = k.hbar * 2.0 * PI * f_m / (2.0 * k.k_b * t);
        1.0 / x.tanh()
    };
    16.0 * PI * PI * f_m * f_m * size * size * gr_time_coefficient(nucleus, size) * occupancy_factor / k.hbar
}

/// One point of a minimum-Q curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinQPoint {
    pub f_m: f64,
    pub t_bath: f64,
    pub n_th: f64,
    pub q_min: f64,
}

/// Minimum Q over a frequency × temperature grid (frequency slowest).
pub fn min_q_curve(f_m: &Axis, t_bath: &Axis, material: Material) -> Result<Vec<MinQPoint>, SweepError> {
    f_m.check("f_m")?;
    t_bath.check("t_bath")?;
    let nucleus = material.nucleus();
    let k = constants();
    Ok(f_m
        .values()
        .iter()
        .flat_map(|&f| t_bath.values().iter().map(move |&t| (f, t)))
        .map(|(f, t)| MinQPoint {
            f_m: f,
            t_bath: t,
            n_th: 1.0 / (k.hbar * 2.0 * PI * f / (k.k_b * t)).exp_m1(),
            q_min: min_quality_factor(f, t, &nucleus),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub id: String,
    pub label: String,
    pub f_m: f64,
    pub mass: f64,
    pub q: f64,
    pub t_bath: f64,
    pub material: Material,
    pub r_model: RModel,
    pub x_zpf: f64,
    /// Characteristic size R (the nucleus radius a under the default model).
    pub size: f64,
    pub n: u64,
    pub dx: f64,
    pub required_dx: f64,
    pub n_th: f64,
    /// May be infinite (ground state with n_th = 0).
    pub t_coh: f64,
    pub t_gr: f64,
    pub ratio: f64,
    pub verdict: Verdict,
    pub margins: InequalityMargins,
}

impl FeasibilityReport {
    pub fn display_n(&self) -> String {
        display_phonons(self.n)
    }
}

pub fn verdict(ratio: f64, separated: bool, threshold: f64) -> Verdict {
    if ratio >= threshold && separated {
        Verdict::Favorable
    } else if ratio >= threshold / 10.0 && ratio < threshold {
        Verdict::Marginal
    } else {
        Verdict::Unfavorable
    }
}

pub fn evaluate(entry: &CatalogEntry, cfg: &FeasibilityConfig) -> FeasibilityReport {
    let mode = entry.mode();
    let plan = required_cat_size(entry, cfg.r_model);
    let n_th = thermal_occupation(&mode);
    let t_coh = match (plan.n, cfg.convention) {
        (0, CoherenceConvention::GroundState) => {
            if n_th == 0.0 {
                f64::INFINITY
            } else {
                1.0 / (mode.damping_rate() * n_th)
            }
        }
        (n, _) => cat_coherence_time(n.max(1), &mode).expect("n >= 1"),
    };
    let t_gr = gr_time_coefficient(&entry.nucleus(), plan.characteristic_size) / entry.mass;
    let ratio = t_coh / t_gr;
    FeasibilityReport {
        id: entry.id.clone(),
        label: entry.label.clone(),
        f_m: entry.f_m,
        mass: entry.mass,
        q: entry.q,
        t_bath: entry.t_bath,
        material: entry.material,
        r_model: cfg.r_model,
        x_zpf: plan.x_zpf,
        size: plan.characteristic_size,
        n: plan.n,
        dx: plan.dx,
        required_dx: plan.required_dx,
        n_th,
        t_coh,
        t_gr,
        ratio,
        verdict: verdict(ratio, plan.dx >= plan.required_dx, cfg.threshold),
        margins: inequality_margins(entry, plan.n, cfg.r_model),
    }
}

/// Evaluates every entry, preserving order.
pub fn evaluate_all(entries: &[CatalogEntry], cfg: &FeasibilityConfig) -> Vec<FeasibilityReport> {
    entries.iter().map(|e| evaluate(e, cfg)).collect()
}

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("axis {axis}: {message}")]
    Axis { axis: String, message: String },
    #[error("grid has {points} points, above the cap of {cap}")]
    TooLarge { points: u128, cap: usize },
    #[error("worker pool: {0}")]
    WorkerPool(String),
}

/// One sweep axis: strictly positive, strictly increasing values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    values: Vec<f64>,
}

impl Axis {
    pub fn single(value: f64) -> Axis {
        Axis { values: vec![value] }
    }

    pub fn linear(start: f64, stop: f64, points: usize) -> Axis {
        let values = (0..points)
            .map(|i| {
                if points == 1 {
                    start
                } else {
                    start + (stop - start) * i as f64 / (points - 1) as f64
                }
            })
            .collect();
        Axis { values }
    }

    pub fn log(start: f64, stop: f64, points: usize) -> Axis {
        let (a, b) = (start.ln(), stop.ln());
        let values = (0..points)
            .map(|i| {
                if i == 0 {
                    start
                } else if i == points - 1 {
                    stop
                } else {
                    (a + (b - a) * i as f64 / (points - 1) as f64).exp()
                }
            })
            .collect();
        Axis { values }
    }

    pub fn from_values(values: Vec<f64>) -> Axis {
        Axis { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check(&self, axis: &str) -> Result<(), SweepError> {
        let err = |message: &str| SweepError::Axis {
            axis: axis.to_string(),
            message: message.to_string(),
        };
        if self.values.is_empty() {
            return Err(err("no points"));
        }
        if !self.values.iter().all(|v| *v > 0.0 && v.is_finite()) {
            return Err(err("values must be finite and > 0"));
        }
        if !self.values.windows(2).all(|w| w[1] > w[0]) {
            return Err(err("values must be strictly increasing"));
        }
        Ok(())
    }
}

/// `VALUE` or `START:STOP:POINTS[:lin|log]` (default log).
impl FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number '{t}' in axis '{s}'"));
        match parts.as_slice() {
            [v] => Ok(Axis::single(num(v)?)),
            [a, b, n] | [a, b, n, _] => {
                let points: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad point count '{n}' in axis '{s}'"))?;
                if points == 0 {
                    return Err(format!("axis '{s}' needs at least one point"));
                }
                let scale = parts.get(3).map(|t| t.trim()).unwrap_or("log");
                match scale {
                    "log" => Ok(Axis::log(num(a)?, num(b)?, points)),
                    "lin" | "linear" => Ok(Axis::linear(num(a)?, num(b)?, points)),
                    other => Err(format!("unknown axis scale '{other}' (lin|log)")),
                }
            }
            _ => Err(format!("axis '{s}' must be VALUE or START:STOP:POINTS[:lin|log]")),
        }
    }
}

/// Grid over frequency, mass, quality factor and bath temperature for one
/// material. Rows are ordered lexicographically (f_m slowest, T fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub f_m: Axis,
    pub mass: Axis,
    pub q: Axis,
    pub t_bath: Axis,
    pub material: Material,
}

impl SweepGrid {
    pub fn points(&self) -> u128 {
        [&self.f_m, &self.mass, &self.q, &self.t_bath]
            .iter()
            .map(|a| a.len() as u128)
            .product()
    }

    fn entry_at(&self, index: usize) -> CatalogEntry {
        let (nm, nq, nt) = (self.mass.len(), self.q.len(), self.t_bath.len());
        let it = index % nt;
        let iq = (index / nt) % nq;
        let im = (index / (nt * nq)) % nm;
        let i_f = index / (nt * nq * nm);
        CatalogEntry::new(
            format!("sweep-{index}"),
            String::new(),
            self.f_m.values[i_f],
            self.mass.values[im],
            self.q.values[iq],
            self.material,
        )
        .with_bath(self.t_bath.values[it])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Largest number of grid points accepted.
    pub cap: usize,
    /// Worker threads; 0 uses the global pool. Never affects results.
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            cap: 1_000_000,
            workers: 0,
        }
    }
}

pub fn sweep(
    grid: &SweepGrid,
    cfg: &FeasibilityConfig,
    opts: &SweepOptions,
) -> Result<Vec<FeasibilityReport>, SweepError> {
    grid.f_m.check("f_m")?;
    grid.mass.check("mass")?;
    grid.q.check("q")?;
    grid.t_bath.check("t_bath")?;
    let points = grid.points();
    if points > opts.cap as u128 {
        return Err(SweepError::TooLarge { points, cap: opts.cap });
    }
    let job = || {
        (0..points as usize)
            .into_par_iter()
            .map(|i| evaluate(&grid.entry_at(i), cfg))
            .collect::<Vec<_>>()
    };
    if opts.workers == 0 {
        Ok(job())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| SweepError::WorkerPool(e.to_string()))?;
        Ok(pool.install(job))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub points: usize,
    pub favorable: usize,
    pub marginal: usize,
    pub favorable_fraction: f64,
}

pub fn summarize(rows: &[FeasibilityReport]) -> SweepSummary {
    let favorable = rows.iter().filter(|r| r.verdict == Verdict::Favorable).count();
    let marginal = rows.iter().filter(|r| r.verdict == Verdict::Marginal).count();
    SweepSummary {
        points: rows.len(),
        favorable,
        marginal,
        favorable_fraction: if rows.is_empty() {
            0.0
        } else {
            favorable as f64 / rows.len() as f64
        },
    }
}
