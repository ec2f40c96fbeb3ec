//! Evaluates mechanical oscillators as candidates for observing
//! general-relativistic effects in massive quantum superpositions.
//!
//! The pipeline runs from an oscillator's frequency, mass, quality factor and
//! bath temperature to its zero-point motion, the cat-state size needed to
//! separate the branches by more than a nuclear diameter, the thermal
//! coherence time of that cat, and the gravitational self-energy time-scale
//! it has to beat.

pub mod catalog;
pub mod constants;
pub mod feasibility;
pub mod physics;
pub mod report;
pub mod self_energy;
pub mod units;

pub use catalog::{Catalog, CatalogEntry, Material, RModel};
pub use constants::{constants, PhysicalConstants};
pub use feasibility::{evaluate, FeasibilityConfig, FeasibilityReport, Verdict};
