use std::f64::consts::PI;

use crate::catalog::Material;
use crate::physics::{nucleus_model, NucleusModel};

use super::SelfEnergyError;

pub type Vec3 = [f64; 3];

pub(crate) fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Support of a uniform-density building block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Body {
    Ball { center: Vec3, radius: f64 },
    Cuboid { min: Vec3, max: Vec3 },
}

impl Body {
    pub fn volume(&self) -> f64 {
        match *self {
            Body::Ball { radius, .. } => 4.0 / 3.0 * PI * radius.powi(3),
            Body::Cuboid { min, max } => (0..3).map(|i| max[i] - min[i]).product(),
        }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        match *self {
            Body::Ball { center, radius } => norm(sub(p, center)) <= radius,
            Body::Cuboid { min, max } => (0..3).all(|i| p[i] >= min[i] && p[i] <= max[i]),
        }
    }

    pub fn bounding_sphere(&self) -> (Vec3, f64) {
        match *self {
            Body::Ball { center, radius } => (center, radius),
            Body::Cuboid { min, max } => {
                let c = [
                    0.5 * (min[0] + max[0]),
                    0.5 * (min[1] + max[1]),
                    0.5 * (min[2] + max[2]),
                ];
                (c, 0.5 * norm(sub(max, min)))
            }
        }
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        match *self {
            Body::Ball { center, radius } => (
                [center[0] - radius, center[1] - radius, center[2] - radius],
                [center[0] + radius, center[1] + radius, center[2] + radius],
            ),
            Body::Cuboid { min, max } => (min, max),
        }
    }

    /// Volume-preserving map from the unit cube onto the body, so uniform
    /// (or stratified) points in the cube give uniform points in the body.
    pub fn map_unit_cube(&self, u: Vec3) -> Vec3 {
        match *self {
            Body::Ball { center, radius } => {
                let r = radius * u[0].cbrt();
                let cos_t = 2.0 * u[1] - 1.0;
                let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
                let phi = 2.0 * PI * u[2];
                [
                    center[0] + r * sin_t * phi.cos(),
                    center[1] + r * sin_t * phi.sin(),
                    center[2] + r * cos_t,
                ]
            }
            Body::Cuboid { min, max } => [
                min[0] + u[0] * (max[0] - min[0]),
                min[1] + u[1] * (max[1] - min[1]),
                min[2] + u[2] * (max[2] - min[2]),
            ],
        }
    }

    pub fn translated(&self, d: Vec3) -> Body {
        match *self {
            Body::Ball { center, radius } => Body::Ball {
                center: add(center, d),
                radius,
            },
            Body::Cuboid { min, max } => Body::Cuboid {
                min: add(min, d),
                max: add(max, d),
            },
        }
    }
}

/// One uniform body carrying `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub body: Body,
    pub mass: f64,
}

impl Component {
    pub fn density(&self) -> f64 {
        self.mass / self.body.volume()
    }
}

/// Cubic lattice of nuclei, each a uniform ball of radius a(A).
#[derive(Debug, Clone, PartialEq)]
pub struct NucleusLattice {
    sites: Vec<Vec3>,
    nucleus: NucleusModel,
    displacement: Vec3,
    near_field_cutoff: f64,
}

/// Default number of neighbour shells integrated explicitly in a cubic
/// lattice (6 + 12 + 8 neighbours).
pub const DEFAULT_SHELLS: u32 = 3;

impl NucleusLattice {
    /// Arbitrary site list. Pairs of nuclei whose centres are further apart
    /// than `near_field_cutoff` are treated as point masses.
    pub fn new(
        sites: Vec<Vec3>,
        mass_number: u32,
        displacement: Vec3,
        near_field_cutoff: f64,
    ) -> Result<Self, SelfEnergyError> {
        let nucleus = nucleus_model(mass_number)
            .map_err(|e| SelfEnergyError::Unsupported(e.to_string()))?;
        Ok(NucleusLattice {
            sites,
            nucleus,
            displacement,
            near_field_cutoff,
        })
    }

    /// `side³` sites on a simple cubic lattice with the given spacing,
    /// centred on the origin. The first [`DEFAULT_SHELLS`] neighbour shells
    /// are integrated explicitly.
    pub fn cubic(side: usize, spacing: f64, mass_number: u32) -> Result<Self, SelfEnergyError> {
        if side == 0 || spacing.is_nan() || spacing <= 0.0 {
            return Err(SelfEnergyError::Unsupported(format!(
                "cubic lattice needs side >= 1 and spacing > 0 (got {side}, {spacing})"
            )));
        }
        let offset = 0.5 * (side as f64 - 1.0) * spacing;
        let mut sites = Vec::with_capacity(side.pow(3));
        for i in 0..side {
            for j in 0..side {
                for k in 0..side {
                    sites.push([
                        i as f64 * spacing - offset,
                        j as f64 * spacing - offset,
                        k as f64 * spacing - offset,
                    ]);
                }
            }
        }
        let cutoff = shell_radius(DEFAULT_SHELLS) * spacing * (1.0 + 1e-9);
        Self::new(sites, mass_number, [0.0; 3], cutoff)
    }

    /// Cubic lattice whose spacing reproduces the bulk nuclear number density
    /// of `material`.
    pub fn bulk(material: &Material, side: usize) -> Result<Self, SelfEnergyError> {
        let spacing = material.lattice_spacing().ok_or_else(|| {
            SelfEnergyError::Unsupported(format!("no bulk density known for {material}"))
        })?;
        Self::cubic(side, spacing, material.mass_number())
    }

    pub fn with_displacement(mut self, displacement: Vec3) -> Self {
        self.displacement = displacement;
        self
    }

    pub fn with_near_field_cutoff(mut self, cutoff: f64) -> Self {
        self.near_field_cutoff = cutoff;
        self
    }

    pub fn sites(&self) -> &[Vec3] {
        &self.sites
    }

    pub fn nucleus(&self) -> &NucleusModel {
        &self.nucleus
    }

    pub fn displacement(&self) -> Vec3 {
        self.displacement
    }

    pub fn near_field_cutoff(&self) -> f64 {
        self.near_field_cutoff
    }
}

/// Distance of the `shell`-th neighbour shell of a unit simple cubic
/// lattice (1, √2, √3, 2, ...).
fn shell_radius(shell: u32) -> f64 {
    let mut norms: Vec<i64> = Vec::new();
    let r = shell as i64 + 1;
    for i in -r..=r {
        for j in -r..=r {
            for k in -r..=r {
                let n = i * i + j * j + k * k;
                if n > 0 && !norms.contains(&n) {
                    norms.push(n);
                }
            }
        }
    }
    norms.sort_unstable();
    (norms[(shell.max(1) - 1) as usize] as f64).sqrt()
}

/// A finite-support mass density.
#[derive(Debug, Clone, PartialEq)]
pub enum MassDistribution {
    UniformSphere { center: Vec3, radius: f64, mass: f64 },
    UniformSlab { min: Vec3, max: Vec3, mass: f64 },
    NucleusLattice(NucleusLattice),
}

impl MassDistribution {
    pub fn sphere(center: Vec3, radius: f64, mass: f64) -> Self {
        MassDistribution::UniformSphere {
            center,
            radius,
            mass,
        }
    }

    pub fn slab(min: Vec3, max: Vec3, mass: f64) -> Self {
        MassDistribution::UniformSlab { min, max, mass }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            MassDistribution::UniformSphere { mass, .. } | MassDistribution::UniformSlab { mass, .. } => *mass,
            MassDistribution::NucleusLattice(l) => l.sites.len() as f64 * l.nucleus.mass(),
        }
    }

    pub fn translated(&self, d: Vec3) -> Self {
        match self {
            MassDistribution::UniformSphere {
                center,
                radius,
                mass,
            } => MassDistribution::sphere(add(*center, d), *radius, *mass),
            MassDistribution::UniformSlab { min, max, mass } => {
                MassDistribution::slab(add(*min, d), add(*max, d), *mass)
            }
            MassDistribution::NucleusLattice(l) => {
                let disp = add(l.displacement, d);
                MassDistribution::NucleusLattice(l.clone().with_displacement(disp))
            }
        }
    }

    /// Rejects degenerate inputs the integrator cannot handle.
    pub fn validate(&self) -> Result<(), SelfEnergyError> {
        let bad = |msg: String| Err(SelfEnergyError::Unsupported(msg));
        match self {
            MassDistribution::UniformSphere { radius, mass, .. } => {
                if !(*radius > 0.0 && radius.is_finite() && *mass > 0.0 && mass.is_finite()) {
                    return bad(format!("sphere needs radius > 0 and mass > 0 (got {radius}, {mass})"));
                }
            }
            MassDistribution::UniformSlab { min, max, mass } => {
                if !(0..3).all(|i| max[i] > min[i]) || !(*mass > 0.0 && mass.is_finite()) {
                    return bad("slab needs positive extents and mass".to_string());
                }
            }
            MassDistribution::NucleusLattice(l) => {
                if l.sites.is_empty() {
                    return bad("lattice has no sites".to_string());
                }
            }
        }
        Ok(())
    }

    /// Uniform building blocks, in a fixed order.
    pub fn components(&self) -> Vec<Component> {
        match self {
            MassDistribution::UniformSphere {
                center,
                radius,
                mass,
            } => vec![Component {
                body: Body::Ball {
                    center: *center,
                    radius: *radius,
                },
                mass: *mass,
            }],
            MassDistribution::UniformSlab { min, max, mass } => vec![Component {
                body: Body::Cuboid { min: *min, max: *max },
                mass: *mass,
            }],
            MassDistribution::NucleusLattice(l) => l
                .sites
                .iter()
                .map(|s| Component {
                    body: Body::Ball {
                        center: add(*s, l.displacement),
                        radius: l.nucleus.radius(),
                    },
                    mass: l.nucleus.mass(),
                })
                .collect(),
        }
    }

    /// Centre distance beyond which two components are treated as point
    /// masses (only ever applied to disjoint balls).
    pub fn near_field_cutoff(&self) -> f64 {
        match self {
            MassDistribution::NucleusLattice(l) => l.near_field_cutoff,
            _ => f64::INFINITY,
        }
    }

    /// Mass density at `p`, kg/m³.
    pub fn density_at(&self, p: Vec3) -> f64 {
        self.components()
            .iter()
            .filter(|c| c.body.contains(p))
            .map(Component::density)
            .sum()
    }
}
