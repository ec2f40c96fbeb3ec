//! `grosc`: evaluate mechanical oscillators as probes of gravitational
//! effects on quantum superpositions.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gr_oscillators::catalog::{Catalog, Material, RModel};
use gr_oscillators::feasibility::{
    evaluate_all, min_q_curve, summarize, sweep, Axis, CoherenceConvention, FeasibilityConfig, SweepGrid,
    SweepOptions,
};
use gr_oscillators::report::{
    lattice_table, min_q_table, render_feasibility, sphere_table, Format, RenderSpec, DEFAULT_COLUMNS,
};
use gr_oscillators::self_energy::{
    displaced_spheres, lattice_superposition, IntegrationConfig, NucleusLattice, SelfEnergyError, Strategy,
};
use gr_oscillators::physics::nucleus_model;

#[derive(Parser, Debug)]
#[command(name = "grosc", version, about = "Feasibility of probing gravitational time-scales with mechanical oscillators")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Catalog file, or `builtin`.
    #[arg(long, global = true, env = "GROSC_CATALOG", default_value = "builtin")]
    catalog: String,
    /// Characteristic size: nucleus | zpf | fixed:METRES.
    #[arg(long, global = true, env = "GROSC_R_MODEL", default_value = "nucleus", value_parser = parse_r_model)]
    r_model: RModel,
    /// Minimum t_coh/t_GR for a favorable verdict.
    #[arg(long, global = true, env = "GROSC_THRESHOLD", default_value_t = 1.0, value_parser = parse_positive)]
    threshold: f64,
    /// Coherence time used when n ≤ 1: cat1 | ground.
    #[arg(long, global = true, env = "GROSC_CONVENTION", default_value = "cat1")]
    convention: CoherenceConvention,
    /// Output format: md | csv | json.
    #[arg(long, global = true, env = "GROSC_FORMAT", default_value = "md", value_parser = parse_format)]
    format: Format,
    /// Comma-separated feasibility columns.
    #[arg(long, global = true, env = "GROSC_COLUMNS")]
    columns: Option<String>,
    /// Worker threads (0: all cores). Never changes results.
    #[arg(long, global = true, env = "GROSC_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Seed for Monte-Carlo integration.
    #[arg(long, global = true, env = "GROSC_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate selected catalog entries.
    Evaluate {
        /// Entry id (repeatable).
        #[arg(long = "id", required_unless_present = "all", conflicts_with = "all")]
        ids: Vec<String>,
        /// Evaluate every entry.
        #[arg(long)]
        all: bool,
    },
    /// Comparison table of the whole catalog.
    Table,
    /// Feasibility over a parameter grid. Axes are VALUE or START:STOP:POINTS[:lin|log].
    Sweep {
        /// Frequency axis, Hz.
        #[arg(long, default_value = "1e5:1e9:9")]
        f_m: Axis,
        /// Effective-mass axis, kg.
        #[arg(long, default_value = "1e-15:1e-9:7")]
        mass: Axis,
        /// Quality-factor axis.
        #[arg(long, default_value = "1e4:1e10:7")]
        q: Axis,
        /// Bath-temperature axis, K.
        #[arg(long, default_value = "0.01")]
        t_bath: Axis,
        /// Si | Al | SiN | other:A
        #[arg(long, default_value = "Si")]
        material: Material,
        /// Largest accepted grid.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gravitational self-energy difference of a displaced mass distribution.
    Selfenergy {
        #[arg(long, default_value = "sphere", value_parser = ["sphere", "lattice"])]
        geometry: String,
        /// Mass number setting the nucleus mass and radius.
        #[arg(long, default_value_t = 28)]
        nucleus: u32,
        /// Sphere mass in kg (default: one nucleus).
        #[arg(long)]
        mass: Option<f64>,
        /// Sphere radius in m (default: nucleus radius).
        #[arg(long)]
        radius: Option<f64>,
        /// Displacement: metres, `inf`, or a multiple of the radius such as `10R`.
        #[arg(long, default_value = "10R")]
        dx: String,
        /// Lattice sites per edge.
        #[arg(long, default_value_t = 10)]
        side: usize,
        /// Lattice spacing in m (default: bulk Si spacing).
        #[arg(long)]
        spacing: Option<f64>,
        /// Monte-Carlo samples (grid: cell-pair budget).
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// plain | stratified | grid
        #[arg(long, default_value = "plain")]
        strategy: Strategy,
        /// Largest accepted relative error.
        #[arg(long, default_value_t = 0.01)]
        target: f64,
    },
    /// Minimum quality factor over frequency and temperature.
    MinQ {
        /// Frequency axis, Hz.
        #[arg(long, default_value = "1e5:1e10:6")]
        f_m: Axis,
        /// Bath-temperature axis, K.
        #[arg(long, default_value = "0.01")]
        t_bath: Axis,
        /// Si | Al | SiN | other:A
        #[arg(long, default_value = "Si")]
        material: Material,
    },
}

fn parse_r_model(s: &str) -> Result<RModel, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: gr_oscillators::report::RenderError| e.to_string())
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number > 0, got '{s}'")),
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(e: impl std::fmt::Display) -> Failure {
        Failure::Data(e.to_string())
    }
}

fn render_spec(g: &Global) -> Result<RenderSpec, Failure> {
    match &g.columns {
        None => RenderSpec::new(g.format, DEFAULT_COLUMNS).map_err(|e| Failure::Usage(e.to_string())),
        Some(list) => RenderSpec::parse(g.format, list).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn load_catalog(g: &Global) -> Result<Catalog, Failure> {
    if g.catalog == "builtin" {
        Ok(Catalog::builtin())
    } else {
        Catalog::load(&g.catalog).map_err(Failure::data)
    }
}

fn feasibility_config(g: &Global) -> FeasibilityConfig {
    FeasibilityConfig {
        r_model: g.r_model,
        threshold: g.threshold,
        convention: g.convention,
    }
}

fn parse_dx(s: &str, radius: f64) -> Result<f64, Failure> {
    let bad = || Failure::Usage(format!("bad --dx '{s}' (metres, inf, or a multiple like 10R)"));
    if s == "inf" {
        return Ok(f64::INFINITY);
    }
    let v = match s.strip_suffix('R') {
        Some(k) => k.parse::<f64>().map_err(|_| bad())? * radius,
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn self_energy_failure(e: SelfEnergyError) -> Failure {
    match e {
        SelfEnergyError::NonConvergence { estimate, target } => Failure::Data(format!(
            "integration did not reach relative error {target}: partial estimate {:e} J ± {:e} J after {} samples",
            estimate.value, estimate.std_error, estimate.samples
        )),
        SelfEnergyError::InvalidConfig(m) => Failure::Usage(m),
        other => Failure::Data(other.to_string()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match cli.command {
        Command::Evaluate { ids, all } => {
            let spec = render_spec(g)?;
            let catalog = load_catalog(g)?;
            let entries = if all {
                catalog.entries().to_vec()
            } else {
                ids.iter()
                    .map(|id| {
                        catalog
                            .get(id)
                            .cloned()
                            .ok_or_else(|| Failure::Data(format!("unknown entry id '{id}'")))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            };
            let reports = evaluate_all(&entries, &feasibility_config(g));
            print!("{}", render_feasibility(&reports, &spec).map_err(Failure::data)?);
        }
        Command::Table => {
            let spec = render_spec(g)?;
            let catalog = load_catalog(g)?;
            let reports = evaluate_all(catalog.entries(), &feasibility_config(g));
            print!("{}", render_feasibility(&reports, &spec).map_err(Failure::data)?);
        }
        Command::Sweep {
            f_m,
            mass,
            q,
            t_bath,
            material,
            cap,
            out,
        } => {
            let spec = render_spec(g)?;
            let grid = SweepGrid {
                f_m,
                mass,
                q,
                t_bath,
                material,
            };
            let opts = SweepOptions { cap, workers: g.workers };
            let rows = sweep(&grid, &feasibility_config(g), &opts).map_err(Failure::data)?;
            let text = render_feasibility(&rows, &spec).map_err(Failure::data)?;
            let s = summarize(&rows);
            let summary = format!(
                "{} points, {} favorable, {} marginal, fraction favorable {:.4}",
                s.points, s.favorable, s.marginal, s.favorable_fraction
            );
            match out {
                Some(path) => {
                    fs::write(&path, text)
                        .map_err(|e| Failure::Data(format!("writing {}: {e}", path.display())))?;
                    println!("{summary}");
                }
                None => {
                    print!("{text}");
                    eprintln!("{summary}");
                }
            }
        }
        Command::Selfenergy {
            geometry,
            nucleus,
            mass,
            radius,
            dx,
            side,
            spacing,
            samples,
            strategy,
            target,
        } => {
            let cfg = IntegrationConfig {
                sample_count: samples,
                seed: g.seed,
                strategy,
                target_rel_error: target,
                workers: g.workers,
            };
            cfg.validate().map_err(self_energy_failure)?;
            let nucleus = nucleus_model(nucleus).map_err(|e| Failure::Usage(e.to_string()))?;
            let table = if geometry == "sphere" {
                let m = mass.unwrap_or_else(|| nucleus.mass());
                let r = radius.unwrap_or_else(|| nucleus.radius());
                let d = parse_dx(&dx, r)?;
                sphere_table(&displaced_spheres(m, r, d, &cfg).map_err(self_energy_failure)?)
            } else {
                let spacing = spacing.unwrap_or_else(|| Material::Si.lattice_spacing().expect("Si has a lattice"));
                let d = parse_dx(&dx, nucleus.radius())?;
                if !d.is_finite() {
                    return Err(Failure::Usage("lattice displacement must be finite".into()));
                }
                let lattice =
                    NucleusLattice::cubic(side, spacing, nucleus.mass_number()).map_err(self_energy_failure)?;
                lattice_table(&lattice_superposition(&lattice, [d, 0.0, 0.0], &cfg).map_err(self_energy_failure)?)
            };
            print!("{}", table.render(g.format).map_err(Failure::data)?);
        }
        Command::MinQ { f_m, t_bath, material } => {
            let points = min_q_curve(&f_m, &t_bath, material).map_err(Failure::data)?;
            print!("{}", min_q_table(&points).render(g.format).map_err(Failure::data)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
