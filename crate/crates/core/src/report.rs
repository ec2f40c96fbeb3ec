//! Table renderers for feasibility, self-energy and minimum-Q results.
//!
//! Human output (`md`) uses SI prefixes with two significant digits; machine
//! output (`csv`, `json`) carries raw SI floats in shortest round-trip form,
//! with unbounded values spelled `inf`. Column headers name their unit.

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::feasibility::{display_phonons, FeasibilityReport, MinQPoint, Verdict};
use crate::self_energy::{LatticeSuperposition, SphereSuperposition};
use crate::units::{format_si, format_sig2};

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("unknown column '{0}' (known: {1})")]
    UnknownColumn(String, String),
    #[error("no columns selected")]
    NoColumns,
    #[error("unknown format '{0}' (md|csv|json)")]
    UnknownFormat(String),
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = RenderError;
    fn from_str(s: &str) -> Result<Self, RenderError> {
        match s {
            "md" | "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(RenderError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Markdown => "md",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// A single table value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    /// A float in SI base units; `unit` is empty for dimensionless values.
    Number(f64),
    /// A phonon number, shown as `0/1` for n ≤ 1 in human output.
    Phonons(u64),
    Count(u64),
    Flag(bool),
    Verdict(Verdict),
    Missing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Column {
    pub name: &'static str,
    /// SI base unit, empty when dimensionless.
    pub unit: &'static str,
    pub title: &'static str,
}

impl Column {
    const fn new(name: &'static str, unit: &'static str, title: &'static str) -> Column {
        Column { name, unit, title }
    }

    /// Machine header: `name_unit`, e.g. `t_coh_s`.
    pub fn machine_header(&self) -> String {
        if self.unit.is_empty() {
            self.name.to_string()
        } else {
            format!("{}_{}", self.name, self.unit)
        }
    }

    pub fn human_header(&self) -> String {
        if self.unit.is_empty() {
            self.title.to_string()
        } else {
            format!("{} ({})", self.title, self.unit)
        }
    }
}

/// Columns available for feasibility tables, in canonical order.
pub const FEASIBILITY_COLUMNS: &[Column] = &[
    Column::new("id", "", "id"),
    Column::new("label", "", "system"),
    Column::new("material", "", "material"),
    Column::new("f_m", "Hz", "f_m"),
    Column::new("mass", "kg", "m"),
    Column::new("q", "", "Q"),
    Column::new("t_bath", "K", "T"),
    Column::new("r_model", "", "R model"),
    Column::new("x_zpf", "m", "x_zpf"),
    Column::new("size", "m", "R"),
    Column::new("n", "", "n"),
    Column::new("dx", "m", "Δx"),
    Column::new("required_dx", "m", "Δx needed"),
    Column::new("n_th", "", "n_th"),
    Column::new("t_coh", "s", "t_coh"),
    Column::new("t_gr", "s", "t_GR"),
    Column::new("ratio", "", "t_coh/t_GR"),
    Column::new("verdict", "", "verdict"),
    Column::new("regime", "", "regime"),
    Column::new("lower_margin", "", "separation margin"),
    Column::new("upper_margin", "", "coherence margin"),
    Column::new("window", "", "window"),
];

/// Default selection for `evaluate` and `table`.
pub const DEFAULT_COLUMNS: &[&str] = &[
    "id", "f_m", "mass", "q", "x_zpf", "n", "n_th", "t_coh", "t_gr", "ratio", "verdict",
];

/// Output format plus an ordered column selection.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub format: Format,
    columns: Vec<Column>,
}

impl RenderSpec {
    pub fn new(format: Format, names: &[&str]) -> Result<RenderSpec, RenderError> {
        if names.is_empty() {
            return Err(RenderError::NoColumns);
        }
        let columns = names
            .iter()
            .map(|n| {
                FEASIBILITY_COLUMNS
                    .iter()
                    .find(|c| c.name == n.trim())
                    .copied()
                    .ok_or_else(|| {
                        let known: Vec<_> = FEASIBILITY_COLUMNS.iter().map(|c| c.name).collect();
                        RenderError::UnknownColumn(n.to_string(), known.join(","))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RenderSpec { format, columns })
    }

    pub fn with_defaults(format: Format) -> RenderSpec {
        RenderSpec::new(format, DEFAULT_COLUMNS).expect("default columns are valid")
    }

    /// Parses a comma-separated column list.
    pub fn parse(format: Format, list: &str) -> Result<RenderSpec, RenderError> {
        let names: Vec<&str> = list.split(',').filter(|s| !s.trim().is_empty()).collect();
        RenderSpec::new(format, &names)
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }
}

fn feasibility_cell(r: &FeasibilityReport, name: &str) -> Cell {
    match name {
        "id" => Cell::Text(r.id.clone()),
        "label" => Cell::Text(r.label.clone()),
        "material" => Cell::Text(r.material.to_string()),
        "f_m" => Cell::Number(r.f_m),
        "mass" => Cell::Number(r.mass),
        "q" => Cell::Number(r.q),
        "t_bath" => Cell::Number(r.t_bath),
        "r_model" => Cell::Text(r.r_model.to_string()),
        "x_zpf" => Cell::Number(r.x_zpf),
        "size" => Cell::Number(r.size),
        "n" => Cell::Phonons(r.n),
        "dx" => Cell::Number(r.dx),
        "required_dx" => Cell::Number(r.required_dx),
        "n_th" => Cell::Number(r.n_th),
        "t_coh" => Cell::Number(r.t_coh),
        "t_gr" => Cell::Number(r.t_gr),
        "ratio" => Cell::Number(r.ratio),
        "verdict" => Cell::Verdict(r.verdict),
        "regime" => Cell::Text(r.margins.regime.as_str().to_string()),
        "lower_margin" => Cell::Number(r.margins.lower_margin),
        "upper_margin" => Cell::Number(r.margins.upper_margin),
        "window" => Cell::Flag(r.margins.window_exists),
        other => unreachable!("column '{other}' validated at parse time"),
    }
}

/// A rendered-agnostic table: columns, rows, and which rows to highlight.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub highlight: Vec<bool>,
}

impl Table {
    pub fn render(&self, format: Format) -> Result<String, RenderError> {
        match format {
            Format::Markdown => Ok(self.markdown()),
            Format::Csv => self.csv(),
            Format::Json => Ok(self.json()),
        }
    }

    fn markdown(&self) -> String {
        let mut out = String::new();
        let headers: Vec<String> = self.columns.iter().map(Column::human_header).collect();
        out.push_str(&format!("| {} |\n", headers.join(" | ")));
        out.push_str(&format!("|{}\n", "---|".repeat(self.columns.len())));
        for (row, &bold) in self.rows.iter().zip(&self.highlight) {
            let cells: Vec<String> = row
                .iter()
                .zip(&self.columns)
                .map(|(cell, col)| {
                    let s = human(cell, col.unit);
                    if bold {
                        format!("**{s}**")
                    } else {
                        s
                    }
                })
                .collect();
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        out
    }

    fn csv(&self) -> Result<String, RenderError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| RenderError::Csv(e.to_string());
        w.write_record(self.columns.iter().map(Column::machine_header))
            .map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(machine)).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| RenderError::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(col, cell)| (col.machine_header(), json_value(cell)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json values serialise");
        s.push('\n');
        s
    }
}

fn human(cell: &Cell, unit: &str) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Number(v) if unit.is_empty() => format_sig2(*v),
        Cell::Number(v) => format_si(*v, unit),
        Cell::Phonons(n) => display_phonons(*n),
        Cell::Count(n) => n.to_string(),
        Cell::Flag(b) => if *b { "yes" } else { "no" }.to_string(),
        Cell::Verdict(v) => v.to_string(),
        Cell::Missing => "–".to_string(),
    }
}

fn machine_number(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:e}")
    }
}

fn machine(cell: &Cell) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Number(v) => machine_number(*v),
        Cell::Phonons(n) | Cell::Count(n) => n.to_string(),
        Cell::Flag(b) => b.to_string(),
        Cell::Verdict(v) => v.to_string(),
        Cell::Missing => String::new(),
    }
}

fn json_value(cell: &Cell) -> Value {
    match cell {
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Number(v) if v.is_finite() => serde_json::Number::from_f64(*v)
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Cell::Number(v) => Value::String(machine_number(*v)),
        Cell::Phonons(n) | Cell::Count(n) => Value::from(*n),
        Cell::Flag(b) => Value::Bool(*b),
        Cell::Verdict(v) => Value::String(v.to_string()),
        Cell::Missing => Value::Null,
    }
}

pub fn feasibility_table(reports: &[FeasibilityReport], spec: &RenderSpec) -> Table {
    Table {
        columns: spec.columns.clone(),
        rows: reports
            .iter()
            .map(|r| spec.columns.iter().map(|c| feasibility_cell(r, c.name)).collect())
            .collect(),
        highlight: reports.iter().map(|r| r.verdict == Verdict::Favorable).collect(),
    }
}

pub fn render_feasibility(reports: &[FeasibilityReport], spec: &RenderSpec) -> Result<String, RenderError> {
    feasibility_table(reports, spec).render(spec.format)
}

const SPHERE_COLUMNS: &[Column] = &[
    Column::new("mass", "kg", "m"),
    Column::new("radius", "m", "R"),
    Column::new("dx", "m", "Δx"),
    Column::new("delta_e", "J", "ΔE"),
    Column::new("delta_e_std_error", "J", "σ(ΔE)"),
    Column::new("delta_e_analytic", "J", "ΔE closed form"),
    Column::new("relative_deviation", "", "deviation"),
    Column::new("t_gr_p", "s", "t_GR,P"),
    Column::new("samples", "", "samples"),
];

fn opt(v: Option<f64>) -> Cell {
    v.map(Cell::Number).unwrap_or(Cell::Missing)
}

pub fn sphere_table(s: &SphereSuperposition) -> Table {
    Table {
        columns: SPHERE_COLUMNS.to_vec(),
        rows: vec![vec![
            Cell::Number(s.mass),
            Cell::Number(s.radius),
            Cell::Number(s.dx),
            Cell::Number(s.numeric.value),
            Cell::Number(s.numeric.std_error),
            opt(s.analytic),
            opt(s.relative_deviation),
            // no finite time when ΔE vanishes
            Cell::Number(s.t_gr_p.unwrap_or(f64::INFINITY)),
            Cell::Count(s.numeric.e11.samples + s.numeric.e22.samples + s.numeric.e12.samples),
        ]],
        highlight: vec![false],
    }
}

const LATTICE_COLUMNS: &[Column] = &[
    Column::new("sites", "", "N"),
    Column::new("displacement", "m", "displacement"),
    Column::new("delta_e", "J", "ΔE"),
    Column::new("delta_e_std_error", "J", "σ(ΔE)"),
    Column::new("single_delta_e", "J", "ΔE one nucleus"),
    Column::new("single_delta_e_analytic", "J", "ΔE one nucleus closed form"),
    Column::new("additivity_ratio", "", "ΔE / (N ΔE₁)"),
    Column::new("far_field_delta", "J", "far-field part"),
    Column::new("t_gr_p", "s", "t_GR,P"),
];

pub fn lattice_table(l: &LatticeSuperposition) -> Table {
    let d = l.displacement;
    Table {
        columns: LATTICE_COLUMNS.to_vec(),
        rows: vec![vec![
            Cell::Count(l.sites as u64),
            Cell::Number((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()),
            Cell::Number(l.lattice.value),
            Cell::Number(l.lattice.std_error),
            Cell::Number(l.single_numeric.value),
            opt(l.single_analytic),
            opt(l.additivity_ratio),
            Cell::Number(l.lattice.far_field_delta),
            Cell::Number(l.t_gr_p.unwrap_or(f64::INFINITY)),
        ]],
        highlight: vec![false],
    }
}

const MIN_Q_COLUMNS: &[Column] = &[
    Column::new("f_m", "Hz", "f_m"),
    Column::new("t_bath", "K", "T"),
    Column::new("n_th", "", "n_th"),
    Column::new("q_min", "", "Q_min"),
];

pub fn min_q_table(points: &[MinQPoint]) -> Table {
    Table {
        columns: MIN_Q_COLUMNS.to_vec(),
        rows: points
            .iter()
            .map(|p| {
                vec![
                    Cell::Number(p.f_m),
                    Cell::Number(p.t_bath),
                    Cell::Number(p.n_th),
                    Cell::Number(p.q_min),
                ]
            })
            .collect(),
        highlight: vec![false; points.len()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::feasibility::{evaluate, FeasibilityConfig};

    fn reports() -> Vec<FeasibilityReport> {
        Catalog::builtin()
            .entries()
            .iter()
            .map(|e| evaluate(e, &FeasibilityConfig::default()))
            .collect()
    }

    #[test]
    fn unknown_columns_rejected() {
        assert!(matches!(
            RenderSpec::parse(Format::Csv, "id,bogus"),
            Err(RenderError::UnknownColumn(name, _)) if name == "bogus"
        ));
        assert_eq!(RenderSpec::parse(Format::Csv, ""), Err(RenderError::NoColumns));
        assert!("xml".parse::<Format>().is_err());
    }

    #[test]
    fn headers_carry_units() {
        let spec = RenderSpec::with_defaults(Format::Csv);
        let csv = render_feasibility(&reports(), &spec).unwrap();
        assert_eq!(
            csv.lines().next().unwrap(),
            "id,f_m_Hz,mass_kg,q,x_zpf_m,n,n_th,t_coh_s,t_gr_s,ratio,verdict"
        );
        let md = render_feasibility(&reports(), &RenderSpec::with_defaults(Format::Markdown)).unwrap();
        assert!(md.starts_with("| id | f_m (Hz) | m (kg) |"));
    }

    #[test]
    fn csv_is_byte_stable_and_raw() {
        let spec = RenderSpec::parse(Format::Csv, "id,f_m,n,verdict").unwrap();
        let a = render_feasibility(&reports(), &spec).unwrap();
        let b = render_feasibility(&reports(), &spec).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\nsoft-clamped-membrane,1e6,2,favorable\n"), "{a}");
        assert_eq!(a.lines().count(), 11);
    }

    #[test]
    fn markdown_bolds_favorable_rows_and_uses_prefixes() {
        let spec = RenderSpec::parse(Format::Markdown, "id,mass,n,verdict").unwrap();
        let md = render_feasibility(&reports(), &spec).unwrap();
        assert!(md.contains("| **soft-clamped-membrane** | **2.0 ng** | **2** | **favorable** |"), "{md}");
        assert!(md.contains("| phononic-beam | 1.0 pg | 0/1 | unfavorable |"), "{md}");
    }

    #[test]
    fn infinity_is_spelled_inf() {
        let mut r = reports().remove(0);
        r.t_coh = f64::INFINITY;
        r.ratio = f64::INFINITY;
        let csv = render_feasibility(&[r.clone()], &RenderSpec::parse(Format::Csv, "t_coh,ratio").unwrap()).unwrap();
        assert_eq!(csv, "t_coh_s,ratio\ninf,inf\n");
        let json = render_feasibility(&[r], &RenderSpec::parse(Format::Json, "t_coh").unwrap()).unwrap();
        assert_eq!(json, "[\n  {\n    \"t_coh_s\": \"inf\"\n  }\n]\n");
    }

    #[test]
    fn json_keeps_column_order() {
        let spec = RenderSpec::parse(Format::Json, "verdict,id,n").unwrap();
        let json = render_feasibility(&reports()[..1], &spec).unwrap();
        let v = json.find("verdict").unwrap();
        let i = json.find("\"id_").or_else(|| json.find("\"id\"")).unwrap();
        assert!(v < i);
        let parsed: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed[0]["id"], "hbar-sapphire");
    }

    #[test]
    fn min_q_golden() {
        let t = min_q_table(&[MinQPoint {
            f_m: 1e5,
            t_bath: 0.01,
            n_th: 1.5,
            q_min: 1.25e6,
        }]);
        assert_eq!(t.render(Format::Csv).unwrap(), "f_m_Hz,t_bath_K,n_th,q_min\n1e5,1e-2,1.5e0,1.25e6\n");
        assert_eq!(
            t.render(Format::Markdown).unwrap(),
            "| f_m (Hz) | T (K) | n_th | Q_min |\n|---|---|---|---|\n| 100 kHz | 10 mK | 1.5e0 | 1.2e6 |\n"
        );
    }
}
