//! Oscillator catalog: entries, materials, characteristic-size models and the
//! line-oriented catalog file format (see `docs/catalog-format.md`).

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::constants::constants;
use crate::physics::{nucleus_model, zero_point_fluctuation, NucleusModel, OscillatorMode};

/// Bath temperature assumed when an entry does not set one (dilution
/// refrigerator base temperature), K.
pub const DEFAULT_BATH_TEMPERATURE: f64 = 0.01;

/// First line of every canonical catalog document.
pub const CANONICAL_HEADER: &str = "# gr-oscillators catalog v1";

const BUILTIN: &str = include_str!("../data/builtin_catalog.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Material {
    Si,
    Al,
    /// Silicon nitride, modelled with the silicon nucleus.
    SiN,
    Other(u32),
}

impl Material {
    pub fn mass_number(&self) -> u32 {
        match self {
            Material::Si | Material::SiN => 28,
            Material::Al => 27,
            Material::Other(a) => *a,
        }
    }

    pub fn nucleus(&self) -> NucleusModel {
        nucleus_model(self.mass_number()).expect("material mass numbers are >= 1")
    }

    /// Bulk mass density, kg/m³.
    pub fn bulk_density(&self) -> Option<f64> {
        match self {
            Material::Si => Some(2329.0),
            Material::Al => Some(2700.0),
            Material::SiN => Some(3100.0),
            Material::Other(_) => None,
        }
    }

    /// Spacing of a simple cubic lattice of this material's nuclei with the
    /// bulk density, m.
    pub fn lattice_spacing(&self) -> Option<f64> {
        let rho = self.bulk_density()?;
        Some((self.mass_number() as f64 * constants().m_u / rho).cbrt())
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Material::Si => f.write_str("Si"),
            Material::Al => f.write_str("Al"),
            Material::SiN => f.write_str("SiN"),
            Material::Other(a) => write!(f, "other:{a}"),
        }
    }
}

impl FromStr for Material {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Si" => Ok(Material::Si),
            "Al" => Ok(Material::Al),
            "SiN" => Ok(Material::SiN),
            _ => {
                let a = s
                    .strip_prefix("other:")
                    .ok_or_else(|| format!("unknown material '{s}' (Si|Al|SiN|other:A)"))?;
                match a.parse::<u32>() {
                    Ok(a) if a >= 1 => Ok(Material::Other(a)),
                    _ => Err(format!("mass number in '{s}' must be an integer >= 1")),
                }
            }
        }
    }
}

/// How the characteristic size R of the superposed object is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RModel {
    /// Nuclear radius a = A^(1/3) R0.
    Nucleus,
    /// Ground-state wavepacket extent x_zpf.
    ZpfWavepacket,
    /// A fixed size in metres.
    Fixed(f64),
}

impl RModel {
    pub fn fixed(r: f64) -> Result<Self, String> {
        if r > 0.0 && r.is_finite() {
            Ok(RModel::Fixed(r))
        } else {
            Err(format!("fixed R must be finite and > 0, got {r}"))
        }
    }
}

impl fmt::Display for RModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RModel::Nucleus => f.write_str("nucleus"),
            RModel::ZpfWavepacket => f.write_str("zpf"),
            RModel::Fixed(r) => write!(f, "fixed:{r:e}"),
        }
    }
}

impl FromStr for RModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nucleus" => Ok(RModel::Nucleus),
            "zpf" => Ok(RModel::ZpfWavepacket),
            _ => {
                let v = s
                    .strip_prefix("fixed:")
                    .ok_or_else(|| format!("unknown R model '{s}' (nucleus|zpf|fixed:VALUE)"))?;
                let r: f64 = v.parse().map_err(|_| format!("bad length '{v}' in R model"))?;
                RModel::fixed(r)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub label: String,
    /// Mechanical frequency, Hz.
    pub f_m: f64,
    /// Published (effective) mass, kg.
    pub mass: f64,
    pub q: f64,
    /// Bath temperature, K.
    pub t_bath: f64,
    pub material: Material,
    pub notes: String,
}

impl CatalogEntry {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        f_m: f64,
        mass: f64,
        q: f64,
        material: Material,
    ) -> Self {
        CatalogEntry {
            id: id.into(),
            label: label.into(),
            f_m,
            mass,
            q,
            t_bath: DEFAULT_BATH_TEMPERATURE,
            material,
            notes: String::new(),
        }
    }

    pub fn with_bath(mut self, t_bath: f64) -> Self {
        self.t_bath = t_bath;
        self
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn mode(&self) -> OscillatorMode {
        OscillatorMode::new(self.f_m, self.mass, self.q, self.t_bath)
            .expect("catalog entries are validated on construction")
    }

    pub fn nucleus(&self) -> NucleusModel {
        self.material.nucleus()
    }

    /// Checks the numeric invariants; returns the offending field name.
    pub fn validate(&self) -> Result<(), (&'static str, f64)> {
        for (name, v) in [
            ("f_m_hz", self.f_m),
            ("mass_kg", self.mass),
            ("q_factor", self.q),
            ("t_bath_k", self.t_bath),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err((name, v));
            }
        }
        Ok(())
    }
}

/// Characteristic size R used both for the required separation (2R) and the
/// GR time-scale.
pub fn characteristic_size(entry: &CatalogEntry, model: RModel) -> f64 {
    match model {
        RModel::Nucleus => entry.nucleus().radius(),
        RModel::ZpfWavepacket => zero_point_fluctuation(&entry.mode()),
        RModel::Fixed(r) => r,
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: field `{field}`: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },
    #[error("line {line}: missing required field `{field}`")]
    Missing { line: usize, field: &'static str },
    #[error("line {line}: field `{field}` must be strictly positive and finite, got {value}")]
    NonPositive {
        line: usize,
        field: &'static str,
        value: f64,
    },
    #[error("line {line}: duplicate id `{id}` (first defined on line {first})")]
    DuplicateId { line: usize, id: String, first: usize },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

const REQUIRED: [&str; 6] = ["id", "label", "f_m_hz", "mass_kg", "q_factor", "material"];
const OPTIONAL: [&str; 2] = ["t_bath_k", "notes"];

impl Catalog {
    /// The ten built-in systems (a)–(j).
    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN).expect("built-in catalog is well formed")
    }

    /// The canonical text of the built-in catalog.
    pub fn builtin_source() -> &'static str {
        BUILTIN
    }

    pub fn from_entries(entries: Vec<CatalogEntry>) -> Result<Catalog, CatalogError> {
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if let Err((field, value)) = e.validate() {
                return Err(CatalogError::NonPositive {
                    line: i + 1,
                    field,
                    value,
                });
            }
            if let Some(first) = seen.insert(&e.id, i + 1) {
                return Err(CatalogError::DuplicateId {
                    line: i + 1,
                    id: e.id.clone(),
                    first,
                });
            }
        }
        Ok(Catalog { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Catalog::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut entries = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields = tokenize(trimmed).map_err(|message| CatalogError::Syntax { line, message })?;
            let entry = build_entry(line, fields)?;
            if let Some(&first) = seen.get(&entry.id) {
                return Err(CatalogError::DuplicateId {
                    line,
                    id: entry.id,
                    first,
                });
            }
            seen.insert(entry.id.clone(), line);
            entries.push(entry);
        }
        Ok(Catalog { entries })
    }

    /// Canonical text form: header line then one record per entry, fixed key
    /// order, shortest round-trip floats, quoted strings.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        out.push_str(CANONICAL_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "id={}; label={}; f_m_hz={:e}; mass_kg={:e}; q_factor={:e}; material={}; t_bath_k={:e}; notes={}\n",
                e.id,
                quote(&e.label),
                e.f_m,
                e.mass,
                e.q,
                e.material,
                e.t_bath,
                quote(&e.notes)
            ));
        }
        out
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn tokenize(line: &str) -> Result<Vec<(String, String)>, String> {
    let mut fields = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let mut key = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                key.push(c);
                chars.next();
            } else {
                break;
            }
        }
        if key.is_empty() {
            return Err("expected a field name".to_string());
        }
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        if chars.next() != Some('=') {
            return Err(format!("expected `=` after `{key}`"));
        }
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let mut value = String::new();
        if chars.peek() == Some(&'"') {
            chars.next();
            loop {
                match chars.next() {
                    None => return Err(format!("unterminated string in `{key}`")),
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some(c @ ('"' | '\\')) => value.push(c),
                        Some(c) => return Err(format!("unknown escape `\\{c}` in `{key}`")),
                        None => return Err(format!("unterminated string in `{key}`")),
                    },
                    Some(c) => value.push(c),
                }
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c == ';' || c.is_whitespace() {
                    break;
                }
                if c == '"' {
                    return Err(format!("stray quote in `{key}`"));
                }
                value.push(c);
                chars.next();
            }
        }
        fields.push((key, value));
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.next() {
            None => break,
            Some(';') => {
                // tolerate a trailing separator
                while chars.peek().is_some_and(|c| c.is_whitespace()) {
                    chars.next();
                }
                if chars.peek().is_none() {
                    break;
                }
            }
            Some(c) => return Err(format!("expected `;` but found `{c}`")),
        }
    }
    Ok(fields)
}

fn build_entry(line: usize, fields: Vec<(String, String)>) -> Result<CatalogEntry, CatalogError> {
    let mut map: HashMap<String, String> = HashMap::new();
    for (k, v) in fields {
        if !REQUIRED.contains(&k.as_str()) && !OPTIONAL.contains(&k.as_str()) {
            return Err(CatalogError::Field {
                line,
                field: k,
                message: "unknown field".to_string(),
            });
        }
        if map.contains_key(&k) {
            return Err(CatalogError::Field {
                line,
                field: k,
                message: "given more than once".to_string(),
            });
        }
        map.insert(k, v);
    }
    for field in REQUIRED {
        if !map.contains_key(field) {
            return Err(CatalogError::Missing { line, field });
        }
    }
    let id = map.remove("id").unwrap_or_default();
    if id.is_empty()
        || !id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
    {
        return Err(CatalogError::Field {
            line,
            field: "id".to_string(),
            message: format!("`{id}` must be non-empty and use only [A-Za-z0-9._-]"),
        });
    }
    let number = |map: &HashMap<String, String>, field: &'static str| -> Result<f64, CatalogError> {
        let raw = &map[field];
        let v: f64 = raw.parse().map_err(|_| CatalogError::Field {
            line,
            field: field.to_string(),
            message: format!("`{raw}` is not a number"),
        })?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CatalogError::NonPositive {
                line,
                field,
                value: v,
            });
        }
        Ok(v)
    };
    let f_m = number(&map, "f_m_hz")?;
    let mass = number(&map, "mass_kg")?;
    let q = number(&map, "q_factor")?;
    let t_bath = if map.contains_key("t_bath_k") {
        number(&map, "t_bath_k")?
    } else {
        DEFAULT_BATH_TEMPERATURE
    };
    let material = map["material"].parse().map_err(|message| CatalogError::Field {
        line,
        field: "material".to_string(),
        message,
    })?;
    Ok(CatalogEntry {
        id,
        label: map.remove("label").unwrap_or_default(),
        f_m,
        mass,
        q,
        t_bath,
        material,
        notes: map.remove("notes").unwrap_or_default(),
    })
}
