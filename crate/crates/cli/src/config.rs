//! Flat `key = value` configuration files with `[section]` headers.
//!
//! ```text
//! # comment
//! [scheme]
//! variant = Gauss_EP
//! degree = 3
//! ```
//!
//! Keys and section names are `[A-Za-z0-9_]+`. A `#` starts a comment anywhere on
//! a line. Lists are comma separated; an empty value is an empty list. Unknown
//! sections or keys and repeated keys are errors.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use esdg::schemes::InterfaceFlux;
use esdg::euler::TwoPointFlux;
use esdg::{TolPair, Variant};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    /// Empty for entries before the first header.
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

/// A parsed file before any key is interpreted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub sections: Vec<Section>,
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(line, "unterminated section header"))?
                    .trim();
                if !is_ident(name) {
                    return Err(ConfigError::at(line, format!("invalid section name '{name}'")));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(ConfigError::at(line, format!("section [{name}] repeated")));
                }
                sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| ConfigError::at(line, "expected 'key = value' or '[section]'"))?;
            let key = key.trim();
            if !is_ident(key) {
                return Err(ConfigError::at(line, format!("invalid key '{key}'")));
            }
            if sections.is_empty() {
                sections.push(Section {
                    name: String::new(),
                    line,
                    entries: Vec::new(),
                });
            }
            let section = sections.last_mut().expect("section pushed above");
            if section.entries.iter().any(|e| e.key == key) {
                return Err(ConfigError::at(line, format!("key '{key}' repeated")));
            }
            section.entries.push(Entry {
                key: key.to_string(),
                value: value.trim().to_string(),
                line,
            });
        }
        Ok(Self { sections })
    }

    /// Reject sections and keys outside `allowed` (pairs of section name and keys).
    fn check_schema(&self, allowed: &[(&str, &[&str])]) -> Result<(), ConfigError> {
        for s in &self.sections {
            let keys = allowed
                .iter()
                .find(|(name, _)| *name == s.name)
                .map(|(_, keys)| *keys)
                .ok_or_else(|| {
                    if s.name.is_empty() {
                        ConfigError::at(s.line, "entry outside of any section")
                    } else {
                        ConfigError::at(s.line, format!("unknown section [{}]", s.name))
                    }
                })?;
            for e in &s.entries {
                if !keys.contains(&e.key.as_str()) {
                    return Err(ConfigError::at(e.line, format!("unknown key '{}' in [{}]", e.key, s.name)));
                }
            }
        }
        Ok(())
    }

    fn entry(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections
            .iter()
            .find(|s| s.name == section)
            .and_then(|s| s.entries.iter().find(|e| e.key == key))
    }

    fn get<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.entry(section, key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|err| ConfigError::at(e.line, format!("{section}.{key}: {err}"))),
        }
    }

    fn require<T: FromStr>(&self, section: &str, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.get(section, key)?
            .ok_or_else(|| ConfigError::general(format!("missing required key {section}.{key}")))
    }

    fn list<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some(e) = self.entry(section, key) else {
            return Ok(None);
        };
        e.value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|err| ConfigError::at(e.line, format!("{section}.{key}: '{s}': {err}")))
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        self.entry(section, key).map(|e| e.line)
    }

    fn invalid(&self, section: &str, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: self.line_of(section, key),
            message: format!("{section}.{key}: {}", message.into()),
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Shortest text that parses back to the same `f64`.
fn real(x: f64) -> String {
    format!("{x:?}")
}

fn reals(xs: &[f64]) -> String {
    xs.iter().map(|&x| real(x)).collect::<Vec<_>>().join(", ")
}

fn check_degree(doc: &Document, section: &str, key: &str, n: usize) -> Result<(), ConfigError> {
    if !(1..=esdg::schemes::MAX_DEGREE).contains(&n) {
        return Err(doc.invalid(section, key, format!("degree {n} outside 1..={}", esdg::schemes::MAX_DEGREE)));
    }
    Ok(())
}

fn check_cells(doc: &Document, section: &str, key: &str, n: usize) -> Result<(), ConfigError> {
    if n == 0 {
        return Err(doc.invalid(section, key, "cell count must be at least 1"));
    }
    Ok(())
}

fn check_problem(doc: &Document, section: &str, key: &str, name: &str) -> Result<(), ConfigError> {
    if !esdg::problems::PROBLEM_NAMES.contains(&name) {
        return Err(doc.invalid(
            section,
            key,
            format!("unknown problem '{name}' (one of {})", esdg::problems::PROBLEM_NAMES.join(", ")),
        ));
    }
    Ok(())
}

fn tolerances(doc: &Document) -> Result<TolPair, ConfigError> {
    let d = TolPair::default();
    let abstol = doc.get("integrator", "abstol")?.unwrap_or(d.abstol);
    let reltol = doc.get("integrator", "reltol")?.unwrap_or(d.reltol);
    TolPair::new(abstol, reltol).map_err(|e| ConfigError {
        line: doc.line_of("integrator", "abstol").or(doc.line_of("integrator", "reltol")),
        message: e.to_string(),
    })
}

fn nonnegative_times(doc: &Document, section: &str, key: &str) -> Result<Vec<f64>, ConfigError> {
    let mut times: Vec<f64> = doc.list(section, key)?.unwrap_or_default();
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(doc.invalid(section, key, "times must be finite and nonnegative"));
    }
    times.sort_by(f64::total_cmp);
    Ok(times)
}

/// Everything one simulation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub atwood: Option<f64>,
    pub t_final: Option<f64>,
    pub variant: Variant,
    pub degree: usize,
    pub cells: usize,
    pub cells_y: Option<usize>,
    pub interface_flux: InterfaceFlux,
    pub volume_flux: TwoPointFlux,
    pub tol: TolPair,
    pub out_dir: PathBuf,
    /// Spacing of entropy samples; zero records every accepted step.
    pub entropy_interval: f64,
    pub snapshot_times: Vec<f64>,
    pub spectrum_times: Vec<f64>,
}

impl RunConfig {
    pub fn new(problem: &str, variant: Variant, degree: usize, cells: usize) -> Self {
        Self {
            problem: problem.to_string(),
            atwood: None,
            t_final: None,
            variant,
            degree,
            cells,
            cells_y: None,
            interface_flux: InterfaceFlux::default(),
            volume_flux: TwoPointFlux::default(),
            tol: TolPair::default(),
            out_dir: PathBuf::from("out"),
            entropy_interval: 0.0,
            snapshot_times: Vec::new(),
            spectrum_times: Vec::new(),
        }
    }

    const SCHEMA: &'static [(&'static str, &'static [&'static str])] = &[
        ("problem", &["name", "atwood", "t_final"]),
        ("scheme", &["variant", "degree", "cells", "cells_y", "interface_flux", "volume_flux"]),
        ("integrator", &["abstol", "reltol"]),
        ("output", &["dir", "entropy_interval", "snapshot_times", "spectrum_times"]),
    ];

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_document(&Document::parse(text)?)
    }

    pub fn from_document(doc: &Document) -> Result<Self, ConfigError> {
        doc.check_schema(Self::SCHEMA)?;
        let problem: String = doc.require("problem", "name")?;
        check_problem(doc, "problem", "name", &problem)?;
        let t_final: Option<f64> = doc.get("problem", "t_final")?;
        if t_final.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
            return Err(doc.invalid("problem", "t_final", "must be positive"));
        }
        let degree = doc.require("scheme", "degree")?;
        check_degree(doc, "scheme", "degree", degree)?;
        let cells = doc.require("scheme", "cells")?;
        check_cells(doc, "scheme", "cells", cells)?;
        let cells_y = doc.get("scheme", "cells_y")?;
        if let Some(c) = cells_y {
            check_cells(doc, "scheme", "cells_y", c)?;
        }
        let entropy_interval: f64 = doc.get("output", "entropy_interval")?.unwrap_or(0.0);
        if !(entropy_interval.is_finite() && entropy_interval >= 0.0) {
            return Err(doc.invalid("output", "entropy_interval", "must be finite and nonnegative"));
        }
        Ok(Self {
            problem,
            atwood: doc.get("problem", "atwood")?,
            t_final,
            variant: doc.require("scheme", "variant")?,
            degree,
            cells,
            cells_y,
            interface_flux: doc.get("scheme", "interface_flux")?.unwrap_or_default(),
            volume_flux: doc.get("scheme", "volume_flux")?.unwrap_or_default(),
            tol: tolerances(doc)?,
            out_dir: doc.get::<String>("output", "dir")?.map(PathBuf::from).unwrap_or_else(|| "out".into()),
            entropy_interval,
            snapshot_times: nonnegative_times(doc, "output", "snapshot_times")?,
            spectrum_times: nonnegative_times(doc, "output", "spectrum_times")?,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("[problem]\n");
        s.push_str(&format!("name = {}\n", self.problem));
        if let Some(a) = self.atwood {
            s.push_str(&format!("atwood = {}\n", real(a)));
        }
        if let Some(t) = self.t_final {
            s.push_str(&format!("t_final = {}\n", real(t)));
        }
        s.push_str("\n[scheme]\n");
        s.push_str(&format!("variant = {}\n", self.variant));
        s.push_str(&format!("degree = {}\n", self.degree));
        s.push_str(&format!("cells = {}\n", self.cells));
        if let Some(c) = self.cells_y {
            s.push_str(&format!("cells_y = {c}\n"));
        }
        s.push_str(&format!("interface_flux = {}\n", self.interface_flux));
        s.push_str(&format!("volume_flux = {}\n", self.volume_flux));
        s.push_str("\n[integrator]\n");
        s.push_str(&format!("abstol = {}\n", real(self.tol.abstol)));
        s.push_str(&format!("reltol = {}\n", real(self.tol.reltol)));
        s.push_str("\n[output]\n");
        s.push_str(&format!("dir = {}\n", self.out_dir.display()));
        s.push_str(&format!("entropy_interval = {}\n", real(self.entropy_interval)));
        s.push_str(&format!("snapshot_times = {}\n", reals(&self.snapshot_times)));
        s.push_str(&format!("spectrum_times = {}\n", reals(&self.spectrum_times)));
        s
    }
}

/// A crash-time matrix. Rows run over variants, then degrees, then cell counts,
/// then Atwood numbers, in the order given.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub problem: String,
    pub variants: Vec<Variant>,
    pub degrees: Vec<usize>,
    pub cells: Vec<usize>,
    /// Empty means the problem's own parameters (no Atwood column value).
    pub atwoods: Vec<f64>,
    pub t_final: Option<f64>,
    pub interface_flux: InterfaceFlux,
    pub volume_flux: TwoPointFlux,
    pub tol: TolPair,
    pub out_dir: PathBuf,
}

impl SweepConfig {
    const SCHEMA: &'static [(&'static str, &'static [&'static str])] = &[
        (
            "sweep",
            &["problem", "variants", "degrees", "cells", "atwood", "t_final", "interface_flux", "volume_flux"],
        ),
        ("integrator", &["abstol", "reltol"]),
        ("output", &["dir"]),
    ];

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_document(&Document::parse(text)?)
    }

    pub fn from_document(doc: &Document) -> Result<Self, ConfigError> {
        doc.check_schema(Self::SCHEMA)?;
        let problem: String = doc.require("sweep", "problem")?;
        check_problem(doc, "sweep", "problem", &problem)?;
        let degrees: Vec<usize> = doc.list("sweep", "degrees")?.unwrap_or_default();
        for &n in &degrees {
            check_degree(doc, "sweep", "degrees", n)?;
        }
        let cells: Vec<usize> = doc.list("sweep", "cells")?.unwrap_or_default();
        for &c in &cells {
            check_cells(doc, "sweep", "cells", c)?;
        }
        let t_final: Option<f64> = doc.get("sweep", "t_final")?;
        if t_final.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
            return Err(doc.invalid("sweep", "t_final", "must be positive"));
        }
        Ok(Self {
            problem,
            variants: doc.list("sweep", "variants")?.unwrap_or_default(),
            degrees,
            cells,
            atwoods: doc.list("sweep", "atwood")?.unwrap_or_default(),
            t_final,
            interface_flux: doc.get("sweep", "interface_flux")?.unwrap_or_default(),
            volume_flux: doc.get("sweep", "volume_flux")?.unwrap_or_default(),
            tol: tolerances(doc)?,
            out_dir: doc.get::<String>("output", "dir")?.map(PathBuf::from).unwrap_or_else(|| "out".into()),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("[sweep]\n");
        s.push_str(&format!("problem = {}\n", self.problem));
        s.push_str(&format!("variants = {}\n", join(&self.variants)));
        s.push_str(&format!("degrees = {}\n", join(&self.degrees)));
        s.push_str(&format!("cells = {}\n", join(&self.cells)));
        s.push_str(&format!("atwood = {}\n", reals(&self.atwoods)));
        if let Some(t) = self.t_final {
            s.push_str(&format!("t_final = {}\n", real(t)));
        }
        s.push_str(&format!("interface_flux = {}\n", self.interface_flux));
        s.push_str(&format!("volume_flux = {}\n", self.volume_flux));
        s.push_str("\n[integrator]\n");
        s.push_str(&format!("abstol = {}\n", real(self.tol.abstol)));
        s.push_str(&format!("reltol = {}\n", real(self.tol.reltol)));
        s.push_str("\n[output]\n");
        s.push_str(&format!("dir = {}\n", self.out_dir.display()));
        s
    }

    /// The individual runs in row order.
    pub fn cells_of_matrix(&self) -> Vec<RunConfig> {
        let atwoods: Vec<Option<f64>> = if self.atwoods.is_empty() {
            vec![None]
        } else {
            self.atwoods.iter().copied().map(Some).collect()
        };
        let mut out = Vec::new();
        for &variant in &self.variants {
            for &degree in &self.degrees {
                for &cells in &self.cells {
                    for &atwood in &atwoods {
                        let mut rc = RunConfig::new(&self.problem, variant, degree, cells);
                        rc.atwood = atwood;
                        rc.t_final = self.t_final;
                        rc.interface_flux = self.interface_flux;
                        rc.volume_flux = self.volume_flux;
                        rc.tol = self.tol;
                        rc.out_dir = self.out_dir.clone();
                        out.push(rc);
                    }
                }
            }
        }
        out
    }
}

/// Entropy-projection gap study on the 1D illustration state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnoseConfig {
    pub k: Vec<f64>,
    pub p_min: Vec<f64>,
    pub degree: usize,
    pub cells: usize,
    pub out_dir: PathBuf,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        Self {
            k: vec![4.0, 8.0, 12.0],
            p_min: vec![1.0, 0.1],
            degree: 2,
            cells: 8,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl DiagnoseConfig {
    const SCHEMA: &'static [(&'static str, &'static [&'static str])] =
        &[("diagnose", &["k", "p_min", "degree", "cells"]), ("output", &["dir"])];

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let doc = Document::parse(text)?;
        doc.check_schema(Self::SCHEMA)?;
        let d = Self::default();
        let degree = doc.get("diagnose", "degree")?.unwrap_or(d.degree);
        check_degree(&doc, "diagnose", "degree", degree)?;
        let cells = doc.get("diagnose", "cells")?.unwrap_or(d.cells);
        check_cells(&doc, "diagnose", "cells", cells)?;
        let p_min: Vec<f64> = doc.list("diagnose", "p_min")?.unwrap_or(d.p_min);
        if p_min.iter().any(|p| !(*p > 0.0)) {
            return Err(doc.invalid("diagnose", "p_min", "must be positive"));
        }
        Ok(Self {
            k: doc.list("diagnose", "k")?.unwrap_or(d.k),
            p_min,
            degree,
            cells,
            out_dir: doc.get::<String>("output", "dir")?.map(PathBuf::from).unwrap_or(d.out_dir),
        })
    }

    pub fn to_text(&self) -> String {
        format!(
            "[diagnose]\nk = {}\np_min = {}\ndegree = {}\ncells = {}\n\n[output]\ndir = {}\n",
            reals(&self.k),
            reals(&self.p_min),
            self.degree,
            self.cells,
            self.out_dir.display()
        )
    }
}
