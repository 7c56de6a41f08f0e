//! Problem files: INI-style sections with expression values.
//!
//! ```text
//! [base]
//! coords = x
//! [fiber]
//! coords = y
//! [hamiltonian]
//! density = (p_y^2 + y^2)/2
//! [chart2]
//! forward.x = 2*x
//! inverse.x = x'/2
//! ```
//!
//! The second chart uses primed names. Coordinates without a `forward.` or
//! `inverse.` entry map to their counterpart unchanged.

use std::path::Path;

use covhamkit::geometry::{Chart, GeometryError, Transition};
use covhamkit::symexpr::{parse_scalar, Bindings, CoordLookup, Scalar};

use crate::CliError;

#[derive(Clone, Debug)]
pub struct Density {
    pub text: String,
    pub value: Scalar,
}

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub y: Chart,
    pub hamiltonian: Option<Density>,
    pub lagrangian: Option<Density>,
    pub rho: Option<Density>,
    pub chart2: Option<Transition>,
}

struct Entry {
    line: usize,
    section: String,
    key: String,
    value: String,
}

const SECTIONS: &[&str] = &[
    "base",
    "fiber",
    "hamiltonian",
    "lagrangian",
    "chart2",
    "density",
];

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse(format!("line {line}: {}", message.into()))
}

fn validation_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Validation(format!("line {line}: {}", message.into()))
}

fn entries(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut out: Vec<Entry> = Vec::new();
    let mut section: Option<String> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
            continue;
        }
        if let Some(name) = s.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| parse_error(line, "unterminated section header"))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(parse_error(line, format!("unknown section [{name}]")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| parse_error(line, "expected 'key = value'"))?;
        let section = section
            .clone()
            .ok_or_else(|| parse_error(line, "entry outside of a section"))?;
        let key = key.trim().to_string();
        if let Some(prev) = out.iter().find(|e| e.section == section && e.key == key) {
            return Err(parse_error(
                line,
                format!("'{key}' already set on line {}", prev.line),
            ));
        }
        out.push(Entry {
            line,
            section,
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

fn allowed_key(section: &str, key: &str) -> bool {
    match section {
        "base" | "fiber" => key == "coords",
        "hamiltonian" | "lagrangian" => key == "density",
        "density" => key == "rho",
        "chart2" => key.starts_with("forward.") || key.starts_with("inverse."),
        _ => false,
    }
}

fn find<'a>(es: &'a [Entry], section: &str, key: &str) -> Option<&'a Entry> {
    es.iter().find(|e| e.section == section && e.key == key)
}

fn names(e: &Entry) -> Vec<&str> {
    e.value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect()
}

fn expression(e: &Entry, chart: &dyn CoordLookup) -> Result<Scalar, CliError> {
    parse_scalar(&e.value, chart).map_err(|err| parse_error(e.line, err.to_string()))
}

pub fn load_spec(path: &Path) -> Result<ProblemSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> Result<ProblemSpec, CliError> {
    let es = entries(text)?;
    if let Some(e) = es.iter().find(|e| !allowed_key(&e.section, &e.key)) {
        return Err(parse_error(
            e.line,
            format!("unknown key '{}' in [{}]", e.key, e.section),
        ));
    }
    let base = find(&es, "base", "coords")
        .ok_or_else(|| CliError::Validation("missing [base] coords".into()))?;
    let fiber = find(&es, "fiber", "coords")
        .ok_or_else(|| CliError::Validation("missing [fiber] coords".into()))?;
    let y = Chart::fibred(&names(base), &names(fiber)).map_err(|err| {
        let line = match &err {
            GeometryError::InvalidChart(m) if m.contains("declared twice") => fiber.line,
            _ => base.line.max(fiber.line),
        };
        validation_error(line, err.to_string())
    })?;
    let hamiltonian = find(&es, "hamiltonian", "density")
        .map(|e| {
            Ok::<_, CliError>(Density {
                text: e.value.clone(),
                value: expression(e, &y.legendre())?,
            })
        })
        .transpose()?;
    let lagrangian = find(&es, "lagrangian", "density")
        .map(|e| {
            let j1 = y.jet().expect("Y has a jet chart");
            Ok::<_, CliError>(Density {
                text: e.value.clone(),
                value: expression(e, &j1)?,
            })
        })
        .transpose()?;
    if hamiltonian.is_none() && lagrangian.is_none() {
        return Err(CliError::Validation(
            "need a [hamiltonian] or [lagrangian] density".into(),
        ));
    }
    let rho = find(&es, "density", "rho")
        .map(|e| {
            let value = expression(e, &y)?;
            if value.is_zero() || value.coords().iter().any(|c| !c.is_base()) {
                return Err(validation_error(
                    e.line,
                    "rho must be a nonzero function of the base",
                ));
            }
            Ok(Density {
                text: e.value.clone(),
                value,
            })
        })
        .transpose()?;
    let chart2 = chart2(&es, &y)?;
    Ok(ProblemSpec {
        y,
        hamiltonian,
        lagrangian,
        rho,
        chart2,
    })
}

fn chart2(es: &[Entry], a: &Chart) -> Result<Option<Transition>, CliError> {
    let own: Vec<&Entry> = es.iter().filter(|e| e.section == "chart2").collect();
    if own.is_empty() {
        return Ok(None);
    }
    let b = a.primed();
    let mut forward = Bindings::new();
    let mut inverse = Bindings::new();
    for e in &own {
        let (dir, name) = e.key.split_once('.').expect("checked prefix");
        let ca = a
            .by_name(name.trim_end_matches('\''))
            .ok_or_else(|| validation_error(e.line, format!("unknown coordinate '{name}'")))?;
        let cb = b.counterpart(&ca).expect("primed chart");
        if dir == "forward" {
            forward.insert(cb, expression(e, a)?);
        } else {
            inverse.insert(ca, expression(e, &b)?);
        }
    }
    for (ca, cb) in a.coords().iter().zip(b.coords()) {
        forward
            .entry(cb.clone())
            .or_insert_with(|| Scalar::coord(ca));
        inverse
            .entry(ca.clone())
            .or_insert_with(|| Scalar::coord(cb));
    }
    Transition::new(a.clone(), b, forward, inverse)
        .map(Some)
        .map_err(|e| CliError::Math(e.to_string()))
}
