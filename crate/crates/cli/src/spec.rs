//! Example declaration files.
//!
//! ```toml
//! name = "x2y2_ax2"
//!
//! [ring]
//! p = 101
//! vars = ["x", "y"]
//! relations = ["x^2*y^2"]
//!
//! [module]
//! rank = 1
//! shifts = [0]
//! relations = [["x^2"]]
//!
//! [analysis]
//! steps = 12
//! ```

use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use syzygy_core::arith::{PolyRing, Polynomial, PrimeField};
use syzygy_core::arith::MonomialOrder;
use syzygy_core::cring::{present, CIRing, Presentation};
use syzygy_core::Error as CoreError;
use thiserror::Error;
use toml::Spanned;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Located {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
}

/// Analysis settings, after defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    pub steps: usize,
    pub degree_bound: i32,
    pub period: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            steps: 12,
            degree_bound: 12,
            period: 2,
            seed: 0,
            trials: 20,
        }
    }
}

/// A validated example: ring, module and analysis settings.
#[derive(Clone, Debug)]
pub struct ExampleSpec {
    pub name: String,
    pub description: Option<String>,
    pub path: Option<PathBuf>,
    pub ring: Arc<CIRing>,
    pub module: Presentation,
    pub settings: Settings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: Option<String>,
    description: Option<String>,
    ring: RawRing,
    module: RawModule,
    #[serde(default)]
    analysis: RawAnalysis,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    p: Spanned<u64>,
    vars: Spanned<Vec<String>>,
    #[serde(default)]
    relations: Option<Spanned<Vec<Spanned<String>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    rank: Spanned<usize>,
    shifts: Option<Spanned<Vec<i32>>>,
    #[serde(default)]
    relations: Vec<Spanned<Vec<Spanned<String>>>>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalysis {
    steps: Option<usize>,
    degree_bound: Option<i32>,
    period: Option<usize>,
    seed: Option<u64>,
    trials: Option<usize>,
}

struct Locator<'a> {
    path: &'a str,
    src: &'a str,
}

impl Locator<'_> {
    fn at(&self, offset: usize, message: impl Into<String>) -> SpecError {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.len(), |k| before.len() - k - 1) + 1;
        SpecError::Located {
            path: self.path.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    fn span(&self, span: Range<usize>, message: impl Into<String>) -> SpecError {
        self.at(span.start, message)
    }

    /// Errors inside a quoted polynomial point at the offending character.
    fn poly(&self, s: &Spanned<String>, err: CoreError) -> SpecError {
        match err {
            CoreError::Parse { column, message } => self.at(s.span().start + column, message),
            other => self.span(s.span(), other.to_string()),
        }
    }
}

/// Reads and validates a declaration file.
pub fn parse_spec(path: &Path) -> Result<ExampleSpec, SpecError> {
    let src = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut spec = parse_spec_str(&src, &path.display().to_string())?;
    if spec.name.is_empty() {
        spec.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "example".into());
    }
    spec.path = Some(path.to_path_buf());
    Ok(spec)
}

/// Parses declaration text; `origin` names the source in error messages.
/// A missing `name` is left empty for the caller to fill in.
pub fn parse_spec_str(src: &str, origin: &str) -> Result<ExampleSpec, SpecError> {
    let loc = Locator { path: origin, src };
    let raw: RawSpec = toml::from_str(src).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        loc.at(offset, e.message().to_string())
    })?;

    let field = PrimeField::new(*raw.ring.p.get_ref())
        .map_err(|e| loc.span(raw.ring.p.span(), e.to_string()))?;
    let poly = PolyRing::new(field, raw.ring.vars.get_ref().clone(), MonomialOrder::DegRevLex)
        .map_err(|e| loc.span(raw.ring.vars.span(), e.to_string()))?;
    let poly = Arc::new(poly);

    let mut equations = Vec::new();
    let mut eq_span = 0..0;
    if let Some(rels) = &raw.ring.relations {
        eq_span = rels.span();
        for s in rels.get_ref() {
            let f = poly.parse(s.get_ref()).map_err(|e| loc.poly(s, e))?;
            if !f.is_homogeneous() {
                return Err(loc.span(s.span(), format!("ring relation `{}` is not homogeneous", s.get_ref())));
            }
            if f.degree().unwrap_or(0) < 2 {
                return Err(loc.span(s.span(), format!("ring relation `{}` must have degree at least 2", s.get_ref())));
            }
            equations.push(f);
        }
    }
    let ring = CIRing::new(poly.clone(), equations).map_err(|e| loc.span(eq_span, e.to_string()))?;

    let rank = *raw.module.rank.get_ref();
    let shifts = match &raw.module.shifts {
        Some(s) if s.get_ref().len() != rank => {
            return Err(loc.span(
                s.span(),
                format!("{} shifts given for a module of rank {rank}", s.get_ref().len()),
            ))
        }
        Some(s) => s.get_ref().clone(),
        None => vec![0; rank],
    };
    let mut columns: Vec<Vec<Polynomial>> = Vec::new();
    for col in &raw.module.relations {
        if col.get_ref().len() != rank {
            return Err(loc.span(
                col.span(),
                format!("relation has {} entries, the module has rank {rank}", col.get_ref().len()),
            ));
        }
        let mut entries = Vec::with_capacity(rank);
        for s in col.get_ref() {
            entries.push(poly.parse(s.get_ref()).map_err(|e| loc.poly(s, e))?);
        }
        // validate each column on its own so errors point at it
        present(&ring, shifts.clone(), vec![entries.clone()])
            .map_err(|e| loc.span(col.span(), e.to_string()))?;
        columns.push(entries);
    }
    let module = present(&ring, shifts, columns).map_err(|e| loc.at(0, e.to_string()))?;

    let d = Settings::default();
    let a = &raw.analysis;
    let settings = Settings {
        steps: a.steps.unwrap_or(d.steps),
        degree_bound: a.degree_bound.unwrap_or(d.degree_bound),
        period: a.period.unwrap_or(d.period),
        seed: a.seed.unwrap_or(d.seed),
        trials: a.trials.unwrap_or(d.trials),
    };
    if settings.period == 0 || settings.trials == 0 {
        return Err(loc.at(0, "period and trials must be positive"));
    }
    Ok(ExampleSpec {
        name: raw.name.unwrap_or_default(),
        description: raw.description,
        path: None,
        ring,
        module,
        settings,
    })
}

impl ExampleSpec {
    /// A canonical rendering of the ring and the module as given. Two specs
    /// with the same text describe the same resolution.
    pub fn canonical(&self) -> String {
        let poly = self.ring.poly_ring();
        let fmt = |p: &Polynomial| poly.format(p);
        let rels: Vec<Vec<String>> = self
            .module
            .relations()
            .iter()
            .map(|c| c.iter().map(fmt).collect())
            .collect();
        serde_json::json!({
            "p": poly.field().modulus(),
            "vars": poly.var_names(),
            "equations": self.ring.equations().iter().map(fmt).collect::<Vec<_>>(),
            "shifts": self.module.shifts(),
            "relations": rels,
        })
        .to_string()
    }

    /// SHA-256 of [`ExampleSpec::canonical`], in hex.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
