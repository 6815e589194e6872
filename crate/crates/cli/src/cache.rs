//! On-disk resolution cache: one JSON file per example, written atomically.
//!
//! Matrices are stored as `[row, col, [[exponents], coeff], ...]` entries with
//! coefficients as signed residues, so files diff cleanly.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use syzygy_core::arith::{Monomial, Polynomial};
use syzygy_core::cring::{CIRing, Presentation};
use syzygy_core::resolve::Resolution;
use thiserror::Error;

use crate::spec::ExampleSpec;

/// Bumped whenever the layout or the meaning of a field changes.
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cache file {path} is not valid: {message}")]
    Invalid { path: String, message: String },
    #[error("cache file {path} has format version {found}, expected {CACHE_VERSION}")]
    Version { path: String, found: u32 },
    #[error("cache file {path} belongs to a different example")]
    Fingerprint { path: String },
}

/// `([exponents], coefficient)`.
pub type CachedTerm = (Vec<u32>, i64);
/// `(row, column, terms)`.
pub type CachedEntry = (usize, usize, Vec<CachedTerm>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedModule {
    pub shifts: Vec<i32>,
    pub relation_degrees: Vec<i32>,
    pub relations: Vec<CachedEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub tool: String,
    pub fingerprint: String,
    pub p: u32,
    pub vars: Vec<String>,
    pub equations: Vec<Vec<CachedTerm>>,
    pub betti: Vec<usize>,
    pub modules: Vec<CachedModule>,
}

fn encode_poly(ring: &CIRing, p: &Polynomial) -> Vec<CachedTerm> {
    let n = ring.nvars();
    let field = ring.poly_ring().field();
    p.terms()
        .iter()
        .map(|(m, c)| (m.exponents(n), field.signed(*c)))
        .collect()
}

fn decode_poly(ring: &CIRing, terms: &[CachedTerm]) -> Result<Polynomial, String> {
    let n = ring.nvars();
    let mut out = Vec::with_capacity(terms.len());
    for (exps, c) in terms {
        if exps.len() != n {
            return Err(format!("monomial with {} exponents in {n} variables", exps.len()));
        }
        out.push((Monomial::from_exponents(exps).map_err(|e| e.to_string())?, *c));
    }
    Ok(ring.poly_ring().from_terms(out))
}

fn encode_module(ring: &CIRing, m: &Presentation) -> CachedModule {
    let mut relations = Vec::new();
    for (c, col) in m.relations().iter().enumerate() {
        for (r, p) in col.iter().enumerate() {
            if !p.is_zero() {
                relations.push((r, c, encode_poly(ring, p)));
            }
        }
    }
    CachedModule {
        shifts: m.shifts().to_vec(),
        relation_degrees: m.relation_degrees().to_vec(),
        relations,
    }
}

fn decode_module(ring: &Arc<CIRing>, m: &CachedModule) -> Result<Presentation, String> {
    let rank = m.shifts.len();
    let mut cols = vec![vec![Polynomial::zero(); rank]; m.relation_degrees.len()];
    for (r, c, terms) in &m.relations {
        let slot = cols
            .get_mut(*c)
            .and_then(|col| col.get_mut(*r))
            .ok_or_else(|| format!("entry ({r}, {c}) is out of range"))?;
        *slot = decode_poly(ring, terms)?;
    }
    let p = Presentation::restore(ring, m.shifts.clone(), cols).map_err(|e| e.to_string())?;
    if p.relation_degrees() != m.relation_degrees.as_slice() {
        return Err("relation degrees do not match the entries".into());
    }
    Ok(p)
}

pub fn tool_id() -> String {
    format!("syzygy {}", env!("CARGO_PKG_VERSION"))
}

/// Serializes a resolution of `spec`.
pub fn encode(spec: &ExampleSpec, res: &Resolution) -> CacheFile {
    let ring = res.ring();
    let poly = ring.poly_ring();
    CacheFile {
        version: CACHE_VERSION,
        tool: tool_id(),
        fingerprint: spec.fingerprint(),
        p: poly.field().modulus(),
        vars: poly.var_names().to_vec(),
        equations: ring.equations().iter().map(|f| encode_poly(ring, f)).collect(),
        betti: res.betti_numbers(),
        modules: res.modules().iter().map(|m| encode_module(ring, m)).collect(),
    }
}

/// Rebuilds the resolution over the spec's ring.
pub fn decode(spec: &ExampleSpec, file: &CacheFile, path: &Path) -> Result<Resolution, CacheError> {
    let invalid = |message: String| CacheError::Invalid {
        path: path.display().to_string(),
        message,
    };
    if file.version != CACHE_VERSION {
        return Err(CacheError::Version {
            path: path.display().to_string(),
            found: file.version,
        });
    }
    if file.fingerprint != spec.fingerprint() {
        return Err(CacheError::Fingerprint {
            path: path.display().to_string(),
        });
    }
    let modules = file
        .modules
        .iter()
        .map(|m| decode_module(&spec.ring, m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(invalid)?;
    let res = Resolution::from_modules(spec.ring.clone(), modules).map_err(|e| invalid(e.to_string()))?;
    if res.betti_numbers() != file.betti {
        return Err(invalid("Betti numbers do not match the modules".into()));
    }
    Ok(res)
}

/// Location of the cache file for `spec` inside `dir`.
pub fn cache_path(dir: &Path, spec: &ExampleSpec) -> PathBuf {
    let fp = spec.fingerprint();
    dir.join(format!("{}-{}.json", spec.name, &fp[..16]))
}

/// Reads a cached resolution. `Ok(None)` when no file exists.
pub fn load(dir: &Path, spec: &ExampleSpec) -> Result<Option<Resolution>, CacheError> {
    let path = cache_path(dir, spec);
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(source) => {
            return Err(CacheError::Io {
                path: path.display().to_string(),
                source,
            })
        }
    };
    let file: CacheFile = serde_json::from_str(&text).map_err(|e| CacheError::Invalid {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    decode(spec, &file, &path).map(Some)
}

/// Writes the cache file through a temporary file in the same directory and
/// renames it into place, so readers never see a partial file.
pub fn store(dir: &Path, spec: &ExampleSpec, res: &Resolution) -> Result<PathBuf, CacheError> {
    let path = cache_path(dir, spec);
    let io = |source| CacheError::Io {
        path: path.display().to_string(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut text = serde_json::to_string_pretty(&encode(spec, res)).expect("cache serializes");
    text.push('\n');
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(path)
}
