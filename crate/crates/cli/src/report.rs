//! Reports: a deterministic JSON document and a fixed-column CSV table.
//!
//! CSV layout. The header is `i,beta,e0,e1,reg,mu`, one row per step, where
//! `mu` is `μ(M_i)`. After the steps come fit summary rows that reuse the six
//! columns as `label,degree,onset,P0,P1,verdict`, with labels `fit:beta`,
//! `fit:e0` and `fit:e1`.

use serde::{Deserialize, Serialize};
use syzygy_core::asymptotics::{
    fit_quasi_polynomial, Analysis, Hypotheses, KernelInvariants, QuasiPolyFit, RationalPoly,
    StepInvariants, Theorem, TheoremReport, Verdict,
};

use crate::cache::{tool_id, CACHE_VERSION};
use crate::spec::{ExampleSpec, Settings};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub core_version: String,
    pub cache_version: u32,
    pub fingerprint: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSummary {
    pub p: u32,
    pub vars: Vec<String>,
    pub equations: Vec<String>,
    pub codim: usize,
    pub dim: usize,
}

/// The window that every verdict refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub first: usize,
    pub last: usize,
    pub note: String,
}

/// Observed fit of `e_t` for `t >= 2`; data only, no verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exploratory {
    pub t: usize,
    pub fit: QuasiPolyFit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub provenance: Provenance,
    pub settings: Settings,
    pub ring: RingSummary,
    pub truncated: bool,
    pub window: Window,
    pub steps: Vec<StepInvariants>,
    pub hypotheses: Hypotheses,
    pub betti_fit: QuasiPolyFit,
    pub kernels: Vec<KernelInvariants>,
    pub scans_failed: Vec<usize>,
    pub theorems: Vec<TheoremReport>,
    pub exploratory: Vec<Exploratory>,
}

pub fn ring_summary(spec: &ExampleSpec) -> RingSummary {
    let poly = spec.ring.poly_ring();
    RingSummary {
        p: poly.field().modulus(),
        vars: poly.var_names().to_vec(),
        equations: spec.ring.equations().iter().map(|f| poly.format(f)).collect(),
        codim: spec.ring.codim(),
        dim: spec.ring.dim(),
    }
}

impl Report {
    pub fn new(spec: &ExampleSpec, settings: Settings, truncated: bool, analysis: Analysis) -> Report {
        let last = analysis.steps.len().saturating_sub(1);
        let from = analysis.hypotheses.mcm_from.unwrap_or(0);
        let mut exploratory = Vec::new();
        for t in 2..=spec.ring.dim() {
            let seq: Vec<i64> = analysis
                .steps
                .iter()
                .map(|s| s.e.get(t).copied().unwrap_or(0))
                .collect();
            exploratory.push(Exploratory {
                t,
                fit: fit_quasi_polynomial(&seq, from, settings.period),
            });
        }
        Report {
            name: spec.name.clone(),
            provenance: Provenance {
                tool: tool_id(),
                core_version: syzygy_core::VERSION.to_string(),
                cache_version: CACHE_VERSION,
                fingerprint: spec.fingerprint(),
                seed: settings.seed,
            },
            settings,
            ring: ring_summary(spec),
            truncated,
            window: Window {
                first: 0,
                last,
                note: format!(
                    "verdicts are window-relative: asymptotic statements are checked on steps 0..={last} only"
                ),
            },
            steps: analysis.steps,
            hypotheses: analysis.hypotheses,
            betti_fit: analysis.betti_fit,
            kernels: analysis.kernels,
            scans_failed: analysis.scans_failed,
            theorems: analysis.reports,
            exploratory,
        }
    }

    pub fn theorem(&self, t: Theorem) -> Option<&TheoremReport> {
        self.theorems.iter().find(|r| r.theorem == t)
    }

    pub fn any_failure(&self) -> bool {
        self.theorems.iter().any(|r| r.verdict == Verdict::Fails)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["i", "beta", "e0", "e1", "reg", "mu"]).unwrap();
        let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
        for s in &self.steps {
            w.write_record([
                s.i.to_string(),
                s.beta.to_string(),
                s.e0.to_string(),
                opt(s.e1),
                opt(s.reg.map(i64::from)),
                s.beta.to_string(),
            ])
            .unwrap();
        }
        let verdict_of = |t| {
            self.theorem(t)
                .map(|r| verdict_name(r.verdict).to_string())
                .unwrap_or_default()
        };
        let mut fit_row = |label: &str, fit: Option<&QuasiPolyFit>, verdict: String| {
            let (degree, onset, p0, p1) = match fit {
                Some(f) => (
                    f.degree.map(|d| d.to_string()).unwrap_or_default(),
                    f.onset.map(|d| d.to_string()).unwrap_or_default(),
                    class_poly(f, 0),
                    class_poly(f, 1),
                ),
                None => Default::default(),
            };
            w.write_record([label.to_string(), degree, onset, p0, p1, verdict]).unwrap();
        };
        fit_row("fit:beta", Some(&self.betti_fit), String::new());
        for (label, t) in [("fit:e0", Theorem::E0Degree), ("fit:e1", Theorem::E1Degree)] {
            let fit = self.theorem(t).and_then(|r| r.fit.as_ref());
            fit_row(label, fit, verdict_of(t));
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::NotApplicable => "not-applicable",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn class_poly(f: &QuasiPolyFit, residue: usize) -> String {
    f.classes
        .get(residue)
        .and_then(|c| c.poly.as_ref())
        .map(format_poly)
        .unwrap_or_else(|| if residue < f.period { "0".into() } else { String::new() })
}

/// `a + b*m + c*m^2`, skipping zero terms.
pub fn format_poly(p: &RationalPoly) -> String {
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if *c.numer() == 0 {
            continue;
        }
        parts.push(match k {
            0 => c.to_string(),
            1 => format!("{c}*m"),
            _ => format!("{c}*m^{k}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
