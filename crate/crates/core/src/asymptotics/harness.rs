use serde::{Deserialize, Serialize};

use super::fit::{complexity_estimate, fit_quasi_polynomial, QuasiPolyFit};
use crate::cring::{mcm_check, McmOptions, McmStatus, Presentation};
use crate::eisenbud::{lift_resolution, operators, scan_operator, OperatorMap};
use crate::error::Result;
use crate::hilbert::{associated_graded, hilbert_series, oracle_dim, HilbertSeries, LaurentPoly};
use crate::resolve::{regularity, Resolution};

/// Invariants of one syzygy module `M_i`, taken from `G(M_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepInvariants {
    pub i: usize,
    /// `β_i = μ(M_i)`.
    pub beta: usize,
    /// Degrees of the minimal generators of `M_i`.
    pub degrees: Vec<i32>,
    pub dim: Option<usize>,
    pub e0: i64,
    /// `None` when `dim M_i = 0`.
    pub e1: Option<i64>,
    /// All Hilbert coefficients `e_0, ..., e_dim`.
    pub e: Vec<i64>,
    /// `reg G(M_i)`; `None` for the zero module.
    pub reg: Option<i32>,
    pub mcm: McmStatus,
}

/// Hilbert coefficients `e_0, ..., e_d` of `h / (1 - z)^r` viewed as a
/// `d`-dimensional series (`r <= d`).
fn coefficients_in_dim(s: &HilbertSeries, d: usize) -> Vec<i64> {
    let Some(r) = s.dim() else {
        return vec![0; d + 1];
    };
    let mut h = s.h().clone();
    for _ in r..d {
        h = h.mul(&LaurentPoly::one_minus_z_pow(1));
    }
    (0..=d).map(|i| h.taylor_at_one(i)).collect()
}

/// Computes per-step invariants of every module in the resolution.
pub fn step_invariants(res: &Resolution, mcm: &McmOptions) -> Result<Vec<StepInvariants>> {
    res.modules()
        .iter()
        .enumerate()
        .map(|(i, m)| module_invariants(i, m, mcm))
        .collect()
}

fn module_invariants(i: usize, m: &Presentation, mcm: &McmOptions) -> Result<StepInvariants> {
    let g = associated_graded(m);
    let series = hilbert_series(&g);
    let e = series.multiplicities();
    let opts = McmOptions {
        seed: mcm.seed.wrapping_add(i as u64),
        ..*mcm
    };
    Ok(StepInvariants {
        i,
        beta: m.rank(),
        degrees: m.shifts().to_vec(),
        dim: series.dim(),
        e0: e.first().copied().unwrap_or(0),
        e1: match series.dim() {
            None => Some(0),
            Some(0) => None,
            Some(_) => Some(e[1]),
        },
        e,
        reg: regularity(&g)?,
        mcm: mcm_check(m, &opts),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
    Inconclusive,
}

/// One assertable consequence inside a theorem report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    fn new(name: &str, verdict: Verdict, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            verdict,
            detail: detail.into(),
        }
    }

    fn from_bool(name: &str, ok: bool, detail: impl Into<String>) -> Check {
        let v = if ok { Verdict::Holds } else { Verdict::Fails };
        Check::new(name, v, detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    E0Degree,
    E1Degree,
    Inequality,
    RegBounded,
    Additivity,
}

/// Facts about the input that the theorems assume.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub codim: usize,
    pub dim: usize,
    /// First index with `M_i` maximal Cohen-Macaulay, if any in the window.
    pub mcm_from: Option<usize>,
    pub cx: Option<usize>,
}

impl Hypotheses {
    fn codim_and_dim(&self) -> bool {
        self.codim >= 2 && self.dim >= 1
    }
}

/// Verdict of one theorem on the computed window. All verdicts are relative
/// to that window: "for i large" is read as "on the stable tail".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub verdict: Verdict,
    pub window_relative: bool,
    pub hypotheses: Hypotheses,
    pub checks: Vec<Check>,
    pub fit: Option<QuasiPolyFit>,
    /// Set by the inequality check: equality of leading coefficients in both classes.
    pub equality: Option<bool>,
    pub sequence: Vec<Option<i64>>,
}

impl TheoremReport {
    fn new(theorem: Theorem, hyp: &Hypotheses, applicable: bool, checks: Vec<Check>) -> TheoremReport {
        let verdict = if checks.iter().any(|c| c.verdict == Verdict::Fails) {
            Verdict::Fails
        } else if checks.iter().any(|c| c.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else if !applicable || checks.iter().all(|c| c.verdict == Verdict::NotApplicable) {
            Verdict::NotApplicable
        } else {
            Verdict::Holds
        };
        TheoremReport {
            theorem,
            verdict,
            window_relative: true,
            hypotheses: *hyp,
            checks,
            fit: None,
            equality: None,
            sequence: Vec::new(),
        }
    }
}

fn tail<'a>(steps: &'a [StepInvariants], hyp: &Hypotheses) -> &'a [StepInvariants] {
    match hyp.mcm_from {
        Some(k) if k < steps.len() => &steps[k..],
        _ => &[],
    }
}

fn degree_check(name: &str, fit: &QuasiPolyFit, cx: Option<usize>) -> Check {
    if fit.inconclusive {
        return Check::new(name, Verdict::Inconclusive, "no stable window");
    }
    let Some(cx) = cx else {
        return Check::new(name, Verdict::Inconclusive, "complexity unknown");
    };
    let expected = cx.checked_sub(1);
    Check::from_bool(
        name,
        fit.degree == expected,
        format!(
            "fitted degree {} vs cx - 1 = {}",
            fmt_deg(fit.degree),
            fmt_deg(expected)
        ),
    )
}

fn fmt_deg(d: Option<usize>) -> String {
    d.map_or_else(|| "-inf".into(), |d| d.to_string())
}

fn degree_report(
    theorem: Theorem,
    values: Vec<Option<i64>>,
    start: usize,
    hyp: &Hypotheses,
    applicable: bool,
) -> TheoremReport {
    let name = match theorem {
        Theorem::E0Degree => "e0 degree",
        _ => "e1 degree",
    };
    let mut checks = Vec::new();
    let mut fit = None;
    if hyp.mcm_from.is_none() {
        checks.push(Check::new(name, Verdict::Inconclusive, "no MCM syzygy in the window"));
    } else if values.iter().any(|v| v.is_none()) {
        checks.push(Check::new(name, Verdict::NotApplicable, "coefficient undefined in dimension 0"));
    } else {
        let seq: Vec<i64> = values.iter().map(|v| v.unwrap()).collect();
        let f = fit_quasi_polynomial(&seq, start, 2);
        let mut c = degree_check(name, &f, hyp.cx);
        if !applicable && c.verdict != Verdict::Inconclusive {
            c.detail = format!("{} (observed only: hypotheses not met)", c.detail);
            c.verdict = Verdict::NotApplicable;
        }
        checks.push(c);
        fit = Some(f);
    }
    let mut r = TheoremReport::new(theorem, hyp, applicable, checks);
    r.fit = fit;
    r.sequence = values;
    r
}

/// `i ↦ e_0(M_i)` is a period-2 quasi-polynomial of degree `cx - 1`.
pub fn check_e0_theorem(steps: &[StepInvariants], hyp: &Hypotheses) -> TheoremReport {
    let t = tail(steps, hyp);
    let start = t.first().map_or(0, |s| s.i);
    let values = t.iter().map(|s| Some(s.e0)).collect();
    degree_report(Theorem::E0Degree, values, start, hyp, true)
}

/// `i ↦ e_1(M_i)` is a period-2 quasi-polynomial of degree `cx - 1`
/// (codimension at least 2, positive dimension).
pub fn check_e1_theorem(steps: &[StepInvariants], hyp: &Hypotheses) -> TheoremReport {
    let t = tail(steps, hyp);
    let start = t.first().map_or(0, |s| s.i);
    let values = t.iter().map(|s| s.e1).collect();
    degree_report(Theorem::E1Degree, values, start, hyp, hyp.codim_and_dim())
}

/// Pointwise `e_1 >= e_0 - μ` on MCM syzygies, and the same inequality for
/// the leading coefficients of the fits in each parity class.
pub fn check_inequality(steps: &[StepInvariants], hyp: &Hypotheses) -> TheoremReport {
    let mut checks = Vec::new();
    let mut violations = Vec::new();
    let mut tested = 0;
    for s in steps.iter().filter(|s| s.mcm == McmStatus::Mcm && s.dim.is_some_and(|d| d >= 1)) {
        tested += 1;
        let e1 = s.e1.unwrap_or(0);
        if e1 < s.e0 - s.beta as i64 {
            violations.push(s.i);
        }
    }
    checks.push(if tested == 0 {
        Check::new("pointwise", Verdict::NotApplicable, "no MCM syzygy of positive dimension")
    } else {
        Check::from_bool(
            "pointwise",
            violations.is_empty(),
            format!("{tested} MCM steps, violations at {violations:?}"),
        )
    });

    let t = tail(steps, hyp);
    let start = t.first().map_or(0, |s| s.i);
    let mut equality = None;
    let mut fit_out = None;
    let defined = t.iter().all(|s| s.e1.is_some());
    match (hyp.cx, t.len() >= 6 && defined) {
        (Some(cx), true) if cx >= 1 => {
            let e0: Vec<i64> = t.iter().map(|s| s.e0).collect();
            let e1: Vec<i64> = t.iter().map(|s| s.e1.unwrap()).collect();
            let mu: Vec<i64> = t.iter().map(|s| s.beta as i64).collect();
            let (f0, f1, fm) = (
                fit_quasi_polynomial(&e0, start, 2),
                fit_quasi_polynomial(&e1, start, 2),
                fit_quasi_polynomial(&mu, start, 2),
            );
            if f0.inconclusive || f1.inconclusive || fm.inconclusive {
                checks.push(Check::new("leading coefficients", Verdict::Inconclusive, "no stable window"));
            } else {
                let k = cx - 1;
                let mut ok = true;
                let mut eq = true;
                let mut detail = Vec::new();
                for j in 0..2 {
                    let (a, alpha, gamma) = (f1.coeff(j, k), f0.coeff(j, k), fm.coeff(j, k));
                    ok &= a >= alpha - gamma;
                    eq &= a == alpha - gamma;
                    detail.push(format!("class {j}: {a} >= {alpha} - {gamma}"));
                }
                equality = Some(eq);
                let mut c = Check::from_bool("leading coefficients", ok, detail.join("; "));
                if !hyp.codim_and_dim() && ok {
                    c.verdict = Verdict::NotApplicable;
                    c.detail.push_str(" (observed only: hypotheses not met)");
                }
                checks.push(c);
                fit_out = Some(f1);
            }
        }
        (None, _) => checks.push(Check::new("leading coefficients", Verdict::Inconclusive, "complexity unknown")),
        _ => checks.push(Check::new(
            "leading coefficients",
            Verdict::NotApplicable,
            "finite resolution or short window",
        )),
    }
    let mut r = TheoremReport::new(Theorem::Inequality, hyp, true, checks);
    r.equality = equality;
    r.fit = fit_out;
    r.sequence = violations.iter().map(|i| Some(*i as i64)).collect();
    r
}

/// Window form of bounded regularity. With `cx = 2` and equality in both
/// classes: the running max of `reg G(M_i)` does not grow over the second
/// half of the window. With `cx <= 1`: `reg G(M_{i+2}) - reg G(M_i)` is
/// eventually constant.
pub fn check_reg_bounded(
    steps: &[StepInvariants],
    equality: Option<bool>,
    hyp: &Hypotheses,
) -> TheoremReport {
    let t = tail(steps, hyp);
    let regs: Vec<Option<i64>> = t.iter().map(|s| s.reg.map(i64::from)).collect();
    let mut checks = Vec::new();
    let applicable;
    match hyp.cx {
        _ if t.is_empty() => {
            applicable = false;
            checks.push(Check::new("reg window", Verdict::Inconclusive, "no MCM syzygy in the window"));
        }
        Some(0) | Some(1) => {
            applicable = true;
            let diffs: Vec<Option<i64>> = regs
                .windows(3)
                .map(|w| match (w[0], w[2]) {
                    (Some(a), Some(b)) => Some(b - a),
                    (None, None) => Some(0),
                    _ => None,
                })
                .collect();
            let stable = diffs.len() >= 3 && {
                let last = diffs[diffs.len() - 1];
                diffs[diffs.len() - 3..].iter().all(|d| *d == last) && last.is_some()
            };
            let detail = format!("reg(M_(i+2)) - reg(M_i) on the window: {diffs:?}");
            checks.push(if diffs.len() < 3 {
                Check::new("eventually constant difference", Verdict::Inconclusive, detail)
            } else {
                Check::from_bool("eventually constant difference", stable, detail)
            });
        }
        Some(2) if equality == Some(true) => {
            applicable = hyp.codim_and_dim();
            let vals: Vec<i64> = regs.iter().map(|r| r.unwrap_or(i64::MIN)).collect();
            let half = vals.len() / 2;
            if half == 0 {
                checks.push(Check::new("running max", Verdict::Inconclusive, "window too short"));
            } else {
                let first = vals[..half].iter().max().copied().unwrap();
                let second = vals[half..].iter().max().copied().unwrap();
                checks.push(Check::from_bool(
                    "running max",
                    second <= first,
                    format!("max over first half {first}, over second half {second}"),
                ));
            }
        }
        Some(_) => {
            applicable = false;
            checks.push(Check::new(
                "reg window",
                Verdict::NotApplicable,
                "needs cx = 2 with equality, or cx <= 1",
            ));
        }
        None => {
            applicable = false;
            checks.push(Check::new("reg window", Verdict::Inconclusive, "complexity unknown"));
        }
    }
    let mut r = TheoremReport::new(Theorem::RegBounded, hyp, applicable, checks);
    r.sequence = regs;
    r
}

/// Invariants of a kernel `K_n` of a surjection `M_{n+2} -> M_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelInvariants {
    pub n: usize,
    pub coeffs: Vec<u32>,
    pub mu: usize,
    /// `e_0, e_1` as coefficients of a series of dimension `dim A`.
    pub e0: i64,
    pub e1: i64,
    /// Degreewise `dim K_d = dim (M_{n+2})_d - dim (M_n)_{d - deg t}` by linear algebra.
    pub exact: bool,
}

/// Computes the invariants of `K_n` and checks exactness of
/// `0 -> K_n -> M_{n+2} -> M_n -> 0` with the linear-algebra oracle.
pub fn kernel_invariants(
    map: &OperatorMap,
    res: &Resolution,
    degree_bound: i32,
) -> Option<KernelInvariants> {
    let k = map.kernel.as_ref()?;
    let d = res.ring().dim();
    let e = coefficients_in_dim(&hilbert_series(&associated_graded(k)), d);
    let upper = res.syzygy(map.n + 2);
    let lower = res.syzygy(map.n);
    let exact = (0..=degree_bound).all(|deg| {
        oracle_dim(k, deg) == oracle_dim(upper, deg) - oracle_dim(lower, deg - map.degree)
    });
    Some(KernelInvariants {
        n: map.n,
        coeffs: map.coeffs.clone(),
        mu: k.rank(),
        e0: e[0],
        e1: e.get(1).copied().unwrap_or(0),
        exact,
    })
}

/// `e_j(M_{n+2}) - e_j(M_n) = e_j(K_n)` for `j = 0, 1`, and the same for `μ`,
/// at every step with a surjective operator. With `cx = 2` and equality,
/// also `e_1(K_n) = e_0(K_n) - μ(K_n)`.
pub fn check_additivity(
    steps: &[StepInvariants],
    kernels: &[KernelInvariants],
    equality: Option<bool>,
    hyp: &Hypotheses,
) -> TheoremReport {
    let mut checks = Vec::new();
    if kernels.is_empty() {
        checks.push(Check::new("additivity", Verdict::Inconclusive, "no surjective operator found"));
    }
    for k in kernels {
        let (Some(lo), Some(hi)) = (steps.get(k.n), steps.get(k.n + 2)) else {
            continue;
        };
        let d = lo.e1.is_some() && hi.e1.is_some();
        let e1_ok = !d || hi.e1.unwrap() - lo.e1.unwrap() == k.e1;
        let ok = hi.e0 - lo.e0 == k.e0 && e1_ok && hi.beta - lo.beta == k.mu && k.exact;
        checks.push(Check::from_bool(
            &format!("n = {}", k.n),
            ok,
            format!(
                "e0 {} - {} vs {}; e1 {:?} - {:?} vs {}; mu {} - {} vs {}; exact {}",
                hi.e0, lo.e0, k.e0, hi.e1, lo.e1, k.e1, hi.beta, lo.beta, k.mu, k.exact
            ),
        ));
        if hyp.cx == Some(2) && equality == Some(true) {
            checks.push(Check::from_bool(
                &format!("minimal multiplicity n = {}", k.n),
                k.e1 == k.e0 - k.mu as i64,
                format!("e1(K) = {}, e0(K) - mu(K) = {}", k.e1, k.e0 - k.mu as i64),
            ));
        }
    }
    TheoremReport::new(Theorem::Additivity, hyp, true, checks)
}

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    pub period: usize,
    pub trials: usize,
    pub seed: u64,
    pub degree_bound: i32,
    pub mcm: McmOptions,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            period: 2,
            trials: 20,
            seed: 0,
            degree_bound: 12,
            mcm: McmOptions::default(),
        }
    }
}

/// Everything the harness derives from one resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub steps: Vec<StepInvariants>,
    pub hypotheses: Hypotheses,
    pub betti_fit: QuasiPolyFit,
    pub kernels: Vec<KernelInvariants>,
    /// Steps where the operator scan found no surjection.
    pub scans_failed: Vec<usize>,
    pub reports: Vec<TheoremReport>,
}

/// Runs the complete harness on a resolution.
pub fn analyze(res: &Resolution, opts: &AnalysisOptions) -> Result<Analysis> {
    let mut mcm = opts.mcm;
    mcm.seed = opts.seed;
    let steps = step_invariants(res, &mcm)?;
    let betti: Vec<i64> = steps.iter().map(|s| s.beta as i64).collect();
    let betti_fit = fit_quasi_polynomial(&betti, 0, opts.period);
    let ring = res.ring();
    let hyp = Hypotheses {
        codim: ring.codim(),
        dim: ring.dim(),
        mcm_from: steps.iter().position(|s| s.mcm == McmStatus::Mcm),
        cx: complexity_estimate(&betti, opts.period),
    };

    let mut kernels = Vec::new();
    let mut scans_failed = Vec::new();
    if res.len() >= 3 && ring.codim() > 0 {
        let ops = operators(&lift_resolution(res)?)?;
        let from = hyp.mcm_from.unwrap_or(res.len());
        for n in from..res.len().saturating_sub(2) {
            if n + 3 > res.len() {
                break;
            }
            let seed = opts.seed.wrapping_add(n as u64);
            let scan = scan_operator(&ops, n, opts.trials, seed)?;
            match scan.found.as_ref().and_then(|m| kernel_invariants(m, res, opts.degree_bound)) {
                Some(k) => kernels.push(k),
                None => scans_failed.push(n),
            }
        }
    }

    let e0 = check_e0_theorem(&steps, &hyp);
    let e1 = check_e1_theorem(&steps, &hyp);
    let ineq = check_inequality(&steps, &hyp);
    let reg = check_reg_bounded(&steps, ineq.equality, &hyp);
    let add = check_additivity(&steps, &kernels, ineq.equality, &hyp);
    Ok(Analysis {
        steps,
        hypotheses: hyp,
        betti_fit,
        kernels,
        scans_failed,
        reports: vec![e0, e1, ineq, reg, add],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(i: usize, beta: usize, e0: i64, e1: i64, reg: i32) -> StepInvariants {
        StepInvariants {
            i,
            beta,
            degrees: vec![i as i32; beta],
            dim: Some(1),
            e0,
            e1: Some(e1),
            e: vec![e0, e1],
            reg: Some(reg),
            mcm: McmStatus::Mcm,
        }
    }

    fn hyp(codim: usize, cx: usize) -> Hypotheses {
        Hypotheses {
            codim,
            dim: 1,
            mcm_from: Some(0),
            cx: Some(cx),
        }
    }

    #[test]
    fn constant_invariants() {
        let steps: Vec<_> = (0..11).map(|i| step(i, 1, 2, 1, 0)).collect();
        let h = hyp(1, 1);
        let e0 = check_e0_theorem(&steps, &h);
        assert_eq!(e0.verdict, Verdict::Holds);
        assert_eq!(e0.fit.unwrap().degree, Some(0));
        let e1 = check_e1_theorem(&steps, &h);
        assert_eq!(e1.verdict, Verdict::NotApplicable);
        let ineq = check_inequality(&steps, &h);
        assert_eq!(ineq.equality, Some(true));
        assert_eq!(ineq.verdict, Verdict::Holds);
        assert_eq!(check_reg_bounded(&steps, ineq.equality, &h).verdict, Verdict::Holds);
    }

    #[test]
    fn violations_are_reported() {
        let mut steps: Vec<_> = (0..8).map(|i| step(i, 1, 2, 1, 0)).collect();
        steps[3].e1 = Some(-4);
        let r = check_inequality(&steps, &hyp(2, 1));
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.sequence, vec![Some(3)]);
    }

    #[test]
    fn growing_regularity_fails_the_window_check() {
        let steps: Vec<_> = (0..12)
            .map(|i| step(i, i + 1, 2 * i as i64 + 1, i as i64, i as i32))
            .collect();
        let h = hyp(2, 2);
        let r = check_reg_bounded(&steps, Some(true), &h);
        assert_eq!(r.verdict, Verdict::Fails);
        let flat: Vec<_> = (0..12)
            .map(|i| step(i, i + 1, 2 * i as i64 + 1, i as i64, 1))
            .collect();
        assert_eq!(check_reg_bounded(&flat, Some(true), &h).verdict, Verdict::Holds);
    }

    #[test]
    fn no_kernels_is_inconclusive() {
        let steps: Vec<_> = (0..8).map(|i| step(i, 1, 2, 1, 0)).collect();
        let r = check_additivity(&steps, &[], None, &hyp(2, 1));
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }
}
