use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

pub type Rational = Ratio<i128>;

/// A polynomial with rational coefficients, ascending powers, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPoly {
    #[serde(serialize_with = "ratios_as_strings", deserialize_with = "ratios_from_strings")]
    coeffs: Vec<Rational>,
}

fn ratios_as_strings<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ratios_from_strings<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
    let raw: Vec<String> = Vec::deserialize(d)?;
    raw.iter()
        .map(|s| s.parse::<Rational>().map_err(serde::de::Error::custom))
        .collect()
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> RationalPoly {
        while coeffs.last().is_some_and(|c| *c == Rational::from(0)) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).copied().unwrap_or_else(|| Rational::from(0))
    }

    pub fn eval(&self, m: i128) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::from(0), |acc, c| acc * Rational::from(m) + c)
    }

    fn mul_linear(&self, a: Rational) -> RationalPoly {
        // self * (m - a)
        let mut out = vec![Rational::from(0); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= c * a;
        }
        RationalPoly::new(out)
    }

    fn add_scaled(&self, other: &RationalPoly, s: Rational) -> RationalPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k) * s).collect())
    }
}

/// The polynomial `P_j` for one residue class, `f(period * m + j) = P_j(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFit {
    pub residue: usize,
    pub poly: Option<RationalPoly>,
    /// First sequence index covered by the stable window.
    pub onset: Option<usize>,
    /// Number of points in the stable window.
    pub window: usize,
}

/// A quasi-polynomial fit `f(period * m + j) = P_j(m)` on a tail window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPolyFit {
    pub period: usize,
    pub classes: Vec<ClassFit>,
    /// `max deg P_j`; `None` when every `P_j` is zero or the fit is inconclusive.
    pub degree: Option<usize>,
    /// First index from which the fit holds at every computed index.
    pub onset: Option<usize>,
    pub inconclusive: bool,
}

impl QuasiPolyFit {
    /// Coefficient of `m^k` in `P_j`.
    pub fn coeff(&self, residue: usize, k: usize) -> Rational {
        self.classes[residue]
            .poly
            .as_ref()
            .map_or_else(|| Rational::from(0), |p| p.coeff(k))
    }

    /// Value predicted at sequence index `i`.
    pub fn eval(&self, i: usize) -> Option<Rational> {
        let c = &self.classes[i % self.period];
        c.poly.as_ref().map(|p| p.eval((i / self.period) as i128))
    }
}

fn differences(v: &[i128], order: usize) -> Vec<i128> {
    let mut d = v.to_vec();
    for _ in 0..order {
        d = d.windows(2).map(|w| w[1] - w[0]).collect();
    }
    d
}

fn fit_class(residue: usize, period: usize, points: &[(usize, i128)]) -> ClassFit {
    let values: Vec<i128> = points.iter().map(|p| p.1).collect();
    let l = values.len();
    let mut found = None;
    for d in 0.. {
        let w = d + 3;
        if w > l {
            break;
        }
        if differences(&values[l - w..], d + 1).iter().all(|x| *x == 0) {
            found = Some(d);
            break;
        }
    }
    let Some(d) = found else {
        return ClassFit {
            residue,
            poly: None,
            onset: None,
            window: 0,
        };
    };
    let mut start = l - (d + 3);
    while start > 0
        && differences(&values[start - 1..start + d + 1], d + 1)
            .iter()
            .all(|x| *x == 0)
    {
        start -= 1;
    }
    // Newton forward differences from the window start.
    let m0 = Rational::from(points[start].0 as i128);
    let mut poly = RationalPoly::new(Vec::new());
    let mut basis = RationalPoly::new(vec![Rational::from(1)]);
    let mut factorial = Rational::from(1);
    for k in 0..=d {
        let delta = differences(&values[start..], k)[0];
        poly = poly.add_scaled(&basis, Rational::from(delta) / factorial);
        basis = basis.mul_linear(m0 + Rational::from(k as i128));
        factorial *= Rational::from(k as i128 + 1);
    }
    ClassFit {
        residue,
        poly: Some(poly),
        onset: Some(points[start].0 * period + residue),
        window: l - start,
    }
}

/// Fits `f(i) = P_{i mod period}(i div period)` for `i >= start`, where
/// `seq[k] = f(start + k)`. Each class uses its longest tail window on which
/// the `(D+1)`-th differences vanish for the least such `D`, with at least
/// `D + 3` points. Too little data gives an inconclusive fit.
pub fn fit_quasi_polynomial(seq: &[i64], start: usize, period: usize) -> QuasiPolyFit {
    assert!(period >= 1, "period must be positive");
    let classes: Vec<ClassFit> = (0..period)
        .map(|j| {
            let points: Vec<(usize, i128)> = seq
                .iter()
                .enumerate()
                .map(|(k, v)| (start + k, *v as i128))
                .filter(|(i, _)| i % period == j)
                .map(|(i, v)| (i / period, v))
                .collect();
            fit_class(j, period, &points)
        })
        .collect();
    let inconclusive = classes.iter().any(|c| c.onset.is_none());
    let degree = if inconclusive {
        None
    } else {
        classes
            .iter()
            .filter_map(|c| c.poly.as_ref().and_then(|p| p.degree()))
            .max()
    };
    // index i is covered once i >= onset of its class, so every index from
    // max(onset_j - period + 1) on is covered
    let onset = if inconclusive {
        None
    } else {
        classes
            .iter()
            .filter_map(|c| c.onset)
            .map(|o| (o + 1).saturating_sub(period).max(start))
            .max()
    };
    QuasiPolyFit {
        period,
        classes,
        degree,
        onset,
        inconclusive,
    }
}

/// `cx = deg + 1` from the fit of the Betti numbers; `0` when they vanish
/// eventually. `None` if the fit is inconclusive.
pub fn complexity_estimate(betti: &[i64], period: usize) -> Option<usize> {
    let fit = fit_quasi_polynomial(betti, 0, period);
    if fit.inconclusive {
        return None;
    }
    Some(fit.degree.map_or(0, |d| d + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i128) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn constructed_example() {
        // f(2m) = m + 1, f(2m + 1) = 1
        let seq: Vec<i64> = (0..14).map(|i| if i % 2 == 0 { i / 2 + 1 } else { 1 }).collect();
        let fit = fit_quasi_polynomial(&seq, 0, 2);
        assert!(!fit.inconclusive);
        assert_eq!(fit.degree, Some(1));
        assert_eq!(fit.classes[0].poly.as_ref().unwrap().coeffs(), &[r(1), r(1)]);
        assert_eq!(fit.classes[1].poly.as_ref().unwrap().coeffs(), &[r(1)]);
        assert_eq!(fit.onset, Some(0));
    }

    #[test]
    fn constants_and_zero() {
        let fit = fit_quasi_polynomial(&[2; 10], 0, 2);
        assert_eq!(fit.degree, Some(0));
        assert_eq!(fit.coeff(1, 0), r(2));
        let zero = fit_quasi_polynomial(&[1, 0, 0, 0, 0, 0, 0, 0], 0, 2);
        assert!(!zero.inconclusive);
        assert_eq!(zero.degree, None);
        assert_eq!(complexity_estimate(&[1, 0, 0, 0, 0, 0, 0, 0], 2), Some(0));
        assert_eq!(complexity_estimate(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10], 2), Some(2));
    }

    #[test]
    fn short_input_is_inconclusive() {
        let fit = fit_quasi_polynomial(&[1, 5, 2, 7], 0, 2);
        assert!(fit.inconclusive);
        assert_eq!(fit.degree, None);
        assert_eq!(complexity_estimate(&[1, 2, 3], 2), None);
    }

    #[test]
    fn rational_coefficients() {
        // i(i+1)/2 on even i: m(2m+1)
        let seq: Vec<i64> = (0..16).map(|i: i64| i * (i + 1) / 2).collect();
        let fit = fit_quasi_polynomial(&seq, 0, 2);
        assert_eq!(fit.degree, Some(2));
        assert_eq!(fit.classes[0].poly.as_ref().unwrap().coeffs(), &[r(0), r(1), r(2)]);
        let half = fit_quasi_polynomial(&[0, 0, 1, 1, 2, 2, 3, 3, 4, 4], 0, 1);
        assert!(half.inconclusive);
    }

    proptest! {
        #[test]
        fn fit_reproduces_the_window(
            a in prop::collection::vec(-5i64..5, 1..3),
            b in prop::collection::vec(-5i64..5, 1..3),
            len in 12usize..18,
        ) {
            let p = |c: &[i64], m: i64| c.iter().rev().fold(0, |acc, x| acc * m + x);
            let seq: Vec<i64> = (0..len as i64)
                .map(|i| if i % 2 == 0 { p(&a, i / 2) } else { p(&b, i / 2) })
                .collect();
            let fit = fit_quasi_polynomial(&seq, 0, 2);
            prop_assert!(!fit.inconclusive);
            let onset = fit.onset.unwrap();
            for (i, v) in seq.iter().enumerate().skip(onset) {
                prop_assert_eq!(fit.eval(i).unwrap(), Rational::from(*v as i128));
            }
        }

        #[test]
        fn partial_sums_raise_the_degree(
            a in prop::collection::vec(-3i64..4, 0..2),
            lead in 1i64..4,
            b in prop::collection::vec(-3i64..4, 0..2),
            start in 0i64..20,
        ) {
            // g has equal positive leading coefficients on both classes;
            // f(i + 2) - f(i) = g(i) forces deg f = deg g + 1.
            let mut ca = a.clone();
            ca.push(lead);
            let mut cb = b.clone();
            cb.resize(ca.len() - 1, 0);
            cb.push(lead);
            let p = |c: &[i64], m: i64| c.iter().rev().fold(0, |acc, x| acc * m + x);
            let g = |i: i64| if i % 2 == 0 { p(&ca, i / 2) } else { p(&cb, i / 2) };
            let mut f = vec![start, start + 1];
            for i in 2..18 {
                f.push(f[i - 2] + g(i as i64 - 2));
            }
            let gs: Vec<i64> = (0..18).map(g).collect();
            let gf = fit_quasi_polynomial(&gs, 0, 2);
            let ff = fit_quasi_polynomial(&f, 0, 2);
            prop_assert_eq!(ff.degree, gf.degree.map(|d| d + 1));
        }
    }
}
