//! Sufficient conditions for `dim_H(nu_beta) = 1`.
//!
//! For algebraic `beta` the dimension is `min(1, H(beta) / log beta)`. Two
//! routes are offered: a real conjugate `c` with
//! `log(beta1) / |log|c|| < t` for a known constant `t`, and the box bound
//! `L_n / (n log beta1) > 1`. Both are evaluated on intervals that cover
//! the root-finding error, so a verdict never rests on rounding.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::conjugates::{normalize_conjugate, ConjugateSystem};
use crate::depth::{best_bound, certify_region};
use crate::error::{Error, Result};
use crate::geometry::TailDepth;
use crate::interval::Interval;
use crate::poly::IntPolynomial;
use crate::roots::ModulusClass;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Threshold {
    /// 0.82
    Original,
    /// 0.9804085
    #[default]
    Improved,
}

impl Threshold {
    pub fn value(self) -> f64 {
        match self {
            Threshold::Original => 0.82,
            Threshold::Improved => 0.9804085,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0.82" => Ok(Threshold::Original),
            "0.9804085" => Ok(Threshold::Improved),
            other => Err(Error::NotApplicable(format!(
                "unknown threshold {other}; use 0.82 or 0.9804085"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Threshold(Threshold),
    BoxBound,
    None,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Threshold(t) => write!(f, "threshold-{t}"),
            Method::BoxBound => write!(f, "box-bound-Ln"),
            Method::None => write!(f, "none"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    DimensionOneCertified,
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::DimensionOneCertified => write!(f, "dimension-one-certified"),
            Conclusion::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionVerdict {
    pub method: Method,
    /// Threshold ratio `r`, or `L_n / (n log beta1)` for the box bound.
    pub ratio_or_bound: f64,
    pub conclusion: Conclusion,
    /// Word length used by the box bound.
    pub n: Option<usize>,
    pub mn: Option<usize>,
    pub details: String,
}

impl CriterionVerdict {
    pub fn certified(&self) -> bool {
        self.conclusion == Conclusion::DimensionOneCertified
    }
}

/// Enclosure of `log(beta1) / |log|c||`.
fn threshold_ratio(beta1: Interval, conj_abs: Interval) -> Result<Interval> {
    let inapplicable = || {
        Error::NotApplicable(format!(
            "conjugate modulus {conj_abs} is not separated from 0 and 1"
        ))
    };
    let log_c = conj_abs.ln().ok_or_else(inapplicable)?;
    if log_c.contains_zero() {
        return Err(inapplicable());
    }
    let log_c = if log_c.lo > 0.0 { log_c } else { -log_c };
    let log_b = beta1
        .ln()
        .ok_or_else(|| Error::OutsideParameterSpace(format!("beta1 {beta1}")))?;
    Ok(log_b * log_c.recip().expect("separated from zero"))
}

/// The threshold test for enclosures of `beta1` and a real conjugate.
pub fn threshold_criterion_enclosed(
    beta1: Interval,
    real_conj: Interval,
    threshold: Threshold,
) -> Result<CriterionVerdict> {
    let abs = if real_conj.lo > 0.0 {
        real_conj
    } else if real_conj.hi < 0.0 {
        -real_conj
    } else {
        return Err(Error::NotApplicable(format!(
            "conjugate {real_conj} may be zero"
        )));
    };
    let r = threshold_ratio(beta1, abs)?;
    let certified = r.hi < threshold.value();
    let c = real_conj.mid();
    Ok(CriterionVerdict {
        method: Method::Threshold(threshold),
        ratio_or_bound: r.mid(),
        conclusion: if certified {
            Conclusion::DimensionOneCertified
        } else {
            Conclusion::Inconclusive
        },
        n: None,
        mn: None,
        details: format!(
            "conjugate {c:.10} (normalised {:.10}), r in {r}, threshold {threshold}",
            normalize_conjugate(c).unwrap_or(f64::NAN)
        ),
    })
}

/// `log(beta1) / |log|c||` against `threshold`; certifies only if the
/// strict inequality survives outward rounding.
pub fn threshold_criterion(
    beta1: f64,
    real_conj: Complex64,
    threshold: Threshold,
) -> Result<CriterionVerdict> {
    if real_conj.im != 0.0 {
        return Err(Error::NotApplicable(format!(
            "conjugate {real_conj} is not real"
        )));
    }
    threshold_criterion_enclosed(
        Interval::point(beta1),
        Interval::point(real_conj.re),
        threshold,
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    /// Threshold first, then the box bound.
    #[default]
    Auto,
    Threshold,
    Box,
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(MethodChoice::Auto),
            "threshold" => Ok(MethodChoice::Threshold),
            "box" => Ok(MethodChoice::Box),
            other => Err(Error::NotApplicable(format!("unknown method {other}"))),
        }
    }
}

/// Options for [`dimension_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub n_max: usize,
    pub threshold: Threshold,
    pub method: MethodChoice,
    pub tail: TailDepth,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            n_max: 10,
            threshold: Threshold::default(),
            method: MethodChoice::Auto,
            tail: TailDepth::Auto,
        }
    }
}

fn beta1_enclosure(sys: &ConjugateSystem) -> Interval {
    Interval::around(sys.beta1(), sys.beta1_radius())
}

/// Threshold test on every real root other than `beta1` that is off the
/// unit circle; returns the first certifying verdict, else the one with the
/// smallest ratio.
fn threshold_pass(sys: &ConjugateSystem, threshold: Threshold) -> Result<Option<CriterionVerdict>> {
    let roots = sys.roots();
    let beta1 = beta1_enclosure(sys);
    let mut best: Option<CriterionVerdict> = None;
    for (i, root) in roots.roots().iter().enumerate() {
        if i == sys.beta1_index()
            || !root.is_real()
            || roots.classify(i) == ModulusClass::OnUnitCircle
        {
            continue;
        }
        let conj = Interval::around(root.value.re, root.radius);
        let verdict = match threshold_criterion_enclosed(beta1, conj, threshold) {
            Ok(v) => v,
            Err(Error::NotApplicable(_)) => continue,
            Err(e) => return Err(e),
        };
        if verdict.certified() {
            return Ok(Some(verdict));
        }
        if best
            .as_ref()
            .map_or(true, |b| verdict.ratio_or_bound < b.ratio_or_bound)
        {
            best = Some(verdict);
        }
    }
    Ok(best)
}

/// Tries the threshold criterion on each real conjugate, then the box
/// bound up to `n_max`. A box certificate is re-checked over the
/// root-error enclosures of every generator and with the upper end of
/// `log beta1`.
pub fn dimension_report(sys: &ConjugateSystem, opts: &ReportOptions) -> Result<CriterionVerdict> {
    let mut fallback: Option<CriterionVerdict> = None;
    if opts.method != MethodChoice::Box {
        if let Some(v) = threshold_pass(sys, opts.threshold)? {
            if v.certified() {
                return Ok(v);
            }
            fallback = Some(v);
        }
        if opts.method == MethodChoice::Threshold {
            return Ok(fallback.unwrap_or_else(|| CriterionVerdict {
                method: Method::None,
                ratio_or_bound: f64::NAN,
                conclusion: Conclusion::Inconclusive,
                n: None,
                mn: None,
                details: "no real conjugate off the unit circle".into(),
            }));
        }
    }

    let scan = best_bound(sys, opts.n_max, opts.tail)?;
    let conjugates = sys.describe();
    if let Some(n) = scan.first_proving_n {
        let point = scan.history.last().expect("proving length scanned");
        let region = certify_region(&sys.generators_widened(1.0), n, opts.tail)?;
        let ln_m = Interval::point(region.m_upper as f64)
            .ln()
            .expect("m_n >= 1");
        let ln = Interval::point(n as f64) * Interval::point(LN_2) - ln_m;
        let log_beta = beta1_enclosure(sys).ln().expect("beta1 > 1");
        let ratio_lo = (ln * (Interval::point(n as f64) * log_beta).recip().expect("beta1 > 1")).lo;
        let certified = ratio_lo > 1.0;
        return Ok(CriterionVerdict {
            method: if certified { Method::BoxBound } else { Method::None },
            ratio_or_bound: point.ratio,
            conclusion: if certified {
                Conclusion::DimensionOneCertified
            } else {
                Conclusion::Inconclusive
            },
            n: Some(n),
            mn: Some(point.mn),
            details: format!(
                "{conjugates}; m_{n} = {} (at most {} over root enclosures), ratio >= {ratio_lo:.9}",
                point.mn, region.m_upper
            ),
        });
    }

    let best = scan.best;
    let box_verdict = CriterionVerdict {
        method: Method::None,
        ratio_or_bound: best.ratio,
        conclusion: Conclusion::Inconclusive,
        n: Some(best.n),
        mn: Some(best.mn),
        details: format!(
            "{conjugates}; best ratio {:.9} at n = {} (m_n = {}), no n <= {} proves",
            best.ratio, best.n, best.mn, opts.n_max
        ),
    };
    Ok(match fallback {
        Some(t) if sys.conjugates().is_empty() => t,
        _ => box_verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightCheck {
    pub needed: bool,
    pub note: String,
}

/// Whether a certificate is worth computing. If `beta` is not a root of a
/// height-1 polynomial then `H(beta) = log 2` already; without factoring
/// that can only be concluded when the caller asserts `p` is itself the
/// full candidate height-1 polynomial and its height is not 1.
pub fn height_check(p: &IntPolynomial, asserted_full_witness: bool) -> HeightCheck {
    if p.height() != 1 && asserted_full_witness {
        return HeightCheck {
            needed: false,
            note: format!(
                "height {} is not 1, so H(beta) = log 2 and the dimension is 1",
                p.height()
            ),
        };
    }
    HeightCheck {
        needed: true,
        note: if p.height() == 1 {
            "height 1".into()
        } else {
            format!(
                "height {}; divisibility of a height-1 polynomial is not checked",
                p.height()
            )
        },
    }
}
