//! Single-run commands: certify a polynomial, run the oracle, certify a
//! parameter rectangle.

use std::f64::consts::LN_2;
use std::fmt;

use num_complex::Complex64;

use crate::conjugates::{locate_beta1, select_conjugates, ConjugateSystem, Selection};
use crate::criteria::{dimension_report, height_check, CriterionVerdict, HeightCheck, ReportOptions};
use crate::depth::{certify_region, parameter_box, CertifiedDepth};
use crate::error::{Error, Result};
use crate::geometry::TailDepth;
use crate::harness::ExitStatus;
use crate::oracle::{entropy_hn, entropy_hn_with_counts, EntropyReport};
use crate::poly::IntPolynomial;
use crate::roots::{find_roots, DEFAULT_ROOT_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyRequest {
    pub polynomial: IntPolynomial,
    pub selection: Selection,
    pub beta1_index: Option<usize>,
    pub options: ReportOptions,
}

#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub system: ConjugateSystem,
    pub verdict: CriterionVerdict,
    pub height: HeightCheck,
    /// `p(1) = 0` or `p(-1) = 0`, so `p` is not a minimal polynomial.
    pub has_unit_root: bool,
}

impl CertifyReport {
    pub fn status(&self) -> ExitStatus {
        if self.verdict.certified() {
            ExitStatus::Certified
        } else {
            ExitStatus::Inconclusive
        }
    }
}

impl fmt::Display for CertifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.verdict;
        writeln!(f, "polynomial: {}", self.system.polynomial())?;
        writeln!(f, "system: {}", self.system.describe())?;
        if self.has_unit_root {
            writeln!(f, "warning: +-1 is a root, so the polynomial is not minimal")?;
        }
        writeln!(f, "height: {}", self.height.note)?;
        writeln!(f, "method: {}", v.method)?;
        if let Some(n) = v.n {
            writeln!(f, "n: {n}")?;
        }
        if let Some(m) = v.mn {
            writeln!(f, "m_n: {m}")?;
        }
        writeln!(f, "ratio: {:.9}", v.ratio_or_bound)?;
        writeln!(f, "details: {}", v.details)?;
        write!(f, "verdict: {}", v.conclusion)
    }
}

pub fn run_certify(req: &CertifyRequest) -> Result<CertifyReport> {
    let roots = find_roots(&req.polynomial, DEFAULT_ROOT_TOL)?;
    let system = select_conjugates(&req.polynomial, &roots, &req.selection, req.beta1_index)?;
    let verdict = dimension_report(&system, &req.options)?;
    Ok(CertifyReport {
        height: height_check(&req.polynomial, false),
        has_unit_root: req.polynomial.has_unit_root(),
        system,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub polynomial: IntPolynomial,
    pub entropy: EntropyReport,
    pub beta1: Option<f64>,
}

impl OracleReport {
    /// `H_n / (n log beta1)` when `beta1` is known.
    pub fn ratio(&self) -> Option<f64> {
        self.beta1
            .map(|b| self.entropy.hn / (self.entropy.n as f64 * b.ln()))
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entropy;
        writeln!(f, "polynomial: {}", self.polynomial)?;
        writeln!(f, "n: {}", e.n)?;
        writeln!(f, "H_n: {:.12} ({:.12} log 2)", e.hn, e.hn / LN_2)?;
        if let (Some(b), Some(r)) = (self.beta1, self.ratio()) {
            writeln!(f, "beta1: {b:.10}")?;
            writeln!(f, "H_n/(n log beta1): {r:.9}")?;
        }
        write!(f, "max N_n: {}", e.max_n)?;
        if let Some(counts) = &e.per_word_counts {
            for (word, count) in counts {
                write!(f, "\n{word} {count}")?;
            }
        }
        Ok(())
    }
}

pub fn run_oracle(p: &IntPolynomial, n: usize, per_word: bool) -> Result<OracleReport> {
    let entropy = if per_word {
        entropy_hn_with_counts(p, n)?
    } else {
        entropy_hn(p, n)?
    };
    let beta1 = find_roots(p, DEFAULT_ROOT_TOL)
        .ok()
        .and_then(|roots| {
            locate_beta1(&roots, None)
                .ok()
                .map(|i| roots.roots()[i].value.re)
        });
    Ok(OracleReport {
        polynomial: p.clone(),
        entropy,
        beta1,
    })
}

/// Parses `1.7`, `-1.5`, `0.3+1.2i` or `0.3-1.2i`.
pub fn parse_parameter(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::DegenerateRegion(format!("cannot parse parameter {text:?}"));
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let Some(split) = (1..bytes.len()).rev().find(|&k| {
        matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E')
    }) else {
        return body.parse::<f64>().map(|y| Complex64::new(0.0, y)).map_err(|_| bad());
    };
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = match &body[split..] {
        "+" => 1.0,
        "-" => -1.0,
        t => t.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionReport {
    pub centers: Vec<Complex64>,
    pub halfwidths: Vec<f64>,
    pub result: CertifiedDepth,
}

impl RegionReport {
    pub fn status(&self) -> ExitStatus {
        if self.result.certified {
            ExitStatus::Certified
        } else {
            ExitStatus::Inconclusive
        }
    }
}

impl fmt::Display for RegionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.result;
        let centers: Vec<String> = self
            .centers
            .iter()
            .map(|c| {
                if c.im == 0.0 {
                    format!("{}", c.re)
                } else {
                    format!("{}{:+}i", c.re, c.im)
                }
            })
            .collect();
        writeln!(f, "parameters: {}", centers.join(", "))?;
        writeln!(f, "halfwidths: {:?}", self.halfwidths)?;
        writeln!(f, "n: {}", r.n)?;
        writeln!(f, "m_lower: {}", r.m_lower)?;
        writeln!(f, "m_upper: {}", r.m_upper)?;
        write!(f, "certified: {}", r.certified)?;
        if let Some(ln) = r.ln() {
            let b1 = self.centers[0].re;
            write!(
                f,
                "\nL_n: {ln:.12}\nL_n/(n log beta1) at the centre: {:.9}",
                ln / (r.n as f64 * b1.ln())
            )?;
        }
        Ok(())
    }
}

pub fn run_certify_region(
    centers: &[Complex64],
    halfwidths: &[f64],
    n: usize,
    tail: TailDepth,
) -> Result<RegionReport> {
    let params = parameter_box(centers, halfwidths)?;
    let result = certify_region(&params, n, tail)?;
    Ok(RegionReport {
        centers: centers.to_vec(),
        halfwidths: halfwidths.to_vec(),
        result,
    })
}
