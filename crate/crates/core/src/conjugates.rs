//! Choosing beta1 and the expanding Galois conjugates used as extra
//! coordinates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Generator;
use crate::interval::{ComplexInterval, Interval};
use crate::poly::IntPolynomial;
use crate::roots::{ModulusClass, RootSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjugateKind {
    RealPositive,
    RealNegative,
    /// Representative with positive imaginary part.
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conjugate {
    pub root_index: usize,
    pub value: Complex64,
    pub radius: f64,
    pub kind: ConjugateKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Selection {
    /// Every root of modulus > 1 other than beta1, one per conjugate pair.
    AllOutsideUnitCircle,
    /// Root indices in `RootSet` order.
    Explicit(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct ConjugateSystem {
    beta1: f64,
    beta1_index: usize,
    beta1_radius: f64,
    conjugates: Vec<Conjugate>,
    polynomial: IntPolynomial,
    roots: RootSet,
}

impl ConjugateSystem {
    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta1_index(&self) -> usize {
        self.beta1_index
    }

    pub fn beta1_radius(&self) -> f64 {
        self.beta1_radius
    }

    pub fn conjugates(&self) -> &[Conjugate] {
        &self.conjugates
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.polynomial
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    /// Coordinate generators at the computed root values.
    pub fn generators(&self) -> Vec<Generator> {
        self.generators_widened(0.0)
    }

    /// Generators as intervals covering each root's inclusion disk
    /// (scaled by `scale`; `0.0` gives points).
    pub fn generators_widened(&self, scale: f64) -> Vec<Generator> {
        let mut out = vec![Generator::Real(Interval::around(
            self.beta1,
            self.beta1_radius * scale,
        ))];
        out.extend(self.conjugates.iter().map(|c| {
            let w = c.radius * scale;
            match c.kind {
                ConjugateKind::Complex => {
                    Generator::Complex(ComplexInterval::around(c.value, w, w))
                }
                _ => Generator::Real(Interval::around(c.value.re, w)),
            }
        }));
        out
    }

    /// Short description such as `beta1=1.2720, -1.2720` for reports.
    pub fn describe(&self) -> String {
        let mut s = format!("beta1={:.10}", self.beta1);
        for c in &self.conjugates {
            match c.kind {
                ConjugateKind::Complex => {
                    s.push_str(&format!(", {:.6}{:+.6}i", c.value.re, c.value.im))
                }
                _ => s.push_str(&format!(", {:.10}", c.value.re)),
            }
        }
        s
    }
}

/// Finds the unique root of `roots` in (1, 2) unless `beta1_index` names one.
pub fn locate_beta1(roots: &RootSet, beta1_index: Option<usize>) -> Result<usize> {
    if let Some(i) = beta1_index {
        let r = roots.roots().get(i).ok_or(Error::RootIndexOutOfRange(i))?;
        if !(r.is_real() && r.value.re > 1.0 && r.value.re < 2.0) {
            return Err(Error::NoRootInUnitToTwo);
        }
        return Ok(i);
    }
    let candidates: Vec<usize> = roots
        .roots()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_real() && r.value.re > 1.0 && r.value.re < 2.0)
        .map(|(i, _)| i)
        .collect();
    match candidates.len() {
        0 => Err(Error::NoRootInUnitToTwo),
        1 => Ok(candidates[0]),
        k => Err(Error::AmbiguousBeta1(k)),
    }
}

pub fn select_conjugates(
    p: &IntPolynomial,
    roots: &RootSet,
    which: &Selection,
    beta1_index: Option<usize>,
) -> Result<ConjugateSystem> {
    let b1 = locate_beta1(roots, beta1_index)?;
    let indices: Vec<usize> = match which {
        Selection::AllOutsideUnitCircle => (0..roots.len())
            .filter(|&i| i != b1 && roots.classify(i) == ModulusClass::Outside)
            .filter(|&i| roots.roots()[i].value.im >= 0.0)
            .collect(),
        Selection::Explicit(list) => list.clone(),
    };

    let mut conjugates: Vec<Conjugate> = Vec::with_capacity(indices.len());
    for &requested in &indices {
        let root = *roots
            .roots()
            .get(requested)
            .ok_or(Error::RootIndexOutOfRange(requested))?;
        if roots.classify(requested) != ModulusClass::Outside {
            return Err(Error::ConjugateNotExpanding {
                index: requested,
                modulus: root.modulus(),
            });
        }
        if root.modulus() > 2.0 {
            return Err(Error::ConjugateOutsideParameterSpace {
                index: requested,
                modulus: root.modulus(),
            });
        }
        // complex pairs are represented by the upper half-plane member
        let index = match roots.partner(requested) {
            Some(j) if root.value.im < 0.0 => j,
            _ => requested,
        };
        if index == b1 || conjugates.iter().any(|c| c.root_index == index) {
            return Err(Error::DuplicateConjugate(requested));
        }
        let root = roots.roots()[index];
        let kind = if !root.is_real() {
            ConjugateKind::Complex
        } else if root.value.re > 0.0 {
            ConjugateKind::RealPositive
        } else {
            ConjugateKind::RealNegative
        };
        conjugates.push(Conjugate {
            root_index: index,
            value: root.value,
            radius: root.radius,
            kind,
        });
    }

    Ok(ConjugateSystem {
        beta1: roots.roots()[b1].value.re,
        beta1_index: b1,
        beta1_radius: roots.roots()[b1].radius,
        conjugates,
        polynomial: p.clone(),
        roots: roots.clone(),
    })
}

/// Maps a real conjugate to the value > 1 with the same finite-level
/// entropies: `b`, `1/b`, `-1/b` or `-b` depending on the range of `b`.
pub fn normalize_conjugate(b2: f64) -> Result<f64> {
    if !b2.is_finite() || b2 == 0.0 || b2.abs() == 1.0 {
        return Err(Error::UnitOrZeroConjugate(b2));
    }
    Ok(if b2 > 1.0 {
        b2
    } else if b2 > 0.0 {
        1.0 / b2
    } else if b2 > -1.0 {
        -1.0 / b2
    } else {
        -b2
    })
}
