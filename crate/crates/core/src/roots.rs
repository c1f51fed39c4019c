//! All complex roots of an integer polynomial.
//!
//! Roots come from simultaneous Aberth–Ehrlich iteration started on a
//! perturbed circle. Each root then gets an inclusion radius from the
//! classical bound
//!
//! ```text
//! r_i = d * (|p(z_i)| + e_i) / (|a_d| * prod_{j != i} |z_i - z_j|)
//! ```
//!
//! where `e_i` bounds the rounding error of evaluating `p`. When the disks
//! are pairwise disjoint every disk holds exactly one root, which is what
//! makes the radius a certificate rather than an estimate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
const MAX_ITERATIONS: u32 = 2000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    /// The true root lies within this distance of `value`.
    pub radius: f64,
    /// `|p(value)|` as evaluated in floating point.
    pub residual: f64,
}

impl Root {
    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }

    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusClass {
    Inside,
    /// Within `10 * tol` of the unit circle; never used as a conjugate.
    OnUnitCircle,
    Outside,
}

/// Roots sorted by decreasing modulus, then decreasing real part, then
/// decreasing imaginary part. Indices into this order are what callers
/// use to pick conjugates explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    roots: Vec<Root>,
    partner: Vec<Option<usize>>,
    tol: f64,
}

impl RootSet {
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Index of the complex-conjugate partner of a non-real root.
    pub fn partner(&self, index: usize) -> Option<usize> {
        self.partner.get(index).copied().flatten()
    }

    pub fn classify(&self, index: usize) -> ModulusClass {
        let m = self.roots[index].modulus();
        if (m - 1.0).abs() < 10.0 * self.tol {
            ModulusClass::OnUnitCircle
        } else if m > 1.0 {
            ModulusClass::Outside
        } else {
            ModulusClass::Inside
        }
    }

    pub fn max_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.radius).fold(0.0, f64::max)
    }
}

pub fn find_roots(p: &IntPolynomial, tol: f64) -> Result<RootSet> {
    let degree = p.degree();
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let lead = p.leading() as f64;

    let mut z = initial_guesses(p);
    let mut iterations = 0;
    let mut quiet_rounds = 0;
    loop {
        iterations += 1;
        let mut biggest_step = 0.0f64;
        for i in 0..degree {
            let (value, derivative) = p.eval_with_derivative(z[i]);
            if value == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = value / derivative;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                biggest_step = biggest_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::RootsDidNotConverge(iterations));
        }
        // A few extra sweeps after the steps stall squeeze out the last bits.
        if biggest_step < 4.0 * f64::EPSILON {
            quiet_rounds += 1;
        }
        if quiet_rounds >= 3 || iterations >= MAX_ITERATIONS {
            break;
        }
    }

    let mut roots: Vec<Root> = (0..degree)
        .map(|i| {
            let value = p.eval(z[i]);
            let rounding = 4.0 * (degree as f64 + 1.0) * f64::EPSILON * p.abs_eval(z[i].norm());
            let separation: f64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).norm())
                .product();
            let radius = degree as f64 * (value.norm() + rounding) / (lead.abs() * separation);
            Root {
                value: z[i],
                radius,
                residual: value.norm(),
            }
        })
        .collect();

    if roots.iter().any(|r| !(r.radius <= tol)) {
        return Err(Error::RootsDidNotConverge(iterations));
    }
    for i in 0..degree {
        for j in i + 1..degree {
            let gap = (roots[i].value - roots[j].value).norm();
            if gap <= roots[i].radius + roots[j].radius {
                return Err(Error::RootsDidNotConverge(iterations));
            }
        }
    }

    // An isolated disk that meets the real axis also meets its mirror
    // image, so for a real polynomial the root inside must be real.
    for r in roots.iter_mut() {
        if r.value.im.abs() <= r.radius {
            r.value.im = 0.0;
        }
    }

    roots.sort_by(|a, b| {
        b.modulus()
            .total_cmp(&a.modulus())
            .then(b.value.re.total_cmp(&a.value.re))
            .then(b.value.im.total_cmp(&a.value.im))
    });

    let partner = (0..degree)
        .map(|i| {
            if roots[i].is_real() {
                return None;
            }
            let target = roots[i].value.conj();
            (0..degree)
                .filter(|&j| j != i && !roots[j].is_real())
                .min_by(|&a, &b| {
                    (roots[a].value - target)
                        .norm()
                        .total_cmp(&(roots[b].value - target).norm())
                })
        })
        .collect::<Vec<_>>();
    for (i, mate) in partner.iter().enumerate() {
        if roots[i].is_real() {
            continue;
        }
        let j = mate.ok_or(Error::RootsDidNotConverge(iterations))?;
        let miss = (roots[j].value - roots[i].value.conj()).norm();
        if partner[j] != Some(i) || miss > roots[i].radius + roots[j].radius {
            return Err(Error::RootsDidNotConverge(iterations));
        }
    }
    Ok(RootSet {
        roots,
        partner,
        tol,
    })
}

/// Points on a circle sized by the Fujiwara bound, rotated off the real
/// axis so no starting point is a fixed point of the iteration.
fn initial_guesses(p: &IntPolynomial) -> Vec<Complex64> {
    let degree = p.degree();
    let c = p.coeffs();
    let lead = p.leading() as f64;
    let fujiwara = (0..degree)
        .map(|k| {
            let ratio = (c[k] as f64 / lead).abs();
            let power = (degree - k) as f64;
            if k == 0 {
                (ratio / 2.0).powf(1.0 / power)
            } else {
                ratio.powf(1.0 / power)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = (fujiwara * 0.5).max(0.5);
    let center = -(c[degree - 1] as f64) / (degree as f64 * lead);
    (0..degree)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / degree as f64 + 0.4;
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, angle)
        })
        .collect()
}
