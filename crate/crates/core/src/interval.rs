//! Closed intervals with outward rounding.
//!
//! Every arithmetic result is widened by one ulp on each side, which
//! dominates the half-ulp error of round-to-nearest. The enclosure is
//! therefore valid without switching the FPU rounding mode.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// `[x - r, x + r]`, rounded outward.
    pub fn around(x: f64, r: f64) -> Self {
        if r == 0.0 {
            Interval::point(x)
        } else {
            Interval::new(down(x - r), up(x + r))
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> f64 {
        if self.lo <= 0.0 && 0.0 <= self.hi {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `{min(x, 0) : x in self}`
    pub fn min_zero(&self) -> Interval {
        Interval::new(self.lo.min(0.0), self.hi.min(0.0))
    }

    /// `{max(x, 0) : x in self}`
    pub fn max_zero(&self) -> Interval {
        Interval::new(self.lo.max(0.0), self.hi.max(0.0))
    }

    pub fn sqr(&self) -> Interval {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.contains_zero() {
            Interval::new(0.0, up(a.max(b)))
        } else {
            Interval::new(down(a.min(b)).max(0.0), up(a.max(b)))
        }
    }

    pub fn sqrt(&self) -> Interval {
        Interval::new(down(self.lo.max(0.0).sqrt()).max(0.0), up(self.hi.sqrt()))
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::new(down(1.0 / self.hi), up(1.0 / self.lo)))
    }

    pub fn ln(&self) -> Option<Interval> {
        if self.lo <= 0.0 {
            return None;
        }
        // libm ln is faithful to within an ulp or so; widen by two.
        Some(Interval::new(
            down(down(self.lo.ln())),
            up(up(self.hi.ln())),
        ))
    }

    pub fn powi(&self, k: u32) -> Interval {
        (0..k).fold(Interval::point(1.0), |acc, _| acc * *self)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(down(self.lo + o.lo), up(self.hi + o.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new(down(self.lo - o.hi), up(self.hi - o.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo == 0.0 && hi == 0.0 {
            return Interval::ZERO;
        }
        Interval::new(down(lo), up(hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Rectangular complex interval `re + i im`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn point(z: Complex64) -> Self {
        ComplexInterval {
            re: Interval::point(z.re),
            im: Interval::point(z.im),
        }
    }

    pub fn real(x: Interval) -> Self {
        ComplexInterval {
            re: x,
            im: Interval::ZERO,
        }
    }

    pub fn around(z: Complex64, re_radius: f64, im_radius: f64) -> Self {
        ComplexInterval {
            re: Interval::around(z.re, re_radius),
            im: Interval::around(z.im, im_radius),
        }
    }

    pub fn norm_sqr(&self) -> Interval {
        self.re.sqr() + self.im.sqr()
    }

    pub fn modulus(&self) -> Interval {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Option<ComplexInterval> {
        let d = self.norm_sqr().recip()?;
        Some(ComplexInterval {
            re: self.re * d,
            im: -(self.im * d),
        })
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }
}

impl Mul for ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, o: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// Closed disk `|z - center| <= radius`. Powers of a complex number kept
/// as disks grow their error linearly, where rectangles would compound
/// the wrapping effect at every multiplication.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexDisk {
    pub center: Complex64,
    pub radius: f64,
}

/// `a + b` rounded up, for non-negative radii.
fn add_up(a: f64, b: f64) -> f64 {
    up(a + b)
}

/// `a * b` rounded up, for non-negative radii.
fn mul_up(a: f64, b: f64) -> f64 {
    up(a * b)
}

impl ComplexDisk {
    /// Smallest disk about the midpoint that covers the rectangle.
    pub fn from_rect(z: &ComplexInterval) -> Self {
        let center = z.mid();
        let dx = up((z.re.hi - center.re).max(center.re - z.re.lo));
        let dy = up((z.im.hi - center.im).max(center.im - z.im.lo));
        ComplexDisk {
            center,
            radius: up(up(dx.hypot(dy)) * (1.0 + 4.0 * f64::EPSILON)),
        }
    }

    pub fn to_rect(&self) -> ComplexInterval {
        ComplexInterval {
            re: Interval::around(self.center.re, self.radius),
            im: Interval::around(self.center.im, self.radius),
        }
    }

    pub fn mul(&self, o: &ComplexDisk) -> ComplexDisk {
        // w1 w2 - c1 c2 = c1 (w2 - c2) + c2 (w1 - c1) + (w1 - c1)(w2 - c2)
        let product = ComplexDisk::from_rect(
            &(ComplexInterval::point(self.center) * ComplexInterval::point(o.center)),
        );
        let c1 = ComplexInterval::point(self.center).modulus().hi;
        let c2 = ComplexInterval::point(o.center).modulus().hi;
        let spread = add_up(
            add_up(mul_up(c1, o.radius), mul_up(c2, self.radius)),
            mul_up(self.radius, o.radius),
        );
        ComplexDisk {
            center: product.center,
            radius: add_up(product.radius, spread),
        }
    }

    /// `None` when the disk contains zero.
    pub fn recip(&self) -> Option<ComplexDisk> {
        let c = ComplexInterval::point(self.center);
        let m = c.modulus().lo;
        if !(m > self.radius) {
            return None;
        }
        // |1/w - 1/c| = |c - w| / (|w| |c|) <= r / ((|c| - r) |c|)
        let inv = ComplexDisk::from_rect(&c.recip()?);
        let gap = down(m - self.radius);
        let spread = up(self.radius / down(gap * m));
        Some(ComplexDisk {
            center: inv.center,
            radius: add_up(inv.radius, spread),
        })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}
