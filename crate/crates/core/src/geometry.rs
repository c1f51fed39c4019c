//! Boxes bounding the attractor and its level-n pieces.
//!
//! Each coordinate generator `beta` contributes one axis when real and two
//! (real part, imaginary part) when complex. Along an axis with terms
//! `c_i` (the component of `beta^-i`), the image of the word `a_1..a_n` is
//! enclosed by
//!
//! ```text
//! sum_{i<=n} a_i c_i + [ sum_{i>n} min(c_i, 0) - pad, sum_{i>n} max(c_i, 0) + pad ]
//! ```
//!
//! with the infinite tails truncated at depth `N` and `pad` bounding what
//! was cut off. For a real `beta > 1` this is exactly the affine image of
//! `[0, 1/(beta-1)]`; for `beta < -1` it is the image of
//! `[beta/(beta^2-1), 1/(beta^2-1)]`.
//!
//! All quantities are carried as outward-rounded intervals so the same code
//! serves single parameter points and whole parameter rectangles.

use crate::error::{Error, Result};
use crate::interval::{ComplexDisk, ComplexInterval, Interval};

/// Padding below which the truncated tail is treated as resolved.
const AUTO_PADDING: f64 = 1e-18;
const AUTO_MIN_DEPTH: usize = 64;
const AUTO_MAX_DEPTH: usize = 200_000;

/// A coordinate generator: beta1 or one of the chosen conjugates, possibly
/// uncertain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Generator {
    Real(Interval),
    Complex(ComplexInterval),
}

impl Generator {
    pub fn real(x: f64) -> Self {
        Generator::Real(Interval::point(x))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Generator::Complex(ComplexInterval::point(num_complex::Complex64::new(re, im)))
    }

    pub fn dims(&self) -> usize {
        match self {
            Generator::Real(_) => 1,
            Generator::Complex(_) => 2,
        }
    }

    pub fn modulus(&self) -> Interval {
        match self {
            Generator::Real(x) => {
                if x.lo >= 0.0 {
                    *x
                } else if x.hi <= 0.0 {
                    -*x
                } else {
                    Interval::new(0.0, x.mag())
                }
            }
            Generator::Complex(z) => z.modulus(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailDepth {
    /// Deep enough that the padding is below 1e-18 (at least 64).
    Auto,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateLayout {
    generators: Vec<Generator>,
    dim: usize,
}

impl CoordinateLayout {
    pub fn new(generators: Vec<Generator>) -> Self {
        let dim = generators.iter().map(Generator::dims).sum();
        CoordinateLayout { generators, dim }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Per-axis digit terms and tail enclosures for every depth `0..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailEnvelope {
    depth: usize,
    n_max: usize,
    /// `terms[axis][i - 1]` encloses the axis component of `beta^-i`.
    terms: Vec<Vec<Interval>>,
    tail_lo: Vec<Vec<Interval>>,
    tail_hi: Vec<Vec<Interval>>,
    padding: Vec<f64>,
}

impl TailEnvelope {
    /// Truncation depth `N`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, axis: usize, i: usize) -> Interval {
        self.terms[axis][i - 1]
    }

    /// Encloses the smallest continuation after depth `n`.
    pub fn tail_lo(&self, axis: usize, n: usize) -> Interval {
        self.tail_lo[axis][n]
    }

    /// Encloses the largest continuation after depth `n`.
    pub fn tail_hi(&self, axis: usize, n: usize) -> Interval {
        self.tail_hi[axis][n]
    }

    pub fn padding(&self, axis: usize) -> f64 {
        self.padding[axis]
    }

    /// Outer enclosure of the continuation set after depth `n`.
    pub fn outer(&self, axis: usize, n: usize) -> Interval {
        Interval::new(self.tail_lo[axis][n].lo, self.tail_hi[axis][n].hi)
    }
}

/// Axis-aligned closed box.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxK {
    axes: Vec<Interval>,
}

impl BoxK {
    pub fn new(axes: Vec<Interval>) -> Self {
        BoxK { axes }
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        self.axes.len() == p.len() && self.axes.iter().zip(p).all(|(a, &x)| a.contains(x))
    }

    pub fn contains_box(&self, other: &BoxK) -> bool {
        self.axes.len() == other.axes.len()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.contains_interval(b))
    }

    pub fn intersects(&self, other: &BoxK) -> bool {
        self.axes.len() == other.axes.len()
            && self.axes.iter().zip(&other.axes).all(|(a, b)| a.intersects(b))
    }
}

fn auto_depth(min_modulus: f64, n_max: usize) -> usize {
    let needed = ((AUTO_PADDING * (min_modulus - 1.0)).ln() / -min_modulus.ln()).ceil();
    let needed = if needed.is_finite() && needed > 0.0 {
        (needed as usize).min(AUTO_MAX_DEPTH)
    } else {
        AUTO_MAX_DEPTH
    };
    needed.max(AUTO_MIN_DEPTH).max(n_max)
}

pub fn build_layout(
    generators: &[Generator],
    tail: TailDepth,
    n_max: usize,
) -> Result<(CoordinateLayout, TailEnvelope)> {
    let moduli: Vec<Interval> = generators.iter().map(Generator::modulus).collect();
    if let Some(m) = moduli.iter().find(|m| m.lo <= 1.0) {
        return Err(Error::OutsideParameterSpace(format!(
            "generator modulus {} is not above 1",
            m
        )));
    }
    let depth = match tail {
        TailDepth::Fixed(n) => n,
        TailDepth::Auto => {
            let smallest = moduli.iter().map(|m| m.lo).fold(f64::INFINITY, f64::min);
            auto_depth(smallest, n_max)
        }
    };
    if depth < n_max {
        return Err(Error::TruncationTooShallow { tail: depth, n_max });
    }

    let layout = CoordinateLayout::new(generators.to_vec());
    let mut terms = Vec::with_capacity(layout.dim());
    let mut padding = Vec::with_capacity(layout.dim());

    for (g, m) in generators.iter().zip(&moduli) {
        // |sum_{j>N} a_j c_j| <= sum_{j>N} |beta|^-j = |beta|^-N / (|beta| - 1)
        let r = Interval::point(m.lo);
        let pad = (r.recip().expect("modulus > 1").powi(depth as u32)
            * (r - Interval::point(1.0)).recip().expect("modulus > 1"))
        .hi;
        match g {
            Generator::Real(x) => {
                let inv = x.recip().expect("modulus > 1");
                let mut acc = Interval::point(1.0);
                let powers: Vec<Interval> = (0..depth)
                    .map(|_| {
                        acc = acc * inv;
                        acc
                    })
                    .collect();
                terms.push(powers);
                padding.push(pad);
            }
            Generator::Complex(z) => {
                let inv = ComplexDisk::from_rect(z)
                    .recip()
                    .expect("modulus > 1");
                let mut acc = inv;
                let mut re = Vec::with_capacity(depth);
                let mut im = Vec::with_capacity(depth);
                for j in 0..depth {
                    if j > 0 {
                        acc = acc.mul(&inv);
                    }
                    let rect = acc.to_rect();
                    re.push(rect.re);
                    im.push(rect.im);
                }
                terms.push(re);
                terms.push(im);
                padding.push(pad);
                padding.push(pad);
            }
        }
    }

    let mut tail_lo = Vec::with_capacity(terms.len());
    let mut tail_hi = Vec::with_capacity(terms.len());
    for (axis_terms, &pad) in terms.iter().zip(&padding) {
        let mut lo = vec![Interval::ZERO; n_max + 1];
        let mut hi = vec![Interval::ZERO; n_max + 1];
        let mut sum_lo = Interval::ZERO;
        let mut sum_hi = Interval::ZERO;
        // j runs from N down to 1; after adding term j the sums cover j..=N
        for j in (1..=depth).rev() {
            if j <= n_max {
                lo[j] = sum_lo - Interval::point(pad);
                hi[j] = sum_hi + Interval::point(pad);
            }
            let c = axis_terms[j - 1];
            sum_lo = sum_lo + c.min_zero();
            sum_hi = sum_hi + c.max_zero();
        }
        lo[0] = sum_lo - Interval::point(pad);
        hi[0] = sum_hi + Interval::point(pad);
        tail_lo.push(lo);
        tail_hi.push(hi);
    }

    // only the first n_max terms are ever used as fixed digits
    for t in terms.iter_mut() {
        t.truncate(n_max);
        t.shrink_to_fit();
    }

    Ok((
        layout,
        TailEnvelope {
            depth,
            n_max,
            terms,
            tail_lo,
            tail_hi,
            padding,
        },
    ))
}

/// The depth-0 box `I`; it contains every word box.
pub fn bounding_region(env: &TailEnvelope) -> BoxK {
    BoxK::new((0..env.dim()).map(|k| env.outer(k, 0)).collect())
}

/// Running state of one word while digits are appended.
#[derive(Clone, Debug)]
struct WordState {
    sums: Vec<Interval>,
    outer_lo: Vec<f64>,
    outer_hi: Vec<f64>,
    inner_lo: Vec<f64>,
    inner_hi: Vec<f64>,
}

impl WordState {
    fn root(env: &TailEnvelope) -> Self {
        let dim = env.dim();
        let outer: Vec<Interval> = (0..dim).map(|k| env.outer(k, 0)).collect();
        WordState {
            sums: vec![Interval::ZERO; dim],
            outer_lo: outer.iter().map(|x| x.lo).collect(),
            outer_hi: outer.iter().map(|x| x.hi).collect(),
            inner_lo: (0..dim).map(|k| env.tail_lo(k, 0).hi).collect(),
            inner_hi: (0..dim).map(|k| env.tail_hi(k, 0).lo).collect(),
        }
    }

    /// Appends digit `a_level`. The new outer box is clipped to the old
    /// one: both enclose the true child box, so their intersection does
    /// too, and nesting then holds exactly despite rounding.
    fn push(&mut self, env: &TailEnvelope, level: usize, digit: u8) {
        for k in 0..self.sums.len() {
            if digit == 1 {
                self.sums[k] = self.sums[k] + env.term(k, level);
            }
            let lo = self.sums[k] + env.tail_lo(k, level);
            let hi = self.sums[k] + env.tail_hi(k, level);
            self.outer_lo[k] = self.outer_lo[k].max(lo.lo);
            self.outer_hi[k] = self.outer_hi[k].min(hi.hi);
            self.inner_lo[k] = lo.hi;
            self.inner_hi[k] = hi.lo;
        }
    }
}

fn check_length(n: usize, env: &TailEnvelope) -> Result<()> {
    if n > env.n_max() {
        return Err(Error::OverBudget {
            n,
            budget: env.n_max(),
        });
    }
    Ok(())
}

fn state_for(digits: &[u8], env: &TailEnvelope) -> Result<WordState> {
    check_length(digits.len(), env)?;
    if let Some(d) = digits.iter().find(|&&d| d > 1) {
        return Err(Error::InvalidWord(format!("digit {d} is not 0 or 1")));
    }
    let mut state = WordState::root(env);
    for (i, &d) in digits.iter().enumerate() {
        state.push(env, i + 1, d);
    }
    Ok(state)
}

/// The outer box for `digits` (`a_1` first); the empty word gives `I`.
pub fn word_box(digits: &[u8], env: &TailEnvelope) -> Result<BoxK> {
    let s = state_for(digits, env)?;
    Ok(BoxK::new(
        s.outer_lo
            .iter()
            .zip(&s.outer_hi)
            .map(|(&lo, &hi)| Interval::new(lo, hi))
            .collect(),
    ))
}

/// A box inside the true word box for every parameter in the generator
/// intervals, or `None` if no such box is certain on some axis.
pub fn inner_word_box(digits: &[u8], env: &TailEnvelope) -> Result<Option<BoxK>> {
    let s = state_for(digits, env)?;
    if s.inner_lo.iter().zip(&s.inner_hi).any(|(lo, hi)| lo > hi) {
        return Ok(None);
    }
    Ok(Some(BoxK::new(
        s.inner_lo
            .iter()
            .zip(&s.inner_hi)
            .map(|(&lo, &hi)| Interval::new(lo, hi))
            .collect(),
    )))
}

/// Word boxes of one length in flat storage: box `w` (word index, `a_1`
/// the top bit) occupies `[w * dim, (w + 1) * dim)` of each array.
#[derive(Clone, Debug, PartialEq)]
pub struct WordBoxes {
    pub n: usize,
    pub dim: usize,
    pub words: Vec<usize>,
    pub outer_lo: Vec<f64>,
    pub outer_hi: Vec<f64>,
    pub inner_lo: Vec<f64>,
    pub inner_hi: Vec<f64>,
}

impl WordBoxes {
    pub fn count(&self) -> usize {
        self.words.len()
    }

    pub fn outer(&self) -> BoxSet {
        BoxSet {
            dim: self.dim,
            lo: self.outer_lo.clone(),
            hi: self.outer_hi.clone(),
        }
    }

    /// Boxes inside the true word boxes at every parameter; a word whose
    /// inner box is empty on some axis is dropped.
    pub fn inner(&self) -> BoxSet {
        let mut lo = Vec::with_capacity(self.inner_lo.len());
        let mut hi = Vec::with_capacity(self.inner_hi.len());
        for w in 0..self.count() {
            let range = w * self.dim..(w + 1) * self.dim;
            if range.clone().all(|i| self.inner_lo[i] <= self.inner_hi[i]) {
                lo.extend_from_slice(&self.inner_lo[range.clone()]);
                hi.extend_from_slice(&self.inner_hi[range]);
            }
        }
        BoxSet {
            dim: self.dim,
            lo,
            hi,
        }
    }

    fn from_states(n: usize, dim: usize, words: Vec<usize>, states: &[WordState]) -> Self {
        let mut out = WordBoxes {
            n,
            dim,
            words,
            outer_lo: Vec::with_capacity(states.len() * dim),
            outer_hi: Vec::with_capacity(states.len() * dim),
            inner_lo: Vec::with_capacity(states.len() * dim),
            inner_hi: Vec::with_capacity(states.len() * dim),
        };
        for s in states {
            out.outer_lo.extend_from_slice(&s.outer_lo);
            out.outer_hi.extend_from_slice(&s.outer_hi);
            out.inner_lo.extend_from_slice(&s.inner_lo);
            out.inner_hi.extend_from_slice(&s.inner_hi);
        }
        out
    }
}

/// Every word box of length `n`, built level by level so shared prefixes
/// are summed once.
pub fn all_word_boxes(n: usize, env: &TailEnvelope) -> Result<WordBoxes> {
    check_length(n, env)?;
    let mut states = vec![WordState::root(env)];
    for level in 1..=n {
        let mut next = Vec::with_capacity(states.len() * 2);
        for s in states {
            let mut one = s.clone();
            let mut zero = s;
            zero.push(env, level, 0);
            one.push(env, level, 1);
            next.push(zero);
            next.push(one);
        }
        states = next;
    }
    Ok(WordBoxes::from_states(n, env.dim(), (0..1usize << n).collect(), &states))
}

/// The boxes of the given words of length `n`, in the order given.
pub fn selected_word_boxes(words: &[usize], n: usize, env: &TailEnvelope) -> Result<WordBoxes> {
    check_length(n, env)?;
    let states = words
        .iter()
        .map(|&w| state_for(crate::word::Word::from_index(w, n).bits(), env))
        .collect::<Result<Vec<_>>>()?;
    Ok(WordBoxes::from_states(n, env.dim(), words.to_vec(), &states))
}

/// Plain closed boxes in flat storage, the input of the depth sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSet {
    pub dim: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxSet {
    pub fn from_boxes(boxes: &[BoxK]) -> Result<Self> {
        let dim = boxes.first().ok_or(Error::EmptyBoxes)?.dim();
        let mut lo = Vec::with_capacity(boxes.len() * dim);
        let mut hi = Vec::with_capacity(boxes.len() * dim);
        for b in boxes {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: b.dim(),
                });
            }
            lo.extend(b.axes().iter().map(|a| a.lo));
            hi.extend(b.axes().iter().map(|a| a.hi));
        }
        Ok(BoxSet { dim, lo, hi })
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.lo.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> BoxK {
        BoxK::new(
            (0..self.dim)
                .map(|k| Interval::new(self.lo[i * self.dim + k], self.hi[i * self.dim + k]))
                .collect(),
        )
    }

    pub fn contains(&self, i: usize, p: &[f64]) -> bool {
        (0..self.dim)
            .all(|k| self.lo[i * self.dim + k] <= p[k] && p[k] <= self.hi[i * self.dim + k])
    }

    pub fn count_containing(&self, p: &[f64]) -> usize {
        (0..self.len()).filter(|&i| self.contains(i, p)).count()
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn env(gens: &[Generator], n_max: usize) -> TailEnvelope {
        build_layout(gens, TailDepth::Auto, n_max).unwrap().1
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn positive_axis_depth_zero() {
        let e = env(&[Generator::real(1.7)], 4);
        let i = bounding_region(&e);
        assert!(close(i.axes()[0].lo, 0.0));
        assert!(close(i.axes()[0].hi, 1.0 / 0.7));
        assert!(i.axes()[0].lo <= 0.0);
    }

    #[test]
    fn negative_axis_depth_zero() {
        let e = env(&[Generator::real(1.7), Generator::real(-1.5)], 4);
        let i = bounding_region(&e);
        assert!(close(i.axes()[1].lo, -1.2));
        assert!(close(i.axes()[1].hi, 0.8));
    }

    #[test]
    fn golden_ratio_region() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let i = bounding_region(&env(&[Generator::real(phi)], 1));
        assert!(close(i.axes()[0].hi, phi));
    }

    #[test]
    fn real_pair_regions_and_length_one_boxes() {
        let e = env(&[Generator::real(1.7), Generator::real(1.9)], 3);
        let i = bounding_region(&e);
        assert!(close(i.axes()[0].hi, 1.428571428571429));
        assert!(close(i.axes()[1].hi, 1.111111111111111));

        let b0 = word_box(&[0], &e).unwrap();
        assert!(close(b0.axes()[0].hi, 1.0 / (1.7 * 0.7)));
        assert!(close(b0.axes()[1].hi, 1.0 / (1.9 * 0.9)));
        assert!(close(b0.axes()[0].hi, 0.840336134453782));
        assert!(close(b0.axes()[1].hi, 0.584795321637427));

        let b1 = word_box(&[1], &e).unwrap();
        assert!(close(b1.axes()[0].lo, 1.0 / 1.7));
        assert!(close(b1.axes()[1].lo, 1.0 / 1.9));
        assert!(close(b1.axes()[0].hi, 1.428571428571429));
        assert!(close(b1.axes()[1].hi, 1.111111111111111));
    }

    #[test]
    fn empty_word_is_bounding_region() {
        let e = env(&[Generator::real(1.3), Generator::complex(0.4, 1.1)], 3);
        assert_eq!(word_box(&[], &e).unwrap(), bounding_region(&e));
        assert_eq!(bounding_region(&e).dim(), 3);
    }

    #[test]
    fn word_longer_than_envelope() {
        let e = env(&[Generator::real(1.3)], 2);
        assert!(matches!(
            word_box(&[0, 1, 1], &e),
            Err(Error::OverBudget { n: 3, budget: 2 })
        ));
    }

    #[test]
    fn envelope_width_shrinks_geometrically() {
        let gens = [Generator::real(1.4), Generator::real(-1.6), Generator::complex(0.5, -1.2)];
        let n_max = 12;
        let e = env(&gens, n_max);
        let mut k = 0;
        for g in &gens {
            let r = g.modulus().lo;
            for _ in 0..g.dims() {
                let w = e.outer(k, n_max).width();
                let bound = 2.0 * r.powi(-(n_max as i32)) / (r - 1.0) + 2.0 * e.padding(k);
                assert!(w <= bound * (1.0 + 1e-12), "axis {k}: {w} > {bound}");
                k += 1;
            }
        }
    }

    #[test]
    fn explicit_truncation_depth() {
        let gens = [Generator::real(1.5)];
        assert!(matches!(
            build_layout(&gens, TailDepth::Fixed(3), 5),
            Err(Error::TruncationTooShallow { tail: 3, n_max: 5 })
        ));
        let (_, e) = build_layout(&gens, TailDepth::Fixed(64), 5).unwrap();
        assert_eq!(e.depth(), 64);
        // 1.5^-64 / 0.5
        assert!((e.padding(0) - 1.5f64.powi(-64) / 0.5).abs() < 1e-20);
    }

    #[test]
    fn auto_depth_tracks_small_moduli() {
        let (_, e) = build_layout(&[Generator::complex(0.3, 1.02)], TailDepth::Auto, 4).unwrap();
        assert!(e.depth() > 64);
        assert!(e.padding(0) <= 1e-17);
    }

    #[test]
    fn contracting_generator_is_rejected() {
        assert!(matches!(
            build_layout(&[Generator::real(1.5), Generator::real(0.8)], TailDepth::Auto, 3),
            Err(Error::OutsideParameterSpace(_))
        ));
    }

    #[test]
    fn flat_boxes_match_word_box() {
        let e = env(&[Generator::real(1.3), Generator::complex(-0.2, 1.15)], 5);
        let all = all_word_boxes(5, &e).unwrap();
        let outer = all.outer();
        for w in [0usize, 7, 19, 31] {
            let word = crate::word::Word::from_index(w, 5);
            let direct = word_box(word.bits(), &e).unwrap();
            let flat = outer.get(w);
            for (a, b) in direct.axes().iter().zip(flat.axes()) {
                assert!((a.lo - b.lo).abs() < 1e-14 && (a.hi - b.hi).abs() < 1e-14);
            }
        }
    }
}
