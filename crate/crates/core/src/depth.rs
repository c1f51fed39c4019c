//! Maximal overlap `m_n` of the level-n word boxes.
//!
//! Boxes are closed. The deepest point of a family of closed boxes can be
//! taken with every coordinate equal to some box's lower endpoint, so each
//! axis is swept over sorted endpoint events (lower endpoints before upper
//! ones at equal values) and the sweep recurses into the next axis only
//! where a run of openings ends. The last two axes use a segment tree with
//! range add and max instead of recursing.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::conjugates::ConjugateSystem;
use crate::error::{Error, Result};
use crate::geometry::{
    all_word_boxes, build_layout, selected_word_boxes, BoxK, BoxSet, Generator, TailDepth,
    TailEnvelope,
};
use crate::interval::{ComplexInterval, Interval};

/// Longest word length enumerated in full.
pub const MAX_WORD_LENGTH: usize = 26;
/// Upper limit on the bytes held by one family of word boxes.
const BOX_MEMORY_BUDGET: usize = 8 << 30;

/// Result of one stabbing computation.
#[derive(Clone, Debug, PartialEq)]
pub struct Stabbing {
    pub depth: usize,
    /// A point lying in `depth` boxes.
    pub witness: Vec<f64>,
    /// Intersection of the boxes containing the witness.
    pub cell: BoxK,
    /// Smallest side length of `cell`; zero when the deepest boxes only
    /// touch.
    pub margin: f64,
}

/// Maximal number of boxes sharing a point.
pub fn max_stabbing_depth(boxes: &[BoxK], d: usize) -> Result<Stabbing> {
    if let Some(b) = boxes.iter().find(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: b.dim(),
        });
    }
    stabbing_depth(&BoxSet::from_boxes(boxes)?)
}

pub fn stabbing_depth(set: &BoxSet) -> Result<Stabbing> {
    if set.is_empty() {
        return Err(Error::EmptyBoxes);
    }
    let all: Vec<u32> = (0..set.len() as u32).collect();
    let (depth, mut witness) =
        stab(set, &all, 0, 0).expect("a nonempty family has depth at least 1");
    witness.reverse();

    let members: Vec<usize> = (0..set.len()).filter(|&i| set.contains(i, &witness)).collect();
    debug_assert!(members.len() >= depth);
    let cell = BoxK::new(
        (0..set.dim)
            .map(|k| {
                let lo = members
                    .iter()
                    .map(|&i| set.lo[i * set.dim + k])
                    .fold(f64::NEG_INFINITY, f64::max);
                let hi = members
                    .iter()
                    .map(|&i| set.hi[i * set.dim + k])
                    .fold(f64::INFINITY, f64::min);
                Interval::new(lo, hi)
            })
            .collect(),
    );
    let margin = cell
        .axes()
        .iter()
        .map(Interval::width)
        .fold(f64::INFINITY, f64::min);
    Ok(Stabbing {
        depth,
        witness,
        cell,
        margin,
    })
}

#[derive(Clone, Copy)]
struct Event {
    x: f64,
    closing: bool,
    local: u32,
}

fn events(set: &BoxSet, active: &[u32], axis: usize) -> Vec<Event> {
    let mut ev = Vec::with_capacity(active.len() * 2);
    for (j, &i) in active.iter().enumerate() {
        let at = i as usize * set.dim + axis;
        ev.push(Event {
            x: set.lo[at],
            closing: false,
            local: j as u32,
        });
        ev.push(Event {
            x: set.hi[at],
            closing: true,
            local: j as u32,
        });
    }
    ev.sort_unstable_by(|a, b| a.x.total_cmp(&b.x).then(a.closing.cmp(&b.closing)));
    ev
}

/// Deepest point of `active` restricted to axes `axis..`, if deeper than
/// `best`. The witness comes back with its coordinates in reverse order.
fn stab(set: &BoxSet, active: &[u32], axis: usize, best: usize) -> Option<(usize, Vec<f64>)> {
    if active.len() <= best {
        return None;
    }
    match set.dim - axis {
        1 => sweep_last(set, active, axis, best),
        2 => sweep_plane(set, active, axis, best),
        _ => sweep_recursive(set, active, axis, best),
    }
}

fn sweep_last(set: &BoxSet, active: &[u32], axis: usize, best: usize) -> Option<(usize, Vec<f64>)> {
    let ev = events(set, active, axis);
    let mut found = None;
    let mut best = best;
    let mut count = 0usize;
    for (k, e) in ev.iter().enumerate() {
        if e.closing {
            count -= 1;
            continue;
        }
        count += 1;
        let run_ends = ev.get(k + 1).map_or(true, |next| next.closing);
        if run_ends && count > best {
            best = count;
            found = Some((count, vec![e.x]));
        }
    }
    found
}

fn sweep_recursive(
    set: &BoxSet,
    active: &[u32],
    axis: usize,
    best: usize,
) -> Option<(usize, Vec<f64>)> {
    let ev = events(set, active, axis);
    let mut found = None;
    let mut best = best;
    let mut open: Vec<u32> = Vec::with_capacity(active.len());
    let mut slot = vec![usize::MAX; active.len()];
    for (k, e) in ev.iter().enumerate() {
        let j = e.local as usize;
        if e.closing {
            let at = slot[j];
            let last = *open.last().expect("closing an open box");
            open.swap_remove(at);
            if at < open.len() {
                slot[last as usize] = at;
            }
            continue;
        }
        slot[j] = open.len();
        open.push(e.local);
        let run_ends = ev.get(k + 1).map_or(true, |next| next.closing);
        if run_ends && open.len() > best {
            let ids: Vec<u32> = open.iter().map(|&l| active[l as usize]).collect();
            if let Some((depth, mut witness)) = stab(set, &ids, axis + 1, best) {
                best = depth;
                witness.push(e.x);
                found = Some((depth, witness));
            }
        }
    }
    found
}

/// Range-add, range-max segment tree over compressed coordinates.
struct MaxTree {
    size: usize,
    max: Vec<i32>,
    add: Vec<i32>,
}

impl MaxTree {
    fn new(n: usize) -> Self {
        let size = n.next_power_of_two().max(1);
        MaxTree {
            size,
            max: vec![0; 2 * size],
            add: vec![0; 2 * size],
        }
    }

    fn update(&mut self, lo: usize, hi: usize, delta: i32) {
        self.update_node(1, 0, self.size - 1, lo, hi, delta);
    }

    fn update_node(&mut self, node: usize, l: usize, r: usize, lo: usize, hi: usize, delta: i32) {
        if hi < l || r < lo {
            return;
        }
        if lo <= l && r <= hi {
            self.add[node] += delta;
            self.max[node] += delta;
            return;
        }
        let m = (l + r) / 2;
        self.update_node(2 * node, l, m, lo, hi, delta);
        self.update_node(2 * node + 1, m + 1, r, lo, hi, delta);
        self.max[node] = self.add[node] + self.max[2 * node].max(self.max[2 * node + 1]);
    }

    fn top(&self) -> i32 {
        self.max[1]
    }

    /// Leftmost leaf attaining the maximum.
    fn argmax(&self) -> usize {
        let mut node = 1;
        let mut target = self.max[1];
        while node < self.size {
            target -= self.add[node];
            node = if self.max[2 * node] == target {
                2 * node
            } else {
                2 * node + 1
            };
        }
        node - self.size
    }
}

fn sweep_plane(
    set: &BoxSet,
    active: &[u32],
    axis: usize,
    best: usize,
) -> Option<(usize, Vec<f64>)> {
    let y = axis + 1;
    let mut ys: Vec<f64> = active
        .iter()
        .flat_map(|&i| {
            let at = i as usize * set.dim + y;
            [set.lo[at], set.hi[at]]
        })
        .collect();
    ys.sort_unstable_by(f64::total_cmp);
    ys.dedup();
    let rank = |v: f64| ys.partition_point(|&t| t < v);
    let span: Vec<(usize, usize)> = active
        .iter()
        .map(|&i| {
            let at = i as usize * set.dim + y;
            (rank(set.lo[at]), rank(set.hi[at]))
        })
        .collect();

    let ev = events(set, active, axis);
    let mut tree = MaxTree::new(ys.len());
    let mut found = None;
    let mut best = best;
    for (k, e) in ev.iter().enumerate() {
        let (lo, hi) = span[e.local as usize];
        if e.closing {
            tree.update(lo, hi, -1);
            continue;
        }
        tree.update(lo, hi, 1);
        let run_ends = ev.get(k + 1).map_or(true, |next| next.closing);
        if run_ends && tree.top() as usize > best {
            best = tree.top() as usize;
            found = Some((best, vec![ys[tree.argmax()], e.x]));
        }
    }
    found
}

/// `m_n` and the quantities derived from it.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthResult {
    pub n: usize,
    pub mn: usize,
    /// `n log 2 - log m_n`
    pub ln: f64,
    /// `L_n / (n log beta1)`; above 1 proves dimension one.
    pub ratio: f64,
    pub witness: Vec<f64>,
    pub margin: f64,
    pub cell: BoxK,
}

fn bound_from(n: usize, mn: usize, beta1: f64) -> (f64, f64) {
    let ln = n as f64 * LN_2 - (mn as f64).ln();
    (ln, ln / (n as f64 * beta1.ln()))
}

fn check_budget(n: usize, dim: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidWord("word length must be at least 1".into()));
    }
    // four f64 endpoints per axis plus one interval of partial sums
    let bytes = (dim * 48).checked_shl(n as u32).unwrap_or(usize::MAX);
    if n > MAX_WORD_LENGTH || bytes > BOX_MEMORY_BUDGET {
        return Err(Error::TooManyBoxes { n, dim });
    }
    Ok(())
}

fn beta1_of(generators: &[Generator]) -> Result<Interval> {
    match generators.first() {
        Some(Generator::Real(b)) => Ok(*b),
        _ => Err(Error::OutsideParameterSpace(
            "the first generator must be the real parameter beta1".into(),
        )),
    }
}

fn depth_on(generators: &[Generator], n: usize, env: &TailEnvelope) -> Result<DepthResult> {
    check_budget(n, env.dim())?;
    let beta1 = beta1_of(generators)?.mid();
    let boxes = all_word_boxes(n, env)?;
    let s = stabbing_depth(&boxes.outer())?;
    let (ln, ratio) = bound_from(n, s.depth, beta1);
    Ok(DepthResult {
        n,
        mn: s.depth,
        ln,
        ratio,
        witness: s.witness,
        margin: s.margin,
        cell: s.cell,
    })
}

/// `m_n` for explicit coordinate generators (`beta1` first).
pub fn compute_mn_at(generators: &[Generator], n: usize, tail: TailDepth) -> Result<DepthResult> {
    check_budget(n, generators.iter().map(Generator::dims).sum())?;
    let (_, env) = build_layout(generators, tail, n)?;
    depth_on(generators, n, &env)
}

pub fn compute_mn(sys: &ConjugateSystem, n: usize, tail: TailDepth) -> Result<DepthResult> {
    compute_mn_at(&sys.generators(), n, tail)
}

/// Outcome of scanning a range of word lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct BestBound {
    /// First `n` with ratio above 1.
    pub first_proving_n: Option<usize>,
    /// Result with the largest ratio (earliest on ties).
    pub best: DepthResult,
    pub history: Vec<DepthResult>,
}

/// Scans `n = n_min..=n_max`, stopping at the first ratio above 1.
pub fn best_bound_at(
    generators: &[Generator],
    n_min: usize,
    n_max: usize,
    tail: TailDepth,
) -> Result<BestBound> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidWord(format!(
            "empty word length range {n_min}..={n_max}"
        )));
    }
    check_budget(n_max, generators.iter().map(Generator::dims).sum())?;
    let (_, env) = build_layout(generators, tail, n_max)?;
    let mut history: Vec<DepthResult> = Vec::new();
    let mut first_proving_n = None;
    for n in n_min..=n_max {
        let r = depth_on(generators, n, &env)?;
        let proves = r.ratio > 1.0;
        history.push(r);
        if proves {
            first_proving_n = Some(n);
            break;
        }
    }
    let best = history
        .iter()
        .fold(None::<&DepthResult>, |acc, r| match acc {
            Some(b) if b.ratio >= r.ratio => Some(b),
            _ => Some(r),
        })
        .expect("at least one length scanned")
        .clone();
    Ok(BestBound {
        first_proving_n,
        best,
        history,
    })
}

pub fn best_bound(sys: &ConjugateSystem, n_max: usize, tail: TailDepth) -> Result<BestBound> {
    best_bound_at(&sys.generators(), 1, n_max, tail)
}

/// Bounds on `m_n` valid for every parameter in a rectangle.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedDepth {
    pub param_box: Vec<Generator>,
    pub n: usize,
    pub m_lower: usize,
    pub m_upper: usize,
    pub certified: bool,
}

impl CertifiedDepth {
    /// `L_n`, when it is constant on the rectangle.
    pub fn ln(&self) -> Option<f64> {
        self.certified
            .then(|| self.n as f64 * LN_2 - (self.m_upper as f64).ln())
    }
}

/// Parameter rectangle from centres and halfwidths. The first centre is
/// `beta1` and must be real; a centre with nonzero imaginary part becomes a
/// complex parameter whose halfwidth applies to both parts. A single
/// halfwidth is used for every parameter.
pub fn parameter_box(centers: &[Complex64], halfwidths: &[f64]) -> Result<Vec<Generator>> {
    if centers.is_empty() {
        return Err(Error::DegenerateRegion("no parameters".into()));
    }
    let widths: Vec<f64> = match halfwidths.len() {
        1 => vec![halfwidths[0]; centers.len()],
        k if k == centers.len() => halfwidths.to_vec(),
        k => {
            return Err(Error::DimensionMismatch {
                expected: centers.len(),
                found: k,
            })
        }
    };
    if let Some(w) = widths.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::DegenerateRegion(format!("halfwidth {w}")));
    }
    if centers[0].im != 0.0 {
        return Err(Error::OutsideParameterSpace("beta1 must be real".into()));
    }
    let params: Vec<Generator> = centers
        .iter()
        .zip(&widths)
        .map(|(c, &w)| {
            if c.im == 0.0 {
                Generator::Real(Interval::around(c.re, w))
            } else {
                Generator::Complex(ComplexInterval::around(*c, w, w))
            }
        })
        .collect();
    check_parameter_space(&params)?;
    Ok(params)
}

fn check_parameter_space(params: &[Generator]) -> Result<()> {
    let b1 = beta1_of(params)?;
    if !(b1.lo > 1.0 && b1.hi < 2.0) {
        return Err(Error::OutsideParameterSpace(format!(
            "beta1 range {b1} is not inside (1, 2)"
        )));
    }
    for g in &params[1..] {
        let m = g.modulus();
        if !(m.lo > 1.0 && m.hi <= 2.0) {
            return Err(Error::OutsideParameterSpace(format!(
                "conjugate modulus range {m} is not inside (1, 2]"
            )));
        }
    }
    Ok(())
}

/// Bounds `m_n` over a parameter rectangle: the upper bound uses boxes
/// covering every possible word box, the lower bound boxes that lie inside
/// every possible word box.
pub fn certify_region(params: &[Generator], n: usize, tail: TailDepth) -> Result<CertifiedDepth> {
    check_parameter_space(params)?;
    check_budget(n, params.iter().map(Generator::dims).sum())?;
    let (_, env) = build_layout(params, tail, n)?;
    let boxes = all_word_boxes(n, &env)?;
    let m_upper = stabbing_depth(&boxes.outer())?.depth;
    let inner = boxes.inner();
    let m_lower = if inner.is_empty() {
        1
    } else {
        stabbing_depth(&inner)?.depth.max(1)
    };
    Ok(CertifiedDepth {
        param_box: params.to_vec(),
        n,
        m_lower,
        m_upper,
        certified: m_lower == m_upper,
    })
}

/// Lower bound for `m_n` counting only children of words whose level
/// `n - 1` box meets a seed region. Never used to certify.
pub fn seeded_mn_lower_bound(
    generators: &[Generator],
    n: usize,
    seeds: &[BoxK],
    tail: TailDepth,
) -> Result<usize> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let dim: usize = generators.iter().map(Generator::dims).sum();
    if let Some(s) = seeds.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: s.dim(),
        });
    }
    check_budget(n, dim)?;
    let (_, env) = build_layout(generators, tail, n)?;
    let parents: Vec<usize> = if n == 1 {
        vec![0]
    } else {
        let boxes = all_word_boxes(n - 1, &env)?.outer();
        (0..boxes.len())
            .filter(|&w| {
                let b = boxes.get(w);
                seeds.iter().any(|s| s.intersects(&b))
            })
            .collect()
    };
    let children: Vec<usize> = parents.iter().flat_map(|&w| [2 * w, 2 * w + 1]).collect();
    if children.is_empty() {
        return Ok(1);
    }
    let boxes = selected_word_boxes(&children, n, &env)?;
    Ok(stabbing_depth(&boxes.outer())?.depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(axes: &[(f64, f64)]) -> BoxK {
        BoxK::new(axes.iter().map(|&(l, h)| Interval::new(l, h)).collect())
    }

    /// Depth by testing every lower corner combination.
    fn brute(boxes: &[BoxK]) -> usize {
        let d = boxes[0].dim();
        let mut best = 0;
        let mut idx = vec![0usize; d];
        loop {
            let p: Vec<f64> = (0..d).map(|k| boxes[idx[k]].axes()[k].lo).collect();
            best = best.max(boxes.iter().filter(|b| b.contains_point(&p)).count());
            let mut k = 0;
            while k < d {
                idx[k] += 1;
                if idx[k] < boxes.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == d {
                return best;
            }
        }
    }

    #[test]
    fn small_families() {
        let one = [b(&[(0.0, 1.0), (0.0, 1.0)])];
        assert_eq!(max_stabbing_depth(&one, 2).unwrap().depth, 1);
        let disjoint = [b(&[(0.0, 1.0)]), b(&[(2.0, 3.0)])];
        assert_eq!(max_stabbing_depth(&disjoint, 1).unwrap().depth, 1);
        let nested = [b(&[(0.0, 3.0), (0.0, 3.0)]), b(&[(1.0, 2.0), (1.0, 2.0)])];
        assert_eq!(max_stabbing_depth(&nested, 2).unwrap().depth, 2);
    }

    #[test]
    fn touching_boxes_count_as_overlapping() {
        let boxes = [
            b(&[(0.0, 1.0), (0.0, 1.0), (0.0, 1.0)]),
            b(&[(1.0, 2.0), (1.0, 2.0), (1.0, 2.0)]),
        ];
        let s = max_stabbing_depth(&boxes, 3).unwrap();
        assert_eq!(s.depth, 2);
        assert_eq!(s.witness, vec![1.0, 1.0, 1.0]);
        assert_eq!(s.margin, 0.0);
    }

    #[test]
    fn input_errors() {
        assert_eq!(max_stabbing_depth(&[], 2).unwrap_err(), Error::EmptyBoxes);
        let mixed = [b(&[(0.0, 1.0)]), b(&[(0.0, 1.0), (0.0, 1.0)])];
        assert!(matches!(
            max_stabbing_depth(&mixed, 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matches_brute_force_on_random_families() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..300 {
            let d = 1 + trial % 4;
            let count = 1 + rng.gen_range(0..12);
            let boxes: Vec<BoxK> = (0..count)
                .map(|_| {
                    BoxK::new(
                        (0..d)
                            .map(|_| {
                                // coarse grid so ties are common
                                let lo = rng.gen_range(0..6) as f64;
                                let w = rng.gen_range(0..4) as f64;
                                Interval::new(lo, lo + w)
                            })
                            .collect(),
                    )
                })
                .collect();
            let s = max_stabbing_depth(&boxes, d).unwrap();
            assert_eq!(s.depth, brute(&boxes), "trial {trial}");
            let hits = boxes.iter().filter(|x| x.contains_point(&s.witness)).count();
            assert!(hits >= s.depth);
            assert!(s.cell.contains_point(&s.witness));
        }
    }

    #[test]
    fn real_pair_length_one() {
        let gens = [Generator::real(1.7), Generator::real(1.9)];
        let r = compute_mn_at(&gens, 1, TailDepth::Auto).unwrap();
        assert_eq!(r.mn, 2);
        assert_eq!(r.ln, 0.0);
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn zero_length_is_rejected() {
        let gens = [Generator::real(1.7)];
        assert!(compute_mn_at(&gens, 0, TailDepth::Auto).is_err());
        assert!(matches!(
            compute_mn_at(&gens, 40, TailDepth::Auto),
            Err(Error::TooManyBoxes { n: 40, .. })
        ));
    }

    #[test]
    fn parameter_box_validation() {
        let c = [Complex64::new(1.7, 0.0), Complex64::new(1.9, 0.0)];
        assert!(parameter_box(&c, &[1e-6]).is_ok());
        assert!(matches!(
            parameter_box(&c, &[-1.0]),
            Err(Error::DegenerateRegion(_))
        ));
        assert!(matches!(
            parameter_box(&c, &[f64::NAN]),
            Err(Error::DegenerateRegion(_))
        ));
        assert!(matches!(
            parameter_box(&c, &[0.2]),
            Err(Error::OutsideParameterSpace(_))
        ));
        assert!(matches!(
            parameter_box(&c, &[0.1, 0.1, 0.1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn region_certification() {
        let c = [Complex64::new(1.7, 0.0), Complex64::new(1.9, 0.0)];
        let point = certify_region(&parameter_box(&c, &[0.0]).unwrap(), 3, TailDepth::Auto).unwrap();
        let direct = compute_mn_at(&[Generator::real(1.7), Generator::real(1.9)], 3, TailDepth::Auto)
            .unwrap();
        assert!(point.certified);
        assert_eq!(point.m_upper, direct.mn);

        let small = certify_region(&parameter_box(&c, &[1e-6]).unwrap(), 3, TailDepth::Auto).unwrap();
        assert!(small.certified);
        assert_eq!(small.m_upper, direct.mn);

        let wide = certify_region(&parameter_box(&c, &[0.09]).unwrap(), 4, TailDepth::Auto).unwrap();
        assert!(!wide.certified);
        assert!(wide.m_lower < wide.m_upper);
    }

    #[test]
    fn seeded_bound_with_full_seed_is_exact() {
        let gens = [Generator::real(1.3), Generator::real(-1.6)];
        let (_, env) = build_layout(&gens, TailDepth::Auto, 6).unwrap();
        let whole = crate::geometry::bounding_region(&env);
        let exact = compute_mn_at(&gens, 6, TailDepth::Auto).unwrap();
        let seeded = seeded_mn_lower_bound(&gens, 6, &[whole], TailDepth::Auto).unwrap();
        assert_eq!(seeded, exact.mn);
        let witness_seed = BoxK::new(exact.witness.iter().map(|&x| Interval::point(x)).collect());
        assert_eq!(
            seeded_mn_lower_bound(&gens, 6, &[witness_seed], TailDepth::Auto).unwrap(),
            exact.mn
        );
        assert_eq!(
            seeded_mn_lower_bound(&gens, 6, &[], TailDepth::Auto).unwrap_err(),
            Error::EmptySeeds
        );
    }
}
