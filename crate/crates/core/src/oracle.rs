//! Exact collision counts `N_n(a)` and entropies `H_n`.
//!
//! Two words collide when `sum (a_i - b_i) beta^(n-i) = 0`. For an
//! algebraic integer with monic minimal polynomial `p` this holds exactly
//! when `sum eps_i x^(n-i)` is divisible by `p`, which is decided with
//! big-integer arithmetic and does not depend on which root is meant.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::word::{SignedWord, Word};

/// Longest word length the oracle enumerates.
pub const ORACLE_BUDGET: usize = 14;

fn require_monic(p: &IntPolynomial) -> Result<()> {
    if p.degree() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic(p.leading()));
    }
    Ok(())
}

fn require_budget(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidWord("word length must be at least 1".into()));
    }
    if n > ORACLE_BUDGET {
        return Err(Error::OverBudget {
            n,
            budget: ORACLE_BUDGET,
        });
    }
    Ok(())
}

/// Remainder of `x * r` modulo the monic `p`, where `r` has degree below
/// `deg p`.
fn times_x_mod(r: &mut Vec<BigInt>, p: &[i64]) {
    let d = r.len();
    let top = r.pop().expect("degree at least 1");
    r.insert(0, BigInt::zero());
    if !top.is_zero() {
        for k in 0..d {
            r[k] -= &top * p[k];
        }
    }
}

/// Whether `sum eps_i x^(n-i)` is divisible by `p`.
pub fn collision_test(eps: &SignedWord, p: &IntPolynomial) -> Result<bool> {
    require_monic(p)?;
    let mut r = vec![BigInt::zero(); p.degree()];
    // Horner: r <- x r + eps_i
    for &e in eps.entries() {
        times_x_mod(&mut r, p.coeffs());
        r[0] += e;
    }
    Ok(r.iter().all(Zero::is_zero))
}

/// `N_n(a)`: the number of words `b` of the same length with the same
/// power sum, found by testing all `2^n` of them.
pub fn count_collisions(a: &Word, p: &IntPolynomial) -> Result<usize> {
    require_monic(p)?;
    require_budget(a.len())?;
    let n = a.len();
    let mut count = 0;
    for index in 0..1usize << n {
        let b = Word::from_index(index, n);
        if collision_test(&a.difference(&b)?, p)? {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub n: usize,
    /// `H_n` in nats.
    pub hn: f64,
    pub max_n: usize,
    /// How many words have each collision count.
    pub histogram: BTreeMap<usize, usize>,
    pub per_word_counts: Option<BTreeMap<Word, usize>>,
}

/// Residue of each word's power sum modulo `p`, as a coefficient vector.
fn residues(p: &IntPolynomial, n: usize) -> Vec<Vec<BigInt>> {
    let d = p.degree();
    // powers[j] = x^j mod p for j < n
    let mut powers = Vec::with_capacity(n);
    let mut r = vec![BigInt::zero(); d];
    r[0] = BigInt::from(1);
    for _ in 0..n {
        powers.push(r.clone());
        times_x_mod(&mut r, p.coeffs());
    }
    // digit a_i weighs x^(n-i); build all words prefix by prefix
    let mut words = vec![vec![BigInt::zero(); d]];
    for i in 1..=n {
        let w = &powers[n - i];
        let mut next = Vec::with_capacity(words.len() * 2);
        for s in words {
            let with: Vec<BigInt> = s.iter().zip(w).map(|(a, b)| a + b).collect();
            next.push(s);
            next.push(with);
        }
        words = next;
    }
    words
}

fn entropy(p: &IntPolynomial, n: usize, keep_counts: bool) -> Result<EntropyReport> {
    require_monic(p)?;
    require_budget(n)?;
    let res = residues(p, n);
    let mut classes: HashMap<&[BigInt], usize> = HashMap::new();
    for r in &res {
        *classes.entry(r.as_slice()).or_default() += 1;
    }
    let counts: Vec<usize> = res.iter().map(|r| classes[r.as_slice()]).collect();

    let mut histogram = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c).or_default() += 1;
    }
    let total = (1u64 << n) as f64;
    let log_sum: f64 = histogram
        .iter()
        .map(|(&c, &words)| words as f64 * (c as f64).ln())
        .sum();
    let hn = n as f64 * LN_2 - log_sum / total;
    let max_n = *histogram.keys().next_back().expect("at least one word");
    let per_word_counts = keep_counts.then(|| {
        counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (Word::from_index(i, n), c))
            .collect()
    });
    Ok(EntropyReport {
        n,
        hn,
        max_n,
        histogram,
        per_word_counts,
    })
}

/// `H_n = -sum_a 2^-n log(N_n(a) / 2^n)`. Words are grouped by their exact
/// residue, so every count equals `count_collisions` without the `4^n`
/// pairwise loop.
pub fn entropy_hn(p: &IntPolynomial, n: usize) -> Result<EntropyReport> {
    entropy(p, n, false)
}

/// As [`entropy_hn`], keeping the count of every word.
pub fn entropy_hn_with_counts(p: &IntPolynomial, n: usize) -> Result<EntropyReport> {
    entropy(p, n, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> IntPolynomial {
        IntPolynomial::parse("-1,-1,1").unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn collision_examples() {
        let p = golden();
        assert!(collision_test(&SignedWord::new(vec![1, -1, -1]).unwrap(), &p).unwrap());
        assert!(!collision_test(&SignedWord::new(vec![1, 0, -1]).unwrap(), &p).unwrap());
        assert!(collision_test(&SignedWord::new(vec![0; 9]).unwrap(), &p).unwrap());
    }

    #[test]
    fn non_monic_is_rejected() {
        let p = IntPolynomial::parse("-1,-1,2").unwrap();
        let eps = SignedWord::new(vec![1]).unwrap();
        assert_eq!(collision_test(&eps, &p), Err(Error::NotMonic(2)));
    }

    #[test]
    fn golden_counts() {
        let p = golden();
        assert_eq!(count_collisions(&w("100"), &p).unwrap(), 2);
        assert_eq!(count_collisions(&w("011"), &p).unwrap(), 2);
        assert_eq!(count_collisions(&w("110"), &p).unwrap(), 1);
        for n in 1..=10 {
            assert_eq!(count_collisions(&Word::zeros(n), &p).unwrap(), 1);
        }
    }

    #[test]
    fn golden_entropies() {
        let p = golden();
        let h1 = entropy_hn(&p, 1).unwrap();
        assert_eq!(h1.hn, LN_2);
        assert_eq!(h1.max_n, 1);
        let h2 = entropy_hn(&p, 2).unwrap();
        assert_eq!(h2.hn, 2.0 * LN_2);
        let h3 = entropy_hn(&p, 3).unwrap();
        assert_eq!(h3.max_n, 2);
        assert_eq!(h3.histogram, BTreeMap::from([(1, 6), (2, 2)]));
        assert!((h3.hn - 2.75 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn grouped_counts_match_pairwise_loop() {
        for text in ["-1,-1,1", "-1,-1,-1,1", "-1,-1,0,0,1", "-1,0,-1,0,1", "-1,-1,0,1,-1,1"] {
            let p = IntPolynomial::parse(text).unwrap();
            for n in 1..=6 {
                let report = entropy_hn_with_counts(&p, n).unwrap();
                for (word, &count) in report.per_word_counts.as_ref().unwrap() {
                    assert_eq!(count_collisions(word, &p).unwrap(), count, "{text} {word}");
                }
            }
        }
    }

    #[test]
    fn budget() {
        let p = golden();
        assert!(matches!(
            entropy_hn(&p, 15),
            Err(Error::OverBudget { n: 15, budget: 14 })
        ));
        assert!(entropy_hn(&p, 0).is_err());
    }
}
