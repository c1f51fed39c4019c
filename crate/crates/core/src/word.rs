//! Binary digit words `a_1 ... a_n` and their signed differences.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordTransform {
    /// `a_n ... a_1`
    Rev,
    /// Flip the digits at odd (1-based) positions.
    Neg,
}

/// A word over {0, 1}. The first digit `a_1` weighs `beta^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidWord(format!("digit {b} is not 0 or 1")));
        }
        Ok(Word(bits))
    }

    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    /// Word of length `n` whose digits are the binary expansion of
    /// `index`, most significant first (`a_1` is the top bit).
    pub fn from_index(index: usize, n: usize) -> Self {
        Word((0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn push(&self, digit: u8) -> Word {
        let mut bits = self.0.clone();
        bits.push(digit);
        Word(bits)
    }

    pub fn transform(&self, which: WordTransform) -> Word {
        match which {
            WordTransform::Rev => Word(self.0.iter().rev().copied().collect()),
            WordTransform::Neg => Word(
                self.0
                    .iter()
                    .enumerate()
                    // position i + 1 is odd when i is even
                    .map(|(i, &b)| if i % 2 == 0 { 1 - b } else { b })
                    .collect(),
            ),
        }
    }

    /// `self - other`, digit by digit.
    pub fn difference(&self, other: &Word) -> Result<SignedWord> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                len: other.len(),
                expected: self.len(),
            });
        }
        Ok(SignedWord(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a as i8 - b as i8)
                .collect(),
        ))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"1101"`; spaces are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidWord(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(bits)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Digit-wise difference `epsilon_i = a_i - b_i` of two equal-length words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedWord(Vec<i8>);

impl SignedWord {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if let Some(e) = entries.iter().find(|e| e.abs() > 1) {
            return Err(Error::InvalidWord(format!("entry {e} is not in {{-1, 0, 1}}")));
        }
        Ok(SignedWord(entries))
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn rev_and_neg() {
        assert_eq!(w("100").transform(WordTransform::Rev), w("001"));
        assert_eq!(w("100").transform(WordTransform::Neg), w("001"));
        let a = w("1101");
        assert_eq!(a.transform(WordTransform::Neg).transform(WordTransform::Neg), a);
        assert_eq!(a.transform(WordTransform::Rev).transform(WordTransform::Rev), a);
    }

    #[test]
    fn index_round_trip() {
        assert_eq!(w("100").index(), 4);
        assert_eq!(Word::from_index(4, 3), w("100"));
        assert_eq!(Word::from_index(1, 4), w("0001"));
    }

    #[test]
    fn difference() {
        let d = w("100").difference(&w("011")).unwrap();
        assert_eq!(d.entries(), &[1, -1, -1]);
        assert!(w("10").difference(&w("101")).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<Word>().is_err());
        assert!("102".parse::<Word>().is_err());
        assert!(SignedWord::new(vec![2]).is_err());
    }
}
