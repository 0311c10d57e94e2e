//! Words over the two-letter operator alphabet.
//!
//! `A` stands for the (shifted) first Hamiltonian and `B` for the second. A
//! word is printed left to right and acts right to left, so `baa` means
//! `B·A·A·φ`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    /// Generator used by slot `j` (1-based): odd slots carry `A`.
    pub fn for_slot(j: usize) -> Letter {
        if j % 2 == 1 {
            Letter::A
        } else {
            Letter::B
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("empty operator word")]
    Empty,
    #[error("invalid letter {0:?} in operator word (expected a or b)")]
    BadLetter(char),
}

/// Non-empty word; ordering is lexicographic with `A < B`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OperatorWord(Vec<Letter>);

impl OperatorWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::Empty);
        }
        Ok(OperatorWord(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x^m · self` (new letters on the left, applied last).
    pub fn prepend(&self, x: Letter, m: usize) -> OperatorWord {
        let mut v = vec![x; m];
        v.extend_from_slice(&self.0);
        OperatorWord(v)
    }

    pub fn swapped(&self) -> OperatorWord {
        OperatorWord(self.0.iter().map(|l| l.swap()).collect())
    }

    /// Rewrites the rightmost pair with `Aφ = -Bφ`.
    ///
    /// If the two rightmost letters differ, the last letter is replaced by
    /// its neighbour and the sign flips; e.g. `ab·φ = -aa·φ`. Returns the new
    /// word and `true` when the sign flipped.
    pub fn zero_eigenstate_form(&self) -> (OperatorWord, bool) {
        let n = self.0.len();
        if n >= 2 && self.0[n - 1] != self.0[n - 2] {
            let mut v = self.0.clone();
            v[n - 1] = v[n - 2];
            (OperatorWord(v), true)
        } else {
            (self.clone(), false)
        }
    }

    /// All `2^k` words of length `k`, in lexicographic order.
    pub fn all_of_length(k: usize) -> Vec<OperatorWord> {
        (0..1usize << k)
            .map(|bits| OperatorWord((0..k).map(|i| if bits >> (k - 1 - i) & 1 == 1 { Letter::B } else { Letter::A }).collect()))
            .collect()
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for OperatorWord {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, WordError> {
        let letters = s
            .chars()
            .map(|c| match c.to_ascii_lowercase() {
                'a' => Ok(Letter::A),
                'b' => Ok(Letter::B),
                _ => Err(WordError::BadLetter(c)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        OperatorWord::new(letters)
    }
}

impl Serialize for OperatorWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for OperatorWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let w: OperatorWord = "bAa".parse().unwrap();
        assert_eq!(w.to_string(), "baa");
        assert_eq!("".parse::<OperatorWord>(), Err(WordError::Empty));
        assert_eq!("abc".parse::<OperatorWord>(), Err(WordError::BadLetter('c')));
    }

    #[test]
    fn lexicographic_order() {
        let mut ws: Vec<OperatorWord> = ["bb", "ab", "ba", "aa"].iter().map(|s| s.parse().unwrap()).collect();
        ws.sort();
        let s: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(s, ["aa", "ab", "ba", "bb"]);
        assert_eq!(OperatorWord::all_of_length(2), ws);
    }

    #[test]
    fn zero_eigenstate_rewrite() {
        let (w, flip) = "bab".parse::<OperatorWord>().unwrap().zero_eigenstate_form();
        assert_eq!((w.to_string().as_str(), flip), ("baa", true));
        let (w, flip) = "bba".parse::<OperatorWord>().unwrap().zero_eigenstate_form();
        assert_eq!((w.to_string().as_str(), flip), ("bbb", true));
        let (w, flip) = "abb".parse::<OperatorWord>().unwrap().zero_eigenstate_form();
        assert_eq!((w.to_string().as_str(), flip), ("abb", false));
    }
}
