//! Reduced words in a free group of finite rank.
//!
//! Letters are stored as signed 1-based generator indices: `3` is `x_3`,
//! `-3` is `x_3^{-1}`. Every constructor leaves the word freely reduced.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        Self { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Self {
        assert!(index >= 1 && index <= rank, "generator index out of range");
        Self { rank, letters: vec![index as i32] }
    }

    /// Builds a word from raw letters, reducing as it goes.
    ///
    /// Panics if a letter is zero or exceeds the rank.
    pub fn from_letters(rank: usize, letters: impl IntoIterator<Item = i32>) -> Self {
        let mut w = Self::identity(rank);
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends one letter with free cancellation.
    pub fn push(&mut self, letter: i32) {
        assert!(
            letter != 0 && letter.unsigned_abs() as usize <= self.rank,
            "letter {letter} out of range for rank {}",
            self.rank
        );
        if self.letters.last() == Some(&-letter) {
            self.letters.pop();
        } else {
            self.letters.push(letter);
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn extend(&mut self, other: &FreeWord) {
        for &l in &other.letters {
            self.push(l);
        }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `self^{-1} other^{-1} self other`.
    pub fn commutator(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.inverse();
        out.extend(&other.inverse());
        out.extend(self);
        out.extend(other);
        out
    }

    /// Exponent sum of generator `index`.
    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.unsigned_abs() as usize == index)
            .map(|l| l.signum() as i64)
            .sum()
    }

    /// Splits a word of the form `c x_i c^{-1}` into its conjugator `c`.
    ///
    /// The word must be reduced, of odd length, have `x_i` as its middle
    /// letter and be a palindrome up to inversion around it.
    pub fn conjugator_of(&self, index: usize) -> Option<FreeWord> {
        let n = self.letters.len();
        if n.is_multiple_of(2) {
            return None;
        }
        let m = n / 2;
        if self.letters[m] != index as i32 {
            return None;
        }
        for j in 0..m {
            if self.letters[j] != -self.letters[n - 1 - j] {
                return None;
            }
        }
        Some(FreeWord { rank: self.rank, letters: self.letters[..m].to_vec() })
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *l > 0 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}
