//! Braid words on `n` strands, their Artin action on the free group, and the
//! strand surgery (doubling, deletion) used to build clasp braids.
//!
//! A letter `±i` is the Artin generator `σ_i^{±1}` with `1 ≤ i ≤ n-1`; in a
//! positive letter the strand at position `i` passes over the strand at
//! `i+1`. Words are kept freely reduced.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::free_group::FreeWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("generator index {index} out of range for {strands} strands")]
    LetterOutOfRange { index: i32, strands: usize },
    #[error("strand index {index} out of range for {strands} strands")]
    StrandOutOfRange { index: usize, strands: usize },
    #[error("braid is not pure")]
    NotPure,
    #[error("parameter must be at least 1, got {0}")]
    NonPositive(usize),
    #[error("a braid needs at least one strand")]
    NoStrands,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    #[serde(rename = "word")]
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn identity(strands: usize) -> Self {
        Self { strands, letters: Vec::new() }
    }

    pub fn new(strands: usize, letters: impl IntoIterator<Item = i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        let mut w = Self::identity(strands);
        for l in letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(BraidError::LetterOutOfRange { index: l, strands });
            }
            w.push(l);
        }
        Ok(w)
    }

    /// Re-checks letters after deserialization, which bypasses [`BraidWord::new`].
    pub fn validated(self) -> Result<Self, BraidError> {
        Self::new(self.strands, self.letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
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

    fn push(&mut self, letter: i32) {
        if self.letters.last() == Some(&-letter) {
            self.letters.pop();
        } else {
            self.letters.push(letter);
        }
    }

    /// The pure generator `A_{ij}` (`i < j`): strand `j` travels left over
    /// the strands between, makes a full positive twist with strand `i`, and
    /// returns.
    pub fn pure_generator(strands: usize, i: usize, j: usize) -> Result<Self, BraidError> {
        if i == 0 || j <= i || j > strands {
            return Err(BraidError::StrandOutOfRange { index: j.max(i), strands });
        }
        let mut letters = Vec::new();
        for g in (i + 1..j).rev() {
            letters.push(g as i32);
        }
        letters.push(i as i32);
        letters.push(i as i32);
        for g in i + 1..j {
            letters.push(-(g as i32));
        }
        Self::new(strands, letters)
    }

    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch(self.strands, other.strands));
        }
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `u^{-1} v^{-1} u v`.
    pub fn commutator(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        self.inverse()
            .compose(&other.inverse())?
            .compose(self)?
            .compose(other)
    }

    /// `perm[p]` is the final position (0-based) of the strand starting at
    /// position `p`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let j = l.unsigned_abs() as usize - 1;
            at.swap(j, j + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(p, &q)| p == q)
    }

    /// Right-composed Artin action: the action of `uv` is `act(u) ∘ act(v)`.
    ///
    /// `σ_i` sends `x_i ↦ x_i x_{i+1} x_i^{-1}`, `x_{i+1} ↦ x_i`.
    pub fn artin_action(&self) -> FreeGroupEndo {
        let n = self.strands;
        let mut images: Vec<FreeWord> = (1..=n).map(|g| FreeWord::generator(n, g)).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            let a = images[i].clone();
            let b = images[i + 1].clone();
            if l > 0 {
                let mut w = a.clone();
                w.extend(&b);
                w.extend(&a.inverse());
                images[i] = w;
                images[i + 1] = a;
            } else {
                let mut w = b.inverse();
                w.extend(&a);
                w.extend(&b);
                images[i] = b;
                images[i + 1] = w;
            }
        }
        FreeGroupEndo { rank: n, images }
    }

    /// Decides whether the word is the identity braid, using faithfulness of
    /// the Artin representation.
    pub fn is_trivial(&self) -> bool {
        self.is_pure() && self.artin_action().is_identity()
    }

    /// Replaces the strand starting at position `index` (1-based) by a
    /// parallel pair, with no crossings between the two copies.
    pub fn double_strand(&self, index: usize) -> Result<BraidWord, BraidError> {
        if index == 0 || index > self.strands {
            return Err(BraidError::StrandOutOfRange { index, strands: self.strands });
        }
        let mut q = index; // current position of the doubled strand
        let mut out = BraidWord::identity(self.strands + 1);
        for &l in &self.letters {
            let j = l.unsigned_abs() as usize;
            let e = l.signum();
            if j + 1 < q {
                out.push(l);
            } else if j > q {
                out.push(e * (j as i32 + 1));
            } else if j == q {
                out.push(e * (q as i32 + 1));
                out.push(e * q as i32);
                q += 1;
            } else {
                out.push(e * j as i32);
                out.push(e * (j as i32 + 1));
                q = j;
            }
        }
        Ok(out)
    }

    /// Erases every strand in `deleted` (1-based starting positions) from a
    /// pure braid and renumbers the survivors.
    pub fn delete_strands(&self, deleted: &[usize]) -> Result<BraidWord, BraidError> {
        if !self.is_pure() {
            return Err(BraidError::NotPure);
        }
        let mut gone = vec![false; self.strands];
        for &s in deleted {
            if s == 0 || s > self.strands {
                return Err(BraidError::StrandOutOfRange { index: s, strands: self.strands });
            }
            gone[s - 1] = true;
        }
        let remaining = gone.iter().filter(|g| !**g).count();
        if remaining == 0 {
            return Err(BraidError::NoStrands);
        }
        let mut at: Vec<usize> = (0..self.strands).collect();
        let mut out = BraidWord::identity(remaining);
        for &l in &self.letters {
            let j = l.unsigned_abs() as usize - 1;
            let (a, b) = (at[j], at[j + 1]);
            if !gone[a] && !gone[b] {
                let shift = at[..j].iter().filter(|&&s| gone[s]).count();
                out.push(l.signum() * (j - shift + 1) as i32);
            }
            at.swap(j, j + 1);
        }
        Ok(out)
    }
}

/// An endomorphism of the free group of rank `n`, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroupEndo {
    pub rank: usize,
    pub images: Vec<FreeWord>,
}

impl FreeGroupEndo {
    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [i as i32 + 1])
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = FreeWord::identity(self.rank);
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                out.extend(img);
            } else {
                out.extend(&img.inverse());
            }
        }
        out
    }
}

/// Clasp braid realizing a simple degree-`k` tree clasper on `2k+2` strands.
///
/// `β(1) = A_{23}` on four strands; `β(k) = [β', A_{23}]` where `β'` is
/// `β(k-1)` with strands 2 and then 1 doubled.
pub fn bing_braid(k: usize) -> Result<BraidWord, BraidError> {
    if k == 0 {
        return Err(BraidError::NonPositive(k));
    }
    let mut beta = BraidWord::pure_generator(4, 2, 3)?;
    for level in 2..=k {
        let doubled = beta.double_strand(2)?.double_strand(1)?;
        let clasp = BraidWord::pure_generator(2 * level + 2, 2, 3)?;
        beta = doubled.commutator(&clasp)?;
    }
    Ok(beta)
}

/// Left-nested commutator `[...[[A_12, A_23], A_34]..., A_{k,k+1}]` on
/// `k+1` strands; for `k = 1` it is `A_12`.
pub fn milnor_representative(k: usize) -> Result<BraidWord, BraidError> {
    if k == 0 {
        return Err(BraidError::NonPositive(k));
    }
    let n = k + 1;
    let mut w = BraidWord::pure_generator(n, 1, 2)?;
    for j in 2..=k {
        w = w.commutator(&BraidWord::pure_generator(n, j, j + 1)?)?;
    }
    Ok(w)
}

/// Product of `len` random pure generators `A_ij^{±1}`.
pub fn random_pure_braid(rng: &mut impl Rng, strands: usize, len: usize) -> BraidWord {
    let mut w = BraidWord::identity(strands);
    for _ in 0..len {
        w = w.compose(&random_pure_generator(rng, strands)).expect("same strand count");
    }
    w
}

fn random_pure_generator(rng: &mut impl Rng, strands: usize) -> BraidWord {
    assert!(strands >= 2);
    let i = rng.gen_range(1..strands);
    let j = rng.gen_range(i + 1..=strands);
    let a = BraidWord::pure_generator(strands, i, j).expect("indices in range");
    if rng.gen_bool(0.5) {
        a
    } else {
        a.inverse()
    }
}

/// Left-nested commutator of `class` random pure generators; it lies in the
/// `class`-th term of the lower central series.
pub fn random_commutator(rng: &mut impl Rng, strands: usize, class: usize) -> BraidWord {
    assert!(class >= 1);
    let mut w = random_pure_generator(rng, strands);
    for _ in 1..class {
        w = w.commutator(&random_pure_generator(rng, strands)).expect("same strand count");
    }
    w
}

/// Pairwise linking number of strands `i` and `j` (1-based starting
/// positions), computed as half the signed count of crossings between them.
pub fn linking_number(u: &BraidWord, i: usize, j: usize) -> i64 {
    let mut at: Vec<usize> = (0..u.strands).collect();
    let mut total = 0i64;
    for &l in &u.letters {
        let p = l.unsigned_abs() as usize - 1;
        let pair = (at[p] + 1, at[p + 1] + 1);
        if pair == (i, j) || pair == (j, i) {
            total += l.signum() as i64;
        }
        at.swap(p, p + 1);
    }
    total / 2
}
