//! Truncated Magnus expansion and Milnor invariants of pure braids.
//!
//! The expansion sends `x_i ↦ 1 + X_i` and `x_i^{-1} ↦ 1 - X_i + X_i^2 - ...`
//! into non-commuting power series with integer coefficients, truncated at
//! a maximum monomial length. Longitudes come from the Artin action: for a
//! pure braid `u`, `act(u)(x_i) = λ_i x_i λ_i^{-1}` with `λ_i` the reduced
//! conjugator. `μ(i_1 … i_{m-1} i_m)` is the coefficient of
//! `X_{i_1} ⋯ X_{i_{m-1}}` in the expansion of `λ_{i_m}`.
//!
//! Because `λ_i` is not normalized to zero `x_i`-exponent, entries whose last
//! two indices coincide depend on that choice. [`normalization_free`] marks
//! the indices that do not, and the vanishing diagnostics only look at those.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::braid::{BraidError, BraidWord};
use crate::free_group::FreeWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagnusError {
    #[error("braid is not pure")]
    NotPure,
    #[error("image of x_{0} is not a conjugate of x_{0}")]
    NotConjugate(usize),
    #[error("index sequence must have length at least 2, got {0}")]
    IndexTooShort(usize),
    #[error("index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("cutoff must be at least 1")]
    ZeroCutoff,
    #[error("coefficient overflow")]
    Overflow,
    #[error(transparent)]
    Braid(#[from] BraidError),
}

/// A monomial `X_{i_1} ⋯ X_{i_m}` stored as 1-based generator indices.
pub type Monomial = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusSeries {
    rank: usize,
    cutoff: usize,
    coeffs: BTreeMap<Monomial, i64>,
}

impl MagnusSeries {
    pub fn one(rank: usize, cutoff: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Vec::new(), 1);
        Self { rank, cutoff, coeffs }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coefficient(&self, m: &[u16]) -> i64 {
        self.coeffs.get(m).copied().unwrap_or(0)
    }

    /// Nonzero terms in monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.coeffs.iter().map(|(m, c)| (m, *c))
    }

    fn add_term(&mut self, m: Monomial, c: i64) -> Result<(), MagnusError> {
        if c == 0 {
            return Ok(());
        }
        let v = self.coefficient(&m).checked_add(c).ok_or(MagnusError::Overflow)?;
        if v == 0 {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, v);
        }
        Ok(())
    }

    /// Truncated product.
    pub fn mul(&self, other: &MagnusSeries) -> Result<MagnusSeries, MagnusError> {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = MagnusSeries { rank: self.rank, cutoff, coeffs: BTreeMap::new() };
        for (a, &ca) in &self.coeffs {
            for (b, &cb) in &other.coeffs {
                if a.len() + b.len() > cutoff {
                    continue;
                }
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add_term(m, ca.checked_mul(cb).ok_or(MagnusError::Overflow)?)?;
            }
        }
        Ok(out)
    }
}

/// Dense truncated series indexed by monomial, used for long words.
struct DenseSeries {
    rank: usize,
    cutoff: usize,
    offsets: Vec<usize>,
    coef: Vec<i64>,
}

impl DenseSeries {
    fn one(rank: usize, cutoff: usize) -> Self {
        let mut offsets = vec![0usize; cutoff + 2];
        let mut block = 1usize;
        for len in 0..=cutoff {
            offsets[len + 1] = offsets[len] + block;
            block *= rank;
        }
        let mut coef = vec![0i64; offsets[cutoff + 1]];
        coef[0] = 1;
        Self { rank, cutoff, offsets, coef }
    }

    /// Right-multiplies by `1 + X_g` or its inverse; `g` is 0-based.
    fn mul_letter(&mut self, g: usize, positive: bool) -> Result<(), MagnusError> {
        let n = self.rank;
        if positive {
            // descending length keeps the source coefficients unmodified
            for len in (0..self.cutoff).rev() {
                let (lo, hi) = (self.offsets[len], self.offsets[len + 1]);
                let next = self.offsets[len + 1];
                for idx in 0..hi - lo {
                    let c = self.coef[lo + idx];
                    if c != 0 {
                        let t = next + idx * n + g;
                        self.coef[t] = self.coef[t].checked_add(c).ok_or(MagnusError::Overflow)?;
                    }
                }
            }
        } else {
            // S' (1 + X_g) = S, solved in ascending length
            for len in 0..self.cutoff {
                let (lo, hi) = (self.offsets[len], self.offsets[len + 1]);
                let next = self.offsets[len + 1];
                for idx in 0..hi - lo {
                    let c = self.coef[lo + idx];
                    if c != 0 {
                        let t = next + idx * n + g;
                        self.coef[t] = self.coef[t].checked_sub(c).ok_or(MagnusError::Overflow)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn get(&self, mono: &[u16]) -> i64 {
        let mut idx = 0usize;
        for &g in mono {
            idx = idx * self.rank + (g as usize - 1);
        }
        self.coef[self.offsets[mono.len()] + idx]
    }

    fn into_sparse(self) -> MagnusSeries {
        let mut coeffs = BTreeMap::new();
        for len in 0..=self.cutoff {
            let lo = self.offsets[len];
            for idx in 0..self.offsets[len + 1] - lo {
                let c = self.coef[lo + idx];
                if c != 0 {
                    let mut mono = vec![0u16; len];
                    let mut r = idx;
                    for slot in mono.iter_mut().rev() {
                        *slot = (r % self.rank) as u16 + 1;
                        r /= self.rank;
                    }
                    coeffs.insert(mono, c);
                }
            }
        }
        MagnusSeries { rank: self.rank, cutoff: self.cutoff, coeffs }
    }
}

impl DenseSeries {
    fn product(&self, other: &DenseSeries) -> Result<DenseSeries, MagnusError> {
        let n = self.rank;
        let mut out = DenseSeries::one(n, self.cutoff);
        out.coef[0] = 0;
        let mut width = vec![1usize; self.cutoff + 1];
        for len in 1..=self.cutoff {
            width[len] = width[len - 1] * n;
        }
        for la in 0..=self.cutoff {
            for lb in 0..=self.cutoff - la {
                let dst = self.offsets[la + lb];
                for ia in 0..width[la] {
                    let a = self.coef[self.offsets[la] + ia];
                    if a == 0 {
                        continue;
                    }
                    for ib in 0..width[lb] {
                        let b = other.coef[other.offsets[lb] + ib];
                        if b != 0 {
                            let t = dst + ia * width[lb] + ib;
                            let v = a.checked_mul(b).ok_or(MagnusError::Overflow)?;
                            out.coef[t] = out.coef[t].checked_add(v).ok_or(MagnusError::Overflow)?;
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `act(u)(x_j) = W x_gen W⁻¹`, with `W` and `W⁻¹` kept as series.
struct Conjugate {
    w: DenseSeries,
    w_inv: DenseSeries,
    gen: usize,
}

impl Clone for DenseSeries {
    fn clone(&self) -> Self {
        DenseSeries { rank: self.rank, cutoff: self.cutoff, offsets: self.offsets.clone(), coef: self.coef.clone() }
    }
}

impl Clone for Conjugate {
    fn clone(&self) -> Self {
        Conjugate { w: self.w.clone(), w_inv: self.w_inv.clone(), gen: self.gen }
    }
}

/// `A x_{a.gen}^{±1} A⁻¹ B` and its inverse.
fn conjugate_then(a: &Conjugate, positive: bool, b: &Conjugate) -> Result<(DenseSeries, DenseSeries), MagnusError> {
    let mut w = a.w.clone();
    w.mul_letter(a.gen, positive)?;
    let w = w.product(&a.w_inv)?.product(&b.w)?;
    let mut w_inv = b.w_inv.product(&a.w)?;
    w_inv.mul_letter(a.gen, !positive)?;
    let w_inv = w_inv.product(&a.w_inv)?;
    Ok((w, w_inv))
}

/// Conjugators of the Artin images as series truncated at `cutoff`,
/// computed letter by letter without building free words.
fn conjugator_series(u: &BraidWord, cutoff: usize) -> Result<Vec<DenseSeries>, MagnusError> {
    if !u.is_pure() {
        return Err(MagnusError::NotPure);
    }
    let n = u.strands();
    let mut img: Vec<Conjugate> = (0..n)
        .map(|g| Conjugate { w: DenseSeries::one(n, cutoff), w_inv: DenseSeries::one(n, cutoff), gen: g })
        .collect();
    for &l in u.letters() {
        let i = l.unsigned_abs() as usize - 1;
        let (a, b) = (img[i].clone(), img[i + 1].clone());
        if l > 0 {
            let (w, w_inv) = conjugate_then(&a, true, &b)?;
            img[i] = Conjugate { w, w_inv, gen: b.gen };
            img[i + 1] = a;
        } else {
            let (w, w_inv) = conjugate_then(&b, false, &a)?;
            img[i] = b;
            img[i + 1] = Conjugate { w, w_inv, gen: a.gen };
        }
    }
    Ok(img.into_iter().map(|c| c.w).collect())
}

/// The normalization-free entries of [`mu_table`], computed from series
/// conjugators in time polynomial in the braid length. Any conjugator
/// differs from the reduced one by a power of `x_i` on the right, which
/// only touches monomials ending in `X_i`.
pub fn free_mu_table(u: &BraidWord, cutoff: usize) -> Result<MuTable, MagnusError> {
    if cutoff < 2 {
        return Err(MagnusError::IndexTooShort(cutoff));
    }
    let n = u.strands();
    let series = conjugator_series(u, cutoff - 1)?;
    let mut entries = BTreeMap::new();
    for len in 2..=cutoff {
        for seq in all_sequences(n, len).into_iter().filter(|s| normalization_free(s)) {
            let (last, head) = seq.split_last().unwrap();
            let mono: Monomial = head.iter().map(|&i| i as u16).collect();
            entries.insert(seq.clone(), series[last - 1].get(&mono));
        }
    }
    Ok(MuTable { strands: n, cutoff, entries })
}

fn expand_dense(w: &FreeWord, cutoff: usize) -> Result<DenseSeries, MagnusError> {
    let mut s = DenseSeries::one(w.rank(), cutoff);
    for &l in w.letters() {
        s.mul_letter(l.unsigned_abs() as usize - 1, l > 0)?;
    }
    Ok(s)
}

/// Expansion of a free word up to monomials of length `cutoff`.
pub fn magnus_expand(w: &FreeWord, cutoff: usize) -> Result<MagnusSeries, MagnusError> {
    if cutoff == 0 {
        return Err(MagnusError::ZeroCutoff);
    }
    Ok(expand_dense(w, cutoff)?.into_sparse())
}

/// Coefficient of a single monomial, without building the whole series.
pub fn magnus_coefficient(w: &FreeWord, monomial: &[u16]) -> Result<i64, MagnusError> {
    let p = monomial.len();
    // state[s] = coefficient of the first s letters of the monomial
    let mut state = vec![0i64; p + 1];
    state[0] = 1;
    for &l in w.letters() {
        let g = l.unsigned_abs() as u16;
        let mut next = state.clone();
        for s in 0..p {
            if state[s] == 0 {
                continue;
            }
            let mut coef = state[s];
            let mut r = s;
            while r < p && monomial[r] == g {
                r += 1;
                if l < 0 {
                    coef = -coef;
                }
                next[r] = next[r].checked_add(coef).ok_or(MagnusError::Overflow)?;
                if l > 0 {
                    break;
                }
            }
        }
        state = next;
    }
    Ok(state[p])
}

/// `λ_i` for every strand of a pure braid.
pub fn longitudes(u: &BraidWord) -> Result<Vec<FreeWord>, MagnusError> {
    if !u.is_pure() {
        return Err(MagnusError::NotPure);
    }
    let act = u.artin_action();
    act.images
        .iter()
        .enumerate()
        .map(|(i, img)| img.conjugator_of(i + 1).ok_or(MagnusError::NotConjugate(i + 1)))
        .collect()
}

fn check_index(u: &BraidWord, index: &[usize]) -> Result<(), MagnusError> {
    if index.len() < 2 {
        return Err(MagnusError::IndexTooShort(index.len()));
    }
    for &i in index {
        if i == 0 || i > u.strands() {
            return Err(MagnusError::IndexOutOfRange { index: i, strands: u.strands() });
        }
    }
    Ok(())
}

pub fn milnor_mu(u: &BraidWord, index: &[usize]) -> Result<i64, MagnusError> {
    check_index(u, index)?;
    let lambdas = longitudes(u)?;
    let (last, head) = index.split_last().expect("length checked");
    let mono: Monomial = head.iter().map(|&i| i as u16).collect();
    magnus_coefficient(&lambdas[last - 1], &mono)
}

/// True when `μ(I)` does not depend on how `λ_{i_m}` is normalized, i.e.
/// the last two indices differ.
pub fn normalization_free(index: &[usize]) -> bool {
    index.len() >= 2 && index[index.len() - 1] != index[index.len() - 2]
}

/// Milnor invariants of a pure braid for all index sequences of length
/// `2..=cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuTable {
    pub strands: usize,
    pub cutoff: usize,
    pub entries: BTreeMap<Vec<usize>, i64>,
}

impl MuTable {
    pub fn get(&self, index: &[usize]) -> Option<i64> {
        self.entries.get(index).copied()
    }
}

impl Serialize for MuTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Entries<'a>(&'a BTreeMap<Vec<usize>, i64>);
        impl Serialize for Entries<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    let key = k.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                    map.serialize_entry(&key, v)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("strands", &self.strands)?;
        map.serialize_entry("cutoff", &self.cutoff)?;
        map.serialize_entry("mu", &Entries(&self.entries))?;
        map.end()
    }
}

fn all_sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (1..=n).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn mu_table(u: &BraidWord, cutoff: usize) -> Result<MuTable, MagnusError> {
    if cutoff < 2 {
        return Err(MagnusError::IndexTooShort(cutoff));
    }
    let n = u.strands();
    let lambdas = longitudes(u)?;
    let series = lambdas
        .iter()
        .map(|l| expand_dense(l, cutoff - 1))
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries = BTreeMap::new();
    for len in 2..=cutoff {
        for seq in all_sequences(n, len) {
            let (last, head) = seq.split_last().unwrap();
            let mono: Monomial = head.iter().map(|&i| i as u16).collect();
            entries.insert(seq.clone(), series[last - 1].get(&mono));
        }
    }
    Ok(MuTable { strands: n, cutoff, entries })
}

/// Smallest `m ≤ cutoff` such that some normalization-free `μ(I)` with
/// `|I| = m` is nonzero.
pub fn first_nonvanishing_length(u: &BraidWord, cutoff: usize) -> Result<Option<usize>, MagnusError> {
    if cutoff < 2 {
        return Ok(None);
    }
    let t = free_mu_table(u, cutoff)?;
    Ok(t.entries.iter().filter(|(_, &v)| v != 0).map(|(k, _)| k.len()).min())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(n: usize, l: &[i32]) -> FreeWord {
        FreeWord::from_letters(n, l.iter().copied())
    }

    #[test]
    fn expand_generator_and_inverse() {
        let s = magnus_expand(&fw(2, &[1]), 3).unwrap();
        assert_eq!(s.terms().collect::<Vec<_>>(), vec![(&vec![], 1), (&vec![1], 1)]);
        let s = magnus_expand(&fw(2, &[-1]), 2).unwrap();
        assert_eq!(s.coefficient(&[]), 1);
        assert_eq!(s.coefficient(&[1]), -1);
        assert_eq!(s.coefficient(&[1, 1]), 1);
        assert_eq!(s.terms().count(), 3);
    }

    #[test]
    fn expand_commutator() {
        let c = fw(2, &[1]).commutator(&fw(2, &[2]));
        let s = magnus_expand(&c, 2).unwrap();
        let terms: Vec<_> = s.terms().map(|(m, c)| (m.clone(), c)).collect();
        assert_eq!(terms, vec![(vec![], 1), (vec![1, 2], 1), (vec![2, 1], -1)]);
    }

    #[test]
    fn single_coefficient_matches_full_expansion() {
        let w = fw(3, &[1, -2, 3, -1, -1, 2, 3, -3, 2]);
        let s = magnus_expand(&w, 3).unwrap();
        for m in all_sequences(3, 3).into_iter().chain(all_sequences(3, 2)) {
            let m: Vec<u16> = m.iter().map(|&i| i as u16).collect();
            assert_eq!(magnus_coefficient(&w, &m).unwrap(), s.coefficient(&m), "{m:?}");
        }
    }

    #[test]
    fn longitudes_of_clasp() {
        assert!(longitudes(&BraidWord::identity(3)).unwrap().iter().all(|l| l.is_empty()));
        let a12 = BraidWord::pure_generator(2, 1, 2).unwrap();
        let l = longitudes(&a12).unwrap();
        assert_eq!(l[0].letters(), &[1, 2]);
        assert_eq!(milnor_mu(&a12, &[2, 1]).unwrap(), 1);
        assert_eq!(milnor_mu(&a12, &[1, 2]).unwrap(), 1);
        let b1 = crate::braid::bing_braid(1).unwrap();
        assert!(longitudes(&b1).unwrap()[0].is_empty());
        assert_eq!(
            longitudes(&BraidWord::new(2, [1]).unwrap()),
            Err(MagnusError::NotPure)
        );
    }

    #[test]
    fn triple_linking() {
        let a13 = BraidWord::pure_generator(3, 1, 3).unwrap();
        let a23 = BraidWord::pure_generator(3, 2, 3).unwrap();
        let c = a13.commutator(&a23).unwrap();
        assert_eq!(milnor_mu(&c, &[1, 2, 3]).unwrap().abs(), 1);
        assert_eq!(first_nonvanishing_length(&c, 4).unwrap(), Some(3));
        let a12 = BraidWord::pure_generator(2, 1, 2).unwrap();
        assert_eq!(first_nonvanishing_length(&a12, 4).unwrap(), Some(2));
        assert_eq!(first_nonvanishing_length(&BraidWord::identity(3), 6).unwrap(), None);
    }

    #[test]
    fn index_errors() {
        let u = BraidWord::identity(3);
        assert_eq!(milnor_mu(&u, &[1]), Err(MagnusError::IndexTooShort(1)));
        assert!(matches!(milnor_mu(&u, &[1, 4]), Err(MagnusError::IndexOutOfRange { .. })));
        assert_eq!(milnor_mu(&u, &[1, 2, 3]).unwrap(), 0);
    }

    #[test]
    fn table_serialization() {
        let a12 = BraidWord::pure_generator(2, 1, 2).unwrap();
        let t = mu_table(&a12, 2).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["strands"], 2);
        assert_eq!(v["mu"]["2,1"], 1);
    }
}
