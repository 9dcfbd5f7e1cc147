//! Exact sparse row echelon form over the rationals.
//!
//! Columns are integers; a smaller column index is eliminated first, so
//! callers order columns by the preference they want for pivots.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Row = Vec<(usize, BigRational)>;

#[derive(Default)]
pub struct Echelon {
    pivots: HashMap<usize, Row>,
}

/// Sorts by column, merges duplicates and drops zeros.
pub fn normalize(mut row: Row) -> Row {
    row.sort_by_key(|e| e.0);
    let mut out: Row = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

pub fn int_row(entries: impl IntoIterator<Item = (usize, i64)>) -> Row {
    normalize(
        entries
            .into_iter()
            .map(|(c, v)| (c, BigRational::from_integer(BigInt::from(v))))
            .collect(),
    )
}

/// `a - f * b` for sorted rows.
fn axpy(a: &Row, f: &BigRational, b: &Row) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Reduces `row` against the current pivots.
    pub fn reduce(&self, row: Row) -> Row {
        let mut row = normalize(row);
        let mut done = 0;
        while done < row.len() {
            let (c, f) = (row[done].0, row[done].1.clone());
            match self.pivots.get(&c) {
                Some(p) => {
                    let head = row[..done].to_vec();
                    let mut tail = axpy(&row[done..].to_vec(), &f, p);
                    row = head;
                    row.append(&mut tail);
                }
                None => done += 1,
            }
        }
        row
    }

    /// Adds a row; returns whether it raised the rank.
    pub fn insert(&mut self, row: Row) -> bool {
        let mut row = normalize(row);
        loop {
            let Some((c, f)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&c) {
                Some(p) => row = axpy(&row, &f, p),
                None => {
                    let inv = f.recip();
                    for e in row.iter_mut() {
                        e.1 = &e.1 * &inv;
                    }
                    debug_assert!(row[0].1.is_one());
                    self.pivots.insert(c, row);
                    return true;
                }
            }
        }
    }
}

/// Rank of a list of rows.
pub fn rank(rows: impl IntoIterator<Item = Row>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}
