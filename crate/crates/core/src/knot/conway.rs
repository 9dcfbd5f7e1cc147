use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{Crossing, KnotError, LinkDiagram};

/// Largest diagram the skein recursion accepts.
pub const SKEIN_BUDGET: usize = 30;

/// Coefficients of 1, z, z², ... with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct ConwayPoly(pub Vec<i64>);

impl ConwayPoly {
    pub fn one() -> Self {
        ConwayPoly(vec![1])
    }

    pub fn zero() -> Self {
        ConwayPoly(vec![])
    }

    fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn coeff(&self, j: usize) -> i64 {
        self.0.get(j).copied().unwrap_or(0)
    }

    /// `self + s·z·other`.
    fn add_z(&self, s: i64, other: &ConwayPoly) -> Self {
        let mut v = self.0.clone();
        v.resize(v.len().max(other.0.len() + 1), 0);
        for (i, c) in other.0.iter().enumerate() {
            v[i + 1] += s * c;
        }
        ConwayPoly(v).trim()
    }

    pub fn mul(&self, other: &ConwayPoly) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::zero();
        }
        let mut v = vec![0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        ConwayPoly(v).trim()
    }
}

impl fmt::Display for ConwayPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate().filter(|(_, c)| **c != 0) {
            let mag = c.unsigned_abs();
            let body = match (i, mag) {
                (0, _) => mag.to_string(),
                (1, 1) => "z".into(),
                (1, _) => format!("{mag}z"),
                (_, 1) => format!("z^{i}"),
                _ => format!("{mag}z^{i}"),
            };
            let sign = if c < 0 { "-" } else { "+" };
            if parts.is_empty() {
                parts.push(if c < 0 { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{sign} {body}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Conway polynomial by the skein recursion, base points at the smallest
/// arc of each component.
pub fn conway_polynomial(d: &LinkDiagram) -> Result<ConwayPoly, KnotError> {
    let prio: BTreeMap<usize, u64> = d.arcs().into_iter().map(|x| (x, x as u64)).collect();
    conway_with_priority(d, &prio)
}

/// Skein recursion where each component is walked from its arc of least
/// priority and components are visited in that order. Every arc of `d` must
/// have a priority.
pub fn conway_with_priority(d: &LinkDiagram, prio: &BTreeMap<usize, u64>) -> Result<ConwayPoly, KnotError> {
    d.ensure_valid()?;
    if d.crossings.iter().any(|c| c.singular) {
        return Err(KnotError::Singular);
    }
    if d.crossing_count() > SKEIN_BUDGET {
        return Err(KnotError::Budget(d.crossing_count()));
    }
    if let Some(x) = d.arcs().into_iter().find(|x| !prio.contains_key(x)) {
        return Err(KnotError::BadId(format!("priority for arc {x}")));
    }
    Ok(skein(d.clone(), prio.clone()))
}

fn skein(d: LinkDiagram, prio: BTreeMap<usize, u64>) -> ConwayPoly {
    let comps = d.components_by(|x| (prio[&x], x));
    let total = comps.len() + d.loops;
    let ends = d.ends();
    let mut seen = BTreeSet::new();
    let mut bad = None;
    'walk: for comp in &comps {
        for x in comp {
            let (c, s) = ends[x].head.expect("valid diagram");
            if seen.insert(c) && s == 0 {
                bad = Some(c);
                break 'walk;
            }
        }
    }
    let Some(c) = bad else {
        return if total == 1 { ConwayPoly::one() } else { ConwayPoly::zero() };
    };
    let sign = d.crossings[c].sign as i64;
    let switched = d.crossing_change(c).expect("crossing exists");
    let (smoothed, sprio) = smooth(&d, c, &prio);
    skein(switched, prio).add_z(sign, &skein(smoothed, sprio))
}

/// Oriented smoothing at crossing `c`.
fn smooth(d: &LinkDiagram, c: usize, prio: &BTreeMap<usize, u64>) -> (LinkDiagram, BTreeMap<usize, u64>) {
    let Crossing { arcs: [a, b, cc, dd], sign, .. } = d.crossings[c];
    let joins = if sign > 0 { [(a, b), (dd, cc)] } else { [(a, dd), (b, cc)] };
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(p: &BTreeMap<usize, usize>, mut x: usize) -> usize {
        while let Some(&y) = p.get(&x) {
            x = y;
        }
        x
    }
    let mut prio = prio.clone();
    let mut loops = d.loops;
    for (x, y) in joins {
        let (rx, ry) = (find(&parent, x), find(&parent, y));
        if rx == ry {
            loops += 1;
        } else {
            let (keep, gone) = (rx.min(ry), rx.max(ry));
            parent.insert(gone, keep);
            let p = prio[&rx].min(prio[&ry]);
            prio.insert(keep, p);
        }
    }
    let crossings: Vec<Crossing> = d
        .crossings
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != c)
        .map(|(_, x)| Crossing { arcs: x.arcs.map(|a| find(&parent, a)), ..*x })
        .collect();
    let out = LinkDiagram { crossings, loops };
    let live = out.arcs();
    prio.retain(|x, _| live.contains(x));
    (out, prio)
}
