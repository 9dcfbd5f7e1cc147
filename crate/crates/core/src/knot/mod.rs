//! Planar diagram codes for closed links.
//!
//! A crossing lists four arc ids counterclockwise starting at the incoming
//! under-strand, so the under-strand runs from slot 0 to slot 2. The over
//! strand runs from slot 3 to slot 1 on a positive crossing and from slot 1
//! to slot 3 on a negative one. Crossingless circle components are counted
//! in `loops`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::BraidWord;

mod bracket;
mod conway;
mod gauss;
pub mod random;
mod template;

pub use bracket::{decide_ck, evaluate_bracket, Invariant};
pub use conway::{conway_polynomial, conway_with_priority, ConwayPoly, SKEIN_BUDGET};
pub use gauss::{a2_invariant, gauss_code, Passage};
pub use template::{apply_ck_template, apply_sites, clasp_site, faces, validate_site, Face, MoveSite, Side, SiteArc};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KnotError {
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("not a knot: {0} components")]
    NotAKnot(usize),
    #[error("singular crossing present")]
    Singular,
    #[error("crossing budget exceeded: {0} crossings")]
    Budget(usize),
    #[error("no such {0}")]
    BadId(String),
    #[error("invalid site: {0}")]
    BadSite(String),
    #[error("overlapping sites: {0}")]
    Overlap(String),
    #[error("k must be in 1..=3, got {0}")]
    Degree(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub arcs: [usize; 4],
    pub sign: i8,
    pub singular: bool,
}

impl Crossing {
    pub fn new(arcs: [usize; 4], sign: i8) -> Self {
        Crossing { arcs, sign, singular: false }
    }

    /// Slots where a strand enters: under then over.
    pub fn in_slots(&self) -> [usize; 2] {
        if self.sign > 0 {
            [0, 3]
        } else {
            [0, 1]
        }
    }

    pub fn is_in_slot(&self, slot: usize) -> bool {
        self.in_slots().contains(&slot)
    }

    /// Slot on the same strand as `slot`.
    pub fn across(slot: usize) -> usize {
        (slot + 2) % 4
    }

    /// The same crossing with the over and under strands exchanged.
    pub fn switched(&self) -> Self {
        let [a, b, c, d] = self.arcs;
        let arcs = if self.sign > 0 { [d, a, b, c] } else { [b, c, d, a] };
        Crossing { arcs, sign: -self.sign, singular: self.singular }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    pub loops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdViolation {
    pub code: String,
    pub detail: String,
}

impl std::fmt::Display for PdViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

fn violation(code: &str, detail: String) -> PdViolation {
    PdViolation { code: code.into(), detail }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PdCrossing {
    arcs: [usize; 4],
    sign: i8,
    #[serde(default)]
    singular: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PdJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    components: Option<Vec<Vec<usize>>>,
    crossings: Vec<PdCrossing>,
}

/// Where an arc ends (`head`, incoming slot) and starts (`tail`).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Ends {
    pub head: Option<(usize, usize)>,
    pub tail: Option<(usize, usize)>,
}

impl LinkDiagram {
    pub fn unknot() -> Self {
        LinkDiagram { crossings: vec![], loops: 1 }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn singular_count(&self) -> usize {
        self.crossings.iter().filter(|c| c.singular).count()
    }

    pub fn arcs(&self) -> BTreeSet<usize> {
        self.crossings.iter().flat_map(|c| c.arcs).collect()
    }

    pub fn max_arc(&self) -> usize {
        self.arcs().last().copied().unwrap_or(0)
    }

    pub(crate) fn ends(&self) -> BTreeMap<usize, Ends> {
        let mut m: BTreeMap<usize, Ends> = BTreeMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            for (s, &x) in c.arcs.iter().enumerate() {
                let e = m.entry(x).or_default();
                if c.is_in_slot(s) {
                    e.head = Some((i, s));
                } else {
                    e.tail = Some((i, s));
                }
            }
        }
        m
    }

    /// Consistency problems; empty means the code is a closed link diagram.
    pub fn validate(&self) -> Vec<PdViolation> {
        let mut out = Vec::new();
        let mut heads: BTreeMap<usize, usize> = BTreeMap::new();
        let mut tails: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            if c.sign != 1 && c.sign != -1 {
                out.push(violation("bad sign", format!("crossing {i} has sign {}", c.sign)));
                continue;
            }
            for (s, &x) in c.arcs.iter().enumerate() {
                let m = if c.is_in_slot(s) { &mut heads } else { &mut tails };
                *m.entry(x).or_default() += 1;
            }
        }
        for x in self.arcs() {
            let (h, t) = (heads.get(&x).copied().unwrap_or(0), tails.get(&x).copied().unwrap_or(0));
            if h + t != 2 {
                out.push(violation("arc count", format!("arc {x} appears {} times", h + t)));
            } else if h != 1 {
                out.push(violation("orientation", format!("arc {x} enters {h} times and leaves {t} times")));
            }
        }
        out
    }

    /// Arc cycles of the crossing components, each starting at its
    /// smallest arc, ordered by that arc. Assumes a valid diagram.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_by(|x| x)
    }

    /// Like `components` with a different arc priority for start points and
    /// ordering.
    pub fn components_by<K: Ord + Copy>(&self, key: impl Fn(usize) -> K) -> Vec<Vec<usize>> {
        let ends = self.ends();
        let mut seen = BTreeSet::new();
        let mut cycles = Vec::new();
        for &x in ends.keys() {
            if seen.contains(&x) {
                continue;
            }
            let mut cycle = vec![];
            let mut y = x;
            while seen.insert(y) {
                cycle.push(y);
                y = self.next_arc(&ends, y);
            }
            let start = (0..cycle.len()).min_by_key(|&i| key(cycle[i])).unwrap_or(0);
            cycle.rotate_left(start);
            cycles.push(cycle);
        }
        cycles.sort_by_key(|c| key(c[0]));
        cycles
    }

    pub(crate) fn next_arc(&self, ends: &BTreeMap<usize, Ends>, x: usize) -> usize {
        let (c, s) = ends[&x].head.expect("arc without head");
        self.crossings[c].arcs[Crossing::across(s)]
    }

    pub fn component_count(&self) -> usize {
        self.components().len() + self.loops
    }

    pub fn is_knot(&self) -> bool {
        self.validate().is_empty() && self.component_count() == 1
    }

    pub fn ensure_knot(&self) -> Result<(), KnotError> {
        self.ensure_valid()?;
        match self.component_count() {
            1 => Ok(()),
            n => Err(KnotError::NotAKnot(n)),
        }
    }

    pub fn ensure_valid(&self) -> Result<(), KnotError> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(KnotError::Invalid(format!("{}: {}", v.code, v.detail))),
        }
    }

    pub fn crossing_change(&self, i: usize) -> Result<Self, KnotError> {
        let mut d = self.clone();
        let c = d.crossings.get_mut(i).ok_or_else(|| KnotError::BadId(format!("crossing {i}")))?;
        *c = c.switched();
        Ok(d)
    }

    /// Connected sum of two knots, cutting `self` at arc `x` and `other` at
    /// arc `y`.
    pub fn connected_sum(&self, other: &LinkDiagram, x: usize, y: usize) -> Result<Self, KnotError> {
        self.ensure_knot()?;
        other.ensure_knot()?;
        if self.crossings.is_empty() {
            return Ok(other.clone());
        }
        if other.crossings.is_empty() {
            return Ok(self.clone());
        }
        let off = self.max_arc() + 1;
        let mut d = self.clone();
        let head_x = d.ends().get(&x).and_then(|e| e.head).ok_or_else(|| KnotError::BadId(format!("arc {x}")))?;
        let head_y = other.ends().get(&y).and_then(|e| e.head).ok_or_else(|| KnotError::BadId(format!("arc {y}")))?;
        let base = d.crossings.len();
        d.crossings.extend(other.crossings.iter().map(|c| Crossing { arcs: c.arcs.map(|a| a + off), ..*c }));
        d.crossings[head_x.0].arcs[head_x.1] = y + off;
        d.crossings[base + head_y.0].arcs[head_y.1] = x;
        Ok(d.compacted())
    }

    /// Arc ids renumbered 1.. along the components.
    pub fn compacted(&self) -> Self {
        let mut map = BTreeMap::new();
        for x in self.components().concat() {
            let n = map.len() + 1;
            map.insert(x, n);
        }
        LinkDiagram {
            crossings: self.crossings.iter().map(|c| Crossing { arcs: c.arcs.map(|a| map[&a]), ..*c }).collect(),
            loops: self.loops,
        }
    }

    /// Mirror image: every crossing switched.
    pub fn mirror(&self) -> Self {
        LinkDiagram { crossings: self.crossings.iter().map(Crossing::switched).collect(), loops: self.loops }
    }

    /// Signed sum over all resolutions of the singular crossings.
    pub fn e_map(&self) -> FormalSum {
        let sing: Vec<usize> = (0..self.crossings.len()).filter(|&i| self.crossings[i].singular).collect();
        let mut terms = Vec::with_capacity(1 << sing.len());
        for mask in 0u64..1 << sing.len() {
            let mut d = self.clone();
            let mut coeff = 1;
            for (b, &i) in sing.iter().enumerate() {
                let eps: i8 = if mask >> b & 1 == 0 { 1 } else { -1 };
                coeff *= eps as i64;
                let c = &mut d.crossings[i];
                c.singular = false;
                if c.sign != eps {
                    *c = c.switched();
                }
            }
            terms.push((coeff, d));
        }
        FormalSum { terms }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, KnotError> {
        let p: PdJson = serde_json::from_value(v.clone()).map_err(|e| KnotError::Invalid(e.to_string()))?;
        if let Some(s) = &p.schema {
            if s != "pd.v1" {
                return Err(KnotError::Invalid(format!("schema {s}, expected pd.v1")));
            }
        }
        let mut d = LinkDiagram {
            crossings: p.crossings.iter().map(|c| Crossing { arcs: c.arcs, sign: c.sign, singular: c.singular }).collect(),
            loops: 0,
        };
        match p.components {
            None => d.loops = usize::from(d.crossings.is_empty()),
            Some(comps) => {
                d.loops = comps.iter().filter(|c| c.is_empty()).count();
                let listed: BTreeSet<usize> = comps.iter().flatten().copied().collect();
                if let Some(x) = d.arcs().difference(&listed).next() {
                    return Err(KnotError::Invalid(format!("arc {x} is in no component")));
                }
                if let Some(x) = listed.difference(&d.arcs()).next() {
                    return Err(KnotError::Invalid(format!("arc {x} does not exist")));
                }
                d.ensure_valid()?;
                let mut want: Vec<Vec<usize>> = comps.into_iter().filter(|c| !c.is_empty()).collect();
                for c in want.iter_mut() {
                    let i = (0..c.len()).min_by_key(|&i| c[i]).unwrap_or(0);
                    c.rotate_left(i);
                }
                want.sort();
                let mut got = d.components();
                got.sort();
                if want != got {
                    return Err(KnotError::Invalid("component lists disagree with the crossings".into()));
                }
            }
        }
        Ok(d)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut components = self.components();
        components.extend(std::iter::repeat_n(vec![], self.loops));
        let p = PdJson {
            schema: Some("pd.v1".into()),
            components: Some(components),
            crossings: self
                .crossings
                .iter()
                .map(|c| PdCrossing { arcs: c.arcs, sign: c.sign, singular: c.singular })
                .collect(),
        };
        serde_json::to_value(p).expect("serializable")
    }

    /// Closure of a braid with strands oriented upward. σᵢ puts the left
    /// strand over and is a positive crossing.
    pub fn braid_closure(b: &BraidWord) -> Self {
        let n = b.strands();
        let mut cur: Vec<usize> = (0..n).collect();
        let mut next = n;
        let mut crossings = Vec::new();
        for &l in b.letters() {
            let j = l.unsigned_abs() as usize - 1;
            let (bl, br, tr, tl) = (cur[j], cur[j + 1], next + 1, next);
            next += 2;
            crossings.push(if l > 0 { Crossing::new([br, tr, tl, bl], 1) } else { Crossing::new([bl, br, tr, tl], -1) });
            cur[j] = tl;
            cur[j + 1] = tr;
        }
        let rename: BTreeMap<usize, usize> = (0..n).filter(|&p| cur[p] != p).map(|p| (cur[p], p)).collect();
        for c in crossings.iter_mut() {
            c.arcs = c.arcs.map(|a| rename.get(&a).copied().unwrap_or(a));
        }
        let loops = (0..n).filter(|&p| cur[p] == p).count();
        LinkDiagram { crossings, loops }.compacted()
    }

    pub fn builtin(name: &str) -> Option<Self> {
        let braid = |n: usize, w: &[i32]| Some(Self::braid_closure(&BraidWord::new(n, w.iter().copied()).ok()?));
        match name {
            "unknot" => Some(Self::unknot()),
            "trefoil-r" => braid(2, &[1, 1, 1]),
            "trefoil-l" => braid(2, &[-1, -1, -1]),
            "figure8" => braid(3, &[1, -2, 1, -2]),
            "hopf-p" => braid(2, &[1, 1]),
            "hopf-n" => braid(2, &[-1, -1]),
            "borromean" => braid(3, &[1, -2, 1, -2, 1, -2]),
            _ => None,
        }
    }

    pub const BUILTINS: [&'static str; 7] = ["unknot", "trefoil-r", "trefoil-l", "figure8", "hopf-p", "hopf-n", "borromean"];
}

/// Integer combination of diagrams, evaluated linearly by invariants.
#[derive(Debug, Clone, Default)]
pub struct FormalSum {
    pub terms: Vec<(i64, LinkDiagram)>,
}

impl FormalSum {
    pub fn evaluate<E>(&self, mut f: impl FnMut(&LinkDiagram) -> Result<i64, E>) -> Result<i64, E> {
        let mut s = 0;
        for (c, d) in &self.terms {
            s += c * f(d)?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in LinkDiagram::BUILTINS {
            let d = LinkDiagram::builtin(name).unwrap();
            assert!(d.validate().is_empty(), "{name}");
        }
        let comps = |n: &str| LinkDiagram::builtin(n).unwrap().component_count();
        assert_eq!(comps("trefoil-r"), 1);
        assert_eq!(comps("figure8"), 1);
        assert_eq!(comps("hopf-p"), 2);
        assert_eq!(comps("borromean"), 3);
        assert_eq!(comps("unknot"), 1);
    }

    #[test]
    fn crossing_change_is_an_involution() {
        let d = LinkDiagram::builtin("figure8").unwrap();
        for i in 0..d.crossing_count() {
            let e = d.crossing_change(i).unwrap();
            assert_ne!(e, d);
            assert!(e.validate().is_empty());
            assert_eq!(e.crossing_change(i).unwrap(), d);
        }
        assert!(d.crossing_change(99).is_err());
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let d = LinkDiagram::builtin("hopf-p").unwrap();
        assert_eq!(LinkDiagram::from_json(&d.to_json()).unwrap(), d);
        let u = LinkDiagram::unknot();
        assert_eq!(LinkDiagram::from_json(&u.to_json()).unwrap(), u);
        let bad = serde_json::json!({"components":[[1,2]],"crossings":[{"arcs":[1,2,1,7],"sign":1}]});
        assert!(LinkDiagram::from_json(&bad).is_err());
        let d = LinkDiagram { crossings: vec![Crossing::new([1, 2, 3, 9], 1)], loops: 0 };
        assert!(d.validate().iter().any(|v| v.code == "arc count"));
    }

    #[test]
    fn e_map_signs() {
        let mut d = LinkDiagram::builtin("trefoil-r").unwrap();
        assert_eq!(d.e_map().terms.len(), 1);
        d.crossings[0].singular = true;
        let s = d.e_map();
        assert_eq!(s.terms.len(), 2);
        assert_eq!(s.terms[0].0, 1);
        assert_eq!(s.terms[0].1.crossings[0].sign, 1);
        assert_eq!(s.terms[1].0, -1);
        assert_eq!(s.terms[1].1.crossings[0].sign, -1);
    }
}
