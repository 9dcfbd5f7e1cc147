//! Uni-trivalent diagrams on a one-manifold and their quotient spaces.
//!
//! A diagram is stored by darts (half-edges). Legs come first, in skeleton
//! order; trivalent vertex `v` owns the three consecutive darts starting at
//! `legs + 3v`, listed in their cyclic order. `partner` pairs darts into
//! edges.

mod enumerate;
mod relations;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::enumerate_diagrams;
pub use relations::{relation_vectors, relations_at, space_dimension, DiagramVector, Dimension, Relation, StuSign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Circle,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Skeleton {
    pub components: Vec<Component>,
}

impl Skeleton {
    pub fn circle() -> Self {
        Self { components: vec![Component::Circle] }
    }

    pub fn intervals(n: usize) -> Self {
        Self { components: vec![Component::Interval; n] }
    }

    /// Parses `circle`, `interval`, or a comma list such as `interval,interval`.
    pub fn parse(s: &str) -> Option<Self> {
        let components = s
            .split(',')
            .map(|p| match p.trim() {
                "circle" => Some(Component::Circle),
                "interval" => Some(Component::Interval),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        (!components.is_empty()).then_some(Self { components })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("invalid diagram: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    skeleton: Skeleton,
    /// Skeleton component of each leg; non-decreasing.
    legs: Vec<usize>,
    trivalent: usize,
    partner: Vec<usize>,
}

impl Diagram {
    pub fn empty(skeleton: Skeleton) -> Self {
        Self { skeleton, legs: vec![], trivalent: 0, partner: vec![] }
    }

    /// Builds and checks a diagram from raw parts. Leg order within a
    /// component is the skeleton order.
    pub fn new(
        skeleton: Skeleton,
        legs: Vec<usize>,
        trivalent: usize,
        partner: Vec<usize>,
    ) -> Result<Self, DiagramError> {
        let d = Self { skeleton, legs, trivalent, partner };
        d.check()?;
        Ok(d)
    }

    fn check(&self) -> Result<(), DiagramError> {
        let n = self.dart_count();
        let bad = |m: String| Err(DiagramError::Invalid(m));
        if self.partner.len() != n {
            return bad(format!("expected {n} darts, got {}", self.partner.len()));
        }
        if self.legs.windows(2).any(|w| w[0] > w[1]) {
            return bad("legs must be listed in skeleton order".into());
        }
        if self.legs.iter().any(|&c| c >= self.skeleton.components.len()) {
            return bad("leg on a nonexistent skeleton component".into());
        }
        for d in 0..n {
            let p = self.partner[d];
            if p >= n || p == d || self.partner[p] != d {
                return bad(format!("dart {d} is not properly paired"));
            }
        }
        if !n.is_multiple_of(2) || !(self.legs.len() + self.trivalent).is_multiple_of(2) {
            return bad("odd vertex count".into());
        }
        // every graph component must reach a leg
        let mut seen = vec![false; self.trivalent];
        let mut stack: Vec<usize> = (0..self.legs.len()).collect();
        while let Some(d) = stack.pop() {
            if let Some((v, _)) = self.vertex_of(self.partner[d]) {
                if !seen[v] {
                    seen[v] = true;
                    stack.extend((0..3).map(|s| self.dart(v, s)));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("a component has no univalent vertex on the skeleton".into());
        }
        Ok(())
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn trivalent_count(&self) -> usize {
        self.trivalent
    }

    pub fn degree(&self) -> usize {
        (self.legs.len() + self.trivalent) / 2
    }

    pub fn is_chord_diagram(&self) -> bool {
        self.trivalent == 0
    }

    pub(crate) fn dart_count(&self) -> usize {
        self.legs.len() + 3 * self.trivalent
    }

    pub(crate) fn dart(&self, v: usize, slot: usize) -> usize {
        self.legs.len() + 3 * v + slot
    }

    pub(crate) fn vertex_of(&self, d: usize) -> Option<(usize, usize)> {
        let l = self.legs.len();
        (d >= l).then(|| ((d - l) / 3, (d - l) % 3))
    }

    pub(crate) fn partner(&self, d: usize) -> usize {
        self.partner[d]
    }

    pub(crate) fn leg_component(&self, leg: usize) -> usize {
        self.legs[leg]
    }

    /// Canonical representative: leg order fixed up to rotating circle
    /// components, trivalent vertices numbered and rotated by discovery from
    /// the legs.
    pub fn canonical(&self) -> Diagram {
        let l = self.legs.len();
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for c in 0..self.skeleton.components.len() {
            let len = self.legs[start..].iter().take_while(|&&x| x == c).count();
            blocks.push((start, len));
            start += len;
        }
        let rotatable: Vec<usize> = (0..blocks.len())
            .filter(|&c| self.skeleton.components[c] == Component::Circle && blocks[c].1 > 1)
            .collect();
        let mut rot = vec![0usize; blocks.len()];
        let mut best: Option<Vec<usize>> = None;
        loop {
            let mut order = Vec::with_capacity(l);
            for (c, &(s, len)) in blocks.iter().enumerate() {
                order.extend((0..len).map(|i| s + (i + rot[c]) % len));
            }
            let code = self.code_from(&order);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
            // odometer over circle rotations
            let mut i = 0;
            loop {
                if i == rotatable.len() {
                    let partner = best.unwrap();
                    return Diagram {
                        skeleton: self.skeleton.clone(),
                        legs: self.legs.clone(),
                        trivalent: self.trivalent,
                        partner,
                    };
                }
                let c = rotatable[i];
                rot[c] += 1;
                if rot[c] < blocks[c].1 {
                    break;
                }
                rot[c] = 0;
                i += 1;
            }
        }
    }

    /// Partner array after relabelling with legs in the given order.
    fn code_from(&self, leg_order: &[usize]) -> Vec<usize> {
        let l = self.legs.len();
        let n = self.dart_count();
        let mut new_of = vec![usize::MAX; n];
        let mut queue: Vec<usize> = Vec::with_capacity(n);
        for (i, &old) in leg_order.iter().enumerate() {
            new_of[old] = i;
            queue.push(old);
        }
        let mut next_vertex = 0;
        let mut head = 0;
        while head < queue.len() {
            let d = queue[head];
            head += 1;
            let p = self.partner[d];
            if new_of[p] == usize::MAX {
                let (v, s) = self.vertex_of(p).expect("unlabelled darts are trivalent");
                for r in 0..3 {
                    let old = self.dart(v, (s + r) % 3);
                    new_of[old] = l + 3 * next_vertex + r;
                    queue.push(old);
                }
                next_vertex += 1;
            }
        }
        let mut code = vec![0; n];
        for d in 0..n {
            code[new_of[d]] = new_of[self.partner[d]];
        }
        code
    }

    /// Stable text label; equal for isomorphic diagrams once canonicalized.
    pub fn label(&self) -> String {
        let c = self.canonical();
        let legs: Vec<String> = c.legs.iter().map(|x| x.to_string()).collect();
        let p: Vec<String> = c.partner.iter().map(|x| x.to_string()).collect();
        format!("{}|{}|{}", legs.join("."), c.trivalent, p.join("."))
    }

    /// Copy with the cyclic order at `v` reversed.
    pub(crate) fn reversed_at(&self, v: usize) -> Diagram {
        let mut perm: Vec<usize> = (0..self.dart_count()).collect();
        perm.swap(self.dart(v, 1), self.dart(v, 2));
        self.permuted(&perm)
    }

    /// Moves dart `d` to position `perm[d]`.
    pub(crate) fn permuted(&self, perm: &[usize]) -> Diagram {
        let mut partner = vec![0; self.partner.len()];
        for d in 0..self.partner.len() {
            partner[perm[d]] = perm[self.partner[d]];
        }
        Diagram { partner, ..self.clone() }
    }

    pub fn to_utd(&self) -> Utd {
        let mut pos = vec![0; self.legs.len()];
        for i in 1..self.legs.len() {
            if self.legs[i] == self.legs[i - 1] {
                pos[i] = pos[i - 1] + 1;
            }
        }
        let mut edges = Vec::new();
        for d in 0..self.partner.len() {
            if d < self.partner[d] {
                edges.push([d, self.partner[d]]);
            }
        }
        Utd {
            schema: "utd.v1".into(),
            skeleton: self.skeleton.components.clone(),
            legs: self.legs.iter().zip(pos).map(|(&component, position)| UtdLeg { component, position }).collect(),
            vertices: (0..self.trivalent).map(|v| [0, 1, 2].map(|s| self.dart(v, s))).collect(),
            edges,
            label: self.label(),
        }
    }

    pub fn from_utd(u: &Utd) -> Result<Diagram, DiagramError> {
        let l = u.legs.len();
        let mut order: Vec<usize> = (0..l).collect();
        order.sort_by_key(|&i| (u.legs[i].component, u.legs[i].position));
        let mut perm = vec![usize::MAX; l + 3 * u.vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        for (v, darts) in u.vertices.iter().enumerate() {
            for (s, &d) in darts.iter().enumerate() {
                if d >= perm.len() || d < l || perm[d] != usize::MAX {
                    return Err(DiagramError::Invalid(format!("vertex {v} lists bad dart {d}")));
                }
                perm[d] = l + 3 * v + s;
            }
        }
        if perm.contains(&usize::MAX) {
            return Err(DiagramError::Invalid("some dart belongs to no vertex".into()));
        }
        let mut partner = vec![usize::MAX; perm.len()];
        for &[a, b] in &u.edges {
            if a >= perm.len() || b >= perm.len() || partner[perm[a]] != usize::MAX || partner[perm[b]] != usize::MAX {
                return Err(DiagramError::Invalid(format!("edge [{a},{b}] reuses or misses a dart")));
            }
            partner[perm[a]] = perm[b];
            partner[perm[b]] = perm[a];
        }
        if partner.contains(&usize::MAX) {
            return Err(DiagramError::Invalid("unpaired dart".into()));
        }
        let legs = order.iter().map(|&i| u.legs[i].component).collect();
        Diagram::new(Skeleton { components: u.skeleton.clone() }, legs, u.vertices.len(), partner)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// JSON form "utd.v1". Darts `0..legs` are the legs in listed order;
/// `vertices[v]` lists the darts of trivalent vertex `v` in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utd {
    #[serde(default)]
    pub schema: String,
    pub skeleton: Vec<Component>,
    pub legs: Vec<UtdLeg>,
    pub vertices: Vec<[usize; 3]>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtdLeg {
    pub component: usize,
    pub position: usize,
}
