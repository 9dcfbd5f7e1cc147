//! Claspers as decorated graphs.
//!
//! A clasper is a graph whose vertices are constituents (leaves, disk-leaves,
//! trivalent nodes and boxes) and whose edges carry a half-twist count. Each
//! constituent exposes numbered slots: one for leaves and disk-leaves, three
//! for nodes and boxes. A box marks exactly one of its slots as its output.

mod classify;
pub mod random;
mod subtree;
mod zip;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{Certificate, ColoredGraph};

pub use classify::{classify_forest, classify_tree, components, graph_degrees, GraphDegrees, HalfInt, TreeClass};
pub use subtree::{e_degree, find_subtrees, output_subtree, GoodInputSubtree, SubtreeRef, Subtrees};
pub use zip::{smooth_complement, validate_marking, zip, zip_with, Selection, ZipOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Leaf,
    #[serde(rename = "diskleaf")]
    DiskLeaf,
    Node,
    Box,
}

impl Kind {
    pub fn slot_count(self) -> usize {
        match self {
            Kind::Leaf | Kind::DiskLeaf => 1,
            Kind::Node | Kind::Box => 3,
        }
    }

    fn code(self) -> i64 {
        match self {
            Kind::Leaf => 0,
            Kind::DiskLeaf => 1,
            Kind::Node => 2,
            Kind::Box => 3,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Leaf => "leaf",
            Kind::DiskLeaf => "diskleaf",
            Kind::Node => "node",
            Kind::Box => "box",
        })
    }
}

/// Accepts `"output_end": 2` as well as `"output_end": [0, 2]` so that
/// malformed boxes can still be loaded and reported on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum OutputEnds {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub id: usize,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strands: Vec<i64>,
    #[serde(
        default,
        rename = "output_end",
        skip_serializing_if = "Vec::is_empty",
        serialize_with = "ser_outputs",
        deserialize_with = "de_outputs"
    )]
    pub outputs: Vec<usize>,
}

fn ser_outputs<S: serde::Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    if v.len() == 1 {
        OutputEnds::One(v[0]).serialize(s)
    } else {
        OutputEnds::Many(v.to_vec()).serialize(s)
    }
}

fn de_outputs<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
    Ok(match Option::<OutputEnds>::deserialize(d)? {
        None => vec![],
        Some(OutputEnds::One(x)) => vec![x],
        Some(OutputEnds::Many(v)) => v,
    })
}

impl Constituent {
    pub fn leaf(id: usize) -> Self {
        Self { id, kind: Kind::Leaf, strands: vec![], outputs: vec![] }
    }

    pub fn disk_leaf(id: usize, strands: Vec<i64>) -> Self {
        Self { id, kind: Kind::DiskLeaf, strands, outputs: vec![] }
    }

    pub fn node(id: usize) -> Self {
        Self { id, kind: Kind::Node, strands: vec![], outputs: vec![] }
    }

    pub fn boxed(id: usize, output: usize) -> Self {
        Self { id, kind: Kind::Box, strands: vec![], outputs: vec![output] }
    }

    /// Output slot of a well-formed box.
    pub fn output_slot(&self) -> Option<usize> {
        (self.kind == Kind::Box && self.outputs.len() == 1).then(|| self.outputs[0])
    }
}

/// `(constituent id, slot)`.
pub type Port = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClasperEdge {
    pub a: Port,
    pub b: Port,
    #[serde(default)]
    pub half_twists: i64,
}

impl ClasperEdge {
    pub fn new(a: Port, b: Port, half_twists: i64) -> Self {
        Self { a, b, half_twists }
    }

    pub fn other(&self, side: usize) -> Port {
        if side == 0 {
            self.b
        } else {
            self.a
        }
    }

    pub fn end(&self, side: usize) -> Port {
        if side == 0 {
            self.a
        } else {
            self.b
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClasperGraph {
    pub constituents: Vec<Constituent>,
    pub edges: Vec<ClasperEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.code, self.subject, self.detail)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClasperError {
    #[error("invalid clasper: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown component {0}")]
    UnknownComponent(usize),
    #[error("component {0} contains a box")]
    ContainsBox(usize),
    #[error("subtree is not a good input subtree")]
    NotGood,
    #[error("not smoothable: {0}")]
    NotSmoothable(String),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("forest degree undefined: component {0} is not strict")]
    DegreeUndefined(usize),
}

/// Marked box input ends.
pub type Marking = Vec<Port>;

impl ClasperGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a constituent, assigning the next dense id.
    pub fn add(&mut self, mut c: Constituent) -> usize {
        c.id = self.constituents.len();
        self.constituents.push(c);
        self.constituents.len() - 1
    }

    pub fn connect(&mut self, a: Port, b: Port, half_twists: i64) -> usize {
        self.edges.push(ClasperEdge::new(a, b, half_twists));
        self.edges.len() - 1
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("clasper serializes")
    }

    /// Edge and side attached at every slot; `None` for empty slots.
    /// Only meaningful on graphs that pass validation.
    pub(crate) fn incidence(&self) -> Vec<[Option<(usize, usize)>; 3]> {
        let mut inc = vec![[None; 3]; self.constituents.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            for side in 0..2 {
                let (c, s) = edge.end(side);
                inc[c][s] = Some((e, side));
            }
        }
        inc
    }

    pub fn ensure_valid(&self) -> Result<(), ClasperError> {
        let v = validate_clasper(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(ClasperError::Invalid(v))
        }
    }

    /// Isomorphism certificate. Constituents are coloured by kind and
    /// strand multiset, edges by half-twists, and box output slots are
    /// distinguished from all other slots.
    pub fn certificate(&self) -> Certificate {
        let mut g = ColoredGraph::new();
        for c in &self.constituents {
            let mut color = vec![0, c.kind.code()];
            let mut strands = c.strands.clone();
            strands.sort_unstable();
            color.extend(strands);
            g.add_vertex(color);
        }
        for e in &self.edges {
            let v = g.add_vertex(vec![1, e.half_twists]);
            for side in 0..2 {
                let (c, s) = e.end(side);
                let out = self.constituents[c].output_slot() == Some(s);
                g.add_edge(c, v, i64::from(out));
            }
        }
        g.certificate()
    }

    pub fn isomorphic(&self, other: &ClasperGraph) -> bool {
        self.constituents.len() == other.constituents.len()
            && self.edges.len() == other.edges.len()
            && self.certificate() == other.certificate()
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.constituents.iter().filter(|c| c.kind == kind).count()
    }
}

/// Checks structural validity; an empty list means the graph is valid.
pub fn validate_clasper(g: &ClasperGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = g.constituents.len();
    let mut push = |code, subject: String, detail: String| out.push(Violation { code, subject, detail });
    for (i, c) in g.constituents.iter().enumerate() {
        if c.id != i {
            push("non-dense ids", format!("constituent {}", c.id), format!("expected id {i} at position {i}"));
        }
    }
    let mut attached = vec![[0usize; 3]; n];
    for (e, edge) in g.edges.iter().enumerate() {
        for side in 0..2 {
            let (c, s) = edge.end(side);
            if c >= n {
                push("dangling edge", format!("edge {e}"), format!("no constituent {c}"));
            } else if s >= g.constituents[c].kind.slot_count() {
                push(
                    "slot out of range",
                    format!("edge {e}"),
                    format!("{} {c} has no slot {s}", g.constituents[c].kind),
                );
            } else {
                attached[c][s] += 1;
            }
        }
    }
    for (i, c) in g.constituents.iter().enumerate() {
        let slots = c.kind.slot_count();
        let filled = attached[i][..slots].iter().filter(|&&k| k > 0).count();
        for s in 0..slots {
            if attached[i][s] > 1 {
                push("slot conflict", format!("constituent {i}"), format!("slot {s} hosts {} edge ends", attached[i][s]));
            }
        }
        if filled != slots {
            let code = match c.kind {
                Kind::Node => "node arity",
                Kind::Leaf => "leaf arity",
                Kind::DiskLeaf => "diskleaf arity",
                Kind::Box => "box arity",
            };
            push(code, format!("constituent {i}"), format!("{filled} of {slots} ends attached"));
        }
        match c.kind {
            Kind::Box => {
                if c.outputs.len() != 1 {
                    push("box output count", format!("constituent {i}"), format!("{} output ends", c.outputs.len()));
                } else if c.outputs[0] >= 3 {
                    push("box output count", format!("constituent {i}"), format!("output slot {} out of range", c.outputs[0]));
                }
            }
            _ => {
                if !c.outputs.is_empty() {
                    push("output on non-box", format!("constituent {i}"), "only boxes have output ends".into());
                }
            }
        }
        if c.kind != Kind::DiskLeaf && !c.strands.is_empty() {
            push("strands on non-diskleaf", format!("constituent {i}"), "only disk-leaves meet strands".into());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn basic() -> ClasperGraph {
        let mut g = ClasperGraph::new();
        let a = g.add(Constituent::leaf(0));
        let b = g.add(Constituent::leaf(0));
        g.connect((a, 0), (b, 0), 0);
        g
    }

    #[test]
    fn basic_clasper_is_valid() {
        assert!(validate_clasper(&basic()).is_empty());
    }

    #[test]
    fn node_with_two_ends() {
        let mut g = ClasperGraph::new();
        let n = g.add(Constituent::node(0));
        let a = g.add(Constituent::disk_leaf(0, vec![1]));
        let b = g.add(Constituent::disk_leaf(0, vec![2]));
        g.connect((n, 0), (a, 0), 0);
        g.connect((n, 1), (b, 0), 0);
        let v = validate_clasper(&g);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code, "node arity");
    }

    #[test]
    fn box_with_three_outputs() {
        let json = r#"{"constituents":[
            {"id":0,"kind":"box","output_end":[0,1,2]},
            {"id":1,"kind":"leaf"},{"id":2,"kind":"leaf"},{"id":3,"kind":"leaf"}],
          "edges":[{"a":[0,0],"b":[1,0],"half_twists":0},{"a":[0,1],"b":[2,0],"half_twists":0},
                   {"a":[0,2],"b":[3,0],"half_twists":1}]}"#;
        let g = ClasperGraph::from_json(json).unwrap();
        let v = validate_clasper(&g);
        assert!(v.iter().any(|x| x.code == "box output count"));
    }

    #[test]
    fn json_round_trip() {
        let mut g = basic();
        g.edges[0].half_twists = -3;
        let b = g.add(Constituent::boxed(0, 2));
        let _ = b;
        let back = ClasperGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn dangling_and_conflict() {
        let mut g = basic();
        g.connect((0, 0), (7, 0), 0);
        let codes: Vec<_> = validate_clasper(&g).into_iter().map(|v| v.code).collect();
        assert!(codes.contains(&"dangling edge"));
        assert!(codes.contains(&"slot conflict"));
    }
}
