use serde::{Deserialize, Serialize};

use super::subtree::output_subtree;
use super::{ClasperEdge, ClasperError, ClasperGraph, Constituent, Kind, Marking, Port};

/// Constituents and edges picked out of a clasper.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    #[serde(default)]
    pub constituents: Vec<usize>,
    #[serde(default)]
    pub edges: Vec<usize>,
}

/// Mutable form with tombstones; `finish` renumbers densely.
struct Work {
    cons: Vec<Option<Constituent>>,
    edges: Vec<Option<ClasperEdge>>,
}

impl Work {
    fn new(g: &ClasperGraph) -> Self {
        Self {
            cons: g.constituents.iter().cloned().map(Some).collect(),
            edges: g.edges.iter().cloned().map(Some).collect(),
        }
    }

    fn kind(&self, c: usize) -> Kind {
        self.cons[c].as_ref().expect("live constituent").kind
    }

    fn add(&mut self, c: Constituent) -> usize {
        self.cons.push(Some(c));
        self.cons.len() - 1
    }

    fn connect(&mut self, a: Port, b: Port, h: i64) {
        self.edges.push(Some(ClasperEdge::new(a, b, h)));
    }

    /// `(edge, side)` attached at a port.
    fn at(&self, p: Port) -> Option<(usize, usize)> {
        self.edges.iter().enumerate().find_map(|(i, e)| {
            let e = e.as_ref()?;
            (0..2).find(|&s| e.end(s) == p).map(|s| (i, s))
        })
    }

    fn edge(&self, e: usize) -> &ClasperEdge {
        self.edges[e].as_ref().expect("live edge")
    }

    fn edge_mut(&mut self, e: usize) -> &mut ClasperEdge {
        self.edges[e].as_mut().expect("live edge")
    }

    fn set_end(&mut self, e: usize, side: usize, p: Port) {
        let edge = self.edge_mut(e);
        if side == 0 {
            edge.a = p;
        } else {
            edge.b = p;
        }
    }

    fn finish(self) -> (ClasperGraph, Vec<Option<usize>>) {
        let mut map = vec![None; self.cons.len()];
        let mut g = ClasperGraph::new();
        for (i, c) in self.cons.into_iter().enumerate() {
            if let Some(c) = c {
                map[i] = Some(g.add(c));
            }
        }
        for e in self.edges.into_iter().flatten() {
            let a = (map[e.a.0].expect("edge endpoint survives"), e.a.1);
            let b = (map[e.b.0].expect("edge endpoint survives"), e.b.1);
            g.connect(a, b, e.half_twists);
        }
        (g, map)
    }
}

/// `G ⊖ Y`: delete `y`, then smooth every box left with a single input.
pub fn smooth_complement(g: &ClasperGraph, y: &Selection) -> Result<ClasperGraph, ClasperError> {
    g.ensure_valid()?;
    let n = g.constituents.len();
    let mut gone_c = vec![false; n];
    let mut gone_e = vec![false; g.edges.len()];
    for &c in &y.constituents {
        *gone_c.get_mut(c).ok_or_else(|| ClasperError::NotSmoothable(format!("no constituent {c}")))? = true;
    }
    for &e in &y.edges {
        *gone_e.get_mut(e).ok_or_else(|| ClasperError::NotSmoothable(format!("no edge {e}")))? = true;
    }
    for (i, e) in g.edges.iter().enumerate() {
        if gone_e[i] {
            continue;
        }
        for c in [e.a.0, e.b.0] {
            if gone_c[c] {
                return Err(ClasperError::NotSmoothable(format!("edge {i} keeps removed constituent {c}")));
            }
        }
    }
    let inc = g.incidence();
    for (c, slots) in inc.iter().enumerate() {
        if gone_c[c] {
            continue;
        }
        let kept: Vec<usize> = (0..g.constituents[c].kind.slot_count())
            .filter(|&s| slots[s].is_some_and(|(e, _)| !gone_e[e]))
            .collect();
        match g.constituents[c].output_slot() {
            None => {
                if kept.len() != g.constituents[c].kind.slot_count() {
                    return Err(ClasperError::NotSmoothable(format!("{} {c} loses an edge", g.constituents[c].kind)));
                }
            }
            Some(out) => {
                if !kept.contains(&out) {
                    return Err(ClasperError::NotSmoothable(format!("box {c} loses its output edge")));
                }
                if kept.len() < 2 {
                    return Err(ClasperError::NotSmoothable(format!("box {c} keeps no input edge")));
                }
            }
        }
    }
    let mut w = Work::new(g);
    for c in 0..n {
        if gone_c[c] {
            w.cons[c] = None;
        }
    }
    for (e, gone) in gone_e.iter().enumerate() {
        if *gone {
            w.edges[e] = None;
        }
    }
    for c in 0..n {
        let Some(out) = g.constituents[c].output_slot() else { continue };
        if gone_c[c] {
            continue;
        }
        let inputs: Vec<usize> = (0..3).filter(|&s| s != out && w.at((c, s)).is_some()).collect();
        if inputs.len() != 1 {
            continue;
        }
        let (ei, si) = w.at((c, inputs[0])).unwrap();
        let (eo, so) = w.at((c, out)).unwrap();
        if ei == eo {
            return Err(ClasperError::NotSmoothable(format!("box {c} closes on itself")));
        }
        let far_in = w.edge(ei).other(si);
        let far_out = w.edge(eo).other(so);
        let h = w.edge(ei).half_twists + w.edge(eo).half_twists;
        w.edges[ei] = None;
        w.edges[eo] = None;
        w.cons[c] = None;
        w.connect(far_in, far_out, h);
    }
    Ok(w.finish().0)
}

pub fn validate_marking(g: &ClasperGraph, m: &[Port]) -> Result<(), ClasperError> {
    g.ensure_valid()?;
    let mut seen = Vec::new();
    for &(b, s) in m {
        let c = g
            .constituents
            .get(b)
            .ok_or_else(|| ClasperError::InvalidMarking(format!("no constituent {b}")))?;
        let out = c
            .output_slot()
            .ok_or_else(|| ClasperError::InvalidMarking(format!("constituent {b} is not a box")))?;
        if s >= 3 || s == out {
            return Err(ClasperError::InvalidMarking(format!("slot {s} of box {b} is not an input end")));
        }
        if seen.contains(&b) {
            return Err(ClasperError::InvalidMarking(format!("box {b} marked twice")));
        }
        seen.push(b);
        if output_subtree(g, b).is_none() {
            return Err(ClasperError::InvalidMarking(format!("box {b} has no output subtree")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZipOutcome {
    pub graph: ClasperGraph,
    pub steps: usize,
    pub step_bound: usize,
}

/// Zip with the lowest marked end chosen first.
pub fn zip(g: &ClasperGraph, m: &[Port]) -> Result<ZipOutcome, ClasperError> {
    zip_with(g, m, |_| 0)
}

/// Zip where `choose` picks, from the current marking, the end processed next.
pub fn zip_with(
    g: &ClasperGraph,
    m: &[Port],
    mut choose: impl FnMut(&[Port]) -> usize,
) -> Result<ZipOutcome, ClasperError> {
    validate_marking(g, m)?;
    // each step consumes one constituent of a marked output subtree
    let step_bound: usize = m
        .iter()
        .map(|&(b, _)| output_subtree(g, b).map_or(0, |t| t.constituents.len()))
        .sum();
    let mut marks: Marking = m.to_vec();
    marks.sort_unstable();
    let mut w = Work::new(g);
    let mut steps = 0;
    while !marks.is_empty() {
        assert!(steps < step_bound, "zip exceeded its step bound");
        let pick = choose(&marks).min(marks.len() - 1);
        let (r, marked) = marks.remove(pick);
        let new_marks = step(&mut w, r, marked);
        marks.extend(new_marks);
        marks.sort_unstable();
        steps += 1;
    }
    let (graph, _) = w.finish();
    Ok(ZipOutcome { graph, steps, step_bound })
}

/// One rewrite at box `r` with marked input slot `marked`.
fn step(w: &mut Work, r: usize, marked: usize) -> Vec<Port> {
    let out = w.cons[r].as_ref().unwrap().output_slot().unwrap();
    let inputs: Vec<usize> = (0..3).filter(|&s| s != out).collect();
    let (eo, so) = w.at((r, out)).unwrap();
    let h = w.edge(eo).half_twists;
    let (x, xs) = w.edge(eo).other(so);
    let ins: Vec<(usize, usize)> = inputs.iter().map(|&s| w.at((r, s)).unwrap()).collect();
    match w.kind(x) {
        Kind::Leaf | Kind::DiskLeaf => {
            let proto = w.cons[x].clone().unwrap();
            w.cons[x] = None;
            w.cons[r] = None;
            w.edges[eo] = None;
            for &(e, side) in &ins {
                let copy = w.add(proto.clone());
                w.set_end(e, side, (copy, 0));
                w.edge_mut(e).half_twists += h;
            }
            vec![]
        }
        Kind::Node => {
            let others: Vec<usize> = (0..3).filter(|&s| s != xs).collect();
            let branches: Vec<(usize, usize)> = others.iter().map(|&s| w.at((x, s)).unwrap()).collect();
            w.cons[x] = None;
            w.cons[r] = None;
            w.edges[eo] = None;
            let n1 = w.add(Constituent::node(0));
            let n2 = w.add(Constituent::node(0));
            for (&(e, side), n) in ins.iter().zip([n1, n2]) {
                w.set_end(e, side, (n, 0));
                w.edge_mut(e).half_twists += h;
            }
            let mut marks = Vec::new();
            for (k, &(e, side)) in branches.iter().enumerate() {
                let rb = w.add(Constituent::boxed(0, 0));
                w.set_end(e, side, (rb, 0));
                w.connect((n1, 1 + k), (rb, 1), 0);
                w.connect((n2, 1 + k), (rb, 2), 0);
                marks.push((rb, if marked == inputs[0] { 1 } else { 2 }));
            }
            marks
        }
        Kind::Box => unreachable!("output subtrees contain no boxes"),
    }
}
