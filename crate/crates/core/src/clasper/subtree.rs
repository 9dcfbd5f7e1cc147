use serde::{Deserialize, Serialize};

use super::classify::HalfInt;
use super::{ClasperError, ClasperGraph, Kind, Port};

/// A connected piece of non-box constituents and edges, together with the
/// box slots where it meets the rest of the clasper.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtreeRef {
    pub constituents: Vec<usize>,
    pub edges: Vec<usize>,
    pub ends: Vec<Port>,
}

impl SubtreeRef {
    /// Half the number of disk-leaves and nodes.
    pub fn degree(&self, g: &ClasperGraph) -> HalfInt {
        HalfInt(
            self.constituents
                .iter()
                .filter(|&&c| matches!(g.constituents[c].kind, Kind::DiskLeaf | Kind::Node))
                .count() as i64,
        )
    }

    fn has_leaf(&self, g: &ClasperGraph) -> bool {
        self.constituents.iter().any(|&c| g.constituents[c].kind == Kind::Leaf)
    }

    fn is_simple(&self, g: &ClasperGraph) -> bool {
        self.constituents.iter().all(|&c| {
            let k = &g.constituents[c];
            k.kind != Kind::DiskLeaf || k.strands.len() == 1
        })
    }

    fn acyclic(&self) -> bool {
        self.edges.len() + 1 == self.constituents.len() + self.ends.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodInputSubtree {
    #[serde(flatten)]
    pub tree: SubtreeRef,
    pub e_simple: bool,
    pub e_degree: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Subtrees {
    pub output: Vec<SubtreeRef>,
    pub good_input: Vec<GoodInputSubtree>,
}

/// Pieces of the clasper obtained by cutting at every box.
pub(crate) fn regions(g: &ClasperGraph) -> Vec<SubtreeRef> {
    let m = g.edges.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let inc = g.incidence();
    for (c, slots) in inc.iter().enumerate() {
        if g.constituents[c].kind == Kind::Box {
            continue;
        }
        let mut first: Option<usize> = None;
        for &(e, _) in slots.iter().flatten() {
            match first {
                None => first = Some(e),
                Some(f) => {
                    let (ra, rb) = (find(&mut parent, f), find(&mut parent, e));
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, SubtreeRef> = Default::default();
    for e in 0..m {
        let r = find(&mut parent, e);
        let reg = by_root
            .entry(r)
            .or_insert_with(|| SubtreeRef { constituents: vec![], edges: vec![], ends: vec![] });
        reg.edges.push(e);
        for side in 0..2 {
            let p = g.edges[e].end(side);
            if g.constituents[p.0].kind == Kind::Box {
                reg.ends.push(p);
            } else {
                reg.constituents.push(p.0);
            }
        }
    }
    let mut out: Vec<SubtreeRef> = by_root
        .into_values()
        .map(|mut r| {
            r.constituents.sort_unstable();
            r.constituents.dedup();
            r.ends.sort_unstable();
            r
        })
        .collect();
    out.sort_by_key(|r| r.edges[0]);
    out
}

fn output_subtree_in(g: &ClasperGraph, regions: &[SubtreeRef], bx: usize) -> Option<usize> {
    let out = g.constituents[bx].output_slot()?;
    let port = (bx, out);
    let i = regions.iter().position(|r| r.ends.contains(&port))?;
    let r = &regions[i];
    (r.ends == [port] && r.acyclic()).then_some(i)
}

/// The output subtree of a box, if there is one.
pub fn output_subtree(g: &ClasperGraph, bx: usize) -> Option<SubtreeRef> {
    let regs = regions(g);
    output_subtree_in(g, &regs, bx).map(|i| regs[i].clone())
}

pub fn find_subtrees(g: &ClasperGraph) -> Result<Subtrees, ClasperError> {
    g.ensure_valid()?;
    let regs = regions(g);
    let mut res = Subtrees::default();
    for bx in 0..g.constituents.len() {
        if g.constituents[bx].kind == Kind::Box {
            if let Some(i) = output_subtree_in(g, &regs, bx) {
                res.output.push(regs[i].clone());
            }
        }
    }
    'regions: for r in &regs {
        if r.ends.is_empty() || !r.acyclic() || r.has_leaf(g) {
            continue;
        }
        let mut adjacent = Vec::new();
        for (k, &(bx, slot)) in r.ends.iter().enumerate() {
            if g.constituents[bx].output_slot() == Some(slot) {
                continue 'regions;
            }
            if k > 0 && r.ends[k - 1].0 == bx {
                continue 'regions;
            }
            match output_subtree_in(g, &regs, bx) {
                Some(i) if !regs[i].has_leaf(g) => adjacent.push(&regs[i]),
                _ => continue 'regions,
            }
        }
        let e_simple = r.is_simple(g) && adjacent.iter().all(|t| t.is_simple(g));
        let total: HalfInt = r.degree(g) + adjacent.iter().map(|t| t.degree(g)).sum::<HalfInt>();
        res.good_input.push(GoodInputSubtree {
            tree: r.clone(),
            e_simple,
            e_degree: total.to_int().expect("e-degree of a good input subtree is integral"),
        });
    }
    Ok(res)
}

/// `deg T + Σ deg T_i` over the output subtrees adjacent to `t`.
pub fn e_degree(g: &ClasperGraph, t: &SubtreeRef) -> Result<i64, ClasperError> {
    let mut edges = t.edges.clone();
    edges.sort_unstable();
    find_subtrees(g)?
        .good_input
        .into_iter()
        .find(|s| s.tree.edges == edges)
        .map(|s| s.e_degree)
        .ok_or(ClasperError::NotGood)
}

#[cfg(test)]
mod tests {
    use super::super::{ClasperGraph, Constituent};
    use super::*;

    /// Box with output slot 0 feeding a tree with `nodes` nodes (caterpillar)
    /// ending in disk-leaves. Returns the box id.
    pub(crate) fn box_with_tree(g: &mut ClasperGraph, nodes: usize, leaf: bool) -> usize {
        let b = g.add(Constituent::boxed(0, 0));
        let mut at = (b, 0);
        for _ in 0..nodes {
            let n = g.add(Constituent::node(0));
            g.connect(at, (n, 0), 0);
            let d = g.add(Constituent::disk_leaf(0, vec![1]));
            g.connect((n, 1), (d, 0), 0);
            at = (n, 2);
        }
        let end = if leaf { Constituent::leaf(0) } else { Constituent::disk_leaf(0, vec![2]) };
        let e = g.add(end);
        g.connect(at, (e, 0), 0);
        b
    }

    fn cap_inputs(g: &mut ClasperGraph, b: usize, slot: usize) {
        let d = g.add(Constituent::disk_leaf(0, vec![3]));
        g.connect((b, slot), (d, 0), 0);
    }

    #[test]
    fn bare_edge_between_boxes() {
        let mut g = ClasperGraph::new();
        let b1 = box_with_tree(&mut g, 1, false);
        let b2 = box_with_tree(&mut g, 2, false);
        g.connect((b1, 1), (b2, 1), 0);
        cap_inputs(&mut g, b1, 2);
        cap_inputs(&mut g, b2, 2);
        let s = find_subtrees(&g).unwrap();
        assert_eq!(s.output.len(), 2);
        let bare = s
            .good_input
            .iter()
            .find(|t| t.tree.constituents.is_empty())
            .expect("bare edge is good");
        // deg 0 + 3/2 + 5/2
        assert_eq!(bare.e_degree, 4);
        assert!(bare.e_simple);
        assert_eq!(e_degree(&g, &bare.tree).unwrap(), 4);
        // the two single disk-leaf caps are good too: 1/2 + 3/2, 1/2 + 5/2
        let mut degs: Vec<i64> = s.good_input.iter().map(|t| t.e_degree).collect();
        degs.sort();
        assert_eq!(degs, vec![2, 3, 4]);
    }

    #[test]
    fn no_boxes_no_subtrees() {
        let mut g = ClasperGraph::new();
        let a = g.add(Constituent::leaf(0));
        let b = g.add(Constituent::leaf(0));
        g.connect((a, 0), (b, 0), 0);
        assert_eq!(find_subtrees(&g).unwrap(), Subtrees::default());
    }

    #[test]
    fn leaf_output_blocks_goodness() {
        let mut g = ClasperGraph::new();
        let b1 = box_with_tree(&mut g, 0, true);
        let b2 = box_with_tree(&mut g, 0, false);
        g.connect((b1, 1), (b2, 1), 0);
        cap_inputs(&mut g, b1, 2);
        cap_inputs(&mut g, b2, 2);
        let s = find_subtrees(&g).unwrap();
        assert_eq!(s.output.len(), 2);
        // only the cap on b2 qualifies
        assert_eq!(s.good_input.len(), 1);
        assert_eq!(s.good_input[0].tree.ends, vec![(b2, 2)]);
        let bare = SubtreeRef { constituents: vec![], edges: vec![g.edges.len() - 3], ends: vec![] };
        assert_eq!(e_degree(&g, &bare), Err(ClasperError::NotGood));
    }

    #[test]
    fn input_tree_with_node() {
        // node + disk-leaf joining inputs of two boxes: deg 1
        let mut g = ClasperGraph::new();
        let b1 = box_with_tree(&mut g, 0, false);
        let b2 = box_with_tree(&mut g, 0, false);
        let n = g.add(Constituent::node(0));
        let d = g.add(Constituent::disk_leaf(0, vec![]));
        g.connect((n, 0), (b1, 1), 0);
        g.connect((n, 1), (b2, 2), 0);
        g.connect((n, 2), (d, 0), 0);
        cap_inputs(&mut g, b1, 2);
        cap_inputs(&mut g, b2, 1);
        let s = find_subtrees(&g).unwrap();
        let t = s.good_input.iter().find(|t| t.tree.constituents.contains(&n)).unwrap();
        assert_eq!(t.e_degree, 2);
        assert!(!t.e_simple);
    }
}
