//! Seeded generators of valid claspers, markings and tree claspers.

use rand::seq::SliceRandom;
use rand::Rng;

use super::subtree::output_subtree;
use super::{ClasperGraph, Constituent, Kind, Marking, Port};

fn random_end<R: Rng>(rng: &mut R, strict: bool) -> Constituent {
    if !strict && rng.gen_bool(0.35) {
        Constituent::leaf(0)
    } else {
        let k = if rng.gen_bool(0.7) { 1 } else { rng.gen_range(0..3) };
        Constituent::disk_leaf(0, (0..k).map(|_| rng.gen_range(1..4)).collect())
    }
}

/// Grows a binary tree with `nodes` nodes hanging off `at`.
fn grow<R: Rng>(g: &mut ClasperGraph, rng: &mut R, at: Port, nodes: usize, strict: bool) {
    let h = rng.gen_range(-1..=1);
    if nodes == 0 {
        let l = g.add(random_end(rng, strict));
        g.connect(at, (l, 0), h);
        return;
    }
    let n = g.add(Constituent::node(0));
    g.connect(at, (n, 0), h);
    let left = rng.gen_range(0..nodes);
    grow(g, rng, (n, 1), left, strict);
    grow(g, rng, (n, 2), nodes - 1 - left, strict);
}

/// A tree clasper (no boxes) with the given node count.
pub fn random_tree<R: Rng>(rng: &mut R, nodes: usize, strict: bool) -> ClasperGraph {
    let mut g = ClasperGraph::new();
    let first = g.add(random_end(rng, strict));
    grow(&mut g, rng, (first, 0), nodes, strict);
    g
}

fn attempt<R: Rng>(rng: &mut R) -> ClasperGraph {
    let mut g = ClasperGraph::new();
    let boxes = rng.gen_range(1..=3);
    let mut free: Vec<Port> = Vec::new();
    for _ in 0..boxes {
        let out = rng.gen_range(0..3);
        let b = g.add(Constituent::boxed(0, out));
        for s in (0..3).filter(|&s| s != out) {
            free.push((b, s));
        }
        if rng.gen_bool(0.8) {
            let nodes = rng.gen_range(0..=2);
            let strict = rng.gen_bool(0.7);
            grow(&mut g, rng, (b, out), nodes, strict);
        } else {
            free.push((b, out));
        }
    }
    free.shuffle(rng);
    while let Some(p) = free.pop() {
        match rng.gen_range(0..4) {
            0 if !free.is_empty() => {
                let q = free.pop().unwrap();
                g.connect(p, q, rng.gen_range(-1..=1));
            }
            1 if !free.is_empty() => {
                let n = g.add(Constituent::node(0));
                g.connect(p, (n, 0), 0);
                let q = free.pop().unwrap();
                g.connect(q, (n, 1), 0);
                if let (Some(r), true) = (free.last().copied(), rng.gen_bool(0.3)) {
                    free.pop();
                    g.connect(r, (n, 2), 0);
                } else {
                    let strict = rng.gen_bool(0.8);
                    let l = g.add(random_end(rng, strict));
                    g.connect((n, 2), (l, 0), 0);
                }
            }
            _ => {
                let strict = rng.gen_bool(0.8);
                let l = g.add(random_end(rng, strict));
                let h = rng.gen_range(-1..=1);
                g.connect(p, (l, 0), h);
            }
        }
    }
    if rng.gen_bool(0.3) {
        let nodes = rng.gen_range(0..=1);
        let extra = random_tree(rng, nodes, false);
        let off = g.constituents.len();
        for c in extra.constituents {
            g.add(c);
        }
        for e in extra.edges {
            g.connect((e.a.0 + off, e.a.1), (e.b.0 + off, e.b.1), e.half_twists);
        }
    }
    g
}

/// A valid clasper with boxes and at most `max_constituents` constituents.
pub fn random_clasper<R: Rng>(rng: &mut R, max_constituents: usize) -> ClasperGraph {
    loop {
        let g = attempt(rng);
        if g.constituents.len() <= max_constituents {
            debug_assert!(super::validate_clasper(&g).is_empty());
            return g;
        }
    }
}

/// Marks a random input end on a random subset of boxes that have output
/// subtrees.
pub fn random_marking<R: Rng>(rng: &mut R, g: &ClasperGraph) -> Marking {
    let mut m = Vec::new();
    for (b, c) in g.constituents.iter().enumerate() {
        if c.kind != Kind::Box || output_subtree(g, b).is_none() || rng.gen_bool(0.25) {
            continue;
        }
        let out = c.output_slot().unwrap();
        let inputs: Vec<usize> = (0..3).filter(|&s| s != out).collect();
        m.push((b, *inputs.choose(rng).unwrap()));
    }
    m
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::super::{classify_tree, validate_clasper};
    use super::*;

    #[test]
    fn generated_claspers_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = random_clasper(&mut rng, 12);
            assert!(validate_clasper(&g).is_empty(), "{}", g.to_json());
            let m = random_marking(&mut rng, &g);
            super::super::validate_marking(&g, &m).unwrap();
        }
    }

    #[test]
    fn strict_trees_have_expected_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for nodes in 0..6 {
            let g = random_tree(&mut rng, nodes, true);
            let c = classify_tree(&g, 0).unwrap();
            assert!(c.is_strict);
            assert_eq!(c.degree, Some(nodes + 1));
        }
    }
}
