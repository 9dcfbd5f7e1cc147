use std::fmt;

use serde::Serialize;

use super::{ClasperError, ClasperGraph, Kind};

/// Connected components as sorted constituent-id lists, ordered by their
/// smallest id.
pub fn components(g: &ClasperGraph) -> Vec<Vec<usize>> {
    let n = g.constituents.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &g.edges {
        let (ra, rb) = (find(&mut parent, e.a.0), find(&mut parent, e.b.0));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[index[r]].push(v);
    }
    comps
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeClass {
    pub is_tree: bool,
    pub is_strict: bool,
    pub is_admissible: bool,
    pub is_simple: bool,
    pub degree: Option<usize>,
}

struct Census {
    leaves: usize,
    disk_leaves: usize,
    nodes: usize,
    boxes: usize,
    vertices: usize,
    edges: usize,
    simple_disks: bool,
}

fn census(g: &ClasperGraph, comp: &[usize]) -> Census {
    let mut c = Census {
        leaves: 0,
        disk_leaves: 0,
        nodes: 0,
        boxes: 0,
        vertices: comp.len(),
        edges: 0,
        simple_disks: true,
    };
    for &v in comp {
        let k = &g.constituents[v];
        match k.kind {
            Kind::Leaf => c.leaves += 1,
            Kind::DiskLeaf => {
                c.disk_leaves += 1;
                c.simple_disks &= k.strands.len() == 1;
            }
            Kind::Node => c.nodes += 1,
            Kind::Box => c.boxes += 1,
        }
    }
    c.edges = g.edges.iter().filter(|e| comp.binary_search(&e.a.0).is_ok()).count();
    c
}

fn component(g: &ClasperGraph, id: usize) -> Result<Vec<usize>, ClasperError> {
    g.ensure_valid()?;
    components(g).into_iter().nth(id).ok_or(ClasperError::UnknownComponent(id))
}

pub fn classify_tree(g: &ClasperGraph, component_id: usize) -> Result<TreeClass, ClasperError> {
    let comp = component(g, component_id)?;
    let c = census(g, &comp);
    let is_tree = c.boxes == 0 && c.edges + 1 == c.vertices;
    let is_admissible = is_tree && c.disk_leaves > 0;
    let is_strict = is_tree && c.leaves == 0;
    let is_simple = is_strict && c.simple_disks;
    Ok(TreeClass {
        is_tree,
        is_strict,
        is_admissible,
        is_simple,
        degree: is_strict.then_some(c.nodes + 1),
    })
}

/// Degree of a forest made of the given components: the minimum degree.
pub fn classify_forest(g: &ClasperGraph, component_ids: &[usize]) -> Result<usize, ClasperError> {
    let mut best: Option<usize> = None;
    for &id in component_ids {
        let d = classify_tree(g, id)?.degree.ok_or(ClasperError::DegreeUndefined(id))?;
        best = Some(best.map_or(d, |b| b.min(d)));
    }
    best.ok_or(ClasperError::UnknownComponent(0))
}

/// A number in `½ℤ`, stored as its double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn from_int(x: i64) -> Self {
        HalfInt(2 * x)
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(it: I) -> HalfInt {
        HalfInt(it.map(|h| h.0).sum())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_int() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_f64(self.0 as f64 / 2.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphDegrees {
    pub a_degree: i64,
    pub s_degree: HalfInt,
    pub strict_degree: Option<HalfInt>,
}

pub fn graph_degrees(g: &ClasperGraph, component_id: usize) -> Result<GraphDegrees, ClasperError> {
    let comp = component(g, component_id)?;
    let c = census(g, &comp);
    if c.boxes > 0 {
        return Err(ClasperError::ContainsBox(component_id));
    }
    let a = (c.disk_leaves + c.nodes) as i64;
    let s = HalfInt(a - c.leaves as i64);
    Ok(GraphDegrees {
        a_degree: a,
        s_degree: s,
        strict_degree: (c.leaves == 0).then_some(s),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{ClasperGraph, Constituent};
    use super::*;

    fn star(kinds: [Kind; 3]) -> ClasperGraph {
        let mut g = ClasperGraph::new();
        let n = g.add(Constituent::node(0));
        for (s, k) in kinds.into_iter().enumerate() {
            let c = match k {
                Kind::Leaf => Constituent::leaf(0),
                _ => Constituent::disk_leaf(0, vec![s as i64 + 1]),
            };
            let l = g.add(c);
            g.connect((n, s), (l, 0), 0);
        }
        g
    }

    #[test]
    fn y_shape() {
        let g = star([Kind::DiskLeaf; 3]);
        let c = classify_tree(&g, 0).unwrap();
        assert!(c.is_strict && c.is_simple && c.is_admissible);
        assert_eq!(c.degree, Some(2));
        let d = graph_degrees(&g, 0).unwrap();
        assert_eq!((d.a_degree, d.s_degree), (4, HalfInt::from_int(2)));
        assert_eq!(d.strict_degree, Some(HalfInt::from_int(2)));
    }

    #[test]
    fn caterpillar() {
        let mut g = ClasperGraph::new();
        let n1 = g.add(Constituent::node(0));
        let n2 = g.add(Constituent::node(0));
        g.connect((n1, 0), (n2, 0), 0);
        for (n, s) in [(n1, 1), (n1, 2), (n2, 1), (n2, 2)] {
            let l = g.add(Constituent::disk_leaf(0, vec![1]));
            g.connect((n, s), (l, 0), 0);
        }
        let c = classify_tree(&g, 0).unwrap();
        assert!(c.is_strict && c.is_simple);
        assert_eq!(c.degree, Some(3));
    }

    #[test]
    fn leaf_and_disk_leaf() {
        let mut g = ClasperGraph::new();
        let a = g.add(Constituent::leaf(0));
        let b = g.add(Constituent::disk_leaf(0, vec![]));
        g.connect((a, 0), (b, 0), 0);
        let c = classify_tree(&g, 0).unwrap();
        assert!(c.is_admissible && !c.is_strict);
        assert_eq!(c.degree, None);
    }

    #[test]
    fn three_leaves_and_theta() {
        let g = star([Kind::Leaf; 3]);
        let d = graph_degrees(&g, 0).unwrap();
        assert_eq!((d.a_degree, d.s_degree, d.strict_degree), (1, HalfInt::from_int(-1), None));

        let mut t = ClasperGraph::new();
        let a = t.add(Constituent::node(0));
        let b = t.add(Constituent::node(0));
        for s in 0..3 {
            t.connect((a, s), (b, s), 0);
        }
        let d = graph_degrees(&t, 0).unwrap();
        assert_eq!((d.a_degree, d.s_degree), (2, HalfInt::from_int(1)));
        assert!(!classify_tree(&t, 0).unwrap().is_tree);
    }

    #[test]
    fn forest_degree_is_minimum() {
        let mut g = star([Kind::DiskLeaf; 3]);
        let a = g.add(Constituent::disk_leaf(0, vec![4]));
        let b = g.add(Constituent::disk_leaf(0, vec![5]));
        g.connect((a, 0), (b, 0), 0);
        assert_eq!(classify_tree(&g, 1).unwrap().degree, Some(1));
        assert_eq!(classify_forest(&g, &[0, 1]).unwrap(), 1);
        assert_eq!(classify_tree(&g, 2), Err(ClasperError::UnknownComponent(2)));
    }
}
