//! Canonical forms of vertex- and edge-colored undirected multigraphs.
//!
//! Individualization-refinement: colour refinement to an equitable
//! partition, then branching on the first smallest non-singleton cell.
//! Automorphisms discovered at equal leaves prune sibling branches that lie
//! in the same orbit of the pointwise stabilizer of the current prefix.

use std::cmp::Ordering;

/// A complete isomorphism invariant: equal certificates iff isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate {
    colors: Vec<Vec<i64>>,
    edges: Vec<(usize, usize, i64)>,
}

#[derive(Clone, Debug, Default)]
pub struct ColoredGraph {
    colors: Vec<Vec<i64>>,
    adj: Vec<Vec<(usize, i64)>>,
    edges: Vec<(usize, usize, i64)>,
}

impl ColoredGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, color: Vec<i64>) -> usize {
        self.colors.push(color);
        self.adj.push(Vec::new());
        self.colors.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, color: i64) {
        self.adj[u].push((v, color));
        if u != v {
            self.adj[v].push((u, color));
        }
        self.edges.push((u, v, color));
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    /// Canonical certificate together with the canonical labelling
    /// (`labelling[v]` is the canonical position of vertex `v`).
    pub fn canonical_form(&self) -> (Certificate, Vec<usize>) {
        let n = self.colors.len();
        if n == 0 {
            return (Certificate { colors: vec![], edges: vec![] }, vec![]);
        }
        let mut distinct: Vec<&Vec<i64>> = self.colors.iter().collect();
        distinct.sort();
        distinct.dedup();
        let labels: Vec<usize> = self
            .colors
            .iter()
            .map(|c| distinct.binary_search(&c).unwrap())
            .collect();
        let labels = self.refine(labels);
        let mut search = Search { best: None, generators: Vec::new() };
        self.search(labels, &mut Vec::new(), &mut search);
        let (cert, perm) = search.best.expect("search reaches at least one leaf");
        (cert, perm)
    }

    pub fn certificate(&self) -> Certificate {
        self.canonical_form().0
    }

    fn refine(&self, mut labels: Vec<usize>) -> Vec<usize> {
        let n = labels.len();
        let mut cells = count_distinct(&labels);
        loop {
            let sigs: Vec<(usize, Vec<(i64, usize)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(i64, usize)> =
                        self.adj[v].iter().map(|&(w, c)| (c, labels[w])).collect();
                    nb.sort_unstable();
                    (labels[v], nb)
                })
                .collect();
            let mut order: Vec<&(usize, Vec<(i64, usize)>)> = sigs.iter().collect();
            order.sort();
            order.dedup();
            let next: Vec<usize> = sigs
                .iter()
                .map(|s| order.binary_search(&s).unwrap())
                .collect();
            let next_cells = order.len();
            labels = next;
            if next_cells == cells {
                return labels;
            }
            cells = next_cells;
        }
    }

    fn leaf(&self, labels: &[usize]) -> Certificate {
        let n = labels.len();
        let mut colors = vec![Vec::new(); n];
        for v in 0..n {
            colors[labels[v]] = self.colors[v].clone();
        }
        let mut edges: Vec<(usize, usize, i64)> = self
            .edges
            .iter()
            .map(|&(u, v, c)| {
                let (a, b) = (labels[u], labels[v]);
                (a.min(b), a.max(b), c)
            })
            .collect();
        edges.sort_unstable();
        Certificate { colors, edges }
    }

    fn search(&self, labels: Vec<usize>, prefix: &mut Vec<usize>, st: &mut Search) {
        let n = labels.len();
        let mut sizes = vec![0usize; n];
        for &l in &labels {
            sizes[l] += 1;
        }
        let target = (0..n)
            .filter(|&l| sizes[l] > 1)
            .min_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(a.cmp(&b)));
        let Some(target) = target else {
            let cert = self.leaf(&labels);
            match &st.best {
                None => st.best = Some((cert, labels)),
                Some((best, best_perm)) => match cert.cmp(best) {
                    Ordering::Less => st.best = Some((cert, labels)),
                    Ordering::Equal => {
                        // automorphism: v ↦ the vertex holding the same label in the best leaf
                        let mut inv = vec![0usize; n];
                        for (v, &l) in best_perm.iter().enumerate() {
                            inv[l] = v;
                        }
                        let gamma: Vec<usize> = labels.iter().map(|&l| inv[l]).collect();
                        if gamma.iter().enumerate().any(|(v, &w)| v != w) {
                            st.generators.push(gamma);
                        }
                    }
                    Ordering::Greater => {}
                },
            }
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| labels[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() {
                let orbit = stabilizer_orbits(n, &st.generators, prefix);
                if explored.iter().any(|&e| orbit.same(e, v)) {
                    continue;
                }
            }
            explored.push(v);
            let indiv: Vec<usize> = labels
                .iter()
                .enumerate()
                .map(|(x, &l)| 2 * l + usize::from(l == target && x != v))
                .collect();
            let refined = self.refine(indiv);
            prefix.push(v);
            self.search(refined, prefix, st);
            prefix.pop();
        }
    }
}

struct Search {
    best: Option<(Certificate, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

fn count_distinct(labels: &[usize]) -> usize {
    let mut l = labels.to_vec();
    l.sort_unstable();
    l.dedup();
    l.len()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }

    fn same(&self, a: usize, b: usize) -> bool {
        let mut uf = UnionFind(self.0.clone());
        uf.find(a) == uf.find(b)
    }
}

fn stabilizer_orbits(n: usize, generators: &[Vec<usize>], prefix: &[usize]) -> UnionFind {
    let mut uf = UnionFind((0..n).collect());
    for g in generators {
        if prefix.iter().all(|&p| g[p] == p) {
            for (v, &w) in g.iter().enumerate() {
                uf.union(v, w);
            }
        }
    }
    uf
}
