use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Diagram, Skeleton};

const UNSET: usize = usize::MAX;

/// Every strict diagram of degree `k` on `skeleton`, one per isomorphism
/// class, in label order. Loops and multiple edges are included.
pub fn enumerate_diagrams(skeleton: &Skeleton, k: usize) -> Vec<Diagram> {
    if k == 0 {
        return vec![Diagram::empty(skeleton.clone())];
    }
    let mut jobs = Vec::new();
    for t in 0..=2 * k {
        let l = 2 * k - t;
        if l == 0 || !(l + 3 * t).is_multiple_of(2) {
            continue;
        }
        for counts in compositions(l, skeleton.components.len()) {
            let legs: Vec<usize> = counts.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
            jobs.push((legs, t));
        }
    }
    let found: Vec<BTreeMap<Vec<usize>, Diagram>> = jobs
        .into_par_iter()
        .map(|(legs, t)| {
            let mut out = BTreeMap::new();
            let mut g = Gen {
                skeleton: skeleton.clone(),
                partner: vec![UNSET; legs.len() + 3 * t],
                legs,
                t,
                created: 0,
                out: &mut out,
            };
            g.run();
            out
        })
        .collect();
    let mut all = BTreeMap::new();
    for m in found {
        for (_, d) in m {
            all.insert(d.label(), d);
        }
    }
    all.into_values().collect()
}

/// Ordered ways to write `n` as a sum of `parts` non-negative integers.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Matches darts in discovery order, the same order the canonical
/// labelling walks them, so each class is produced once per leg rotation.
struct Gen<'a> {
    skeleton: Skeleton,
    legs: Vec<usize>,
    t: usize,
    partner: Vec<usize>,
    created: usize,
    out: &'a mut BTreeMap<Vec<usize>, Diagram>,
}

impl Gen<'_> {
    fn live(&self) -> usize {
        self.legs.len() + 3 * self.created
    }

    fn run(&mut self) {
        let live = self.live();
        let Some(d) = (0..live).find(|&d| self.partner[d] == UNSET) else {
            if self.created == self.t {
                let d = Diagram {
                    skeleton: self.skeleton.clone(),
                    legs: self.legs.clone(),
                    trivalent: self.t,
                    partner: self.partner.clone(),
                }
                .canonical();
                self.out.insert(d.partner.clone(), d);
            }
            return;
        };
        for e in d + 1..live {
            if self.partner[e] != UNSET {
                continue;
            }
            self.partner[d] = e;
            self.partner[e] = d;
            self.run();
            self.partner[d] = UNSET;
            self.partner[e] = UNSET;
        }
        if self.created < self.t {
            let v0 = live;
            self.created += 1;
            self.partner[d] = v0;
            self.partner[v0] = d;
            self.run();
            self.partner[d] = UNSET;
            self.partner[v0] = UNSET;
            self.created -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_counts_on_circle() {
        let c = Skeleton::circle();
        assert_eq!(enumerate_diagrams(&c, 0).len(), 1);
        let d1 = enumerate_diagrams(&c, 1);
        assert_eq!(d1.len(), 2);
        assert_eq!(d1.iter().filter(|d| d.is_chord_diagram()).count(), 1);
        let d2 = enumerate_diagrams(&c, 2);
        assert_eq!(d2.iter().filter(|d| d.is_chord_diagram()).count(), 2);
    }

    #[test]
    fn chord_diagram_counts() {
        // chord diagrams on a circle up to rotation: 1, 1, 2, 5, 18
        let c = Skeleton::circle();
        let counts: Vec<usize> = (0..5)
            .map(|k| enumerate_diagrams(&c, k).iter().filter(|d| d.is_chord_diagram()).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 18]);
        // on an interval: (2k-1)!!
        let i = Skeleton::intervals(1);
        let counts: Vec<usize> = (1..5)
            .map(|k| enumerate_diagrams(&i, k).iter().filter(|d| d.is_chord_diagram()).count())
            .collect();
        assert_eq!(counts, vec![1, 3, 15, 105]);
    }

    #[test]
    fn all_results_canonical_and_distinct() {
        let ds = enumerate_diagrams(&Skeleton::circle(), 3);
        let mut labels: Vec<String> = ds.iter().map(|d| d.label()).collect();
        let n = labels.len();
        labels.dedup();
        assert_eq!(labels.len(), n);
        for d in &ds {
            assert_eq!(d.degree(), 3);
            assert!(d.check().is_ok());
        }
    }
}
