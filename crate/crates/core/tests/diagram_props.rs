use std::collections::BTreeSet;

use clasper_core::diagram::{
    enumerate_diagrams, relations_at, space_dimension, Component, Diagram, Relation, Skeleton, StuSign, Utd,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Calls `f` on every perfect matching of `0..n`.
fn for_each_matching(n: usize, f: &mut impl FnMut(&[usize])) {
    fn go(p: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        let Some(a) = p.iter().position(|&x| x == usize::MAX) else {
            f(p);
            return;
        };
        for b in a + 1..p.len() {
            if p[b] == usize::MAX {
                p[a] = b;
                p[b] = a;
                go(p, f);
                p[a] = usize::MAX;
                p[b] = usize::MAX;
            }
        }
    }
    go(&mut vec![usize::MAX; n], f);
}

/// Brute force over labelled vertices and all dart matchings.
fn brute_force_labels(s: &Skeleton, k: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let c = s.components.len();
    for t in 0..=2 * k {
        let l = 2 * k - t;
        // a trivalent part needs a leg to touch the skeleton
        if !(l + 3 * t).is_multiple_of(2) || (l == 0 && t > 0) {
            continue;
        }
        let mut splits = vec![vec![]];
        for _ in 0..c {
            splits = splits
                .into_iter()
                .flat_map(|v: Vec<usize>| {
                    (0..=l).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        for counts in splits.into_iter().filter(|v| v.iter().sum::<usize>() == l) {
            let legs: Vec<usize> = counts.iter().enumerate().flat_map(|(i, &n)| vec![i; n]).collect();
            for_each_matching(l + 3 * t, &mut |m| {
                if let Ok(d) = Diagram::new(s.clone(), legs.clone(), t, m.to_vec()) {
                    out.insert(d.label());
                }
            });
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for (s, max) in [(Skeleton::circle(), 3), (Skeleton::intervals(1), 3), (Skeleton::intervals(2), 2)] {
        for k in 0..=max {
            let fast: BTreeSet<String> = enumerate_diagrams(&s, k).iter().map(|d| d.label()).collect();
            assert_eq!(fast, brute_force_labels(&s, k), "{s:?} degree {k}");
        }
    }
}

/// Same diagram with vertices shuffled, slots rotated cyclically and circle
/// legs rotated, rebuilt through the JSON form.
fn scramble(d: &Diagram, rng: &mut ChaCha8Rng) -> Diagram {
    let u = d.to_utd();
    let l = u.legs.len();
    let t = u.vertices.len();
    let mut vperm: Vec<usize> = (0..t).collect();
    vperm.shuffle(rng);
    let mut dart_map = vec![0; l + 3 * t];
    for i in 0..l {
        dart_map[i] = i;
    }
    for v in 0..t {
        let r = rng.gen_range(0..3);
        for s in 0..3 {
            dart_map[l + 3 * v + s] = l + 3 * vperm[v] + (s + r) % 3;
        }
    }
    let mut vertices = vec![[0; 3]; t];
    for v in 0..t {
        for s in 0..3 {
            let old = l + 3 * v + s;
            let new = dart_map[old];
            let nv = (new - l) / 3;
            let ns = (new - l) % 3;
            vertices[nv][ns] = new;
        }
    }
    let mut legs = u.legs.clone();
    for (c, kind) in u.skeleton.iter().enumerate() {
        let n = legs.iter().filter(|g| g.component == c).count();
        if *kind == Component::Circle && n > 0 {
            let r = rng.gen_range(0..n);
            for g in legs.iter_mut().filter(|g| g.component == c) {
                g.position = (g.position + r) % n;
            }
        }
    }
    let edges = u.edges.iter().map(|&[a, b]| [dart_map[a], dart_map[b]]).collect();
    Diagram::from_utd(&Utd { legs, vertices, edges, ..u }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn label_is_invariant_under_relabelling(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ds = enumerate_diagrams(&Skeleton::circle(), k);
        let d = ds.choose(&mut rng).unwrap();
        prop_assert_eq!(scramble(d, &mut rng).label(), d.label());
    }

    #[test]
    fn relations_are_a_congruence(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let skel = if rng.gen_bool(0.5) { Skeleton::circle() } else { Skeleton::intervals(2) };
        let ds = enumerate_diagrams(&skel, k);
        let d = ds.choose(&mut rng).unwrap();
        let e = scramble(d, &mut rng);
        for rel in Relation::ALL {
            prop_assert_eq!(relations_at(d, rel, StuSign::Standard), relations_at(&e, rel, StuSign::Standard));
        }
    }
}

#[test]
fn as_and_ihx_follow_from_stu() {
    use Relation::*;
    for (s, max) in [(Skeleton::circle(), 4), (Skeleton::intervals(1), 4), (Skeleton::intervals(2), 3)] {
        for k in 0..=max {
            let stu = space_dimension(&s, k, &[OneT, Stu], StuSign::Standard).dimension;
            let all = space_dimension(&s, k, &[OneT, As, Ihx, Stu], StuSign::Standard).dimension;
            assert_eq!(stu, all, "{s:?} degree {k}");
        }
    }
}

#[test]
fn presentations_agree_on_intervals() {
    use Relation::*;
    for (s, max) in [(Skeleton::intervals(1), 4), (Skeleton::intervals(2), 3)] {
        for k in 0..=max {
            let jac = space_dimension(&s, k, &[OneT, As, Ihx, Stu], StuSign::Standard).dimension;
            let chord = space_dimension(&s, k, &[OneT, FourT], StuSign::Standard).dimension;
            assert_eq!(jac, chord, "{s:?} degree {k}");
        }
    }
}

#[test]
fn dimension_shrinks_as_relations_grow() {
    use Relation::*;
    let s = Skeleton::circle();
    for k in 0..=3 {
        let mut prev = usize::MAX;
        for rels in [&[][..], &[As][..], &[As, Ihx][..], &[As, Ihx, Stu][..], &[OneT, As, Ihx, Stu][..]] {
            let d = space_dimension(&s, k, rels, StuSign::Standard).dimension;
            assert!(d <= prev, "degree {k}, {rels:?}");
            prev = d;
        }
    }
}

#[test]
fn basis_spans_quotient() {
    use Relation::*;
    let d = space_dimension(&Skeleton::circle(), 4, &[OneT, As, Ihx, Stu], StuSign::Standard);
    assert_eq!(d.basis.len(), d.dimension);
    assert_eq!(d.diagrams, d.rank + d.dimension);
}
