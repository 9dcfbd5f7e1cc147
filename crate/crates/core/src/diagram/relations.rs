use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{enumerate_diagrams, Diagram, Skeleton};
use crate::sparse::{int_row, Echelon, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    OneT,
    As,
    Ihx,
    Stu,
    FourT,
}

impl Relation {
    pub const ALL: [Relation; 5] = [Relation::OneT, Relation::As, Relation::Ihx, Relation::Stu, Relation::FourT];

    /// Parses a comma list such as `1t,as,ihx,stu`.
    pub fn parse_list(s: &str) -> Result<Vec<Relation>, String> {
        let mut out: Vec<Relation> = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.parse())
            .collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Relation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1t" => Ok(Relation::OneT),
            "as" => Ok(Relation::As),
            "ihx" => Ok(Relation::Ihx),
            "stu" => Ok(Relation::Stu),
            "4t" => Ok(Relation::FourT),
            other => Err(format!("unknown relation '{other}'")),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::OneT => "1t",
            Relation::As => "as",
            Relation::Ihx => "ihx",
            Relation::Stu => "stu",
            Relation::FourT => "4t",
        })
    }
}

/// Sign of the commutator term. `Standard` is S = T − U, where T carries the
/// two new legs in the cyclic order of the vertex and U the other way round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum StuSign {
    #[default]
    Standard,
    Reversed,
}

/// A rational combination of canonical diagram labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramVector {
    pub terms: Vec<(String, String)>,
}

type Terms = Vec<(Diagram, i64)>;

/// Replaces `leg` (attached to vertex `v`) by two legs joined to the far
/// ends of `first` and `second`, in that skeleton order, and deletes `v`.
fn split_leg(d: &Diagram, leg: usize, v: usize, first: usize, second: usize) -> Diagram {
    let l = d.leg_count();
    let t = d.trivalent_count();
    let nl = l + 1;
    let map = |old: usize| -> usize {
        if old == first {
            leg
        } else if old == second {
            leg + 1
        } else if old < l {
            if old < leg {
                old
            } else {
                old + 1
            }
        } else {
            let (u, s) = d.vertex_of(old).unwrap();
            let u2 = if u < v { u } else { u - 1 };
            nl + 3 * u2 + s
        }
    };
    let mut partner = vec![0; nl + 3 * (t - 1)];
    for old in 0..d.dart_count() {
        if old == leg || d.vertex_of(old).is_some_and(|(u, _)| u == v) {
            continue;
        }
        partner[map(old)] = map(d.partner(old));
    }
    partner[leg] = map(d.partner(first));
    partner[leg + 1] = map(d.partner(second));
    let mut legs = d.legs.clone();
    legs.insert(leg, d.legs[leg]);
    Diagram { skeleton: d.skeleton.clone(), legs, trivalent: t - 1, partner }
}

fn stu_terms(d: &Diagram, sign: StuSign) -> Vec<Terms> {
    let mut out = Vec::new();
    for leg in 0..d.leg_count() {
        let Some((v, s)) = d.vertex_of(d.partner(leg)) else { continue };
        let x = d.dart(v, (s + 1) % 3);
        let y = d.dart(v, (s + 2) % 3);
        let t = split_leg(d, leg, v, x, y);
        let u = split_leg(d, leg, v, y, x);
        let e = if sign == StuSign::Standard { 1 } else { -1 };
        out.push(vec![(d.clone(), 1), (t, -e), (u, e)]);
    }
    out
}

fn as_terms(d: &Diagram) -> Vec<Terms> {
    (0..d.trivalent_count())
        .map(|v| vec![(d.clone(), 1), (d.reversed_at(v), 1)])
        .collect()
}

fn ihx_terms(d: &Diagram) -> Vec<Terms> {
    let mut out = Vec::new();
    for d1 in d.leg_count()..d.dart_count() {
        let d2 = d.partner(d1);
        let (Some((v, s)), Some((w, r))) = (d.vertex_of(d1), d.vertex_of(d2)) else { continue };
        // both orientations of the edge, so the set of vectors is labelling-free
        if v == w {
            continue;
        }
        let a = d.dart(v, (s + 1) % 3);
        let b = d.dart(v, (s + 2) % 3);
        let c = d.dart(w, (r + 1) % 3);
        let e = d.dart(w, (r + 2) % 3);
        // T(p,q|x,y): v reads (edge, p, q), w reads (edge, x, y)
        let t = |p: usize, q: usize, x: usize, y: usize| {
            let mut perm: Vec<usize> = (0..d.dart_count()).collect();
            perm[p] = a;
            perm[q] = b;
            perm[x] = c;
            perm[y] = e;
            d.permuted(&perm)
        };
        out.push(vec![(t(a, b, c, e), 1), (t(a, c, e, b), 1), (t(a, e, b, c), 1)]);
    }
    out
}

/// Chord whose span is closed under graph connectivity.
fn has_isolated_chord(d: &Diagram) -> bool {
    let n = d.dart_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    };
    for x in 0..n {
        union(&mut parent, x, d.partner(x));
    }
    for v in 0..d.trivalent_count() {
        union(&mut parent, d.dart(v, 0), d.dart(v, 1));
        union(&mut parent, d.dart(v, 0), d.dart(v, 2));
    }
    let l = d.leg_count();
    let roots: Vec<usize> = (0..l).map(|x| find(&mut parent, x)).collect();
    for i in 0..l {
        let j = d.partner(i);
        if j >= l || j < i || d.leg_component(i) != d.leg_component(j) {
            continue;
        }
        let inside: Vec<usize> = (i + 1..j).map(|x| roots[x]).collect();
        let outside: Vec<usize> = (0..l).filter(|&x| x < i || x > j).map(|x| roots[x]).collect();
        if !inside.iter().any(|r| outside.contains(r)) {
            return true;
        }
    }
    false
}

/// Chord diagram with leg `x` re-inserted next to leg `c`.
fn moved(d: &Diagram, x: usize, c: usize, after: bool) -> Diagram {
    let l = d.leg_count();
    let mut order: Vec<usize> = (0..l).filter(|&y| y != x).collect();
    let at = order.iter().position(|&y| y == c).unwrap() + usize::from(after);
    order.insert(at, x);
    let mut new_of = vec![0; l];
    for (i, &old) in order.iter().enumerate() {
        new_of[old] = i;
    }
    let legs = order
        .iter()
        .map(|&old| if old == x { d.legs[c] } else { d.legs[old] })
        .collect();
    let mut partner = vec![0; l];
    for old in 0..l {
        partner[new_of[old]] = new_of[d.partner(old)];
    }
    Diagram { skeleton: d.skeleton.clone(), legs, trivalent: 0, partner }
}

fn four_t_terms(d: &Diagram) -> Vec<Terms> {
    let mut out = Vec::new();
    if !d.is_chord_diagram() {
        return out;
    }
    let l = d.leg_count();
    for c1 in 0..l {
        let c2 = d.partner(c1);
        if c2 < c1 {
            continue;
        }
        for x in 0..l {
            if x == c1 || x == c2 {
                continue;
            }
            out.push(vec![
                (moved(d, x, c1, false), 1),
                (moved(d, x, c1, true), -1),
                (moved(d, x, c2, false), 1),
                (moved(d, x, c2, true), -1),
            ]);
        }
    }
    out
}

fn terms_for(d: &Diagram, rel: Relation, sign: StuSign) -> Vec<Terms> {
    match rel {
        Relation::OneT => {
            if has_isolated_chord(d) {
                vec![vec![(d.clone(), 1)]]
            } else {
                vec![]
            }
        }
        Relation::As => as_terms(d),
        Relation::Ihx => ihx_terms(d),
        Relation::Stu => stu_terms(d, sign),
        Relation::FourT => four_t_terms(d),
    }
}

/// Relation vectors generated at every site of one diagram, with terms
/// canonicalized, merged and sorted.
pub fn relations_at(d: &Diagram, rel: Relation, sign: StuSign) -> Vec<Vec<(String, i64)>> {
    let mut out: Vec<Vec<(String, i64)>> = terms_for(d, rel, sign)
        .into_iter()
        .map(|terms| {
            let mut merged: Vec<(String, i64)> = Vec::new();
            let mut labelled: Vec<(String, i64)> = terms.into_iter().map(|(t, c)| (t.label(), c)).collect();
            labelled.sort();
            for (l, c) in labelled {
                match merged.last_mut() {
                    Some((ml, mc)) if *ml == l => *mc += c,
                    _ => merged.push((l, c)),
                }
            }
            merged.retain(|e| e.1 != 0);
            merged
        })
        .collect();
    out.sort();
    out
}

type Key = (Vec<usize>, Vec<usize>);

fn key(d: &Diagram) -> Key {
    let c = d.canonical();
    (c.legs, c.partner)
}

struct Space {
    diagrams: Vec<Diagram>,
    rows: Vec<Row>,
}

/// Diagram basis and relation rows. With 4T the basis is the chord
/// diagrams and relations reaching outside it are discarded.
fn build(skeleton: &Skeleton, k: usize, relations: &[Relation], sign: StuSign) -> Space {
    let chord_only = relations.contains(&Relation::FourT);
    let mut diagrams: Vec<Diagram> = enumerate_diagrams(skeleton, k)
        .into_iter()
        .filter(|d| !chord_only || d.is_chord_diagram())
        .collect();
    // pivot on diagrams with more trivalent vertices first
    diagrams.sort_by_cached_key(|d| (std::cmp::Reverse(d.trivalent_count()), d.label()));
    let index: HashMap<Key, usize> = diagrams.iter().enumerate().map(|(i, d)| (key(d), i)).collect();
    let rows: Vec<Row> = diagrams
        .par_iter()
        .flat_map_iter(|d| {
            let mut rows = Vec::new();
            for &rel in relations {
                for terms in terms_for(d, rel, sign) {
                    let mut entries = Vec::with_capacity(terms.len());
                    let mut inside = true;
                    for (t, c) in terms {
                        match index.get(&key(&t)) {
                            Some(&i) => entries.push((i, c)),
                            None => inside = false,
                        }
                    }
                    if inside {
                        rows.push(int_row(entries));
                    }
                }
            }
            rows
        })
        .collect();
    Space { diagrams, rows }
}

pub fn relation_vectors(
    skeleton: &Skeleton,
    k: usize,
    relations: &[Relation],
    sign: StuSign,
) -> Vec<DiagramVector> {
    let space = build(skeleton, k, relations, sign);
    let labels: Vec<String> = space.diagrams.iter().map(|d| d.label()).collect();
    space
        .rows
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut terms: Vec<(String, String)> =
                r.into_iter().map(|(i, v)| (labels[i].clone(), v.to_string())).collect();
            terms.sort();
            DiagramVector { terms }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dimension {
    pub dimension: usize,
    pub diagrams: usize,
    pub relations: usize,
    pub rank: usize,
    /// Labels of diagrams spanning the quotient.
    pub basis: Vec<String>,
}

/// Dimension over ℚ of the span of diagrams modulo the chosen relations.
pub fn space_dimension(skeleton: &Skeleton, k: usize, relations: &[Relation], sign: StuSign) -> Dimension {
    let space = build(skeleton, k, relations, sign);
    let mut ech = Echelon::new();
    let relations_count = space.rows.len();
    let mut rows = space.rows;
    // short rows first keeps fill-in low
    rows.sort_by_key(|r| (r.len(), r.first().map(|e| e.0)));
    for r in rows {
        ech.insert(r);
    }
    let basis = (0..space.diagrams.len())
        .filter(|&i| !ech.is_pivot(i))
        .map(|i| space.diagrams[i].label())
        .collect::<Vec<_>>();
    Dimension {
        dimension: space.diagrams.len() - ech.rank(),
        diagrams: space.diagrams.len(),
        relations: relations_count,
        rank: ech.rank(),
        basis,
    }
}
