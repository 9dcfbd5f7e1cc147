//! Seeded generators for knot diagrams and move sites.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{faces, LinkDiagram, MoveSite, Side, SiteArc};
use crate::braid::BraidWord;

/// Closure of a random braid word whose permutation is one cycle, so the
/// closure is a knot. `length` is raised to at least `strands - 1` and to the
/// parity of an n-cycle.
pub fn random_knot(rng: &mut impl Rng, strands: usize, length: usize) -> LinkDiagram {
    assert!(strands >= 1);
    let mut length = length.max(strands - 1);
    if (length + strands).is_multiple_of(2) {
        length += 1;
    }
    loop {
        let letters: Vec<i32> = (0..length)
            .map(|_| {
                let j = rng.gen_range(1..strands.max(2)) as i32;
                if rng.gen_bool(0.5) {
                    j
                } else {
                    -j
                }
            })
            .collect();
        let letters = if strands == 1 { vec![] } else { letters };
        let b = BraidWord::new(strands, letters).expect("letters in range");
        let d = LinkDiagram::braid_closure(&b);
        if d.component_count() == 1 {
            return d;
        }
    }
}

/// Random knot with `m` of its crossings marked singular.
pub fn random_singular_knot(rng: &mut impl Rng, strands: usize, length: usize, m: usize) -> LinkDiagram {
    loop {
        let mut d = random_knot(rng, strands, length.max(m));
        if d.crossing_count() < m {
            continue;
        }
        let mut idx: Vec<usize> = (0..d.crossing_count()).collect();
        idx.shuffle(rng);
        for &i in &idx[..m] {
            d.crossings[i].singular = true;
        }
        return d;
    }
}

/// Unknot drawn as the closure of σ₁σ₂⋯σₙ.
pub fn twisted_unknot(n: usize) -> LinkDiagram {
    LinkDiagram::braid_closure(&BraidWord::new(n + 1, (1..=n as i32).collect::<Vec<_>>()).expect("valid word"))
}

/// A random degree-k site on one face, avoiding the arcs in `avoid`.
pub fn random_site(rng: &mut impl Rng, d: &LinkDiagram, k: usize, avoid: &[usize]) -> Option<MoveSite> {
    let mut fs = faces(d);
    fs.shuffle(rng);
    for f in fs {
        let usable: Vec<usize> = (0..f.len())
            .filter(|&i| !avoid.contains(&f[i].0) && f.iter().filter(|e| e.0 == f[i].0).count() == 1)
            .collect();
        if usable.len() < k + 1 {
            continue;
        }
        let mut pick: Vec<usize> = usable.choose_multiple(rng, k + 1).copied().collect();
        pick.sort();
        let r = rng.gen_range(0..pick.len());
        pick.rotate_left(r);
        let arcs = pick
            .iter()
            .map(|&i| SiteArc { arc: f[i].0, side: if f[i].1 { Side::Left } else { Side::Right } })
            .collect();
        return Some(MoveSite { k, arcs });
    }
    None
}

/// Mutually compatible random sites with the given degrees.
pub fn random_sites(rng: &mut impl Rng, d: &LinkDiagram, ks: &[usize]) -> Option<Vec<MoveSite>> {
    for _ in 0..100 {
        let mut sites: Vec<MoveSite> = Vec::new();
        for &k in ks {
            let avoid: Vec<usize> = sites.iter().flat_map(|s| s.arcs.iter().map(|a| a.arc)).collect();
            match random_site(rng, d, k, &avoid) {
                Some(s) => sites.push(s),
                None => break,
            }
        }
        if sites.len() == ks.len() && super::apply_sites(d, &sites).is_ok() {
            return Some(sites);
        }
    }
    None
}
