//! Template insertion for simple C_k-moves.
//!
//! A site is k+1 arcs met in this order while walking the boundary of one
//! face with the face on the left. Picture that boundary as a horizontal
//! line with the face above it. Each site arc pushes a finger up into the
//! face; finger i occupies braid positions 2i and 2i+1. A strand running left
//! to right (side `Left`) goes up on the left of its finger and comes down
//! on the right; a strand running right to left does the opposite. The
//! 2k+2 finger strands pass upward through `bing_braid(k)` (σⱼ puts the left
//! strand over) and each pair {2i, 2i+1} is capped above it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Crossing, KnotError, LinkDiagram};
use crate::braid::bing_braid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// An arc and the side of it, relative to its orientation, where the face
/// lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SiteArc {
    pub arc: usize,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSite {
    pub k: usize,
    pub arcs: Vec<SiteArc>,
}

/// Boundary of a face as arcs walked with the face on the left; `true`
/// means walked along the arc's orientation.
pub type Face = Vec<(usize, bool)>;

pub fn faces(d: &LinkDiagram) -> Vec<Face> {
    let ends = d.ends();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &x in ends.keys() {
        for dir in [true, false] {
            if seen.contains(&(x, dir)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut y, mut fwd) = (x, dir);
            while seen.insert((y, fwd)) {
                face.push((y, fwd));
                let e = ends[&y];
                let (c, s) = if fwd { e.head } else { e.tail }.expect("valid diagram");
                let s2 = (s + 3) % 4;
                y = d.crossings[c].arcs[s2];
                fwd = !d.crossings[c].is_in_slot(s2);
            }
            out.push(face);
        }
    }
    out
}

fn directed(a: &SiteArc) -> (usize, bool) {
    (a.arc, a.side == Side::Left)
}

/// Face index and boundary positions of a site.
fn locate(d: &LinkDiagram, fs: &[Face], site: &MoveSite) -> Result<(usize, Vec<usize>), KnotError> {
    let bad = |m: &str| Err(KnotError::BadSite(m.into()));
    if site.k == 0 {
        return bad("k must be at least 1");
    }
    if site.arcs.len() != site.k + 1 {
        return bad("a site needs k+1 arcs");
    }
    let distinct: BTreeSet<usize> = site.arcs.iter().map(|a| a.arc).collect();
    if distinct.len() != site.arcs.len() {
        return bad("site arcs must be distinct");
    }
    let arcs = d.arcs();
    if let Some(a) = site.arcs.iter().find(|a| !arcs.contains(&a.arc)) {
        return Err(KnotError::BadId(format!("arc {}", a.arc)));
    }
    let first = directed(&site.arcs[0]);
    let fi = fs.iter().position(|f| f.contains(&first)).expect("every directed arc bounds a face");
    let face = &fs[fi];
    let mut pos = Vec::new();
    for a in &site.arcs {
        match face.iter().position(|&e| e == directed(a)) {
            Some(p) => pos.push(p),
            None => return bad("site arcs do not bound a common face on the given sides"),
        }
    }
    let n = face.len();
    let rel: Vec<usize> = pos.iter().map(|&p| (p + n - pos[0]) % n).collect();
    if rel.windows(2).any(|w| w[0] >= w[1]) {
        return bad("site arcs are not in face order");
    }
    Ok((fi, pos))
}

pub fn validate_site(d: &LinkDiagram, site: &MoveSite) -> Result<(), KnotError> {
    d.ensure_valid()?;
    locate(d, &faces(d), site).map(|_| ())
}

pub fn apply_ck_template(d: &LinkDiagram, site: &MoveSite) -> Result<LinkDiagram, KnotError> {
    apply_sites(d, std::slice::from_ref(site))
}

/// Applies several sites at once. Sites must use disjoint arcs, and sites
/// on a common face must not interleave along it.
pub fn apply_sites(d: &LinkDiagram, sites: &[MoveSite]) -> Result<LinkDiagram, KnotError> {
    d.ensure_valid()?;
    let fs = faces(d);
    let mut used = BTreeSet::new();
    let mut placed: BTreeMap<usize, Vec<(usize, Vec<usize>)>> = BTreeMap::new();
    for (i, s) in sites.iter().enumerate() {
        let (fi, pos) = locate(d, &fs, s)?;
        for a in &s.arcs {
            if !used.insert(a.arc) {
                return Err(KnotError::Overlap(format!("arc {} is used twice", a.arc)));
            }
        }
        for (j, other) in placed.get(&fi).into_iter().flatten() {
            if interleaved(&pos, other) {
                return Err(KnotError::Overlap(format!("sites {j} and {i} interleave on a face")));
            }
        }
        placed.entry(fi).or_default().push((i, pos));
    }
    let mut out = d.clone();
    for s in sites {
        splice(&mut out, s)?;
    }
    Ok(out)
}

fn interleaved(a: &[usize], b: &[usize]) -> bool {
    let mut all: Vec<(usize, bool)> = a.iter().map(|&p| (p, true)).chain(b.iter().map(|&p| (p, false))).collect();
    all.sort();
    let changes = (0..all.len()).filter(|&i| all[i].1 != all[(i + 1) % all.len()].1).count();
    changes > 2
}

fn splice(d: &mut LinkDiagram, site: &MoveSite) -> Result<(), KnotError> {
    let beta = bing_braid(site.k).map_err(|e| KnotError::BadSite(e.to_string()))?;
    let n = beta.strands();
    let ends = d.ends();
    let mut fresh = d.max_arc() + 1;
    let mut take = || {
        fresh += 1;
        fresh - 1
    };
    // upward[p]: the strand entering at bottom position p runs upward
    let mut upward = vec![false; n];
    for (i, a) in site.arcs.iter().enumerate() {
        upward[if a.side == Side::Left { 2 * i } else { 2 * i + 1 }] = true;
    }
    let bottom: Vec<usize> = (0..n).map(|_| take()).collect();
    let mut cur = bottom.clone();
    let mut strand: Vec<usize> = (0..n).collect();
    let mut new = Vec::new();
    for &l in beta.letters() {
        let j = l.unsigned_abs() as usize - 1;
        let corners = [cur[j], cur[j + 1], take(), take()];
        let (left, right) = (strand[j], strand[j + 1]);
        // corners ccw: bottom-left, bottom-right, top-right, top-left
        let left_in = if upward[left] { 0 } else { 2 };
        let right_in = if upward[right] { 1 } else { 3 };
        let (over_in, under_in) = if l > 0 { (left_in, right_in) } else { (right_in, left_in) };
        let arcs = [0, 1, 2, 3].map(|i| corners[(under_in + i) % 4]);
        let sign = if (over_in + 4 - under_in) % 4 == 3 { 1 } else { -1 };
        new.push(Crossing::new(arcs, sign));
        cur[j] = corners[3];
        cur[j + 1] = corners[2];
        strand.swap(j, j + 1);
    }
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(p: &BTreeMap<usize, usize>, mut x: usize) -> usize {
        while let Some(&y) = p.get(&x) {
            x = y;
        }
        x
    }
    let union = |p: &mut BTreeMap<usize, usize>, x: usize, y: usize| {
        let (rx, ry) = (find(p, x), find(p, y));
        assert_ne!(rx, ry, "template closes a loop");
        p.insert(rx.max(ry), rx.min(ry));
    };
    for i in 0..=site.k {
        union(&mut parent, cur[2 * i], cur[2 * i + 1]);
    }
    for (i, a) in site.arcs.iter().enumerate() {
        let (up, down) = if a.side == Side::Left { (2 * i, 2 * i + 1) } else { (2 * i + 1, 2 * i) };
        let (c, s) = ends[&a.arc].head.expect("valid diagram");
        let y = take();
        d.crossings[c].arcs[s] = y;
        union(&mut parent, bottom[up], a.arc);
        union(&mut parent, bottom[down], y);
    }
    d.crossings.extend(new);
    for c in d.crossings.iter_mut() {
        c.arcs = c.arcs.map(|a| find(&parent, a));
    }
    Ok(())
}

/// A k=1 site next to crossing `i` whose clasp undoes that crossing's sign.
pub fn clasp_site(d: &LinkDiagram, i: usize) -> Result<MoveSite, KnotError> {
    d.ensure_valid()?;
    let c = *d.crossings.get(i).ok_or_else(|| KnotError::BadId(format!("crossing {i}")))?;
    for s in 0..4 {
        let s2 = (s + 3) % 4;
        let (p, q) = (c.arcs[s], c.arcs[s2]);
        if p == q {
            continue;
        }
        let side = |left: bool| if left { Side::Left } else { Side::Right };
        let site = MoveSite {
            k: 1,
            arcs: vec![
                SiteArc { arc: p, side: side(c.is_in_slot(s)) },
                SiteArc { arc: q, side: side(!c.is_in_slot(s2)) },
            ],
        };
        let e = apply_ck_template(d, &site)?;
        if e.crossings[d.crossing_count()..].iter().all(|x| x.sign == -c.sign) {
            return Ok(site);
        }
    }
    Err(KnotError::BadSite(format!("no clasp site at crossing {i}")))
}
