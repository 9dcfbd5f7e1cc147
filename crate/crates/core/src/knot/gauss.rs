use serde::Serialize;

use super::{KnotError, LinkDiagram};

/// One pass through a crossing while walking a knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

/// Signed Gauss code of a knot, starting at its smallest arc.
pub fn gauss_code(d: &LinkDiagram) -> Result<Vec<Passage>, KnotError> {
    d.ensure_knot()?;
    let ends = d.ends();
    Ok(d.components()
        .into_iter()
        .flatten()
        .map(|x| {
            let (c, s) = ends[&x].head.expect("valid diagram");
            Passage { crossing: c, over: s != 0 }
        })
        .collect())
}

/// Sums of ε(c1)ε(c2) over interleaved pairs c1 c2 c1 c2 (from the base
/// point), bucketed by whether each first pass is over: index
/// `2·over(c1) + over(c2)`.
pub(crate) fn interleaved_buckets(d: &LinkDiagram, code: &[Passage]) -> [i64; 4] {
    let n = d.crossing_count();
    let mut first = vec![usize::MAX; n];
    let mut second = vec![usize::MAX; n];
    for (i, p) in code.iter().enumerate() {
        if first[p.crossing] == usize::MAX {
            first[p.crossing] = i;
        } else {
            second[p.crossing] = i;
        }
    }
    let mut out = [0; 4];
    for a in 0..n {
        for b in 0..n {
            if first[a] < first[b] && first[b] < second[a] && second[a] < second[b] {
                let idx = 2 * usize::from(code[first[a]].over) + usize::from(code[first[b]].over);
                out[idx] += (d.crossings[a].sign * d.crossings[b].sign) as i64;
            }
        }
    }
    out
}

/// Casson invariant of a knot from its Gauss code.
pub fn a2_invariant(d: &LinkDiagram) -> Result<i64, KnotError> {
    if d.crossings.iter().any(|c| c.singular) {
        return Err(KnotError::Singular);
    }
    let code = gauss_code(d)?;
    Ok(interleaved_buckets(d, &code)[A2_PATTERN])
}

const A2_PATTERN: usize = 1;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::random::random_knot;
    use crate::knot::conway_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtin_values() {
        let a2 = |n: &str| a2_invariant(&LinkDiagram::builtin(n).unwrap()).unwrap();
        assert_eq!(a2("unknot"), 0);
        assert_eq!(a2("trefoil-r"), 1);
        assert_eq!(a2("trefoil-l"), 1);
        assert_eq!(a2("figure8"), -1);
        assert!(a2_invariant(&LinkDiagram::builtin("hopf-p").unwrap()).is_err());
    }

    #[test]
    fn both_based_patterns_agree_with_skein() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let d = random_knot(&mut rng, 4, 9);
            let b = interleaved_buckets(&d, &gauss_code(&d).unwrap());
            let c2 = conway_polynomial(&d).unwrap().coeff(2);
            assert_eq!(b[1], c2);
            assert_eq!(b[2], c2);
        }
    }
}
