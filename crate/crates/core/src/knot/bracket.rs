use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{a2_invariant, apply_sites, conway_polynomial, KnotError, LinkDiagram, MoveSite};

/// Integer-valued invariant used to evaluate formal sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Invariant {
    A2,
    /// Coefficient of z^j in the Conway polynomial.
    Conway(usize),
}

impl std::str::FromStr for Invariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "a2" {
            return Ok(Invariant::A2);
        }
        s.strip_prefix('c')
            .and_then(|j| j.parse().ok())
            .map(Invariant::Conway)
            .ok_or_else(|| format!("unknown invariant {s:?}, expected a2 or c<j>"))
    }
}

impl Invariant {
    pub fn evaluate(self, d: &LinkDiagram) -> Result<i64, KnotError> {
        match self {
            Invariant::A2 => a2_invariant(d),
            Invariant::Conway(j) => Ok(conway_polynomial(d)?.coeff(j)),
        }
    }
}

/// Σ over subsets S′ of `sites` of (−1)^{l−|S′|} v(d with S′ applied).
pub fn evaluate_bracket(v: Invariant, d: &LinkDiagram, sites: &[MoveSite]) -> Result<i64, KnotError> {
    apply_sites(d, sites)?;
    let l = sites.len();
    if l >= 24 {
        return Err(KnotError::BadSite(format!("{l} sites is too many to expand")));
    }
    (0u32..1 << l)
        .into_par_iter()
        .map(|mask| {
            let sub: Vec<MoveSite> = (0..l).filter(|&i| mask >> i & 1 == 1).map(|i| sites[i].clone()).collect();
            let sign = if (l - sub.len()).is_multiple_of(2) { 1 } else { -1 };
            Ok(sign * v.evaluate(&apply_sites(d, &sub)?)?)
        })
        .sum()
}

/// Whether two knots are C_k-equivalent, for k ≤ 3.
pub fn decide_ck(k: usize, d1: &LinkDiagram, d2: &LinkDiagram) -> Result<bool, KnotError> {
    d1.ensure_knot()?;
    d2.ensure_knot()?;
    match k {
        1 | 2 => Ok(true),
        3 => Ok(a2_invariant(d1)? == a2_invariant(d2)?),
        _ => Err(KnotError::Degree(k)),
    }
}
