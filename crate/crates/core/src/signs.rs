//! Column sign propagation for reconstructed slack matrices.
//!
//! All variables are taken to be positive. An entry `c·m·g` with `m` a
//! monomial and `g` primitive has the sign of `c·g`, so once the sign of
//! `g` is known the entry fixes the sign of its column. Columns are
//! resolved until nothing changes; the entries of resolved columns then
//! become positivity constraints on their primitive parts.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use slackspace_algebra::{PolyMatrix, Polynomial, Scalar};

/// A polynomial required to be strictly positive, with the matrix entry it
/// came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityConstraint {
    pub polynomial: String,
    pub row: usize,
    pub facet: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityConstraintSet {
    pub variables: Vec<String>,
    pub constraints: Vec<PositivityConstraint>,
}

impl PositivityConstraintSet {
    /// Polynomials of the set, parsed in `ring`.
    pub fn polynomials(&self, ring: &std::sync::Arc<slackspace_algebra::Ring>) -> slackspace_algebra::Result<Vec<Polynomial>> {
        self.constraints.iter().map(|c| Polynomial::parse(ring, &c.polynomial)).collect()
    }

    /// True iff some constraint is a positive multiple of `p`.
    pub fn contains(&self, p: &Polynomial) -> bool {
        let Ok(ps) = self.polynomials(p.ring()) else { return false };
        ps.iter().any(|q| positive_multiple(q, p))
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// A copy without the constraints equal to `p` up to positive scaling.
    pub fn without(&self, p: &Polynomial) -> Self {
        let mut out = self.clone();
        out.constraints.retain(|c| match Polynomial::parse(p.ring(), &c.polynomial) {
            Ok(q) => !positive_multiple(&q, p),
            Err(_) => true,
        });
        out
    }
}

/// `a = λ·b` for some rational `λ > 0`.
pub fn positive_multiple(a: &Polynomial, b: &Polynomial) -> bool {
    if a.is_zero() || b.is_zero() || a.len() != b.len() {
        return false;
    }
    let (ma, ca) = &a.terms()[0];
    let Some((_, cb)) = b.terms().iter().find(|(m, _)| m == ma) else { return false };
    let Some(lambda) = ca.checked_div(cb) else { return false };
    lambda.is_positive() && *a == b.scale(&lambda)
}

/// Two columns or two entries forced to opposite signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignConflict {
    /// `polynomial` is required to be both positive and negative.
    Polynomial { polynomial: Polynomial, first: (usize, usize), second: (usize, usize) },
    /// Two entries of one column disagree on its sign.
    Column { facet: usize, first: usize, second: usize },
}

#[derive(Clone, Debug)]
pub struct SignAnalysis {
    /// Sign (±1) of each resolved column, keyed by facet.
    pub column_signs: BTreeMap<usize, i8>,
    pub constraints: PositivityConstraintSet,
    pub unresolved: Vec<usize>,
    pub conflict: Option<SignConflict>,
}

/// Splits an entry into its sign and its primitive part with monomial
/// content removed.
fn split(p: &Polynomial) -> (i8, Polynomial) {
    let q = p.div_monomial(&p.monomial_content());
    let g = q.primitive();
    let s = q.terms()[0].1.signum() * g.terms()[0].1.signum();
    (s as i8, g)
}

fn key(g: &Polynomial) -> String {
    g.to_string()
}

/// Propagates column signs in the given column order. `columns` are the
/// matrix column positions with their facet labels.
fn propagate(m: &PolyMatrix, facets: &[usize], order: &[usize]) -> SignAnalysis {
    let mut known: BTreeMap<String, (i8, (usize, usize))> = BTreeMap::new();
    let mut column_signs: BTreeMap<usize, i8> = BTreeMap::new();
    let mut conflict = None;
    let split_entries: Vec<Vec<Option<(i8, Polynomial)>>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| (!m.get(i, j).is_zero()).then(|| split(m.get(i, j)))).collect())
        .collect();
    let mut changed = true;
    while changed && conflict.is_none() {
        changed = false;
        for &j in order {
            if column_signs.contains_key(&j) {
                continue;
            }
            let mut sign: Option<(i8, usize)> = None;
            for i in 0..m.rows() {
                let Some((s, g)) = &split_entries[i][j] else { continue };
                let forced = if g.is_constant() {
                    Some(*s)
                } else {
                    known.get(&key(g)).map(|(ks, _)| s * ks)
                };
                let Some(f) = forced else { continue };
                match sign {
                    None => sign = Some((f, i)),
                    Some((prev, first)) if prev != f => {
                        conflict = Some(SignConflict::Column { facet: facets[j], first, second: i });
                    }
                    _ => {}
                }
            }
            if conflict.is_some() {
                break;
            }
            let Some((cs, _)) = sign else { continue };
            column_signs.insert(j, cs);
            changed = true;
            for i in 0..m.rows() {
                let Some((s, g)) = &split_entries[i][j] else { continue };
                if g.is_constant() {
                    continue;
                }
                let want = s * cs;
                match known.get(&key(g)) {
                    Some((ks, pos)) if *ks != want => {
                        conflict = Some(SignConflict::Polynomial {
                            polynomial: g.clone(),
                            first: *pos,
                            second: (i, facets[j]),
                        });
                    }
                    Some(_) => {}
                    None => {
                        known.insert(key(g), (want, (i, facets[j])));
                    }
                }
            }
            if conflict.is_some() {
                break;
            }
        }
    }
    let mut constraints: Vec<PositivityConstraint> = Vec::new();
    let mut seen = BTreeSet::new();
    for (s, (row, facet)) in known.values() {
        let (i, j) = (*row, facets.iter().position(|f| f == facet).expect("known facet"));
        let (_, g) = split_entries[i][j].as_ref().expect("nonzero entry");
        let p = if *s > 0 { g.clone() } else { -g };
        if seen.insert(p.to_string()) {
            constraints.push(PositivityConstraint { polynomial: p.to_string(), row: *row, facet: *facet });
        }
    }
    constraints.sort_by(|a, b| (a.facet, a.row, &a.polynomial).cmp(&(b.facet, b.row, &b.polynomial)));
    let unresolved = (0..m.cols()).filter(|j| !column_signs.contains_key(j)).map(|j| facets[j]).collect();
    SignAnalysis {
        column_signs: column_signs.into_iter().map(|(j, s)| (facets[j], s)).collect(),
        constraints: PositivityConstraintSet { variables: m.ring().names().to_vec(), constraints },
        unresolved,
        conflict,
    }
}

/// Resolves column signs in index order. `facets[j]` labels column `j`.
pub fn sign_normalize(m: &PolyMatrix, facets: &[usize]) -> SignAnalysis {
    let order: Vec<usize> = (0..m.cols()).collect();
    propagate(m, facets, &order)
}

/// As [`sign_normalize`] with a column order shuffled by `seed`.
pub fn sign_normalize_shuffled(m: &PolyMatrix, facets: &[usize], seed: u64) -> SignAnalysis {
    let mut order: Vec<usize> = (0..m.cols()).collect();
    order.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
    propagate(m, facets, &order)
}

/// Applies resolved column signs, leaving unresolved columns unchanged.
pub fn apply_signs(m: &PolyMatrix, facets: &[usize], signs: &BTreeMap<usize, i8>) -> PolyMatrix {
    let mut out = m.clone();
    for (j, f) in facets.iter().enumerate() {
        if signs.get(f) == Some(&-1) {
            for i in 0..m.rows() {
                out.set(i, j, m.get(i, j).scale(&Scalar::from_int(-1)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use slackspace_algebra::Ring;

    #[test]
    fn propagates_through_shared_factor() {
        let ring = Ring::new(["a", "b"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ring, s).unwrap();
        let mut m = PolyMatrix::zeros(&ring, 2, 2);
        m.set(0, 0, p("-a"));
        m.set(1, 0, p("-a*b + a^2"));
        m.set(0, 1, p("b - a"));
        m.set(1, 1, p("b + 1"));
        let s = sign_normalize(&m, &[0, 1]);
        assert_eq!(s.column_signs.get(&0), Some(&-1));
        assert_eq!(s.column_signs.get(&1), Some(&1));
        assert!(s.constraints.contains(&p("b - a")));
        assert!(s.conflict.is_none());
    }

    #[test]
    fn opposite_requirements_conflict() {
        let ring = Ring::new(["a"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ring, s).unwrap();
        let mut m = PolyMatrix::zeros(&ring, 2, 2);
        m.set(0, 0, p("1"));
        m.set(1, 0, p("a - 1"));
        m.set(0, 1, p("1"));
        m.set(1, 1, p("1 - a"));
        let s = sign_normalize(&m, &[0, 1]);
        assert!(s.conflict.is_some());
    }

    #[test]
    fn positive_multiples() {
        let ring = Ring::new(["a", "b"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ring, s).unwrap();
        assert!(positive_multiple(&p("2*a - 2*b"), &p("a - b")));
        assert!(!positive_multiple(&p("b - a"), &p("a - b")));
        assert!(!positive_multiple(&p("a"), &p("a - b")));
    }
}
