//! Plücker vectors, Plücker ideals and the maps between slack matrices and
//! points of the Grassmannian.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use slackspace_algebra::subsets::{colex_rank, colex_subsets, sort_sign};
use slackspace_algebra::{Ideal, PolyMatrix, Polynomial, QMatrix, ResourceLimits, Ring, Scalar};

use crate::cone::{AbstractCone, FacetBasisChoice};
use crate::error::{ModelError, Result};
use crate::slack::{slack_ideal, MinorStrategy};

/// Projective vector of maximal minors, coordinates in colex order of the
/// `k`-subsets of `0..v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerVector {
    pub k: usize,
    pub v: usize,
    coords: Vec<Scalar>,
}

impl PluckerVector {
    pub fn new(k: usize, v: usize, coords: Vec<Scalar>) -> Result<Self> {
        let n = slackspace_algebra::subsets::binomial(v, k);
        if coords.len() != n {
            return Err(ModelError::Input(format!("expected {n} coordinates, got {}", coords.len())));
        }
        if coords.iter().all(Scalar::is_zero) {
            return Err(ModelError::Rank { expected: k, found: 0 });
        }
        Ok(PluckerVector { k, v, coords })
    }

    pub fn from_ints(k: usize, v: usize, coords: &[i64]) -> Result<Self> {
        Self::new(k, v, coords.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn subsets(&self) -> Vec<Vec<usize>> {
        colex_subsets(self.v, self.k)
    }

    /// Coordinate at a sorted subset.
    pub fn get(&self, subset: &[usize]) -> &Scalar {
        &self.coords[colex_rank(subset)]
    }

    /// Coordinate at an arbitrary tuple: sign of the sorting permutation
    /// times the sorted coordinate, zero on repeats.
    pub fn signed(&self, tuple: &[usize]) -> Scalar {
        let mut s = tuple.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Scalar::zero();
        }
        let c = self.get(&s);
        if sort_sign(tuple) < 0 {
            -c
        } else {
            c.clone()
        }
    }

    /// Representative with integer coprime coordinates and a positive first
    /// nonzero coordinate.
    pub fn normalized(&self) -> PluckerVector {
        let (g, l) = Scalar::integer_content(&self.coords);
        let first_negative = self.coords.iter().find(|c| !c.is_zero()).is_some_and(Scalar::is_negative);
        let mut factor = Scalar::from_bigint(l) / Scalar::from_bigint(g);
        if first_negative {
            factor = -factor;
        }
        PluckerVector { k: self.k, v: self.v, coords: self.coords.iter().map(|c| c * &factor).collect() }
    }

    pub fn projectively_equal(&self, other: &PluckerVector) -> bool {
        self.k == other.k && self.v == other.v && self.normalized().coords == other.normalized().coords
    }

    pub fn key(&self, subset: &[usize]) -> String {
        subset_key(subset, self.v)
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.subsets().iter().zip(&self.coords).map(|(s, c)| (self.key(s), c.to_string())).collect()
    }

    pub fn from_map(k: usize, v: usize, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut coords = vec![Scalar::zero(); slackspace_algebra::subsets::binomial(v, k)];
        for (key, val) in map {
            let subset = parse_subset_key(key, v)?;
            if subset.len() != k {
                return Err(ModelError::Input(format!("key {key} is not a {k}-subset")));
            }
            coords[colex_rank(&subset)] =
                val.parse().map_err(|e| ModelError::Input(format!("coordinate {key}: {e}")))?;
        }
        Self::new(k, v, coords)
    }
}

/// `"123"` for `v <= 9`, `"1,2,10"` otherwise (1-based).
pub fn subset_key(subset: &[usize], v: usize) -> String {
    let parts: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
    if v <= 9 {
        parts.concat()
    } else {
        parts.join(",")
    }
}

fn parse_subset_key(key: &str, v: usize) -> Result<Vec<usize>> {
    let bad = || ModelError::Input(format!("bad subset key {key}"));
    let raw: Vec<usize> = if key.contains(',') || key.contains('_') {
        key.split([',', '_']).map(|s| s.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?
    } else if v <= 9 {
        key.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
    } else {
        return Err(bad());
    };
    let mut s: Vec<usize> = raw.iter().map(|&i| if i == 0 || i > v { Err(bad()) } else { Ok(i - 1) }).collect::<Result<_>>()?;
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(bad());
    }
    Ok(s)
}

/// Variable name `p_123`, or `p_1_2_10` when `v > 9`.
pub fn plucker_var_name(subset: &[usize], v: usize) -> String {
    let parts: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
    if v <= 9 {
        format!("p_{}", parts.concat())
    } else {
        format!("p_{}", parts.join("_"))
    }
}

/// Ring with one variable per `k`-subset, in colex order.
pub fn plucker_ring(k: usize, v: usize) -> Arc<Ring> {
    subset_ring(&colex_subsets(v, k), v)
}

fn subset_ring(subsets: &[Vec<usize>], v: usize) -> Arc<Ring> {
    Ring::new(subsets.iter().map(|s| plucker_var_name(s, v)).collect::<Vec<_>>()).expect("distinct names")
}

/// All maximal minors of `x` (v×k).
pub fn plucker(x: &QMatrix) -> Result<PluckerVector> {
    let (v, k) = (x.rows(), x.cols());
    if v < k {
        return Err(ModelError::Input(format!("need at least {k} rows, got {v}")));
    }
    let cols: Vec<usize> = (0..k).collect();
    let coords = colex_subsets(v, k)
        .iter()
        .map(|s| x.submatrix(s, &cols).det())
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if coords.iter().all(Scalar::is_zero) {
        return Err(ModelError::Rank { expected: k, found: x.rank() });
    }
    Ok(PluckerVector { k, v, coords })
}

/// Quadratic Grassmann–Plücker relations: for each `(k-1)`-subset `I` and
/// `(k+1)`-subset `J`, `sum_l (-1)^l p[I, j_l] p[J - j_l]`.
pub fn plucker_relations(k: usize, v: usize) -> Vec<Polynomial> {
    let ring = plucker_ring(k, v);
    if k == 0 || k >= v {
        return Vec::new();
    }
    let var = |tuple: &[usize]| -> Option<(i32, usize)> {
        let mut s = tuple.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sort_sign(tuple), colex_rank(&s)))
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for small in colex_subsets(v, k - 1) {
        for big in colex_subsets(v, k + 1) {
            let mut terms = Vec::new();
            for (l, &j) in big.iter().enumerate() {
                let mut left = small.clone();
                left.push(j);
                let Some((s1, a)) = var(&left) else { continue };
                let right: Vec<usize> = big.iter().copied().filter(|&x| x != j).collect();
                let (s2, b) = var(&right).expect("subset of a set");
                let sign = if l % 2 == 0 { 1 } else { -1 } * s1 * s2;
                let m = Polynomial::var(&ring, a) * Polynomial::var(&ring, b);
                terms.push(m.scale(&Scalar::from_int(sign as i64)));
            }
            let rel: Polynomial = terms.into_iter().fold(Polynomial::zero(&ring), |acc, t| acc + t);
            if rel.is_zero() {
                continue;
            }
            let rel = rel.primitive();
            if seen.insert(rel.to_string()) {
                out.push(rel);
            }
        }
    }
    out
}

/// The Plücker ideal `I_{k,v}`.
pub fn plucker_ideal(k: usize, v: usize) -> Ideal {
    Ideal::new(&plucker_ring(k, v), plucker_relations(k, v))
}

/// Plücker ideal plus the coordinates inside facets, saturated by the
/// product of the facet-extension coordinates.
pub fn gr_cone_ideal(cone: &AbstractCone, bases: &FacetBasisChoice, limits: &ResourceLimits) -> Result<Ideal> {
    let k = cone.d + 1;
    let ring = plucker_ring(k, cone.v);
    let ext = cone.facet_extensions(bases);
    let zeros: Vec<(usize, Scalar)> = ext.contained.iter().map(|s| (colex_rank(s), Scalar::zero())).collect();
    let mut gens: Vec<Polynomial> = plucker_relations(k, cone.v).iter().map(|r| r.specialize(&zeros)).collect();
    gens.extend(zeros.iter().map(|&(i, _)| Polynomial::var(&ring, i)));
    let ideal = Ideal::new(&ring, gens);
    let sat: Vec<usize> = ext.extensions.iter().map(|s| colex_rank(s)).collect();
    Ok(ideal.saturate_variables(&sat, limits)?)
}

/// Ring of the coordinates indexed by facet extensions.
pub fn section_ring(cone: &AbstractCone, bases: &FacetBasisChoice) -> Arc<Ring> {
    subset_ring(&cone.facet_extensions(bases).extensions, cone.v)
}

/// `gr_cone_ideal` with all coordinates outside the facet extensions
/// eliminated, expressed in [`section_ring`].
pub fn section_ideal(cone: &AbstractCone, bases: &FacetBasisChoice, limits: &ResourceLimits) -> Result<Ideal> {
    let full = gr_cone_ideal(cone, bases, limits)?;
    let ext = cone.facet_extensions(bases);
    let keep: BTreeSet<usize> = ext.extensions.iter().map(|s| colex_rank(s)).collect();
    let drop: Vec<usize> = (0..full.ring().len()).filter(|i| !keep.contains(i)).collect();
    let elim = full.eliminate(&drop, limits)?;
    Ok(elim.embed(&section_ring(cone, bases))?)
}

/// `Δ_{i,J}`: parity of the permutation sorting `(J, i)`.
pub fn entry_sign(basis: &[usize], i: usize) -> i32 {
    let mut t = basis.to_vec();
    t.push(i);
    sort_sign(&t)
}

/// Fills the slack pattern with signed coordinates, without any column
/// normalization.
pub fn grv_raw(p: &PluckerVector, cone: &AbstractCone, bases: &FacetBasisChoice) -> Result<QMatrix> {
    if p.k != cone.d + 1 || p.v != cone.v {
        return Err(ModelError::Input(format!(
            "vector for Gr({}, {}) does not fit a cone of dimension {} with {} rays",
            p.k,
            p.v,
            cone.d + 1,
            cone.v
        )));
    }
    let mut s = QMatrix::zeros(cone.v, cone.num_facets());
    for (j, b) in bases.bases.iter().enumerate() {
        let mut nonzero = false;
        for i in (0..cone.v).filter(|&i| !cone.incident(i, j)) {
            let mut t = b.clone();
            t.push(i);
            let val = p.signed(&t);
            nonzero |= !val.is_zero();
            s.set(i, j, val);
        }
        if !nonzero {
            return Err(ModelError::InvalidBasis(format!(
                "basis {:?} of facet {} is dependent at this point",
                b.iter().map(|i| i + 1).collect::<Vec<_>>(),
                j + 1
            )));
        }
    }
    Ok(s)
}

/// Multiplies each column by ±1 so its first nonzero entry is positive.
pub fn sign_normalize_columns(s: &QMatrix) -> QMatrix {
    let mut out = s.clone();
    for j in 0..s.cols() {
        if s.column(j).iter().find(|x| !x.is_zero()).is_some_and(Scalar::is_negative) {
            out.scale_column(j, &Scalar::from_int(-1));
        }
    }
    out
}

/// Slack matrix from a Plücker vector, columns sign-normalized.
pub fn grv(p: &PluckerVector, cone: &AbstractCone, bases: &FacetBasisChoice) -> Result<QMatrix> {
    Ok(sign_normalize_columns(&grv_raw(p, cone, bases)?))
}

/// The symbolic matrix of signed Plücker variables, over [`section_ring`].
pub fn grv_symbolic(cone: &AbstractCone, bases: &FacetBasisChoice) -> PolyMatrix {
    let ring = section_ring(cone, bases);
    let mut m = PolyMatrix::zeros(&ring, cone.v, cone.num_facets());
    for (j, b) in bases.bases.iter().enumerate() {
        for i in (0..cone.v).filter(|&i| !cone.incident(i, j)) {
            let mut t = b.clone();
            t.push(i);
            let sign = sort_sign(&t);
            t.sort_unstable();
            let var = Polynomial::named(&ring, &plucker_var_name(&t, cone.v));
            m.set(i, j, if sign < 0 { -var } else { var });
        }
    }
    m
}

/// Plücker vector of the column space of `s`, normalized.
pub fn vgr(s: &QMatrix, rank: usize) -> Result<PluckerVector> {
    let ech = s.rref();
    if ech.pivots.len() != rank {
        return Err(ModelError::Rank { expected: rank, found: ech.pivots.len() });
    }
    Ok(plucker(&s.select_cols(&ech.pivots))?.normalized())
}

/// A v×k matrix whose Plücker vector is `p`: rows at the colex-least nonzero
/// subset `J0` form `p_{J0}` times the identity, row `i` has entry
/// `p[J0 with position c replaced by i]` in column `c`.
pub fn grr(p: &PluckerVector) -> Result<QMatrix> {
    let subsets = p.subsets();
    let base = subsets
        .iter()
        .enumerate()
        .find(|(r, _)| !p.coords[*r].is_zero())
        .map(|(_, s)| s.clone())
        .ok_or(ModelError::Rank { expected: p.k, found: 0 })?;
    let mut x = QMatrix::zeros(p.v, p.k);
    for i in 0..p.v {
        for c in 0..p.k {
            let mut t = base.clone();
            t[c] = i;
            x.set(i, c, p.signed(&t));
        }
    }
    let back = plucker(&x).map_err(|_| ModelError::NotASubspace("reconstruction has deficient rank".into()))?;
    if !back.projectively_equal(p) {
        return Err(ModelError::NotASubspace("the vector violates the Plücker relations".into()));
    }
    Ok(x)
}

/// Realization-space membership: coordinates vanish inside facets, do not
/// vanish on facet extensions, and the sign-normalized slack matrix is
/// positive on its support.
pub fn in_gr_plus(p: &PluckerVector, cone: &AbstractCone, bases: &FacetBasisChoice) -> bool {
    let ext = cone.facet_extensions(bases);
    if ext.contained.iter().any(|s| !p.get(s).is_zero()) || ext.extensions.iter().any(|s| p.get(s).is_zero()) {
        return false;
    }
    let Ok(s) = grv(p, cone, bases) else { return false };
    (0..s.rows()).all(|i| (0..s.cols()).all(|j| cone.incident(i, j) || s.get(i, j).is_positive()))
}

/// Slack ideal of the symbolic Plücker-filled matrix, and how it sits inside
/// the section ideal.
#[derive(Clone, Debug)]
pub struct SubstitutedSlackIdeal {
    pub ideal: Ideal,
    pub section: Ideal,
    pub contained: bool,
    pub strict: bool,
}

pub fn substituted_slack_ideal(
    cone: &AbstractCone,
    bases: &FacetBasisChoice,
    limits: &ResourceLimits,
) -> Result<SubstitutedSlackIdeal> {
    let m = grv_symbolic(cone, bases);
    let ideal = slack_ideal(&m, cone.d, MinorStrategy::Bordered, limits)?;
    let section = section_ideal(cone, bases, limits)?;
    let contained = section.contains_ideal(&ideal, limits)?;
    let strict = contained && !ideal.contains_ideal(&section, limits)?;
    Ok(SubstitutedSlackIdeal { ideal, section, contained, strict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        assert_eq!(subset_key(&[0, 1, 9], 10), "1,2,10");
        assert_eq!(parse_subset_key("1,2,10", 10).unwrap(), vec![0, 1, 9]);
        assert_eq!(parse_subset_key("312", 5).unwrap(), vec![0, 1, 2]);
        assert_eq!(plucker_var_name(&[0, 1, 9], 10), "p_1_2_10");
    }

    #[test]
    fn small_plucker_ideals() {
        assert!(plucker_relations(3, 4).is_empty());
        assert!(plucker_relations(1, 5).is_empty());
        assert_eq!(plucker_relations(2, 4).len(), 1);
    }

    #[test]
    fn grr_of_unit_vector() {
        let p = PluckerVector::from_ints(2, 3, &[0, 0, 1]).unwrap();
        let x = grr(&p).unwrap();
        assert_eq!(x.rank(), 2);
        assert!(plucker(&x).unwrap().projectively_equal(&p));
    }
}
