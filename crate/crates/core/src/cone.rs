//! Abstract cones given by labeled vertex-facet incidences.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use slackspace_algebra::subsets::colex_subsets;

use crate::error::{ModelError, Result};

/// A combinatorial type: `v` rays, facets as vertex sets, intrinsic
/// dimension `d` (cone dimension `d + 1`). Indices are 0-based internally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractCone {
    pub d: usize,
    pub v: usize,
    facets: Vec<Vec<usize>>,
    pub label: Option<String>,
    /// Optional display names for vertices (defaults to 1-based indices).
    pub vertex_labels: Option<Vec<String>>,
    incidence: Vec<Vec<bool>>,
}

/// Serialized form with 1-based vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    pub d: usize,
    pub v: usize,
    pub facets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_labels: Option<Vec<String>>,
}

/// A structural problem found by [`AbstractCone::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    FacetTooSmall { facet: usize, size: usize },
    NotAntichain { inner: usize, outer: usize },
    DuplicateFacet { first: usize, second: usize },
    UncoveredVertex(usize),
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::FacetTooSmall { facet, size } => write!(f, "facet {} has only {size} vertices", facet + 1),
            Diagnostic::NotAntichain { inner, outer } => {
                write!(f, "antichain violation: facet {} is contained in facet {}", inner + 1, outer + 1)
            }
            Diagnostic::DuplicateFacet { first, second } => {
                write!(f, "antichain violation: facets {} and {} coincide", first + 1, second + 1)
            }
            Diagnostic::UncoveredVertex(i) => write!(f, "coverage violation: vertex {} lies in no facet", i + 1),
        }
    }
}

/// A maximal chain: vertex `k` lies on facets `0..k` and not on facet `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub facets: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// An ordered `d`-subset `J_F` for every facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetBasisChoice {
    pub bases: Vec<Vec<usize>>,
}

/// Facet extensions and facet-contained subsets, each sorted colex.
#[derive(Clone, Debug)]
pub struct FacetExtensions {
    pub extensions: Vec<Vec<usize>>,
    pub contained: Vec<Vec<usize>>,
}

/// Rows kept and removed by a super-reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperReduction {
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
}

impl AbstractCone {
    /// Builds a cone from 0-based facet lists. Panics on out-of-range vertices.
    pub fn new(d: usize, v: usize, facets: Vec<Vec<usize>>) -> Self {
        let facets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        let mut incidence = vec![vec![false; facets.len()]; v];
        for (j, f) in facets.iter().enumerate() {
            for &i in f {
                assert!(i < v, "vertex {} out of range", i + 1);
                incidence[i][j] = true;
            }
        }
        AbstractCone { d, v, facets, label: None, vertex_labels: None, incidence }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn from_json(j: &ConeJson) -> Result<Self> {
        let mut facets = Vec::new();
        for f in &j.facets {
            let mut g = Vec::new();
            for &i in f {
                if i == 0 || i > j.v {
                    return Err(ModelError::Input(format!("vertex index {i} outside 1..={}", j.v)));
                }
                g.push(i - 1);
            }
            facets.push(g);
        }
        let mut c = AbstractCone::new(j.d, j.v, facets);
        c.label = j.label.clone();
        if let Some(l) = &j.vertex_labels {
            if l.len() != j.v {
                return Err(ModelError::Input("vertex_labels length differs from v".into()));
            }
        }
        c.vertex_labels = j.vertex_labels.clone();
        Ok(c)
    }

    pub fn to_json(&self) -> ConeJson {
        ConeJson {
            d: self.d,
            v: self.v,
            facets: self.facets.iter().map(|f| f.iter().map(|i| i + 1).collect()).collect(),
            label: self.label.clone(),
            vertex_labels: self.vertex_labels.clone(),
        }
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn facet(&self, j: usize) -> &[usize] {
        &self.facets[j]
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// True when vertex `i` lies on facet `j`.
    pub fn incident(&self, i: usize, j: usize) -> bool {
        self.incidence[i][j]
    }

    pub fn is_simplicial(&self, j: usize) -> bool {
        self.facets[j].len() == self.d
    }

    pub fn vertex_name(&self, i: usize) -> String {
        match &self.vertex_labels {
            Some(l) => l[i].clone(),
            None => (i + 1).to_string(),
        }
    }

    /// Structural diagnostics; empty means admissible.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (j, f) in self.facets.iter().enumerate() {
            if f.len() < self.d {
                out.push(Diagnostic::FacetTooSmall { facet: j, size: f.len() });
            }
        }
        for a in 0..self.facets.len() {
            for b in 0..self.facets.len() {
                if a == b {
                    continue;
                }
                let (fa, fb) = (&self.facets[a], &self.facets[b]);
                if fa == fb {
                    if a < b {
                        out.push(Diagnostic::DuplicateFacet { first: a, second: b });
                    }
                } else if fa.iter().all(|i| fb.binary_search(i).is_ok()) {
                    out.push(Diagnostic::NotAntichain { inner: a, outer: b });
                }
            }
        }
        for i in 0..self.v {
            if !self.incidence[i].iter().any(|&x| x) {
                out.push(Diagnostic::UncoveredVertex(i));
            }
        }
        out
    }

    /// Lexicographically least flag among all facets.
    pub fn find_flag(&self) -> Result<Flag> {
        let all: Vec<usize> = (0..self.num_facets()).collect();
        self.find_flag_within(&all)
    }

    /// Lexicographically least flag using only the given facets (by position
    /// in `columns`, then vertex index).
    pub fn find_flag_within(&self, columns: &[usize]) -> Result<Flag> {
        let rows: Vec<usize> = (0..self.v).collect();
        find_flag_in_pattern(&|i, j| self.incidence[i][j], &rows, columns, self.d + 1)
            .ok_or_else(|| ModelError::NotFlagConnected(format!("no flag of length {} among the given facets", self.d + 1)))
    }

    /// Checks that `flag` has the triangular incidence pattern.
    pub fn is_flag(&self, flag: &Flag) -> bool {
        flag.facets.len() == self.d + 1
            && flag.vertices.len() == self.d + 1
            && (0..=self.d).all(|k| {
                !self.incident(flag.vertices[k], flag.facets[k])
                    && (0..k).all(|j| self.incident(flag.vertices[k], flag.facets[j]))
            })
    }

    /// Default basis `J_F` = the `d` smallest vertices of each facet, with
    /// per-facet overrides.
    pub fn choose_facet_bases(&self, overrides: &BTreeMap<usize, Vec<usize>>) -> Result<FacetBasisChoice> {
        let mut bases = Vec::with_capacity(self.facets.len());
        for (j, f) in self.facets.iter().enumerate() {
            let b = match overrides.get(&j) {
                Some(o) => {
                    let mut s = o.clone();
                    s.sort_unstable();
                    s.dedup();
                    if s.len() != self.d || !s.iter().all(|i| f.binary_search(i).is_ok()) {
                        return Err(ModelError::InvalidBasis(format!(
                            "basis {:?} is not a {}-subset of facet {}",
                            o.iter().map(|i| i + 1).collect::<Vec<_>>(),
                            self.d,
                            j + 1
                        )));
                    }
                    s
                }
                None => {
                    if f.len() < self.d {
                        return Err(ModelError::InvalidBasis(format!("facet {} has fewer than d vertices", j + 1)));
                    }
                    f[..self.d].to_vec()
                }
            };
            bases.push(b);
        }
        Ok(FacetBasisChoice { bases })
    }

    /// Overrides given as vertex sets: each is matched to the unique facet
    /// containing it.
    pub fn bases_from_subsets(&self, subsets: &[Vec<usize>]) -> Result<FacetBasisChoice> {
        let mut map = BTreeMap::new();
        for s in subsets {
            let owners: Vec<usize> =
                (0..self.num_facets()).filter(|&j| s.iter().all(|&i| self.incident(i, j))).collect();
            match owners.as_slice() {
                [j] => {
                    map.insert(*j, s.clone());
                }
                _ => {
                    return Err(ModelError::InvalidBasis(format!(
                        "subset {:?} does not lie in exactly one facet",
                        s.iter().map(|i| i + 1).collect::<Vec<_>>()
                    )))
                }
            }
        }
        self.choose_facet_bases(&map)
    }

    /// `F̄(K)` (extensions `J_F ∪ {i}`, `i ∉ F`) and `F(K)` (subsets inside a facet).
    pub fn facet_extensions(&self, bases: &FacetBasisChoice) -> FacetExtensions {
        let k = self.d + 1;
        let mut ext: HashSet<Vec<usize>> = HashSet::new();
        for (j, b) in bases.bases.iter().enumerate() {
            for i in 0..self.v {
                if !self.incident(i, j) {
                    let mut s = b.clone();
                    s.push(i);
                    s.sort_unstable();
                    ext.insert(s);
                }
            }
        }
        let mut extensions = Vec::new();
        let mut contained = Vec::new();
        for s in colex_subsets(self.v, k) {
            if ext.contains(&s) {
                extensions.push(s.clone());
            }
            if (0..self.num_facets()).any(|j| s.iter().all(|&i| self.incident(i, j))) {
                contained.push(s);
            }
        }
        FacetExtensions { extensions, contained }
    }

    /// Why `columns` is not a valid reduction, if it is not.
    pub fn reduction_violation(&self, columns: &[usize]) -> Option<String> {
        if columns.is_empty() {
            return Some("the facet set is empty".into());
        }
        if let Some(&j) = columns.iter().find(|&&j| j >= self.num_facets()) {
            return Some(format!("facet {} does not exist", j + 1));
        }
        if self.find_flag_within(columns).is_err() {
            return Some("the facet set contains no flag".into());
        }
        let outside: Vec<usize> =
            (0..self.num_facets()).filter(|j| !columns.contains(j) && !self.is_simplicial(*j)).collect();
        if !outside.is_empty() {
            return Some(format!(
                "facets outside the set are not simplicial: {:?}",
                outside.iter().map(|j| j + 1).collect::<Vec<_>>()
            ));
        }
        None
    }

    pub fn is_valid_reduction(&self, columns: &[usize]) -> bool {
        self.reduction_violation(columns).is_none()
    }

    /// Greedy super-reduction of the reduced matrix on `columns`: rows are
    /// tried for removal in increasing order.
    pub fn super_reduction_rows(&self, columns: &[usize]) -> SuperReduction {
        let mut kept: Vec<usize> = (0..self.v).collect();
        let mut removed: Vec<usize> = Vec::new();
        for r in 0..self.v {
            let trial: Vec<usize> = kept.iter().copied().filter(|&x| x != r).collect();
            let mut trial_removed = removed.clone();
            trial_removed.push(r);
            if self.super_reduction_violation(columns, &trial).is_none() {
                kept = trial;
                removed = trial_removed;
            }
        }
        SuperReduction { kept, removed }
    }

    /// Why keeping only `kept` rows of the reduced matrix is not a valid
    /// super-reduction, if it is not.
    pub fn super_reduction_violation(&self, columns: &[usize], kept: &[usize]) -> Option<String> {
        let pattern = |i: usize, j: usize| self.incidence[i][j];
        if find_flag_in_pattern(&pattern, kept, columns, self.d + 1).is_none() {
            return Some("kept rows contain no flag".into());
        }
        for r in (0..self.v).filter(|r| !kept.contains(r)) {
            let zeros: Vec<usize> = columns.iter().copied().filter(|&j| self.incidence[r][j]).collect();
            if zeros.len() > self.d {
                return Some(format!("row {} has more than d zeros", r + 1));
            }
            if structural_rank(&|i, j| !self.incidence[i][j], kept, &zeros) < zeros.len() {
                return Some(format!("zero columns of row {} are rank deficient on the kept rows", r + 1));
            }
        }
        None
    }
}

/// Size of a maximum matching between `rows` and `cols` over nonzero positions.
pub(crate) fn structural_rank(nonzero: &dyn Fn(usize, usize) -> bool, rows: &[usize], cols: &[usize]) -> usize {
    fn augment(
        c: usize,
        nonzero: &dyn Fn(usize, usize) -> bool,
        rows: &[usize],
        cols: &[usize],
        seen: &mut [bool],
        match_row: &mut [Option<usize>],
    ) -> bool {
        for (ri, &r) in rows.iter().enumerate() {
            if seen[ri] || !nonzero(r, cols[c]) {
                continue;
            }
            seen[ri] = true;
            if match_row[ri].is_none() || augment(match_row[ri].unwrap(), nonzero, rows, cols, seen, match_row) {
                match_row[ri] = Some(c);
                return true;
            }
        }
        false
    }
    let mut match_row = vec![None; rows.len()];
    let mut size = 0;
    for c in 0..cols.len() {
        let mut seen = vec![false; rows.len()];
        if augment(c, nonzero, rows, cols, &mut seen, &mut match_row) {
            size += 1;
        }
    }
    size
}

/// Depth-first search for the lexicographically least flag of length `len`
/// in an incidence pattern restricted to `rows` x `cols`.
pub(crate) fn find_flag_in_pattern(
    incident: &dyn Fn(usize, usize) -> bool,
    rows: &[usize],
    cols: &[usize],
    len: usize,
) -> Option<Flag> {
    struct Search<'a> {
        incident: &'a dyn Fn(usize, usize) -> bool,
        cols: &'a [usize],
        len: usize,
        failed: HashSet<(usize, Vec<usize>)>,
    }
    impl Search<'_> {
        // `common`: rows lying on every chosen facet so far.
        fn go(&mut self, chosen: &mut Vec<usize>, common: &[usize]) -> bool {
            if chosen.len() == self.len {
                return true;
            }
            let key = (chosen.len(), common.to_vec());
            if self.failed.contains(&key) {
                return false;
            }
            for &c in self.cols {
                if chosen.contains(&c) {
                    continue;
                }
                if !common.iter().any(|&r| !(self.incident)(r, c)) {
                    continue;
                }
                let next: Vec<usize> = common.iter().copied().filter(|&r| (self.incident)(r, c)).collect();
                if chosen.len() + 1 < self.len && next.is_empty() {
                    continue;
                }
                chosen.push(c);
                if self.go(chosen, &next) {
                    return true;
                }
                chosen.pop();
            }
            self.failed.insert(key);
            false
        }
    }
    let mut s = Search { incident, cols, len, failed: HashSet::new() };
    let mut chosen = Vec::new();
    if !s.go(&mut chosen, rows) {
        return None;
    }
    let mut vertices = Vec::with_capacity(len);
    for k in 0..len {
        let v = rows
            .iter()
            .copied()
            .filter(|&r| !incident(r, chosen[k]) && (0..k).all(|j| incident(r, chosen[j])))
            .min()?;
        vertices.push(v);
    }
    Some(Flag { facets: chosen, vertices })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> AbstractCone {
        AbstractCone::new(2, 5, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]])
    }

    #[test]
    fn validation() {
        assert!(pentagon().validate().is_empty());
        let bad = AbstractCone::new(2, 3, vec![vec![0, 1], vec![0, 1, 2]]);
        assert!(bad.validate().iter().any(|d| matches!(d, Diagnostic::NotAntichain { .. })));
        let uncovered = AbstractCone::new(2, 6, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]]);
        assert!(uncovered.validate().contains(&Diagnostic::UncoveredVertex(5)));
    }

    #[test]
    fn pentagon_flag() {
        let c = pentagon();
        let f = c.find_flag().unwrap();
        assert_eq!(f.facets, vec![0, 1, 2]);
        assert_eq!(f.vertices, vec![2, 0, 1]);
        assert!(c.is_flag(&f));
    }

    #[test]
    fn simplex_has_no_facet_contained_sets() {
        let c = AbstractCone::new(3, 4, vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]]);
        let b = c.choose_facet_bases(&BTreeMap::new()).unwrap();
        let e = c.facet_extensions(&b);
        assert!(e.contained.is_empty());
        assert_eq!(e.extensions, vec![vec![0, 1, 2, 3]]);
        let f = c.find_flag().unwrap();
        assert!(c.is_flag(&f));
    }

    #[test]
    fn reductions() {
        let c = pentagon();
        assert!(!c.is_valid_reduction(&[]));
        assert!(c.is_valid_reduction(&[0, 1, 2, 3, 4]));
        // every row of a simplex-like pattern with d+1 zeros stays
        let s = AbstractCone::new(2, 3, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
        let sr = s.super_reduction_rows(&[0, 1, 2]);
        assert!(sr.removed.is_empty());
    }
}
