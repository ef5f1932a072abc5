//! Slack matrices, symbolic slack matrices and slack ideals.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use slackspace_algebra::{Ideal, PolyMatrix, Polynomial, QMatrix, ResourceLimits, Ring, Scalar};

use crate::cone::{find_flag_in_pattern, AbstractCone};
use crate::error::{ModelError, Result};

/// A slack matrix pattern filled with polynomials, tied to a cone.
///
/// `columns[k]` is the facet index of column `k`; `positions[t]` is the
/// `(row, column)` of variable `t` of the full symbolic matrix, numbered
/// row-major over the support.
#[derive(Clone, Debug)]
pub struct SymbolicSlackMatrix {
    pub cone: Arc<AbstractCone>,
    pub columns: Vec<usize>,
    pub matrix: PolyMatrix,
}

/// Variables fixed to one, as `(row, column)` positions of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingNormalization {
    pub positions: Vec<(usize, usize)>,
}

/// Which (d+2)-minors generate the slack ideal before saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinorStrategy {
    /// Every (d+2)-minor.
    All,
    /// Only minors that border a triangular (d+1)-block with monomial
    /// diagonal. Once the variables are inverted that block is a unit, so
    /// the saturated ideal is unchanged. Falls back to `All` if no such
    /// block exists.
    Bordered,
}

/// Name of slack variable `t` (1-based numbering).
pub fn slack_var_name(t: usize) -> String {
    format!("x_{t}")
}

/// The symbolic slack matrix with variables `x_1, x_2, ...` numbered
/// row-major over the non-incidences.
pub fn symbolic_slack(cone: &Arc<AbstractCone>) -> SymbolicSlackMatrix {
    let mut names = Vec::new();
    let mut pos = Vec::new();
    for i in 0..cone.v {
        for j in 0..cone.num_facets() {
            if !cone.incident(i, j) {
                names.push(slack_var_name(names.len() + 1));
                pos.push((i, j));
            }
        }
    }
    let ring = Ring::new(names).expect("fresh names");
    let mut m = PolyMatrix::zeros(&ring, cone.v, cone.num_facets());
    for (t, &(i, j)) in pos.iter().enumerate() {
        m.set(i, j, Polynomial::var(&ring, t));
    }
    SymbolicSlackMatrix { cone: cone.clone(), columns: (0..cone.num_facets()).collect(), matrix: m }
}

impl SymbolicSlackMatrix {
    pub fn ring(&self) -> &Arc<Ring> {
        self.matrix.ring()
    }

    pub fn d(&self) -> usize {
        self.cone.d
    }

    /// Restricts to the given columns (facet positions in this matrix), keeping
    /// only variables that survive.
    pub fn select_columns(&self, cols: &[usize]) -> SymbolicSlackMatrix {
        let rows: Vec<usize> = (0..self.matrix.rows()).collect();
        let sub = self.matrix.submatrix(&rows, cols);
        let columns = cols.iter().map(|&c| self.columns[c]).collect();
        SymbolicSlackMatrix { cone: self.cone.clone(), columns, matrix: shrink_ring(&sub) }
    }

    /// Sets the variables at `norm` positions to one.
    pub fn normalize(&self, norm: &ScalingNormalization) -> Result<SymbolicSlackMatrix> {
        let mut vals = Vec::new();
        for &(i, j) in &norm.positions {
            let e = self.matrix.get(i, j);
            let vars = e.variables();
            if !e.is_monomial() || vars.len() != 1 || e.total_degree() != 1 {
                return Err(ModelError::CannotNormalize(format!("entry ({}, {}) is not a variable", i + 1, j + 1)));
            }
            vals.push((vars[0], Scalar::one()));
        }
        let m = self.matrix.map(|p| p.specialize(&vals));
        Ok(SymbolicSlackMatrix { cone: self.cone.clone(), columns: self.columns.clone(), matrix: shrink_ring(&m) })
    }

    /// Normalizes along a breadth-first spanning tree of the support graph
    /// (rows and columns as nodes), starting at row 1 and visiting
    /// neighbours in index order.
    pub fn scale_to_ones(&self) -> Result<(SymbolicSlackMatrix, ScalingNormalization)> {
        let norm = spanning_tree_normalization(&self.matrix)?;
        Ok((self.normalize(&norm)?, norm))
    }

    /// Normalizes at positions named by variable (e.g. `x_1`).
    pub fn normalize_variables(&self, names: &[String]) -> Result<(SymbolicSlackMatrix, ScalingNormalization)> {
        let mut positions = Vec::new();
        for name in names {
            let var = self
                .ring()
                .var(name)
                .ok_or_else(|| ModelError::CannotNormalize(format!("unknown variable {name}")))?;
            let target = Polynomial::var(self.ring(), var);
            let pos = (0..self.matrix.rows())
                .flat_map(|i| (0..self.matrix.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| *self.matrix.get(i, j) == target)
                .ok_or_else(|| ModelError::CannotNormalize(format!("{name} is not an entry")))?;
            positions.push(pos);
        }
        let norm = ScalingNormalization { positions };
        if !is_forest(&norm.positions, self.matrix.rows(), self.matrix.cols()) {
            return Err(ModelError::CannotNormalize("positions contain a cycle".into()));
        }
        Ok((self.normalize(&norm)?, norm))
    }

    pub fn slack_ideal(&self, limits: &ResourceLimits) -> Result<Ideal> {
        slack_ideal(&self.matrix, self.cone.d, MinorStrategy::Bordered, limits)
    }
}

/// Re-expresses a matrix over the ring of variables it actually uses,
/// keeping names and relative order.
pub fn shrink_ring(m: &PolyMatrix) -> PolyMatrix {
    let ring = m.ring();
    let mut used = vec![false; ring.len()];
    for p in m.entries() {
        for v in p.variables() {
            used[v] = true;
        }
    }
    let names: Vec<String> = (0..ring.len()).filter(|&i| used[i]).map(|i| ring.name(i).to_string()).collect();
    let small = Ring::new(names).expect("subset of valid names");
    m.embed(&small).expect("all used variables kept")
}

fn is_forest(pos: &[(usize, usize)], rows: usize, cols: usize) -> bool {
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(i, j) in pos {
        let a = find(&mut parent, i);
        let b = find(&mut parent, rows + j);
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

fn spanning_tree_normalization(m: &PolyMatrix) -> Result<ScalingNormalization> {
    let (r, c) = (m.rows(), m.cols());
    let mut seen_row = vec![false; r];
    let mut seen_col = vec![false; c];
    let mut queue = VecDeque::new();
    let mut positions = Vec::new();
    if r == 0 {
        return Ok(ScalingNormalization { positions });
    }
    seen_row[0] = true;
    queue.push_back((true, 0));
    while let Some((is_row, k)) = queue.pop_front() {
        if is_row {
            for j in 0..c {
                if !seen_col[j] && !m.get(k, j).is_zero() {
                    seen_col[j] = true;
                    positions.push((k, j));
                    queue.push_back((false, j));
                }
            }
        } else {
            for i in 0..r {
                if !seen_row[i] && !m.get(i, k).is_zero() {
                    seen_row[i] = true;
                    positions.push((i, k));
                    queue.push_back((true, i));
                }
            }
        }
    }
    if positions.len() != r + c - 1 {
        return Err(ModelError::CannotNormalize("the support graph is disconnected".into()));
    }
    positions.sort_unstable();
    Ok(ScalingNormalization { positions })
}

/// A triangular block `(rows, cols)` with monomial diagonal and zeros below
/// it, found in the support pattern.
pub fn monomial_flag(m: &PolyMatrix, size: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let rows: Vec<usize> = (0..m.rows()).collect();
    let cols: Vec<usize> = (0..m.cols()).collect();
    let zero = |i: usize, j: usize| m.get(i, j).is_zero();
    let flag = find_flag_in_pattern(&zero, &rows, &cols, size)?;
    let diag_ok = flag.vertices.iter().zip(&flag.facets).all(|(&i, &j)| m.get(i, j).is_monomial());
    diag_ok.then_some((flag.vertices, flag.facets))
}

/// The ideal of (d+2)-minors of `m`, saturated by the product of all ring
/// variables.
pub fn slack_ideal(m: &PolyMatrix, d: usize, strategy: MinorStrategy, limits: &ResourceLimits) -> Result<Ideal> {
    let ring = m.ring().clone();
    let k = d + 2;
    if k > m.rows() || k > m.cols() {
        return Ok(Ideal::zero(&ring));
    }
    let gens = match (strategy, monomial_flag(m, d + 1)) {
        (MinorStrategy::Bordered, Some((rows, cols))) => {
            let mut gens = Vec::new();
            for r in (0..m.rows()).filter(|r| !rows.contains(r)) {
                for c in (0..m.cols()).filter(|c| !cols.contains(c)) {
                    let mut rr = rows.clone();
                    rr.push(r);
                    let mut cc = cols.clone();
                    cc.push(c);
                    gens.push(m.minor(&rr, &cc)?);
                }
            }
            gens
        }
        _ => m.minors(k)?.into_iter().map(|mi| mi.value).collect(),
    };
    let gens = dedup_up_to_scale(gens);
    let ideal = Ideal::new(&ring, gens);
    let all: Vec<usize> = (0..ring.len()).collect();
    Ok(ideal.saturate_variables(&all, limits)?)
}

/// Minors of size at most `max_size` that lie in the saturated slack ideal.
///
/// If the rows `R''` vanish on the columns `C`, a (d+2)-minor on
/// `R ∪ R''` x `C ∪ C''` factors as `det S[R,C] · det S[R'',C'']`. When the
/// second block is triangular with monomial diagonal it is a unit after
/// saturation, so `det S[R,C]` itself is in the ideal. These small
/// generators often saturate far faster than the full set of minors and
/// give a subideal of the slack ideal.
pub fn peeled_minors(m: &PolyMatrix, d: usize, max_size: usize) -> Result<Vec<Polynomial>> {
    let k_full = d + 2;
    let mut gens = Vec::new();
    for k in 1..=max_size.min(k_full - 1).min(m.cols()) {
        for cols in slackspace_algebra::subsets::colex_subsets(m.cols(), k) {
            let zero_rows: Vec<usize> =
                (0..m.rows()).filter(|&i| cols.iter().all(|&j| m.get(i, j).is_zero())).collect();
            if zero_rows.len() < k_full - k {
                continue;
            }
            let others: Vec<usize> = (0..m.cols()).filter(|j| !cols.contains(j)).collect();
            let zero = |i: usize, j: usize| m.get(i, j).is_zero();
            let Some(flag) = find_flag_in_pattern(&zero, &zero_rows, &others, k_full - k) else { continue };
            if !flag.vertices.iter().zip(&flag.facets).all(|(&i, &j)| m.get(i, j).is_monomial()) {
                continue;
            }
            let rest: Vec<usize> = (0..m.rows()).filter(|i| !flag.vertices.contains(i)).collect();
            for pick in slackspace_algebra::subsets::colex_subsets(rest.len(), k) {
                let rows: Vec<usize> = pick.iter().map(|&a| rest[a]).collect();
                let g = m.minor(&rows, &cols)?;
                if !g.is_zero() {
                    gens.push(g.div_monomial(&g.monomial_content()));
                }
            }
        }
    }
    Ok(dedup_up_to_scale(gens))
}

fn dedup_up_to_scale(gens: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let p = g.primitive();
        if seen.insert(p.to_string()) {
            out.push(p);
        }
    }
    out
}

/// `S[i][j] = w_j - W_j · q_i`.
pub fn slack_from_vh(vertices: &QMatrix, normals: &QMatrix, offsets: &[Scalar]) -> Result<QMatrix> {
    if normals.rows() != offsets.len() || normals.cols() != vertices.cols() {
        return Err(ModelError::Input(format!(
            "inconsistent shapes: vertices {}x{}, W {}x{}, w {}",
            vertices.rows(),
            vertices.cols(),
            normals.rows(),
            normals.cols(),
            offsets.len()
        )));
    }
    let prod = vertices.mul(&normals.transpose())?;
    let mut s = QMatrix::zeros(vertices.rows(), normals.rows());
    for i in 0..vertices.rows() {
        for j in 0..normals.rows() {
            s.set(i, j, &offsets[j] - prod.get(i, j));
        }
    }
    Ok(s)
}

/// `S = R · B` for ray matrix `R` (v×(d+1)) and facet normals `B` ((d+1)×f).
pub fn slack_from_cone(rays: &QMatrix, normals: &QMatrix) -> Result<QMatrix> {
    Ok(rays.mul(normals)?)
}

/// True iff each column of `b` is a nonzero multiple of the same column of
/// `a`, which is how two slack matrices of one realization relate.
pub fn equal_up_to_column_scaling(a: &QMatrix, b: &QMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    (0..a.cols()).all(|j| {
        let (ca, cb) = (a.column(j), b.column(j));
        let Some(k) = ca.iter().position(|x| !x.is_zero()) else { return cb.iter().all(Scalar::is_zero) };
        let Some(ratio) = cb[k].checked_div(&ca[k]).filter(|r| !r.is_zero()) else { return false };
        ca.iter().zip(&cb).all(|(x, y)| x * &ratio == *y)
    })
}

/// Outcome of [`is_slack_matrix`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackVerdict {
    pub support_ok: bool,
    pub rank_ok: bool,
    pub nonnegative: bool,
    /// Only checked in polytope mode.
    pub contains_ones: Option<bool>,
}

impl SlackVerdict {
    pub fn passes(&self) -> bool {
        self.support_ok && self.rank_ok && self.nonnegative && self.contains_ones != Some(false)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.support_ok {
            out.push("support");
        }
        if !self.rank_ok {
            out.push("rank");
        }
        if !self.nonnegative {
            out.push("nonnegativity");
        }
        if self.contains_ones == Some(false) {
            out.push("all-ones vector");
        }
        out
    }
}

pub fn is_slack_matrix(s: &QMatrix, cone: &AbstractCone, polytope_mode: bool) -> SlackVerdict {
    let shape_ok = s.rows() == cone.v && s.cols() == cone.num_facets();
    let support_ok = shape_ok
        && (0..cone.v).all(|i| (0..cone.num_facets()).all(|j| cone.incident(i, j) == s.get(i, j).is_zero()));
    let rank_ok = s.rank() == cone.d + 1;
    let nonnegative = (0..s.rows()).all(|i| s.row(i).iter().all(|x| !x.is_negative()));
    let contains_ones = polytope_mode.then(|| s.column_space_contains(&vec![Scalar::one(); s.rows()]));
    SlackVerdict { support_ok, rank_ok, nonnegative, contains_ones }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_scaling() {
        let c = Arc::new(AbstractCone::new(1, 2, vec![vec![], vec![]]));
        let s = symbolic_slack(&c);
        let (n, norm) = s.scale_to_ones().unwrap();
        assert_eq!(norm.positions.len(), 3);
        assert_eq!(n.ring().len(), 1);
    }

    #[test]
    fn simplex_ideal_is_zero() {
        let c = Arc::new(AbstractCone::new(2, 3, vec![vec![1, 2], vec![0, 2], vec![0, 1]]));
        let s = symbolic_slack(&c);
        assert_eq!(s.ring().len(), 3);
        assert!(s.slack_ideal(&ResourceLimits::default()).unwrap().is_zero_ideal());
    }

    #[test]
    fn column_scaling() {
        let a = QMatrix::from_ints(&[vec![1, 0], vec![2, 0], vec![0, 3]]);
        let b = QMatrix::from_ints(&[vec![-2, 0], vec![-4, 0], vec![0, 1]]);
        assert!(equal_up_to_column_scaling(&a, &b));
        assert!(!equal_up_to_column_scaling(&a, &QMatrix::from_ints(&[vec![0, 0], vec![0, 0], vec![0, 1]])));
        assert!(!equal_up_to_column_scaling(&a, &QMatrix::from_ints(&[vec![1, 0], vec![3, 0], vec![0, 1]])));
    }
}
