//! Gale transforms of slack-variety points and the dual Plücker map.

use slackspace_algebra::subsets::{colex_rank, colex_subsets, sort_sign};
use slackspace_algebra::{QMatrix, Scalar};

use crate::cone::{AbstractCone, FacetBasisChoice};
use crate::error::{ModelError, Result};
use crate::grassmannian::{grv, plucker, PluckerVector};

/// Rows are the Gale vectors `b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaleConfiguration {
    pub matrix: QMatrix,
}

impl GaleConfiguration {
    pub fn new(matrix: QMatrix) -> Result<Self> {
        if matrix.rank() != matrix.cols() {
            return Err(ModelError::Rank { expected: matrix.cols(), found: matrix.rank() });
        }
        Ok(GaleConfiguration { matrix })
    }

    pub fn vectors(&self) -> usize {
        self.matrix.rows()
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }
}

/// Left-kernel basis of `s` as columns of a v×(v-rank) matrix.
pub fn gale_transform(s: &QMatrix, rank: usize) -> Result<GaleConfiguration> {
    let found = s.rank();
    if found != rank {
        return Err(ModelError::Rank { expected: rank, found });
    }
    let basis = s.left_kernel();
    let mut b = QMatrix::zeros(s.rows(), basis.len());
    for (c, vec) in basis.iter().enumerate() {
        for (i, x) in vec.iter().enumerate() {
            b.set(i, c, x.clone());
        }
    }
    Ok(GaleConfiguration { matrix: b })
}

/// True iff the Gale vectors sum to zero.
pub fn is_polytopal_gale(g: &GaleConfiguration) -> bool {
    (0..g.dim()).all(|c| g.matrix.column(c).into_iter().sum::<Scalar>().is_zero())
}

/// Coordinates of the orthogonal complement: `q[complement of J] =
/// sgn(J, complement of J) * p[J]`.
pub fn dual_plucker(p: &PluckerVector) -> PluckerVector {
    let k2 = p.v - p.k;
    let mut coords = vec![Scalar::zero(); p.coords().len()];
    for (j, c) in p.subsets().iter().zip(p.coords()) {
        let comp: Vec<usize> = (0..p.v).filter(|i| !j.contains(i)).collect();
        let mut t = j.clone();
        t.extend_from_slice(&comp);
        coords[colex_rank(&comp)] = if sort_sign(&t) < 0 { -c } else { c.clone() };
    }
    PluckerVector::new(k2, p.v, coords).expect("a nonzero vector stays nonzero")
}

/// Slack matrix determined by a Gale configuration, via the dual Plücker
/// vector.
pub fn slack_from_gale(g: &GaleConfiguration, cone: &AbstractCone, bases: &FacetBasisChoice) -> Result<QMatrix> {
    if g.vectors() != cone.v || g.dim() + cone.d + 1 != cone.v {
        return Err(ModelError::Input(format!(
            "a {}x{} configuration does not fit a cone with {} rays in dimension {}",
            g.vectors(),
            g.dim(),
            cone.v,
            cone.d + 1
        )));
    }
    let p = if g.dim() == 0 {
        PluckerVector::from_ints(cone.v, cone.v, &[1])?
    } else {
        dual_plucker(&plucker(&g.matrix)?)
    };
    grv(&p, cone, bases)
}

/// Coordinates of the complement vanish on subsets inside facets and not on
/// facet extensions.
pub fn dual_gr_membership(q: &PluckerVector, cone: &AbstractCone, bases: &FacetBasisChoice) -> bool {
    if q.k + cone.d + 1 != cone.v || q.v != cone.v {
        return false;
    }
    let comp = |j: &Vec<usize>| -> Vec<usize> { (0..cone.v).filter(|i| !j.contains(i)).collect() };
    let ext = cone.facet_extensions(bases);
    ext.contained.iter().all(|j| q.get(&comp(j)).is_zero())
        && ext.extensions.iter().all(|j| !q.get(&comp(j)).is_zero())
}

/// Checks `rank(B[J^c]) = |J^c| - rank(S) + rank(S[J])` for every row subset
/// `J`, the rank form of matroid duality. Returns the first subset where it
/// fails.
pub fn dependence_duality_violation(s: &QMatrix, g: &GaleConfiguration) -> Option<Vec<usize>> {
    let v = s.rows();
    let total = s.rank();
    for k in 0..=v {
        for j in colex_subsets(v, k) {
            let comp: Vec<usize> = (0..v).filter(|i| !j.contains(i)).collect();
            let lhs = g.matrix.select_rows(&comp).rank();
            let rhs = comp.len() + s.select_rows(&j).rank() - total;
            if lhs != rhs {
                return Some(j);
            }
        }
    }
    None
}

/// Whether the rows of `m` indexed by `rows` are linearly dependent.
pub fn rows_dependent(m: &QMatrix, rows: &[usize]) -> bool {
    m.select_rows(rows).rank() < rows.len()
}
