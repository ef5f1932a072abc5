//! Reduced and super-reduced slack matrices and the reconstruction of the
//! missing columns and rows.

use std::collections::BTreeMap;
use std::sync::Arc;

use slackspace_algebra::subsets::colex_subsets;
use slackspace_algebra::{Ideal, PolyMatrix, Polynomial, ResourceLimits};

use crate::cone::{find_flag_in_pattern, AbstractCone, Flag};
use crate::error::{ModelError, Result};
use crate::slack::{shrink_ring, slack_ideal, symbolic_slack, MinorStrategy, ScalingNormalization, SymbolicSlackMatrix};

/// Columns of a slack matrix on a facet subset containing a flag.
#[derive(Clone, Debug)]
pub struct ReducedSlackMatrix {
    pub cone: Arc<AbstractCone>,
    /// Facet indices of the columns, in order.
    pub columns: Vec<usize>,
    pub matrix: PolyMatrix,
}

/// A reconstructed v×f matrix.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub matrix: PolyMatrix,
    /// Facets (global indices) used as the flag columns.
    pub flag_columns: Vec<usize>,
    /// Rows spanning each filled facet.
    pub bases: BTreeMap<usize, Vec<usize>>,
    /// `(row, facet)` pairs of filled columns where an incident row did not
    /// come out identically zero.
    pub incident_nonzero: Vec<(usize, usize)>,
}

/// The minors used to fill the missing columns; `K_F` is generated by their
/// product.
#[derive(Clone, Debug)]
pub struct KfIdeal {
    /// `(row, facet, minor)`.
    pub factors: Vec<(usize, usize, Polynomial)>,
}

impl KfIdeal {
    pub fn from_reconstruction(rec: &Reconstruction, cone: &AbstractCone) -> Self {
        let mut factors = Vec::new();
        for &j in rec.bases.keys() {
            for i in (0..cone.v).filter(|&i| !cone.incident(i, j)) {
                factors.push((i, j, rec.matrix.get(i, j).clone()));
            }
        }
        KfIdeal { factors }
    }

    pub fn generator(&self, ring: &Arc<slackspace_algebra::Ring>) -> Polynomial {
        self.factors.iter().fold(Polynomial::one(ring), |acc, (_, _, f)| &acc * f)
    }

    pub fn ideal(&self, ring: &Arc<slackspace_algebra::Ring>) -> Ideal {
        Ideal::new(ring, [self.generator(ring)])
    }

    /// Distinct factors up to scalar and monomial multiples, skipping
    /// monomials.
    pub fn essential_factors(&self) -> Vec<Polynomial> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for (_, _, f) in &self.factors {
            if f.is_zero() || f.is_monomial() {
                continue;
            }
            let p = f.div_monomial(&f.monomial_content()).primitive();
            let key = p.to_string();
            let neg = (-&p).to_string();
            if !seen.contains(&neg) && seen.insert(key) {
                out.push(p);
            }
        }
        out
    }
}

/// Outcome of saturating `I_F` by the filling minors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionClosure {
    SaturationStable,
    DropsComponents,
    /// Saturating by this factor gives the unit ideal.
    Trivial(Polynomial),
}

/// Rows kept after super-reduction, with the scaled matrix on them.
#[derive(Clone, Debug)]
pub struct SuperReduced {
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
    /// Kept rows forming a flag; removed rows are rebuilt from their span.
    pub flag_rows: Vec<usize>,
    pub matrix: PolyMatrix,
    pub normalization: ScalingNormalization,
}

/// An entry on the support that vanishes identically, or modulo an ideal.
#[derive(Clone, Debug)]
pub struct ExtraZero {
    pub row: usize,
    pub facet: usize,
    pub entry: Polynomial,
    pub modulo_ideal: bool,
}

impl ReducedSlackMatrix {
    /// Symbolic reduced matrix on `columns`, which must contain a flag and
    /// leave out only simplicial facets.
    pub fn new(cone: &Arc<AbstractCone>, columns: &[usize]) -> Result<Self> {
        if let Some(why) = cone.reduction_violation(columns) {
            return Err(ModelError::Reduction(why));
        }
        let full = symbolic_slack(cone);
        let sub = full.select_columns(columns);
        Ok(ReducedSlackMatrix { cone: cone.clone(), columns: columns.to_vec(), matrix: sub.matrix })
    }

    /// Wraps an existing v×|F| matrix (numeric, scaled or row-reconstructed).
    pub fn from_matrix(cone: &Arc<AbstractCone>, columns: &[usize], matrix: PolyMatrix) -> Result<Self> {
        if matrix.rows() != cone.v || matrix.cols() != columns.len() {
            return Err(ModelError::Input(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                cone.v,
                columns.len()
            )));
        }
        if let Some(why) = cone.reduction_violation(columns) {
            return Err(ModelError::Reduction(why));
        }
        Ok(ReducedSlackMatrix { cone: cone.clone(), columns: columns.to_vec(), matrix })
    }

    fn symbolic(&self) -> SymbolicSlackMatrix {
        SymbolicSlackMatrix { cone: self.cone.clone(), columns: self.columns.clone(), matrix: self.matrix.clone() }
    }

    pub fn normalize(&self, norm: &ScalingNormalization) -> Result<Self> {
        Ok(self.with_matrix(self.symbolic().normalize(norm)?.matrix))
    }

    pub fn normalize_variables(&self, names: &[String]) -> Result<(Self, ScalingNormalization)> {
        let (m, n) = self.symbolic().normalize_variables(names)?;
        Ok((self.with_matrix(m.matrix), n))
    }

    pub fn scale_to_ones(&self) -> Result<(Self, ScalingNormalization)> {
        let (m, n) = self.symbolic().scale_to_ones()?;
        Ok((self.with_matrix(m.matrix), n))
    }

    fn with_matrix(&self, matrix: PolyMatrix) -> Self {
        ReducedSlackMatrix { cone: self.cone.clone(), columns: self.columns.clone(), matrix }
    }

    /// `I_F`: (d+2)-minors saturated by all variables.
    pub fn slack_ideal(&self, limits: &ResourceLimits) -> Result<Ideal> {
        slack_ideal(&self.matrix, self.cone.d, MinorStrategy::Bordered, limits)
    }

    /// The flag found inside the columns (global facet indices).
    pub fn default_flag(&self) -> Result<Flag> {
        self.cone.find_flag_within(&self.columns)
    }

    fn flag_positions(&self, flag_columns: Option<&[usize]>) -> Result<(Vec<usize>, Vec<usize>)> {
        let global = match flag_columns {
            Some(f) => f.to_vec(),
            None => self.default_flag()?.facets,
        };
        let pos = global
            .iter()
            .map(|g| {
                self.columns.iter().position(|c| c == g).ok_or_else(|| {
                    ModelError::InvalidFlag(format!("facet {} is not among the reduced columns", g + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if pos.len() != self.cone.d + 1 {
            return Err(ModelError::InvalidFlag(format!("a flag needs {} facets", self.cone.d + 1)));
        }
        let rows: Vec<usize> = (0..self.matrix.rows()).collect();
        if self.matrix.submatrix(&rows, &pos).generic_rank() < pos.len() {
            return Err(ModelError::InvalidFlag("the flag columns are rank deficient".into()));
        }
        Ok((global, pos))
    }

    /// Rows spanning facet `j` on the flag columns: the facet itself when
    /// simplicial, otherwise the first `d`-subset of full rank.
    fn facet_basis(&self, j: usize, pos: &[usize], overrides: &BTreeMap<usize, Vec<usize>>) -> Result<Vec<usize>> {
        if let Some(b) = overrides.get(&j) {
            return Ok(b.clone());
        }
        let facet = self.cone.facet(j);
        let d = self.cone.d;
        if facet.len() == d {
            return Ok(facet.to_vec());
        }
        let mut candidates = colex_subsets(facet.len(), d);
        candidates.sort();
        for idx in candidates {
            let rows: Vec<usize> = idx.iter().map(|&k| facet[k]).collect();
            if self.matrix.submatrix(&rows, pos).generic_rank() == d {
                return Ok(rows);
            }
        }
        Err(ModelError::InvalidBasis(format!("facet {} has no spanning {d}-subset on the flag", j + 1)))
    }

    /// Fills every facet outside the reduced columns: entry `(i, F)` is the
    /// minor of rows `(J_F..., i)` on the flag columns.
    pub fn reconstruct_columns(&self, flag_columns: Option<&[usize]>) -> Result<Reconstruction> {
        self.reconstruct_columns_with(flag_columns, &BTreeMap::new())
    }

    pub fn reconstruct_columns_with(
        &self,
        flag_columns: Option<&[usize]>,
        basis_overrides: &BTreeMap<usize, Vec<usize>>,
    ) -> Result<Reconstruction> {
        let (global, pos) = self.flag_positions(flag_columns)?;
        let cone = &self.cone;
        let ring = self.matrix.ring().clone();
        let mut out = PolyMatrix::zeros(&ring, cone.v, cone.num_facets());
        for (k, &j) in self.columns.iter().enumerate() {
            for i in 0..cone.v {
                out.set(i, j, self.matrix.get(i, k).clone());
            }
        }
        let mut bases = BTreeMap::new();
        let mut incident_nonzero = Vec::new();
        for j in (0..cone.num_facets()).filter(|j| !self.columns.contains(j)) {
            let basis = self.facet_basis(j, &pos, basis_overrides)?;
            for i in (0..cone.v).filter(|i| !basis.contains(i)) {
                let mut rows = basis.clone();
                rows.push(i);
                let val = self.matrix.minor(&rows, &pos)?;
                if cone.incident(i, j) {
                    if !val.is_zero() {
                        incident_nonzero.push((i, j));
                    }
                } else {
                    out.set(i, j, val);
                }
            }
            bases.insert(j, basis);
        }
        Ok(Reconstruction { matrix: out, flag_columns: global, bases, incident_nonzero })
    }

    /// The filling minors of every missing facet at every row off it.
    pub fn kf_ideal(&self, flag_columns: Option<&[usize]>) -> Result<KfIdeal> {
        let rec = self.reconstruct_columns(flag_columns)?;
        Ok(KfIdeal::from_reconstruction(&rec, &self.cone))
    }

    /// Keeps only the rows in `keep` (default: greedy selection), then
    /// scales, either along the default spanning tree or by setting the
    /// named variables to one.
    pub fn super_reduce(&self, keep: Option<&[usize]>, ones: Option<&[String]>) -> Result<SuperReduced> {
        let kept: Vec<usize> = match keep {
            Some(k) => {
                let mut k = k.to_vec();
                k.sort_unstable();
                if let Some(why) = self.cone.super_reduction_violation(&self.columns, &k) {
                    return Err(ModelError::Reduction(why));
                }
                k
            }
            None => self.cone.super_reduction_rows(&self.columns).kept,
        };
        let removed: Vec<usize> = (0..self.cone.v).filter(|r| !kept.contains(r)).collect();
        let pattern = |i: usize, j: usize| self.cone.incident(i, j);
        let mut flag_rows = find_flag_in_pattern(&pattern, &kept, &self.columns, self.cone.d + 1)
            .ok_or_else(|| ModelError::Reduction("kept rows contain no flag".into()))?
            .vertices;
        flag_rows.sort_unstable();
        let cols: Vec<usize> = (0..self.columns.len()).collect();
        let sub = shrink_ring(&self.matrix.submatrix(&kept, &cols));
        let sym = SymbolicSlackMatrix { cone: self.cone.clone(), columns: self.columns.clone(), matrix: sub };
        let (scaled, normalization) = match ones {
            Some(names) => sym.normalize_variables(names)?,
            None => sym.scale_to_ones()?,
        };
        Ok(SuperReduced { kept, removed, flag_rows, matrix: scaled.matrix, normalization })
    }

    /// Fills the removed rows from the left kernel of the zero columns of
    /// `S_G` restricted to its flag rows. A kernel of dimension one gives the row directly; larger
    /// kernels get fresh parameters `y_0, y_1, ...`, then `z_...` for the
    /// next such row, and so on.
    pub fn reconstruct_rows(&self, sg: &SuperReduced) -> Result<ReducedSlackMatrix> {
        self.reconstruct_rows_with(sg, None)
    }

    /// As [`Self::reconstruct_rows`], spanning the removed rows by
    /// `flag_rows` (global vertex indices) instead of the stored flag.
    pub fn reconstruct_rows_with(&self, sg: &SuperReduced, flag_rows: Option<&[usize]>) -> Result<ReducedSlackMatrix> {
        let cone = &self.cone;
        let kept_cols: Vec<usize> = (0..sg.matrix.cols()).collect();
        let flag = flag_rows.unwrap_or(&sg.flag_rows);
        let kept_rows: Vec<usize> = flag
            .iter()
            .map(|r| {
                sg.kept.iter().position(|k| k == r).ok_or_else(|| {
                    ModelError::InvalidFlag(format!("vertex {} is not among the kept rows", r + 1))
                })
            })
            .collect::<Result<_>>()?;
        if kept_rows.len() != cone.d + 1 || sg.matrix.submatrix(&kept_rows, &kept_cols).generic_rank() < cone.d + 1 {
            return Err(ModelError::InvalidFlag("the flag rows must be d+1 independent rows".into()));
        }
        let mut kernels = Vec::new();
        for &r in &sg.removed {
            let zeros: Vec<usize> = (0..self.columns.len()).filter(|&k| cone.incident(r, self.columns[k])).collect();
            let a = sg.matrix.submatrix(&kept_rows, &zeros).transpose();
            let ker = if zeros.is_empty() {
                (0..kept_rows.len())
                    .map(|i| {
                        (0..kept_rows.len())
                            .map(|j| if i == j { Polynomial::one(sg.matrix.ring()) } else { Polynomial::zero(sg.matrix.ring()) })
                            .collect()
                    })
                    .collect()
            } else {
                a.kernel()?
            };
            if ker.is_empty() {
                return Err(ModelError::ReconstructionImpossible(format!("row {} has a trivial kernel", r + 1)));
            }
            kernels.push((r, ker));
        }
        let stems = ["y", "z", "w", "u", "s", "r", "q"];
        let mut params: Vec<String> = Vec::new();
        let mut row_params: Vec<Vec<String>> = Vec::new();
        let mut next = 0;
        for (_, ker) in &kernels {
            if ker.len() == 1 {
                row_params.push(Vec::new());
                continue;
            }
            let stem = stems.get(next).map(|s| s.to_string()).unwrap_or_else(|| format!("t{next}"));
            next += 1;
            let names: Vec<String> = (0..ker.len()).map(|k| format!("{stem}_{k}")).collect();
            params.extend(names.iter().cloned());
            row_params.push(names);
        }
        let base_ring = sg.matrix.ring().clone();
        let ring = base_ring.extended(params.iter().cloned())?;
        let sgm = sg.matrix.embed(&ring)?;
        let mut out = PolyMatrix::zeros(&ring, cone.v, self.columns.len());
        for (k, &r) in sg.kept.iter().enumerate() {
            for c in &kept_cols {
                out.set(r, *c, sgm.get(k, *c).clone());
            }
        }
        for ((r, ker), names) in kernels.iter().zip(&row_params) {
            for c in &kept_cols {
                let mut acc = Polynomial::zero(&ring);
                for (t, vec) in ker.iter().enumerate() {
                    let coef = if names.is_empty() { Polynomial::one(&ring) } else { Polynomial::named(&ring, &names[t]) };
                    let mut dot = Polynomial::zero(&ring);
                    for (k, vk) in vec.iter().enumerate() {
                        dot = &dot + &(&vk.embed(&ring)? * sgm.get(kept_rows[k], *c));
                    }
                    acc = &acc + &(&coef * &dot);
                }
                out.set(*r, *c, acc);
            }
        }
        Ok(ReducedSlackMatrix { cone: cone.clone(), columns: self.columns.clone(), matrix: out })
    }
}

/// Saturates `i_f` by each essential filling minor in turn.
pub fn projection_closure_test(i_f: &Ideal, kf: &KfIdeal, limits: &ResourceLimits) -> Result<ProjectionClosure> {
    if i_f.is_zero_ideal() {
        return Ok(ProjectionClosure::SaturationStable);
    }
    let mut stable = true;
    for f in kf.essential_factors() {
        let f = f.embed(i_f.ring())?;
        let sat = i_f.saturate(&f, limits)?;
        if sat.is_trivial(limits)? {
            return Ok(ProjectionClosure::Trivial(f));
        }
        if stable && !i_f.contains_ideal(&sat, limits)? {
            stable = false;
        }
    }
    Ok(if stable { ProjectionClosure::SaturationStable } else { ProjectionClosure::DropsComponents })
}

/// Support positions whose entry vanishes: identically, or (when `ideal` is
/// given) modulo it.
pub fn detect_extra_zeros(
    m: &PolyMatrix,
    cone: &AbstractCone,
    ideal: Option<&Ideal>,
    limits: &ResourceLimits,
) -> Result<Vec<ExtraZero>> {
    let basis = match ideal {
        Some(i) if !i.is_zero_ideal() => Some(i.embed(m.ring())?.basis(limits)?),
        _ => None,
    };
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if cone.incident(i, j) {
                continue;
            }
            let e = m.get(i, j);
            if e.is_zero() {
                out.push(ExtraZero { row: i, facet: j, entry: e.clone(), modulo_ideal: false });
            } else if let Some(gb) = &basis {
                if gb.reduce(e).is_zero() {
                    out.push(ExtraZero { row: i, facet: j, entry: e.clone(), modulo_ideal: true });
                }
            }
        }
    }
    Ok(out)
}
