//! JSON forms of matrices, V/H data and Plücker vectors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use slackspace_algebra::parse::identifiers;
use slackspace_algebra::{PolyMatrix, Polynomial, QMatrix, Ring, Scalar};

use crate::error::{ModelError, Result};
use crate::grassmannian::PluckerVector;

/// `{"rows": r, "cols": c, "entries": [[...]]}` with entries as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    fn check_shape(&self) -> Result<()> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(ModelError::Input(format!("entries do not form a {}x{} matrix", self.rows, self.cols)));
        }
        Ok(())
    }

    pub fn from_numeric(m: &QMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        }
    }

    pub fn from_poly(m: &PolyMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect(),
        }
    }

    pub fn to_numeric(&self) -> Result<QMatrix> {
        self.check_shape()?;
        let rows = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.trim().parse::<Scalar>().map_err(|_| ModelError::Input(format!("not a rational: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QMatrix::from_rows(rows)?)
    }

    /// Variables appearing in the entries, in natural order.
    pub fn variables(&self) -> Result<Vec<String>> {
        let mut names = BTreeSet::new();
        for e in self.entries.iter().flatten() {
            names.extend(identifiers(e)?);
        }
        let mut names: Vec<String> = names.into_iter().collect();
        names.sort_by(|a, b| natural_cmp(a, b));
        Ok(names)
    }

    /// Parses the entries over their own variables.
    pub fn to_poly(&self) -> Result<PolyMatrix> {
        let ring = Ring::new(self.variables()?)?;
        self.to_poly_in(&ring)
    }

    pub fn to_poly_in(&self, ring: &Arc<Ring>) -> Result<PolyMatrix> {
        self.check_shape()?;
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| Polynomial::parse(ring, e)).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(PolyMatrix::from_rows(ring, rows)?)
    }
}

/// Orders `x_2` before `x_10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> Vec<(String, Option<u64>)> {
        s.split('_').map(|p| (p.to_string(), p.parse().ok())).collect()
    }
    let (pa, pb) = (split(a), split(b));
    for (x, y) in pa.iter().zip(&pb) {
        let o = match (x.1, y.1) {
            (Some(m), Some(n)) => m.cmp(&n),
            _ => x.0.cmp(&y.0),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    pa.len().cmp(&pb.len())
}

/// Vertices of a polytope and its facet inequalities `W x <= w`, either
/// part optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VhJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<Scalar>>>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub normals: Option<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<Scalar>>,
}

impl VhJson {
    pub fn vertex_matrix(&self) -> Result<QMatrix> {
        let v = self.vertices.clone().ok_or_else(|| ModelError::Input("missing \"vertices\"".into()))?;
        Ok(QMatrix::from_rows(v)?)
    }

    pub fn inequalities(&self) -> Result<(QMatrix, Vec<Scalar>)> {
        let w_mat = self.normals.clone().ok_or_else(|| ModelError::Input("missing \"W\"".into()))?;
        let w = self.w.clone().ok_or_else(|| ModelError::Input("missing \"w\"".into()))?;
        if w_mat.len() != w.len() {
            return Err(ModelError::Input("\"W\" and \"w\" differ in length".into()));
        }
        Ok((QMatrix::from_rows(w_mat)?, w))
    }
}

/// Plücker vector as `{"k": k, "v": v, "coords": {"123": "1", ...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluckerJson {
    pub k: usize,
    pub v: usize,
    pub coords: BTreeMap<String, String>,
}

impl From<&PluckerVector> for PluckerJson {
    fn from(p: &PluckerVector) -> Self {
        PluckerJson { k: p.k, v: p.v, coords: p.to_map() }
    }
}

impl PluckerJson {
    pub fn to_vector(&self) -> Result<PluckerVector> {
        PluckerVector::from_map(self.k, self.v, &self.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v = vec!["x_10", "y_0", "x_2", "x_1"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, ["x_1", "x_2", "x_10", "y_0"]);
    }

    #[test]
    fn matrix_round_trip() {
        let j = MatrixJson {
            rows: 2,
            cols: 2,
            entries: vec![vec!["x_10".into(), "0".into()], vec!["1".into(), "x_2*x_10 - 1/2".into()]],
        };
        let m = j.to_poly().unwrap();
        assert_eq!(m.ring().names(), ["x_2", "x_10"]);
        assert_eq!(MatrixJson::from_poly(&m), j);
        assert!(j.to_numeric().is_err());
        let q = MatrixJson { rows: 1, cols: 2, entries: vec![vec!["3/4".into(), "-2".into()]] };
        assert_eq!(MatrixJson::from_numeric(&q.to_numeric().unwrap()), q);
    }
}
