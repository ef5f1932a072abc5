#![allow(dead_code)]

pub mod properties;
pub mod realizations;

use std::path::PathBuf;
use std::sync::Arc;

use slackspace::io::MatrixJson;
use slackspace::pipeline::{CheckJob, ConeSource};
use slackspace::{AbstractCone, ConeJson};
use slackspace_algebra::{Ideal, PolyMatrix, Polynomial, Ring};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn cone(name: &str) -> Arc<AbstractCone> {
    let j: ConeJson = serde_json::from_str(&read_fixture(name)).expect("cone json");
    Arc::new(AbstractCone::from_json(&j).expect("valid cone"))
}

/// A check job and the cone it refers to.
pub fn job(name: &str) -> (Arc<AbstractCone>, CheckJob) {
    let job: CheckJob = serde_json::from_str(&read_fixture(name)).expect("job json");
    let c = match job.cone.clone() {
        Some(ConeSource::Path(p)) => cone(&p),
        Some(ConeSource::Inline(j)) => Arc::new(AbstractCone::from_json(&j).unwrap()),
        None => panic!("{name} has no cone"),
    };
    (c, job)
}

pub fn job_matrix(job: &CheckJob) -> PolyMatrix {
    job.matrix.as_ref().expect("job carries a matrix").to_poly().unwrap()
}

/// 1-based indices to 0-based.
pub fn z(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i - 1).collect()
}

pub fn x_names(v: &[usize]) -> Vec<String> {
    v.iter().map(|k| format!("x_{k}")).collect()
}

pub fn poly(ring: &Arc<Ring>, s: &str) -> Polynomial {
    Polynomial::parse(ring, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn ideal(ring: &Arc<Ring>, gens: &[&str]) -> Ideal {
    Ideal::new(ring, gens.iter().map(|g| poly(ring, g)))
}

/// Parses a displayed matrix over the ring of `like`.
pub fn displayed(ring: &Arc<Ring>, rows: &[&[&str]]) -> PolyMatrix {
    let rows = rows.iter().map(|r| r.iter().map(|e| poly(ring, e)).collect()).collect();
    PolyMatrix::from_rows(ring, rows).unwrap()
}

pub fn matrix_text(rows: &[&[&str]]) -> MatrixJson {
    MatrixJson {
        rows: rows.len(),
        cols: rows[0].len(),
        entries: rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
    }
}

/// `a = ±b` entrywise on each column, with one sign per column.
pub fn equal_up_to_column_signs(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    (0..a.cols()).all(|j| {
        let col_a = a.column(j);
        let col_b = b.column(j);
        col_a == col_b || col_a.iter().zip(&col_b).all(|(x, y)| *x == -y)
    })
}

/// `a` equals `b` after renaming variables bijectively, position by
/// position; every nonconstant entry must be a single variable in both.
pub fn equal_up_to_renaming(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    use std::collections::BTreeMap;
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let mut fwd: BTreeMap<String, String> = BTreeMap::new();
    let mut back: BTreeMap<String, String> = BTreeMap::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (x, y) = (a.get(i, j), b.get(i, j));
            if x.is_constant() || y.is_constant() {
                if x.constant_value() != y.constant_value() || x.is_zero() != y.is_zero() {
                    return false;
                }
                continue;
            }
            let (sx, sy) = (x.to_string(), y.to_string());
            if x.variables().len() != 1 || y.variables().len() != 1 || x.total_degree() != 1 || y.total_degree() != 1 {
                return false;
            }
            if fwd.entry(sx.clone()).or_insert_with(|| sy.clone()) != &sy || back.entry(sy).or_insert(sx) != &x.to_string() {
                return false;
            }
        }
    }
    true
}
