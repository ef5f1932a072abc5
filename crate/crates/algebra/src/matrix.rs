use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::poly::Polynomial;
use crate::qmatrix::QMatrix;
use crate::ring::Ring;
use crate::scalar::Scalar;
use crate::subsets::colex_subsets;

/// A dense matrix of polynomials over one ring.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

/// A k×k minor with its row and column index sets (0-based, sorted).
#[derive(Clone, Debug)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Polynomial,
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        PolyMatrix { ring: ring.clone(), rows, cols, entries: vec![Polynomial::zero(ring); rows * cols] }
    }

    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::Shape("ragged rows".into()));
        }
        Ok(PolyMatrix { ring: ring.clone(), rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_numeric(ring: &Arc<Ring>, m: &QMatrix) -> Self {
        let mut out = Self::zeros(ring, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, Polynomial::constant(ring, m.get(i, j).clone()));
            }
        }
        out
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Moves every entry into `target` by variable name.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(|p| p.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { ring: target.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// Evaluates every entry at a point.
    pub fn eval(&self, point: &[Scalar]) -> QMatrix {
        let rows = (0..self.rows).map(|i| self.row(i).iter().map(|p| p.eval(point)).collect()).collect();
        QMatrix::from_rows(rows).expect("rectangular")
    }

    pub fn to_numeric(&self) -> Option<QMatrix> {
        let rows: Option<Vec<Vec<Scalar>>> =
            (0..self.rows).map(|i| self.row(i).iter().map(Polynomial::constant_value).collect()).collect();
        rows.map(|r| QMatrix::from_rows(r).expect("rectangular"))
    }

    pub fn det(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(AlgebraError::Shape(format!("determinant of {}x{} matrix", self.rows, self.cols)));
        }
        let rows: Vec<usize> = (0..self.rows).collect();
        Ok(DetCache::new(self).det(&rows, &rows))
    }

    /// All k×k minors, ordered colexicographically by (rows, cols) with the
    /// column set most significant.
    pub fn minors(&self, k: usize) -> Result<Vec<Minor>> {
        if k > self.rows || k > self.cols {
            return Err(AlgebraError::Shape(format!("{k}-minors of a {}x{} matrix", self.rows, self.cols)));
        }
        let mut cache = DetCache::new(self);
        let row_sets = colex_subsets(self.rows, k);
        let mut out = Vec::new();
        for cols in colex_subsets(self.cols, k) {
            for rows in &row_sets {
                let value = cache.det(rows, &cols);
                out.push(Minor { rows: rows.clone(), cols: cols.clone(), value });
            }
        }
        Ok(out)
    }

    /// Determinant of the submatrix on the given (ordered) rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
        if rows.len() != cols.len() {
            return Err(AlgebraError::Shape("non-square minor".into()));
        }
        self.submatrix(rows, cols).det()
    }

    /// Rank over the fraction field.
    ///
    /// The rank is found at pseudo-random integer points and then certified
    /// exactly: a nonzero symbolic minor of that size is exhibited.
    pub fn generic_rank(&self) -> usize {
        self.rank_witness().0.len()
    }

    /// Row and column index sets of a maximal nonsingular square submatrix,
    /// chosen greedily in index order at a generic point.
    pub fn rank_witness(&self) -> (Vec<usize>, Vec<usize>) {
        let nv = self.ring.len();
        let mut best: (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
        let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
        for _ in 0..3 {
            let point: Vec<Scalar> = (0..nv)
                .map(|_| {
                    seed ^= seed << 13;
                    seed ^= seed >> 7;
                    seed ^= seed << 17;
                    Scalar::from_int((seed % 1_000_003) as i64 + 2)
                })
                .collect();
            let num = self.eval(&point);
            let cols = num.rref().pivots;
            let rows = num.select_cols(&cols).transpose().rref().pivots;
            if cols.len() > best.1.len() {
                best = (rows, cols);
            }
        }
        best
    }

    /// Basis of the right kernel over the fraction field, returned as
    /// polynomial vectors via Cramer's rule (no denominators), each divided
    /// by its monomial and numeric content and signed so that its first
    /// nonzero entry has a positive leading coefficient.
    pub fn kernel(&self) -> Result<Vec<Vec<Polynomial>>> {
        let (rows, pivots) = self.rank_witness();
        let base = self.submatrix(&rows, &pivots).det()?;
        if base.is_zero() && !pivots.is_empty() {
            return Err(AlgebraError::Shape("rank witness is singular".into()));
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Polynomial::zero(&self.ring); self.cols];
            v[f] = if pivots.is_empty() { Polynomial::one(&self.ring) } else { base.clone() };
            for (k, &p) in pivots.iter().enumerate() {
                let mut cols = pivots.clone();
                cols[k] = f;
                v[p] = -&self.submatrix(&rows, &cols).det()?;
            }
            let v = clear_content(v);
            for i in 0..self.rows {
                let mut acc = Polynomial::zero(&self.ring);
                for (j, vj) in v.iter().enumerate() {
                    acc = &acc + &(self.get(i, j) * vj);
                }
                if !acc.is_zero() {
                    return Err(AlgebraError::Shape("kernel certification failed".into()));
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Divides a polynomial vector by its monomial gcd and integer content and
/// makes the first nonzero entry's leading coefficient positive.
pub fn clear_content(v: Vec<Polynomial>) -> Vec<Polynomial> {
    let nonzero: Vec<&Polynomial> = v.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return v;
    };
    let mut mono = first.monomial_content();
    for p in &nonzero {
        mono = mono.gcd(&p.monomial_content());
    }
    let coeffs: Vec<Scalar> = nonzero.iter().flat_map(|p| p.terms().iter().map(|(_, c)| c.clone())).collect();
    let (num, den) = Scalar::integer_content(&coeffs);
    let mut factor = Scalar::from_big(num_rational::BigRational::new(den, num));
    if first.terms()[0].1.is_negative() {
        factor = -factor;
    }
    v.into_iter().map(|p| p.div_monomial(&mono).scale(&factor)).collect()
}

/// Memoized cofactor expansion along the sparsest remaining line.
struct DetCache<'a> {
    m: &'a PolyMatrix,
    memo: HashMap<(Vec<usize>, Vec<usize>), Polynomial>,
    numeric: Option<QMatrix>,
}

impl<'a> DetCache<'a> {
    fn new(m: &'a PolyMatrix) -> Self {
        DetCache { m, memo: HashMap::new(), numeric: m.to_numeric() }
    }

    fn det(&mut self, rows: &[usize], cols: &[usize]) -> Polynomial {
        let ring = self.m.ring.clone();
        if let Some(q) = &self.numeric {
            let d = q.submatrix(rows, cols).det().expect("square");
            return Polynomial::constant(&ring, d);
        }
        self.expand(rows, cols)
    }

    fn expand(&mut self, rows: &[usize], cols: &[usize]) -> Polynomial {
        let n = rows.len();
        let ring = self.m.ring.clone();
        match n {
            0 => return Polynomial::one(&ring),
            1 => return self.m.get(rows[0], cols[0]).clone(),
            2 => {
                let a = self.m.get(rows[0], cols[0]);
                let b = self.m.get(rows[0], cols[1]);
                let c = self.m.get(rows[1], cols[0]);
                let d = self.m.get(rows[1], cols[1]);
                return &(a * d) - &(b * c);
            }
            _ => {}
        }
        let key = (rows.to_vec(), cols.to_vec());
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let row_counts: Vec<usize> =
            rows.iter().map(|&i| cols.iter().filter(|&&j| !self.m.get(i, j).is_zero()).count()).collect();
        let col_counts: Vec<usize> =
            cols.iter().map(|&j| rows.iter().filter(|&&i| !self.m.get(i, j).is_zero()).count()).collect();
        let (ri, rmin) = row_counts.iter().enumerate().min_by_key(|(_, c)| **c).map(|(i, c)| (i, *c)).unwrap();
        let (ci, cmin) = col_counts.iter().enumerate().min_by_key(|(_, c)| **c).map(|(i, c)| (i, *c)).unwrap();
        let mut total = Polynomial::zero(&ring);
        if rmin.min(cmin) > 0 {
            if rmin <= cmin {
                let sub_rows: Vec<usize> = rows.iter().enumerate().filter(|(k, _)| *k != ri).map(|(_, &r)| r).collect();
                for (b, &j) in cols.iter().enumerate() {
                    let e = self.m.get(rows[ri], j);
                    if e.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols.iter().enumerate().filter(|(k, _)| *k != b).map(|(_, &c)| c).collect();
                    let minor = self.expand(&sub_rows, &sub_cols);
                    let term = e * &minor;
                    total = if (ri + b) % 2 == 0 { &total + &term } else { &total - &term };
                }
            } else {
                let sub_cols: Vec<usize> = cols.iter().enumerate().filter(|(k, _)| *k != ci).map(|(_, &c)| c).collect();
                for (a, &i) in rows.iter().enumerate() {
                    let e = self.m.get(i, cols[ci]);
                    if e.is_zero() {
                        continue;
                    }
                    let sub_rows: Vec<usize> = rows.iter().enumerate().filter(|(k, _)| *k != a).map(|(_, &r)| r).collect();
                    let minor = self.expand(&sub_rows, &sub_cols);
                    let term = e * &minor;
                    total = if (a + ci) % 2 == 0 { &total + &term } else { &total - &term };
                }
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(ring: &Arc<Ring>, rows: &[&[&str]]) -> PolyMatrix {
        let rows = rows.iter().map(|r| r.iter().map(|t| Polynomial::parse(ring, t).unwrap()).collect()).collect();
        PolyMatrix::from_rows(ring, rows).unwrap()
    }

    #[test]
    fn small_determinants() {
        let r = Ring::new(["x1", "x2", "x3", "x4"]).unwrap();
        let m = sym(&r, &[&["x1", "x2"], &["x3", "x4"]]);
        assert_eq!(m.det().unwrap().to_string(), "-x2*x3 + x1*x4");
        let id = sym(&r, &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        assert_eq!(id.det().unwrap().to_string(), "1");
        let t = sym(&r, &[&["1", "0", "0"], &["1", "1", "0"], &["1", "2", "1"]]);
        assert_eq!(t.det().unwrap().to_string(), "1");
        assert!(sym(&r, &[&["x1", "x2"]]).det().is_err());
    }

    #[test]
    fn minor_listing() {
        let r = Ring::new(["a", "b", "c", "d"]).unwrap();
        let m = sym(&r, &[&["a", "b"], &["c", "d"]]);
        let ones: Vec<String> = m.minors(1).unwrap().iter().map(|m| m.value.to_string()).collect();
        assert_eq!(ones, ["a", "c", "b", "d"]);
        assert!(m.minors(3).is_err());
    }

    #[test]
    fn cramer_kernel() {
        let r = Ring::new(["a", "b"]).unwrap();
        let m = sym(&r, &[&["1", "a", "0", "1"], &["1", "0", "0", "0"]]);
        let k = m.kernel().unwrap();
        let shown: Vec<Vec<String>> = k.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
        assert_eq!(shown, vec![vec!["0", "0", "1", "0"], vec!["0", "1", "0", "-a"]]);
    }
}
