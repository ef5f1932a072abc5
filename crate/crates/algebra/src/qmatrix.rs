use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::scalar::Scalar;

/// A dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::Shape("ragged rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from integer rows; panics on ragged input.
    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(AlgebraError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut out = QMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> QMatrix {
        let all: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &all)
    }

    pub fn select_cols(&self, cols: &[usize]) -> QMatrix {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, cols)
    }

    pub fn scale_column(&mut self, j: usize, c: &Scalar) {
        for i in 0..self.rows {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Gauss-Jordan elimination with the first nonzero pivot in each column.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space, one vector per free column in
    /// increasing order, with a 1 in that free position.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let e = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (r, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.matrix.get(r, f);
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `{ y : yᵀ A = 0 }`.
    pub fn left_kernel(&self) -> Vec<Vec<Scalar>> {
        self.transpose().kernel()
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(AlgebraError::Shape(format!("determinant of {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// True iff `v` lies in the column space.
    pub fn column_space_contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.rows);
        let mut rows = self.to_rows();
        for (row, x) in rows.iter_mut().zip(v) {
            row.push(x.clone());
        }
        let aug = QMatrix::from_rows(rows).expect("consistent shape");
        aug.rank() == self.rank()
    }

    /// True iff both matrices have the same column space.
    pub fn same_column_space(&self, other: &QMatrix) -> bool {
        if self.rows != other.rows {
            return false;
        }
        let r = self.rank();
        if r != other.rank() {
            return false;
        }
        let mut joined = self.to_rows();
        for (row, o) in joined.iter_mut().zip(other.to_rows()) {
            row.extend(o);
        }
        QMatrix::from_rows(joined).expect("consistent shape").rank() == r
    }
}

impl fmt::Debug for QMatrix {
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

    #[test]
    fn rref_kernel_det() {
        let m = QMatrix::from_ints(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        let col = QMatrix::from_rows(k.iter().map(|v| v.to_vec()).collect()).unwrap().transpose();
        assert!(m.mul(&col).unwrap().is_zero());
        assert_eq!(m.det().unwrap(), Scalar::zero());
        let a = QMatrix::from_ints(&[vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 1]]);
        assert_eq!(a.det().unwrap(), Scalar::one());
        let b = QMatrix::from_ints(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(b.det().unwrap(), Scalar::from_int(-1));
        assert!(QMatrix::zeros(2, 3).det().is_err());
    }

    #[test]
    fn column_spaces() {
        let a = QMatrix::from_ints(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b = QMatrix::from_ints(&[vec![2, 1], vec![2, -1], vec![4, 0]]);
        assert!(a.same_column_space(&b));
        assert!(a.column_space_contains(&[Scalar::from_int(3), Scalar::from_int(1), Scalar::from_int(4)]));
        assert!(!a.column_space_contains(&[Scalar::from_int(1), Scalar::from_int(1), Scalar::from_int(1)]));
    }
}
