//! Dense exact matrices over [`FieldScalar`] and fraction-free elimination.

use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::FieldScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldScalar>,
}

/// Reduced row echelon form together with the pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldScalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a `len x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, columns: &[Vec<FieldScalar>]) -> Self {
        let mut m = Self::zeros(len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), len, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldScalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<FieldScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &FieldScalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "inner dimensions");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += &(a * b);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Row echelon form by Bareiss' fraction-free elimination, followed by
    /// back substitution to the (unique) reduced form.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prev = FieldScalar::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let piv = m.get(r, c).clone();
            for i in r + 1..m.rows {
                let lead = m.get(i, c).clone();
                for j in c + 1..m.cols {
                    let top = m.get(r, j);
                    let cur = m.get(i, j);
                    if lead.is_zero() && cur.is_zero() {
                        continue;
                    }
                    let mut x = &piv * cur;
                    if !lead.is_zero() && !top.is_zero() {
                        x -= &(&lead * top);
                    }
                    let x = if prev.is_one() { x } else { &x / &prev };
                    m.set(i, j, x);
                }
                m.set(i, c, FieldScalar::zero());
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        // Back substitution: scale pivots to one and clear above.
        for (k, &c) in pivots.iter().enumerate().rev() {
            let inv = m.get(k, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(k, j);
                if !x.is_zero() {
                    let y = x * &inv;
                    m.set(k, j, y);
                }
            }
            for i in 0..k {
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let x = m.get(k, j);
                    if x.is_zero() {
                        continue;
                    }
                    let y = m.get(i, j) - &(&f * x);
                    m.set(i, j, y);
                }
            }
        }
        Echelon { rref: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : self * x = 0}`, in reduced echelon form.
    pub fn nullspace(&self) -> Vec<Vec<FieldScalar>> {
        let Echelon { rref, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let raw: Vec<Vec<FieldScalar>> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![FieldScalar::zero(); self.cols];
                x[f] = FieldScalar::one();
                for (k, &p) in pivots.iter().enumerate() {
                    x[p] = -rref.get(k, f);
                }
                x
            })
            .collect();
        reduced_basis(&raw)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, FieldScalar::one());
        }
        let Echelon { rref, pivots } = aug.echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, rref.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Canonical basis (nonzero rows of the reduced echelon form) of the span of
/// `vectors`. Empty input gives an empty basis.
pub fn reduced_basis(vectors: &[Vec<FieldScalar>]) -> Vec<Vec<FieldScalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    Matrix::from_rows(vectors.to_vec())
        .echelon()
        .rref
        .row_vectors()
}

pub fn span_rank(vectors: &[Vec<FieldScalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.to_vec()).rank()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<FieldScalar>], v: &[FieldScalar]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    span_rank(basis) == span_rank(&all)
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| FieldScalar::from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.nullspace();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn zero_and_identity_kernels() {
        assert_eq!(Matrix::zeros(5, 7).nullspace().len(), 7);
        assert!(Matrix::identity(6).nullspace().is_empty());
    }

    #[test]
    fn inverse_round_trip() {
        let m = int_matrix(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert!(int_matrix(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn rref_is_canonical() {
        let a = int_matrix(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = int_matrix(&[&[1, 2, 1], &[2, 1, -1]]);
        assert_eq!(a.echelon().rref, b.echelon().rref);
    }

    #[test]
    fn bareiss_handles_irrational_entries() {
        let s2 = FieldScalar::sqrt2();
        let one = FieldScalar::one();
        let m = Matrix::from_rows(vec![
            vec![s2.clone(), one.clone()],
            vec![FieldScalar::from_int(2), s2.clone()],
        ]);
        assert_eq!(m.rank(), 1);
        let m = Matrix::from_rows(vec![vec![s2.clone(), one.clone()], vec![one, s2]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn span_membership() {
        let basis = vec![
            vec![
                FieldScalar::from_int(1),
                FieldScalar::from_int(0),
                FieldScalar::from_int(1),
            ],
            vec![
                FieldScalar::from_int(0),
                FieldScalar::from_int(1),
                FieldScalar::from_int(1),
            ],
        ];
        let inside = vec![
            FieldScalar::from_int(2),
            FieldScalar::from_int(3),
            FieldScalar::from_int(5),
        ];
        let outside = vec![
            FieldScalar::from_int(0),
            FieldScalar::from_int(0),
            FieldScalar::from_int(1),
        ];
        assert!(in_span(&basis, &inside));
        assert!(!in_span(&basis, &outside));
    }
}
