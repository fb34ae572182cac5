use super::{rat_from_string, rat_int, rat_to_string, Rat};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense row-major matrix over the rationals. Zero-sized shapes (0×n, n×0)
/// are legal and show up whenever a bundle has an empty F- or G-part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer literal helper, used heavily in tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix::from_fn(nrows, ncols, |r, c| rat_int(rows[r][c]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn row(&self, r: usize) -> Vec<Rat> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    /// Column c as an n×1 matrix.
    pub fn col_matrix(&self, c: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |r, _| self.at(r, c).clone())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(r, c) + a * b;
                    out.set(r, c, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} cols, vector has {} entries",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.at(r, c) * &v[c])
                    .fold(Rat::zero(), |acc, x| acc + x)
            })
            .collect())
    }

    /// Horizontal concatenation [A | B | ...].
    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::DimensionMismatch("hstack row mismatch".into()));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zero(rows, cols);
        let mut off = 0;
        for m in parts {
            for r in 0..rows {
                for c in 0..m.cols {
                    out.set(r, off + c, m.at(r, c).clone());
                }
            }
            off += m.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if parts.iter().any(|m| m.cols != cols) {
            return Err(Error::DimensionMismatch("vstack col mismatch".into()));
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zero(rows, cols);
        let mut off = 0;
        for m in parts {
            for r in 0..m.rows {
                for c in 0..cols {
                    out.set(off + r, c, m.at(r, c).clone());
                }
            }
            off += m.rows;
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            self.at(rows[r], cols[c]).clone()
        })
    }

    /// Selection matrix picking the listed rows: S·v = v restricted to `rows`.
    pub fn row_selector(ambient: usize, rows: &[usize]) -> Matrix {
        let mut m = Matrix::zero(rows.len(), ambient);
        for (k, &r) in rows.iter().enumerate() {
            m.set(k, r, Rat::one());
        }
        m
    }

    /// Embedding matrix placing coordinate k at ambient row `rows[k]`.
    pub fn row_embedder(ambient: usize, rows: &[usize]) -> Matrix {
        Matrix::row_selector(ambient, rows).transpose()
    }

    /// Reduced row-echelon form with first-nonzero pivoting.
    /// Returns (rref, pivot column indices, rank).
    pub fn rref(&self) -> (Matrix, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let pivot_row = (row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let Some(p) = pivot_row else { continue };
            if p != row {
                for c in 0..m.cols {
                    let a = m.at(row, c).clone();
                    let b = m.at(p, c).clone();
                    m.set(row, c, b);
                    m.set(p, c, a);
                }
            }
            let inv = Rat::one() / m.at(row, col).clone();
            for c in col..m.cols {
                let v = m.at(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c) - &factor * m.at(row, c);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        (m, pivots, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().2
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(n)])?;
        let (red, pivots, rank) = aug.rref();
        if rank != n || pivots.iter().take(n).ne((0..n).collect::<Vec<_>>().iter()) {
            return Err(Error::NotInvertible);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(red.submatrix(&rows, &cols))
    }

    /// One particular solution X of self·X = rhs, or None if inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} vs {} rows",
                self.rows, rhs.rows
            )));
        }
        let aug = Matrix::hstack(&[self, rhs])?;
        let (red, pivots, _) = aug.rref();
        // any pivot in the rhs block means inconsistency
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zero(self.cols, rhs.cols);
        for (k, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, red.at(k, self.cols + c).clone());
            }
        }
        Ok(Some(x))
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", rat_to_string(self.at(r, c)))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// Matrices interchange as row-major nested arrays of rational strings.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| rat_to_string(self.at(r, c))).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(deserializer)?;
        let parsed: std::result::Result<Vec<Vec<Rat>>, _> = rows
            .iter()
            .map(|r| r.iter().map(|s| rat_from_string(s)).collect())
            .collect();
        let parsed = parsed.map_err(|e| D::Error::custom(e.to_string()))?;
        Matrix::from_rows(parsed).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    #[test]
    fn rref_rank_one() {
        let m = Matrix::from_i64(&[&[2, 4], &[1, 2]]);
        let (red, pivots, rank) = m.rref();
        assert_eq!(red, Matrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(pivots, vec![0]);
        assert_eq!(rank, 1);
    }

    #[test]
    fn rref_identity_fixed_point() {
        let id = Matrix::identity(3);
        let (red, pivots, rank) = id.rref();
        assert_eq!(red, id);
        assert_eq!(pivots, vec![0, 1, 2]);
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_with_fractions() {
        let m = Matrix::from_rows(vec![
            vec![rat(1, 2), rat_int(1)],
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(0), rat_int(5)],
        ])
        .unwrap();
        // by hand: rows (1/2,1),(1,2) are dependent, (0,5) is independent
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let b = Matrix::from_i64(&[&[3], &[0]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        let bad = Matrix::from_i64(&[&[0], &[1]]);
        assert!(a.solve(&bad).unwrap().is_none());
    }

    #[test]
    fn zero_sized_shapes() {
        let a = Matrix::zero(0, 3);
        let b = Matrix::zero(3, 2);
        assert_eq!(a.mul(&b).unwrap(), Matrix::zero(0, 2));
        assert_eq!(a.rank(), 0);
        assert!(Matrix::identity(0).is_invertible());
    }

    #[test]
    fn serde_is_string_based() {
        let m = Matrix::from_rows(vec![vec![rat(1, 2), rat_int(-3)]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1/2","-3"]]"#);
        let back: Matrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
