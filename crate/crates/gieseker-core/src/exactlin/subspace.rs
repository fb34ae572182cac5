use super::{Matrix, Rat};
use crate::error::{Error, Result};
use num_traits::Zero;

/// A linear subspace of k^n, stored as the unique reduced column-echelon
/// basis of its span: pivot rows strictly increasing, pivots equal to 1,
/// pivot rows zero in every other column. Two `Subspace` values are equal
/// as sets iff they are bit-equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    /// ambient × dim matrix whose columns are the basis vectors.
    basis: Matrix,
}

impl Subspace {
    /// Span of the columns of `generators`, echelon-normalized.
    pub fn from_span(ambient: usize, generators: &Matrix) -> Result<Subspace> {
        if generators.rows() != ambient {
            return Err(Error::DimensionMismatch(format!(
                "generators live in k^{}, ambient is k^{}",
                generators.rows(),
                ambient
            )));
        }
        // rref of the transpose: rows are the spanning vectors; the nonzero
        // rows of the rref are the canonical basis, transposed back.
        let (red, _, rank) = generators.transpose().rref();
        let rows: Vec<usize> = (0..rank).collect();
        let cols: Vec<usize> = (0..ambient).collect();
        Ok(Subspace {
            ambient,
            basis: red.submatrix(&rows, &cols).transpose(),
        })
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Row index of the leading 1 in each basis column; strictly increasing.
    pub fn pivot_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|c| {
                (0..self.ambient)
                    .find(|&r| !self.basis.at(r, c).is_zero())
                    .expect("echelon basis column cannot be zero")
            })
            .collect()
    }

    /// Ambient rows that are not pivot rows, in increasing order. The
    /// standard basis vectors at these rows are the canonical complement.
    pub fn complement_rows(&self) -> Vec<usize> {
        let pivots = self.pivot_rows();
        (0..self.ambient).filter(|r| !pivots.contains(r)).collect()
    }

    /// ambient × (ambient − dim) matrix of standard basis vectors at the
    /// complement rows: the canonical lift of the quotient k^n / self.
    pub fn quotient_lift(&self) -> Matrix {
        Matrix::row_embedder(self.ambient, &self.complement_rows())
    }

    /// (ambient − dim) × ambient canonical projection onto the quotient:
    /// reduce modulo the subspace using its pivot rows, then read off the
    /// complement coordinates. Kills the subspace; left-inverse of
    /// `quotient_lift`.
    pub fn quotient_projection(&self) -> Matrix {
        let sel_p = Matrix::row_selector(self.ambient, &self.pivot_rows());
        let sel_n = Matrix::row_selector(self.ambient, &self.complement_rows());
        let reduce = Matrix::identity(self.ambient)
            .sub(&self.basis.mul(&sel_p).unwrap())
            .unwrap();
        sel_n.mul(&reduce).unwrap()
    }

    pub fn contains_vec(&self, v: &[Rat]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "vector in k^{}, ambient k^{}",
                v.len(),
                self.ambient
            )));
        }
        let rhs = Matrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect())?;
        Ok(self.basis.solve(&rhs)?.is_some())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        if other.ambient != self.ambient {
            return Err(Error::DimensionMismatch("ambient mismatch".into()));
        }
        for c in 0..other.dim() {
            if !self.contains_vec(&other.basis.col(c))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if other.ambient != self.ambient {
            return Err(Error::DimensionMismatch("ambient mismatch".into()));
        }
        Subspace::from_span(self.ambient, &Matrix::hstack(&[&self.basis, &other.basis])?)
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, m: &Matrix) -> Result<Subspace> {
        Subspace::from_span(m.rows(), &m.mul(&self.basis)?)
    }
}

/// Basis of {v : m·v = 0}, echelon-normalized.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let (red, pivots, _) = m.rref();
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut gens = Matrix::zero(n, free.len());
    for (k, &fc) in free.iter().enumerate() {
        gens.set(fc, k, Rat::from_integer(1.into()));
        for (pr, &pc) in pivots.iter().enumerate() {
            gens.set(pc, k, -red.at(pr, fc).clone());
        }
    }
    Subspace::from_span(n, &gens).expect("kernel generators have correct ambient")
}

/// Column span of m, echelon-normalized.
pub fn image_basis(m: &Matrix) -> Subspace {
    Subspace::from_span(m.rows(), m).expect("image generators have correct ambient")
}

/// Intersection a ∩ b via the kernel of the stacked system [A | −B].
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "intersect: ambient {} vs {}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    let stacked = Matrix::hstack(&[a.basis(), &b.basis().neg()])?;
    let ker = kernel_basis(&stacked);
    // first block of each kernel vector gives the A-coefficients of a
    // common point
    let a_rows: Vec<usize> = (0..a.dim()).collect();
    let all: Vec<usize> = (0..ker.dim()).collect();
    let coeffs = ker.basis().submatrix(&a_rows, &all);
    Subspace::from_span(a.ambient_dim(), &a.basis().mul(&coeffs)?)
}

/// Preimage {v : m·v ∈ w}. Contains ker(m).
pub fn preimage(m: &Matrix, w: &Subspace) -> Result<Subspace> {
    if m.rows() != w.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "preimage: map into k^{}, subspace of k^{}",
            m.rows(),
            w.ambient_dim()
        )));
    }
    // (v, y) with m·v − B_w·y = 0; project to the v-block
    let stacked = Matrix::hstack(&[m, &w.basis().neg()])?;
    let ker = kernel_basis(&stacked);
    let v_rows: Vec<usize> = (0..m.cols()).collect();
    let all: Vec<usize> = (0..ker.dim()).collect();
    Subspace::from_span(m.cols(), &ker.basis().submatrix(&v_rows, &all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_int;

    fn span_i64(ambient: usize, cols: &[&[i64]]) -> Subspace {
        let gens = Matrix::from_i64(cols).transpose();
        Subspace::from_span(ambient, &gens).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&Matrix::zero(2, 2)), Subspace::full(2));
        assert_eq!(kernel_basis(&Matrix::identity(2)), Subspace::zero(2));
        // single equation x + y = 0, normalized to leading one
        let k = kernel_basis(&Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, span_i64(2, &[&[1, -1]]));
    }

    #[test]
    fn image_examples() {
        assert_eq!(image_basis(&Matrix::identity(2)), Subspace::full(2));
        assert_eq!(image_basis(&Matrix::zero(3, 2)), Subspace::zero(3));
        let im = image_basis(&Matrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(im, span_i64(2, &[&[1, 2]]));
    }

    #[test]
    fn intersect_examples() {
        let e1 = span_i64(3, &[&[1, 0, 0]]);
        let e2 = span_i64(3, &[&[0, 1, 0]]);
        assert!(intersect(&e1, &e2).unwrap().is_zero());
        let v = span_i64(3, &[&[1, 2, 0], &[0, 0, 1]]);
        assert_eq!(intersect(&v, &v).unwrap(), v);
        let a = span_i64(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = span_i64(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(intersect(&a, &b).unwrap(), e2);
    }

    #[test]
    fn intersect_dimension_formula() {
        let a = span_i64(4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let b = span_i64(4, &[&[1, 1, 1, 1], &[1, 0, 0, 0]]);
        let cap = intersect(&a, &b).unwrap();
        let sum = a.sum(&b).unwrap();
        assert_eq!(a.dim() + b.dim(), cap.dim() + sum.dim());
    }

    #[test]
    fn preimage_examples() {
        let w = span_i64(2, &[&[1, 3]]);
        assert_eq!(preimage(&Matrix::identity(2), &w).unwrap(), w);
        let m = Matrix::from_i64(&[&[1, 2], &[0, 1]]);
        assert_eq!(preimage(&m, &Subspace::full(2)).unwrap(), Subspace::full(2));
        let p = preimage(&Matrix::from_i64(&[&[1, 0]]), &Subspace::zero(1)).unwrap();
        assert_eq!(p, span_i64(2, &[&[0, 1]]));
    }

    #[test]
    fn preimage_contains_kernel_and_maps_inside() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[0, 1, 1]]);
        let w = span_i64(2, &[&[1, 1]]);
        let pre = preimage(&m, &w).unwrap();
        assert!(pre.contains(&kernel_basis(&m)).unwrap());
        for c in 0..pre.dim() {
            let img = m.mul_vec(&pre.basis().col(c)).unwrap();
            assert!(w.contains_vec(&img).unwrap());
        }
    }

    #[test]
    fn normalization_is_idempotent() {
        let s = span_i64(3, &[&[2, 4, 6], &[1, 1, 1]]);
        let again = Subspace::from_span(3, s.basis()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn quotient_projection_properties() {
        let w = span_i64(3, &[&[1, 0, 2], &[0, 1, -1]]);
        let pi = w.quotient_projection();
        let lift = w.quotient_lift();
        // kills the subspace
        assert!(pi.mul(w.basis()).unwrap().is_zero());
        // left-inverse of the lift
        assert_eq!(pi.mul(&lift).unwrap(), Matrix::identity(1));
        // zero-dimensional quotient edge case
        let full = Subspace::full(2);
        assert_eq!(full.quotient_projection().rows(), 0);
        assert_eq!(rat_int(0), Rat::zero());
    }
}
