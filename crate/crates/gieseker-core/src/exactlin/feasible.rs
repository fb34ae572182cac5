use super::{kernel_basis, rat_int, Matrix};
use crate::error::{Error, Result};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Handle to an unknown matrix of a [`MatrixSystem`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct UnknownId(usize);

struct Term {
    left: Matrix,
    unknown: usize,
    right: Matrix,
}

struct Equation {
    terms: Vec<Term>,
    constant: Matrix,
    rows: usize,
    cols: usize,
}

/// A system of matrix equations Σ L·X·R + C = 0, linear in the unknown
/// matrices X, together with a set of unknowns required to be invertible.
///
/// Solving eliminates the linear constraints into an affine parametrization
/// and then looks for an invertible point: first the particular solution,
/// then a configurable number of pseudorandom small-integer parameter
/// choices from a seeded generator. Invertibility is generic on the
/// solution set whenever the system is feasible at all, so a miss after the
/// full budget is reported as "not shown feasible".
pub struct MatrixSystem {
    shapes: Vec<(usize, usize)>,
    equations: Vec<Equation>,
    invertible: Vec<usize>,
}

/// Default number of pseudorandom draws in the invertible-point search.
pub const DEFAULT_FEASIBILITY_DRAWS: usize = 64;

impl MatrixSystem {
    pub fn new() -> Self {
        MatrixSystem {
            shapes: Vec::new(),
            equations: Vec::new(),
            invertible: Vec::new(),
        }
    }

    pub fn unknown(&mut self, rows: usize, cols: usize) -> UnknownId {
        self.shapes.push((rows, cols));
        UnknownId(self.shapes.len() - 1)
    }

    pub fn require_invertible(&mut self, id: UnknownId) {
        let (r, c) = self.shapes[id.0];
        assert_eq!(r, c, "invertibility requires a square unknown");
        self.invertible.push(id.0);
    }

    /// Adds the equation Σ left_i · X_i · right_i + constant = 0.
    pub fn equation(
        &mut self,
        terms: Vec<(Matrix, UnknownId, Matrix)>,
        constant: Matrix,
    ) -> Result<()> {
        let (rows, cols) = (constant.rows(), constant.cols());
        let mut built = Vec::with_capacity(terms.len());
        for (left, id, right) in terms {
            let (xr, xc) = self.shapes[id.0];
            if left.cols() != xr || right.rows() != xc {
                return Err(Error::DimensionMismatch(format!(
                    "term shape: left {}x{}, unknown {}x{}, right {}x{}",
                    left.rows(),
                    left.cols(),
                    xr,
                    xc,
                    right.rows(),
                    right.cols()
                )));
            }
            if left.rows() != rows || right.cols() != cols {
                return Err(Error::DimensionMismatch(
                    "term does not match equation shape".into(),
                ));
            }
            built.push(Term {
                left,
                unknown: id.0,
                right,
            });
        }
        self.equations.push(Equation {
            terms: built,
            constant,
            rows,
            cols,
        });
        Ok(())
    }

    /// Convenience: the equation left·X = Y·right for two unknowns
    /// (an intertwining condition).
    pub fn intertwine(
        &mut self,
        left: Matrix,
        x: UnknownId,
        y: UnknownId,
        right: Matrix,
    ) -> Result<()> {
        let (rows, cols) = (left.rows(), right.cols());
        let (_, xc) = self.shapes[x.0];
        let (yr, _) = self.shapes[y.0];
        self.equation(
            vec![
                (left, x, Matrix::identity(xc)),
                (Matrix::identity(yr).neg(), y, right),
            ],
            Matrix::zero(rows, cols),
        )
    }

    fn var_offsets(&self) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.shapes.len());
        let mut total = 0;
        for &(r, c) in &self.shapes {
            offsets.push(total);
            total += r * c;
        }
        (offsets, total)
    }

    /// Searches for an assignment satisfying all equations with every
    /// flagged unknown invertible. `draws` bounds the pseudorandom search.
    pub fn solve(&self, draws: usize, seed: u64) -> Result<Option<Vec<Matrix>>> {
        let (offsets, nvars) = self.var_offsets();
        let total_rows: usize = self.equations.iter().map(|e| e.rows * e.cols).sum();

        // assemble the scalar system A·x = b over the flattened unknowns
        let mut a = Matrix::zero(total_rows, nvars);
        let mut b = Matrix::zero(total_rows, 1);
        let mut row0 = 0;
        for eq in &self.equations {
            for term in &eq.terms {
                let (xr, xc) = self.shapes[term.unknown];
                let off = offsets[term.unknown];
                for i in 0..eq.rows {
                    for j in 0..eq.cols {
                        let row = row0 + i * eq.cols + j;
                        for p in 0..xr {
                            let l = term.left.at(i, p);
                            if l.is_zero() {
                                continue;
                            }
                            for q in 0..xc {
                                let r = term.right.at(q, j);
                                if r.is_zero() {
                                    continue;
                                }
                                let col = off + p * xc + q;
                                let cur = a.at(row, col) + l * r;
                                a.set(row, col, cur);
                            }
                        }
                    }
                }
            }
            for i in 0..eq.rows {
                for j in 0..eq.cols {
                    b.set(row0 + i * eq.cols + j, 0, -eq.constant.at(i, j));
                }
            }
            row0 += eq.rows * eq.cols;
        }

        let Some(particular) = a.solve(&b)? else {
            return Ok(None);
        };
        let null = kernel_basis(&a);

        let assemble = |x: &Matrix| -> Vec<Matrix> {
            self.shapes
                .iter()
                .enumerate()
                .map(|(k, &(r, c))| {
                    Matrix::from_fn(r, c, |i, j| x.at(offsets[k] + i * c + j, 0).clone())
                })
                .collect()
        };
        let ok = |mats: &[Matrix]| self.invertible.iter().all(|&k| mats[k].is_invertible());

        let mats = assemble(&particular);
        if ok(&mats) {
            return Ok(Some(mats));
        }
        if null.dim() == 0 {
            return Ok(None);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..draws {
            let coeffs = Matrix::from_fn(null.dim(), 1, |_, _| {
                rat_int(rng.random_range(-4i64..=4))
            });
            let x = particular.add(&null.basis().mul(&coeffs)?)?;
            let mats = assemble(&x);
            if ok(&mats) {
                return Ok(Some(mats));
            }
        }
        Ok(None)
    }
}

impl Default for MatrixSystem {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_constraint() {
        // X = I with X invertible
        let mut sys = MatrixSystem::new();
        let x = sys.unknown(2, 2);
        sys.require_invertible(x);
        sys.equation(
            vec![(Matrix::identity(2), x, Matrix::identity(2))],
            Matrix::identity(2).neg(),
        )
        .unwrap();
        let sol = sys.solve(8, 1).unwrap().unwrap();
        assert_eq!(sol[0], Matrix::identity(2));
    }

    #[test]
    fn infeasible_system() {
        // X·0 = I has no solution at all
        let mut sys = MatrixSystem::new();
        let x = sys.unknown(2, 2);
        sys.equation(
            vec![(Matrix::identity(2), x, Matrix::zero(2, 2))],
            Matrix::identity(2).neg(),
        )
        .unwrap();
        assert!(sys.solve(8, 1).unwrap().is_none());
    }

    #[test]
    fn commutant_of_distinct_diagonal() {
        // X·A = B·X with A = B = diag(1,2): solutions are diagonal; the
        // search must land on an invertible one.
        let a = Matrix::from_i64(&[&[1, 0], &[0, 2]]);
        let mut sys = MatrixSystem::new();
        let x = sys.unknown(2, 2);
        sys.require_invertible(x);
        sys.equation(
            vec![
                (Matrix::identity(2), x, a.clone()),
                (a.neg(), x, Matrix::identity(2)),
            ],
            Matrix::zero(2, 2),
        )
        .unwrap();
        let sol = sys.solve(64, 7).unwrap().unwrap();
        // witness commutes and is invertible; X = I is one witness but any
        // invertible diagonal matrix is acceptable
        assert!(sol[0].is_invertible());
        assert_eq!(sol[0].mul(&a).unwrap(), a.mul(&sol[0]).unwrap());
        assert!(sol[0].at(0, 1).is_zero() && sol[0].at(1, 0).is_zero());
    }
}
