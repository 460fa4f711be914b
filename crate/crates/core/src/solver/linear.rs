use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, Lu, SymbolicLlt, SymbolicLu};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{MatMut, Side};

use super::assembly::SparsePattern;
use crate::error::{Error, Result};

/// Sparse direct solver that keeps the symbolic factorization across Newton steps.
///
/// Cholesky is tried first when the tangent is known to be symmetric; any failure
/// switches permanently to LU.
pub struct LinearSolver {
    symmetric: bool,
    llt: Option<SymbolicLlt<usize>>,
    lu: Option<SymbolicLu<usize>>,
}

impl LinearSolver {
    pub fn new(symmetric: bool) -> Self {
        LinearSolver {
            symmetric,
            llt: None,
            lu: None,
        }
    }

    pub fn uses_cholesky(&self) -> bool {
        self.symmetric
    }

    /// Solves `K x = rhs` in place.
    pub fn solve(&mut self, pattern: &SparsePattern, values: &[f64], rhs: &mut [f64]) -> Result<()> {
        let n = pattern.n;
        if n == 0 {
            return Ok(());
        }
        let symbolic = SymbolicSparseColMatRef::new_checked(n, n, &pattern.col_ptr, None, &pattern.row_idx);
        let mat = SparseColMatRef::new(symbolic, values);
        let original = rhs.to_vec();

        if self.symmetric {
            if self.llt.is_none() {
                self.llt = Some(
                    SymbolicLlt::try_new(symbolic, Side::Lower)
                        .map_err(|e| Error::SingularSystem(format!("symbolic Cholesky failed: {e:?}")))?,
                );
            }
            let sym = self.llt.clone().expect("set above");
            match Llt::try_new_with_symbolic(sym, mat, Side::Lower) {
                Ok(f) => {
                    f.solve_in_place(MatMut::from_column_major_slice_mut(rhs, n, 1));
                    if rhs.iter().all(|v| v.is_finite()) {
                        return Ok(());
                    }
                    rhs.copy_from_slice(&original);
                }
                Err(_) => {}
            }
            self.symmetric = false;
        }

        if self.lu.is_none() {
            self.lu = Some(
                SymbolicLu::try_new(symbolic).map_err(|e| Error::SingularSystem(format!("symbolic LU failed: {e:?}")))?,
            );
        }
        let sym = self.lu.clone().expect("set above");
        let f = Lu::try_new_with_symbolic(sym, mat).map_err(|e| Error::SingularSystem(format!("LU failed: {e:?}")))?;
        f.solve_in_place(MatMut::from_column_major_slice_mut(rhs, n, 1));
        if !rhs.iter().all(|v| v.is_finite()) {
            return Err(Error::SingularSystem("factorization produced non-finite values".into()));
        }
        Ok(())
    }
}
