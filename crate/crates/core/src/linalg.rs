//! Direct solvers for the implicit-Euler systems.
//!
//! The production path is Thomas elimination without pivoting; the assembled
//! systems are either strictly diagonally dominant or M-matrices, and both
//! guarantee nonvanishing pivots. A dense partial-pivoting solve is kept as
//! an independent oracle (and as a fallback for systems without either
//! certificate).

use crate::error::{Error, Result};
use crate::scalar::{from_f64, Real};

/// Tridiagonal system `A x = rhs` with `sub`/`sup` of length `n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<T> {
    pub sub: Vec<T>,
    pub diag: Vec<T>,
    pub sup: Vec<T>,
    pub rhs: Vec<T>,
}

impl<T: Real> TridiagonalSystem<T> {
    pub fn new(sub: Vec<T>, diag: Vec<T>, sup: Vec<T>, rhs: Vec<T>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || rhs.len() != n || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: rhs.len(),
            });
        }
        Ok(Self {
            sub,
            diag,
            sup,
            rhs,
        })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// `A x`, for residual checks.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.size();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v = v + self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v = v + self.sup[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Strict row diagonal dominance.
    pub fn is_strictly_dominant(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            let mut off = T::zero();
            if i > 0 {
                off = off + self.sub[i - 1].abs();
            }
            if i + 1 < n {
                off = off + self.sup[i].abs();
            }
            self.diag[i].abs() > off
        })
    }
}

fn pivot_floor<T: Real>() -> T {
    from_f64::<T>(1e-300).max(T::min_positive_value())
}

/// Thomas forward elimination + back substitution, no pivoting.
///
/// Intended for numerically nonsingular systems (diagonally dominant or
/// M-matrix); a pivot below `1e-300` in magnitude is reported as singular.
pub fn solve_tridiagonal<T: Real>(sys: &TridiagonalSystem<T>) -> Result<Vec<T>> {
    thomas(&sys.sub, &sys.diag, &sys.sup, &sys.rhs)
}

/// Slice-level Thomas kernel; the per-step hot path of the integrator.
pub(crate) fn thomas<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    let floor = pivot_floor::<T>();

    let mut scratch = diag.to_vec();
    let mut x = rhs.to_vec();
    for i in 1..n {
        let pivot = scratch[i - 1];
        if pivot.abs() < floor {
            return Err(Error::SingularSystem {
                row: i - 1,
                pivot: pivot.to_f64().unwrap_or(0.0),
            });
        }
        let mult = sub[i - 1] / pivot;
        scratch[i] = scratch[i] - mult * sup[i - 1];
        x[i] = x[i] - mult * x[i - 1];
    }
    let last = scratch[n - 1];
    if last.abs() < floor {
        return Err(Error::SingularSystem {
            row: n - 1,
            pivot: last.to_f64().unwrap_or(0.0),
        });
    }

    x[n - 1] = x[n - 1] / scratch[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (x[i] - sup[i] * x[i + 1]) / scratch[i];
    }
    Ok(x)
}

/// Gaussian elimination with partial pivoting; test oracle, `n <= 200`.
pub fn solve_dense<T: Real>(matrix: &[Vec<T>], rhs: &[T]) -> Result<Vec<T>> {
    let n = matrix.len();
    if n > 200 {
        return Err(Error::DenseTooLarge(n));
    }
    if n == 0 || rhs.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    let floor = pivot_floor::<T>();

    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let mut b: Vec<T> = rhs.to_vec();

    for col in 0..n {
        let (pivot_row, pivot_val) =
            (col..n)
                .map(|r| (r, a[r][col].abs()))
                .fold(
                    (col, T::zero()),
                    |best, cur| {
                        if cur.1 > best.1 {
                            cur
                        } else {
                            best
                        }
                    },
                );
        if pivot_val < floor {
            return Err(Error::SingularSystem {
                row: col,
                pivot: pivot_val.to_f64().unwrap_or(0.0),
            });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);

        for r in col + 1..n {
            let mult = a[r][col] / a[col][col];
            if mult == T::zero() {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] = a[r][c] - mult * v;
            }
            b[r] = b[r] - mult * b[col];
        }
    }

    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for c in i + 1..n {
            acc = acc - a[i][c] * x[c];
        }
        x[i] = acc / a[i][i];
    }
    Ok(x)
}
