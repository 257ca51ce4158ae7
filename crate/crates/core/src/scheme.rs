//! The three half-node flux discretizations and their implicit operators.
//!
//! The probability current is `j = -d/dx ( x(1-x) f )`, equivalently
//! `j = -D f_x + (2x-1) f` with `D = x(1-x)`. At each half-node the three
//! schemes approximate it as:
//!
//! * `Upwind`       - diffusion by central difference of `D f_x`, convection
//!   upwinded on the sign of `2x - 1`;
//! * `CentralSplit` - diffusion as above, convection by the half-node average;
//! * `CentralWhole` - the whole flux as one central difference,
//!   `-(D_{i+1} f_{i+1} - D_i f_i)/h`.
//!
//! Every flux is linear in the two adjacent node values, so the implicit
//! Euler update assembles into a tridiagonal system. For `CentralWhole` the
//! boundary nodes drop out of the interior system entirely (`D_0 = D_M = 0`)
//! and are recovered explicitly afterwards.
//!
//! The exact stencil decompositions relating the schemes are exposed as
//! [`lambda_residual`] and [`lambda_tilde_residual`]: on interior nodes
//! `CentralSplit = CentralWhole + Lambda` and
//! `Upwind = CentralSplit + LambdaTilde`, where `Lambda` is an `O(h^2)` and
//! `LambdaTilde` an `O(h)` artificial diffusion.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{from_f64, Real};

/// The three flux discretizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Scheme 1: upwinded convection.
    Upwind,
    /// Scheme 2: split central flux (separate diffusion and convection).
    CentralSplit,
    /// Scheme 3: whole-flux central difference.
    CentralWhole,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [
        SchemeKind::Upwind,
        SchemeKind::CentralSplit,
        SchemeKind::CentralWhole,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Upwind => "upwind",
            SchemeKind::CentralSplit => "central-split",
            SchemeKind::CentralWhole => "central-whole",
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upwind" => Ok(SchemeKind::Upwind),
            "central-split" => Ok(SchemeKind::CentralSplit),
            "central-whole" => Ok(SchemeKind::CentralWhole),
            other => Err(Error::InvalidParameter(format!(
                "unknown scheme '{other}' (expected upwind | central-split | central-whole)"
            ))),
        }
    }
}

/// Coefficients `(a, b)` of the linear flux `j_{k+1/2} = a f_k + b f_{k+1}`.
fn flux_coefficients<T: Real>(scheme: SchemeKind, grid: &Grid<T>, k: usize) -> (T, T) {
    let h = grid.spacing();
    let half = from_f64::<T>(0.5);
    match scheme {
        SchemeKind::Upwind => {
            let dh = grid.diffusion_half()[k] / h;
            // Convection velocity 2x - 1 = -b at the half-node.
            let c = -grid.convection_half()[k];
            if c < T::zero() {
                // Wind blows left: take the right (downwind-of-the-interface) value.
                (dh, -dh + c)
            } else {
                (dh + c, -dh)
            }
        }
        SchemeKind::CentralSplit => {
            let dh = grid.diffusion_half()[k] / h;
            let c = -grid.convection_half()[k];
            (dh + half * c, -dh + half * c)
        }
        SchemeKind::CentralWhole => {
            let d = grid.diffusion();
            (d[k] / h, -d[k + 1] / h)
        }
    }
}

/// Flux `j_{k+1/2}` of the given scheme evaluated on a density vector.
pub fn half_node_flux<T: Real>(scheme: SchemeKind, grid: &Grid<T>, f: &[T], k: usize) -> Result<T> {
    grid.check_density(f)?;
    if k >= grid.cells() {
        return Err(Error::IndexOutOfRange {
            index: k,
            limit: grid.cells() - 1,
        });
    }
    let (a, b) = flux_coefficients(scheme, grid, k);
    Ok(a * f[k] + b * f[k + 1])
}

/// Spatial operator at interior nodes: `(j_{i+1/2} - j_{i-1/2})/h`, `i = 1..M-1`.
pub fn flux_divergence<T: Real>(scheme: SchemeKind, grid: &Grid<T>, f: &[T]) -> Result<Vec<T>> {
    grid.check_density(f)?;
    let m = grid.cells();
    let h = grid.spacing();
    let fluxes: Vec<T> = (0..m)
        .map(|k| {
            let (a, b) = flux_coefficients(scheme, grid, k);
            a * f[k] + b * f[k + 1]
        })
        .collect();
    Ok((1..m).map(|i| (fluxes[i] - fluxes[i - 1]) / h).collect())
}

/// Viscosity residual `Lambda_i = -(1/4)(f_{i+1} - 2 f_i + f_{i-1})`.
///
/// Exactly the interior difference between the split and whole-flux central
/// operators.
pub fn lambda_residual<T: Real>(grid: &Grid<T>, f: &[T]) -> Result<Vec<T>> {
    grid.check_density(f)?;
    let m = grid.cells();
    let quarter = from_f64::<T>(0.25);
    Ok((1..m)
        .map(|i| -quarter * (f[i + 1] - (f[i] + f[i]) + f[i - 1]))
        .collect())
}

/// Viscosity residual
/// `LambdaTilde_i = -(h/2) (|b_{i+1/2}| f_{i+1} - (|b_{i+1/2}| + |b_{i-1/2}|) f_i + |b_{i-1/2}| f_{i-1}) / h^2`.
///
/// Exactly the interior difference between the upwind and split central
/// operators.
pub fn lambda_tilde_residual<T: Real>(grid: &Grid<T>, f: &[T]) -> Result<Vec<T>> {
    grid.check_density(f)?;
    let m = grid.cells();
    let h = grid.spacing();
    let b = grid.convection_half();
    let scale = -from_f64::<T>(0.5) / h;
    Ok((1..m)
        .map(|i| {
            let bp = b[i].abs();
            let bm = b[i - 1].abs();
            scale * (bp * f[i + 1] - (bp + bm) * f[i] + bm * f[i - 1])
        })
        .collect())
}

/// Which elimination path the assembled system is certified for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    /// Thomas elimination without pivoting.
    Tridiagonal,
    /// Dense partial-pivoting fallback (no stability certificate found).
    Dense,
}

/// Assembled implicit-Euler system, rows normalized to `f/tau + flux terms`.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSystem<T> {
    /// Whole-flux central scheme: the `M-1` interior unknowns close on
    /// themselves; the boundary values are recovered afterwards via
    /// `f_0' = f_0 + w0 f_1'` and `f_M' = f_M + w1 f_{M-1}'`.
    Decoupled {
        sub: Vec<T>,
        diag: Vec<T>,
        sup: Vec<T>,
        w0: T,
        w1: T,
    },
    /// Upwind / split central: boundary unknowns couple into a full
    /// `(M+1)`-row tridiagonal system.
    Coupled {
        sub: Vec<T>,
        diag: Vec<T>,
        sup: Vec<T>,
    },
}

/// Implicit backward-Euler operator for one scheme and step size.
///
/// Coefficients depend only on the grid, the scheme and `tau`, so an operator
/// is assembled once and reused for every step of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOperator<T> {
    scheme: SchemeKind,
    tau: T,
    gamma: T,
    cells: usize,
    system: OperatorSystem<T>,
    solver_path: SolverPath,
}

impl<T: Real> SchemeOperator<T> {
    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// Mesh ratio `gamma = tau / h^2`.
    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn system(&self) -> &OperatorSystem<T> {
        &self.system
    }

    pub fn solver_path(&self) -> SolverPath {
        self.solver_path
    }
}

fn strictly_dominant<T: Real>(sub: &[T], diag: &[T], sup: &[T]) -> bool {
    let n = diag.len();
    (0..n).all(|i| {
        let mut off = T::zero();
        if i > 0 {
            off = off + sub[i - 1].abs();
        }
        if i + 1 < n {
            off = off + sup[i].abs();
        }
        diag[i].abs() > off
    })
}

/// M-matrix certificate for pivot-free elimination: nonpositive off-diagonal
/// entries, positive diagonal, and positive cell-width-weighted column sums.
/// The weighted column sums of any of the flux operators telescope to
/// `w_j / tau`, which is what makes the certificate hold for every `tau`.
fn m_matrix_certified<T: Real>(grid: &Grid<T>, sub: &[T], diag: &[T], sup: &[T]) -> bool {
    let n = diag.len();
    if n != grid.cells() + 1 {
        return false;
    }
    let signs_ok = diag.iter().all(|&v| v > T::zero())
        && sub.iter().all(|&v| v <= T::zero())
        && sup.iter().all(|&v| v <= T::zero());
    if !signs_ok {
        return false;
    }
    (0..n).all(|j| {
        let mut col = grid.cell_width(j) * diag[j];
        if j > 0 {
            col = col + grid.cell_width(j - 1) * sup[j - 1];
        }
        if j + 1 < n {
            col = col + grid.cell_width(j + 1) * sub[j];
        }
        col > T::zero()
    })
}

/// Assemble the implicit operator for `scheme` with time step `tau`.
pub fn assemble_operator<T: Real>(
    scheme: SchemeKind,
    grid: &Grid<T>,
    tau: T,
) -> Result<SchemeOperator<T>> {
    if !(tau > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "time step must be positive, got {tau}"
        )));
    }
    let m = grid.cells();
    let h = grid.spacing();
    let inv_tau = T::one() / tau;
    let inv_h = T::one() / h;
    let gamma = tau / (h * h);
    let two = from_f64::<T>(2.0);

    let coeff: Vec<(T, T)> = (0..m).map(|k| flux_coefficients(scheme, grid, k)).collect();

    let (system, solver_path) = match scheme {
        SchemeKind::CentralWhole => {
            // Interior unknowns f_1..f_{M-1}; rows scaled to
            //   f_i/tau + (j_{i+1/2} - j_{i-1/2})/h = f_i^n / tau.
            let n = m - 1;
            let d = grid.diffusion();
            let inv_h2 = inv_h * inv_h;
            let mut sub = Vec::with_capacity(n - 1);
            let mut diag = Vec::with_capacity(n);
            let mut sup = Vec::with_capacity(n - 1);
            for i in 1..m {
                diag.push(inv_tau + two * d[i] * inv_h2);
                if i > 1 {
                    sub.push(-d[i - 1] * inv_h2);
                }
                if i < m - 1 {
                    sup.push(-d[i + 1] * inv_h2);
                }
            }
            debug_assert!(strictly_dominant(&sub, &diag, &sup));
            let w0 = two * d[1] * gamma;
            let w1 = two * d[m - 1] * gamma;
            (
                OperatorSystem::Decoupled {
                    sub,
                    diag,
                    sup,
                    w0,
                    w1,
                },
                SolverPath::Tridiagonal,
            )
        }
        SchemeKind::Upwind | SchemeKind::CentralSplit => {
            // Full (M+1)-row system; half-width cells at the boundary rows.
            let n = m + 1;
            let mut sub = Vec::with_capacity(n - 1);
            let mut diag = Vec::with_capacity(n);
            let mut sup = Vec::with_capacity(n - 1);

            diag.push(inv_tau + two * coeff[0].0 * inv_h);
            sup.push(two * coeff[0].1 * inv_h);
            for i in 1..m {
                sub.push(-coeff[i - 1].0 * inv_h);
                diag.push(inv_tau + (coeff[i].0 - coeff[i - 1].1) * inv_h);
                if i < m - 1 {
                    sup.push(coeff[i].1 * inv_h);
                }
            }
            sup.push(coeff[m - 1].1 * inv_h);
            sub.push(-two * coeff[m - 1].0 * inv_h);
            diag.push(inv_tau - two * coeff[m - 1].1 * inv_h);

            let path = if strictly_dominant(&sub, &diag, &sup)
                || m_matrix_certified(grid, &sub, &diag, &sup)
            {
                SolverPath::Tridiagonal
            } else {
                SolverPath::Dense
            };
            (OperatorSystem::Coupled { sub, diag, sup }, path)
        }
    };

    Ok(SchemeOperator {
        scheme,
        tau,
        gamma,
        cells: m,
        system,
        solver_path,
    })
}
