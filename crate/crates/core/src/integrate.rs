//! Implicit-Euler time stepping.
//!
//! A step solves the fully implicit system assembled by
//! [`assemble_operator`](crate::scheme::assemble_operator). For the
//! whole-flux central scheme that means solving the closed interior system
//! first and then recovering the boundary values from the mesh-ratio
//! relations; the other two schemes solve the full coupled system.

use crate::diagnostics::{self, DiagnosticsTrace};
use crate::error::{Error, Result};
use crate::grid::{build_grid, gaussian_initial, Grid, InitialCondition, State};
use crate::linalg::{solve_dense, thomas};
use crate::scalar::{from_f64, from_usize, Real};
use crate::scheme::{assemble_operator, OperatorSystem, SchemeKind, SchemeOperator, SolverPath};

/// Parameters for one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<T> {
    pub scheme: SchemeKind,
    /// Cell count `M`.
    pub cells: usize,
    /// Time step.
    pub tau: T,
    /// Final time (a run with `t_end = 0` only reports the initial state).
    pub t_end: T,
    /// Times at which full snapshots are recorded; must lie in `[0, t_end]`.
    pub snapshot_times: Vec<T>,
    /// Optional early stop on `max_i |f^{n+1}_i - f^n_i| / tau <= tol`.
    pub steady_tol: Option<T>,
    pub ic: InitialCondition<T>,
    /// Record diagnostics every `record_stride` steps (the initial and final
    /// rows are always recorded). Default 1.
    pub record_stride: usize,
}

impl<T: Real> RunConfig<T> {
    pub fn new(
        scheme: SchemeKind,
        cells: usize,
        tau: T,
        t_end: T,
        ic: InitialCondition<T>,
    ) -> Self {
        Self {
            scheme,
            cells,
            tau,
            t_end,
            snapshot_times: Vec::new(),
            steady_tol: None,
            ic,
            record_stride: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tau > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "time step must be positive, got {}",
                self.tau
            )));
        }
        if !(self.t_end >= T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "final time must be nonnegative, got {}",
                self.t_end
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter(
                "record stride must be at least 1".into(),
            ));
        }
        for &s in &self.snapshot_times {
            if !(s >= T::zero() && s <= self.t_end) {
                return Err(Error::InvalidParameter(format!(
                    "snapshot time {s} outside [0, {}]",
                    self.t_end
                )));
            }
        }
        Ok(())
    }
}

/// Output of a run: requested snapshots, the diagnostics time series, and the
/// terminal state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub snapshots: Vec<(T, State<T>)>,
    pub diagnostics: DiagnosticsTrace<T>,
    pub terminal: State<T>,
    pub steps_taken: usize,
}

/// Advance one implicit Euler step.
pub fn step<T: Real>(state: &State<T>, op: &SchemeOperator<T>, grid: &Grid<T>) -> Result<State<T>> {
    if op.cells() != grid.cells() {
        return Err(Error::DimensionMismatch {
            expected: grid.cells(),
            actual: op.cells(),
        });
    }
    grid.check_density(&state.f)?;

    let m = grid.cells();
    let inv_tau = T::one() / op.tau();
    let f = &state.f;

    let next = match op.system() {
        OperatorSystem::Decoupled {
            sub,
            diag,
            sup,
            w0,
            w1,
        } => {
            let rhs: Vec<T> = (1..m).map(|i| f[i] * inv_tau).collect();
            let interior = thomas(sub, diag, sup, &rhs)?;
            let mut next = Vec::with_capacity(m + 1);
            next.push(f[0] + *w0 * interior[0]);
            next.extend_from_slice(&interior);
            next.push(f[m] + *w1 * interior[m - 2]);
            next
        }
        OperatorSystem::Coupled { sub, diag, sup } => {
            let rhs: Vec<T> = f.iter().map(|&v| v * inv_tau).collect();
            match op.solver_path() {
                SolverPath::Tridiagonal => thomas(sub, diag, sup, &rhs)?,
                SolverPath::Dense => {
                    let n = m + 1;
                    let mut a = vec![vec![T::zero(); n]; n];
                    for i in 0..n {
                        a[i][i] = diag[i];
                        if i > 0 {
                            a[i][i - 1] = sub[i - 1];
                        }
                        if i + 1 < n {
                            a[i][i + 1] = sup[i];
                        }
                    }
                    solve_dense(&a, &rhs)?
                }
            }
        }
    };

    Ok(State::new(next, state.t + op.tau()))
}

/// Number of steps needed to reach `t_end` (final step may overshoot by
/// rounding only).
fn step_count<T: Real>(t_end: T, tau: T) -> usize {
    if t_end <= T::zero() {
        return 0;
    }
    let raw = (t_end / tau).to_f64().expect("finite step count");
    let rounded = raw.round();
    let n = if (raw - rounded).abs() <= 1e-9 * raw.max(1.0) {
        rounded
    } else {
        raw.ceil()
    };
    n as usize
}

/// Run implicit Euler from the Gaussian initial state until `t_end` (or until
/// the steady tolerance is met), recording diagnostics and snapshots.
pub fn run<T: Real>(cfg: &RunConfig<T>) -> Result<Trajectory<T>> {
    cfg.validate()?;
    let grid = build_grid::<T>(cfg.cells)?;
    let op = assemble_operator(cfg.scheme, &grid, cfg.tau)?;
    let initial = gaussian_initial(&grid, &cfg.ic)?;
    run_from(&grid, &op, initial, cfg)
}

/// Same as [`run`] but starting from an explicit initial state.
pub fn run_from<T: Real>(
    grid: &Grid<T>,
    op: &SchemeOperator<T>,
    initial: State<T>,
    cfg: &RunConfig<T>,
) -> Result<Trajectory<T>> {
    cfg.validate()?;
    grid.check_density(&initial.f)?;

    let mut times = cfg.snapshot_times.clone();
    times.sort_by(|a, b| a.partial_cmp(b).expect("snapshot times are ordered"));
    let serve_slack = cfg.tau * from_f64::<T>(1e-9);

    let n_steps = step_count(cfg.t_end, cfg.tau);
    let mut snapshots = Vec::new();
    let mut trace = DiagnosticsTrace::new();
    let mut next_snapshot = 0usize;

    let mut state = initial;
    trace.push(diagnostics::measure(grid, &state)?);
    while next_snapshot < times.len() && state.t >= times[next_snapshot] - serve_slack {
        snapshots.push((state.t, state.clone()));
        next_snapshot += 1;
    }

    let mut steps_taken = 0usize;
    for s in 1..=n_steps {
        let mut next = step(&state, op, grid)?;
        // Pin the clock to s*tau instead of accumulating increments.
        next.t = from_usize::<T>(s) * cfg.tau;
        steps_taken = s;

        let steady = match cfg.steady_tol {
            Some(tol) => {
                let mut rate = T::zero();
                for (a, b) in next.f.iter().zip(&state.f) {
                    rate = rate.max((*a - *b).abs());
                }
                rate / cfg.tau <= tol
            }
            None => false,
        };

        state = next;
        if s % cfg.record_stride == 0 || s == n_steps || steady {
            trace.push(diagnostics::measure(grid, &state)?);
        }
        while next_snapshot < times.len() && state.t >= times[next_snapshot] - serve_slack {
            snapshots.push((state.t, state.clone()));
            next_snapshot += 1;
        }
        if steady {
            break;
        }
    }

    Ok(Trajectory {
        snapshots,
        diagnostics: trace,
        terminal: state,
        steps_taken,
    })
}
