//! Discrete conservation functionals and steady-state reporting.
//!
//! The discrete total probability and expectation are trapezoid-weighted node
//! sums with half-width cells at the boundaries:
//!
//! ```text
//! P = (h/2) f_0 + sum_{i=1..M-1} f_i h + (h/2) f_M
//! E = (h/2) x_0 f_0 + sum_{i=1..M-1} x_i f_i h + (h/2) x_M f_M
//! ```
//!
//! Every scheme conserves `P` step to step; only the whole-flux central
//! scheme also conserves `E`, which is what fixes the boundary weights of the
//! steady state.

use crate::error::Result;
use crate::grid::{Grid, State};
use crate::integrate::Trajectory;
use crate::scalar::{from_f64, Real};

/// Weighted node sum with cell widths `(h/2, h, ..., h, h/2)`.
pub(crate) fn weighted_sum<T: Real>(grid: &Grid<T>, f: &[T]) -> Result<T> {
    grid.check_density(f)?;
    let m = grid.cells();
    let h = grid.spacing();
    let half_h = from_f64::<T>(0.5) * h;
    let mut acc = half_h * f[0] + half_h * f[m];
    for &v in &f[1..m] {
        acc = acc + v * h;
    }
    Ok(acc)
}

/// Discrete total probability `P`.
pub fn discrete_probability<T: Real>(grid: &Grid<T>, state: &State<T>) -> Result<T> {
    weighted_sum(grid, &state.f)
}

/// Discrete expectation `E` (mean gene frequency).
pub fn discrete_expectation<T: Real>(grid: &Grid<T>, state: &State<T>) -> Result<T> {
    grid.check_density(&state.f)?;
    let m = grid.cells();
    let h = grid.spacing();
    let x = grid.nodes();
    let half_h = from_f64::<T>(0.5) * h;
    // x_0 = 0 contributes nothing; keep the term for the written form.
    let mut acc = half_h * x[0] * state.f[0] + half_h * x[m] * state.f[m];
    for i in 1..m {
        acc = acc + x[i] * state.f[i] * h;
    }
    Ok(acc)
}

/// Interior mass `sum_{i=1..M-1} f_i h` (excludes both boundary cells).
pub fn interior_mass<T: Real>(grid: &Grid<T>, state: &State<T>) -> Result<T> {
    grid.check_density(&state.f)?;
    let m = grid.cells();
    let h = grid.spacing();
    let mut acc = T::zero();
    for &v in &state.f[1..m] {
        acc = acc + v * h;
    }
    Ok(acc)
}

/// Weighted interior norm `||v||_h = (sum_{i=1..M-1} (D_i f_i)^2 h)^(1/2)`.
pub fn weighted_norm<T: Real>(grid: &Grid<T>, state: &State<T>) -> Result<T> {
    grid.check_density(&state.f)?;
    let m = grid.cells();
    let h = grid.spacing();
    let d = grid.diffusion();
    let mut acc = T::zero();
    for i in 1..m {
        let v = d[i] * state.f[i];
        acc = acc + v * v * h;
    }
    Ok(acc.sqrt())
}

/// One recorded diagnostics row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRecord<T> {
    pub t: T,
    pub probability: T,
    pub expectation: T,
    pub interior_mass: T,
    pub v_norm: T,
    pub f0: T,
    pub fm: T,
}

/// Time series of the conservation functionals along a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsTrace<T> {
    records: Vec<DiagnosticRecord<T>>,
}

impl<T: Real> DiagnosticsTrace<T> {
    pub fn new() -> Self {
        Self {
            records: Vec::new(),
        }
    }

    /// Append a record; times must be strictly increasing.
    pub fn push(&mut self, record: DiagnosticRecord<T>) {
        if let Some(last) = self.records.last() {
            assert!(record.t > last.t, "diagnostics times must increase");
        }
        self.records.push(record);
    }

    pub fn records(&self) -> &[DiagnosticRecord<T>] {
        &self.records
    }

    pub fn first(&self) -> Option<&DiagnosticRecord<T>> {
        self.records.first()
    }

    pub fn last(&self) -> Option<&DiagnosticRecord<T>> {
        self.records.last()
    }
}

/// Measure one diagnostics row for a state.
pub fn measure<T: Real>(grid: &Grid<T>, state: &State<T>) -> Result<DiagnosticRecord<T>> {
    Ok(DiagnosticRecord {
        t: state.t,
        probability: discrete_probability(grid, state)?,
        expectation: discrete_expectation(grid, state)?,
        interior_mass: interior_mass(grid, state)?,
        v_norm: weighted_norm(grid, state)?,
        f0: state.f[0],
        fm: state.f[grid.cells()],
    })
}

/// Terminal boundary weights of a run compared against the conserved limits.
///
/// The predictions are `w0 -> P_0 - E_0` and `w1 -> E_0`, with `P_0`, `E_0`
/// taken from the actual discrete initial data rather than the nominal
/// `1` and `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateReport<T> {
    /// Terminal `(h/2) f_0`.
    pub w0: T,
    /// Terminal `(h/2) f_M`.
    pub w1: T,
    /// Mass still in the interior at the end of the run.
    pub interior_mass: T,
    /// Predicted limit of `w0`: `P_0 - E_0`.
    pub predicted_w0: T,
    /// Predicted limit of `w1`: `E_0`.
    pub predicted_w1: T,
    /// `|w0 - (P_0 - E_0)|`.
    pub w0_deviation: T,
    /// `|w1 - E_0|`.
    pub w1_deviation: T,
}

/// Build the steady-state report from a trajectory's terminal state.
pub fn steady_report<T: Real>(
    grid: &Grid<T>,
    trajectory: &Trajectory<T>,
    p0: T,
    e0: T,
) -> Result<SteadyStateReport<T>> {
    let terminal = &trajectory.terminal;
    grid.check_density(&terminal.f)?;
    let half_h = from_f64::<T>(0.5) * grid.spacing();
    let w0 = half_h * terminal.f[0];
    let w1 = half_h * terminal.f[grid.cells()];
    let predicted_w0 = p0 - e0;
    let predicted_w1 = e0;
    Ok(SteadyStateReport {
        w0,
        w1,
        interior_mass: interior_mass(grid, terminal)?,
        predicted_w0,
        predicted_w1,
        w0_deviation: (w0 - predicted_w0).abs(),
        w1_deviation: (w1 - predicted_w1).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, gaussian_initial, InitialCondition};

    /// Composite Simpson on [a,b]; test oracle, independent of the node sums.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + k as f64 * h);
        }
        acc * h / 3.0
    }

    fn gaussian(p: f64, sigma: f64) -> impl Fn(f64) -> f64 {
        move |x: f64| {
            let z = (x - p) / sigma;
            (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
        }
    }

    #[test]
    fn constant_density_has_unit_probability() {
        let g = build_grid::<f64>(4).unwrap();
        let s = State::new(vec![1.0; 5], 0.0);
        assert_eq!(discrete_probability(&g, &s).unwrap(), 1.0);

        let g = build_grid::<f64>(1000).unwrap();
        let s = State::new(vec![1.0; 1001], 0.0);
        assert!((discrete_probability(&g, &s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_density_has_zero_functionals() {
        let g = build_grid::<f64>(7).unwrap();
        let s = State::new(vec![0.0; 8], 0.0);
        assert_eq!(discrete_probability(&g, &s).unwrap(), 0.0);
        assert_eq!(discrete_expectation(&g, &s).unwrap(), 0.0);
        assert_eq!(interior_mass(&g, &s).unwrap(), 0.0);
        assert_eq!(weighted_norm(&g, &s).unwrap(), 0.0);
    }

    #[test]
    fn constant_density_has_centered_expectation() {
        let g = build_grid::<f64>(100).unwrap();
        let s = State::new(vec![1.0; 101], 0.0);
        assert!((discrete_expectation(&g, &s).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn point_mass_expectation_sits_at_its_node() {
        let g = build_grid::<f64>(10).unwrap();
        let mut f = vec![0.0; 11];
        f[3] = 7.5;
        let s = State::new(f, 0.0);
        let p = discrete_probability(&g, &s).unwrap();
        let e = discrete_expectation(&g, &s).unwrap();
        assert!((e / p - 0.3).abs() < 1e-15);
    }

    #[test]
    fn narrow_gaussian_matches_quadrature_oracle() {
        let g = build_grid::<f64>(1000).unwrap();
        let ic = InitialCondition::narrow(0.4).unwrap();
        let s = gaussian_initial(&g, &ic).unwrap();

        let dens = gaussian(0.4, 0.01);
        let oracle_p = simpson(&dens, 0.0, 1.0, 400_000);
        let oracle_e = simpson(|x| x * dens(x), 0.0, 1.0, 400_000);

        let p = discrete_probability(&g, &s).unwrap();
        let e = discrete_expectation(&g, &s).unwrap();
        assert!((p - oracle_p).abs() < 1e-8, "P={p} oracle={oracle_p}");
        assert!((e - oracle_e).abs() < 1e-8, "E={e} oracle={oracle_e}");
        assert!((p - 1.0).abs() < 1e-6);
        assert!((e - 0.4).abs() < 1e-4);

        // Away from the boundaries the half cells carry nothing.
        let im = interior_mass(&g, &s).unwrap();
        assert!((im - p).abs() < 1e-10);
    }

    #[test]
    fn narrow_gaussian_expectation_near_p07() {
        let g = build_grid::<f64>(1000).unwrap();
        let s = gaussian_initial(&g, &InitialCondition::narrow(0.7).unwrap()).unwrap();
        let e = discrete_expectation(&g, &s).unwrap();
        assert!((e - 0.7).abs() < 1e-4, "E = {e}");
    }

    #[test]
    fn trace_rejects_nonincreasing_times() {
        let mut trace = DiagnosticsTrace::<f64>::new();
        let rec = DiagnosticRecord {
            t: 0.0,
            probability: 1.0,
            expectation: 0.5,
            interior_mass: 1.0,
            v_norm: 0.1,
            f0: 0.0,
            fm: 0.0,
        };
        trace.push(rec);
        let next = DiagnosticRecord { t: 0.5, ..rec };
        trace.push(next);
        assert_eq!(trace.records().len(), 2);
        let bad = DiagnosticRecord { t: 0.5, ..rec };
        assert!(std::panic::catch_unwind(move || {
            let mut t = trace;
            t.push(bad);
        })
        .is_err());
    }
}
