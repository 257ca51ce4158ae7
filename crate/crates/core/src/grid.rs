//! Uniform grid on `[0,1]`, degenerate coefficients and initial data.
//!
//! The diffusion coefficient `D(x) = x(1-x)` vanishes at both ends of the
//! domain; everything downstream (operator assembly, boundary decoupling,
//! steady-state weights) leans on `D_0 = D_M = 0` holding exactly, so the
//! coefficients are evaluated in a form that guarantees it.

use crate::error::{Error, Result};
use crate::scalar::{from_f64, from_usize, Real};

/// Uniform partition of `[0,1]` with node and half-node coefficient samples.
///
/// Nodes are `x_i = i*h`, `i = 0..=M`, with spacing `h = 1/M`. `D` is sampled
/// at nodes, `D` and `b = 1 - 2x` at half-nodes `x_{i+1/2} = (i+1/2)*h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    m: usize,
    h: T,
    nodes: Vec<T>,
    d: Vec<T>,
    d_half: Vec<T>,
    b_half: Vec<T>,
}

impl<T: Real> Grid<T> {
    /// Number of cells `M`.
    #[inline]
    pub fn cells(&self) -> usize {
        self.m
    }

    /// Grid spacing `h = 1/M`.
    #[inline]
    pub fn spacing(&self) -> T {
        self.h
    }

    /// Node coordinates `x_0..=x_M` (length `M+1`).
    #[inline]
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Diffusion coefficient `D(x_i) = x_i(1-x_i)` at nodes (length `M+1`).
    #[inline]
    pub fn diffusion(&self) -> &[T] {
        &self.d
    }

    /// `D` at half-nodes `x_{i+1/2}`, `i = 0..M` (length `M`).
    #[inline]
    pub fn diffusion_half(&self) -> &[T] {
        &self.d_half
    }

    /// Convection coefficient `b = 1 - 2x` at half-nodes (length `M`).
    #[inline]
    pub fn convection_half(&self) -> &[T] {
        &self.b_half
    }

    /// Number of interior nodes `M - 1`.
    #[inline]
    pub fn interior_len(&self) -> usize {
        self.m - 1
    }

    /// Trapezoid-style cell width for node `i`: `h/2` at the ends, `h` inside.
    #[inline]
    pub fn cell_width(&self, i: usize) -> T {
        let half = from_f64::<T>(0.5);
        if i == 0 || i == self.m {
            half * self.h
        } else {
            self.h
        }
    }

    fn check_len(&self, f: &[T]) -> Result<()> {
        if f.len() != self.m + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.m + 1,
                actual: f.len(),
            });
        }
        Ok(())
    }

    /// Length check for a density vector paired with this grid.
    pub fn check_density(&self, f: &[T]) -> Result<()> {
        self.check_len(f)
    }
}

/// Build the uniform grid with `m` cells.
///
/// `D` values are computed as the product `(i/M) * ((M-i)/M)`, which makes the
/// samples symmetric under `i <-> M-i` down to the last bit and pins
/// `D_0 = D_M = 0` exactly.
pub fn build_grid<T: Real>(m: usize) -> Result<Grid<T>> {
    if m < 3 {
        return Err(Error::InvalidGrid(m));
    }
    let mf = from_usize::<T>(m);
    let h = T::one() / mf;

    let nodes: Vec<T> = (0..=m).map(|i| from_usize::<T>(i) / mf).collect();
    let d: Vec<T> = (0..=m)
        .map(|i| (from_usize::<T>(i) / mf) * (from_usize::<T>(m - i) / mf))
        .collect();

    let two_mf = from_usize::<T>(2 * m);
    let d_half: Vec<T> = (0..m)
        .map(|i| {
            let left = from_usize::<T>(2 * i + 1) / two_mf;
            let right = from_usize::<T>(2 * (m - i) - 1) / two_mf;
            left * right
        })
        .collect();
    let b_half: Vec<T> = (0..m)
        .map(|i| {
            // (M - 2i - 1)/M, an exact integer numerator so the samples are
            // exactly antisymmetric about x = 1/2.
            let num = m as isize - 2 * i as isize - 1;
            from_f64::<T>(num as f64) / mf
        })
        .collect();

    Ok(Grid {
        m,
        h,
        nodes,
        d,
        d_half,
        b_half,
    })
}

/// Probability density sampled at the grid nodes, at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    /// Density values, length `M+1`.
    pub f: Vec<T>,
    /// Current time.
    pub t: T,
}

impl<T: Real> State<T> {
    pub fn new(f: Vec<T>, t: T) -> Self {
        Self { f, t }
    }
}

/// Truncated-Gaussian initial condition `N(p, sigma^2)` sampled at the nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition<T> {
    /// Mean in `(0,1)`.
    pub p: T,
    /// Standard deviation, `> 0`. Defaults to `0.01`.
    pub sigma: T,
    /// Rescale so the discrete total probability is exactly 1.
    ///
    /// Off by default: the reference tables were produced from the raw
    /// pointwise samples, whose discrete probability is slightly below 1.
    pub renormalize: bool,
}

impl<T: Real> InitialCondition<T> {
    pub fn new(p: T, sigma: T, renormalize: bool) -> Result<Self> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::InvalidInitialCondition(format!(
                "mean p must lie in (0,1), got {p}"
            )));
        }
        if !(sigma > T::zero()) {
            return Err(Error::InvalidInitialCondition(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        Ok(Self {
            p,
            sigma,
            renormalize,
        })
    }

    /// Mean `p` with the default narrow width `sigma = 0.01`.
    pub fn narrow(p: T) -> Result<Self> {
        Self::new(p, from_f64(0.01), false)
    }
}

/// Sample the Gaussian pointwise at the nodes (no cell averaging).
///
/// The offset `x_i - p` is evaluated as `(i - p*M)/M` so that initial data
/// with a symmetric mean come out symmetric to the last bit.
pub fn gaussian_initial<T: Real>(grid: &Grid<T>, ic: &InitialCondition<T>) -> Result<State<T>> {
    InitialCondition::new(ic.p, ic.sigma, ic.renormalize)?;
    let mf = from_usize::<T>(grid.cells());
    let pm = ic.p * mf;
    let half = from_f64::<T>(0.5);
    let norm = T::one() / (ic.sigma * (from_f64::<T>(2.0) * T::PI()).sqrt());

    let mut f: Vec<T> = (0..=grid.cells())
        .map(|i| {
            let dx = (from_usize::<T>(i) - pm) / mf;
            let z = dx / ic.sigma;
            norm * (-half * z * z).exp()
        })
        .collect();

    if ic.renormalize {
        let total = crate::diagnostics::weighted_sum(grid, &f)?;
        let scale = T::one() / total;
        for v in &mut f {
            *v = *v * scale;
        }
    }

    Ok(State::new(f, T::zero()))
}
