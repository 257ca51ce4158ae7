//! Regularized steady states and their vanishing-viscosity limit.
//!
//! With an added diffusion `epsilon`, the zero-current steady problem has the
//! unique normalized solution
//!
//! ```text
//! f_eps(x) = b_eps / (x(1-x) + eps)
//! ```
//!
//! whose normalization constant follows from `int_0^1 f_eps dx = 1`. As
//! `epsilon -> 0` the profile concentrates at both endpoints and converges,
//! as a distribution, to `(1/2) delta(x) + (1/2) delta(1-x)` regardless of
//! any initial data. That limit is what an artificial viscosity (upwinding,
//! or the split central flux) drags a long run toward.
//!
//! Pairings `<f_eps, phi>` are computed by composite Gauss-Legendre panels on
//! a mesh graded dyadically into both endpoints. The profile's peak has
//! height `O(1/eps)` but width `O(eps)`, and mass spreads logarithmically
//! across the scales in between, so the grading starts at the `eps` scale.

use crate::error::{Error, Result};
use crate::scalar::{from_f64, from_usize, Real};

/// Closed-form regularized steady state for one viscosity `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityProfile<T> {
    epsilon: T,
    c_plus: T,
    b_eps: T,
}

impl<T: Real> ViscosityProfile<T> {
    /// Build the profile; `epsilon` must be positive (values at or above 1/4
    /// are fine and used for plotting).
    pub fn new(epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "viscosity must be positive, got {epsilon}"
            )));
        }
        let half = from_f64::<T>(0.5);
        let c_plus = (from_f64::<T>(0.25) + epsilon).sqrt();
        // (c + 1/2)/(c - 1/2) = (c + 1/2)^2 / eps, since c^2 - 1/4 = eps;
        // the right-hand form avoids the cancellation in c - 1/2.
        let ratio = (c_plus + half) * (c_plus + half) / epsilon;
        let b_eps = c_plus / ratio.ln();
        Ok(Self {
            epsilon,
            c_plus,
            b_eps,
        })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// `sqrt(1/4 + epsilon)`.
    pub fn c_plus(&self) -> T {
        self.c_plus
    }

    /// Normalization constant `b_eps`.
    pub fn b_eps(&self) -> T {
        self.b_eps
    }

    /// Evaluate `f_eps(x)` for `x` in `[0,1]`.
    pub fn density(&self, x: T) -> Result<T> {
        if !(x >= T::zero() && x <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "profile argument {x} outside [0,1]"
            )));
        }
        Ok(self.b_eps / (x * (T::one() - x) + self.epsilon))
    }
}

/// Evaluate `f_eps(x)`; free-function form of [`ViscosityProfile::density`].
pub fn f_epsilon<T: Real>(profile: &ViscosityProfile<T>, x: T) -> Result<T> {
    profile.density(x)
}

/// The smooth test functions used for pairings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    /// `phi = 1` on all of `[0,1]` (cut off outside).
    One,
    /// Bump with `phi(0) = 1`, supported in `[0, 1/2)`.
    BumpLeft,
    /// Bump with `phi(1) = 1`, supported in `(1/2, 1]`.
    BumpRight,
    /// Bump supported in `(1/4, 3/4)`.
    BumpMid,
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] = [
        TestFunction::One,
        TestFunction::BumpLeft,
        TestFunction::BumpRight,
        TestFunction::BumpMid,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::One => "one",
            TestFunction::BumpLeft => "bump0",
            TestFunction::BumpRight => "bump1",
            TestFunction::BumpMid => "bumpmid",
        }
    }

    /// `exp(1 - 1/(1-u^2))` for `|u| < 1`, zero outside: the classic bump,
    /// scaled to 1 at its center.
    fn bump<T: Real>(u: T) -> T {
        let one = T::one();
        if u.abs() >= one {
            return T::zero();
        }
        (one - one / (one - u * u)).exp()
    }

    pub fn eval<T: Real>(&self, x: T) -> T {
        let half = from_f64::<T>(0.5);
        match self {
            TestFunction::One => {
                if x >= T::zero() && x <= T::one() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            // Center at the endpoint so phi(endpoint) = 1 with zero slope.
            TestFunction::BumpLeft => Self::bump(x / half),
            TestFunction::BumpRight => Self::bump((T::one() - x) / half),
            TestFunction::BumpMid => Self::bump((x - half) / from_f64::<T>(0.25)),
        }
    }
}

impl std::str::FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(TestFunction::One),
            "bump0" => Ok(TestFunction::BumpLeft),
            "bump1" => Ok(TestFunction::BumpRight),
            "bumpmid" => Ok(TestFunction::BumpMid),
            other => Err(Error::InvalidParameter(format!(
                "unknown test function '{other}' (expected bump0 | bump1 | bumpmid | one)"
            ))),
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = from_usize::<T>(n);
    let tol = T::epsilon() * from_f64::<T>(4.0);

    for i in 0..n.div_ceil(2) {
        // Chebyshev-based initial guess.
        let theta =
            T::PI() * (from_usize::<T>(i) + from_f64::<T>(0.75)) / (nf + from_f64::<T>(0.5));
        let mut x = theta.cos();
        let mut dp = T::zero();
        for _ in 0..100 {
            // Legendre recurrence for P_n and P_{n-1}.
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = from_usize::<T>(k);
                let p2 =
                    ((from_f64::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // P_n' from P_n and P_{n-1}.
            dp = nf * (x * p1 - p0) / (x * x - T::one());
            let dx = p1 / dp;
            x = x - dx;
            if dx.abs() <= tol {
                break;
            }
        }
        let w = from_f64::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x.abs();
        weights[i] = w;
        nodes[n - 1 - i] = x.abs();
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// Panel breakpoints on `[0, 1/2]` graded dyadically into the endpoint,
/// starting at the `epsilon` scale.
fn graded_breakpoints<T: Real>(epsilon: T) -> Vec<T> {
    let half = from_f64::<T>(0.5);
    let quarter = from_f64::<T>(0.25);
    let mut points = vec![T::zero()];
    let mut s = epsilon.min(quarter);
    while s < half {
        points.push(s);
        s = s + s;
    }
    points.push(half);
    points
}

fn panel_integral<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, nodes: &[T], weights: &[T]) -> T {
    let half = from_f64::<T>(0.5);
    let mid = half * (a + b);
    let rad = half * (b - a);
    let mut acc = T::zero();
    for (&u, &w) in nodes.iter().zip(weights) {
        acc = acc + w * f(mid + rad * u);
    }
    acc * rad
}

fn graded_quadrature<T: Real>(epsilon: T, f: impl Fn(T) -> T) -> Result<T> {
    let (nodes, weights) = gauss_legendre::<T>(16);
    let base = graded_breakpoints(epsilon);
    let tol = from_f64::<T>(1e-12);
    let max_refinements = 8usize;

    let mut splits = 1usize;
    let mut prev: Option<T> = None;
    let mut last_delta = T::infinity();
    for level in 0..=max_refinements {
        let mut total = T::zero();
        for pair in base.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let width = (b - a) / from_usize::<T>(splits);
            for k in 0..splits {
                let lo = a + from_usize::<T>(k) * width;
                let hi = if k + 1 == splits { b } else { lo + width };
                total = total + panel_integral(&f, lo, hi, &nodes, &weights);
            }
        }
        if let Some(p) = prev {
            last_delta = (total - p).abs();
            if last_delta <= tol * total.abs().max(T::one()) {
                return Ok(total);
            }
        }
        prev = Some(total);
        splits *= 2;
        if level == max_refinements {
            break;
        }
    }
    Err(Error::QuadratureDidNotConverge {
        refinements: max_refinements,
        last_delta: last_delta.to_f64().unwrap_or(f64::NAN),
    })
}

/// `<f_eps, phi> = int_0^1 f_eps(x) phi(x) dx`.
///
/// `phi` is any smooth function on `[0,1]`; the zero extension of `f_eps`
/// outside the unit interval is implicit in the integration domain. The
/// integral is folded onto `[0, 1/2]` through the exact symmetry of `f_eps`,
/// which keeps the boundary layer at the small-`x` end where the floating
/// grid is fine enough to resolve it.
pub fn pair_with_test_function<T: Real>(
    profile: &ViscosityProfile<T>,
    phi: impl Fn(T) -> T,
) -> Result<T> {
    let b = profile.b_eps();
    let eps = profile.epsilon();
    graded_quadrature(eps, move |x: T| {
        let weight = b / (x * (T::one() - x) + eps);
        weight * (phi(x) + phi(T::one() - x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Recursive adaptive Simpson; quadrature oracle independent of the
    /// graded Gauss-Legendre path.
    fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        fn simpson(f: &impl Fn(f64) -> f64, a: f64, m: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
        }
        fn rec(
            f: &impl Fn(f64) -> f64,
            a: f64,
            m: f64,
            b: f64,
            whole: f64,
            tol: f64,
            depth: usize,
        ) -> f64 {
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let left = simpson(f, a, lm, m);
            let right = simpson(f, m, rm, b);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, lm, m, left, tol / 2.0, depth - 1)
                + rec(f, m, rm, b, right, tol / 2.0, depth - 1)
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, b, simpson(f, a, m, b), tol, depth)
    }

    fn pairing_oracle(epsilon: f64, phi: impl Fn(f64) -> f64) -> f64 {
        let profile = ViscosityProfile::new(epsilon).unwrap();
        let b = profile.b_eps();
        let f = move |x: f64| b / (x * (1.0 - x) + epsilon) * phi(x);
        adaptive_simpson(&f, 0.0, 1.0, 1e-11, 48)
    }

    #[test]
    fn profile_is_symmetric() {
        let p = ViscosityProfile::new(1e-3).unwrap();
        // Dyadic points have an exact complement, so the symmetry is bitwise.
        for &x in &[0.0, 0.125, 0.25, 0.375, 0.5] {
            assert_eq!(p.density(x).unwrap(), p.density(1.0 - x).unwrap());
        }
        for &x in &[0.1f64, 0.31, 0.47] {
            let (a, b) = (p.density(x).unwrap(), p.density(1.0 - x).unwrap());
            assert!((a - b).abs() <= 1e-12 * a, "{a} vs {b}");
        }
    }

    #[test]
    fn profile_rejects_bad_arguments() {
        assert!(ViscosityProfile::<f64>::new(0.0).is_err());
        let p = ViscosityProfile::new(0.1).unwrap();
        assert!(p.density(-0.1).is_err());
        assert!(p.density(1.1).is_err());
    }

    #[test]
    fn normalization_across_viscosities() {
        for k in 1..=8 {
            let eps = 10f64.powi(-k);
            let p = ViscosityProfile::new(eps).unwrap();
            let total = pair_with_test_function(&p, |_| 1.0).unwrap();
            assert!((total - 1.0).abs() <= 1e-8, "eps=1e-{k}: total={total}");
        }
        // Large viscosity used for plotting.
        let p = ViscosityProfile::<f64>::new(0.5).unwrap();
        let total = pair_with_test_function(&p, |_| 1.0).unwrap();
        assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn midpoint_value_decreases_with_viscosity() {
        let mut prev = f64::INFINITY;
        for &eps in &[1e-2, 1e-4, 1e-6] {
            let p = ViscosityProfile::new(eps).unwrap();
            let mid = p.density(0.5).unwrap();
            assert!(mid < prev, "f_eps(1/2) not decreasing at eps={eps}");
            prev = mid;
        }
    }

    #[test]
    fn pairing_matches_adaptive_simpson_oracle() {
        for &eps in &[0.5, 1e-2, 1e-5] {
            let p = ViscosityProfile::new(eps).unwrap();
            for tf in TestFunction::ALL {
                let gl = pair_with_test_function(&p, |x| tf.eval(x)).unwrap();
                let oracle = pairing_oracle(eps, |x| tf.eval(x));
                assert!(
                    (gl - oracle).abs() <= 1e-9 * oracle.abs().max(1.0),
                    "eps={eps} {}: {gl} vs {oracle}",
                    tf.name()
                );
            }
        }
    }

    #[test]
    fn pairing_is_symmetric_between_mirrored_bumps() {
        for &eps in &[1e-2f64, 1e-6] {
            let p = ViscosityProfile::new(eps).unwrap();
            let left = pair_with_test_function(&p, |x| TestFunction::BumpLeft.eval(x)).unwrap();
            let right = pair_with_test_function(&p, |x| TestFunction::BumpRight.eval(x)).unwrap();
            assert!((left - right).abs() <= 1e-10, "{left} vs {right}");
        }
    }

    #[test]
    fn interior_bump_pairing_vanishes_with_viscosity() {
        let mut prev = f64::INFINITY;
        for k in 2..=8 {
            let eps = 10f64.powi(-k);
            let p = ViscosityProfile::new(eps).unwrap();
            let v = pair_with_test_function(&p, |x| TestFunction::BumpMid.eval(x)).unwrap();
            assert!(v > 0.0 && v < prev, "eps=1e-{k}: {v} !< {prev}");
            prev = v;
        }
        // b_eps ~ 1/ln(1/eps): the approach to zero is logarithmic.
        assert!(prev < 0.05, "pairing did not head to zero: {prev}");
    }

    #[test]
    fn endpoint_bump_pairing_approaches_one_half() {
        let p = ViscosityProfile::<f64>::new(1e-8).unwrap();
        let v = pair_with_test_function(&p, |x| TestFunction::BumpLeft.eval(x)).unwrap();
        assert!((v - 0.5).abs() <= 0.05, "pairing = {v}");
    }

    #[test]
    fn mass_concentrates_outside_the_center() {
        // Analytic central mass over [delta, 1-delta]:
        // b * (1/c) * ln((c + u)/(c - u)) with u = 1/2 - delta.
        let delta = 0.1;
        let mut prev_outside = -1.0;
        for k in 1..=8 {
            let eps = 10f64.powi(-k);
            let p = ViscosityProfile::new(eps).unwrap();
            let (b, c) = (p.b_eps(), p.c_plus());
            let u = 0.5 - delta;
            let inside = b / c * ((c + u) / (c - u)).ln();
            let outside = 1.0 - inside;
            assert!(
                outside > prev_outside,
                "eps=1e-{k}: outside mass {outside} not increasing"
            );
            prev_outside = outside;
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (nodes, weights) = gauss_legendre::<f64>(8);
        // Degree 15 is the highest exact degree for 8 nodes.
        for deg in 0..=15u32 {
            let num: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| w * x.powi(deg as i32))
                .sum();
            let exact = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert!((num - exact).abs() < 1e-13, "deg {deg}: {num} vs {exact}");
        }
    }

    #[test]
    fn test_function_endpoint_values() {
        assert_eq!(TestFunction::BumpLeft.eval(0.0), 1.0);
        assert_eq!(TestFunction::BumpLeft.eval(0.5), 0.0);
        assert_eq!(TestFunction::BumpLeft.eval(1.0), 0.0);
        assert_eq!(TestFunction::BumpRight.eval(1.0), 1.0);
        assert_eq!(TestFunction::BumpRight.eval(0.0), 0.0);
        assert_eq!(TestFunction::BumpMid.eval(0.25), 0.0);
        assert_eq!(TestFunction::BumpMid.eval(0.75), 0.0);
        assert!(TestFunction::BumpMid.eval(0.5) > 0.0);
    }
}
