//! Monte Carlo simulation of the discrete Wright-Fisher chain.
//!
//! The chain is the stochastic model the diffusion equation approximates:
//! `X_{k+1} | X_k = i` is `Binomial(N, i/N)` with absorbing states at `0` and
//! `N`. Neutrality gives `E[X_{k+1}|X_k] = X_k` and
//! `Var[X_{k+1}|X_k] = X_k (1 - X_k/N)`, and the allele fixes with
//! probability equal to its initial frequency. Those quantities are exact in
//! both models, so the ensemble here serves as an independent check on the
//! PDE solver's steady-state weights.
//!
//! Everything is seeded: trial `k` draws from ChaCha8 stream `k` of the
//! configured seed, so ensembles are reproducible regardless of trial order.

use crate::error::{Error, Result};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Ensemble parameters for the chain runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    /// Population size `N`.
    pub pop_size: u64,
    /// Initial frequency; the chain starts at `round(p * N)`.
    pub p: f64,
    /// Number of independent chains.
    pub trials: u64,
    /// Generations after which a chain is reported unresolved.
    pub max_generations: u64,
    pub rng_seed: u64,
}

impl ChainConfig {
    /// Starting count `round(p * N)`.
    pub fn initial_count(&self) -> u64 {
        (self.p * self.pop_size as f64).round() as u64
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::InvalidChainConfig(format!(
                "population size must be at least 2, got {}",
                self.pop_size
            )));
        }
        let i0 = self.initial_count();
        if i0 == 0 || i0 >= self.pop_size {
            return Err(Error::InvalidChainConfig(format!(
                "round(p*N) = {i0} is a degenerate start for N = {}",
                self.pop_size
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidChainConfig("need at least one trial".into()));
        }
        Ok(())
    }

    fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(trial);
        rng
    }
}

/// Binomial draw by CDF inversion; exact and cheap for small `n`.
fn binomial_inversion<R: RngCore + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    let q = 1.0 - p;
    let ratio = p / q;
    let mut pmf = q.powi(n as i32);
    let mut cdf = pmf;
    let mut k = 0u64;
    let u: f64 = rng.random();
    while u > cdf && k < n {
        k += 1;
        pmf *= (n - k + 1) as f64 / k as f64 * ratio;
        cdf += pmf;
    }
    k
}

/// One generation of the chain: absorbing at `0` and `N`, otherwise a
/// `Binomial(N, i/N)` draw.
///
/// Inversion covers `N <= 64`; larger populations use the accept-reject
/// sampler from `rand_distr`.
pub fn wf_step<R: RngCore + ?Sized>(pop_size: u64, count: u64, rng: &mut R) -> u64 {
    assert!(count <= pop_size, "count {count} exceeds N = {pop_size}");
    if count == 0 || count == pop_size {
        return count;
    }
    let p = count as f64 / pop_size as f64;
    if pop_size <= 64 {
        binomial_inversion(pop_size, p, rng)
    } else {
        Binomial::new(pop_size, p).expect("0 < p < 1").sample(rng)
    }
}

/// Absorption statistics of an ensemble of chains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixationEstimate {
    pub fixed: u64,
    pub lost: u64,
    pub unresolved: u64,
    pub trials: u64,
}

impl FixationEstimate {
    pub fn fixed_fraction(&self) -> f64 {
        self.fixed as f64 / self.trials as f64
    }

    pub fn lost_fraction(&self) -> f64 {
        self.lost as f64 / self.trials as f64
    }

    pub fn unresolved_fraction(&self) -> f64 {
        self.unresolved as f64 / self.trials as f64
    }
}

/// Run `trials` chains to absorption (or `max_generations`).
pub fn fixation_probability(cfg: &ChainConfig) -> Result<FixationEstimate> {
    cfg.validate()?;
    let i0 = cfg.initial_count();
    let n = cfg.pop_size;

    let mut fixed = 0u64;
    let mut lost = 0u64;
    let mut unresolved = 0u64;
    for trial in 0..cfg.trials {
        let mut rng = cfg.trial_rng(trial);
        let mut count = i0;
        let mut absorbed = false;
        for _ in 0..cfg.max_generations {
            count = wf_step(n, count, &mut rng);
            if count == 0 || count == n {
                absorbed = true;
                break;
            }
        }
        if !absorbed {
            unresolved += 1;
        } else if count == n {
            fixed += 1;
        } else {
            lost += 1;
        }
    }
    Ok(FixationEstimate {
        fixed,
        lost,
        unresolved,
        trials: cfg.trials,
    })
}

/// Ensemble mean and standard deviation of `X_k` at one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationMoment {
    pub generation: u64,
    pub mean: f64,
    pub std_dev: f64,
}

/// Track ensemble moments of `X_k` at the given generations.
///
/// Chains keep their absorbed value, so the neutrality (martingale) identity
/// `E[X_k] = X_0` holds at every generation.
pub fn ensemble_mean_trace(
    cfg: &ChainConfig,
    generations: &[u64],
) -> Result<Vec<GenerationMoment>> {
    cfg.validate()?;
    let mut gens = generations.to_vec();
    gens.sort_unstable();
    gens.dedup();
    let last = *gens.last().unwrap_or(&0);

    let mut sums = vec![0.0f64; gens.len()];
    let mut sq_sums = vec![0.0f64; gens.len()];
    for trial in 0..cfg.trials {
        let mut rng = cfg.trial_rng(trial);
        let mut count = cfg.initial_count();
        let mut idx = 0usize;
        for g in 1..=last {
            count = wf_step(cfg.pop_size, count, &mut rng);
            while idx < gens.len() && gens[idx] == g {
                sums[idx] += count as f64;
                sq_sums[idx] += (count as f64) * (count as f64);
                idx += 1;
            }
        }
    }

    let t = cfg.trials as f64;
    Ok(gens
        .iter()
        .zip(sums.iter().zip(&sq_sums))
        .map(|(&generation, (&s, &sq))| {
            let mean = s / t;
            let var = (sq / t - mean * mean).max(0.0);
            GenerationMoment {
                generation,
                mean,
                std_dev: var.sqrt(),
            }
        })
        .collect())
}

/// Sample mean and variance of a single `wf_step` from a fixed state.
pub fn one_step_moments(pop_size: u64, count: u64, draws: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sq = 0.0f64;
    for _ in 0..draws {
        let x = wf_step(pop_size, count, &mut rng) as f64;
        sum += x;
        sq += x * x;
    }
    let mean = sum / draws as f64;
    let var = (sq / draws as f64 - mean * mean) * draws as f64 / (draws as f64 - 1.0);
    (mean, var)
}
