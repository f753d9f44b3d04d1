//! Classical reference solvers: the 2-exchange swap local search that all gap
//! metrics are measured against, and a uniform-random-permutation baseline.

use qapforge_core::{objective, Assignment, QapInstance};
use qapforge_rng::SplitMix64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, BaselineError>;

/// Maximum number of full neighborhood sweeps before giving up.
pub const SWAP_ITERATION_LIMIT: usize = 1000;

/// How a sweep reacts to improving swaps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapVariant {
    /// Accept each strictly improving swap immediately and continue the scan
    /// from the updated assignment.
    FirstImprovement,
    /// Scan the whole neighborhood of the current assignment and apply only
    /// the single best strictly improving swap per sweep.
    BestImprovement,
}

#[derive(Clone, Debug)]
pub struct SwapResult {
    pub assignment: Assignment,
    pub cost: f64,
    /// Completed neighborhood sweeps.
    pub iterations_used: usize,
    /// True when the final sweep found no improving swap (2-exchange local optimum).
    pub converged: bool,
}

/// Swap local search from the identity assignment, first-improvement scan.
pub fn swap_solve(instance: &QapInstance) -> SwapResult {
    swap_solve_with(instance, SwapVariant::FirstImprovement)
}

pub fn swap_solve_with(instance: &QapInstance, variant: SwapVariant) -> SwapResult {
    let n = instance.n();
    // perm[k] = facility at location k; loc[f] = location of facility f.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut loc: Vec<usize> = (0..n).collect();
    let mut cost = objective(instance, &Assignment::identity(n)).expect("identity fits");

    let mut iterations = 0;
    let mut converged = false;
    while iterations < SWAP_ITERATION_LIMIT {
        let mut improved = false;
        match variant {
            SwapVariant::FirstImprovement => {
                for a in 0..n {
                    for b in (a + 1)..n {
                        let delta = swap_delta(instance, &perm, &loc, a, b);
                        if delta < 0.0 {
                            apply_swap(&mut perm, &mut loc, a, b);
                            cost += delta;
                            improved = true;
                        }
                    }
                }
            }
            SwapVariant::BestImprovement => {
                let mut best = (0.0f64, 0usize, 0usize);
                for a in 0..n {
                    for b in (a + 1)..n {
                        let delta = swap_delta(instance, &perm, &loc, a, b);
                        if delta < best.0 {
                            best = (delta, a, b);
                        }
                    }
                }
                if best.0 < 0.0 {
                    apply_swap(&mut perm, &mut loc, best.1, best.2);
                    cost += best.0;
                    improved = true;
                }
            }
        }
        iterations += 1;
        if !improved {
            converged = true;
            break;
        }
    }

    let assignment = Assignment::new(perm).expect("swaps preserve the permutation");
    // Re-derive the cost from scratch so the result is exactly the objective,
    // free of accumulated delta drift.
    let cost_exact = objective(instance, &assignment).expect("sizes match");
    debug_assert!((cost - cost_exact).abs() <= 1e-6 * cost_exact.max(1.0));
    SwapResult {
        assignment,
        cost: cost_exact,
        iterations_used: iterations,
        converged,
    }
}

/// Cost change from exchanging the locations of facilities `a` and `b`.
/// O(n): only pair terms involving a or b change, and for symmetric flow and
/// distance matrices each changed pair contributes twice the same product.
pub fn swap_delta(
    instance: &QapInstance,
    perm: &[usize],
    loc: &[usize],
    a: usize,
    b: usize,
) -> f64 {
    let flows = instance.flows();
    let distances = instance.distances();
    let (k, l) = (loc[a], loc[b]);
    let mut delta = 0.0;
    for (m, &c) in perm.iter().enumerate() {
        if c == a || c == b {
            continue;
        }
        delta += 2.0
            * (flows[(a, c)] - flows[(b, c)])
            * (distances[(l, m)] - distances[(k, m)]);
    }
    delta
}

fn apply_swap(perm: &mut [usize], loc: &mut [usize], a: usize, b: usize) {
    let (k, l) = (loc[a], loc[b]);
    perm.swap(k, l);
    loc.swap(a, b);
}

/// Headline metric: relative excess of a solution cost over the swap cost.
pub fn percentage_gap(c_sol: f64, c_swap: f64) -> Result<f64> {
    if !(c_swap > 0.0) {
        return Err(BaselineError::InvalidInput(format!(
            "baseline cost must be positive, got {c_swap}"
        )));
    }
    Ok((c_sol - c_swap) / c_swap)
}

/// Mean and standard error of the objective over uniformly random assignments.
pub fn random_baseline(
    instance: &QapInstance,
    rng: &mut SplitMix64,
    samples: usize,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(BaselineError::InvalidInput("need at least one sample".into()));
    }
    let n = instance.n();
    let mut costs = Vec::with_capacity(samples);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..samples {
        rng.shuffle(&mut perm);
        let a = Assignment::new(perm.clone()).expect("shuffle keeps a permutation");
        costs.push(objective(instance, &a).expect("sizes match"));
    }
    let mean = costs.iter().sum::<f64>() / samples as f64;
    let stderr = if samples > 1 {
        let var = costs.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>()
            / (samples - 1) as f64;
        (var / samples as f64).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}
