use crate::error::{CoreError, Result};
use crate::instance::{objective, Assignment, QapInstance};

/// Factorial search becomes impractical past this size even with pruning.
pub const EXACT_SIZE_LIMIT: usize = 11;

/// Exhaustive branch-and-bound over all permutations. Locations are filled
/// in index order; placing facility `f` at location `k` adds
/// `sum over prior locations j of 2 * F[perm[j]][f] * D[j][k]`, which is the
/// symmetric-instance pairwise cost. Since all increments are nonnegative,
/// the accumulated partial cost is a lower bound and branches at or above
/// the incumbent are pruned.
pub fn exact_solve(instance: &QapInstance) -> Result<(Assignment, f64)> {
    let n = instance.n();
    if n > EXACT_SIZE_LIMIT {
        return Err(CoreError::SizeLimit {
            n,
            limit: EXACT_SIZE_LIMIT,
        });
    }
    let identity = Assignment::identity(n);
    let mut best_cost = objective(instance, &identity)?;
    let mut best_perm: Vec<usize> = identity.as_slice().to_vec();

    let mut prefix = vec![0usize; n];
    let mut used = vec![false; n];
    search(
        instance,
        0,
        0.0,
        &mut prefix,
        &mut used,
        &mut best_cost,
        &mut best_perm,
    );

    let assignment = Assignment::new(best_perm)?;
    let cost = objective(instance, &assignment)?;
    Ok((assignment, cost))
}

fn search(
    instance: &QapInstance,
    k: usize,
    partial: f64,
    prefix: &mut [usize],
    used: &mut [bool],
    best_cost: &mut f64,
    best_perm: &mut Vec<usize>,
) {
    let n = instance.n();
    if k == n {
        if partial < *best_cost {
            *best_cost = partial;
            best_perm.copy_from_slice(prefix);
        }
        return;
    }
    for f in 0..n {
        if used[f] {
            continue;
        }
        let mut delta = 0.0;
        let frow = instance.flows().row(f);
        for j in 0..k {
            delta += 2.0 * frow[prefix[j]] * instance.distances()[(j, k)];
        }
        let next = partial + delta;
        if next >= *best_cost {
            continue;
        }
        used[f] = true;
        prefix[k] = f;
        search(instance, k + 1, next, prefix, used, best_cost, best_perm);
        used[f] = false;
    }
}
