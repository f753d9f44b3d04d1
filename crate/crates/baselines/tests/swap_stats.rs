//! Distribution-level check of the swap heuristic against the expected mean
//! cost bands on freshly generated instances (full-size bands are enforced in
//! the acceptance suite; this is a smaller smoke version).

use qapforge_baselines::swap_solve;
use qapforge_core::generate_instance;
use qapforge_rng::SplitMix64;

#[test]
fn mean_swap_cost_n10_in_band() {
    let mut rng = SplitMix64::new(4242);
    let count = 300;
    let mut total = 0.0;
    for _ in 0..count {
        let inst = generate_instance(&mut rng, 10).unwrap();
        total += swap_solve(&inst).cost;
    }
    // The integer-program objective counts both ordered copies of each
    // facility pair; the reference table costs count each pair once, so the
    // comparison halves the objective.
    let mean = total / count as f64 / 2.0;
    // Acceptance band is [20.9, 21.7] at 1000 instances; allow sampling slack here.
    assert!((20.7..=21.9).contains(&mean), "mean swap cost {mean}");
}
