//! Mean delivered energy of each composer over random instances, and how
//! often each one matches the per-chunk optimum.

use ces_core::compose::{compose, Algorithm, ComposeOptions};
use ces_core::model::approx_eq;
use ces_core::workload::{random_instance, InstanceSpec, Range};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ces_core::Result<()> {
    let spec = InstanceSpec {
        candidates: Range::new(5.0, 25.0),
        window_secs: 3600.0,
        ..Default::default()
    };
    let opts = ComposeOptions::default();
    let runs = 200;
    let algorithms = [
        Algorithm::Knapsack,
        Algorithm::Heuristic,
        Algorithm::Greedy,
        Algorithm::Priority,
        Algorithm::Ga,
    ];
    let mut energy = [0.0; 5];
    let mut optimal = [0usize; 5];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..runs {
        let (q, cands) = random_instance(&spec, &mut rng);
        let best = compose(Algorithm::Knapsack, &q, &cands, &opts)?.total_energy;
        for (a, &alg) in algorithms.iter().enumerate() {
            let e = compose(alg, &q, &cands, &opts)?.total_energy;
            energy[a] += e / runs as f64;
            optimal[a] += approx_eq(e, best) as usize;
        }
    }
    println!("algorithm  mean_mAh  optimal");
    for (a, alg) in algorithms.iter().enumerate() {
        println!("{:9} {:9.1} {:7}/{runs}", alg.as_str(), energy[a], optimal[a]);
    }
    Ok(())
}
