//! A small completeness sweep and a runtime sweep, printed as tables.

use ces_core::compose::Algorithm;
use ces_core::experiment::{run_completeness, run_scalability};
use ces_core::workload::ScenarioConfig;
use ces_core::EngineConfig;

fn main() -> ces_core::Result<()> {
    let cfg = ScenarioConfig {
        n_queries: 40,
        ..Default::default()
    };
    let engine = EngineConfig::default();
    let algorithms = [
        Algorithm::Knapsack,
        Algorithm::Heuristic,
        Algorithm::Greedy,
        Algorithm::Priority,
        Algorithm::Ga,
    ];
    let ratios = [1.0, 3.0, 5.0, 7.0];
    let records = run_completeness(&cfg, &engine, &ratios, &[0.7, 0.8, 0.9, 1.0], &algorithms, 2, 4)?;
    print!("ratio");
    for a in algorithms {
        print!("{:>10}", a.as_str());
    }
    println!();
    for r in ratios {
        print!("{r:>5}");
        for a in algorithms {
            let rec = records
                .iter()
                .find(|x| x.sq.is_none() && x.ratio == r && x.algorithm == a)
                .expect("averaged record");
            print!("{:>10.3}", rec.completeness);
        }
        println!();
    }

    println!("\nmedian composition time (us)");
    for rec in run_scalability(&cfg, &engine, &[2.0, 6.0], &algorithms)? {
        println!("ratio {} {:9} {:8.1}", rec.ratio, rec.algorithm.as_str(), rec.p50_us);
    }
    Ok(())
}
