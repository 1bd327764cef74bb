//! Index a synthetic scenario and pull the candidates of one query, checking
//! the R-tree against a plain scan.

use ces_core::index::{build_index, select_candidates, TsrModel, DEFAULT_ESD_METERS};
use ces_core::workload::{generate_scenario, ScenarioConfig};

fn main() -> ces_core::Result<()> {
    let scenario = generate_scenario(&ScenarioConfig {
        n_services: 2000,
        n_queries: 5,
        seed: 3,
        ..Default::default()
    })?;
    let index = build_index(&scenario.services)?;
    println!("{} services indexed, tree depth {}", index.len(), index.depth());

    for q in &scenario.queries {
        let found = select_candidates(&index, q, DEFAULT_ESD_METERS, TsrModel::Advertised)?;
        let scanned = scenario
            .services
            .iter()
            .filter(|s| {
                s.loc.distance(&q.l) <= DEFAULT_ESD_METERS && s.interval.intersect(&q.window()).is_some()
            })
            .count();
        assert_eq!(found.len(), scanned);
        let clipped = found
            .iter()
            .filter(|p| index.find(&p.parent_eid).is_some_and(|s| s.interval != p.interval))
            .count();
        let energy: f64 = found.iter().map(|p| p.dec).sum();
        println!(
            "{}: window {:.0}s, {} candidates ({} clipped), {:.0} mAh on offer",
            q.qid,
            q.d,
            found.len(),
            clipped,
            energy
        );
    }
    Ok(())
}
