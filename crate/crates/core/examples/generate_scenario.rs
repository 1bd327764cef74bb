//! Generate a seeded scenario, write it as JSON and CSV, and read it back.

use ces_core::workload::{
    generate_scenario, load_scenario, read_queries_csv, read_services_csv, save_scenario,
    write_queries_csv, write_services_csv, MetaScenario, ScenarioConfig,
};

fn main() -> ces_core::Result<()> {
    let dir = tempfile::tempdir()?;
    for meta in [MetaScenario::ShortSvcShortQ, MetaScenario::LongSvcLongQ] {
        let cfg = ScenarioConfig {
            n_services: 400,
            n_queries: 40,
            meta_scenario: meta,
            seed: 9,
            ..Default::default()
        };
        let scenario = generate_scenario(&cfg)?;
        let mean_len = scenario.services.iter().map(|s| s.interval.duration_secs()).sum::<f64>()
            / scenario.services.len() as f64;
        let mean_re = scenario.queries.iter().map(|q| q.re).sum::<f64>() / scenario.queries.len() as f64;
        println!("{meta:?}: mean service length {mean_len:.0}s, mean request {mean_re:.0} mAh");

        let json = dir.path().join("scenario.json");
        save_scenario(&scenario, &json)?;
        assert_eq!(load_scenario(&json)?, scenario);

        let mut services = Vec::new();
        write_services_csv(&mut services, &scenario.services)?;
        let mut queries = Vec::new();
        write_queries_csv(&mut queries, &scenario.queries)?;
        assert_eq!(read_services_csv(services.as_slice())?.len(), scenario.services.len());
        assert_eq!(read_queries_csv(queries.as_slice())?.len(), scenario.queries.len());
        println!(
            "  json {} bytes, services csv {} bytes, queries csv {} bytes",
            std::fs::metadata(&json)?.len(),
            services.len(),
            queries.len()
        );
    }
    Ok(())
}
