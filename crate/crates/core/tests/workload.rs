use ces_core::model::validate_service;
use ces_core::qos::TsrParams;
use ces_core::workload::{
    check_scenario, generate_scenario, parse_scenario, read_queries_csv, read_services_csv,
    scenario_to_json, write_queries_csv, write_services_csv, MetaScenario, Range, ScenarioConfig,
};
use ces_core::Error;
use serde_json::Value;

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

fn within(got: f64, want: f64) -> bool {
    (got - want).abs() <= 0.05 * want
}

#[test]
fn drawn_quantities_follow_their_ranges() {
    let cfg = ScenarioConfig {
        n_services: 10_000,
        n_queries: 10_000,
        seed: 12,
        ..Default::default()
    };
    let s = generate_scenario(&cfg).unwrap();
    let checks = [
        ("service intensity", mean(s.services.iter().map(|x| x.intensity)), cfg.service_intensity.midpoint()),
        ("service tsr", mean(s.services.iter().map(|x| x.tsr)), cfg.tsr.midpoint()),
        ("service start", mean(s.services.iter().map(|x| x.interval.st)), cfg.business_hours.midpoint()),
        ("query cap", mean(s.queries.iter().map(|q| q.i_max)), cfg.query_intensity_cap.midpoint()),
        ("query duration", mean(s.queries.iter().map(|q| q.d)), cfg.query_duration.midpoint()),
        ("query energy", mean(s.queries.iter().map(|q| q.re)), cfg.required_energy.midpoint()),
        ("query start", mean(s.queries.iter().map(|q| q.t)), cfg.business_hours.midpoint()),
        // uniform over a disc: mean distance from the centre is 2R/3
        ("query radius", mean(s.queries.iter().map(|q| q.l.x.hypot(q.l.y))), 2.0 * cfg.area_radius / 3.0),
    ];
    for (name, got, want) in checks {
        assert!(within(got, want), "{name}: mean {got} vs {want}");
    }
    for x in &s.services {
        assert!(x.interval.duration_secs() <= cfg.service_duration.max + 1e-9);
        assert!(x.loc.x.hypot(x.loc.y) <= cfg.area_radius + 1e-9);
    }
    for q in &s.queries {
        assert!(cfg.required_energy.min <= q.re && q.re <= cfg.required_energy.max);
    }
}

#[test]
fn longer_queries_ask_for_more() {
    let s = generate_scenario(&ScenarioConfig {
        n_services: 0,
        n_queries: 4000,
        ..Default::default()
    })
    .unwrap();
    let (short, long): (Vec<_>, Vec<_>) = s.queries.iter().partition(|q| q.d < 3750.0);
    assert!(mean(short.iter().map(|q| q.re)) + 150.0 < mean(long.iter().map(|q| q.re)));

    let flat = generate_scenario(&ScenarioConfig {
        n_services: 0,
        n_queries: 4000,
        energy_duration_coupling: 0.0,
        ..Default::default()
    })
    .unwrap();
    let (short, long): (Vec<_>, Vec<_>) = flat.queries.iter().partition(|q| q.d < 3750.0);
    assert!((mean(short.iter().map(|q| q.re)) - mean(long.iter().map(|q| q.re))).abs() < 30.0);
}

#[test]
fn json_and_csv_round_trip() {
    let s = generate_scenario(&ScenarioConfig {
        n_services: 300,
        n_queries: 30,
        ..Default::default()
    })
    .unwrap();
    assert_eq!(parse_scenario(&scenario_to_json(&s).unwrap()).unwrap(), s);

    let mut buf = Vec::new();
    write_services_csv(&mut buf, &s.services).unwrap();
    assert_eq!(read_services_csv(buf.as_slice()).unwrap(), s.services);
    let mut buf = Vec::new();
    write_queries_csv(&mut buf, &s.queries).unwrap();
    assert_eq!(read_queries_csv(buf.as_slice()).unwrap(), s.queries);
}

fn doc() -> Value {
    let s = generate_scenario(&ScenarioConfig {
        n_services: 10,
        n_queries: 3,
        ..Default::default()
    })
    .unwrap();
    serde_json::from_str(&scenario_to_json(&s).unwrap()).unwrap()
}

#[test]
fn negative_capacity_is_reported_by_field_and_index() {
    let mut v = doc();
    v["services"][3]["ec"] = Value::from(-5.0);
    let report = check_scenario(&v.to_string()).unwrap();
    assert!(report.scenario.is_none());
    let hit = report.problems.iter().find(|p| {
        matches!(p, Error::Record { collection: "services", index: 3, field, .. } if field == "ec")
    });
    assert!(hit.is_some(), "{:?}", report.problems);
    assert!(hit.unwrap().to_string().starts_with("services[3].ec"));
}

#[test]
fn every_bad_record_is_listed() {
    let mut v = doc();
    v["services"][1]["tsr"] = Value::from(1.7);
    v["services"][6]["intensity"] = Value::from("fast");
    v["queries"][2]["i_max"] = Value::from(-1.0);
    let report = check_scenario(&v.to_string()).unwrap();
    let places: Vec<(String, usize, String)> = report
        .problems
        .iter()
        .map(|p| match p {
            Error::Record { collection, index, field, .. } => (collection.to_string(), *index, field.clone()),
            other => panic!("unexpected {other}"),
        })
        .collect();
    assert!(places.contains(&("services".into(), 1, "tsr".into())), "{places:?}");
    assert!(places.iter().any(|p| p.0 == "services" && p.1 == 6), "{places:?}");
    assert!(places.contains(&("queries".into(), 2, "i_max".into())), "{places:?}");
}

#[test]
fn missing_link_parameters_take_defaults() {
    let mut v = doc();
    v["config"].as_object_mut().unwrap().remove("tsr_params");
    let s = parse_scenario(&v.to_string()).unwrap();
    assert_eq!(s.config.tsr_params, TsrParams::default());
    v.as_object_mut().unwrap().remove("config");
    assert_eq!(parse_scenario(&v.to_string()).unwrap().config, ScenarioConfig::default());
}

#[test]
fn ranges_are_written_as_pairs() {
    let v = doc();
    assert_eq!(v["config"]["service_intensity"], serde_json::json!([500.0, 1500.0]));
    let r: Range = serde_json::from_value(serde_json::json!([1.0, 2.0])).unwrap();
    assert_eq!(r, Range::new(1.0, 2.0));
}

#[test]
fn generated_services_are_valid() {
    let s = generate_scenario(&ScenarioConfig {
        n_services: 3000,
        time_grid_secs: Some(60.0),
        ..Default::default()
    })
    .unwrap();
    for x in &s.services {
        validate_service(x).unwrap();
        assert_eq!(x.interval.st % 60.0, 0.0);
    }
}

#[test]
fn meta_scenarios_draw_from_one_half() {
    let base = ScenarioConfig {
        n_services: 2000,
        n_queries: 2000,
        ..Default::default()
    };
    let sd = base.service_duration.midpoint();
    let qd = base.query_duration.midpoint();
    for (meta, short_svc, short_q) in [
        (MetaScenario::ShortSvcShortQ, true, true),
        (MetaScenario::ShortSvcLongQ, true, false),
        (MetaScenario::LongSvcShortQ, false, true),
        (MetaScenario::LongSvcLongQ, false, false),
    ] {
        let s = generate_scenario(&ScenarioConfig {
            meta_scenario: meta,
            ..base.clone()
        })
        .unwrap();
        // services may also end early when their energy runs out
        let svc = mean(s.services.iter().map(|x| x.interval.duration_secs()));
        if short_svc {
            assert!(s.services.iter().all(|x| x.interval.duration_secs() <= sd + 1e-6));
        } else {
            assert!(svc > 0.8 * sd, "{meta:?}: {svc}");
        }
        assert!(s.queries.iter().all(|q| (q.d <= qd + 1e-6) == short_q || q.d == qd));
    }
}
