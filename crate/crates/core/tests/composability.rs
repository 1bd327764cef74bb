use ces_core::composability::{eligible, intensity_compatible, peak_load, split_query};
use ces_core::model::{
    approx_eq, approx_le, EnergyQuery, EnergyService, GeoPoint, PartialService, ServiceTerms,
    SocSeries, TimeInterval,
};
use proptest::prelude::*;

fn part(i: usize, st: f64, et: f64, intensity: f64) -> PartialService {
    let p = PartialService {
        parent_eid: format!("c{i}").as_str().into(),
        interval: TimeInterval { st, et },
        intensity,
        tsr: 0.8,
        alpha: 1.0,
        dec: 0.0,
    };
    p.slice(p.interval)
}

fn query(i_max: f64, cl: f64) -> EnergyQuery {
    EnergyQuery {
        qid: "q".into(),
        t: 0.0,
        l: GeoPoint::new(0.0, 0.0),
        re: 400.0,
        i_max,
        d: 3600.0,
        cl,
        soc: SocSeries {
            soc_initial: 600.0,
            soc_zero: 60.0,
            drain_rate: 240.0,
        },
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn set_strategy() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0.0f64..3000.0, 60.0f64..1800.0, 300u32..1500), 1..=6)
        .prop_map(|v| v.into_iter().map(|(st, len, i)| (st, (st + len).min(3600.0), i as f64)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    // admitting a set one service at a time succeeds in every order exactly
    // when the set's peak load fits under the cap
    #[test]
    fn admission_is_order_independent(raw in set_strategy(), i_max in 1000u32..3000) {
        let q = query(i_max as f64, 0.0);
        let services: Vec<PartialService> = raw
            .iter()
            .enumerate()
            .filter(|(_, r)| r.0 < r.1)
            .map(|(i, r)| part(i, r.0, r.1, r.2))
            .collect();
        prop_assume!(!services.is_empty());
        let fits = approx_le(peak_load(&services, &q.window()), q.i_max);
        for order in permutations(services.len()) {
            let mut selected = Vec::new();
            let mut all = true;
            for &k in &order {
                let verdict = intensity_compatible(&selected, &services[k], &q, &q.window());
                if verdict.composable {
                    selected.push(services[k].clone());
                } else {
                    all = false;
                }
            }
            prop_assert_eq!(all, fits, "order {:?}", order);
        }
    }

    #[test]
    fn peak_load_is_permutation_invariant(raw in set_strategy()) {
        let services: Vec<PartialService> = raw
            .iter()
            .enumerate()
            .filter(|(_, r)| r.0 < r.1)
            .map(|(i, r)| part(i, r.0, r.1, r.2))
            .collect();
        let w = TimeInterval { st: 0.0, et: 3600.0 };
        let base = peak_load(&services, &w);
        let mut rev = services.clone();
        rev.reverse();
        prop_assert_eq!(base, peak_load(&rev, &w));
        prop_assert!(base <= services.iter().map(|s| s.intensity).sum::<f64>());
    }

    #[test]
    fn eligibility_is_monotone_in_energy(dec in 0.0f64..50.0, extra in 0.0f64..50.0, cl in 0.0f64..3.0, pcl in 0.0f64..2.0) {
        let parent = EnergyService::from_terms_until(
            ServiceTerms {
                eid: "p".into(),
                owner_id: "o".into(),
                loc: GeoPoint::new(0.0, 0.0),
                st: 0.0,
                ec: 1e6,
                intensity: 1000.0,
                tsr: 0.7,
                alpha: 1.0,
                eub: 1.0,
                pcl,
            },
            3600.0,
        )
        .unwrap();
        let q = query(2000.0, cl);
        let mut s = PartialService::whole(&parent);
        s.dec = dec;
        let before = eligible(&s, &parent, &q, 10.0).composable;
        s.dec = dec + extra;
        let after = eligible(&s, &parent, &q, 10.0).composable;
        prop_assert!(!before || after);
    }

    #[test]
    fn split_windows_partition_the_demand(raw in set_strategy(), soc in 100.0f64..1500.0, drain in 10.0f64..800.0) {
        let mut q = query(2000.0, 0.0);
        q.soc = SocSeries { soc_initial: soc, soc_zero: 0.1 * soc, drain_rate: drain };
        let cands: Vec<PartialService> = raw
            .iter()
            .enumerate()
            .filter(|(_, r)| r.0 < r.1)
            .map(|(i, r)| part(i, r.0, r.1, r.2))
            .collect();
        let out = split_query(&q, &cands);
        let mut demand: f64 = out.subqueries.iter().map(|s| s.re).sum();
        if let Some(d) = &out.dropped_leading {
            demand += d.re;
            prop_assert!(d.t <= out.subqueries.first().map_or(f64::INFINITY, |s| s.t));
        }
        prop_assert!(approx_eq(demand, q.re));
        for w in out.subqueries.windows(2) {
            prop_assert!(w[0].t + w[0].d <= w[1].t);
        }
        for s in &out.subqueries {
            prop_assert!(s.t >= q.t && s.t + s.d <= q.t + q.d + 1e-9);
            prop_assert!(approx_eq(s.soc.soc_initial, q.soc_at(s.t)));
            if out.subqueries.len() > 1 || out.dropped_leading.is_some() {
                prop_assert!(s.qid.starts_with("q#"));
            }
        }
    }
}

#[test]
fn back_to_back_services_never_stack() {
    let q = query(1500.0, 0.0);
    let a = part(0, 0.0, 600.0, 1000.0);
    let b = part(1, 600.0, 1200.0, 1000.0);
    assert!(intensity_compatible(&[a], &b, &q, &q.window()).composable);
}

#[test]
fn covered_gap_splits_into_two() {
    let mut q = query(2000.0, 0.0);
    q.soc = SocSeries { soc_initial: 2000.0, soc_zero: 100.0, drain_rate: 100.0 };
    q.re = 300.0;
    let cands = [part(0, 0.0, 600.0, 1000.0), part(1, 2400.0, 3600.0, 1000.0)];
    let out = split_query(&q, &cands);
    let total: f64 = out.subqueries.iter().map(|s| s.re).sum::<f64>()
        + out.dropped_leading.as_ref().map_or(0.0, |d| d.re);
    assert!(approx_eq(total, 300.0));
    // the leading part needs 100 mAh and the battery has plenty to spare
    let dropped = out.dropped_leading.expect("leading part dropped");
    assert_eq!(dropped.qid, "q#0");
    assert!(approx_eq(dropped.re, 100.0));
    assert_eq!(out.subqueries.len(), 1);
    assert_eq!(out.subqueries[0].qid, "q#1");
    assert_eq!(out.subqueries[0].t, 2400.0);
}
