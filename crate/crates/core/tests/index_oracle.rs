use std::collections::BTreeSet;

use ces_core::index::{build_index, search_cube, select_candidates, StBox, StIndex, TsrModel};
use ces_core::model::{EnergyQuery, EnergyService, GeoPoint, ServiceTerms, SocSeries};
use ces_core::qos::{compute_tsr, TsrParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn service(i: usize, x: f64, y: f64, st: f64, len: f64, intensity: f64) -> EnergyService {
    EnergyService::from_terms_until(
        ServiceTerms {
            eid: format!("s{i:04}").as_str().into(),
            owner_id: format!("o{i}"),
            loc: GeoPoint::new(x, y),
            st,
            ec: 1e6,
            intensity,
            tsr: 0.9,
            alpha: 1.0,
            eub: 1.0,
            pcl: 0.0,
        },
        st + len,
    )
    .unwrap()
}

fn random_services(rng: &mut ChaCha8Rng, n: usize) -> Vec<EnergyService> {
    (0..n)
        .map(|i| {
            service(
                i,
                rng.random_range(-50.0..50.0),
                rng.random_range(-50.0..50.0),
                rng.random_range(0.0..20_000.0),
                rng.random_range(60.0..3600.0),
                rng.random_range(500..=1500) as f64,
            )
        })
        .collect()
}

fn query(x: f64, y: f64, t: f64, d: f64) -> EnergyQuery {
    EnergyQuery {
        qid: "q".into(),
        t,
        l: GeoPoint::new(x, y),
        re: 100.0,
        i_max: 2000.0,
        d,
        cl: 0.0,
        soc: SocSeries {
            soc_initial: 500.0,
            soc_zero: 10.0,
            drain_rate: 50.0,
        },
    }
}

#[test]
fn box_queries_match_a_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let services = random_services(&mut rng, 1000);
    for fanout in [4, 8, 16] {
        let idx = StIndex::with_fanout(&services, fanout).unwrap();
        for _ in 0..100 {
            let lo = [
                rng.random_range(-60.0..40.0),
                rng.random_range(-60.0..40.0),
                rng.random_range(-1000.0..20_000.0),
            ];
            let hi = [
                lo[0] + rng.random_range(0.0..30.0),
                lo[1] + rng.random_range(0.0..30.0),
                lo[2] + rng.random_range(0.0..4000.0),
            ];
            let b = StBox::new(lo, hi).unwrap();
            let want: Vec<usize> = (0..services.len())
                .filter(|&i| StBox::of_service(&services[i]).intersects(&b))
                .collect();
            assert_eq!(idx.query(&b), want, "fanout {fanout}");
        }
    }
}

#[test]
fn large_index_is_balanced_enough() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let idx = build_index(&random_services(&mut rng, 5000)).unwrap();
    assert_eq!(idx.len(), 5000);
    assert!(idx.depth() <= 8, "depth {}", idx.depth());
}

#[test]
fn distance_model_rescales_clipped_energy() {
    let s = service(0, 1.0, 0.0, 0.0, 3600.0, 1000.0);
    let idx = build_index(std::slice::from_ref(&s)).unwrap();
    let params = TsrParams::default();
    let q = query(0.0, 0.0, 0.0, 1800.0);
    let got = select_candidates(&idx, &q, 5.0, TsrModel::Distance(params)).unwrap();
    let tsr = compute_tsr(&params, 1.0).unwrap().value;
    assert_eq!(got.len(), 1);
    assert_eq!(got[0].tsr, tsr);
    assert!((got[0].dec - 0.5 * 1000.0 * tsr).abs() < 1e-9);
}

#[test]
fn search_cube_spans_the_window() {
    let q = query(2.0, -3.0, 100.0, 600.0);
    let cube = search_cube(&q, 5.0);
    assert_eq!(cube.min, [-3.0, -8.0, 100.0]);
    assert_eq!(cube.max, [7.0, 2.0, 700.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn selection_equals_brute_force(
        seed in any::<u64>(),
        n in 0usize..80,
        qx in -20.0f64..20.0,
        qy in -20.0f64..20.0,
        t in 0.0f64..20_000.0,
        d in 60.0f64..7200.0,
        esd in 0.5f64..15.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let services: Vec<EnergyService> = random_services(&mut rng, n)
            .into_iter()
            .map(|mut s| {
                s.loc = GeoPoint::new(s.loc.x * 0.4, s.loc.y * 0.4);
                s
            })
            .collect();
        let idx = build_index(&services).unwrap();
        let q = query(qx, qy, t, d);
        let got: BTreeSet<String> = select_candidates(&idx, &q, esd, TsrModel::Advertised)
            .unwrap()
            .into_iter()
            .map(|p| p.parent_eid.to_string())
            .collect();
        let want: BTreeSet<String> = services
            .iter()
            .filter(|s| s.loc.distance(&q.l) <= esd && s.interval.intersect(&q.window()).is_some())
            .map(|s| s.eid.to_string())
            .collect();
        prop_assert_eq!(got, want);
    }
}
