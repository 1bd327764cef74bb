//! A long request with a gap in supply, split into sub-requests that the
//! device bridges on its own battery.

use ces_core::composability::split_query;
use ces_core::model::{EnergyQuery, GeoPoint, PartialService, SocSeries, TimeInterval};

fn offer(eid: &str, st: f64, et: f64) -> PartialService {
    let p = PartialService {
        parent_eid: eid.into(),
        interval: TimeInterval { st, et },
        intensity: 1000.0,
        tsr: 0.8,
        alpha: 1.0,
        dec: 0.0,
    };
    p.slice(p.interval)
}

fn main() {
    let q = EnergyQuery {
        qid: "commute".into(),
        t: 0.0,
        l: GeoPoint::new(0.0, 0.0),
        re: 600.0,
        i_max: 2000.0,
        d: 7200.0,
        cl: 0.0,
        soc: SocSeries {
            soc_initial: 900.0,
            soc_zero: 100.0,
            drain_rate: 200.0,
        },
    };
    let offers = [
        offer("bus-stop", 0.0, 1200.0),
        offer("train", 900.0, 2400.0),
        offer("office", 4800.0, 7200.0),
    ];
    let out = split_query(&q, &offers);
    if let Some(d) = &out.dropped_leading {
        println!("dropped {} ({:.0} mAh): the battery covers it", d.qid, d.re);
    }
    for s in &out.subqueries {
        println!(
            "{}: {:.0}s..{:.0}s, needs {:.1} mAh, starts at {:.0} mAh charge",
            s.qid,
            s.t,
            s.t + s.d,
            s.re,
            s.soc.soc_initial
        );
    }
}
