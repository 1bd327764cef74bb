//! Split a query window at every service boundary, print the energy each
//! service offers per chunk, then merge thin chunks.

use ces_core::chunking::{chunk_query, smooth_thin_chunks};
use ces_core::fixtures::seven_slot;
use ces_core::qos::TsrParams;
use ces_core::Engine;

fn main() -> ces_core::Result<()> {
    let f = seven_slot();
    let engine = Engine::new(&f.services, TsrParams::default(), f.engine.clone())?;
    let candidates = engine.candidates(&f.query)?;
    let chunks = chunk_query(&f.query, &candidates);

    print!("service ");
    for c in &chunks {
        print!("{:>11}", format!("{:.0}-{:.0}", c.interval.st, c.interval.et));
    }
    println!();
    for s in &f.services {
        print!("{:7} ", s.eid);
        for c in &chunks {
            match c.roster.iter().find(|p| p.parent_eid == s.eid) {
                Some(p) => print!("{:>11.2}", p.dec),
                None => print!("{:>11}", "-"),
            }
        }
        println!();
    }

    for width in [200.0, 300.0] {
        let merged = smooth_thin_chunks(&chunks, width);
        let spans: Vec<String> = merged
            .iter()
            .map(|c| format!("{:.0}-{:.0}", c.interval.st, c.interval.et))
            .collect();
        println!("min width {width:.0}s: {} chunks {}", merged.len(), spans.join(" "));
    }
    Ok(())
}
