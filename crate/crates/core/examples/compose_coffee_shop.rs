//! The coffee-shop query composed by every strategy.

use ces_core::compose::Algorithm;
use ces_core::fixtures::coffee_shop;
use ces_core::qos::TsrParams;
use ces_core::Engine;

fn main() -> ces_core::Result<()> {
    let f = coffee_shop();
    let engine = Engine::new(&f.services, TsrParams::default(), f.engine.clone())?;
    println!("query {} needs {} mAh under a {} mA cap", f.query.qid, f.query.re, f.query.i_max);
    for alg in Algorithm::ALL {
        let plan = engine.compose(alg, &f.query)?;
        println!("{:9} {:7.2} mAh", alg.as_str(), plan.total_energy);
        for c in &plan.chunks {
            let ids: Vec<&str> = c.selected.iter().map(|p| p.parent_eid.as_str()).collect();
            println!(
                "          +{:>4.0}s..+{:>4.0}s  {:5.0} mA  {}",
                c.interval.st - f.query.t,
                c.interval.et - f.query.t,
                c.load(),
                ids.join(" + ")
            );
        }
    }
    Ok(())
}
