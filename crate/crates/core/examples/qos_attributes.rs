//! Quality attributes of a single provider: link success rate by distance,
//! usage regularity, deliverable energy and coordination losses.

use ces_core::model::UsagePattern;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ces_core::qos::{
    approximate_entropy, compute_tsr, coordination_loss, deliverable_energy, provision_consistency,
    CoordinationCosts, TsrParams, UsageTrace, DEFAULT_APEN_M, DEFAULT_APEN_R,
};

fn main() -> ces_core::Result<()> {
    let params = TsrParams::default();
    println!("distance_m  tsr");
    for d in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let tsr = compute_tsr(&params, d)?;
        println!("{d:>10.1}  {:.6}", tsr.value);
    }

    // half-hourly battery level over one day: a steady daily cycle, then
    // readings with no structure at all
    let cycle: Vec<f64> = (0..48)
        .map(|i| 60.0 + 30.0 * ((i as f64) * std::f64::consts::TAU / 48.0).sin())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let noise: Vec<f64> = (0..48).map(|_| rng.random_range(5.0..100.0)).collect();
    for (name, soc) in [("daily cycle", cycle), ("white noise", noise)] {
        let trace = UsageTrace::from_values(0.0, 1800.0, &soc)?;
        let kolent = approximate_entropy(&trace, DEFAULT_APEN_M, DEFAULT_APEN_R)?;
        println!("{name}: ApEn {kolent:.3}");
        for pattern in UsagePattern::ALL {
            let alpha = provision_consistency(kolent, pattern.factor());
            let dec = deliverable_energy(600.0, 0.85, alpha);
            println!("  {pattern:?}: alpha {alpha:.3}, 600 mAh at tsr 0.85 delivers {dec:.1} mAh");
        }
    }

    println!("alpha by ApEn     Suspend  Casual  Regular");
    for kolent in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let row: Vec<String> = UsagePattern::ALL
            .iter()
            .map(|p| format!("{:7.3}", provision_consistency(kolent, p.factor())))
            .collect();
        println!("{kolent:>13.1}  {}", row.join(" "));
    }

    let costs = CoordinationCosts {
        c_cloud: 0.02,
        f_cloud: 12.0,
        c_peer: 0.01,
        f_peer: 30.0,
    };
    println!("coordination loss per transfer: {:.2} mAh", coordination_loss(&costs));
    Ok(())
}
