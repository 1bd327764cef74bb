//! Small hand-built scenarios with known answers.

use crate::compose::ComposeOptions;
use crate::model::{EnergyQuery, EnergyService, GeoPoint, ServiceTerms, SocSeries};
use crate::pipeline::EngineConfig;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub services: Vec<EnergyService>,
    pub query: EnergyQuery,
    pub engine: EngineConfig,
}

fn service(eid: &str, x: f64, st: f64, et: f64, intensity: f64, tsr: f64) -> EnergyService {
    EnergyService::from_terms_until(
        ServiceTerms {
            eid: eid.into(),
            owner_id: format!("owner-{eid}"),
            loc: GeoPoint::new(x, 1.0),
            st,
            ec: 10_000.0,
            intensity,
            tsr,
            alpha: 1.0,
            eub: 1.0,
            pcl: 0.0,
        },
        et,
    )
    .expect("fixture services are valid")
}

/// A consumer in a coffee shop asks for 450 mAh between 17:05 and 17:35
/// with a 2 A cap. Five nearby providers each offer less than that.
///
/// Admitting whole services by energy picks CES5 alone (330 mAh), which
/// blocks everything else. Splitting the window at 17:15 and 17:25 and
/// taking CES1, then CES1 + CES3, then CES3 + CES4 reaches 450 mAh.
pub fn coffee_shop() -> Fixture {
    let t = 17.0 * 3600.0 + 300.0;
    let services = vec![
        service("CES1", 1.0, t, t + 1200.0, 1000.0, 0.7),
        service("CES2", -1.5, t - 600.0, t + 600.0, 1100.0, 0.5),
        service("CES3", 2.0, t + 600.0, t + 1800.0, 1000.0, 0.55),
        service("CES4", -2.5, t + 1200.0, t + 1800.0, 800.0, 0.25),
        service("CES5", 0.5, t, t + 1800.0, 1320.0, 0.5),
    ];
    let query = EnergyQuery {
        qid: "X".into(),
        t,
        l: GeoPoint::new(0.0, 0.0),
        re: 450.0,
        i_max: 2000.0,
        d: 1800.0,
        cl: 0.5,
        soc: SocSeries {
            soc_initial: 400.0,
            soc_zero: 40.0,
            drain_rate: 150.0,
        },
    };
    Fixture {
        services,
        query,
        engine: EngineConfig::default(),
    }
}

/// Per-slot delivery rates `I * Tsr * alpha` in mA for the seven-slot
/// scenario, in service order CES1..CES5.
pub const SEVEN_SLOT_RATES: [f64; 5] = [920.0, 780.0, 1090.0, 900.0, 660.0];

/// Slot delimiters of the seven-slot scenario, seconds from the window start.
pub const SEVEN_SLOT_CUTS: [f64; 8] = [0.0, 240.0, 480.0, 660.0, 900.0, 1200.0, 1560.0, 1800.0];

/// Five services over a 30 minute window cut into seven slots of 4, 4, 3,
/// 4, 5, 6 and 4 minutes. The 1.5 A cap admits one service per slot.
pub fn seven_slot() -> Fixture {
    let services = vec![
        service("CES1", 1.0, -600.0, 660.0, 1000.0, 0.92),
        service("CES2", 2.0, 1200.0, 2400.0, 1000.0, 0.78),
        service("CES3", -1.0, 240.0, 900.0, 1250.0, 0.872),
        service("CES4", -2.0, 480.0, 1560.0, 1000.0, 0.9),
        service("CES5", 3.0, -300.0, 2100.0, 1100.0, 0.6),
    ];
    let query = EnergyQuery {
        qid: "Q".into(),
        t: 0.0,
        l: GeoPoint::new(0.0, 0.0),
        re: 478.0,
        i_max: 1500.0,
        d: 1800.0,
        cl: 0.05,
        soc: SocSeries {
            soc_initial: 500.0,
            soc_zero: 25.0,
            drain_rate: 100.0,
        },
    };
    Fixture {
        services,
        query,
        engine: EngineConfig {
            compose: ComposeOptions {
                min_chunk_seconds: Some(30.0),
                ..Default::default()
            },
            ..Default::default()
        },
    }
}
