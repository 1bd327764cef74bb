use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{smoothed_timeline, ComposeOptions};
use crate::model::{approx_le, CompositionPlan, EnergyQuery, PartialService, PlanChunk};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub tournament_k: usize,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 60,
            generations: 200,
            tournament_k: 3,
            mutation_rate: 0.05,
            seed: 7,
        }
    }
}

/// Stable per-query stream id so each query gets its own random sequence.
fn stream_of(qid: &str) -> u64 {
    qid.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

type Genome = Vec<u32>;

struct Problem<'a> {
    rosters: &'a [Vec<PartialService>],
}

impl Problem<'_> {
    fn random_gene(&self, k: usize, rng: &mut ChaCha8Rng) -> u32 {
        rng.random_range(0..=self.rosters[k].len() as u32)
    }

    // energy only; the intensity cap is not visible to the search
    fn fitness(&self, g: &Genome) -> f64 {
        g.iter()
            .zip(self.rosters)
            .map(|(&gene, roster)| match gene {
                0 => 0.0,
                i => roster[i as usize - 1].dec,
            })
            .sum()
    }
}

fn tournament<'p>(
    pop: &'p [(Genome, f64)],
    k: usize,
    rng: &mut ChaCha8Rng,
) -> &'p Genome {
    let mut best = rng.random_range(0..pop.len());
    for _ in 1..k.max(1) {
        let c = rng.random_range(0..pop.len());
        if pop[c].1 > pop[best].1 {
            best = c;
        }
    }
    &pop[best].0
}

/// Generational GA with one service (or none) per chunk. Intensity is ignored
/// during the search; the final genome is repaired by dropping the
/// lowest-value genes of any chunk over the cap.
pub fn compose_ga_baseline(
    q: &EnergyQuery,
    candidates: &[PartialService],
    opts: &ComposeOptions,
) -> CompositionPlan {
    let cfg = &opts.ga;
    let chunks = smoothed_timeline(q, candidates, opts).chunks();
    let rosters: Vec<Vec<PartialService>> = chunks.iter().map(|c| c.roster.clone()).collect();
    let problem = Problem { rosters: &rosters };
    let n = rosters.len();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream_of(&q.qid));

    let size = cfg.population.max(2);
    let mut pop: Vec<(Genome, f64)> = (0..size)
        .map(|_| {
            let g: Genome = (0..n).map(|k| problem.random_gene(k, &mut rng)).collect();
            let f = problem.fitness(&g);
            (g, f)
        })
        .collect();

    let best_of = |pop: &[(Genome, f64)]| {
        let mut b = 0;
        for (i, (_, f)) in pop.iter().enumerate() {
            if *f > pop[b].1 {
                b = i;
            }
        }
        b
    };

    for _ in 0..cfg.generations {
        let elite = pop[best_of(&pop)].clone();
        let mut next = Vec::with_capacity(size);
        next.push(elite);
        while next.len() < size {
            let a = tournament(&pop, cfg.tournament_k, &mut rng);
            let b = tournament(&pop, cfg.tournament_k, &mut rng);
            let cut = if n > 1 { rng.random_range(1..n) } else { 0 };
            let mut child: Genome = a[..cut].iter().chain(&b[cut..]).copied().collect();
            for (k, gene) in child.iter_mut().enumerate() {
                if rng.random_bool(cfg.mutation_rate.clamp(0.0, 1.0)) {
                    *gene = problem.random_gene(k, &mut rng);
                }
            }
            let f = problem.fitness(&child);
            next.push((child, f));
        }
        pop = next;
    }

    let genome = &pop[best_of(&pop)].0;
    let planned = chunks
        .into_iter()
        .zip(genome)
        .map(|(chunk, &gene)| {
            let mut selected: Vec<PartialService> = match gene {
                0 => Vec::new(),
                i => vec![chunk.roster[i as usize - 1].clone()],
            };
            while !approx_le(selected.iter().map(|s| s.intensity).sum(), q.i_max) {
                let (worst, _) = selected
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.dec.total_cmp(&b.1.dec))
                    .expect("an over-cap chunk has a selection");
                selected.remove(worst);
            }
            PlanChunk {
                interval: chunk.interval,
                selected,
            }
        })
        .collect();
    CompositionPlan::new(&q.qid, "ga", planned)
}
