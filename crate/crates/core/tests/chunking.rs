use ces_core::chunking::{chunk_query, smooth_thin_chunks, Chunk, Timeline};
use ces_core::model::{EnergyQuery, GeoPoint, PartialService, SocSeries, TimeInterval};
use proptest::prelude::*;

fn part(i: usize, st: f64, et: f64, intensity: f64) -> PartialService {
    let p = PartialService {
        parent_eid: format!("c{i:02}").as_str().into(),
        interval: TimeInterval { st, et },
        intensity,
        tsr: 0.9,
        alpha: 1.0,
        dec: 0.0,
    };
    p.slice(p.interval)
}

fn query(d: f64) -> EnergyQuery {
    EnergyQuery {
        qid: "q".into(),
        t: 0.0,
        l: GeoPoint::new(0.0, 0.0),
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

fn candidates() -> impl Strategy<Value = Vec<PartialService>> {
    prop::collection::vec((-300.0f64..1800.0, 1.0f64..900.0, 500u32..1500), 0..14).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (st, len, intensity))| part(i, st.round(), (st + len).round().max(st.round() + 1.0), intensity as f64))
            .collect()
    })
}

/// Straightforward smoothing used as the reference: rescan from the left
/// after every merge and classify delimiters from scratch.
fn reference_smooth(window: TimeInterval, cands: &[PartialService], min_width: f64) -> (Vec<f64>, Vec<(String, usize, usize)>) {
    let clipped: Vec<PartialService> = cands
        .iter()
        .filter_map(|c| c.interval.intersect(&window).map(|i| c.slice(i)))
        .collect();
    let mut cuts = vec![window.st, window.et];
    for c in &clipped {
        cuts.push(c.interval.st);
        cuts.push(c.interval.et);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let pos = |cuts: &[f64], t: f64| cuts.iter().position(|&c| c == t).unwrap();
    let mut items: Vec<(String, f64, usize, usize, bool)> = clipped
        .iter()
        .map(|c| (c.parent_eid.to_string(), c.intensity, pos(&cuts, c.interval.st), pos(&cuts, c.interval.et), true))
        .collect();

    // 0 start, 1 end, 2 both, 3 neither
    let kind = |items: &[(String, f64, usize, usize, bool)], j: usize| {
        let (mut s, mut e, mut peak) = (false, false, 0.0f64);
        for it in items.iter().filter(|it| it.4) {
            if it.2 == j {
                s = true;
                peak = peak.max(it.1);
            }
            if it.3 == j {
                e = true;
                peak = peak.max(it.1);
            }
        }
        let k = match (s, e) {
            (true, false) => 0,
            (false, true) => 1,
            (true, true) => 2,
            _ => 3,
        };
        (k, peak)
    };
    while cuts.len() > 2 {
        let Some(k) = (0..cuts.len() - 1).find(|&k| cuts[k + 1] - cuts[k] < min_width) else {
            break;
        };
        let (l, r) = (k, k + 1);
        let j = if l == 0 {
            r
        } else if r == cuts.len() - 1 {
            l
        } else {
            let (lk, li) = kind(&items, l);
            let (rk, ri) = kind(&items, r);
            if lk == 1 && rk == 1 {
                r
            } else if lk == 0 && rk == 0 {
                l
            } else if li < ri {
                l
            } else if ri < li {
                r
            } else if lk == 1 {
                l
            } else {
                r
            }
        };
        for it in items.iter_mut().filter(|it| it.4) {
            if it.2 > j {
                it.2 -= 1;
            }
            if it.3 >= j {
                it.3 -= 1;
            }
            if it.2 >= it.3 {
                it.4 = false;
            }
        }
        cuts.remove(j);
    }
    let mut spans: Vec<(String, usize, usize)> = items.into_iter().filter(|it| it.4).map(|it| (it.0, it.2, it.3)).collect();
    spans.sort();
    (cuts, spans)
}

fn assert_partition(chunks: &[Chunk], window: TimeInterval) {
    assert_eq!(chunks.first().unwrap().interval.st, window.st);
    assert_eq!(chunks.last().unwrap().interval.et, window.et);
    for w in chunks.windows(2) {
        assert_eq!(w[0].interval.et, w[1].interval.st);
    }
    for c in chunks {
        assert!(c.interval.st < c.interval.et);
        for p in &c.roster {
            assert_eq!(p.interval, c.interval);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn chunks_partition_the_window(cands in candidates()) {
        let q = query(1800.0);
        let chunks = chunk_query(&q, &cands);
        assert_partition(&chunks, q.window());
        // every candidate covers exactly the chunks inside its clipped span
        for c in &chunks {
            for cand in &cands {
                let inside = cand.interval.st <= c.interval.st && c.interval.et <= cand.interval.et;
                let listed = c.roster.iter().any(|p| p.parent_eid == cand.parent_eid);
                prop_assert_eq!(inside, listed);
            }
        }
    }

    #[test]
    fn chunking_ignores_candidate_order(cands in candidates(), seed in any::<u64>()) {
        let q = query(1800.0);
        let mut shuffled = cands.clone();
        let n = shuffled.len();
        if n > 1 {
            for i in 0..n {
                let j = (seed.rotate_left(i as u32) as usize) % n;
                shuffled.swap(i, j);
            }
        }
        prop_assert_eq!(chunk_query(&q, &cands), chunk_query(&q, &shuffled));
    }

    #[test]
    fn smoothing_matches_reference(cands in candidates(), min_width in 1.0f64..400.0) {
        let q = query(1800.0);
        let mut t = Timeline::new(q.window(), &cands);
        t.smooth(min_width);
        let mut spans: Vec<(String, usize, usize)> = t.spans().map(|(p, s, e)| (p.parent_eid.to_string(), s, e)).collect();
        spans.sort();
        let (cuts, want) = reference_smooth(q.window(), &cands, min_width);
        prop_assert_eq!(t.cuts(), &cuts[..]);
        prop_assert_eq!(spans, want);
    }

    #[test]
    fn smoothing_leaves_no_thin_chunk(cands in candidates(), min_width in 1.0f64..400.0) {
        let q = query(1800.0);
        let chunks = chunk_query(&q, &cands);
        let smoothed = smooth_thin_chunks(&chunks, min_width);
        assert_partition(&smoothed, q.window());
        prop_assert!(smoothed.len() <= chunks.len());
        if smoothed.len() > 1 {
            prop_assert!(smoothed.iter().all(|c| c.interval.duration_secs() >= min_width));
        }
    }
}

#[test]
fn empty_candidates_give_one_empty_chunk() {
    let q = query(600.0);
    let chunks = chunk_query(&q, &[]);
    assert_eq!(chunks.len(), 1);
    assert!(chunks[0].roster.is_empty());
}
