//! Chunking of a query window at service start and end times, thin-chunk
//! smoothing, and per-chunk rosters.

use crate::model::{EnergyQuery, PartialService, TimeInterval};

pub const MIN_CHUNK_FLOOR_SECS: f64 = 30.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Chunk {
    pub interval: TimeInterval,
    /// Services covering the chunk, clipped to it, ordered by id.
    pub roster: Vec<PartialService>,
}

#[derive(Debug, Clone)]
struct Item {
    base: PartialService,
    start: usize,
    end: usize,
    alive: bool,
}

/// Chunk delimiters over a window plus the span of each candidate expressed
/// as delimiter indices. Smoothing edits delimiters without rebuilding
/// rosters; [`Timeline::chunks`] materialises them.
#[derive(Debug, Clone)]
pub struct Timeline {
    cuts: Vec<f64>,
    items: Vec<Item>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Start,
    End,
    Mixed,
    Bare,
}

fn position(cuts: &[f64], t: f64) -> usize {
    cuts.binary_search_by(|c| c.total_cmp(&t))
        .expect("every clipped endpoint is a delimiter")
}

impl Timeline {
    pub fn new(window: TimeInterval, candidates: &[PartialService]) -> Self {
        let clipped: Vec<PartialService> = candidates
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
        let items = clipped
            .into_iter()
            .map(|c| Item {
                start: position(&cuts, c.interval.st),
                end: position(&cuts, c.interval.et),
                base: c,
                alive: true,
            })
            .collect();
        Self { cuts, items }
    }

    /// Recovers delimiters and spans from an ordered chunk partition. A service
    /// present in consecutive chunks becomes a single span.
    pub fn from_chunks(chunks: &[Chunk]) -> Self {
        let mut cuts: Vec<f64> = chunks.iter().map(|c| c.interval.st).collect();
        if let Some(last) = chunks.last() {
            cuts.push(last.interval.et);
        }
        let mut items: Vec<Item> = Vec::new();
        let mut open: std::collections::HashMap<&str, usize> = Default::default();
        for (k, chunk) in chunks.iter().enumerate() {
            for p in &chunk.roster {
                match open.get(p.parent_eid.as_str()) {
                    Some(&i) if items[i].end == k => items[i].end = k + 1,
                    _ => {
                        open.insert(p.parent_eid.as_str(), items.len());
                        items.push(Item {
                            base: p.clone(),
                            start: k,
                            end: k + 1,
                            alive: true,
                        });
                    }
                }
            }
        }
        Self { cuts, items }
    }

    pub fn window(&self) -> TimeInterval {
        TimeInterval {
            st: self.cuts[0],
            et: *self.cuts.last().expect("a timeline has two delimiters"),
        }
    }

    pub fn len(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn interval(&self, k: usize) -> TimeInterval {
        TimeInterval {
            st: self.cuts[k],
            et: self.cuts[k + 1],
        }
    }

    /// Surviving candidates with their chunk index range `[first, last)`.
    pub fn spans(&self) -> impl Iterator<Item = (&PartialService, usize, usize)> + '_ {
        self.items
            .iter()
            .filter(|i| i.alive)
            .map(|i| (&i.base, i.start, i.end))
    }

    /// Merges chunks narrower than `min_width` until none is left or a single
    /// chunk remains, always handling the leftmost thin chunk first.
    ///
    /// For thin chunk `[a, b]`, the first chunk drops `b` and the last drops
    /// `a`. Otherwise two ending delimiters drop `b` and two starting ones
    /// drop `a`. In any other case the delimiter whose services draw less
    /// current goes. On a tie, `a` goes if it is an end, else `b`. Spans that
    /// started at a dropped delimiter start at the next one, spans that ended
    /// there end at the previous one, and spans left empty disappear.
    pub fn smooth(&mut self, min_width: f64) {
        let m = self.cuts.len();
        if m <= 2 {
            return;
        }
        let last = m - 1;
        // delimiters form a linked list addressed by their original index
        let mut next: Vec<usize> = (1..=m).collect();
        let mut prev: Vec<usize> = (0..m).map(|i| i.wrapping_sub(1)).collect();
        let mut starts: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut ends: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (i, item) in self.items.iter().enumerate().filter(|(_, i)| i.alive) {
            starts[item.start].push(i);
            ends[item.end].push(i);
        }
        let kind = |items: &[Item], starts: &[usize], ends: &[usize]| {
            let mut peak = 0.0f64;
            let mut seen = |list: &[usize]| {
                let mut any = false;
                for &i in list.iter().filter(|&&i| items[i].alive) {
                    any = true;
                    peak = peak.max(items[i].base.intensity);
                }
                any
            };
            let (s, e) = (seen(starts), seen(ends));
            let kind = match (s, e) {
                (true, false) => Kind::Start,
                (false, true) => Kind::End,
                (true, true) => Kind::Mixed,
                (false, false) => Kind::Bare,
            };
            (kind, peak)
        };

        let mut chunks = m - 1;
        let mut k = 0;
        while chunks > 1 {
            while k != last && self.cuts[next[k]] - self.cuts[k] >= min_width {
                k = next[k];
            }
            if k == last {
                break;
            }
            let (left, right) = (k, next[k]);
            let drop = if left == 0 {
                right
            } else if right == last {
                left
            } else {
                let (lk, li) = kind(&self.items, &starts[left], &ends[left]);
                let (rk, ri) = kind(&self.items, &starts[right], &ends[right]);
                match (lk, rk) {
                    (Kind::End, Kind::End) => right,
                    (Kind::Start, Kind::Start) => left,
                    _ if li < ri => left,
                    _ if ri < li => right,
                    (Kind::End, _) => left,
                    _ => right,
                }
            };
            let (p, n) = (prev[drop], next[drop]);
            next[p] = n;
            prev[n] = p;
            for i in std::mem::take(&mut starts[drop]) {
                let item = &mut self.items[i];
                if !item.alive {
                    continue;
                }
                item.start = n;
                if item.start == item.end {
                    item.alive = false;
                } else {
                    starts[n].push(i);
                }
            }
            for i in std::mem::take(&mut ends[drop]) {
                let item = &mut self.items[i];
                if !item.alive {
                    continue;
                }
                item.end = p;
                if item.start == item.end {
                    item.alive = false;
                } else {
                    ends[p].push(i);
                }
            }
            chunks -= 1;
            // chunks left of the merge are unchanged and wide enough
            if drop == left {
                k = p;
            }
        }

        let mut rank = vec![usize::MAX; m];
        let mut cuts = Vec::with_capacity(chunks + 1);
        let mut node = 0;
        loop {
            rank[node] = cuts.len();
            cuts.push(self.cuts[node]);
            if node == last {
                break;
            }
            node = next[node];
        }
        for item in self.items.iter_mut().filter(|i| i.alive) {
            item.start = rank[item.start];
            item.end = rank[item.end];
        }
        self.cuts = cuts;
    }

    pub fn roster(&self, k: usize) -> Vec<PartialService> {
        let interval = self.interval(k);
        let mut out: Vec<PartialService> = self
            .spans()
            .filter(|&(_, s, e)| s <= k && k < e)
            .map(|(p, _, _)| p.slice(interval))
            .collect();
        out.sort_by(|a, b| a.parent_eid.cmp(&b.parent_eid));
        out
    }

    pub fn chunks(&self) -> Vec<Chunk> {
        let mut rosters: Vec<Vec<PartialService>> = vec![Vec::new(); self.len()];
        for (p, s, e) in self.spans() {
            for (k, roster) in rosters.iter_mut().enumerate().take(e).skip(s) {
                roster.push(p.slice(self.interval(k)));
            }
        }
        rosters
            .into_iter()
            .enumerate()
            .map(|(k, mut roster)| {
                roster.sort_by(|a, b| a.parent_eid.cmp(&b.parent_eid));
                Chunk {
                    interval: self.interval(k),
                    roster,
                }
            })
            .collect()
    }
}

pub fn chunk_query(q: &EnergyQuery, candidates: &[PartialService]) -> Vec<Chunk> {
    Timeline::new(q.window(), candidates).chunks()
}

pub fn smooth_thin_chunks(chunks: &[Chunk], min_width: f64) -> Vec<Chunk> {
    if chunks.is_empty() {
        return Vec::new();
    }
    let mut t = Timeline::from_chunks(chunks);
    t.smooth(min_width);
    t.chunks()
}

/// Shortest chunk worth a connection: long enough for a median-intensity
/// service to deliver `margin` times the coordination loss, never below 30 s.
pub fn default_min_width(q: &EnergyQuery, candidates: &[PartialService], margin: f64) -> f64 {
    let mut intensities: Vec<f64> = candidates.iter().map(|c| c.intensity).collect();
    if intensities.is_empty() || q.cl <= 0.0 {
        return MIN_CHUNK_FLOOR_SECS;
    }
    intensities.sort_by(f64::total_cmp);
    let n = intensities.len();
    let median = if n % 2 == 1 {
        intensities[n / 2]
    } else {
        (intensities[n / 2 - 1] + intensities[n / 2]) / 2.0
    };
    (3600.0 * q.cl * margin / median).max(MIN_CHUNK_FLOOR_SECS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GeoPoint, SocSeries};

    fn query() -> EnergyQuery {
        EnergyQuery {
            qid: "q".into(),
            t: 0.0,
            l: GeoPoint::default(),
            re: 100.0,
            i_max: 2000.0,
            d: 300.0,
            cl: 0.0,
            soc: SocSeries {
                soc_initial: 100.0,
                soc_zero: 0.0,
                drain_rate: 0.0,
            },
        }
    }

    fn part(eid: &str, st: f64, et: f64, intensity: f64) -> PartialService {
        PartialService {
            parent_eid: eid.into(),
            interval: TimeInterval { st, et },
            intensity,
            tsr: 1.0,
            alpha: 1.0,
            dec: (et - st) / 3600.0 * intensity,
        }
    }

    fn bounds(chunks: &[Chunk]) -> Vec<(f64, f64)> {
        chunks.iter().map(|c| (c.interval.st, c.interval.et)).collect()
    }

    #[test]
    fn empty_candidates_give_whole_window() {
        let chunks = chunk_query(&query(), &[]);
        assert_eq!(bounds(&chunks), vec![(0.0, 300.0)]);
        assert!(chunks[0].roster.is_empty());
    }

    #[test]
    fn coincident_delimiters_dedup() {
        let c = [part("a", 0.0, 300.0, 500.0), part("b", 0.0, 300.0, 700.0)];
        let chunks = chunk_query(&query(), &c);
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].roster.len(), 2);
    }

    #[test]
    fn gaps_are_kept_as_empty_chunks() {
        let c = [part("a", 0.0, 100.0, 500.0), part("b", 200.0, 300.0, 700.0)];
        let chunks = chunk_query(&query(), &c);
        assert_eq!(bounds(&chunks), vec![(0.0, 100.0), (100.0, 200.0), (200.0, 300.0)]);
        assert!(chunks[1].roster.is_empty());
    }

    #[test]
    fn thin_between_two_ends_drops_later_end() {
        let c = [
            part("a", 0.0, 100.0, 500.0),
            part("b", 0.0, 101.0, 500.0),
            part("c", 0.0, 300.0, 500.0),
        ];
        let smoothed = smooth_thin_chunks(&chunk_query(&query(), &c), 60.0);
        assert_eq!(bounds(&smoothed), vec![(0.0, 100.0), (100.0, 300.0)]);
        let ids: Vec<_> = smoothed[1].roster.iter().map(|p| p.parent_eid.as_str()).collect();
        assert_eq!(ids, vec!["c"]);
    }

    #[test]
    fn thin_between_two_starts_drops_earlier_start() {
        let c = [
            part("a", 100.0, 300.0, 500.0),
            part("b", 101.0, 300.0, 500.0),
            part("c", 0.0, 300.0, 500.0),
        ];
        let smoothed = smooth_thin_chunks(&chunk_query(&query(), &c), 60.0);
        assert_eq!(bounds(&smoothed), vec![(0.0, 101.0), (101.0, 300.0)]);
        assert_eq!(smoothed[1].roster.len(), 3);
    }

    #[test]
    fn mixed_thin_drops_lower_intensity_delimiter() {
        let c = [
            part("a", 100.0, 300.0, 500.0),
            part("b", 0.0, 110.0, 900.0),
        ];
        let smoothed = smooth_thin_chunks(&chunk_query(&query(), &c), 60.0);
        assert_eq!(bounds(&smoothed), vec![(0.0, 110.0), (110.0, 300.0)]);
        assert_eq!(smoothed[1].roster[0].interval.st, 110.0);
    }

    #[test]
    fn equal_intensity_tie_drops_end() {
        let c = [
            part("a", 100.0, 300.0, 500.0),
            part("b", 0.0, 110.0, 500.0),
        ];
        let smoothed = smooth_thin_chunks(&chunk_query(&query(), &c), 60.0);
        assert_eq!(bounds(&smoothed), vec![(0.0, 100.0), (100.0, 300.0)]);
    }

    #[test]
    fn smoothing_stops_at_single_chunk() {
        let c = [part("a", 10.0, 20.0, 500.0)];
        let mut q = query();
        q.d = 40.0;
        let smoothed = smooth_thin_chunks(&chunk_query(&q, &c), 60.0);
        assert_eq!(bounds(&smoothed), vec![(0.0, 40.0)]);
    }

    #[test]
    fn no_thin_chunks_is_identity() {
        let c = [part("a", 0.0, 100.0, 500.0), part("b", 100.0, 300.0, 700.0)];
        let chunks = chunk_query(&query(), &c);
        assert_eq!(smooth_thin_chunks(&chunks, 60.0), chunks);
    }

    #[test]
    fn min_width_floor_and_scaling() {
        let c = [part("a", 0.0, 100.0, 1000.0)];
        let mut q = query();
        assert_eq!(default_min_width(&q, &c, 10.0), 30.0);
        q.cl = 1.0;
        assert_eq!(default_min_width(&q, &c, 10.0), 36.0);
    }
}
