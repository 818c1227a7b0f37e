use crate::lattice::{ClusterFlags, ClusterLabels, LatticeSpec};
use crate::{Error, Result};

/// Per-site connection events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteEvent {
    /// Site's cluster touches any boundary site.
    Boundary,
    Anchor1,
    Anchor2,
    BothAnchors,
    Interval,
    Complement,
}

impl SiteEvent {
    pub const ALL: [SiteEvent; 6] = [
        SiteEvent::Boundary,
        SiteEvent::Anchor1,
        SiteEvent::Anchor2,
        SiteEvent::BothAnchors,
        SiteEvent::Interval,
        SiteEvent::Complement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SiteEvent::Boundary => "boundary",
            SiteEvent::Anchor1 => "anchor1",
            SiteEvent::Anchor2 => "anchor2",
            SiteEvent::BothAnchors => "both_anchors",
            SiteEvent::Interval => "interval",
            SiteEvent::Complement => "complement",
        }
    }

    pub(crate) fn slot(self) -> usize {
        self as usize
    }

    pub fn flags(self) -> ClusterFlags {
        match self {
            SiteEvent::Boundary => ClusterFlags::BOUNDARY,
            SiteEvent::Anchor1 => ClusterFlags::ANCHOR1,
            SiteEvent::Anchor2 => ClusterFlags::ANCHOR2,
            SiteEvent::BothAnchors => ClusterFlags::BOTH_ANCHORS,
            SiteEvent::Interval => ClusterFlags::INTERVAL,
            SiteEvent::Complement => ClusterFlags::COMPLEMENT,
        }
    }
}

/// Event counts over some number of samples of one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct EventCounts {
    spec: LatticeSpec,
    n_samples: u64,
    pair_connected: u64,
    grids: [Vec<u64>; 6],
}

impl EventCounts {
    pub fn zero(spec: &LatticeSpec) -> Self {
        let n = spec.sites();
        EventCounts {
            spec: *spec,
            n_samples: 0,
            pair_connected: 0,
            grids: std::array::from_fn(|_| vec![0; n]),
        }
    }

    pub(crate) fn from_parts(
        spec: LatticeSpec,
        n_samples: u64,
        pair_connected: u64,
        grids: [Vec<u64>; 6],
    ) -> Self {
        EventCounts { spec, n_samples, pair_connected, grids }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn pair_connected(&self) -> u64 {
        self.pair_connected
    }

    pub fn grid(&self, event: SiteEvent) -> &[u64] {
        &self.grids[event.slot()]
    }

    pub fn count(&self, event: SiteEvent, index: usize) -> u64 {
        self.grids[event.slot()][index]
    }

    pub(crate) fn grids(&self) -> &[Vec<u64>; 6] {
        &self.grids
    }

    fn check_spec(&self, other: &LatticeSpec) -> Result<()> {
        if self.spec.same_as(other) {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "event counts for {:?} cannot be combined with {:?}",
                self.spec, other
            )))
        }
    }

    /// Add one labeled sample.
    pub fn accumulate(&mut self, labels: &ClusterLabels) -> Result<()> {
        self.check_spec(labels.spec())?;
        self.n_samples += 1;
        if labels.anchors_connected() {
            self.pair_connected += 1;
        }
        let flags = labels.cluster_flags();
        let [boundary, a1, a2, both, interval, complement] = &mut self.grids;
        let bump = |grid: &mut Vec<u64>, sites: std::ops::Range<usize>| {
            for c in &mut grid[sites] {
                *c += 1;
            }
        };
        for run in labels.runs() {
            let f = flags[run.cluster as usize];
            if f.is_empty() {
                continue;
            }
            let sites = run.sites();
            if f.contains(ClusterFlags::BOUNDARY) {
                bump(boundary, sites.clone());
            }
            if f.contains(ClusterFlags::ANCHOR1) {
                bump(a1, sites.clone());
            }
            if f.contains(ClusterFlags::ANCHOR2) {
                bump(a2, sites.clone());
            }
            if f.contains(ClusterFlags::BOTH_ANCHORS) {
                bump(both, sites.clone());
            }
            if f.contains(ClusterFlags::INTERVAL) {
                bump(interval, sites.clone());
            }
            if f.contains(ClusterFlags::COMPLEMENT) {
                bump(complement, sites);
            }
        }
        Ok(())
    }

    /// Componentwise sum into `self`.
    pub fn merge_from(&mut self, other: &EventCounts) -> Result<()> {
        self.check_spec(&other.spec)?;
        self.n_samples += other.n_samples;
        self.pair_connected += other.pair_connected;
        for (dst, src) in self.grids.iter_mut().zip(&other.grids) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s;
            }
        }
        Ok(())
    }

    /// `self - other`, used for leave-one-out replicates.
    pub fn checked_sub(&self, other: &EventCounts) -> Result<EventCounts> {
        self.check_spec(&other.spec)?;
        let underflow = || Error::usage("subtracted counts exceed the totals");
        let sub = |a: u64, b: u64| a.checked_sub(b).ok_or_else(underflow);
        let mut grids: [Vec<u64>; 6] = std::array::from_fn(|_| Vec::new());
        for (k, out) in grids.iter_mut().enumerate() {
            *out = self.grids[k]
                .iter()
                .zip(&other.grids[k])
                .map(|(&a, &b)| sub(a, b))
                .collect::<Result<_>>()?;
        }
        Ok(EventCounts {
            spec: self.spec,
            n_samples: sub(self.n_samples, other.n_samples)?,
            pair_connected: sub(self.pair_connected, other.pair_connected)?,
            grids,
        })
    }

    /// Checks every per-site count inequality implied by the event
    /// definitions; returns a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.n_samples;
        if self.pair_connected > n {
            return Err(format!("pair_connected {} > n_samples {n}", self.pair_connected));
        }
        let g = |e: SiteEvent| &self.grids[e.slot()];
        for i in 0..self.spec.sites() {
            let [b, a1, a2, both, int, comp] = SiteEvent::ALL.map(|e| g(e)[i]);
            let violation = if b > n {
                Some("to_boundary > n_samples")
            } else if both > a1.min(a2) {
                Some("to_both_anchors > min(to_anchor1, to_anchor2)")
            } else if both > self.pair_connected {
                Some("to_both_anchors > pair_connected")
            } else if a1 > b || a2 > b {
                Some("to_anchor > to_boundary")
            } else if int > b {
                Some("to_interval > to_boundary")
            } else if comp > b {
                Some("to_complement > to_boundary")
            } else {
                None
            };
            if let Some(what) = violation {
                let (c, r) = self.spec.coords(i);
                return Err(format!("{what} at site ({c}, {r})"));
            }
        }
        Ok(())
    }
}

/// Functional form of [`EventCounts::accumulate`].
pub fn accumulate_sample(labels: &ClusterLabels, mut counts: EventCounts) -> Result<EventCounts> {
    counts.accumulate(labels)?;
    Ok(counts)
}

pub fn merge(a: &EventCounts, b: &EventCounts) -> Result<EventCounts> {
    let mut out = a.clone();
    out.merge_from(b)?;
    Ok(out)
}

/// Counts split into batches of consecutive samples, for jackknife errors.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchedCounts {
    batches: Vec<EventCounts>,
}

impl BatchedCounts {
    pub fn new(batches: Vec<EventCounts>) -> Result<Self> {
        let first = batches.first().ok_or_else(|| Error::usage("need at least one batch"))?;
        for b in &batches[1..] {
            first.check_spec(&b.spec)?;
        }
        Ok(BatchedCounts { batches })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.batches[0].spec
    }

    pub fn batches(&self) -> &[EventCounts] {
        &self.batches
    }

    pub fn len(&self) -> usize {
        self.batches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.batches.is_empty()
    }

    pub fn n_samples(&self) -> u64 {
        self.batches.iter().map(|b| b.n_samples).sum()
    }

    pub fn total(&self) -> EventCounts {
        let mut total = EventCounts::zero(self.spec());
        for b in &self.batches {
            total.merge_from(b).expect("batches share one lattice");
        }
        total
    }

    /// Merge consecutive batches into `groups` groups of near-equal size.
    pub fn regroup(&self, groups: usize) -> Result<BatchedCounts> {
        let k = self.batches.len();
        if groups == 0 || groups > k {
            return Err(Error::usage(format!("cannot regroup {k} batches into {groups}")));
        }
        let merged = (0..groups)
            .map(|g| {
                let (lo, hi) = (g * k / groups, (g + 1) * k / groups);
                let mut acc = EventCounts::zero(self.spec());
                for b in &self.batches[lo..hi] {
                    acc.merge_from(b).expect("batches share one lattice");
                }
                acc
            })
            .collect();
        Ok(BatchedCounts { batches: merged })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{label_clusters, sample_occupancy, OccupancyGrid, SampleSeed};

    fn spec() -> LatticeSpec {
        LatticeSpec::new(10, 8, 0.5927463, 3, 6).unwrap()
    }

    #[test]
    fn fully_occupied_sample_increments_everything() {
        let s = spec().with_p(1.0).unwrap();
        let labels = label_clusters(&sample_occupancy(&s, SampleSeed::new(0, 0)));
        let counts = accumulate_sample(&labels, EventCounts::zero(&s)).unwrap();
        assert_eq!(counts.n_samples(), 1);
        assert_eq!(counts.pair_connected(), 1);
        for e in SiteEvent::ALL {
            assert!(counts.grid(e).iter().all(|&c| c == 1), "{e:?}");
        }
    }

    #[test]
    fn empty_sample_only_counts_the_sample() {
        let s = spec();
        let labels = label_clusters(&OccupancyGrid::empty(&s));
        let counts = accumulate_sample(&labels, EventCounts::zero(&s)).unwrap();
        assert_eq!(counts.n_samples(), 1);
        assert_eq!(counts.pair_connected(), 0);
        for e in SiteEvent::ALL {
            assert!(counts.grid(e).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn lone_anchor1_site() {
        let s = spec();
        let a1 = s.anchor1_index();
        let grid = OccupancyGrid::from_fn(&s, |c, r| r == 0 && c == s.anchor1_col());
        let counts = accumulate_sample(&label_clusters(&grid), EventCounts::zero(&s)).unwrap();
        for e in SiteEvent::ALL {
            for i in 0..s.sites() {
                let expected = u64::from(
                    i == a1 && matches!(e, SiteEvent::Anchor1 | SiteEvent::Boundary),
                );
                assert_eq!(counts.count(e, i), expected, "{e:?} at {i}");
            }
        }
    }

    #[test]
    fn spec_mismatch_is_usage_error() {
        let s = spec();
        let other = LatticeSpec::new(10, 8, 0.5, 3, 6).unwrap();
        let labels = label_clusters(&OccupancyGrid::empty(&other));
        assert!(matches!(
            accumulate_sample(&labels, EventCounts::zero(&s)),
            Err(Error::Usage(_))
        ));
        assert!(merge(&EventCounts::zero(&s), &EventCounts::zero(&other)).is_err());
    }

    #[test]
    fn merged_singles_equal_sequential_accumulation() {
        let s = spec();
        let mut sequential = EventCounts::zero(&s);
        let mut merged = EventCounts::zero(&s);
        for k in 0..100 {
            let labels = label_clusters(&sample_occupancy(&s, SampleSeed::new(11, k)));
            sequential.accumulate(&labels).unwrap();
            let single = accumulate_sample(&labels, EventCounts::zero(&s)).unwrap();
            merged = merge(&merged, &single).unwrap();
            sequential.check_invariants().unwrap();
        }
        assert_eq!(sequential, merged);
        assert_eq!(merge(&merged, &EventCounts::zero(&s)).unwrap(), merged);
    }

    #[test]
    fn subtraction_and_regrouping() {
        let s = spec();
        let batches: Vec<EventCounts> = (0..6)
            .map(|b| {
                let mut c = EventCounts::zero(&s);
                for k in 0..5 {
                    c.accumulate(&label_clusters(&sample_occupancy(&s, SampleSeed::new(1, b * 5 + k))))
                        .unwrap();
                }
                c
            })
            .collect();
        let batched = BatchedCounts::new(batches.clone()).unwrap();
        let total = batched.total();
        assert_eq!(total.n_samples(), 30);
        let rest = total.checked_sub(&batches[0]).unwrap();
        assert_eq!(merge(&rest, &batches[0]).unwrap(), total);
        assert!(batches[0].checked_sub(&total).is_err() || total == batches[0]);
        let three = batched.regroup(3).unwrap();
        assert_eq!(three.len(), 3);
        assert_eq!(three.total(), total);
        assert_eq!(three.batches()[0], merge(&batches[0], &batches[1]).unwrap());
        assert!(batched.regroup(7).is_err());
    }
}
