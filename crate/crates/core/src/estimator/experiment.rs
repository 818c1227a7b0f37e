use rayon::prelude::*;

use super::counts::{BatchedCounts, EventCounts};
use crate::lattice::{ClusterLabeler, ClusterLabels, LatticeSpec, OccupancyGrid, SampleSeed};
use crate::{Error, Result};

/// Scratch buffers and an accumulator for processing samples one at a time.
#[derive(Debug, Clone)]
pub struct SampleWorker {
    master_seed: u64,
    grid: OccupancyGrid,
    labeler: ClusterLabeler,
    labels: ClusterLabels,
    counts: EventCounts,
}

impl SampleWorker {
    pub fn new(spec: &LatticeSpec, master_seed: u64) -> Self {
        let grid = OccupancyGrid::empty(spec);
        let mut labeler = ClusterLabeler::new(spec);
        let labels = labeler.label(&grid);
        SampleWorker { master_seed, grid, labeler, labels, counts: EventCounts::zero(spec) }
    }

    /// Draw, label and count the sample with the given index.
    pub fn process(&mut self, index: u64) {
        self.grid.resample(SampleSeed::new(self.master_seed, index));
        self.labeler.label_into(&self.grid, &mut self.labels);
        self.counts
            .accumulate(&self.labels)
            .expect("worker buffers share one lattice");
    }

    pub fn labels(&self) -> &ClusterLabels {
        &self.labels
    }

    pub fn counts(&self) -> &EventCounts {
        &self.counts
    }

    pub fn into_counts(self) -> EventCounts {
        self.counts
    }
}

/// A complete Monte Carlo run: `n_samples` samples split into
/// `n_batches` consecutive batches.
///
/// Sample `i` always uses stream `i` of the master seed and always lands in
/// batch `floor(i * n_batches / n_samples)`, and counts are integers, so
/// the result is bit-identical for any thread count.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub spec: LatticeSpec,
    pub n_samples: u64,
    pub master_seed: u64,
    pub n_batches: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Experiment {
    pub fn new(spec: LatticeSpec, n_samples: u64, master_seed: u64) -> Self {
        Experiment { spec, n_samples, master_seed, n_batches: 1, threads: None }
    }

    pub fn with_batches(mut self, n_batches: usize) -> Self {
        self.n_batches = n_batches;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::usage("need at least one sample"));
        }
        if self.n_batches == 0 || self.n_batches as u64 > self.n_samples {
            return Err(Error::usage(format!(
                "batch count {} must be between 1 and the sample count {}",
                self.n_batches, self.n_samples
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::usage("thread count must be positive"));
        }
        Ok(())
    }

    /// Sample index range of batch `b`.
    pub fn batch_range(&self, b: usize) -> std::ops::Range<u64> {
        let n = self.n_samples as u128;
        let k = self.n_batches as u128;
        let lo = (b as u128 * n / k) as u64;
        let hi = ((b as u128 + 1) * n / k) as u64;
        lo..hi
    }

    pub fn run(&self) -> Result<BatchedCounts> {
        self.validate()?;
        match self.threads {
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::usage(format!("cannot build thread pool: {e}")))?;
                pool.install(|| self.run_in_pool())
            }
            None => self.run_in_pool(),
        }
    }

    fn run_in_pool(&self) -> Result<BatchedCounts> {
        let batches = (0..self.n_batches)
            .into_par_iter()
            .map(|b| self.run_batch(b))
            .collect();
        BatchedCounts::new(batches)
    }

    fn run_batch(&self, b: usize) -> EventCounts {
        let spec = &self.spec;
        self.batch_range(b)
            .into_par_iter()
            .fold(
                || SampleWorker::new(spec, self.master_seed),
                |mut w, i| {
                    w.process(i);
                    w
                },
            )
            .map(SampleWorker::into_counts)
            .reduce(
                || EventCounts::zero(spec),
                |mut a, b| {
                    a.merge_from(&b).expect("same lattice");
                    a
                },
            )
    }
}

/// Counts over `n` samples in a single batch.
pub fn run_experiment(spec: &LatticeSpec, n: u64, master_seed: u64) -> Result<EventCounts> {
    Ok(Experiment::new(*spec, n, master_seed).run()?.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::SiteEvent;

    #[test]
    fn single_full_sample() {
        let s = LatticeSpec::new(6, 5, 1.0, 1, 4).unwrap();
        let c = run_experiment(&s, 1, 3).unwrap();
        assert_eq!(c.n_samples(), 1);
        assert_eq!(c.pair_connected(), 1);
        assert!(c.grid(SiteEvent::BothAnchors).iter().all(|&v| v == 1));
    }

    #[test]
    fn batch_ranges_tile_the_samples() {
        let e = Experiment::new(LatticeSpec::desk_scale(), 103, 0).with_batches(10);
        let mut next = 0;
        for b in 0..10 {
            let r = e.batch_range(b);
            assert_eq!(r.start, next);
            assert!(r.end - r.start >= 10);
            next = r.end;
        }
        assert_eq!(next, 103);
    }

    #[test]
    fn invalid_runs() {
        let s = LatticeSpec::desk_scale();
        assert!(matches!(run_experiment(&s, 0, 1), Err(Error::Usage(_))));
        assert!(Experiment::new(s, 5, 1).with_batches(6).run().is_err());
        assert!(Experiment::new(s, 5, 1).with_threads(0).run().is_err());
    }

    #[test]
    fn batching_and_threads_do_not_change_totals() {
        let s = LatticeSpec::new(16, 16, 0.5927463, 6, 10).unwrap();
        let base = run_experiment(&s, 60, 99).unwrap();
        for (batches, threads) in [(1, 1), (4, 2), (7, 3), (60, 1)] {
            let run = Experiment::new(s, 60, 99)
                .with_batches(batches)
                .with_threads(threads)
                .run()
                .unwrap();
            assert_eq!(run.len(), batches);
            assert_eq!(run.total(), base);
        }
        assert_ne!(run_experiment(&s, 60, 100).unwrap(), base);
    }
}
