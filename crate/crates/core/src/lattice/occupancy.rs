use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spec::LatticeSpec;

/// Reproducible seed of one sample: a master seed plus the sample's index.
///
/// Each sample draws from its own ChaCha stream, so a sample's occupancy
/// depends only on `(master, index)` and never on execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleSeed {
    pub master: u64,
    pub index: u64,
}

impl SampleSeed {
    pub fn new(master: u64, index: u64) -> Self {
        SampleSeed { master, index }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.index);
        rng
    }
}

/// Occupancy of every site of one sample, one bit per site.
///
/// Each row is packed into `ceil(width / 64)` words, bit `col % 64` of word
/// `col / 64`. Padding bits past the last column are always clear.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    spec: LatticeSpec,
    seed: Option<SampleSeed>,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl OccupancyGrid {
    pub fn empty(spec: &LatticeSpec) -> Self {
        let words_per_row = spec.width().div_ceil(64);
        OccupancyGrid {
            spec: *spec,
            seed: None,
            words_per_row,
            bits: vec![0; words_per_row * spec.height()],
        }
    }

    /// Grid with `occupied(col, row)` deciding each site.
    pub fn from_fn(spec: &LatticeSpec, mut occupied: impl FnMut(usize, usize) -> bool) -> Self {
        let mut grid = Self::empty(spec);
        for row in 0..spec.height() {
            for col in 0..spec.width() {
                if occupied(col, row) {
                    grid.set(col, row, true);
                }
            }
        }
        grid
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// Seed this grid was generated from, if it was sampled and not edited since.
    pub fn seed(&self) -> Option<SampleSeed> {
        self.seed
    }

    /// Packed words of one row.
    pub fn row_words(&self, row: usize) -> &[u64] {
        let w = self.words_per_row;
        &self.bits[row * w..(row + 1) * w]
    }

    #[inline]
    pub fn is_occupied(&self, col: usize, row: usize) -> bool {
        self.row_words(row)[col / 64] >> (col % 64) & 1 == 1
    }

    /// Occupancy by flat site index.
    pub fn is_occupied_index(&self, index: usize) -> bool {
        let (col, row) = self.spec.coords(index);
        self.is_occupied(col, row)
    }

    pub fn set(&mut self, col: usize, row: usize, value: bool) {
        assert!(col < self.spec.width() && row < self.spec.height(), "site out of range");
        let word = &mut self.bits[row * self.words_per_row + col / 64];
        let mask = 1u64 << (col % 64);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
        self.seed = None;
    }

    pub fn occupied_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Row-major occupancy, one `bool` per site.
    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.spec.sites()).map(|i| self.is_occupied_index(i)).collect()
    }

    /// Redraw in place; equivalent to [`sample_occupancy`] without allocating.
    pub fn resample(&mut self, seed: SampleSeed) {
        let threshold = occupation_threshold(self.spec.p());
        let width = self.spec.width();
        let mut rng = seed.rng();
        for row in self.bits.chunks_exact_mut(self.words_per_row) {
            for (k, word) in row.iter_mut().enumerate() {
                let cols = (width - 64 * k).min(64);
                let mut bits = 0u64;
                // Each 64-bit draw decides two sites, low half first.
                for b in (0..cols).step_by(2) {
                    let r = rng.next_u64();
                    bits |= u64::from((r & 0xffff_ffff) < threshold) << b;
                    if b + 1 < cols {
                        bits |= u64::from((r >> 32) < threshold) << (b + 1);
                    }
                }
                *word = bits;
            }
        }
        self.seed = Some(seed);
    }
}

/// A site is occupied when a uniform 32-bit draw falls below this value.
/// `p = 1` maps to `2^32` so every draw succeeds.
fn occupation_threshold(p: f64) -> u64 {
    (p * 4_294_967_296.0).round() as u64
}

pub fn sample_occupancy(spec: &LatticeSpec, seed: SampleSeed) -> OccupancyGrid {
    let mut grid = OccupancyGrid::empty(spec);
    grid.resample(seed);
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: f64) -> LatticeSpec {
        LatticeSpec::new(20, 15, p, 5, 12).unwrap()
    }

    #[test]
    fn degenerate_probabilities() {
        let full = sample_occupancy(&spec(1.0), SampleSeed::new(1, 0));
        assert_eq!(full.occupied_count(), 300);
        let none = sample_occupancy(&spec(0.0), SampleSeed::new(1, 0));
        assert_eq!(none.occupied_count(), 0);
    }

    #[test]
    fn deterministic_per_seed() {
        let s = spec(0.5927463);
        let a = sample_occupancy(&s, SampleSeed::new(42, 7));
        let b = sample_occupancy(&s, SampleSeed::new(42, 7));
        assert_eq!(a, b);
        let c = sample_occupancy(&s, SampleSeed::new(42, 8));
        assert_ne!(a.to_bools(), c.to_bools());
    }

    #[test]
    fn occupation_fraction() {
        let s = LatticeSpec::new(200, 200, 0.3, 1, 2).unwrap();
        let g = sample_occupancy(&s, SampleSeed::new(3, 0));
        let frac = g.occupied_count() as f64 / 40_000.0;
        // 5 sigma of a binomial with n = 40000.
        assert!((frac - 0.3).abs() < 5.0 * (0.3f64 * 0.7 / 40_000.0).sqrt());
    }

    #[test]
    fn bit_packing_across_words() {
        let s = LatticeSpec::new(130, 3, 0.5, 0, 129).unwrap();
        let g = OccupancyGrid::from_fn(&s, |c, r| (c * 7 + r) % 3 == 0);
        for r in 0..3 {
            for c in 0..130 {
                assert_eq!(g.is_occupied(c, r), (c * 7 + r) % 3 == 0);
            }
            // padding bits above column 129 stay clear
            assert_eq!(g.row_words(r)[2] >> 2, 0);
        }
        let full = sample_occupancy(&s.with_p(1.0).unwrap(), SampleSeed::new(0, 0));
        assert_eq!(full.occupied_count(), 390);
        assert_eq!(full.row_words(1)[2], 0b11);
    }

    #[test]
    fn threshold_edges() {
        assert_eq!(occupation_threshold(0.0), 0);
        assert_eq!(occupation_threshold(1.0), 1 << 32);
    }
}
