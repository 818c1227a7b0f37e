use std::fmt;

use crate::estimator::{BatchedCounts, EventCounts, ProbabilityEstimates, SiteEvent};
use crate::lattice::LatticeSpec;
use crate::theory::UniversalConstants;
use crate::{Error, Result};

/// The four factorization ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ratio {
    /// `P(x1,x2,z) / sqrt(P(x1,x2) P(x1,z) P(x2,z))`, predicted `C1`.
    R1,
    /// `P(x1,x2,z) P(z) / (P(x1,x2) P(I,z) P(Ic,z))`, predicted `C2`.
    R2,
    /// `P(I,z) P(Ic,z) sqrt(P(x1,x2)) / (P(z) sqrt(P(x1,z) P(x2,z)))`, predicted `C3`.
    R3,
    /// `P(I,z) P(Ic,z) P(x1,x2,z) / (P(z) P(x1,z) P(x2,z))`, predicted `C4`.
    R4,
}

impl Ratio {
    pub const ALL: [Ratio; 4] = [Ratio::R1, Ratio::R2, Ratio::R3, Ratio::R4];

    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["r1", "r2", "r3", "r4"][self.slot()]
    }

    pub fn predicted(self, c: &UniversalConstants) -> f64 {
        c.as_array()[self.slot()]
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["R1", "R2", "R3", "R4"][self.slot()])
    }
}

/// Event probabilities at one site, plus the anchor pair probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteProbabilities {
    pub pair: f64,
    pub boundary: f64,
    pub anchor1: f64,
    pub anchor2: f64,
    pub both: f64,
    pub interval: f64,
    pub complement: f64,
}

impl SiteProbabilities {
    pub(crate) fn from_counts(counts: &EventCounts, index: usize) -> Self {
        let inv = 1.0 / counts.n_samples() as f64;
        let c = |e: SiteEvent| counts.count(e, index) as f64 * inv;
        SiteProbabilities {
            pair: counts.pair_connected() as f64 * inv,
            boundary: c(SiteEvent::Boundary),
            anchor1: c(SiteEvent::Anchor1),
            anchor2: c(SiteEvent::Anchor2),
            both: c(SiteEvent::BothAnchors),
            interval: c(SiteEvent::Interval),
            complement: c(SiteEvent::Complement),
        }
    }

    fn from_estimates(est: &ProbabilityEstimates, index: usize) -> Self {
        let c = |e: SiteEvent| est.grid(e)[index];
        SiteProbabilities {
            pair: est.pair().value,
            boundary: c(SiteEvent::Boundary),
            anchor1: c(SiteEvent::Anchor1),
            anchor2: c(SiteEvent::Anchor2),
            both: c(SiteEvent::BothAnchors),
            interval: c(SiteEvent::Interval),
            complement: c(SiteEvent::Complement),
        }
    }
}

/// The four ratios at one site; `None` where any factor is zero.
pub fn site_ratios(p: &SiteProbabilities) -> [Option<f64>; 4] {
    let positive = |xs: &[f64]| xs.iter().all(|&x| x > 0.0);
    let p = *p;
    let r1 = positive(&[p.both, p.pair, p.anchor1, p.anchor2])
        .then(|| p.both / (p.pair * p.anchor1 * p.anchor2).sqrt());
    let r2 = positive(&[p.both, p.boundary, p.pair, p.interval, p.complement])
        .then(|| p.both * p.boundary / (p.pair * p.interval * p.complement));
    let r3 = positive(&[p.interval, p.complement, p.pair, p.boundary, p.anchor1, p.anchor2])
        .then(|| p.interval * p.complement * p.pair.sqrt() / (p.boundary * (p.anchor1 * p.anchor2).sqrt()));
    let r4 = positive(&[p.interval, p.complement, p.both, p.boundary, p.anchor1, p.anchor2])
        .then(|| p.interval * p.complement * p.both / (p.boundary * p.anchor1 * p.anchor2));
    [r1, r2, r3, r4]
}

/// Per-site ratio estimates.
///
/// Undefined sites hold `NaN` internally. When built from batched counts a
/// site is defined only if it is defined in the full data and in every
/// leave-one-batch-out replicate, and carries a jackknife error.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioMaps {
    spec: LatticeSpec,
    n_samples: u64,
    values: [Vec<f64>; 4],
    errors: Option<[Vec<f64>; 4]>,
    batches: Option<BatchedCounts>,
}

impl RatioMaps {
    pub fn from_estimates(est: &ProbabilityEstimates) -> Self {
        let spec = *est.spec();
        let mut values: [Vec<f64>; 4] = std::array::from_fn(|_| vec![f64::NAN; spec.sites()]);
        for i in 0..spec.sites() {
            let r = site_ratios(&SiteProbabilities::from_estimates(est, i));
            for k in 0..4 {
                values[k][i] = r[k].unwrap_or(f64::NAN);
            }
        }
        RatioMaps { spec, n_samples: est.n_samples(), values, errors: None, batches: None }
    }

    pub fn from_batches(counts: &BatchedCounts) -> Result<Self> {
        let total = counts.total();
        if total.n_samples() == 0 {
            return Err(Error::usage("no samples in the counts"));
        }
        let spec = *counts.spec();
        let sites = spec.sites();
        let mut values: [Vec<f64>; 4] = std::array::from_fn(|_| vec![f64::NAN; sites]);
        for i in 0..sites {
            let r = site_ratios(&SiteProbabilities::from_counts(&total, i));
            for k in 0..4 {
                values[k][i] = r[k].unwrap_or(f64::NAN);
            }
        }
        let k = counts.len();
        if k < 2 {
            return Ok(RatioMaps { spec, n_samples: total.n_samples(), values, errors: None, batches: None });
        }

        // Welford over the replicates, per site and ratio.
        let mut mean: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; sites]);
        let mut m2: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; sites]);
        for (b, batch) in counts.batches().iter().enumerate() {
            let rep = total.checked_sub(batch)?;
            let seen = (b + 1) as f64;
            for i in 0..sites {
                let r = if rep.n_samples() > 0 {
                    site_ratios(&SiteProbabilities::from_counts(&rep, i))
                } else {
                    [None; 4]
                };
                for s in 0..4 {
                    if values[s][i].is_nan() {
                        continue;
                    }
                    match r[s] {
                        Some(v) => {
                            let d = v - mean[s][i];
                            mean[s][i] += d / seen;
                            m2[s][i] += d * (v - mean[s][i]);
                        }
                        None => values[s][i] = f64::NAN,
                    }
                }
            }
        }
        let scale = (k - 1) as f64 / k as f64;
        let errors = std::array::from_fn(|s| {
            m2[s].iter()
                .zip(&values[s])
                .map(|(&m, &v)| if v.is_nan() { f64::NAN } else { (scale * m).sqrt() })
                .collect()
        });
        Ok(RatioMaps {
            spec,
            n_samples: total.n_samples(),
            values,
            errors: Some(errors),
            batches: Some(counts.clone()),
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    /// Batches backing the jackknife, if any.
    pub fn batches(&self) -> Option<&BatchedCounts> {
        self.batches.as_ref()
    }

    pub(crate) fn raw_values(&self, ratio: Ratio) -> &[f64] {
        &self.values[ratio.slot()]
    }

    pub fn value(&self, ratio: Ratio, index: usize) -> Option<f64> {
        let v = self.values[ratio.slot()][index];
        (!v.is_nan()).then_some(v)
    }

    /// Jackknife standard error of the site value.
    pub fn error(&self, ratio: Ratio, index: usize) -> Option<f64> {
        let e = self.errors.as_ref()?[ratio.slot()][index];
        (!e.is_nan()).then_some(e)
    }

    pub fn is_defined(&self, ratio: Ratio, index: usize) -> bool {
        !self.values[ratio.slot()][index].is_nan()
    }

    pub fn defined_count(&self, ratio: Ratio) -> usize {
        self.values[ratio.slot()].iter().filter(|v| !v.is_nan()).count()
    }
}

pub fn ratio_maps(est: &ProbabilityEstimates) -> RatioMaps {
    RatioMaps::from_estimates(est)
}

/// One site of a column profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub row: usize,
    pub value: Option<f64>,
    pub error: Option<f64>,
}

/// Column `column` of one ratio map, bottom row first.
pub fn line_profiles(maps: &RatioMaps, ratio: Ratio, column: usize) -> Result<Vec<ProfilePoint>> {
    let spec = maps.spec();
    if column >= spec.width() {
        return Err(Error::usage(format!(
            "column {column} outside a lattice of width {}",
            spec.width()
        )));
    }
    Ok((0..spec.height())
        .map(|row| {
            let i = spec.index(column, row);
            ProfilePoint { row, value: maps.value(ratio, i), error: maps.error(ratio, i) }
        })
        .collect())
}
