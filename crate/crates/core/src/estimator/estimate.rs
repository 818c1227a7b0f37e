use super::counts::{EventCounts, SiteEvent};
use crate::lattice::LatticeSpec;
use crate::{Error, Result};

/// A sample fraction with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn binomial(successes: u64, n: u64) -> Self {
        let p = successes as f64 / n as f64;
        Estimate { value: p, std_error: binomial_error(p, n) }
    }
}

fn binomial_error(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}

/// Event probabilities: counts divided by the number of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityEstimates {
    spec: LatticeSpec,
    n_samples: u64,
    pair: Estimate,
    sites: [Vec<f64>; 6],
}

impl ProbabilityEstimates {
    /// Estimates from explicit probabilities, e.g. synthetic inputs.
    pub fn from_probabilities(
        spec: &LatticeSpec,
        n_samples: u64,
        pair: f64,
        mut site: impl FnMut(SiteEvent, usize) -> f64,
    ) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::usage("estimates need at least one sample"));
        }
        let check = |v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(v)
            } else {
                Err(Error::usage(format!("probability {v} outside [0, 1]")))
            }
        };
        let pair = check(pair)?;
        let mut sites: [Vec<f64>; 6] = std::array::from_fn(|_| Vec::with_capacity(spec.sites()));
        for e in SiteEvent::ALL {
            for i in 0..spec.sites() {
                sites[e.slot()].push(check(site(e, i))?);
            }
        }
        Ok(ProbabilityEstimates {
            spec: *spec,
            n_samples,
            pair: Estimate { value: pair, std_error: binomial_error(pair, n_samples) },
            sites,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    /// Probability that the two anchor sites are connected.
    pub fn pair(&self) -> Estimate {
        self.pair
    }

    pub fn grid(&self, event: SiteEvent) -> &[f64] {
        &self.sites[event.slot()]
    }

    pub fn site(&self, event: SiteEvent, index: usize) -> Estimate {
        let p = self.sites[event.slot()][index];
        Estimate { value: p, std_error: binomial_error(p, self.n_samples) }
    }
}

pub fn estimate(counts: &EventCounts) -> Result<ProbabilityEstimates> {
    let n = counts.n_samples();
    if n == 0 {
        return Err(Error::usage("cannot estimate probabilities from zero samples"));
    }
    let inv = 1.0 / n as f64;
    Ok(ProbabilityEstimates {
        spec: *counts.spec(),
        n_samples: n,
        pair: Estimate::binomial(counts.pair_connected(), n),
        sites: std::array::from_fn(|k| counts.grids()[k].iter().map(|&c| c as f64 * inv).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::run_experiment;

    #[test]
    fn certain_and_impossible_pair() {
        let full = LatticeSpec::new(5, 4, 1.0, 0, 4).unwrap();
        let est = estimate(&run_experiment(&full, 20, 0).unwrap()).unwrap();
        assert_eq!(est.pair(), Estimate { value: 1.0, std_error: 0.0 });

        let none = full.with_p(0.0).unwrap();
        let est = estimate(&run_experiment(&none, 20, 0).unwrap()).unwrap();
        assert_eq!(est.pair().value, 0.0);
        assert_eq!(est.site(SiteEvent::Boundary, 3).value, 0.0);
    }

    #[test]
    fn zero_samples_is_usage_error() {
        let counts = EventCounts::zero(&LatticeSpec::desk_scale());
        assert!(matches!(estimate(&counts), Err(Error::Usage(_))));
    }

    #[test]
    fn binomial_error_formula() {
        let e = Estimate::binomial(25, 100);
        assert!((e.std_error - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
    }
}
