use std::fmt::{self, Write as _};

use super::ratios::{site_ratios, Ratio, RatioMaps, SiteProbabilities};
use crate::lattice::LatticeSpec;
use crate::theory::{universal_constants, UniversalConstants};
use crate::{Error, Result};

pub const DEFAULT_MASK_RADIUS: usize = 8;

/// Sites within Chebyshev distance `radius` of either anchor.
pub fn anchor_mask(spec: &LatticeSpec, radius: usize) -> Vec<bool> {
    let mut mask = vec![false; spec.sites()];
    for a in [spec.anchor1_col(), spec.anchor2_col()] {
        let lo = a.saturating_sub(radius);
        let hi = (a + radius).min(spec.width() - 1);
        for row in 0..=radius.min(spec.height() - 1) {
            for col in lo..=hi {
                mask[spec.index(col, row)] = true;
            }
        }
    }
    mask
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub mask_radius: usize,
    /// Second radius used to gauge sensitivity to the mask; `None` means
    /// twice `mask_radius`.
    pub sensitivity_radius: Option<usize>,
    /// Pass when within this many standard errors of the prediction...
    pub threshold: f64,
    /// ...or within this absolute distance, whichever is larger.
    pub tolerance_floor: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mask_radius: DEFAULT_MASK_RADIUS,
            sensitivity_radius: None,
            threshold: 3.0,
            tolerance_floor: 0.003,
        }
    }
}

impl VerifyOptions {
    pub fn with_mask_radius(mut self, radius: usize) -> Self {
        self.mask_radius = radius;
        self
    }

    fn sensitivity(&self) -> usize {
        self.sensitivity_radius.unwrap_or(2 * self.mask_radius.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioStatus {
    Pass,
    Fail,
    /// No defined site survives the mask.
    Insufficient,
}

impl RatioStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RatioStatus::Pass => "pass",
            RatioStatus::Fail => "fail",
            RatioStatus::Insufficient => "insufficient",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSummary {
    pub ratio: Ratio,
    pub predicted: f64,
    /// Unweighted mean over defined, unmasked sites.
    pub mean: f64,
    /// Jackknife error of the mean; zero without batches.
    pub std_error: f64,
    pub sites: usize,
    /// Mean at the sensitivity radius, if any site survives it.
    pub mean_at_sensitivity: Option<f64>,
    pub status: RatioStatus,
}

impl RatioSummary {
    /// `|mean - predicted|` in units of the standard error.
    pub fn deviation_sigma(&self) -> f64 {
        (self.mean - self.predicted).abs() / self.std_error
    }

    /// Shift of the mean when going to the sensitivity radius.
    pub fn mask_shift(&self) -> Option<f64> {
        self.mean_at_sensitivity.map(|m| m - self.mean)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportMeta {
    pub spec: LatticeSpec,
    pub n_samples: u64,
    pub n_batches: usize,
    pub master_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub meta: ReportMeta,
    pub options: VerifyOptions,
    pub sensitivity_radius: usize,
    pub summaries: [RatioSummary; 4],
}

impl VerificationReport {
    pub fn summary(&self, ratio: Ratio) -> &RatioSummary {
        &self.summaries[ratio.slot()]
    }

    /// True when every ratio passes.
    pub fn passed(&self) -> bool {
        self.summaries.iter().all(|s| s.status == RatioStatus::Pass)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.meta.master_seed = Some(seed);
        self
    }

    /// Flat `key = value` lines, stable across runs.
    pub fn to_kv(&self) -> String {
        let m = &self.meta;
        let s = m.spec;
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("width", &s.width());
        kv("height", &s.height());
        kv("p", &s.p());
        kv("anchor1_col", &s.anchor1_col());
        kv("anchor2_col", &s.anchor2_col());
        kv("boundary_mode", &s.boundary_mode());
        kv("samples", &m.n_samples);
        kv("batches", &m.n_batches);
        if let Some(seed) = m.master_seed {
            kv("seed", &seed);
        }
        kv("mask_radius", &self.options.mask_radius);
        kv("sensitivity_radius", &self.sensitivity_radius);
        kv("threshold", &self.options.threshold);
        kv("tolerance_floor", &self.options.tolerance_floor);
        for r in &self.summaries {
            let n = r.ratio.name();
            kv(&format!("{n}.predicted"), &r.predicted);
            kv(&format!("{n}.mean"), &r.mean);
            kv(&format!("{n}.std_error"), &r.std_error);
            kv(&format!("{n}.sites"), &r.sites);
            match r.mean_at_sensitivity {
                Some(v) => kv(&format!("{n}.mean_at_sensitivity_radius"), &v),
                None => kv(&format!("{n}.mean_at_sensitivity_radius"), &"nan"),
            }
            kv(&format!("{n}.status"), &r.status.as_str());
        }
        kv("passed", &self.passed());
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.meta;
        let s = m.spec;
        let o = &self.options;
        writeln!(f, "factorization ratio verification")?;
        writeln!(
            f,
            "lattice      {} x {}, p = {}, anchors at columns {} and {}, {} boundary",
            s.width(),
            s.height(),
            s.p(),
            s.anchor1_col(),
            s.anchor2_col(),
            s.boundary_mode()
        )?;
        write!(f, "samples      {} in {} batches", m.n_samples, m.n_batches)?;
        match m.master_seed {
            Some(seed) => writeln!(f, ", seed {seed}")?,
            None => writeln!(f)?,
        }
        writeln!(f, "mask radius  {} (sensitivity at {})", o.mask_radius, self.sensitivity_radius)?;
        writeln!(
            f,
            "criterion    |mean - C| <= max({} x error, {})",
            o.threshold, o.tolerance_floor
        )?;
        writeln!(f)?;
        writeln!(
            f,
            "{:<6}{:>12}{:>12}{:>12}{:>10}{:>8}{:>12}  status",
            "ratio", "predicted", "mean", "error", "dev/err", "sites", "shift"
        )?;
        for r in &self.summaries {
            let shift = r.mask_shift().map_or("-".to_string(), |d| format!("{d:+.6}"));
            let dev = if r.std_error > 0.0 {
                format!("{:.2}", r.deviation_sigma())
            } else {
                "-".to_string()
            };
            writeln!(
                f,
                "{:<6}{:>12.7}{:>12.7}{:>12.7}{:>10}{:>8}{:>12}  {}",
                r.ratio.to_string(),
                r.predicted,
                r.mean,
                r.std_error,
                dev,
                r.sites,
                shift,
                r.status.as_str()
            )?;
        }
        writeln!(f)?;
        write!(f, "overall      {}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Mean of one ratio over `sites` and its jackknife error.
fn masked_mean(maps: &RatioMaps, ratio: Ratio, sites: &[usize]) -> (f64, f64) {
    let values = maps.raw_values(ratio);
    let mean = sites.iter().map(|&i| values[i]).sum::<f64>() / sites.len() as f64;
    let Some(batches) = maps.batches().filter(|b| b.len() >= 2) else {
        return (mean, 0.0);
    };
    let total = batches.total();
    let k = batches.len();
    let reps: Vec<f64> = batches
        .batches()
        .iter()
        .map(|b| {
            let rep = total.checked_sub(b).expect("batch is part of the total");
            let sum: f64 = sites
                .iter()
                .map(|&i| {
                    site_ratios(&SiteProbabilities::from_counts(&rep, i))[ratio.slot()]
                        .expect("defined sites are defined in every replicate")
                })
                .sum();
            sum / sites.len() as f64
        })
        .collect();
    let rep_mean = reps.iter().sum::<f64>() / k as f64;
    let ss: f64 = reps.iter().map(|r| (r - rep_mean).powi(2)).sum();
    (mean, ((k - 1) as f64 / k as f64 * ss).sqrt())
}

fn unmasked_sites(maps: &RatioMaps, ratio: Ratio, mask: &[bool]) -> Vec<usize> {
    (0..mask.len()).filter(|&i| !mask[i] && maps.is_defined(ratio, i)).collect()
}

/// Verify all four ratios against the universal constants.
pub fn verify(maps: &RatioMaps, options: &VerifyOptions) -> Result<VerificationReport> {
    let spec = *maps.spec();
    let mask = anchor_mask(&spec, options.mask_radius);
    if mask.iter().all(|&m| m) {
        return Err(Error::usage(format!(
            "mask radius {} covers the whole {} x {} lattice",
            options.mask_radius,
            spec.width(),
            spec.height()
        )));
    }
    if !(options.threshold > 0.0) || !(options.tolerance_floor >= 0.0) {
        return Err(Error::usage("threshold must be positive and the tolerance floor non-negative"));
    }
    let sensitivity_radius = options.sensitivity();
    let wide = anchor_mask(&spec, sensitivity_radius);
    let constants: UniversalConstants = universal_constants();
    let summaries = Ratio::ALL.map(|ratio| {
        let predicted = ratio.predicted(&constants);
        let sites = unmasked_sites(maps, ratio, &mask);
        if sites.is_empty() {
            return RatioSummary {
                ratio,
                predicted,
                mean: f64::NAN,
                std_error: f64::NAN,
                sites: 0,
                mean_at_sensitivity: None,
                status: RatioStatus::Insufficient,
            };
        }
        let (mean, std_error) = masked_mean(maps, ratio, &sites);
        let wide_sites = unmasked_sites(maps, ratio, &wide);
        let mean_at_sensitivity = (!wide_sites.is_empty()).then(|| {
            let v = maps.raw_values(ratio);
            wide_sites.iter().map(|&i| v[i]).sum::<f64>() / wide_sites.len() as f64
        });
        let tol = (options.threshold * std_error).max(options.tolerance_floor);
        let status = if (mean - predicted).abs() <= tol { RatioStatus::Pass } else { RatioStatus::Fail };
        RatioSummary { ratio, predicted, mean, std_error, sites: sites.len(), mean_at_sensitivity, status }
    });
    Ok(VerificationReport {
        meta: ReportMeta {
            spec,
            n_samples: maps.n_samples(),
            n_batches: maps.batches().map_or(1, |b| b.len()),
            master_seed: None,
        },
        options: *options,
        sensitivity_radius,
        summaries,
    })
}

/// Masked averages with default thresholds at the given radius.
pub fn masked_average(maps: &RatioMaps, mask_radius: usize) -> Result<VerificationReport> {
    verify(maps, &VerifyOptions::default().with_mask_radius(mask_radius))
}
