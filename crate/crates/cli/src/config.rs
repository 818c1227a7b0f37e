//! Run configuration: built-in defaults, then `PERCORR_SEED`, then a flat
//! `key = value` file, then command-line flags.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use percorr::analysis::VerifyOptions;
use percorr::estimator::Experiment;
use percorr::lattice::{BoundaryMode, LatticeSpec};
use percorr::SITE_PC;

use crate::CliError;

pub const SEED_ENV: &str = "PERCORR_SEED";

pub const KEYS: [&str; 14] = [
    "width",
    "height",
    "p",
    "anchor1_col",
    "anchor2_col",
    "boundary_mode",
    "samples",
    "seed",
    "batches",
    "mask_radius",
    "threads",
    "out",
    "threshold",
    "tolerance_floor",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub width: usize,
    pub height: usize,
    pub p: f64,
    pub anchor1_col: usize,
    pub anchor2_col: usize,
    pub boundary_mode: BoundaryMode,
    pub samples: u64,
    pub seed: u64,
    pub batches: usize,
    pub mask_radius: usize,
    /// Worker threads; `None` lets the pool pick.
    pub threads: Option<usize>,
    pub out: PathBuf,
    pub threshold: f64,
    pub tolerance_floor: f64,
}

impl Default for RunConfig {
    /// Desk-scale run.
    fn default() -> Self {
        RunConfig {
            width: 128,
            height: 128,
            p: SITE_PC,
            anchor1_col: 48,
            anchor2_col: 80,
            boundary_mode: BoundaryMode::FullPerimeter,
            samples: 100_000,
            seed: 1,
            batches: 50,
            mask_radius: 8,
            threads: None,
            out: PathBuf::from("percorr-out"),
            threshold: 3.0,
            tolerance_floor: 0.003,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value {value:?} for {key}")))
}

impl RunConfig {
    /// Defaults with `PERCORR_SEED` applied when set.
    pub fn from_env() -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Ok(seed) = std::env::var(SEED_ENV) {
            cfg.seed = parse(SEED_ENV, seed.trim())?;
        }
        Ok(cfg)
    }

    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "width" => self.width = parse(key, value)?,
            "height" => self.height = parse(key, value)?,
            "p" => self.p = parse(key, value)?,
            "anchor1_col" => self.anchor1_col = parse(key, value)?,
            "anchor2_col" => self.anchor2_col = parse(key, value)?,
            "boundary_mode" => self.boundary_mode = value.parse()?,
            "samples" => self.samples = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "batches" => self.batches = parse(key, value)?,
            "mask_radius" => self.mask_radius = parse(key, value)?,
            "threads" => {
                self.threads = match value {
                    "auto" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "out" => self.out = PathBuf::from(value),
            "threshold" => self.threshold = parse(key, value)?,
            "tolerance_floor" => self.tolerance_floor = parse(key, value)?,
            _ => return Err(CliError::Usage(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Apply a config file's contents. `#` starts a comment; each key may
    /// appear once.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        let mut seen = HashSet::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| CliError::Usage(format!("{origin}:{}: {msg}", n + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(at(format!("duplicate key {key:?}")));
            }
            self.set(key, value).map_err(|e| at(e.to_string()))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn spec(&self) -> Result<LatticeSpec, CliError> {
        Ok(LatticeSpec::new(self.width, self.height, self.p, self.anchor1_col, self.anchor2_col)?
            .with_boundary_mode(self.boundary_mode))
    }

    pub fn experiment(&self) -> Result<Experiment, CliError> {
        let mut exp = Experiment::new(self.spec()?, self.samples, self.seed).with_batches(self.batches);
        if let Some(t) = self.threads {
            exp = exp.with_threads(t);
        }
        exp.validate()?;
        Ok(exp)
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            mask_radius: self.mask_radius,
            sensitivity_radius: None,
            threshold: self.threshold,
            tolerance_floor: self.tolerance_floor,
        }
    }

    /// Every key, in a form `apply_text` reads back to the same config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("width", self.width.to_string());
        kv("height", self.height.to_string());
        kv("p", self.p.to_string());
        kv("anchor1_col", self.anchor1_col.to_string());
        kv("anchor2_col", self.anchor2_col.to_string());
        kv("boundary_mode", self.boundary_mode.to_string());
        kv("samples", self.samples.to_string());
        kv("seed", self.seed.to_string());
        kv("batches", self.batches.to_string());
        kv("mask_radius", self.mask_radius.to_string());
        kv("threads", self.threads.map_or("auto".to_string(), |t| t.to_string()));
        kv("out", self.out.display().to_string());
        kv("threshold", self.threshold.to_string());
        kv("tolerance_floor", self.tolerance_floor.to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_text() {
        let mut cfg = RunConfig::default();
        cfg.set("threads", "3").unwrap();
        cfg.set("p", "0.61").unwrap();
        cfg.set("boundary_mode", "bottom-edge").unwrap();
        let mut back = RunConfig::default();
        back.apply_text(&cfg.to_text(), "t").unwrap();
        assert_eq!(back, cfg);
        for key in KEYS {
            assert!(cfg.to_text().contains(&format!("{key} = ")));
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# a run\n\nsamples = 10 # few\n  seed=7\n", "t").unwrap();
        assert_eq!((cfg.samples, cfg.seed), (10, 7));
    }

    #[test]
    fn rejects_bad_input() {
        let bad = ["colour = red", "samples = ten", "samples = 1\nsamples = 2", "width", "threads = -1"];
        for text in bad {
            let err = RunConfig::default().apply_text(text, "t").unwrap_err();
            assert!(matches!(err, CliError::Usage(_)), "{text}");
        }
        let err = RunConfig::default().apply_text("\nfoo = 1", "run.conf").unwrap_err();
        assert!(err.to_string().contains("run.conf:2"));
    }

    #[test]
    fn spec_validation_is_reported() {
        let mut cfg = RunConfig::default();
        cfg.anchor2_col = 200;
        assert!(cfg.spec().is_err());
        cfg.anchor2_col = 80;
        cfg.batches = 0;
        assert!(cfg.experiment().is_err());
    }
}
