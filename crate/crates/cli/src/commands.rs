use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use percorr::analysis::{
    line_profiles, verify as verify_maps, write_estimates_csv, write_profile_csv, write_ratio_maps_csv,
    Ratio, RatioMaps,
};
use percorr::estimator::{estimate, Checkpoint};
use percorr::theory::{
    cross_ratio, p_anchor_bulk, p_boundary_pair, p_bulk, p_complement_bulk, p_interval_bulk,
    p_pair_bulk, residuals, universal_constants, zeta, AnchorGeometry, BoundaryPoint, BulkPoint,
};

use crate::{CliError, Outcome, PredictArgs, RunConfig};

pub const CHECKPOINT_FILE: &str = "checkpoint.bin";
pub const ESTIMATES_FILE: &str = "estimates.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";
pub const SUMMARY_FILE: &str = "summary.kv";
pub const REPORT_FILE: &str = "report.txt";
pub const REPORT_KV_FILE: &str = "report.kv";

pub fn predict(args: &PredictArgs) -> Result<Outcome, CliError> {
    if args.constants {
        let c = universal_constants();
        for (name, v) in ["C1", "C2", "C3", "C4"].iter().zip(c.as_array()) {
            println!("{name} = {v:.12}");
        }
        if args.x1.is_none() && args.x2.is_none() && args.z.is_none() {
            return Ok(Outcome::Success);
        }
    }
    let (Some(x1), Some(x2), Some(z)) = (args.x1, args.x2, args.z.as_deref()) else {
        return Err(CliError::Usage("predict needs --x1, --x2 and --z (or --constants)".into()));
    };
    let z: Complex64 = z
        .replace(' ', "")
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse bulk point {z:?}; expected e.g. 0+1i")))?;
    let g = AnchorGeometry::new(BoundaryPoint::new(x1)?, BoundaryPoint::new(x2)?, BulkPoint::from_complex(z)?)?;
    let eta = cross_ratio(&g);
    println!("zeta = {:.15}", zeta(&g));
    println!("eta = {} {} {}i", eta.re, if eta.im < 0.0 { '-' } else { '+' }, eta.im.abs());
    println!("P(x1,x2) = {:.15}", p_boundary_pair(g.x1(), g.x2())?);
    println!("P(z) = {:.15}", p_bulk(g.z()));
    println!("P(x1,z) = {:.15}", p_anchor_bulk(g.x1(), g.z()));
    println!("P(x2,z) = {:.15}", p_anchor_bulk(g.x2(), g.z()));
    println!("P(x1,x2,z) = {:.15}", p_pair_bulk(&g));
    println!("P(I,z) = {:.15}", p_interval_bulk(&g));
    println!("P(Ic,z) = {:.15}", p_complement_bulk(&g));
    for (k, r) in residuals(&g).as_array().iter().enumerate() {
        println!("r{} = {:.15}", k + 1, r);
    }
    Ok(Outcome::Success)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    let f = File::create(path).map_err(CliError::io(format!("cannot create {}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(CliError::io(format!("cannot write {}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(CliError::io(format!("cannot create {}", dir.display())))
}

/// The manifest is a config file reproducing the run.
pub fn manifest_text(cfg: &RunConfig) -> String {
    format!(
        "# percorr run manifest\n# code_version = {}\n{}",
        env!("CARGO_PKG_VERSION"),
        cfg.to_text()
    )
}

pub fn simulate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let experiment = cfg.experiment()?;
    let spec = experiment.spec;
    ensure_dir(&cfg.out)?;
    eprintln!(
        "simulating {} samples of {} x {} in {} batches",
        cfg.samples,
        spec.width(),
        spec.height(),
        cfg.batches
    );
    let start = Instant::now();
    let counts = experiment.run()?;
    eprintln!("done in {:.1} s", start.elapsed().as_secs_f64());

    let total = counts.total();
    let est = estimate(&total)?;
    let ckpt = Checkpoint::new(cfg.seed, counts);
    ckpt.save(cfg.out.join(CHECKPOINT_FILE))?;
    let path = cfg.out.join(ESTIMATES_FILE);
    let mut w = create(&path)?;
    write_estimates_csv(&est, &mut w)
        .and_then(|_| w.flush())
        .map_err(CliError::io(format!("cannot write {}", path.display())))?;
    write_file(&cfg.out.join(MANIFEST_FILE), &manifest_text(cfg))?;

    let pair = est.pair();
    let summary = format!(
        "samples = {}\npair_connected = {}\npair_estimate = {}\npair_std_error = {}\n",
        total.n_samples(),
        total.pair_connected(),
        pair.value,
        pair.std_error
    );
    write_file(&cfg.out.join(SUMMARY_FILE), &summary)?;
    println!("P(x1,x2) = {:.7} +- {:.7}", pair.value, pair.std_error);
    println!("wrote {}", cfg.out.display());
    Ok(Outcome::Success)
}

fn load(cfg: &RunConfig, checkpoint: Option<&Path>) -> Result<Checkpoint, CliError> {
    let path: PathBuf = checkpoint.map_or_else(|| cfg.out.join(CHECKPOINT_FILE), Path::to_path_buf);
    Ok(Checkpoint::load(&path)?)
}

pub fn verify(cfg: &RunConfig, checkpoint: Option<&Path>) -> Result<Outcome, CliError> {
    let ckpt = load(cfg, checkpoint)?;
    let maps = RatioMaps::from_batches(&ckpt.counts)?;
    let report = verify_maps(&maps, &cfg.verify_options())?.with_seed(ckpt.master_seed);
    ensure_dir(&cfg.out)?;
    let text = report.to_string();
    write_file(&cfg.out.join(REPORT_FILE), &format!("{text}\n"))?;
    write_file(&cfg.out.join(REPORT_KV_FILE), &report.to_kv())?;
    println!("{text}");
    Ok(if report.passed() { Outcome::Success } else { Outcome::Failed })
}

pub fn export(cfg: &RunConfig, checkpoint: Option<&Path>, columns: &[usize]) -> Result<Outcome, CliError> {
    let ckpt = load(cfg, checkpoint)?;
    let spec = *ckpt.spec();
    let maps = RatioMaps::from_batches(&ckpt.counts)?;
    let columns = if columns.is_empty() {
        vec![spec.anchor1_col(), spec.width() / 2]
    } else {
        columns.to_vec()
    };
    // Validate every column before writing anything.
    let profiles = columns
        .iter()
        .map(|&c| {
            Ratio::ALL
                .iter()
                .map(|&r| Ok((c, r, line_profiles(&maps, r, c)?)))
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    ensure_dir(&cfg.out)?;
    for r in Ratio::ALL {
        let path = cfg.out.join(format!("map_{}.csv", r.name()));
        let mut w = create(&path)?;
        write_ratio_maps_csv(&maps, r, &mut w)
            .and_then(|_| w.flush())
            .map_err(CliError::io(format!("cannot write {}", path.display())))?;
    }
    for (c, r, profile) in profiles.into_iter().flatten() {
        let path = cfg.out.join(format!("profile_{}_col{c}.csv", r.name()));
        let mut w = create(&path)?;
        write_profile_csv(c, &profile, &mut w)
            .and_then(|_| w.flush())
            .map_err(CliError::io(format!("cannot write {}", path.display())))?;
    }
    println!("wrote ratio maps and profiles for columns {columns:?} to {}", cfg.out.display());
    Ok(Outcome::Success)
}
