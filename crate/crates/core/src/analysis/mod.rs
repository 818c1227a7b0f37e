//! Factorization ratio maps, masked averages with jackknife errors, and
//! the verification report against the universal constants.

mod export;
mod ratios;
mod report;

pub use export::{write_estimates_csv, write_profile_csv, write_ratio_maps_csv};
pub use ratios::{line_profiles, ratio_maps, site_ratios, ProfilePoint, Ratio, RatioMaps, SiteProbabilities};
pub use report::{
    anchor_mask, masked_average, verify, RatioStatus, RatioSummary, ReportMeta, VerificationReport,
    VerifyOptions, DEFAULT_MASK_RADIUS,
};
