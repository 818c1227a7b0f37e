use super::geometry::{AnchorGeometry, BoundaryPoint, BulkPoint};
use super::{ANCHOR_PAIR_EXPONENT, BULK_EXPONENT};
use crate::{Error, Result};

/// Connection of two boundary points, `(x2 - x1)^(-2/3)`.
pub fn p_boundary_pair(x1: BoundaryPoint, x2: BoundaryPoint) -> Result<f64> {
    let d = x2.x() - x1.x();
    if !(d > 0.0) {
        return Err(Error::domain(format!(
            "boundary pair needs x1 < x2, got x1 = {}, x2 = {}",
            x1.x(),
            x2.x()
        )));
    }
    Ok(d.powf(-ANCHOR_PAIR_EXPONENT))
}

/// Connection of a bulk point to anywhere on the boundary, `y^(-5/48)`.
pub fn p_bulk(z: BulkPoint) -> f64 {
    z.y().powf(-BULK_EXPONENT)
}

/// Connection of a boundary anchor and a bulk point, `y^(11/48) |z - x1|^(-2/3)`.
pub fn p_anchor_bulk(x1: BoundaryPoint, z: BulkPoint) -> f64 {
    z.y().powf(11.0 / 48.0) * z.distance_to(x1).powf(-ANCHOR_PAIR_EXPONENT)
}

fn pair_prefactor(g: &AnchorGeometry) -> f64 {
    g.separation().powf(-ANCHOR_PAIR_EXPONENT)
}

/// Cluster touching both anchors and the bulk point,
/// `(x2 - x1)^(-2/3) y^(-5/48) sin^(1/3)(zeta)`.
pub fn p_pair_bulk(g: &AnchorGeometry) -> f64 {
    pair_prefactor(g) * p_bulk(g.z()) * g.subtended().sin.cbrt()
}

/// Cluster touching the boundary inside `(x1, x2)` and the bulk point,
/// `y^(-5/48) sin^(1/3)(zeta / 2)`.
pub fn p_interval_bulk(g: &AnchorGeometry) -> f64 {
    p_bulk(g.z()) * g.subtended().sin_half.cbrt()
}

/// Cluster touching the boundary outside `(x1, x2)` and the bulk point,
/// `y^(-5/48) cos^(1/3)(zeta / 2)`.
pub fn p_complement_bulk(g: &AnchorGeometry) -> f64 {
    p_bulk(g.z()) * g.subtended().cos_half.cbrt()
}

/// Ratios of the four factorization identities under unit amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// `P(x1,x2,z) / sqrt(P(x1,x2) P(x1,z) P(x2,z))`
    pub r1: f64,
    /// `P(x1,x2,z) P(z) / (P(x1,x2) P(I,z) P(Ic,z))`
    pub r2: f64,
    /// `P(I,z) P(Ic,z) sqrt(P(x1,x2)) / (P(z) sqrt(P(x1,z) P(x2,z)))`
    pub r3: f64,
    /// `P(I,z) P(Ic,z) P(x1,x2,z) / (P(z) P(x1,z) P(x2,z))`
    pub r4: f64,
}

impl Residuals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.r1, self.r2, self.r3, self.r4]
    }
}

/// Geometry-independent values of [`residuals`]: `1, 2^(1/3), 2^(-1/3), 2^(-1/3)`.
pub const EXPECTED_RESIDUALS: [f64; 4] = [
    1.0,
    1.259_921_049_894_873_2,
    0.793_700_525_984_099_7,
    0.793_700_525_984_099_7,
];

pub fn residuals(g: &AnchorGeometry) -> Residuals {
    let z = g.z();
    let pair = p_boundary_pair(g.x1(), g.x2()).expect("AnchorGeometry keeps x1 < x2");
    let bulk = p_bulk(z);
    let a1 = p_anchor_bulk(g.x1(), z);
    let a2 = p_anchor_bulk(g.x2(), z);
    let three = p_pair_bulk(g);
    let inside = p_interval_bulk(g);
    let outside = p_complement_bulk(g);

    Residuals {
        r1: three / (pair * a1 * a2).sqrt(),
        r2: three * bulk / (pair * inside * outside),
        r3: inside * outside * pair.sqrt() / (bulk * (a1 * a2).sqrt()),
        r4: inside * outside * three / (bulk * a1 * a2),
    }
}
