use num_complex::Complex64;

use crate::{Error, Result};

/// A point on the real axis.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BoundaryPoint(f64);

impl BoundaryPoint {
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain(format!("boundary coordinate {x} is not finite")));
        }
        Ok(BoundaryPoint(x))
    }

    pub fn x(self) -> f64 {
        self.0
    }
}

/// A point `x + iy` strictly inside the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkPoint {
    x: f64,
    y: f64,
}

impl BulkPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!("bulk point {x}+{y}i is not finite")));
        }
        if y <= 0.0 {
            return Err(Error::domain(format!(
                "bulk point {x}+{y}i is not in the upper half-plane"
            )));
        }
        Ok(BulkPoint { x, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// `|z - x|`.
    pub fn distance_to(self, p: BoundaryPoint) -> f64 {
        (self.x - p.x()).hypot(self.y)
    }
}

/// Two ordered boundary anchors and one bulk point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorGeometry {
    x1: BoundaryPoint,
    x2: BoundaryPoint,
    z: BulkPoint,
}

impl AnchorGeometry {
    pub fn new(x1: BoundaryPoint, x2: BoundaryPoint, z: BulkPoint) -> Result<Self> {
        if x1.x() >= x2.x() {
            return Err(Error::domain(format!(
                "anchors must satisfy x1 < x2, got x1 = {}, x2 = {}",
                x1.x(),
                x2.x()
            )));
        }
        if !(x2.x() - x1.x()).is_finite() {
            return Err(Error::domain("anchor separation overflows"));
        }
        Ok(AnchorGeometry { x1, x2, z })
    }

    /// Convenience constructor from raw coordinates.
    pub fn from_coords(x1: f64, x2: f64, zx: f64, zy: f64) -> Result<Self> {
        Self::new(
            BoundaryPoint::new(x1)?,
            BoundaryPoint::new(x2)?,
            BulkPoint::new(zx, zy)?,
        )
    }

    pub fn x1(&self) -> BoundaryPoint {
        self.x1
    }

    pub fn x2(&self) -> BoundaryPoint {
        self.x2
    }

    pub fn z(&self) -> BulkPoint {
        self.z
    }

    pub fn separation(&self) -> f64 {
        self.x2.x() - self.x1.x()
    }

    /// `q = (z - x2)(conj(z) - x1)`. The cross-ratio is `q / conj(q)` and
    /// `Im q = y (x2 - x1) > 0`, so `Arg q` is the subtended angle itself.
    fn angle_numerator(&self) -> Complex64 {
        let a = self.z.x - self.x2.x();
        let b = self.z.x - self.x1.x();
        let y = self.z.y;
        Complex64::new(a * b + y * y, y * self.separation())
    }

    /// Trigonometric data of the subtended angle, evaluated without
    /// cancellation near either end of `(0, pi)`.
    pub fn subtended(&self) -> SubtendedAngle {
        let q = self.angle_numerator();
        let modulus = self.z.distance_to(self.x1) * self.z.distance_to(self.x2);
        let (re, im) = (q.re, q.im);
        let im2 = im * im;
        // 1 - cos and 1 + cos, each taken from the form that avoids subtraction.
        let one_minus_cos = if re > 0.0 {
            im2 / (modulus * (modulus + re))
        } else {
            (modulus - re) / modulus
        };
        let one_plus_cos = if re < 0.0 {
            im2 / (modulus * (modulus - re))
        } else {
            (modulus + re) / modulus
        };
        SubtendedAngle {
            angle: q.arg(),
            sin: im / modulus,
            cos: re / modulus,
            sin_half: (0.5 * one_minus_cos).sqrt(),
            cos_half: (0.5 * one_plus_cos).sqrt(),
        }
    }
}

/// The angle `zeta` subtended at `z` by `(x1, x2)`, with its sines and cosines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubtendedAngle {
    pub angle: f64,
    pub sin: f64,
    pub cos: f64,
    pub sin_half: f64,
    pub cos_half: f64,
}

/// `eta = (z - x2)(conj(z) - x1) / ((conj(z) - x2)(z - x1))`, a unit-modulus complex number.
pub fn cross_ratio(g: &AnchorGeometry) -> Complex64 {
    let z = g.z.as_complex();
    let zb = z.conj();
    let (x1, x2) = (g.x1.x(), g.x2.x());
    ((z - x2) * (zb - x1)) / ((zb - x2) * (z - x1))
}

/// Subtended angle in `(0, pi)`; `eta = exp(2 i zeta)`.
pub fn zeta(g: &AnchorGeometry) -> f64 {
    g.angle_numerator().arg()
}

/// `sin(zeta) = y (x2 - x1) / (|z - x1| |z - x2|)`.
pub fn sin_zeta_closed_form(g: &AnchorGeometry) -> f64 {
    let z = g.z;
    z.y * g.separation() / (z.distance_to(g.x1) * z.distance_to(g.x2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn g(x1: f64, x2: f64, zx: f64, zy: f64) -> AnchorGeometry {
        AnchorGeometry::from_coords(x1, x2, zx, zy).unwrap()
    }

    #[test]
    fn cross_ratio_examples() {
        let eta = cross_ratio(&g(-1.0, 1.0, 0.0, 1.0));
        assert!((eta - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let eta = cross_ratio(&g(0.0, 1.0, 1.0, 1.0));
        assert!((eta - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn zeta_examples() {
        assert!((zeta(&g(-1.0, 1.0, 0.0, 1.0)) - FRAC_PI_2).abs() < 1e-15);
        assert!((zeta(&g(0.0, 1.0, 1.0, 1.0)) - FRAC_PI_4).abs() < 1e-15);
        // Approaching the midpoint from above opens the angle towards pi.
        let near = zeta(&g(-1.0, 1.0, 0.0, 1e-9));
        assert!(PI - near < 1e-8);
        // Far away the interval shrinks to a point.
        assert!(zeta(&g(-1.0, 1.0, 0.0, 1e9)) < 1e-8);
    }

    #[test]
    fn sin_closed_form_examples() {
        assert!((sin_zeta_closed_form(&g(-1.0, 1.0, 0.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((sin_zeta_closed_form(&g(0.0, 1.0, 1.0, 1.0)) - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn half_angles_match_direct_evaluation() {
        for &(x1, x2, zx, zy) in &[
            (-1.0, 1.0, 0.0, 1.0),
            (0.0, 1.0, 1.0, 1.0),
            (0.0, 3.0, -2.0, 0.5),
            (-4.0, 1.0, -1.0, 0.1),
        ] {
            let geom = g(x1, x2, zx, zy);
            let s = geom.subtended();
            let z = zeta(&geom);
            assert!((s.sin_half - (z / 2.0).sin()).abs() < 1e-14);
            assert!((s.cos_half - (z / 2.0).cos()).abs() < 1e-14);
            assert!((s.cos - z.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_geometry_rejected() {
        assert!(matches!(
            AnchorGeometry::from_coords(0.0, 1.0, 0.5, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(AnchorGeometry::from_coords(1.0, 1.0, 0.5, 1.0).is_err());
        assert!(AnchorGeometry::from_coords(2.0, 1.0, 0.5, 1.0).is_err());
        assert!(BulkPoint::new(0.0, -1.0).is_err());
        assert!(BoundaryPoint::new(f64::NAN).is_err());
    }
}
