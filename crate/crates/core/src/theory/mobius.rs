use num_complex::Complex64;

use super::geometry::{AnchorGeometry, BoundaryPoint, BulkPoint};
use crate::{Error, Result};

/// Real Möbius map `w -> (a w + b) / (c w + d)` with `a d - b c > 0`.
///
/// Such maps are the conformal automorphisms of the upper half-plane, so
/// they carry the half-plane identities to any other half-plane geometry
/// with the same cross-ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MobiusMap {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::domain("Möbius coefficients must be finite"));
        }
        let det = a * d - b * c;
        if !(det > 0.0) {
            return Err(Error::domain(format!(
                "Möbius map must have a d - b c > 0, got {det}"
            )));
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusMap { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn translation(shift: f64) -> Result<Self> {
        Self::new(1.0, shift, 0.0, 1.0)
    }

    pub fn scaling(factor: f64) -> Result<Self> {
        Self::new(factor, 0.0, 0.0, 1.0)
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn apply_real(&self, x: f64) -> Result<f64> {
        let den = self.c * x + self.d;
        let w = (self.a * x + self.b) / den;
        if den == 0.0 || !w.is_finite() {
            return Err(Error::domain(format!("boundary point {x} maps to infinity")));
        }
        Ok(w)
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm_sqr() == 0.0 {
            return Err(Error::domain(format!("point {z} maps to infinity")));
        }
        let w = (self.a * z + self.b) / den;
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::domain(format!("point {z} maps to infinity")));
        }
        Ok(w)
    }
}

/// Image of a geometry under `t`. Fails when an image lies at infinity or
/// the boundary anchors come out in the wrong order.
pub fn mobius_apply(t: &MobiusMap, g: &AnchorGeometry) -> Result<AnchorGeometry> {
    let x1 = BoundaryPoint::new(t.apply_real(g.x1().x())?)?;
    let x2 = BoundaryPoint::new(t.apply_real(g.x2().x())?)?;
    let z = BulkPoint::from_complex(t.apply(g.z().as_complex())?)?;
    AnchorGeometry::new(x1, x2, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x1: f64, x2: f64, zx: f64, zy: f64) -> AnchorGeometry {
        AnchorGeometry::from_coords(x1, x2, zx, zy).unwrap()
    }

    #[test]
    fn identity_is_identity() {
        let geom = g(-0.3, 2.5, 0.7, 0.2);
        assert_eq!(mobius_apply(&MobiusMap::identity(), &geom).unwrap(), geom);
    }

    #[test]
    fn translation_and_scaling() {
        let t = MobiusMap::translation(5.0).unwrap();
        assert_eq!(
            mobius_apply(&t, &g(-1.0, 1.0, 0.0, 1.0)).unwrap(),
            g(4.0, 6.0, 5.0, 1.0)
        );
        let s = MobiusMap::scaling(2.0).unwrap();
        assert_eq!(
            mobius_apply(&s, &g(0.0, 1.0, 1.0, 1.0)).unwrap(),
            g(0.0, 2.0, 2.0, 2.0)
        );
    }

    #[test]
    fn rejects_orientation_reversal() {
        assert!(MobiusMap::new(-1.0, 0.0, 0.0, 1.0).is_err());
        assert!(MobiusMap::new(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn pole_on_anchor_is_domain_error() {
        // w -> -1/w has a pole at 0.
        let inv = MobiusMap::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            mobius_apply(&inv, &g(0.0, 1.0, 0.5, 1.0)),
            Err(Error::Domain(_))
        ));
        // Pole strictly between the anchors reverses their order.
        assert!(mobius_apply(&inv, &g(-1.0, 1.0, 0.5, 1.0)).is_err());
        // Pole outside the interval is fine.
        assert!(mobius_apply(&inv, &g(1.0, 2.0, 0.5, 1.0)).is_ok());
    }
}
