use std::f64::consts::PI;

use statrs::function::gamma::gamma;

/// `Gamma(1/3)` to the digits available in double precision.
pub const GAMMA_ONE_THIRD: f64 = 2.678_938_534_707_747_6;

pub fn gamma_one_third() -> f64 {
    gamma(1.0 / 3.0)
}

/// The universal amplitudes of the four factorization identities.
///
/// `c1` and `c3` are boundary operator product coefficients (`C222` and
/// `C112`); `c2 = c1 / c3` and `c4 = c1 * c3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl UniversalConstants {
    pub fn as_array(&self) -> [f64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }
}

pub fn universal_constants() -> UniversalConstants {
    let g = gamma_one_third();
    let c1 = 2f64.powf(3.5) * PI.powf(2.5) / (3f64.powf(0.75) * g.powf(4.5));
    let c2 = 8.0 * PI * PI / 3.0 / g.powi(3);
    let c3 = 2f64.sqrt() * 3f64.powf(0.25) * PI.sqrt() / g.powf(1.5);
    let c4 = 16.0 * PI.powi(3) / (3f64.sqrt() * g.powi(6));
    UniversalConstants { c1, c2, c3, c4 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_routine_matches_literature_value() {
        assert!((gamma_one_third() - GAMMA_ONE_THIRD).abs() < 1e-15);
    }

    #[test]
    fn quoted_decimals() {
        let c = universal_constants();
        assert!((c.c1 - 1.0299268).abs() < 1e-6);
        assert!((c.c2 - 1.36893).abs() < 1e-5);
        assert!((c.c3 - 0.752360738).abs() < 1e-8);
        assert!((c.c4 - 0.7748764775).abs() < 1e-9);
    }

    #[test]
    fn algebraic_relations() {
        let c = universal_constants();
        assert!(rel(c.c2, c.c1 / c.c3) < 1e-12);
        assert!(rel(c.c4, c.c1 * c.c3) < 1e-12);
        assert!(rel(c.c2 * c.c3, c.c1) < 1e-12);
        assert!(rel(c.c4 / c.c3, c.c1) < 1e-12);
    }
}
