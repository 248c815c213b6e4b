//! Heavy-tailed step generators: Mantegna's Levy-stable construction and
//! the standard Cauchy draw used by the safe-zone move.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Below this magnitude the denominator draw `v` is redrawn.
const MIN_DENOMINATOR: f64 = 1e-300;

/// Scale of the numerator normal in Mantegna's algorithm:
///
/// `sigma = [G(1+b) sin(pi b/2) / (G((1+b)/2) b 2^((b-1)/2))]^(1/b)`
///
/// The bracket is positive only for `0 < beta < 2`; larger exponents are
/// rejected even though the generator is usually quoted on `(0, 3)`.
pub fn levy_sigma(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 3.0) {
        return Err(Error::domain(format!(
            "levy exponent must lie in (0, 3), got {beta}"
        )));
    }
    if beta >= 2.0 {
        return Err(Error::domain(format!(
            "levy exponent {beta} >= 2 makes sin(pi*beta/2) non-positive; sigma is undefined"
        )));
    }
    let num = libm::tgamma(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = libm::tgamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    Ok((num / den).powf(1.0 / beta))
}

/// Levy-flight step generator with the scale precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyFlight {
    beta: f64,
    sigma: f64,
}

impl LevyFlight {
    pub fn new(beta: f64) -> Result<Self> {
        Ok(Self {
            beta,
            sigma: levy_sigma(beta)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// One draw `u / |v|^(1/beta)` with `u ~ N(0, sigma^2)`, `v ~ N(0, 1)`.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let u = self.sigma * rng.standard_normal();
        let mut v = rng.standard_normal();
        while v.abs() < MIN_DENOMINATOR {
            v = rng.standard_normal();
        }
        u / v.abs().powf(1.0 / self.beta)
    }
}

/// Single Levy step; prefer [`LevyFlight`] in loops.
pub fn levy_step(beta: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(LevyFlight::new(beta)?.sample(rng))
}

/// Standard Cauchy variate by inversion, `tan(pi (r - 0.5))` for `r` in `[0, 1)`.
pub fn cauchy_from_uniform(r: f64) -> f64 {
    (PI * (r - 0.5)).tan()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_at_unit_exponent() {
        assert!((levy_sigma(1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_domain() {
        assert!(matches!(levy_sigma(3.5), Err(Error::Domain(_))));
        assert!(levy_sigma(0.0).is_err());
        assert!(levy_sigma(-1.0).is_err());
        assert!(levy_sigma(f64::NAN).is_err());
        assert!(levy_sigma(2.5).is_err());
        assert!(levy_sigma(1.99).is_ok());
    }

    #[test]
    fn seeded_step_is_reproducible() {
        let a = levy_step(1.5, &mut RngStream::new(9)).unwrap();
        let b = levy_step(1.5, &mut RngStream::new(9)).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn cauchy_center_is_zero() {
        assert_eq!(cauchy_from_uniform(0.5), 0.0);
        assert!(cauchy_from_uniform(0.75) > 0.99 && cauchy_from_uniform(0.75) < 1.01);
    }
}
