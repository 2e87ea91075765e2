//! The zero-dimensional cubic model `A = ∫ dx/√(2π) exp(i(a x²/2 + b x³/3))`.
//!
//! Exact amplitude via the Airy function, the probability restricted to the
//! steepest-descent path through the minimum `x₁ = 0`, its asymptotic series in
//! `z = 2b⁴/(3a⁶)`, Borel–Padé resummation, and the pairing-operator algebra that
//! generates the series from two different organizations of perturbation theory.

pub mod airy;
mod amplitude;
mod borel;
mod pairing;
mod series;
mod thimble;

pub use amplitude::{amplitude_damped, amplitude_damped_extrapolated, amplitude_exact};
pub use borel::{borel_resum, BorelSum};
pub use pairing::{pairing_expand, Monomial, PairingSeries};
pub use series::{double_factorial, series_r, AsymptoticSeries};
pub use thimble::{probability_thimble, thimble_amplitude, ThimbleOptions};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parameters of the cubic integral: quadratic coupling `a = a_re + i·a_im`
/// (with `a_im ≥ 0` the convergence regulator) and cubic coupling `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicModel {
    pub a_re: f64,
    pub a_im: f64,
    pub b: f64,
}

impl CubicModel {
    pub fn new(a_re: f64, a_im: f64, b: f64) -> Result<Self> {
        let model = Self { a_re, a_im, b };
        model.validate()?;
        Ok(model)
    }

    /// Real couplings with no regulator.
    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::new(a, 0.0, b)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.a_re.is_finite() && self.a_im.is_finite() && self.b.is_finite()) {
            return Err(Error::invalid("model", "couplings must be finite"));
        }
        if self.a_im < 0.0 {
            return Err(Error::invalid("a_im", format!("regulator must be non-negative, got {}", self.a_im)));
        }
        if self.b < 0.0 {
            return Err(Error::invalid("b", format!("cubic coupling must be non-negative, got {}", self.b)));
        }
        Ok(())
    }

    pub fn a(&self) -> Complex64 {
        Complex64::new(self.a_re, self.a_im)
    }

    /// Expansion variable `z = 2b⁴/(3a⁶)` of the probability series.
    pub fn expansion_variable(&self) -> f64 {
        2.0 * self.b.powi(4) / (3.0 * self.a_re.powi(6))
    }

    /// Extrema of the phase: `x₁ = 0` (minimum) and `x₂ = -a/b`.
    pub fn saddles(&self) -> (f64, Option<f64>) {
        if self.b > 0.0 {
            (0.0, Some(-self.a_re / self.b))
        } else {
            (0.0, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saddle_locations() {
        let m = CubicModel::real(2.0, 1.0).unwrap();
        assert_eq!(m.saddles(), (0.0, Some(-2.0)));
        assert_eq!(CubicModel::real(1.0, 0.0).unwrap().saddles(), (0.0, None));
    }

    #[test]
    fn rejects_negative_regulator_and_coupling() {
        assert!(CubicModel::new(1.0, -1e-3, 1.0).is_err());
        assert!(CubicModel::new(1.0, 0.0, -1.0).is_err());
        assert!(CubicModel::new(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn expansion_variable_value() {
        let m = CubicModel::real(1.0, 0.1).unwrap();
        assert!((m.expansion_variable() - 2.0e-4 / 3.0).abs() < 1e-18);
    }
}
