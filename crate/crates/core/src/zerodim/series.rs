use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CubicModel;
use crate::error::Result;

/// `n!!` with the convention `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// A formal power series `prefactor · Σ cₙ zⁿ` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    pub coefficients: Vec<BigRational>,
    /// Human-readable name of the expansion variable.
    pub variable: String,
    pub prefactor: f64,
    /// Growth class: coefficients behave like `(k·n)!` for `gevrey_order = k`.
    /// Selects the Borel–Leroy transform used by the resummation.
    pub gevrey_order: u32,
    /// Index of the smallest term at the recorded expansion value.
    pub truncation_index: usize,
    pub least_term_magnitude: f64,
}

impl AsymptoticSeries {
    pub fn new(coefficients: Vec<BigRational>, variable: impl Into<String>, prefactor: f64, gevrey_order: u32) -> Self {
        Self {
            coefficients,
            variable: variable.into(),
            prefactor,
            gevrey_order,
            truncation_index: 0,
            least_term_magnitude: f64::NAN,
        }
    }

    /// Records the optimal-truncation point for expansion value `value`.
    pub fn with_truncation_at(mut self, value: f64) -> Self {
        let (index, magnitude) = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| (n, (c.to_f64().unwrap_or(f64::INFINITY) * value.powi(n as i32)).abs()))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        self.truncation_index = index;
        self.least_term_magnitude = magnitude;
        self
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, n: usize) -> f64 {
        self.coefficients[n].to_f64().unwrap_or(f64::NAN)
    }

    /// `prefactor · Σ_{n ≤ last} cₙ valueⁿ`.
    pub fn partial_sum(&self, value: f64, last: usize) -> f64 {
        let s: f64 = self.coefficients[..=last.min(self.len() - 1)]
            .iter()
            .enumerate()
            .map(|(n, c)| c.to_f64().unwrap_or(f64::NAN) * value.powi(n as i32))
            .sum();
        self.prefactor * s
    }

    /// Sum truncated just before the smallest term.
    pub fn superasymptotic_sum(&self, value: f64) -> f64 {
        let truncated = self.clone().with_truncation_at(value);
        self.partial_sum(value, truncated.truncation_index.saturating_sub(1))
    }

    /// Writes `n,numerator,denominator` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "numerator", "denominator"])?;
        for (n, c) in self.coefficients.iter().enumerate() {
            w.write_record([n.to_string(), c.numer().to_string(), c.denom().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Whether the coefficient signs alternate, ignoring exact zeros.
    pub fn alternates(&self) -> bool {
        self.coefficients
            .iter()
            .enumerate()
            .all(|(n, c)| c.is_zero() || (c.is_positive() == (n % 2 == 0)))
    }
}

/// The minimum-saddle probability series
/// `R = (1/a) Σ (-1)ⁿ (6n-1)!!/n! · zⁿ`, `z = 2b⁴/(3a⁶)`.
pub fn series_r(model: &CubicModel, n_max: usize) -> AsymptoticSeries {
    let coefficients = (0..=n_max as u64)
        .map(|n| {
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            BigRational::new(sign * double_factorial(6 * n as i64 - 1), factorial(n))
        })
        .collect();
    AsymptoticSeries::new(coefficients, "z = 2b^4/(3a^6)", model.a_re.recip(), 2)
        .with_truncation_at(model.expansion_variable())
}
