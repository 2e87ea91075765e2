//! Borel–Padé resummation.
//!
//! For a series of Gevrey order `k` the Borel–Leroy transform
//! `B(v) = Σ cₙ vⁿ/(kn)!` has a finite radius of convergence, so its diagonal
//! Padé approximant continues it along the positive axis and
//! `Σ cₙ zⁿ = ∫₀^∞ e^{-s} B(z sᵏ) ds`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::series::AsymptoticSeries;
use crate::error::{Error, Result};
use crate::numerics::{adaptive, polynomial_roots};

/// Upper end of the Laplace integral; `e^{-60}` is below double precision.
const LAPLACE_CUTOFF: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorelSum {
    pub value: f64,
    /// Difference between the `[m/m]` and `[m-1/m-1]` resummations.
    pub error_estimate: f64,
    pub pade_order: usize,
}

#[derive(Debug, Clone)]
struct Pade {
    numerator: Vec<f64>,
    denominator: Vec<f64>,
}

impl Pade {
    fn eval(&self, v: f64) -> f64 {
        horner(&self.numerator, v) / horner(&self.denominator, v)
    }
}

fn horner(coeffs: &[f64], v: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Solves the square system in place by exact Gaussian elimination.
fn solve_rational(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &m[col][col];
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
            let sub = &f * &rhs[col];
            rhs[r] -= sub;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = rhs[r].clone();
        for c in r + 1..n {
            acc -= &m[r][c] * &x[c];
        }
        x[r] = acc / &m[r][r];
    }
    Some(x)
}

/// Diagonal `[m/m]` approximant of `Σ bₙ vⁿ`, dropping to lower order when the
/// defining system is degenerate (e.g. for a terminating series).
fn pade(b: &[BigRational], m: usize) -> Pade {
    for order in (0..=m).rev() {
        if order == 0 {
            return Pade {
                numerator: vec![b[0].to_f64().unwrap_or(f64::NAN)],
                denominator: vec![1.0],
            };
        }
        // Σ_{j=0}^{order} q_j b_{k-j} = 0 for k = order+1 ..= 2·order, q_0 = 1
        let matrix: Vec<Vec<BigRational>> = (order + 1..=2 * order)
            .map(|k| (1..=order).map(|j| b[k - j].clone()).collect())
            .collect();
        let rhs: Vec<BigRational> = (order + 1..=2 * order).map(|k| -b[k].clone()).collect();
        let Some(tail) = solve_rational(matrix, rhs) else {
            continue;
        };
        let mut q = vec![BigRational::one()];
        q.extend(tail);
        let p: Vec<BigRational> = (0..=order)
            .map(|k| (0..=k).fold(BigRational::zero(), |acc, j| acc + &q[j] * &b[k - j]))
            .collect();
        return Pade {
            numerator: p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(),
            denominator: q.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(),
        };
    }
    unreachable!("order 0 always returns")
}

fn laplace(pade: &Pade, value: f64, gevrey: i32) -> Result<f64> {
    let est = adaptive(
        |s| (-s).exp() * pade.eval(value * s.powi(gevrey)),
        0.0,
        LAPLACE_CUTOFF,
        1e-15,
        1e-14,
        4000,
    )?;
    Ok(est.value)
}

/// Borel–Padé sum of `series` at expansion value `value`.
///
/// Uses the diagonal approximant of order `m = ⌊n_max/2⌋` and reports the
/// change from order `m - 1` as the error estimate.
pub fn borel_resum(series: &AsymptoticSeries, value: f64) -> Result<BorelSum> {
    if series.len() < 4 {
        return Err(Error::SeriesTooShort { needed: 4, got: series.len() });
    }
    if !(value >= 0.0) {
        return Err(Error::invalid("value", "expansion value must be non-negative"));
    }
    let k = series.gevrey_order.max(1);
    let transform: Vec<BigRational> = series
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| c / BigRational::from_integer(factorial(k as u64 * n as u64)))
        .collect();
    let n_max = series.len() - 1;
    let m = n_max / 2;

    let best = pade(&transform, m);
    if value > 0.0 {
        let reach = value * LAPLACE_CUTOFF.powi(k as i32);
        for root in polynomial_roots(&best.denominator) {
            if root.re > 0.0 && root.re <= reach && root.im.abs() <= 1e-8 * root.re {
                return Err(Error::PadePole { location: root.re });
            }
        }
    }
    let previous = pade(&transform, m - 1);
    let v_best = laplace(&best, value, k as i32)?;
    let v_prev = laplace(&previous, value, k as i32)?;
    Ok(BorelSum {
        value: series.prefactor * v_best,
        error_estimate: (series.prefactor * (v_best - v_prev)).abs(),
        pade_order: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerodim::{series_r, CubicModel};

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn terminating_series_passes_through() {
        let coeffs = vec![int(1), int(0), int(0), int(0), int(0)];
        let s = AsymptoticSeries::new(coeffs, "z", 0.5, 1);
        for z in [0.0, 0.3, 10.0] {
            let r = borel_resum(&s, z).unwrap();
            assert!((r.value - 0.5).abs() < 1e-14);
            assert!(r.error_estimate < 1e-14);
        }
    }

    #[test]
    fn euler_series() {
        // Σ (-1)ⁿ n! zⁿ  ↔  ∫ e^{-t}/(1 + z t) dt
        let coeffs: Vec<BigRational> = (0..12)
            .map(|n| {
                let f = BigRational::from_integer(factorial(n));
                if n % 2 == 0 { f } else { -f }
            })
            .collect();
        let s = AsymptoticSeries::new(coeffs, "z", 1.0, 1);
        let r = borel_resum(&s, 0.1).unwrap();
        let oracle = adaptive(|t| (-t).exp() / (1.0 + 0.1 * t), 0.0, 60.0, 1e-15, 1e-15, 1000)
            .unwrap()
            .value;
        assert!((oracle - 0.915_633).abs() < 1e-6);
        assert!((r.value - oracle).abs() < 1e-13, "{} vs {}", r.value, oracle);
    }

    #[test]
    fn pole_on_positive_axis_is_flagged() {
        // Σ n! zⁿ has Borel transform 1/(1 - v): pole at v = 1
        let coeffs: Vec<BigRational> = (0..8).map(|n| BigRational::from_integer(factorial(n))).collect();
        let s = AsymptoticSeries::new(coeffs, "z", 1.0, 1);
        match borel_resum(&s, 0.1) {
            Err(Error::PadePole { location }) => assert!((location - 1.0).abs() < 1e-10),
            other => panic!("expected a pole, got {other:?}"),
        }
    }

    #[test]
    fn rejects_short_series_and_negative_value() {
        let s = AsymptoticSeries::new(vec![int(1), int(-1), int(2)], "z", 1.0, 1);
        assert!(matches!(borel_resum(&s, 0.1), Err(Error::SeriesTooShort { .. })));
        let s = series_r(&CubicModel::real(1.0, 0.1).unwrap(), 8);
        assert!(borel_resum(&s, -1.0).is_err());
    }
}
