//! Truncated polynomials in the auxiliary variables `(j, e)` with coefficients
//! polynomial in the coupling `b`, and the pairing operator
//! `exp(σ ∂_j ∂_e)` evaluated at `j = e = 0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exponents of `j^j e^e b^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub j: u32,
    pub e: u32,
    pub b: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { j: 0, e: 0, b: 0 };

    pub fn new(j: u32, e: u32, b: u32) -> Self {
        Self { j, e, b }
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial::new(self.j + other.j, self.e + other.e, self.b + other.b)
    }
}

/// Sparse truncated polynomial over exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingSeries {
    terms: BTreeMap<Monomial, BigRational>,
    pub max_j: u32,
    pub max_e: u32,
    pub max_b: u32,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

impl PairingSeries {
    pub fn zero(max_j: u32, max_e: u32, max_b: u32) -> Self {
        Self {
            terms: BTreeMap::new(),
            max_j,
            max_e,
            max_b,
        }
    }

    pub fn constant(c: BigRational, max_j: u32, max_e: u32, max_b: u32) -> Self {
        let mut s = Self::zero(max_j, max_e, max_b);
        s.add_term(Monomial::ONE, c);
        s
    }

    pub fn monomial(m: Monomial, c: BigRational, max_j: u32, max_e: u32, max_b: u32) -> Self {
        let mut s = Self::zero(max_j, max_e, max_b);
        s.add_term(m, c);
        s
    }

    fn keeps(&self, m: &Monomial) -> bool {
        m.j <= self.max_j && m.e <= self.max_e && m.b <= self.max_b
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() || !self.keeps(&m) {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coefficient(&self, m: Monomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &PairingSeries) -> PairingSeries {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> PairingSeries {
        let mut out = Self::zero(self.max_j, self.max_e, self.max_b);
        for (m, c) in &self.terms {
            out.add_term(*m, c * k);
        }
        out
    }

    pub fn mul(&self, other: &PairingSeries) -> PairingSeries {
        let mut out = Self::zero(
            self.max_j.min(other.max_j),
            self.max_e.min(other.max_e),
            self.max_b.min(other.max_b),
        );
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.times(*m2);
                if out.keeps(&m) {
                    out.add_term(m, c1 * c2);
                }
            }
        }
        out
    }

    /// `Σ_n coeffs[n] · selfⁿ`, stopping once powers vanish under truncation.
    ///
    /// `self` must have no constant term so that powers eventually truncate away.
    fn compose(&self, coeffs: impl Fn(u32) -> BigRational) -> PairingSeries {
        assert!(
            self.coefficient(Monomial::ONE).is_zero(),
            "composition needs an argument without constant term"
        );
        let mut out = Self::constant(coeffs(0), self.max_j, self.max_e, self.max_b);
        let mut power = Self::constant(BigRational::one(), self.max_j, self.max_e, self.max_b);
        let mut n = 0;
        loop {
            n += 1;
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&coeffs(n)));
        }
        out
    }

    /// `exp(self)` for an argument without constant term.
    pub fn exp(&self) -> PairingSeries {
        self.compose(|n| BigRational::new(BigInt::one(), factorial(n)))
    }

    /// `(1 - self)^(-1/2)` for an argument without constant term.
    pub fn inverse_sqrt_one_minus(&self) -> PairingSeries {
        // binomial coefficients (2n)! / (4ⁿ (n!)²)
        self.compose(|n| {
            BigRational::new(
                factorial(2 * n),
                BigInt::from(4).pow(n) * factorial(n) * factorial(n),
            )
        })
    }

    /// Single pairing input `F = j·e`.
    pub fn single_pair() -> PairingSeries {
        Self::monomial(Monomial::new(1, 1, 0), BigRational::one(), 1, 1, 0)
    }

    /// Minimum-saddle form from the δ-measure route:
    /// `(1 - 4bj/a²)^(-1/2) · exp(2b e³/3)`, complete through `b^max_b`.
    pub fn delta_measure_form(a: &BigRational, max_b: u32) -> PairingSeries {
        let (mj, me) = (max_b, 3 * max_b);
        let a2 = a * a;
        let u = Self::monomial(Monomial::new(1, 0, 1), int(4) / &a2, mj, me, max_b);
        let cubic = Self::monomial(Monomial::new(0, 3, 1), BigRational::new(2.into(), 3.into()), mj, me, max_b);
        u.inverse_sqrt_one_minus().mul(&cubic.exp())
    }

    /// Stationary-phase form with the source moved into the exponent:
    /// `exp(2b e³/3) · exp(-2b e j²/a²)`, complete through `b^max_b`.
    ///
    /// Both factors are written after the `e → i e` rotation that makes the
    /// pairing strength real.
    pub fn stationary_phase_form(a: &BigRational, max_b: u32) -> PairingSeries {
        let (mj, me) = (2 * max_b, 3 * max_b);
        let a2 = a * a;
        let cubic = Self::monomial(Monomial::new(0, 3, 1), BigRational::new(2.into(), 3.into()), mj, me, max_b);
        let source = Self::monomial(Monomial::new(2, 1, 1), int(-2) / &a2, mj, me, max_b);
        cubic.exp().mul(&source.exp())
    }
}

/// Applies `exp(σ ∂_j ∂_e)` and sets `j = e = 0`, returning the coefficients of
/// `b⁰ … b^order`.
///
/// Only diagonal monomials `j^k e^k` survive; each contributes `σᵏ k!` times its
/// coefficient.
pub fn pairing_expand(series: &PairingSeries, sigma: &BigRational, order: usize) -> Result<Vec<BigRational>> {
    if order > series.max_b as usize {
        return Err(Error::TruncationOverflow {
            requested: order,
            stored: series.max_b as usize,
        });
    }
    let mut out = vec![BigRational::zero(); order + 1];
    for (m, c) in series.terms() {
        if m.j != m.e || m.b as usize > order {
            continue;
        }
        let k = m.j;
        let weight = num_traits::pow(sigma.clone(), k as usize) * BigRational::from_integer(factorial(k));
        out[m.b as usize] += weight * c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerodim::{series_r, CubicModel};

    fn half() -> BigRational {
        BigRational::new((-1).into(), 2.into())
    }

    #[test]
    fn single_pairing() {
        let r = pairing_expand(&PairingSeries::single_pair(), &half(), 0).unwrap();
        assert_eq!(r, vec![half()]);
    }

    #[test]
    fn delta_measure_route_reproduces_series() {
        let a = int(1);
        let out = pairing_expand(&PairingSeries::delta_measure_form(&a, 8), &half(), 8).unwrap();
        let s = series_r(&CubicModel::real(1.0, 0.1).unwrap(), 2);
        let z = BigRational::new(2.into(), 3.into());
        assert_eq!(out[0], s.coefficients[0]);
        assert_eq!(out[4], &s.coefficients[1] * &z);
        assert_eq!(out[8], &s.coefficients[2] * &z * &z);
        for (d, c) in out.iter().enumerate() {
            if d % 4 != 0 {
                assert!(c.is_zero(), "b^{d} coefficient should vanish");
            }
        }
    }

    #[test]
    fn both_routes_agree_for_other_couplings() {
        let a = BigRational::new(3.into(), 2.into());
        let lhs = pairing_expand(&PairingSeries::delta_measure_form(&a, 8), &half(), 8).unwrap();
        let rhs = pairing_expand(&PairingSeries::stationary_phase_form(&a, 8), &half(), 8).unwrap();
        assert_eq!(lhs, rhs);
        // -10/a⁶ at b⁴
        assert_eq!(lhs[4], int(-10) / num_traits::pow(a.clone(), 6));
    }

    #[test]
    fn unrotated_source_sign_breaks_alternation() {
        // With +2b e j²/a² the b⁴ term comes out as +10 instead of -10.
        let a = int(1);
        let cubic = PairingSeries::monomial(Monomial::new(0, 3, 1), BigRational::new(2.into(), 3.into()), 8, 12, 4);
        let source = PairingSeries::monomial(Monomial::new(2, 1, 1), int(2) / (&a * &a), 8, 12, 4);
        let out = pairing_expand(&cubic.exp().mul(&source.exp()), &half(), 4).unwrap();
        assert_eq!(out[4], int(10));
    }

    #[test]
    fn order_beyond_truncation_is_rejected() {
        let s = PairingSeries::delta_measure_form(&int(1), 4);
        assert!(matches!(
            pairing_expand(&s, &half(), 8),
            Err(Error::TruncationOverflow { requested: 8, stored: 4 })
        ));
    }
}
