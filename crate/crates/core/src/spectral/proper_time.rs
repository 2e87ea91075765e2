//! The probe in proper-time form.
//!
//! Each denominator becomes a damped time integral; in the rotated variables
//! `T = (t₊+t₋)/2`, `τ = (t₊-t₋)/2` a level contributes
//! `2 ∫₀^∞ dT e^{-2εT} ∫_{-T}^{T} dτ cos(2Δτ)`, `Δ = E - Eₙ`.

use super::Spectrum;
use crate::error::{Error, Result};
use crate::numerics::GaussLegendre;

/// Integration domain of the inner τ-integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Domain {
    /// `|τ| ≤ T`, the exact image of the `(t₊, t₋)` quadrant.
    #[default]
    Exact,
    /// `|τ| ≤ t_max` for every `T`: the large-`T` relaxation, which sharpens
    /// each Lorentzian into a `sin(2Δ t_max)/Δ` kernel.
    Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub epsilon: f64,
    pub t_max: f64,
    pub domain: Domain,
    /// Add the closed-form `T > t_max` tail.
    pub tail_correction: bool,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl ProbeConfig {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            t_max: 10.0 / epsilon,
            domain: Domain::Exact,
            tail_correction: true,
            rel_tol: 1e-9,
            max_panels: 1 << 22,
        }
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid("epsilon", "must be positive"));
        }
        if !(self.t_max >= 10.0 / self.epsilon) {
            return Err(Error::invalid("t_max", format!("need t_max ≥ 10/ε = {}", 10.0 / self.epsilon)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        Ok(())
    }
}

/// `∫_a^∞ 2 e^{-2εT} sin(2ΔT)/Δ dT`.
fn tail(delta: f64, epsilon: f64, a: f64) -> f64 {
    let alpha = 2.0 * epsilon;
    let beta = 2.0 * delta;
    let damp = (-alpha * a).exp();
    if (beta * a).abs() < 1e-8 {
        4.0 * damp * (alpha * a + 1.0) / (alpha * alpha)
    } else {
        let (s, c) = (beta * a).sin_cos();
        2.0 * damp * (alpha * s + beta * c) / ((alpha * alpha + beta * beta) * delta)
    }
}

/// Upper bound on the magnitude of the `T > t_max` tail summed over levels.
pub fn tail_bound(spectrum: &Spectrum, energy: f64, epsilon: f64, t_max: f64) -> f64 {
    let alpha = 2.0 * epsilon;
    let damp = (-alpha * t_max).exp();
    spectrum
        .levels
        .iter()
        .map(|e| {
            let delta = (energy - e).abs();
            let slow = 4.0 * damp * (alpha * t_max + 1.0) / (alpha * alpha);
            let fast = if delta > 0.0 { 2.0 * damp / (alpha * delta) } else { f64::INFINITY };
            slow.min(fast)
        })
        .sum()
}

struct Panels<'a> {
    rule: &'a GaussLegendre,
    deltas: &'a [f64],
    epsilon: f64,
    t_max: f64,
    domain: Domain,
}

impl Panels<'_> {
    /// Inner integral `∫_{-b}^{b} cos(2Δτ) dτ = 2∫_0^b`, accumulated numerically.
    fn inner(&self, delta: f64, a: f64, b: f64) -> f64 {
        2.0 * self.rule.integrate(|t: f64| (2.0 * delta * t).cos(), a, b)
    }

    fn evaluate(&self, count: usize) -> f64 {
        let width = self.t_max / count as f64;
        let mut total = 0.0;
        for &delta in self.deltas {
            let mut cumulative = 0.0;
            let mut level = 0.0;
            for p in 0..count {
                let a = p as f64 * width;
                let b = a + width;
                if self.domain == Domain::Exact {
                    for (t, w) in self.rule.mapped(a, b) {
                        let inner = cumulative + self.inner(delta, a, t);
                        level += w * 2.0 * (-2.0 * self.epsilon * t).exp() * inner;
                    }
                }
                cumulative += self.inner(delta, a, b);
            }
            if self.domain == Domain::Relaxed {
                let outer = (1.0 - (-2.0 * self.epsilon * self.t_max).exp()) / self.epsilon;
                level = outer * cumulative;
            }
            total += level;
        }
        total
    }
}

/// `R(E)` evaluated through the proper-time double integral.
///
/// The outer `T` integral runs over `[0, t_max]` on Gauss–Legendre panels short
/// enough that every oscillation `2|Δ|T` advances by at most one radian per
/// panel; the inner `τ` integral is accumulated numerically panel by panel. The
/// panel count is doubled until successive values agree to `rel_tol`.
pub fn proper_time_r(spectrum: &Spectrum, energy: f64, config: &ProbeConfig) -> Result<f64> {
    config.validate()?;
    let deltas: Vec<f64> = spectrum.levels.iter().map(|e| energy - e).collect();
    let fastest = deltas.iter().fold(config.epsilon, |m, d| m.max(2.0 * d.abs()));
    let rule = GaussLegendre::new(10);
    let panels = Panels {
        rule: &rule,
        deltas: &deltas,
        epsilon: config.epsilon,
        t_max: config.t_max,
        domain: config.domain,
    };
    let mut count = (config.t_max * fastest).ceil().max(1.0) as usize;
    let mut previous = panels.evaluate(count);
    loop {
        if 2 * count > config.max_panels {
            return Err(Error::QuadratureBudget {
                tolerance: config.rel_tol,
                residual: f64::INFINITY,
            });
        }
        count *= 2;
        let current = panels.evaluate(count);
        let residual = (current - previous).abs() / current.abs().max(f64::MIN_POSITIVE);
        if residual <= config.rel_tol {
            let tails: f64 = if config.tail_correction && config.domain == Domain::Exact {
                deltas.iter().map(|&d| tail(d, config.epsilon, config.t_max)).sum()
            } else {
                0.0
            };
            return Ok(current + tails);
        }
        if 2 * count > config.max_panels {
            return Err(Error::QuadratureBudget {
                tolerance: config.rel_tol,
                residual,
            });
        }
        previous = current;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Polynomial;
    use crate::spectral::{probe_r, solve_spectrum, Grid};

    fn single_level(e0: f64) -> Spectrum {
        let grid = Grid::on_box(1.0, 1);
        let amp = (1.0 / grid.dx).sqrt();
        Spectrum::from_parts(vec![e0], vec![vec![amp]], grid).unwrap()
    }

    #[test]
    fn single_level_is_exact() {
        let s = single_level(0.5);
        for e in [0.5, 0.8, 1.9] {
            let cfg = ProbeConfig::new(0.1);
            let r = proper_time_r(&s, e, &cfg).unwrap();
            let exact = 1.0 / ((e - 0.5f64).powi(2) + 0.01);
            assert!((r - exact).abs() / exact < 1e-9, "{r} vs {exact}");
        }
    }

    #[test]
    fn harmonic_matches_probe() {
        let s = solve_spectrum(&Polynomial::harmonic(10.0), 8, 800).unwrap();
        let cfg = ProbeConfig::new(0.05);
        let r = proper_time_r(&s, 1.0, &cfg).unwrap();
        let oracle = probe_r(&s, 1.0, 0.05);
        assert!((r - oracle).abs() / oracle < 1e-3);
    }

    #[test]
    fn truncation_change_within_tail_bound() {
        let s = solve_spectrum(&Polynomial::harmonic(10.0), 4, 400).unwrap();
        let eps = 0.05;
        let t = 10.0 / eps;
        let bare = |t_max| {
            let mut cfg = ProbeConfig::new(eps).with_t_max(t_max);
            cfg.tail_correction = false;
            proper_time_r(&s, 1.3, &cfg).unwrap()
        };
        let change = (bare(2.0 * t) - bare(t)).abs();
        assert!(change <= tail_bound(&s, 1.3, eps, t));
        assert!(tail_bound(&s, 1.3, eps, t) < 1e-6);
    }

    #[test]
    fn relaxed_domain_concentrates_on_levels() {
        let s = single_level(0.0);
        let eps = 0.05;
        let mut cfg = ProbeConfig::new(eps);
        cfg.domain = Domain::Relaxed;
        let on = proper_time_r(&s, 0.0, &cfg).unwrap();
        // on resonance the relaxed kernel grows with t_max instead of saturating at 1/ε²
        assert!(on > 5.0 / (eps * eps));
        let exact = proper_time_r(&s, 0.0, &ProbeConfig::new(eps)).unwrap();
        assert!((exact * eps * eps - 1.0).abs() < 1e-9);
    }

    #[test]
    fn short_cutoff_is_rejected() {
        let s = single_level(0.0);
        let cfg = ProbeConfig::new(0.1).with_t_max(50.0);
        assert!(matches!(proper_time_r(&s, 0.0, &cfg), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn exhausted_budget_carries_residual() {
        let s = single_level(0.0);
        let mut cfg = ProbeConfig::new(0.1);
        cfg.rel_tol = 1e-300;
        cfg.max_panels = 2000;
        match proper_time_r(&s, 3.0, &cfg) {
            Err(Error::QuadratureBudget { residual, .. }) => assert!(residual.is_finite() && residual < 1e-10),
            other => panic!("unexpected {other:?}"),
        }
    }
}
