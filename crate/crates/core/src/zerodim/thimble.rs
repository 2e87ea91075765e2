//! Steepest-descent path through the minimum `x₁ = 0`.
//!
//! Along the path the exponent equals `-t²` for real `t`. Writing `x = t·w(t)`
//! turns `i(a x²/2 + b x³/3) = -t²` into the regular equation
//! `a w²/2 + b t w³/3 = i`, solved by Newton continuation from
//! `w(0) = √(2i/a)`. The amplitude is then
//! `∫ dt e^{-t²} x'(t) / √(2π)` with `x'(t) = 2i / (w (a + b t w))`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::CubicModel;
use crate::error::{Error, Result};
use crate::numerics::GaussLegendre;

/// Knobs for the path integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThimbleOptions {
    /// Half-length of the `t` range; the weight `e^{-t²}` is negligible beyond it.
    pub t_max: f64,
    pub panels: usize,
    pub order: usize,
    /// Budget of Newton iterations over the whole path.
    pub max_steps: usize,
}

impl Default for ThimbleOptions {
    fn default() -> Self {
        Self {
            t_max: 7.0,
            panels: 64,
            order: 16,
            max_steps: 200_000,
        }
    }
}

struct Tracer {
    a: Complex64,
    b: f64,
    steps: usize,
    max_steps: usize,
}

impl Tracer {
    fn residual(&self, t: f64, w: Complex64) -> Complex64 {
        self.a * w * w * 0.5 + w * w * w * (self.b * t / 3.0) - Complex64::i()
    }

    fn newton(&mut self, t: f64, guess: Complex64) -> Option<Complex64> {
        let mut w = guess;
        for _ in 0..40 {
            self.steps += 1;
            let f = self.residual(t, w);
            let df = self.a * w + w * w * (self.b * t);
            let dw = f / df;
            w -= dw;
            if dw.norm() <= 1e-15 * w.norm() {
                return Some(w);
            }
            if !w.is_finite() {
                return None;
            }
        }
        None
    }

    /// Continues the branch from `(t0, w0)` to `t1`, halving the step on failure.
    fn continue_to(&mut self, t0: f64, w0: Complex64, t1: f64) -> Result<Complex64> {
        let mut t = t0;
        let mut w = w0;
        let mut h = t1 - t0;
        while (t1 - t).abs() > 0.0 {
            if self.steps > self.max_steps {
                return Err(Error::PathTracing {
                    steps: self.steps,
                    t,
                    residual: self.residual(t, w).norm(),
                });
            }
            let target = if (t + h - t1) * h.signum() > 0.0 { t1 } else { t + h };
            // secant predictor: w' from implicit differentiation
            let dw_dt = -(w * w * w * (self.b / 3.0)) / (self.a * w + w * w * (self.b * t));
            let guess = w + dw_dt * (target - t);
            match self.newton(target, guess) {
                Some(next) if (next - guess).norm() < 0.1 * w.norm() => {
                    t = target;
                    w = next;
                }
                _ => {
                    h *= 0.5;
                    if h.abs() < 1e-12 {
                        return Err(Error::PathTracing {
                            steps: self.steps,
                            t,
                            residual: self.residual(t, w).norm(),
                        });
                    }
                }
            }
        }
        Ok(w)
    }
}

/// Amplitude contributed by the steepest-descent path through `x₁ = 0`.
pub fn thimble_amplitude(model: &CubicModel, options: &ThimbleOptions) -> Result<Complex64> {
    model.validate()?;
    if model.a_re <= 0.0 {
        return Err(Error::invalid("a_re", "the minimum-saddle path needs a_re > 0"));
    }
    let a = model.a();
    let mut tracer = Tracer {
        a,
        b: model.b,
        steps: 0,
        max_steps: options.max_steps,
    };
    let w0 = (Complex64::i() * 2.0 / a).sqrt();
    let rule = GaussLegendre::new(options.order);
    let h = options.t_max / options.panels as f64;

    let mut total = Complex64::new(0.0, 0.0);
    for direction in [1.0, -1.0] {
        let mut t_prev = 0.0;
        let mut w_prev = w0;
        for k in 0..options.panels {
            let lo = direction * h * k as f64;
            let hi = lo + direction * h;
            let mut nodes: Vec<(f64, f64)> = rule.mapped(lo.min(hi), lo.max(hi)).collect();
            if direction < 0.0 {
                nodes.reverse();
            }
            for (t, weight) in nodes {
                let w = tracer.continue_to(t_prev, w_prev, t)?;
                let dx_dt = Complex64::i() * 2.0 / (w * (a + w * (model.b * t)));
                total += dx_dt * ((-t * t).exp() * weight);
                t_prev = t;
                w_prev = w;
            }
        }
    }
    Ok(total / (2.0 * PI).sqrt())
}

/// Probability `|A|²` restricted to the minimum-saddle path.
///
/// Valid in the series-controlled regime `2b⁴/(3a⁶) ≤ 0.1`.
pub fn probability_thimble(model: &CubicModel) -> Result<f64> {
    if model.a_re > 0.0 && model.expansion_variable() > 0.1 {
        return Err(Error::invalid(
            "b",
            format!("2b⁴/(3a⁶) = {} exceeds 0.1", model.expansion_variable()),
        ));
    }
    Ok(thimble_amplitude(model, &ThimbleOptions::default())?.norm_sqr())
}
