//! Energy–time variables `(h, θ)` for a confining single-well potential with its
//! minimum at the origin.
//!
//! `θ` is the time elapsed since the orbit last crossed `x = 0` moving right,
//! shifted into `[-τ_L, 2τ_R + τ_L)`, where `τ_R` (`τ_L`) is the time from the
//! origin to the right (left) turning point. The orbit period is
//! `2(τ_R + τ_L)`.

use crate::error::{Error, Result};
use crate::numerics::{adaptive, brent, cumulative_trapezoid};
use crate::potential::Potential1D;

/// Energy shell of a confining potential: turning points and the two
/// quarter-periods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub h: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub tau_left: f64,
    pub tau_right: f64,
}

impl Shell {
    pub fn period(&self) -> f64 {
        2.0 * (self.tau_left + self.tau_right)
    }
}

/// Phase-space point in `(h, θ)` together with its sources and deviations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ActionAngleState {
    pub h: f64,
    pub theta: f64,
    pub j_h: f64,
    pub j_theta: f64,
    pub e_h: f64,
    pub e_theta: f64,
}

/// `(h, θ)` histories on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionAngleHistory {
    pub dt: f64,
    pub h: Vec<f64>,
    pub theta: Vec<f64>,
    pub h0: f64,
    pub theta0: f64,
}

impl ActionAngleHistory {
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn state(&self, i: usize) -> ActionAngleState {
        ActionAngleState { h: self.h[i], theta: self.theta[i], ..Default::default() }
    }
}

const QUAD_TOL: f64 = 1e-13;

/// Distance below the shell, `h - v(x_turn ∓ s)`, with a Taylor form for tiny
/// `s` where direct subtraction cancels. The Taylor form treats `x_turn` as an
/// exact root.
fn depth(potential: &dyn Potential1D, h: f64, turn: f64, s: f64, dir: f64) -> f64 {
    let x = turn - dir * s;
    if s < 1e-7 * (1.0 + turn.abs()) {
        let g = potential.slope(turn) * dir;
        g * s - 0.5 * potential.curvature(turn) * s * s
    } else {
        h - potential.value(x)
    }
}

/// `∫₀^u 2w dw / √(2(h - v(x_turn ∓ w²)))`: time from `x_turn ∓ u²` to the
/// turning point.
fn time_to_turn(potential: &dyn Potential1D, h: f64, turn: f64, dir: f64, u: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(0.0);
    }
    let f = |w: f64| {
        let d = depth(potential, h, turn, w * w, dir).max(0.0);
        if w == 0.0 {
            2.0 / (2.0 * potential.slope(turn).abs()).sqrt()
        } else {
            2.0 * w / (2.0 * d).sqrt()
        }
    };
    Ok(adaptive(f, 0.0, u, QUAD_TOL, QUAD_TOL, 4000)?.value)
}

fn check_minimum(potential: &dyn Potential1D, h: f64) -> Result<f64> {
    let minimum = potential.value(0.0);
    if !(h > minimum) {
        return Err(Error::BelowMinimum { h, minimum });
    }
    Ok(minimum)
}

/// Turning points and quarter-periods at energy `h`.
pub fn shell(potential: &dyn Potential1D, h: f64) -> Result<Shell> {
    check_minimum(potential, h)?;
    let wall = potential.half_width();
    let g = |x: f64| potential.value(x) - h;
    if g(wall) <= 0.0 || g(-wall) <= 0.0 {
        return Err(Error::invalid("h", format!("energy shell {h} reaches the box wall")));
    }
    let x_right = brent(g, 0.0, wall, 1e-16, 200)?;
    let x_left = brent(g, -wall, 0.0, 1e-16, 200)?;
    let tau_right = time_to_turn(potential, h, x_right, 1.0, x_right.sqrt())?;
    let tau_left = time_to_turn(potential, h, x_left, -1.0, (-x_left).sqrt())?;
    Ok(Shell { h, x_left, x_right, tau_left, tau_right })
}

/// Signed time from the origin to `x` along the rightward branch.
fn branch_time(potential: &dyn Potential1D, s: &Shell, x: f64) -> Result<f64> {
    if x < s.x_left || x > s.x_right {
        return Err(Error::Forbidden { x, h: s.h, lo: s.x_left, hi: s.x_right });
    }
    if x >= 0.0 {
        Ok(s.tau_right - time_to_turn(potential, s.h, s.x_right, 1.0, (s.x_right - x).max(0.0).sqrt())?)
    } else {
        Ok(time_to_turn(potential, s.h, s.x_left, -1.0, (x - s.x_left).max(0.0).sqrt())? - s.tau_left)
    }
}

/// `θ` of position `x` on shell `h`, on the branch with momentum sign `sign`.
pub fn theta_of(potential: &dyn Potential1D, h: f64, x: f64, sign: f64) -> Result<f64> {
    let s = shell(potential, h)?;
    let t = branch_time(potential, &s, x)?;
    Ok(if sign >= 0.0 { t } else { 2.0 * s.tau_right - t })
}

/// `(x, p) → (h, θ)`.
pub fn to_action_angle(potential: &dyn Potential1D, x: f64, p: f64) -> Result<ActionAngleState> {
    let h = 0.5 * p * p + potential.value(x);
    let theta = theta_of(potential, h, x, if p > 0.0 { 1.0 } else if p < 0.0 { -1.0 } else if x >= 0.0 { 1.0 } else { -1.0 })?;
    Ok(ActionAngleState { h, theta, ..Default::default() })
}

/// `(h, θ) → (x, p)`; `θ` may lie anywhere on the real line.
pub fn from_action_angle(potential: &dyn Potential1D, h: f64, theta: f64) -> Result<(f64, f64)> {
    let s = shell(potential, h)?;
    let period = s.period();
    let theta = (theta + s.tau_left).rem_euclid(period) - s.tau_left;
    let (vartheta, sign) = if theta <= s.tau_right { (theta, 1.0) } else { (2.0 * s.tau_right - theta, -1.0) };
    // solve in u = √(distance to the nearer-side turning point) for accuracy at
    // the turning point
    let (turn, dir, remaining) = if vartheta >= 0.0 {
        (s.x_right, 1.0, s.tau_right - vartheta)
    } else {
        (s.x_left, -1.0, vartheta + s.tau_left)
    };
    let u_max = turn.abs().sqrt();
    let u = if remaining <= 0.0 {
        0.0
    } else {
        let f = |u: f64| time_to_turn(potential, h, turn, dir, u).unwrap_or(f64::NAN) - remaining;
        brent(f, 0.0, u_max, 1e-15, 200)?
    };
    let x = turn - dir * u * u;
    let d = depth(potential, h, turn, u * u, dir).max(0.0);
    Ok((x, sign * (2.0 * d).sqrt()))
}

/// `∂x_c/∂θ` and `∂x_c/∂h` by central differences.
pub fn orbit_partials(potential: &dyn Potential1D, h: f64, theta: f64, step: f64) -> Result<(f64, f64)> {
    let minimum = check_minimum(potential, h)?;
    let x_at = |h: f64, th: f64| from_action_angle(potential, h, th).map(|(x, _)| x);
    let d_theta = (x_at(h, theta + step)? - x_at(h, theta - step)?) / (2.0 * step);
    let mut hs = step * (1.0 + h.abs());
    let d_h = if h - hs > minimum {
        (x_at(h + hs, theta)? - x_at(h - hs, theta)?) / (2.0 * hs)
    } else {
        hs = 0.5 * (h - minimum);
        log::warn!("energy step widened to one-sided difference near the minimum (h = {h}, step = {hs})");
        (x_at(h + hs, theta)? - x_at(h, theta)?) / hs
    };
    Ok((d_theta, d_h))
}

/// Poisson bracket `{θ, h} = ∂θ/∂x ∂h/∂p - ∂θ/∂p ∂h/∂x` by central differences.
pub fn poisson_bracket(potential: &dyn Potential1D, x: f64, p: f64, step: f64) -> Result<f64> {
    let theta = |x: f64, p: f64| to_action_angle(potential, x, p).map(|s| s.theta);
    let h = |x: f64, p: f64| 0.5 * p * p + potential.value(x);
    let th_x = (theta(x + step, p)? - theta(x - step, p)?) / (2.0 * step);
    let th_p = (theta(x, p + step)? - theta(x, p - step)?) / (2.0 * step);
    let h_x = (h(x + step, p) - h(x - step, p)) / (2.0 * step);
    let h_p = (h(x, p + step) - h(x, p - step)) / (2.0 * step);
    Ok(th_x * h_p - th_p * h_x)
}

/// Rescaled sources `j_h = j ∂x_c/∂θ`, `j_θ = -j ∂x_c/∂h` along a history.
pub fn rescale_sources(
    potential: &dyn Potential1D,
    h: &[f64],
    theta: &[f64],
    source: &[f64],
    step: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if h.len() != source.len() || theta.len() != source.len() {
        return Err(Error::GridMismatch { expected: source.len(), got: h.len().min(theta.len()) });
    }
    let mut j_h = Vec::with_capacity(source.len());
    let mut j_theta = Vec::with_capacity(source.len());
    for ((&hk, &tk), &j) in h.iter().zip(theta).zip(source) {
        if j == 0.0 {
            j_h.push(0.0);
            j_theta.push(0.0);
            continue;
        }
        let (d_theta, d_h) = orbit_partials(potential, hk, tk, step)?;
        j_h.push(j * d_theta);
        j_theta.push(-j * d_h);
    }
    Ok((j_h, j_theta))
}

/// `h(t) = h₀ + ∫₀ᵗ j_h`, `θ(t) = θ₀ + t + ∫₀ᵗ j_θ` by cumulative trapezoid.
pub fn evolve_action_angle(h0: f64, theta0: f64, j_h: &[f64], j_theta: &[f64], dt: f64) -> Result<ActionAngleHistory> {
    if j_h.len() != j_theta.len() {
        return Err(Error::GridMismatch { expected: j_h.len(), got: j_theta.len() });
    }
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let ih = cumulative_trapezoid(j_h, dt);
    let it = cumulative_trapezoid(j_theta, dt);
    Ok(ActionAngleHistory {
        dt,
        h: ih.iter().map(|d| h0 + d).collect(),
        theta: it.iter().enumerate().map(|(i, d)| theta0 + i as f64 * dt + d).collect(),
        h0,
        theta0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Polynomial;
    use std::f64::consts::PI;

    fn harmonic() -> Polynomial {
        Polynomial::harmonic(20.0)
    }

    #[test]
    fn harmonic_angle_is_arcsine() {
        let v = harmonic();
        for (x, p) in [(0.3, 0.8), (-0.5, 0.1), (0.2, -0.9), (-0.7, -0.4)] {
            let s = to_action_angle(&v, x, p).unwrap();
            let amp = (2.0 * s.h).sqrt();
            assert!((amp * s.theta.sin() - x).abs() < 1e-12);
            assert!((amp * s.theta.cos() - p).abs() < 1e-12);
        }
        let sh = shell(&v, 0.5).unwrap();
        assert!((sh.period() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn harmonic_inverse_at_quarter_period() {
        let (x, p) = from_action_angle(&harmonic(), 0.5, PI / 2.0).unwrap();
        assert!((x - 1.0).abs() < 1e-12 && p.abs() < 1e-7);
    }

    #[test]
    fn round_trips() {
        let quartic = Polynomial::quartic(10.0);
        let anharmonic = Polynomial::anharmonic(0.3, 10.0);
        let potentials: [&dyn Potential1D; 3] = [&harmonic(), &quartic, &anharmonic];
        for v in potentials {
            for (x, p) in [(0.3, 0.8), (-0.5, 0.1), (0.2, -0.9), (-0.7, -0.4), (1.1, 0.0), (0.0, -1.2)] {
                let s = to_action_angle(v, x, p).unwrap();
                let (x2, p2) = from_action_angle(v, s.h, s.theta).unwrap();
                assert!((x - x2).abs() < 1e-8 && (p - p2).abs() < 1e-8, "({x}, {p}) → ({x2}, {p2})");
            }
        }
    }

    #[test]
    fn angle_is_periodic() {
        let v = Polynomial::quartic(10.0);
        let period = shell(&v, 0.7).unwrap().period();
        for theta in [-0.3, 0.4, 1.9] {
            let a = from_action_angle(&v, 0.7, theta).unwrap();
            let b = from_action_angle(&v, 0.7, theta + period).unwrap();
            assert!((a.0 - b.0).abs() < 1e-10 && (a.1 - b.1).abs() < 1e-10);
        }
    }

    #[test]
    fn bracket_is_one() {
        let v = Polynomial::anharmonic(0.3, 10.0);
        for (x, p) in [(0.3, 0.8), (-0.5, 0.6), (0.2, -0.9), (-0.4, -0.7)] {
            let b = poisson_bracket(&v, x, p, 1e-4).unwrap();
            assert!((b - 1.0).abs() < 1e-5, "{b}");
        }
    }

    #[test]
    fn harmonic_partials() {
        let v = harmonic();
        let (h, theta) = (0.8, 0.6);
        let (dt, dh) = orbit_partials(&v, h, theta, 1e-5).unwrap();
        assert!((dt - (2.0 * h).sqrt() * theta.cos()).abs() < 1e-6);
        assert!((dh - theta.sin() / (2.0 * h).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn errors_are_specific() {
        let v = harmonic();
        assert!(matches!(shell(&v, -0.1), Err(Error::BelowMinimum { .. })));
        assert!(matches!(theta_of(&v, 0.5, 1.5, 1.0), Err(Error::Forbidden { .. })));
    }

    #[test]
    fn trivial_evolution() {
        let n = 101;
        let hist = evolve_action_angle(0.5, 0.2, &vec![0.0; n], &vec![0.3; n], 0.01).unwrap();
        assert!(hist.h.iter().all(|&h| h == 0.5));
        let hist = evolve_action_angle(0.5, 0.2, &vec![0.0; n], &vec![0.0; n], 0.01).unwrap();
        assert!((hist.theta[n - 1] - 1.2).abs() < 1e-14);
        let hist = evolve_action_angle(0.5, 0.2, &vec![0.25; n], &vec![0.0; n], 0.01).unwrap();
        assert!((hist.h[n - 1] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn impulse_takes_half_step_at_node() {
        let n = 11;
        let dt = 0.1;
        let mut j_h = vec![0.0; n];
        j_h[4] = 2.0 / dt;
        let hist = evolve_action_angle(1.0, 0.0, &j_h, &vec![0.0; n], dt).unwrap();
        assert_eq!(hist.h[3], 1.0);
        assert!((hist.h[4] - 2.0).abs() < 1e-14);
        assert!((hist.h[5] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_source_rescales_to_zero() {
        let (a, b) = rescale_sources(&harmonic(), &[0.5; 3], &[0.0, 0.1, 0.2], &[0.0; 3], 1e-5).unwrap();
        assert!(a.iter().chain(&b).all(|&x| x == 0.0));
    }
}
