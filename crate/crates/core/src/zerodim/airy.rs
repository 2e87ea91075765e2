//! Airy function Ai(z) of complex argument.
//!
//! Maclaurin series near the origin, asymptotic expansions for |z| > 7, and
//! inward integration of `y'' = z y` in the recessive sector where the series
//! suffers from cancellation.

use std::f64::consts::PI;

use num_complex::Complex64;

const AI_0: f64 = 0.355_028_053_887_817_2; // Ai(0)
const AI_PRIME_0: f64 = 0.258_819_403_792_806_8; // -Ai'(0)
const ASYMPTOTIC_RADIUS: f64 = 7.0;
const ODE_START: f64 = 9.0;
const ODE_STEP: f64 = 0.002;

/// Ai(z) for complex `z`.
pub fn airy_ai(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > ASYMPTOTIC_RADIUS {
        return asymptotic(z).0;
    }
    if r > 2.0 && z.arg().abs() < PI / 3.0 {
        return integrate_inward(z);
    }
    series(z)
}

fn series(z: Complex64) -> Complex64 {
    let z3 = z * z * z;
    let mut f = Complex64::new(1.0, 0.0);
    let mut g = z;
    let mut tf = f;
    let mut tg = g;
    for k in 0..200 {
        let k = k as f64;
        tf = tf * z3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg = tg * z3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        if tf.norm() <= 1e-18 * f.norm() && tg.norm() <= 1e-18 * g.norm().max(1e-300) {
            break;
        }
    }
    f * AI_0 - g * AI_PRIME_0
}

fn u_coefficients(n: usize) -> Vec<f64> {
    let mut u = vec![1.0; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

/// Truncated-at-smallest-term sum of `sum_k sign(k) c_k x^k`.
fn optimal_sum(coeffs: &[f64], x: Complex64, alternate: bool) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for (k, c) in coeffs.iter().enumerate() {
        let sign = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
        let term = power * (sign * c);
        let mag = term.norm();
        if mag > last {
            break;
        }
        sum += term;
        if mag < 1e-17 * sum.norm() {
            break;
        }
        last = mag;
        power *= x;
    }
    sum
}

/// Asymptotic (Ai, Ai') for large |z|.
fn asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let u = u_coefficients(80);
    let sqrt_pi = PI.sqrt();
    if (-z).arg().abs() < PI / 3.0 {
        // oscillatory side: Ai(-w)
        let w = -z;
        let zeta = w.powf(1.5) * (2.0 / 3.0);
        let inv = zeta.inv();
        let inv2 = inv * inv;
        let even: Vec<f64> = u.iter().step_by(2).copied().collect();
        let odd: Vec<f64> = u.iter().skip(1).step_by(2).copied().collect();
        let p = optimal_sum(&even, inv2, true);
        let q = optimal_sum(&odd, inv2, true) * inv;
        let phase = zeta - PI / 4.0;
        let ai = (phase.cos() * p + phase.sin() * q) / (sqrt_pi * w.powf(0.25));
        (ai, Complex64::new(f64::NAN, 0.0))
    } else {
        let zeta = z.powf(1.5) * (2.0 / 3.0);
        let inv = zeta.inv();
        let v: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(k, uk)| if k == 0 { 1.0 } else { -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * uk })
            .collect();
        let s = optimal_sum(&u, inv, true);
        let sv = optimal_sum(&v, inv, true);
        let e = (-zeta).exp();
        let quarter = z.powf(0.25);
        let ai = e * s / (2.0 * sqrt_pi * quarter);
        let aip = -(e * sv * quarter) / (2.0 * sqrt_pi);
        (ai, aip)
    }
}

/// RK4 integration of `y'' = z y` along the ray from |z| = 9 down to `z`.
fn integrate_inward(z: Complex64) -> Complex64 {
    let dir = z / z.norm();
    let start = dir * ODE_START;
    let (mut y, mut yp) = asymptotic(start);
    let length = ODE_START - z.norm();
    let steps = (length / ODE_STEP).ceil() as usize;
    // parameter s runs from ODE_START down to |z|: dz = dir·ds with ds < 0
    let h = -length / steps as f64;
    let mut s = ODE_START;
    let deriv = |s: f64, y: Complex64, yp: Complex64| -> (Complex64, Complex64) {
        (dir * yp, dir * (dir * s) * y)
    };
    for _ in 0..steps {
        let (k1y, k1p) = deriv(s, y, yp);
        let (k2y, k2p) = deriv(s + 0.5 * h, y + k1y * (0.5 * h), yp + k1p * (0.5 * h));
        let (k3y, k3p) = deriv(s + 0.5 * h, y + k2y * (0.5 * h), yp + k2p * (0.5 * h));
        let (k4y, k4p) = deriv(s + h, y + k3y * h, yp + k3p * h);
        y += (k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (h / 6.0);
        yp += (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0);
        s += h;
    }
    y
}
