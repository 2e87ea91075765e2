use std::f64::consts::PI;

use num_complex::Complex64;

use super::airy::airy_ai;
use super::CubicModel;
use crate::error::{Error, Result};
use crate::numerics::GaussLegendre;

/// Closed form `√(2π) b^(-1/3) exp(i a³/(12b²)) Ai(-a²/(4 b^(4/3)))`,
/// obtained by completing the cube `x = y - a/(2b)`.
pub fn amplitude_exact(model: &CubicModel) -> Result<Complex64> {
    model.validate()?;
    if model.b <= 0.0 {
        return Err(Error::invalid("b", "closed form needs b > 0"));
    }
    let a = model.a();
    let b = model.b;
    let phase = Complex64::i() * a * a * a / (12.0 * b * b);
    let arg = -(a * a) / (4.0 * b.powf(4.0 / 3.0));
    Ok(phase.exp() * airy_ai(arg) * ((2.0 * PI).sqrt() * b.cbrt().recip()))
}

/// Direct real-axis quadrature of the cubic integral with `Im a` replaced by
/// `a_im + damping`.
///
/// The line is cut into panels over which the phase advances by at most one
/// radian and each panel gets a 10-point Gauss–Legendre rule. The range is cut
/// where the Gaussian damping falls below `1e-9`; the neglected oscillatory tail
/// is smaller than that by a further factor `1/(b x²)`.
pub fn amplitude_damped(model: &CubicModel, damping: f64) -> Result<Complex64> {
    model.validate()?;
    let delta = model.a_im + damping;
    if delta <= 0.0 {
        return Err(Error::invalid("damping", "total Im a must be positive for the real-axis integral"));
    }
    let a = model.a_re;
    let b = model.b;
    let cutoff = (2.0 * 20.8 / delta).sqrt();
    let rule = GaussLegendre::new(10);
    let integrand = |x: f64| -> Complex64 {
        let phase = x * x * (0.5 * a + b * x / 3.0);
        let (s, c) = phase.sin_cos();
        Complex64::new(c, s) * (-0.5 * delta * x * x).exp()
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut x = -cutoff;
    while x < cutoff {
        let slope = (a * x + b * x * x).abs();
        let curvature = (a + 2.0 * b * x).abs();
        let width = (1.0 / (slope + 0.5 * curvature + 1.0)).min(cutoff - x);
        sum += rule.integrate(integrand, x, x + width);
        x += width;
    }
    Ok(sum / (2.0 * PI).sqrt())
}

/// Damped quadrature at `damping` and `damping/2`, Richardson-extrapolated
/// linearly to zero damping.
pub fn amplitude_damped_extrapolated(model: &CubicModel, damping: f64) -> Result<Complex64> {
    let coarse = amplitude_damped(model, damping)?;
    let fine = amplitude_damped(model, 0.5 * damping)?;
    Ok(fine * 2.0 - coarse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_cubic_coupling() {
        let m = CubicModel::real(1.0, 0.0).unwrap();
        assert!(amplitude_exact(&m).is_err());
        let bad = CubicModel { a_re: 1.0, a_im: -1.0, b: 1.0 };
        assert!(amplitude_exact(&bad).is_err());
    }

    #[test]
    fn scaling_identity() {
        // x → λx gives A(a, b) = λ·A(aλ², bλ³)
        let base = CubicModel::real(1.0, 1.0).unwrap();
        let a0 = amplitude_exact(&base).unwrap();
        for lambda in [0.5, 2.0, 3.0] {
            let scaled = CubicModel::real(lambda * lambda, lambda.powi(3)).unwrap();
            let a1 = amplitude_exact(&scaled).unwrap() * lambda;
            assert!((a0 - a1).norm() < 1e-10, "lambda = {lambda}: {a0} vs {a1}");
        }
    }

    #[test]
    fn gaussian_limit_with_fixed_regulator() {
        // With Im a held fixed the far saddle -a/b is damped away as b → 0 and
        // |A|² → 1/|a| with an O(b²) correction.
        let devs: Vec<f64> = [0.1, 0.07, 0.05]
            .iter()
            .map(|&b| {
                let m = CubicModel::new(1.0, 0.2, b).unwrap();
                (amplitude_exact(&m).unwrap().norm_sqr() * m.a().norm() - 1.0).abs()
            })
            .collect();
        assert!(devs[0] > devs[1] && devs[1] > devs[2]);
        let ratio = (devs[1] / 0.07f64.powi(2)) / (devs[2] / 0.05f64.powi(2));
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
        assert!(devs[2] < 3e-3);
    }
}
