use num_complex::Complex64;

use super::Spectrum;
use crate::error::{Error, Result};
use crate::numerics::brent;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("epsilon", format!("must be positive, got {epsilon}")))
    }
}

/// `A(x₁, x₂; E) = Σₙ Ψₙ(x₂) Ψₙ(x₁) / (E - Eₙ + iε)`.
pub fn amplitude_spectral(spectrum: &Spectrum, x1: f64, x2: f64, energy: f64, epsilon: f64) -> Result<Complex64> {
    check_epsilon(epsilon)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, e) in spectrum.levels.iter().enumerate() {
        let weight = spectrum.psi(n, x2)? * spectrum.psi(n, x1)?;
        sum += weight / Complex64::new(energy - e, epsilon);
    }
    Ok(sum)
}

/// `R(E) = Σₙ 1/((E - Eₙ)² + ε²)`.
pub fn probe_r(spectrum: &Spectrum, energy: f64, epsilon: f64) -> f64 {
    spectrum
        .levels
        .iter()
        .map(|e| 1.0 / ((energy - e).powi(2) + epsilon * epsilon))
        .sum()
}

fn probe_slope(spectrum: &Spectrum, energy: f64, epsilon: f64) -> f64 {
    spectrum
        .levels
        .iter()
        .map(|e| {
            let d = energy - e;
            -2.0 * d / (d * d + epsilon * epsilon).powi(2)
        })
        .sum()
}

/// `|R(E) + Im Tr A / ε|` with the trace taken as `Δx Σᵢ A(xᵢ, xᵢ; E)`.
pub fn unitarity_residual(spectrum: &Spectrum, energy: f64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let dx = spectrum.grid.dx;
    let mut trace = Complex64::new(0.0, 0.0);
    for i in 0..spectrum.grid.points {
        let mut diag = Complex64::new(0.0, 0.0);
        for (n, e) in spectrum.levels.iter().enumerate() {
            let psi = spectrum.wavefunctions[n][i];
            diag += psi * psi / Complex64::new(energy - e, epsilon);
        }
        trace += diag * dx;
    }
    Ok((probe_r(spectrum, energy, epsilon) + trace.im / epsilon).abs())
}

/// Local maxima of `R(E)` on `[lo, hi]`, refined to the zeros of `dR/dE`.
pub fn find_peaks(spectrum: &Spectrum, epsilon: f64, lo: f64, hi: f64) -> Result<Vec<f64>> {
    check_epsilon(epsilon)?;
    let step = 0.25 * epsilon;
    let n = ((hi - lo) / step).ceil() as usize;
    let mut peaks = Vec::new();
    let mut prev = probe_slope(spectrum, lo, epsilon);
    for k in 1..=n {
        let e = (lo + k as f64 * step).min(hi);
        let slope = probe_slope(spectrum, e, epsilon);
        if prev > 0.0 && slope <= 0.0 {
            let a = e - step;
            let root = brent(|x| probe_slope(spectrum, x, epsilon), a, e, 1e-14 * (1.0 + e.abs()), 200)?;
            peaks.push(root);
        }
        prev = slope;
    }
    Ok(peaks)
}

/// `(ε/π) ∫ R dE` over `[lo, hi]` by the trapezoid rule with `points` nodes.
pub fn level_count(spectrum: &Spectrum, epsilon: f64, lo: f64, hi: f64, points: usize) -> Result<f64> {
    check_epsilon(epsilon)?;
    if points < 2 || hi <= lo {
        return Err(Error::invalid("window", "need hi > lo and at least two nodes"));
    }
    let h = (hi - lo) / (points - 1) as f64;
    let values: Vec<f64> = (0..points).map(|k| probe_r(spectrum, lo + k as f64 * h, epsilon)).collect();
    Ok(epsilon / std::f64::consts::PI * crate::numerics::trapezoid(&values, h))
}
