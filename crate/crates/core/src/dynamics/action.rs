//! Closed-path action `S_{T+τ}(x+e) - S_{T-τ}(x-e)` split into its linear
//! parts and remainders.

use super::Trajectory;
use crate::error::{Error, Result};
use crate::numerics::trapezoid;
use crate::potential::Potential1D;

/// Deviation `e(tᵢ)` with pinned end points, plus the virtual time `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationField {
    pub e: Vec<f64>,
    pub tau: f64,
}

impl DeviationField {
    pub fn new(e: Vec<f64>, tau: f64) -> Result<Self> {
        if e.len() < 3 {
            return Err(Error::invalid("e", "need at least three samples"));
        }
        if e[0] != 0.0 || e[e.len() - 1] != 0.0 {
            return Err(Error::invalid("e", "deviation must vanish at both end points"));
        }
        Ok(Self { e, tau })
    }

    pub fn zero(len: usize, tau: f64) -> Self {
        Self { e: vec![0.0; len], tau }
    }

    /// `λ·sin(πt/T)` sampled on `len` nodes, with exact zeros at the ends.
    pub fn sine(len: usize, amplitude: f64, tau: f64) -> Self {
        let n = len - 1;
        let mut e: Vec<f64> = (0..len)
            .map(|i| amplitude * (std::f64::consts::PI * i as f64 / n as f64).sin())
            .collect();
        e[0] = 0.0;
        e[n] = 0.0;
        Self { e, tau }
    }
}

/// `total = energy_term + linear_e_term - remainder_h - remainder_v + cross_term`.
///
/// `remainder_h` collects the pure-τ terms beyond linear order, `remainder_v`
/// the pure-e terms beyond linear order and `cross_term` everything mixing both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionDecomposition {
    pub total: f64,
    /// `-2τ H_T`.
    pub energy_term: f64,
    /// `-2 ∫ e (ẍ + v'(x)) dt`.
    pub linear_e_term: f64,
    pub remainder_h: f64,
    pub remainder_v: f64,
    pub cross_term: f64,
    /// Time-averaged energy `H_T` of the mean path.
    pub hamiltonian: f64,
}

impl ActionDecomposition {
    /// `|total - (energy + linear - H̃ - V + cross)|`.
    pub fn identity_residual(&self) -> f64 {
        (self.total
            - (self.energy_term + self.linear_e_term - self.remainder_h - self.remainder_v + self.cross_term))
            .abs()
    }
}

/// Kinetic sum `Σ (Δy)²/(2Δt)` and potential integral `Δt·trap(v(y))` at the
/// nominal spacing.
fn action_parts(potential: &dyn Potential1D, y: &[f64], dt: f64) -> (f64, f64) {
    let kinetic = y.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / (2.0 * dt);
    let values: Vec<f64> = y.iter().map(|&x| potential.value(x)).collect();
    (kinetic, trapezoid(&values, dt))
}

/// Discrete action of the path `y` traversed in total time `t_total` instead of
/// the nominal `t_nominal`: the samples are kept and the time axis is stretched.
fn stretched_action(potential: &dyn Potential1D, y: &[f64], dt: f64, t_nominal: f64, t_total: f64) -> f64 {
    let (kinetic, potential_part) = action_parts(potential, y, dt);
    let r = t_total / t_nominal;
    kinetic / r - potential_part * r
}

/// Default bound on the three-point equation-of-motion residual of `x_c`.
pub const ON_SHELL_TOLERANCE: f64 = 1e-6;

/// Decomposes the closed-path action around the unsourced path `x_c`.
pub fn decompose_action(
    potential: &dyn Potential1D,
    x_c: &Trajectory,
    deviation: &DeviationField,
) -> Result<ActionDecomposition> {
    decompose_action_with_tolerance(potential, x_c, deviation, ON_SHELL_TOLERANCE)
}

pub fn decompose_action_with_tolerance(
    potential: &dyn Potential1D,
    x_c: &Trajectory,
    deviation: &DeviationField,
    tolerance: f64,
) -> Result<ActionDecomposition> {
    if deviation.e.len() != x_c.len() {
        return Err(Error::GridMismatch { expected: x_c.len(), got: deviation.e.len() });
    }
    let mut accelerations = (1..x_c.len() - 1).map(|i| potential.slope(x_c.x[i]).abs()).fold(1.0, f64::max);
    if x_c.sourced {
        accelerations = f64::INFINITY;
    }
    let residual = x_c.eom_residual(potential);
    if x_c.sourced || residual > tolerance * accelerations {
        return Err(Error::OffShell { residual, tolerance });
    }

    let dt = x_c.dt();
    let t = x_c.grid.t_final;
    let tau = deviation.tau;
    let e = &deviation.e;
    let x = &x_c.x;
    let plus: Vec<f64> = x.iter().zip(e).map(|(a, b)| a + b).collect();
    let minus: Vec<f64> = x.iter().zip(e).map(|(a, b)| a - b).collect();
    let s = |y: &[f64], total: f64| stretched_action(potential, y, dt, t, total);

    let total = s(&plus, t + tau) - s(&minus, t - tau);

    let (kinetic, potential_part) = action_parts(potential, x, dt);
    let hamiltonian = (kinetic + potential_part) / t;
    let energy_term = -2.0 * tau * hamiltonian;

    let dt2 = dt * dt;
    let linear_e_term = -2.0
        * dt
        * (1..x.len() - 1)
            .map(|i| {
                let acc = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / dt2;
                e[i] * (acc + potential.slope(x[i]))
            })
            .sum::<f64>();

    let remainder_h = -(s(x, t + tau) - s(x, t - tau) - energy_term);
    let remainder_v = -(s(&plus, t) - s(&minus, t) - linear_e_term);
    let cross_term = total - (energy_term + linear_e_term - remainder_h - remainder_v);

    Ok(ActionDecomposition {
        total,
        energy_term,
        linear_e_term,
        remainder_h,
        remainder_v,
        cross_term,
        hamiltonian,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.abs().ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{solve_newton, Integrator, TimeGrid};
    use crate::potential::Polynomial;

    fn on_shell(v: &Polynomial) -> Trajectory {
        let grid = TimeGrid::with_step(2.0, 1e-3).unwrap();
        solve_newton(v, 1.0, 0.3, grid, &grid.zeros(), Integrator::VelocityVerlet).unwrap()
    }

    #[test]
    fn nothing_to_decompose_at_zero() {
        let v = Polynomial::harmonic(10.0);
        let x = on_shell(&v);
        let d = decompose_action(&v, &x, &DeviationField::zero(x.len(), 0.0)).unwrap();
        for field in [d.total, d.energy_term, d.linear_e_term, d.remainder_h, d.remainder_v, d.cross_term] {
            assert_eq!(field, 0.0);
        }
    }

    #[test]
    fn virtual_work_vanishes_on_shell() {
        let v = Polynomial::anharmonic(0.5, 10.0);
        let x = on_shell(&v);
        for lambda in [1e-3, 1e-2, 1e-1] {
            let d = decompose_action(&v, &x, &DeviationField::sine(x.len(), lambda, 0.0)).unwrap();
            assert!(d.linear_e_term.abs() <= 1e-10, "{}", d.linear_e_term);
            assert!(d.identity_residual() < 1e-12);
        }
    }

    #[test]
    fn energy_term_is_exactly_linear() {
        let v = Polynomial::harmonic(10.0);
        let x = on_shell(&v);
        let d = decompose_action(&v, &x, &DeviationField::zero(x.len(), 0.01)).unwrap();
        assert_eq!(d.energy_term, -2.0 * 0.01 * d.hamiltonian);
        assert!((d.hamiltonian - x.energy(&v, 0)).abs() < 1e-6);
    }

    #[test]
    fn harmonic_deviation_remainder_vanishes() {
        // the action is quadratic, so the odd part in e is exactly linear
        let v = Polynomial::harmonic(10.0);
        let x = on_shell(&v);
        let d = decompose_action(&v, &x, &DeviationField::sine(x.len(), 1e-2, 0.0)).unwrap();
        assert!(d.remainder_v.abs() < 1e-13);
    }

    #[test]
    fn remainders_are_odd_order() {
        // S_{T+τ}(x+e) - S_{T-τ}(x-e) is odd under (e, τ) → (-e, -τ)
        let v = Polynomial::anharmonic(0.5, 10.0);
        let x = on_shell(&v);
        let lambdas = [1e-3, 2e-3, 5e-3, 1e-2];
        let rv: Vec<f64> = lambdas
            .iter()
            .map(|&l| decompose_action(&v, &x, &DeviationField::sine(x.len(), l, 0.0)).unwrap().remainder_v)
            .collect();
        let rh: Vec<f64> = lambdas
            .iter()
            .map(|&l| decompose_action(&v, &x, &DeviationField::zero(x.len(), l)).unwrap().remainder_h)
            .collect();
        assert!((log_log_slope(&lambdas, &rv) - 3.0).abs() < 0.05);
        assert!((log_log_slope(&lambdas, &rh) - 3.0).abs() < 0.05);
    }

    #[test]
    fn off_shell_paths_are_refused() {
        let v = Polynomial::harmonic(10.0);
        let mut x = on_shell(&v);
        x.x[100] += 1e-3;
        assert!(matches!(
            decompose_action(&v, &x, &DeviationField::zero(x.len(), 0.0)),
            Err(Error::OffShell { .. })
        ));
    }

    #[test]
    fn deviation_end_points_are_enforced() {
        assert!(DeviationField::new(vec![0.0, 1.0, 0.1], 0.0).is_err());
        assert!(DeviationField::new(vec![0.0, 1.0, 0.0], 0.0).is_ok());
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(2)).collect();
        assert!((log_log_slope(&xs, &ys) - 2.0).abs() < 1e-12);
    }
}
