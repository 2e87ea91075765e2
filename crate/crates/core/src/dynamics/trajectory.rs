use std::io::Write;

use crate::error::{Error, Result};
use crate::potential::Potential1D;

/// Fixed-step integrators for `ẍ = -v'(x) + j(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Symplectic, second order. Positions satisfy the three-point equation
    /// `x_{i+1} - 2xᵢ + x_{i-1} = Δt² (-v'(xᵢ) + jᵢ)` exactly.
    #[default]
    VelocityVerlet,
    /// Fourth-order symplectic composition of three Verlet steps.
    Yoshida4,
    /// Classical fourth-order Runge–Kutta.
    Rk4,
}

impl Integrator {
    pub fn name(&self) -> &'static str {
        match self {
            Integrator::VelocityVerlet => "velocity-verlet",
            Integrator::Yoshida4 => "yoshida4",
            Integrator::Rk4 => "rk4",
        }
    }
}

/// Uniform time grid `tᵢ = i·T/steps`, `i = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_final: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_final: f64, steps: usize) -> Result<Self> {
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::invalid("t_final", format!("must be positive, got {t_final}")));
        }
        if steps < 2 {
            return Err(Error::invalid("steps", "need at least two steps"));
        }
        Ok(Self { t_final, steps })
    }

    /// Grid with spacing as close as possible to `dt`.
    pub fn with_step(t_final: f64, dt: f64) -> Result<Self> {
        Self::new(t_final, (t_final / dt).round().max(2.0) as usize)
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.steps as f64
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.len()).map(|i| f(self.time(i))).collect()
    }

    pub fn zeros(&self) -> Vec<f64> {
        vec![0.0; self.len()]
    }

    pub(crate) fn check(&self, samples: &[f64]) -> Result<()> {
        if samples.len() == self.len() {
            Ok(())
        } else {
            Err(Error::GridMismatch { expected: self.len(), got: samples.len() })
        }
    }
}

/// Linear interpolation of grid samples at time `t`.
pub(crate) fn interpolate(samples: &[f64], dt: f64, t: f64) -> f64 {
    let s = (t / dt).max(0.0);
    let k = (s.floor() as usize).min(samples.len() - 2);
    let frac = s - k as f64;
    samples[k] * (1.0 - frac) + samples[k + 1] * frac
}

/// A gridded classical path with the source that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub source: Vec<f64>,
    pub sourced: bool,
    pub integrator: Integrator,
}

impl Trajectory {
    pub fn dt(&self) -> f64 {
        self.grid.dt()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.grid.time(i)
    }

    pub fn energy(&self, potential: &dyn Potential1D, i: usize) -> f64 {
        0.5 * self.v[i] * self.v[i] + potential.value(self.x[i])
    }

    /// Largest interior residual of the three-point equation of motion
    /// `(x_{i+1} - 2xᵢ + x_{i-1})/Δt² + v'(xᵢ) - jᵢ`.
    pub fn eom_residual(&self, potential: &dyn Potential1D) -> f64 {
        let dt2 = self.dt() * self.dt();
        (1..self.len() - 1)
            .map(|i| {
                let acc = (self.x[i + 1] - 2.0 * self.x[i] + self.x[i - 1]) / dt2;
                (acc + potential.slope(self.x[i]) - self.source[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Header comment, then `t,x,v,j` rows.
    pub fn write_csv<W: Write>(&self, potential: &dyn Potential1D, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# potential: {}; T={} steps={} integrator={}",
            potential.describe(),
            self.grid.t_final,
            self.grid.steps,
            self.integrator.name()
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "x", "v", "j"])?;
        for i in 0..self.len() {
            w.write_record([
                format!("{:.15e}", self.time(i)),
                format!("{:.15e}", self.x[i]),
                format!("{:.15e}", self.v[i]),
                format!("{:.15e}", self.source[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Stepper<'a> {
    potential: &'a dyn Potential1D,
    source: &'a [f64],
    dt: f64,
}

impl Stepper<'_> {
    fn force(&self, x: f64, t: f64) -> f64 {
        -self.potential.slope(x) + interpolate(self.source, self.dt, t)
    }

    fn verlet(&self, x: f64, v: f64, t: f64, h: f64) -> (f64, f64) {
        let half = v + 0.5 * h * self.force(x, t);
        let x1 = x + h * half;
        (x1, half + 0.5 * h * self.force(x1, t + h))
    }

    fn step(&self, integrator: Integrator, x: f64, v: f64, i: usize) -> (f64, f64) {
        let t = i as f64 * self.dt;
        let h = self.dt;
        match integrator {
            Integrator::VelocityVerlet => {
                // node samples only, so the three-point identity is exact
                let f0 = -self.potential.slope(x) + self.source[i];
                let half = v + 0.5 * h * f0;
                let x1 = x + h * half;
                let f1 = -self.potential.slope(x1) + self.source[i + 1];
                (x1, half + 0.5 * h * f1)
            }
            Integrator::Yoshida4 => {
                let c = 2f64.cbrt();
                let w1 = 1.0 / (2.0 - c);
                let w0 = -c / (2.0 - c);
                let (x, v) = self.verlet(x, v, t, w1 * h);
                let (x, v) = self.verlet(x, v, t + w1 * h, w0 * h);
                self.verlet(x, v, t + (w1 + w0) * h, w1 * h)
            }
            Integrator::Rk4 => {
                let f = |x: f64, t: f64| self.force(x, t);
                let (k1x, k1v) = (v, f(x, t));
                let (k2x, k2v) = (v + 0.5 * h * k1v, f(x + 0.5 * h * k1x, t + 0.5 * h));
                let (k3x, k3v) = (v + 0.5 * h * k2v, f(x + 0.5 * h * k2x, t + 0.5 * h));
                let (k4x, k4v) = (v + h * k3v, f(x + h * k3x, t + h));
                (
                    x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
                    v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
                )
            }
        }
    }
}

/// Integrates `ẍ = -v'(x) + j(t)` from `(x0, p0)` over `grid`.
///
/// `source` holds one sample per grid node and is interpolated linearly where
/// an integrator needs intermediate times.
pub fn solve_newton(
    potential: &dyn Potential1D,
    x0: f64,
    p0: f64,
    grid: TimeGrid,
    source: &[f64],
    integrator: Integrator,
) -> Result<Trajectory> {
    grid.check(source)?;
    let wall = potential.half_width();
    if x0.abs() > wall {
        return Err(Error::Escaped { time: 0.0 });
    }
    let stepper = Stepper { potential, source, dt: grid.dt() };
    let mut x = Vec::with_capacity(grid.len());
    let mut v = Vec::with_capacity(grid.len());
    x.push(x0);
    v.push(p0);
    for i in 0..grid.steps {
        let (x1, v1) = stepper.step(integrator, x[i], v[i], i);
        if !(x1.abs() <= wall) {
            return Err(Error::Escaped { time: grid.time(i + 1) });
        }
        x.push(x1);
        v.push(v1);
    }
    Ok(Trajectory {
        grid,
        x,
        v,
        source: source.to_vec(),
        sourced: source.iter().any(|&s| s != 0.0),
        integrator,
    })
}

/// Boundary-value solution `x(0) = x_start`, `x(T) = x_end` by secant shooting
/// on the initial momentum.
pub fn solve_boundary(
    potential: &dyn Potential1D,
    x_start: f64,
    x_end: f64,
    grid: TimeGrid,
    source: &[f64],
    integrator: Integrator,
    p_guess: f64,
) -> Result<Trajectory> {
    let miss = |p: f64| -> Result<(f64, Trajectory)> {
        let tr = solve_newton(potential, x_start, p, grid, source, integrator)?;
        Ok((tr.x[grid.steps] - x_end, tr))
    };
    let tol = 1e-13 * (1.0 + x_end.abs());
    let (mut p0, mut p1) = (p_guess, p_guess + 1e-3 * (1.0 + p_guess.abs()));
    let (mut f0, _) = miss(p0)?;
    let (mut f1, mut tr) = miss(p1)?;
    for _ in 0..60 {
        if f1.abs() <= tol {
            return Ok(tr);
        }
        if f1 == f0 {
            break;
        }
        let p2 = p1 - f1 * (p1 - p0) / (f1 - f0);
        p0 = p1;
        f0 = f1;
        p1 = p2;
        (f1, tr) = miss(p1)?;
    }
    if f1.abs() <= 1e3 * tol {
        return Ok(tr);
    }
    Err(Error::RootNotBracketed { lo: p0, hi: p1 })
}
