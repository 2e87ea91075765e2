//! Green functions of the fluctuation operator `∂² + v''(x_c(t))`.

use std::io::Write;

use super::trajectory::interpolate;
use super::Trajectory;
use crate::error::{Error, Result};
use crate::numerics::SymTridiagonal;
use crate::potential::Potential1D;

/// Eigenvalues of the discrete operator below this magnitude (in units of
/// inverse squared time) are treated as a conjugate point.
pub const SINGULAR_TOLERANCE: f64 = 1e-6;

/// Dirichlet Green function `G(tᵢ, tⱼ)` on the full grid, zero on the boundary
/// rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationKernel {
    pub dt: f64,
    pub curvature: Vec<f64>,
    pub matrix: Vec<Vec<f64>>,
}

impl FluctuationKernel {
    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.matrix[i][j]
    }

    /// `max |Δt·(L G)ᵢⱼ - δᵢⱼ|` over interior nodes, `L` the three-point operator.
    pub fn operator_residual(&self) -> f64 {
        let n = self.len();
        let dt2 = self.dt * self.dt;
        let g = &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let lg = (g[i + 1][j] - 2.0 * g[i][j] + g[i - 1][j]) / dt2 + self.curvature[i] * g[i][j];
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.dt * lg - delta).abs());
            }
        }
        worst
    }

    pub fn asymmetry(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.matrix[i][j] - self.matrix[j][i]).abs());
            }
        }
        worst
    }

    /// `δxᵢ = Δt Σⱼ G(tᵢ, tⱼ) jⱼ`.
    pub fn apply(&self, source: &[f64]) -> Result<Vec<f64>> {
        if source.len() != self.len() {
            return Err(Error::GridMismatch { expected: self.len(), got: source.len() });
        }
        Ok(self
            .matrix
            .iter()
            .map(|row| self.dt * row.iter().zip(source).map(|(g, j)| g * j).sum::<f64>())
            .collect())
    }

    /// Rows `i,j,G` for every grid pair.
    pub fn write_csv<W: Write>(&self, header: &str, mut out: W) -> Result<()> {
        writeln!(out, "# {header}; dt={} nodes={}", self.dt, self.len())?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "t_prime", "G"])?;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                w.write_record([
                    format!("{:.15e}", i as f64 * self.dt),
                    format!("{:.15e}", j as f64 * self.dt),
                    format!("{g:.15e}"),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Solves `(∂² + v''(x_c)) G = δ` with `G = 0` at `t = 0` and `t = T`.
pub fn fluctuation_green(potential: &dyn Potential1D, x_c: &Trajectory) -> Result<FluctuationKernel> {
    let n = x_c.len();
    let dt = x_c.dt();
    let curvature: Vec<f64> = x_c.x.iter().map(|&x| potential.curvature(x)).collect();
    let inv = 1.0 / (dt * dt);
    let diag: Vec<f64> = curvature[1..n - 1].iter().map(|c| c - 2.0 * inv).collect();
    let op = SymTridiagonal::new(diag, vec![inv; n - 3]);
    let smallest = op.smallest_magnitude_eigenvalue();
    if smallest.abs() < SINGULAR_TOLERANCE {
        return Err(Error::SingularOperator { eigenvalue: smallest });
    }
    let mut matrix = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n - 2];
    for j in 1..n - 1 {
        rhs.iter_mut().for_each(|r| *r = 0.0);
        rhs[j - 1] = 1.0 / dt;
        let column = op.solve(&rhs)?;
        for (i, g) in column.into_iter().enumerate() {
            matrix[i + 1][j] = g;
        }
    }
    Ok(FluctuationKernel { dt, curvature, matrix })
}

/// First-order response `δx = ∫ G(t, t₁) j(t₁) dt₁` with `δx(0) = δx(T) = 0`.
pub fn linear_response(potential: &dyn Potential1D, x_c: &Trajectory, source: &[f64]) -> Result<Vec<f64>> {
    fluctuation_green(potential, x_c)?.apply(source)
}

/// Causal first-order response `(δx, δp)` with `δx(0) = δp(0) = 0`.
///
/// Built from the two homogeneous solutions `y₁(0) = 0, ẏ₁(0) = 1` and
/// `y₂(0) = 1, ẏ₂(0) = 0`, integrated with RK4 together with the mean path from
/// its initial data; the retarded kernel is
/// `G_R(t, t') = Θ(t - t')(y₁(t) y₂(t') - y₂(t) y₁(t'))`.
pub fn causal_response(potential: &dyn Potential1D, x_c: &Trajectory, source: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    x_c.grid.check(source)?;
    let n = x_c.len();
    let dt = x_c.dt();
    let base_source = &x_c.source;
    // state: x, p, y1, y1', y2, y2'
    let rhs = |s: &[f64; 6], t: f64| -> [f64; 6] {
        let c = potential.curvature(s[0]);
        [
            s[1],
            -potential.slope(s[0]) + interpolate(base_source, dt, t),
            s[3],
            -c * s[2],
            s[5],
            -c * s[4],
        ]
    };
    let mut state = [x_c.x[0], x_c.v[0], 0.0, 1.0, 1.0, 0.0];
    let mut y = vec![[0.0; 4]; n];
    y[0] = [state[2], state[3], state[4], state[5]];
    for i in 0..n - 1 {
        let t = i as f64 * dt;
        let add = |a: &[f64; 6], k: &[f64; 6], h: f64| -> [f64; 6] {
            let mut out = *a;
            out.iter_mut().zip(k).for_each(|(o, d)| *o += h * d);
            out
        };
        let k1 = rhs(&state, t);
        let k2 = rhs(&add(&state, &k1, 0.5 * dt), t + 0.5 * dt);
        let k3 = rhs(&add(&state, &k2, 0.5 * dt), t + 0.5 * dt);
        let k4 = rhs(&add(&state, &k3, dt), t + dt);
        for m in 0..6 {
            state[m] += dt / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
        }
        y[i + 1] = [state[2], state[3], state[4], state[5]];
    }
    // δx(t) = y₁(t) ∫₀ᵗ y₂ j - y₂(t) ∫₀ᵗ y₁ j, and the same with derivatives for δp
    let a: Vec<f64> = (0..n).map(|k| y[k][2] * source[k]).collect();
    let b: Vec<f64> = (0..n).map(|k| y[k][0] * source[k]).collect();
    let ia = crate::numerics::cumulative_trapezoid(&a, dt);
    let ib = crate::numerics::cumulative_trapezoid(&b, dt);
    let dx = (0..n).map(|i| y[i][0] * ia[i] - y[i][2] * ib[i]).collect();
    let dp = (0..n).map(|i| y[i][1] * ia[i] - y[i][3] * ib[i]).collect();
    Ok((dx, dp))
}
