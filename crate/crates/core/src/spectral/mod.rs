//! Spectral probe of a one-dimensional potential.
//!
//! A finite-difference spectrum supplies `Eₙ, Ψₙ`; from it we build the
//! resolvent amplitude, the probe `R(E) = Σ 1/((E-Eₙ)² + ε²)`, its proper-time
//! representation and the trace identity tying `R` to `Im A`.

mod probe;
mod proper_time;

pub use probe::{amplitude_spectral, find_peaks, level_count, probe_r, unitarity_residual};
pub use proper_time::{proper_time_r, tail_bound, Domain, ProbeConfig};

use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::SymTridiagonal;
use crate::potential::Potential1D;

/// Uniform interior grid `xᵢ = lo + (i+1)·dx`, `i = 0..points`, with Dirichlet
/// walls at `lo` and `lo + (points+1)·dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub dx: f64,
    pub points: usize,
}

impl Grid {
    pub fn on_box(half_width: f64, points: usize) -> Self {
        Self {
            lo: -half_width,
            dx: 2.0 * half_width / (points + 1) as f64,
            points,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.lo + (i + 1) as f64 * self.dx
    }

    pub fn hi(&self) -> f64 {
        self.lo + (self.points + 1) as f64 * self.dx
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.x(i))
    }
}

/// Levels and real, grid-normalized eigenfunctions.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub levels: Vec<f64>,
    pub wavefunctions: Vec<Vec<f64>>,
    pub grid: Grid,
}

impl Spectrum {
    /// Assembles a spectrum from given data, checking ordering, sizes and
    /// normalization `Δx Σ Ψ² = 1`.
    pub fn from_parts(levels: Vec<f64>, wavefunctions: Vec<Vec<f64>>, grid: Grid) -> Result<Self> {
        if levels.is_empty() || levels.len() != wavefunctions.len() {
            return Err(Error::invalid("levels", "need one wavefunction per level"));
        }
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("levels", "levels must be strictly ascending"));
        }
        for psi in &wavefunctions {
            if psi.len() != grid.points {
                return Err(Error::GridMismatch { expected: grid.points, got: psi.len() });
            }
            let norm = grid.dx * psi.iter().map(|p| p * p).sum::<f64>();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::invalid("wavefunctions", format!("norm {norm} differs from 1")));
            }
        }
        Ok(Self { levels, wavefunctions, grid })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn min_gap(&self) -> f64 {
        self.levels
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Default regulator: 5% of the smallest level spacing.
    pub fn default_epsilon(&self) -> f64 {
        let gap = self.min_gap();
        if gap.is_finite() {
            0.05 * gap
        } else {
            0.05
        }
    }

    /// Linear interpolation of `Ψₙ(x)`, with `Ψ = 0` on the walls.
    pub fn psi(&self, n: usize, x: f64) -> Result<f64> {
        let g = &self.grid;
        let (lo, hi) = (g.lo, g.hi());
        if !(lo..=hi).contains(&x) {
            return Err(Error::OutsideBox { x, lo, hi });
        }
        let s = (x - lo) / g.dx;
        let k = (s.floor() as usize).min(g.points);
        let frac = s - k as f64;
        let node = |m: usize| -> f64 {
            if m == 0 || m > g.points {
                0.0
            } else {
                self.wavefunctions[n][m - 1]
            }
        };
        Ok(node(k) * (1.0 - frac) + node(k + 1) * frac)
    }

    pub fn write_levels_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "E"])?;
        for (n, e) in self.levels.iter().enumerate() {
            w.write_record([n.to_string(), format!("{e:.15e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Header comment with the grid parameters, then `x,psi0,psi1,…` rows.
    pub fn write_wavefunctions_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let g = &self.grid;
        writeln!(out, "# lo={} dx={} points={}", g.lo, g.dx, g.points)?;
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["x".to_string()];
        header.extend((0..self.len()).map(|n| format!("psi{n}")));
        w.write_record(&header)?;
        for i in 0..g.points {
            let mut row = vec![format!("{:.15e}", g.x(i))];
            row.extend(self.wavefunctions.iter().map(|psi| format!("{:.15e}", psi[i])));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Lowest `n_levels` eigenpairs of `-½ d²/dx² + v` with Dirichlet walls at `±L`.
///
/// Second-order finite differences on `grid_points` interior nodes; eigenvalues
/// by Sturm bisection, eigenvectors by inverse iteration.
pub fn solve_spectrum(potential: &dyn Potential1D, n_levels: usize, grid_points: usize) -> Result<Spectrum> {
    if grid_points < 200 {
        return Err(Error::invalid("grid_points", format!("need at least 200, got {grid_points}")));
    }
    if n_levels == 0 || n_levels > grid_points {
        return Err(Error::invalid("n_levels", format!("must lie in 1..={grid_points}")));
    }
    let grid = Grid::on_box(potential.half_width(), grid_points);
    let kinetic = 1.0 / (grid.dx * grid.dx);
    let diag: Vec<f64> = grid.nodes().map(|x| kinetic + potential.value(x)).collect();
    let off = vec![-0.5 * kinetic; grid_points - 1];
    let h = SymTridiagonal::new(diag, off);

    let mut levels = Vec::with_capacity(n_levels);
    let mut wavefunctions: Vec<Vec<f64>> = Vec::with_capacity(n_levels);
    for k in 0..n_levels {
        let e = h.eigenvalue(k);
        let mut v = h.eigenvector(e)?;
        for prev in &wavefunctions {
            let overlap: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum::<f64>() * grid.dx;
            v.iter_mut().zip(prev).for_each(|(a, b)| *a -= overlap * b);
        }
        let norm = (grid.dx * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let first = v.iter().find(|x| x.abs() > 1e-3 * peak).copied().unwrap_or(1.0);
        let sign = first.signum() * norm;
        v.iter_mut().for_each(|x| *x /= sign);
        for edge in [v[0], v[grid_points - 1]] {
            if edge.abs() > 1e-8 {
                return Err(Error::BoundaryLeakage { level: k, value: edge.abs() });
            }
        }
        levels.push(e);
        wavefunctions.push(v);
    }
    Spectrum::from_parts(levels, wavefunctions, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Polynomial;

    #[test]
    fn harmonic_levels() {
        let s = solve_spectrum(&Polynomial::harmonic(12.0), 2, 2000).unwrap();
        assert!((s.levels[0] - 0.5).abs() < 1e-4);
        assert!((s.levels[1] - 1.5).abs() < 1e-4);
    }

    #[test]
    fn second_order_convergence() {
        let v = Polynomial::harmonic(8.0);
        let err = |n| (solve_spectrum(&v, 1, n).unwrap().levels[0] - 0.5).abs();
        let ratio = err(399) / err(799);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn steep_quartic_walls_approach_box_levels() {
        // v = x⁴⁰-like walls: use a large quartic coefficient on a wide box
        let v = crate::potential::FnPotential::new(|x| x.powi(40), |x| 40.0 * x.powi(39), |x| 1560.0 * x.powi(38), 1.5);
        let s = solve_spectrum(&v, 4, 1500).unwrap();
        for n in 1..4 {
            let ratio = s.levels[n] / s.levels[0];
            let expected = ((n + 1) * (n + 1)) as f64;
            assert!((ratio - expected).abs() / expected < 0.1, "n = {n}: {ratio}");
        }
    }

    #[test]
    fn eigenfunctions_are_orthonormal_with_fixed_sign() {
        let s = solve_spectrum(&Polynomial::harmonic(10.0), 5, 800).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let dot: f64 = s.wavefunctions[a].iter().zip(&s.wavefunctions[b]).map(|(x, y)| x * y).sum::<f64>() * s.grid.dx;
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-10);
            }
            let first = s.wavefunctions[a].iter().find(|x| x.abs() > 1e-6).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn leakage_is_reported() {
        let err = solve_spectrum(&Polynomial::harmonic(3.0), 6, 400).unwrap_err();
        assert!(matches!(err, Error::BoundaryLeakage { .. }));
    }

    #[test]
    fn interpolation_hits_nodes_and_walls() {
        let s = solve_spectrum(&Polynomial::harmonic(8.0), 1, 399).unwrap();
        let x = s.grid.x(100);
        assert_eq!(s.psi(0, x).unwrap(), s.wavefunctions[0][100]);
        assert_eq!(s.psi(0, 8.0).unwrap(), 0.0);
        assert!(matches!(s.psi(0, 8.5), Err(Error::OutsideBox { .. })));
    }

    #[test]
    fn csv_headers_name_grid() {
        let s = solve_spectrum(&Polynomial::harmonic(8.0), 2, 200).unwrap();
        let mut buf = Vec::new();
        s.write_wavefunctions_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# lo=-8 dx="));
        assert!(text.lines().nth(1).unwrap() == "x,psi0,psi1");
        let mut buf = Vec::new();
        s.write_levels_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("n,E\n0,"));
    }
}
