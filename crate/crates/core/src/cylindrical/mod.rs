//! Two-dimensional central-force motion in polar coordinates with rotated
//! sources, the frame map for deviations and the radial Jacobian bookkeeping.

use std::f64::consts::PI;
use std::io::Write;

use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};

/// Central potentials `v(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralPotential {
    /// `r²/2`
    Harmonic,
    /// `r⁴/4`
    Quartic,
    /// `r²/2 + r⁴/4`
    Mixed,
}

impl CentralPotential {
    pub const ALL: [CentralPotential; 3] = [Self::Harmonic, Self::Quartic, Self::Mixed];

    pub fn value(&self, r: f64) -> f64 {
        let r2 = r * r;
        match self {
            Self::Harmonic => 0.5 * r2,
            Self::Quartic => 0.25 * r2 * r2,
            Self::Mixed => 0.5 * r2 + 0.25 * r2 * r2,
        }
    }

    pub fn slope(&self, r: f64) -> f64 {
        match self {
            Self::Harmonic => r,
            Self::Quartic => r * r * r,
            Self::Mixed => r + r * r * r,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Harmonic => "r^2/2",
            Self::Quartic => "r^4/4",
            Self::Mixed => "r^2/2+r^4/4",
        }
    }
}

/// `(r, φ, p, l)` with `p = ṙ`, `l = φ̇ r²` and `φ` unwrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarState {
    pub r: f64,
    pub phi: f64,
    pub p: f64,
    pub l: f64,
}

/// How the angular source enters `l̇`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SourceConvention {
    /// `l̇ = j'_φ` with `j'_φ = r j_φ` already absorbing the radius; the measure
    /// carries no `r²` factor.
    #[default]
    Rescaled,
    /// `l̇ = r j_φ` with the bare rotated component; the measure carries `Π r²`.
    Raw,
}

/// Sources driving the polar solver.
#[derive(Debug, Clone, PartialEq)]
pub enum PolarSources {
    /// Cartesian `(j₁, j₂)` grid functions, rotated by the instantaneous `φ`.
    Cartesian { j1: Vec<f64>, j2: Vec<f64> },
    /// Polar components given directly, read according to the convention.
    Polar { j_r: Vec<f64>, j_phi: Vec<f64> },
}

impl PolarSources {
    pub fn none(len: usize) -> Self {
        PolarSources::Polar { j_r: vec![0.0; len], j_phi: vec![0.0; len] }
    }

    fn len(&self) -> (usize, usize) {
        match self {
            PolarSources::Cartesian { j1, j2 } => (j1.len(), j2.len()),
            PolarSources::Polar { j_r, j_phi } => (j_r.len(), j_phi.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarOptions {
    pub r_min: f64,
    pub convention: SourceConvention,
}

impl Default for PolarOptions {
    fn default() -> Self {
        Self { r_min: 1e-6, convention: SourceConvention::Rescaled }
    }
}

/// States on the time grid with the effective sources actually applied:
/// `j_r` and the angular source in the history's convention.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarHistory {
    pub grid: TimeGrid,
    pub states: Vec<PolarState>,
    pub j_r: Vec<f64>,
    pub j_phi: Vec<f64>,
    pub convention: SourceConvention,
}

impl PolarHistory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Columns `t,r,phi,p,l,H,j_r,j_phi` after a header comment.
    pub fn write_csv<W: Write>(&self, potential: CentralPotential, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# potential={} T={} steps={} convention={:?}",
            potential.name(),
            self.grid.t_final,
            self.grid.steps,
            self.convention
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "r", "phi", "p", "l", "H", "j_r", "j_phi"])?;
        for (i, s) in self.states.iter().enumerate() {
            let h = polar_hamiltonian(s, potential, self.j_r[i], self.j_phi[i]);
            let row = [self.grid.time(i), s.r, s.phi, s.p, s.l, h, self.j_r[i], self.j_phi[i]];
            w.write_record(row.iter().map(|v| format!("{v:.15e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Cartesian position and velocity to polar form, `φ ∈ (-π, π]`.
pub fn cart_to_polar(x1: f64, x2: f64, v1: f64, v2: f64) -> Result<PolarState> {
    let r = x1.hypot(x2);
    if r == 0.0 {
        return Err(Error::invalid("position", "polar coordinates are undefined at the origin"));
    }
    Ok(PolarState {
        r,
        phi: x2.atan2(x1),
        p: (x1 * v1 + x2 * v2) / r,
        l: x1 * v2 - x2 * v1,
    })
}

/// As [`cart_to_polar`], with `φ` shifted by a multiple of `2π` to lie within
/// `π` of `prior`.
pub fn cart_to_polar_unwrapped(x1: f64, x2: f64, v1: f64, v2: f64, prior: f64) -> Result<PolarState> {
    let mut s = cart_to_polar(x1, x2, v1, v2)?;
    s.phi += 2.0 * PI * ((prior - s.phi) / (2.0 * PI)).round();
    Ok(s)
}

/// `(x₁, x₂, v₁, v₂)` from a polar state.
pub fn polar_to_cart(s: &PolarState) -> (f64, f64, f64, f64) {
    let (sin, cos) = s.phi.sin_cos();
    let tangential = s.l / s.r;
    (
        s.r * cos,
        s.r * sin,
        s.p * cos - tangential * sin,
        s.p * sin + tangential * cos,
    )
}

/// `(j_r, j_φ)`: the Cartesian pair in the frame rotated by `φ`.
pub fn rotate_sources(j1: f64, j2: f64, phi: f64) -> (f64, f64) {
    let (sin, cos) = phi.sin_cos();
    (j1 * cos + j2 * sin, -j1 * sin + j2 * cos)
}

/// `H = p²/2 + l²/(2r²) + v(r) - j_r r - j_φ φ`.
pub fn polar_hamiltonian(s: &PolarState, potential: CentralPotential, j_r: f64, j_phi: f64) -> f64 {
    0.5 * s.p * s.p + 0.5 * s.l * s.l / (s.r * s.r) + potential.value(s.r) - j_r * s.r - j_phi * s.phi
}

/// `(e₁, e₂) = e_r r̂ + r e_φ φ̂`.
pub fn deviation_to_cartesian(e_r: f64, e_phi: f64, r: f64, phi: f64) -> (f64, f64) {
    let (sin, cos) = phi.sin_cos();
    (e_r * cos - r * e_phi * sin, e_r * sin + r * e_phi * cos)
}

/// Inverse of [`deviation_to_cartesian`].
pub fn deviation_from_cartesian(e1: f64, e2: f64, r: f64, phi: f64) -> (f64, f64) {
    let (sin, cos) = phi.sin_cos();
    (e1 * cos + e2 * sin, (-e1 * sin + e2 * cos) / r)
}

/// Log of the radial Jacobian `Π r²(tᵢ)` carried by the measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianWeight {
    pub log_weight: f64,
    pub convention: SourceConvention,
}

/// `Σ 2 ln r(tᵢ)` under the raw convention; exactly zero under the rescaled one,
/// where the radius has been absorbed into the angular source.
pub fn jacobian_log_weight(radii: &[f64], convention: SourceConvention) -> Result<JacobianWeight> {
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0)) {
        return Err(Error::invalid("history", format!("non-positive radius {r}")));
    }
    let log_weight = match convention {
        SourceConvention::Raw => radii.iter().map(|r| 2.0 * r.ln()).sum(),
        SourceConvention::Rescaled => 0.0,
    };
    Ok(JacobianWeight { log_weight, convention })
}

fn lerp(samples: &[f64], dt: f64, t: f64) -> f64 {
    let s = (t / dt).max(0.0);
    let k = (s.floor() as usize).min(samples.len() - 2);
    let f = s - k as f64;
    samples[k] * (1.0 - f) + samples[k + 1] * f
}

fn rk4<const N: usize>(y: &[f64; N], t: f64, h: f64, f: impl Fn(&[f64; N], f64) -> [f64; N]) -> [f64; N] {
    let add = |a: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        let mut out = *a;
        out.iter_mut().zip(k).for_each(|(o, d)| *o += s * d);
        out
    };
    let k1 = f(y, t);
    let k2 = f(&add(y, &k1, 0.5 * h), t + 0.5 * h);
    let k3 = f(&add(y, &k2, 0.5 * h), t + 0.5 * h);
    let k4 = f(&add(y, &k3, h), t + h);
    let mut out = *y;
    for m in 0..N {
        out[m] += h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    }
    out
}

/// Integrates the polar equations with RK4:
/// `ṙ = p`, `φ̇ = l/r²`, `ṗ = l²/r³ - v'(r) + j_r`, `l̇ = j'_φ` (rescaled) or
/// `l̇ = r j_φ` (raw).
pub fn solve_polar(
    potential: CentralPotential,
    init: PolarState,
    sources: &PolarSources,
    grid: TimeGrid,
    options: PolarOptions,
) -> Result<PolarHistory> {
    let (a, b) = sources.len();
    if a != grid.len() || b != grid.len() {
        return Err(Error::GridMismatch { expected: grid.len(), got: a.min(b) });
    }
    if !(init.r > options.r_min) {
        return Err(Error::RadiusGuard { time: 0.0, r_min: options.r_min });
    }
    let dt = grid.dt();
    let convention = options.convention;
    // radial source and torque at state y, time t
    let drive = |y: &[f64; 4], t: f64| -> (f64, f64) {
        match sources {
            PolarSources::Cartesian { j1, j2 } => {
                let (jr, jp) = rotate_sources(lerp(j1, dt, t), lerp(j2, dt, t), y[1]);
                (jr, y[0] * jp)
            }
            PolarSources::Polar { j_r, j_phi } => {
                let jp = lerp(j_phi, dt, t);
                let torque = match convention {
                    SourceConvention::Rescaled => jp,
                    SourceConvention::Raw => y[0] * jp,
                };
                (lerp(j_r, dt, t), torque)
            }
        }
    };
    let rhs = |y: &[f64; 4], t: f64| -> [f64; 4] {
        let (jr, torque) = drive(y, t);
        let r = y[0];
        [y[2], y[3] / (r * r), y[3] * y[3] / (r * r * r) - potential.slope(r) + jr, torque]
    };
    let record = |y: &[f64; 4], t: f64| -> (f64, f64) {
        let (jr, torque) = drive(y, t);
        match convention {
            SourceConvention::Rescaled => (jr, torque),
            SourceConvention::Raw => (jr, torque / y[0]),
        }
    };

    let mut y = [init.r, init.phi, init.p, init.l];
    let mut states = Vec::with_capacity(grid.len());
    let mut j_r = Vec::with_capacity(grid.len());
    let mut j_phi = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let t = grid.time(i);
        if !(y[0] > options.r_min) {
            return Err(Error::RadiusGuard { time: t, r_min: options.r_min });
        }
        states.push(PolarState { r: y[0], phi: y[1], p: y[2], l: y[3] });
        let (jr, jp) = record(&y, t);
        j_r.push(jr);
        j_phi.push(jp);
        if i < grid.steps {
            y = rk4(&y, t, dt, rhs);
        }
    }
    Ok(PolarHistory { grid, states, j_r, j_phi, convention })
}

/// Cartesian states `(x₁, x₂, v₁, v₂)` of `ẍᵢ + ∂v/∂xᵢ = jᵢ` by RK4.
pub fn solve_cartesian(
    potential: CentralPotential,
    init: (f64, f64, f64, f64),
    j1: &[f64],
    j2: &[f64],
    grid: TimeGrid,
) -> Result<Vec<(f64, f64, f64, f64)>> {
    if j1.len() != grid.len() || j2.len() != grid.len() {
        return Err(Error::GridMismatch { expected: grid.len(), got: j1.len().min(j2.len()) });
    }
    let dt = grid.dt();
    let rhs = |y: &[f64; 4], t: f64| -> [f64; 4] {
        let r = y[0].hypot(y[1]);
        let pull = if r > 0.0 { potential.slope(r) / r } else { 0.0 };
        [y[2], y[3], -pull * y[0] + lerp(j1, dt, t), -pull * y[1] + lerp(j2, dt, t)]
    };
    let mut y = [init.0, init.1, init.2, init.3];
    let mut out = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        out.push((y[0], y[1], y[2], y[3]));
        if i < grid.steps {
            y = rk4(&y, grid.time(i), dt, rhs);
        }
    }
    Ok(out)
}

/// Maps a Cartesian history to polar states with continuous `φ`.
pub fn cartesian_history_to_polar(history: &[(f64, f64, f64, f64)], phi0: f64) -> Result<Vec<PolarState>> {
    let mut prior = phi0;
    history
        .iter()
        .map(|&(x1, x2, v1, v2)| {
            let s = cart_to_polar_unwrapped(x1, x2, v1, v2, prior)?;
            prior = s.phi;
            Ok(s)
        })
        .collect()
}

/// Largest component-wise deviation between two polar histories.
pub fn sup_deviation(a: &[PolarState], b: &[PolarState]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(s, t)| {
            (s.r - t.r)
                .abs()
                .max((s.phi - t.phi).abs())
                .max((s.p - t.p).abs())
                .max((s.l - t.l).abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn polar_examples() {
        let s = cart_to_polar(1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!((s.r, s.phi, s.p, s.l), (1.0, 0.0, 0.0, 1.0));
        let s = cart_to_polar(0.0, 2.0, -3.0, 0.0).unwrap();
        assert!(close(s.r, 2.0, 1e-15) && close(s.phi, PI / 2.0, 1e-15) && close(s.p, 0.0, 1e-15) && close(s.l, 6.0, 1e-15));
        assert!(cart_to_polar(0.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn polar_round_trip() {
        for &(x1, x2, v1, v2) in &[(0.3, -1.2, 0.7, 0.1), (-2.0, 0.5, -0.3, 1.1), (0.01, 0.02, 3.0, -4.0)] {
            let (a, b, c, d) = polar_to_cart(&cart_to_polar(x1, x2, v1, v2).unwrap());
            for (u, w) in [(a, x1), (b, x2), (c, v1), (d, v2)] {
                assert!(close(u, w, 1e-12));
            }
        }
    }

    #[test]
    fn unwrapping_follows_prior() {
        let s = cart_to_polar_unwrapped(-1.0, -1e-3, 0.0, 0.0, 3.1).unwrap();
        assert!(s.phi > PI);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotate_sources(0.3, -0.4, 0.0), (0.3, -0.4));
        let (jr, jp) = rotate_sources(1.0, 0.0, PI / 2.0);
        assert!(close(jr, 0.0, 1e-15) && close(jp, -1.0, 1e-15));
        let (jr, jp) = rotate_sources(0.7, -1.3, 2.1);
        assert!(close(jr * jr + jp * jp, 0.7f64.powi(2) + 1.3f64.powi(2), 1e-14));
    }

    #[test]
    fn hamiltonian_examples() {
        let s = PolarState { r: 1.0, phi: 0.0, p: 0.0, l: 1.0 };
        assert_eq!(polar_hamiltonian(&s, CentralPotential::Harmonic, 0.0, 0.0), 1.0);
        let radial = PolarState { r: 1.5, phi: 0.7, p: 0.4, l: 0.0 };
        let h = polar_hamiltonian(&radial, CentralPotential::Mixed, 0.0, 0.0);
        assert!(close(h, 0.08 + CentralPotential::Mixed.value(1.5), 1e-15));
    }

    #[test]
    fn deviation_examples() {
        assert_eq!(deviation_to_cartesian(1.0, 0.0, 1.0, 0.0), (1.0, 0.0));
        assert_eq!(deviation_to_cartesian(0.0, 1.0, 2.0, 0.0), (0.0, 2.0));
        let (e1, e2) = deviation_to_cartesian(0.3, -0.2, 1.7, 0.9);
        assert!(close(e1 * e1 + e2 * e2, 0.09 + 1.7f64.powi(2) * 0.04, 1e-14));
        let (er, ep) = deviation_from_cartesian(e1, e2, 1.7, 0.9);
        assert!(close(er, 0.3, 1e-12) && close(ep, -0.2, 1e-12));
    }

    #[test]
    fn circular_orbit() {
        let grid = TimeGrid::with_step(10.0, 1e-3).unwrap();
        let init = PolarState { r: 1.0, phi: 0.0, p: 0.0, l: 1.0 };
        let h = solve_polar(CentralPotential::Harmonic, init, &PolarSources::none(grid.len()), grid, PolarOptions::default()).unwrap();
        for (i, s) in h.states.iter().enumerate() {
            assert!(close(s.r, 1.0, 1e-8) && close(s.phi, grid.time(i), 1e-8));
            let phidot = s.l / (s.r * s.r);
            assert!(close(phidot * phidot * s.r, CentralPotential::Harmonic.slope(s.r), 1e-8));
        }
    }

    #[test]
    fn conservation_without_sources() {
        let grid = TimeGrid::with_step(100.0, 1e-3).unwrap();
        let init = PolarState { r: 1.2, phi: 0.3, p: 0.4, l: 0.8 };
        for v in CentralPotential::ALL {
            let h = solve_polar(v, init, &PolarSources::none(grid.len()), grid, PolarOptions::default()).unwrap();
            let e0 = polar_hamiltonian(&h.states[0], v, 0.0, 0.0);
            for s in &h.states {
                assert!(close(s.l, init.l, 1e-8));
                assert!(close(polar_hamiltonian(s, v, 0.0, 0.0), e0, 1e-8));
            }
        }
    }

    #[test]
    fn radius_guard_triggers() {
        let grid = TimeGrid::with_step(3.0, 1e-3).unwrap();
        let init = PolarState { r: 1.0, phi: 0.0, p: -1.0, l: 0.0 };
        match solve_polar(CentralPotential::Harmonic, init, &PolarSources::none(grid.len()), grid, PolarOptions::default()) {
            Err(Error::RadiusGuard { time, .. }) => assert!(close(time, PI / 4.0, 2e-3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jacobian_weights() {
        assert_eq!(jacobian_log_weight(&[1.0; 8], SourceConvention::Raw).unwrap().log_weight, 0.0);
        let w = jacobian_log_weight(&[2.0; 10], SourceConvention::Raw).unwrap().log_weight;
        assert!(close(w, 20.0 * 2f64.ln(), 1e-12));
        assert_eq!(jacobian_log_weight(&[2.0; 10], SourceConvention::Rescaled).unwrap().log_weight, 0.0);
        assert!(jacobian_log_weight(&[1.0, 0.0], SourceConvention::Rescaled).is_err());
    }

    #[test]
    fn csv_columns() {
        let grid = TimeGrid::new(1.0, 4).unwrap();
        let init = PolarState { r: 1.0, phi: 0.0, p: 0.0, l: 1.0 };
        let h = solve_polar(CentralPotential::Harmonic, init, &PolarSources::none(grid.len()), grid, PolarOptions::default()).unwrap();
        let mut buf = Vec::new();
        h.write_csv(CentralPotential::Harmonic, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "t,r,phi,p,l,H,j_r,j_phi");
    }
}
