//! Numerical building blocks shared by the physics modules.

pub mod quadrature;
pub mod roots;
pub mod tridiag;

pub use quadrature::{adaptive, Estimate, GaussLegendre};
pub use roots::{brent, polynomial_roots};
pub use tridiag::SymTridiagonal;

/// Cumulative trapezoid integral of uniformly spaced samples, starting at zero.
pub fn cumulative_trapezoid(values: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * dt * (w[0] + w[1]);
        out.push(acc);
    }
    out.truncate(values.len());
    out
}

/// Trapezoid integral of uniformly spaced samples.
pub fn trapezoid(values: &[f64], dt: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => dt * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}
