//! One-dimensional potentials shared by the spectral and dynamics modules.

use std::fmt;
use std::sync::Arc;

/// A potential `v(x)` with first and second derivatives on the box `[-L, L]`.
pub trait Potential1D: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn slope(&self, x: f64) -> f64;
    fn curvature(&self, x: f64) -> f64;
    /// Half-width `L` of the box.
    fn half_width(&self) -> f64;

    /// Short description used in CSV headers.
    fn describe(&self) -> String {
        "v(x)".to_string()
    }
}

/// `v(x) = k2 x²/2 + k3 x³/3 + k4 x⁴/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polynomial {
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub half_width: f64,
}

impl Polynomial {
    pub fn harmonic(half_width: f64) -> Self {
        Self { k2: 1.0, k3: 0.0, k4: 0.0, half_width }
    }

    pub fn quartic(half_width: f64) -> Self {
        Self { k2: 0.0, k3: 0.0, k4: 1.0, half_width }
    }

    pub fn anharmonic(k4: f64, half_width: f64) -> Self {
        Self { k2: 1.0, k3: 0.0, k4, half_width }
    }

    pub fn free(half_width: f64) -> Self {
        Self { k2: 0.0, k3: 0.0, k4: 0.0, half_width }
    }
}

impl Potential1D for Polynomial {
    fn value(&self, x: f64) -> f64 {
        let x2 = x * x;
        x2 * (0.5 * self.k2 + x * (self.k3 / 3.0 + 0.25 * self.k4 * x))
    }

    fn slope(&self, x: f64) -> f64 {
        x * (self.k2 + x * (self.k3 + self.k4 * x))
    }

    fn curvature(&self, x: f64) -> f64 {
        self.k2 + x * (2.0 * self.k3 + 3.0 * self.k4 * x)
    }

    fn half_width(&self) -> f64 {
        self.half_width
    }

    fn describe(&self) -> String {
        format!("k2={} k3={} k4={} L={}", self.k2, self.k3, self.k4, self.half_width)
    }
}

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Potential assembled from closures.
#[derive(Clone)]
pub struct FnPotential {
    value: Scalar,
    slope: Scalar,
    curvature: Scalar,
    half_width: f64,
    name: String,
}

impl FnPotential {
    pub fn new(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        slope: impl Fn(f64) -> f64 + Send + Sync + 'static,
        curvature: impl Fn(f64) -> f64 + Send + Sync + 'static,
        half_width: f64,
    ) -> Self {
        Self {
            value: Arc::new(value),
            slope: Arc::new(slope),
            curvature: Arc::new(curvature),
            half_width,
            name: "custom".to_string(),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Debug for FnPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnPotential")
            .field("name", &self.name)
            .field("half_width", &self.half_width)
            .finish()
    }
}

impl Potential1D for FnPotential {
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    fn slope(&self, x: f64) -> f64 {
        (self.slope)(x)
    }

    fn curvature(&self, x: f64) -> f64 {
        (self.curvature)(x)
    }

    fn half_width(&self) -> f64 {
        self.half_width
    }

    fn describe(&self) -> String {
        format!("{} L={}", self.name, self.half_width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives_match_finite_differences() {
        let v = Polynomial { k2: 1.3, k3: -0.4, k4: 0.7, half_width: 5.0 };
        let h = 1e-5;
        for x in [-1.5, -0.2, 0.0, 0.9, 2.1] {
            let d1 = (v.value(x + h) - v.value(x - h)) / (2.0 * h);
            let d2 = (v.slope(x + h) - v.slope(x - h)) / (2.0 * h);
            assert!((d1 - v.slope(x)).abs() < 1e-8);
            assert!((d2 - v.curvature(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn closure_potential_delegates() {
        let v = FnPotential::new(|x| x.cosh(), |x| x.sinh(), |x| x.cosh(), 3.0).named("cosh");
        assert_eq!(v.value(0.0), 1.0);
        assert_eq!(v.half_width(), 3.0);
        assert_eq!(v.describe(), "cosh L=3");
    }
}
