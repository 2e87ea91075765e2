/// Discrete step kernel `gᵢⱼ = Θ(tᵢ - tⱼ)` with the midpoint value `Θ(0) = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedKernel {
    pub nodes: usize,
    pub dt: f64,
}

impl RetardedKernel {
    pub fn new(nodes: usize, dt: f64) -> Self {
        Self { nodes, dt }
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Greater => 1.0,
            std::cmp::Ordering::Equal => 0.5,
            std::cmp::Ordering::Less => 0.0,
        }
    }

    /// `Δt Σⱼ gᵢⱼ sⱼ`.
    pub fn apply(&self, source: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(source.len());
        let mut below = 0.0;
        for &s in source {
            out.push(self.dt * (below + 0.5 * s));
            below += s;
        }
        out
    }

    /// `|Σ g²Δt² - Σ g Δt²|` and `|Σ gᵢⱼ gⱼᵢ Δt²|`, summed explicitly.
    ///
    /// Both vanish in the continuum; on the grid they come only from the
    /// diagonal and equal `nodes·Δt²/4`.
    pub fn projection_defects(&self) -> (f64, f64) {
        let mut square = 0.0;
        let mut plain = 0.0;
        let mut transposed = 0.0;
        for i in 0..self.nodes {
            for j in 0..self.nodes {
                let g = self.value(i, j);
                square += g * g;
                plain += g;
                transposed += g * self.value(j, i);
            }
        }
        let w = self.dt * self.dt;
        ((square - plain).abs() * w, transposed.abs() * w)
    }
}
