//! Composite Gauss–Legendre quadrature for smooth integrands.

use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Panel/node configuration of the composite rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    /// Number of equal panels.
    pub panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes: 16,
            panels: 8,
        }
    }
}

impl QuadratureConfig {
    /// Integrate `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (nodes, weights) = gauss_legendre(self.nodes);
        let h = (b - a) / self.panels as f64;
        let mut acc = 0.0;
        for p in 0..self.panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            let half = 0.5 * h;
            for (x, w) in nodes.iter().zip(&weights) {
                acc += w * half * f(mid + half * x);
            }
        }
        acc
    }

    /// Nodes and weights of the composite rule over [a, b], in order.
    pub fn points(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let (nodes, weights) = gauss_legendre(self.nodes);
        let h = (b - a) / self.panels as f64;
        let mut out = Vec::with_capacity(self.nodes * self.panels);
        for p in 0..self.panels {
            let mid = a + p as f64 * h + 0.5 * h;
            let half = 0.5 * h;
            for (x, w) in nodes.iter().zip(&weights) {
                out.push((mid + half * x, w * half));
            }
        }
        out
    }

    /// Integrate, verifying the panel-refinement self-check on this integrand.
    pub fn integrate_checked<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
        tol: f64,
    ) -> Result<f64> {
        let coarse = self.integrate(a, b, &mut f);
        let fine = QuadratureConfig {
            nodes: self.nodes,
            panels: 2 * self.panels,
        }
        .integrate(a, b, &mut f);
        if (coarse - fine).abs() > tol * (1.0 + coarse.abs()) {
            return Err(Error::Accuracy(format!(
                "quadrature not converged: refinement moved the value by {:.3e}",
                (coarse - fine).abs()
            )));
        }
        Ok(fine)
    }
}

/// Gauss–Legendre nodes/weights on [−1, 1], by Newton iteration on the
/// Legendre recurrence. Cached per node count.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    type NodeTable = Vec<(usize, (Vec<f64>, Vec<f64>))>;
    assert!(n >= 1, "need at least one node");
    static CACHE: OnceLock<Mutex<NodeTable>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some((_, nw)) = guard.iter().find(|(k, _)| *k == n) {
            return nw.clone();
        }
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let result = (nodes, weights);
    cache.lock().unwrap().push((n, result.clone()));
    result
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_polynomials() {
        let q = QuadratureConfig { nodes: 5, panels: 1 };
        // Degree 9 is exact for 5 nodes.
        let val = q.integrate(0.0, 1.0, |t| t.powi(9));
        assert!((val - 0.1).abs() < 1e-14);
    }

    #[test]
    fn trigonometric_reference_values() {
        let q = QuadratureConfig::default();
        let val = q.integrate(0.0, std::f64::consts::PI, f64::sin);
        assert!((val - 2.0).abs() < 1e-13);
        let osc = q.integrate(0.0, 1.0, |t| (10.0 * t).cos() * t * t);
        // ∫ t² cos(10t) dt over [0,1], closed form.
        let exact = |t: f64| {
            (t * t / 10.0 - 2.0 / 1000.0) * (10.0 * t).sin() + 2.0 * t / 100.0 * (10.0 * t).cos()
        };
        assert!((osc - (exact(1.0) - exact(0.0))).abs() < 1e-13);
    }

    #[test]
    fn refinement_self_check() {
        let q = QuadratureConfig::default();
        let v = q.integrate_checked(0.0, 2.0, |t| (3.0 * t).sin() * (-t).exp(), 1e-10);
        assert!(v.is_ok());
    }

    #[test]
    fn points_sum_to_interval_length() {
        let q = QuadratureConfig { nodes: 4, panels: 3 };
        let total: f64 = q.points(1.0, 4.0).iter().map(|(_, w)| w).sum();
        assert!((total - 3.0).abs() < 1e-14);
    }
}
