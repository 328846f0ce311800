//! Gauss–Laguerre quadrature by the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{GwnError, Result};

/// Default node count of [`QuadratureRule::default`].
pub const DEFAULT_NODES: usize = 64;

/// Nodes and weights for `∫₀^∞ g(s) s^a e^{-s} ds / Γ(a+1)`, i.e. weights
/// normalized to sum to one. Exact for polynomials of degree `< 2n`.
pub fn gauss_laguerre(n: usize, a: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(GwnError::Size("quadrature needs at least one node".into()));
    }
    if !(a > -1.0 && a.is_finite()) {
        return Err(GwnError::Domain(format!(
            "Laguerre parameter must exceed -1, got {a}"
        )));
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jacobi[(k, k)] = 2.0 * k as f64 + a + 1.0;
        if k + 1 < n {
            let off = ((k as f64 + 1.0) * (k as f64 + 1.0 + a)).sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    nodes.sort_by(f64::total_cmp);
    // Eigenvector entries only carry absolute precision, which loses the tiny
    // weights of the far nodes; the Christoffel function keeps them relative.
    let weights = nodes.iter().map(|&x| christoffel_weight(n, a, x)).collect();
    Ok((nodes, weights))
}

/// `1 / Σ_{j<n} p_j(x)²` for the orthonormal Laguerre polynomials of `Gamma(a+1)`.
fn christoffel_weight(n: usize, a: f64, x: f64) -> f64 {
    let alpha = |j: usize| ((j as f64) * (j as f64 + a)).sqrt();
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = 1.0;
    for j in 0..n - 1 {
        let next = ((x - (2.0 * j as f64 + a + 1.0)) * cur - alpha(j) * prev) / alpha(j + 1);
        prev = cur;
        cur = next;
        sum += cur * cur;
        if sum.is_nan() || sum >= 1e300 {
            return 0.0;
        }
    }
    1.0 / sum
}

/// A rule for `∫₀^∞ g(s) e^{-s} ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn gauss_laguerre(n: usize) -> Result<Self> {
        let (nodes, weights) = gauss_laguerre(n, 0.0)?;
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * g(s))
            .collect();
        crate::measure::pairwise_sum(&terms)
    }

    /// Fallible variant of [`QuadratureRule::integrate`].
    pub fn try_integrate(&self, mut g: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.nodes.len());
        for (&s, &w) in self.nodes.iter().zip(&self.weights) {
            terms.push(w * g(s)?);
        }
        Ok(crate::measure::pairwise_sum(&terms))
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::gauss_laguerre(DEFAULT_NODES).expect("default rule is valid")
    }
}
