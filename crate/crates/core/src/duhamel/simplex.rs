//! Grundmann–Möller rules on the standard simplex
//! `Δ_k = {t₀ + … + t_k = 1, t_i ≥ 0}` with `vol(Δ_k) = 1/k!`.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SimplexQuadrature {
    k: usize,
    /// Barycentric nodes `(t₀, …, t_k)`.
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// All `β ∈ ℕ^{parts}` with `|β| = total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl SimplexQuadrature {
    /// Rule of polynomial degree `2s + 1` on `Δ_k`.
    pub fn grundmann_moller(k: usize, s: usize) -> Self {
        if k == 0 {
            return Self { k, nodes: vec![vec![1.0]], weights: vec![1.0] };
        }
        let d = 2 * s + 1;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for i in 0..=s {
            let denom = (d + k - 2 * i) as f64;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * 2f64.powi(-2 * s as i32) * denom.powi(d as i32)
                / (factorial(i) * factorial(d + k - i));
            for beta in compositions(s - i, k + 1) {
                nodes.push(beta.iter().map(|&b| (2 * b + 1) as f64 / denom).collect());
                weights.push(w);
            }
        }
        Self { k, nodes, weights }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }

    /// Raise the degree until two successive rules agree within `tol`
    /// (relative to `max(1, |value|)`); returns the value and the final `s`.
    pub fn adaptive<F: FnMut(&[f64]) -> Result<f64>>(k: usize, tol: f64, mut f: F) -> Result<(f64, usize)> {
        const MAX_S: usize = 14;
        let eval = |s: usize, f: &mut F| -> Result<f64> {
            let rule = Self::grundmann_moller(k, s);
            let mut acc = 0.0;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                acc += w * f(x)?;
            }
            Ok(acc)
        };
        let mut prev = eval(1, &mut f)?;
        if k == 0 {
            return Ok((prev, 0));
        }
        for s in 2..=MAX_S {
            let next = eval(s, &mut f)?;
            if (next - prev).abs() < tol * next.abs().max(1.0) {
                return Ok((next, s));
            }
            prev = next;
        }
        Err(Error::QuadratureNonConvergence(format!(
            "simplex rule on Δ_{k} did not settle by degree {}",
            2 * MAX_S + 1
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_volume() {
        for k in 0..5 {
            for s in 0..5 {
                let rule = SimplexQuadrature::grundmann_moller(k, s);
                let total: f64 = rule.weights().iter().sum();
                assert!((total - 1.0 / factorial(k)).abs() < 1e-12, "k={k} s={s}");
            }
        }
    }

    #[test]
    fn nodes_are_barycentric() {
        let rule = SimplexQuadrature::grundmann_moller(3, 3);
        for x in rule.nodes() {
            assert_eq!(x.len(), 4);
            assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(x.iter().all(|&t| t > 0.0));
        }
    }

    #[test]
    fn adaptive_rejects_divergent_integrands() {
        let r = SimplexQuadrature::adaptive(2, 1e-15, |x| Ok((1.0 / (x[0] + 1e-9)).ln() * 1e6));
        assert!(r.is_err());
    }
}
