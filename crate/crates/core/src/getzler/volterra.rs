//! Polynomial Volterra symbols `q(x, ξ, τ)` and their truncated composition
//! `q₁∘q₂ ~ Σ_α (1/α!) ∂_ξ^α q₁ · D_x^α q₂`.
//!
//! Convention: `D_x = −i∂_x`. Parabolic weights are `ξ_j ↦ 1`, `τ ↦ 2`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolMonomial {
    pub x: Vec<u32>,
    pub xi: Vec<u32>,
    pub tau: u32,
}

impl SymbolMonomial {
    pub fn one(n: usize) -> Self {
        Self { x: vec![0; n], xi: vec![0; n], tau: 0 }
    }

    /// `|β| + 2k` for `ξ^β τ^k`.
    pub fn parabolic_degree(&self) -> u32 {
        self.xi.iter().sum::<u32>() + 2 * self.tau
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn xi_degree(&self) -> u32 {
        self.xi.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolterraSymbol<S: Scalar> {
    n: usize,
    /// Truncation `N` of the composition that produced this symbol.
    truncation: Option<usize>,
    terms: BTreeMap<SymbolMonomial, Complex<S>>,
}

impl<S: Scalar> VolterraSymbol<S> {
    pub fn zero(n: usize) -> Self {
        Self { n, truncation: None, terms: BTreeMap::new() }
    }

    pub fn monomial(n: usize, m: SymbolMonomial, coeff: Complex<S>) -> Result<Self> {
        if m.x.len() != n || m.xi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.x.len() });
        }
        let mut out = Self::zero(n);
        out.add_term(m, coeff);
        Ok(out)
    }

    pub fn constant(n: usize, value: S) -> Self {
        let mut out = Self::zero(n);
        out.add_term(SymbolMonomial::one(n), Complex::new(value, S::zero()));
        out
    }

    pub fn xi(n: usize, j: usize) -> Self {
        let mut m = SymbolMonomial::one(n);
        m.xi[j] = 1;
        Self::monomial(n, m, Complex::new(S::one(), S::zero())).expect("shape is valid")
    }

    pub fn x(n: usize, j: usize) -> Self {
        let mut m = SymbolMonomial::one(n);
        m.x[j] = 1;
        Self::monomial(n, m, Complex::new(S::one(), S::zero())).expect("shape is valid")
    }

    pub fn tau(n: usize) -> Self {
        let mut m = SymbolMonomial::one(n);
        m.tau = 1;
        Self::monomial(n, m, Complex::new(S::one(), S::zero())).expect("shape is valid")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymbolMonomial, &Complex<S>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &SymbolMonomial) -> Complex<S> {
        self.terms.get(m).cloned().unwrap_or_else(|| Complex::new(S::zero(), S::zero()))
    }

    fn add_term(&mut self, m: SymbolMonomial, coeff: Complex<S>) {
        if coeff.re.is_zero() && coeff.im.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(|| Complex::new(S::zero(), S::zero()));
        *entry = entry.clone() + coeff;
        if entry.re.is_zero() && entry.im.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        out.truncation = None;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Complex<S>) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * factor.clone());
        }
        out
    }

    /// Pointwise product of symbols (the `α = 0` term of the composition).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(add_monomials(m1, m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    /// Parabolic order: largest `|β| + 2k`; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(SymbolMonomial::parabolic_degree).max()
    }

    pub fn max_x_degree(&self) -> u32 {
        self.terms.keys().map(SymbolMonomial::x_degree).max().unwrap_or(0)
    }

    pub fn max_xi_degree(&self) -> u32 {
        self.terms.keys().map(SymbolMonomial::xi_degree).max().unwrap_or(0)
    }

    /// Drop every term of parabolic degree below `floor`.
    pub fn truncate_below(&self, floor: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|m, _| m.parabolic_degree() >= floor);
        out
    }

    /// `q(λ⁻¹x, λξ, λ²τ)`.
    pub fn dilate(&self, lambda: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let weight = m.parabolic_degree() as i32 - m.x_degree() as i32;
            let f = lambda.powi(weight);
            out.add_term(m.clone(), Complex::new(c.re.clone() * f.clone(), c.im.clone() * f));
        }
        out
    }

    /// `∂_ξ^α` applied termwise.
    fn d_xi(&self, alpha: &[u32]) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((f, xi)) = lower(&m.xi, alpha) {
                let mono = SymbolMonomial { xi, ..m.clone() };
                out.add_term(mono, c.clone() * Complex::new(f, S::zero()));
            }
        }
        out
    }

    /// `D_x^α = (−i)^{|α|} ∂_x^α` applied termwise.
    fn big_d_x(&self, alpha: &[u32]) -> Self {
        let order: u32 = alpha.iter().sum();
        let phase = minus_i_power::<S>(order);
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((f, x)) = lower(&m.x, alpha) {
                let mono = SymbolMonomial { x, ..m.clone() };
                out.add_term(mono, c.clone() * phase.clone() * Complex::new(f, S::zero()));
            }
        }
        out
    }
}

fn add_monomials(a: &SymbolMonomial, b: &SymbolMonomial) -> SymbolMonomial {
    SymbolMonomial {
        x: a.x.iter().zip(&b.x).map(|(p, q)| p + q).collect(),
        xi: a.xi.iter().zip(&b.xi).map(|(p, q)| p + q).collect(),
        tau: a.tau + b.tau,
    }
}

/// `∂^α y^e = Π e_j!/(e_j−α_j)! y^{e−α}`, `None` when some `α_j > e_j`.
fn lower<S: Scalar>(exps: &[u32], alpha: &[u32]) -> Option<(S, Vec<u32>)> {
    let mut f = S::one();
    let mut out = exps.to_vec();
    for (e, a) in out.iter_mut().zip(alpha) {
        if a > e {
            return None;
        }
        for k in 0..*a {
            f *= S::from_i64((*e - k) as i64);
        }
        *e -= a;
    }
    Some((f, out))
}

fn minus_i_power<S: Scalar>(k: u32) -> Complex<S> {
    let (one, zero) = (S::one(), S::zero());
    match k % 4 {
        0 => Complex::new(one, zero),
        1 => Complex::new(zero, -one),
        2 => Complex::new(-one, zero),
        _ => Complex::new(zero, one),
    }
}

/// Every multi-index of length `n` with `|α| ≤ max`.
fn multi_indices(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            let used: u32 = prefix.iter().sum();
            for k in 0..=(max - used) {
                let mut p = prefix.clone();
                p.push(k);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Smallest truncation for which the composition of these two polynomial
/// symbols is exact.
pub fn exactness_threshold<S: Scalar>(q1: &VolterraSymbol<S>, q2: &VolterraSymbol<S>) -> usize {
    q1.max_xi_degree().min(q2.max_x_degree()) as usize
}

pub fn volterra_compose<S: Scalar>(
    q1: &VolterraSymbol<S>,
    q2: &VolterraSymbol<S>,
    truncation: usize,
) -> Result<VolterraSymbol<S>> {
    q1.check_dim(q2)?;
    let required = exactness_threshold(q1, q2);
    if truncation < required {
        return Err(Error::TruncationTooLow { given: truncation, required });
    }
    let n = q1.n;
    let mut out = VolterraSymbol::zero(n);
    for alpha in multi_indices(n, required as u32) {
        let alpha_fact = alpha.iter().fold(S::one(), |acc, &a| acc * factorial::<S>(a as usize));
        let inv = Complex::new(S::one() / alpha_fact, S::zero());
        let term = q1.d_xi(&alpha).multiply(&q2.big_d_x(&alpha))?.scale(&inv);
        for (m, c) in term.terms {
            out.add_term(m, c);
        }
    }
    out.truncation = Some(truncation);
    Ok(out)
}
