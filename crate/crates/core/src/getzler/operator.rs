//! Differential operators with polynomial coefficients, Clifford (or
//! exterior) factors and `End F` matrix coefficients, in the normal order
//! `M · x^a · w · ∂_x^α · ∂_t^k`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::order::HalfInt;
use crate::clifford::{clifford_words, CliffordElement};
use crate::error::{Error, Result};
use crate::multivector::{wedge_words, word_text, BasisWord, Multivector};
use crate::scalar::Scalar;

/// Product rule for the word factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algebra {
    /// `c`, `ĉ` generators.
    Clifford,
    /// `e∧`, `ê∧` multiplications; model operators live here.
    Exterior,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub word: BasisWord,
    pub dx: Vec<u32>,
    pub dt: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Self { x: vec![0; n], word: BasisWord::ONE, dx: vec![0; n], dt: 0 }
    }

    /// `|α| + 2k + ½|w| − |a|`.
    pub fn getzler_order(&self) -> HalfInt {
        let dx: u32 = self.dx.iter().sum();
        let x: u32 = self.x.iter().sum();
        HalfInt::from_twice((2 * dx + 4 * self.dt + self.word.degree() as u32) as i32 - 2 * x as i32)
    }

    fn text(&self) -> String {
        let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        format!(
            "x^[{}] {} d^[{}] dt^{}",
            list(&self.x),
            word_text(self.word, "c", "chat"),
            list(&self.dx),
            self.dt
        )
    }
}

/// An operator of known Getzler order whose explicit form is not tracked.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerOrder<S> {
    pub order: HalfInt,
    pub coeff: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedDiffOp<S: Scalar> {
    n: usize,
    rank: usize,
    algebra: Algebra,
    terms: BTreeMap<Monomial, DMatrix<S>>,
    lower: BTreeMap<String, LowerOrder<S>>,
}

impl<S: Scalar> GradedDiffOp<S> {
    pub fn zero(n: usize, rank: usize, algebra: Algebra) -> Self {
        Self { n, rank, algebra, terms: BTreeMap::new(), lower: BTreeMap::new() }
    }

    pub fn term(n: usize, rank: usize, algebra: Algebra, monomial: Monomial, coeff: DMatrix<S>) -> Result<Self> {
        if monomial.x.len() != n || monomial.dx.len() != n || !monomial.word.fits(n) {
            return Err(Error::DimensionMismatch { expected: n, found: monomial.x.len() });
        }
        if coeff.nrows() != rank || coeff.ncols() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: coeff.nrows() });
        }
        let mut out = Self::zero(n, rank, algebra);
        out.add_term(monomial, coeff);
        Ok(out)
    }

    fn scalar_term(n: usize, rank: usize, algebra: Algebra, monomial: Monomial, coeff: S) -> Self {
        let mut out = Self::zero(n, rank, algebra);
        out.add_term(monomial, DMatrix::identity(rank, rank) * coeff);
        out
    }

    pub fn identity(n: usize, rank: usize, algebra: Algebra) -> Self {
        Self::scalar_term(n, rank, algebra, Monomial::one(n), S::one())
    }

    /// `∂_{x_j}`.
    pub fn dx(n: usize, rank: usize, algebra: Algebra, j: usize) -> Self {
        let mut m = Monomial::one(n);
        m.dx[j] = 1;
        Self::scalar_term(n, rank, algebra, m, S::one())
    }

    /// `∂_t`.
    pub fn dt(n: usize, rank: usize, algebra: Algebra) -> Self {
        let mut m = Monomial::one(n);
        m.dt = 1;
        Self::scalar_term(n, rank, algebra, m, S::one())
    }

    /// Multiplication by `x_j`.
    pub fn x(n: usize, rank: usize, algebra: Algebra, j: usize) -> Self {
        let mut m = Monomial::one(n);
        m.x[j] = 1;
        Self::scalar_term(n, rank, algebra, m, S::one())
    }

    /// `Σ_j ∂²_j`.
    pub fn laplacian(n: usize, rank: usize, algebra: Algebra) -> Self {
        let mut out = Self::zero(n, rank, algebra);
        for j in 0..n {
            let mut m = Monomial::one(n);
            m.dx[j] = 2;
            out.add_term(m, DMatrix::identity(rank, rank));
        }
        out
    }

    /// A constant bundle endomorphism.
    pub fn endomorphism(n: usize, coeff: DMatrix<S>) -> Result<Self> {
        let rank = coeff.nrows();
        Self::term(n, rank, Algebra::Clifford, Monomial::one(n), coeff)
    }

    /// `x ⊗ M` for a Clifford element `x` and `M ∈ End F`.
    pub fn clifford(x: &CliffordElement<S>, coeff: &DMatrix<S>) -> Self {
        let n = x.dim();
        let mut out = Self::zero(n, coeff.nrows(), Algebra::Clifford);
        for (w, c) in x.terms() {
            out.add_term(Monomial { word: w, ..Monomial::one(n) }, coeff * c.clone());
        }
        out
    }

    /// Exterior multiplication by `x`, as a rank-`rank` operator.
    pub fn exterior(x: &Multivector<S>, rank: usize) -> Self {
        let n = x.dim();
        let mut out = Self::zero(n, rank, Algebra::Exterior);
        for (w, c) in x.terms() {
            out.add_term(Monomial { word: w, ..Monomial::one(n) }, DMatrix::identity(rank, rank) * c.clone());
        }
        out
    }

    /// Opaque operator of the given Getzler order.
    pub fn lower_order(n: usize, rank: usize, algebra: Algebra, label: &str, order: HalfInt) -> Self {
        let mut out = Self::zero(n, rank, algebra);
        out.lower.insert(label.to_string(), LowerOrder { order, coeff: S::one() });
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &DMatrix<S>)> {
        self.terms.iter()
    }

    pub fn lower_terms(&self) -> impl Iterator<Item = (&String, &LowerOrder<S>)> {
        self.lower.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.lower.is_empty()
    }

    fn add_term(&mut self, monomial: Monomial, coeff: DMatrix<S>) {
        if coeff.iter().all(|c| c.is_zero()) {
            return;
        }
        match self.terms.get_mut(&monomial) {
            Some(existing) => {
                *existing += coeff;
                if existing.iter().all(|c| c.is_zero()) {
                    self.terms.remove(&monomial);
                }
            }
            None => {
                self.terms.insert(monomial, coeff);
            }
        }
    }

    fn add_lower(&mut self, label: String, order: HalfInt, coeff: S) {
        let entry = self.lower.entry(label.clone()).or_insert(LowerOrder { order, coeff: S::zero() });
        entry.coeff += coeff;
        if entry.coeff.is_zero() {
            self.lower.remove(&label);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: other.rank });
        }
        if self.algebra != other.algebra {
            return Err(Error::Unsupported("mixing Clifford and exterior operators".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        for (label, lo) in &other.lower {
            out.add_lower(label.clone(), lo.order, lo.coeff.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.n, self.rank, self.algebra);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * factor.clone());
        }
        for (label, lo) in &self.lower {
            out.add_lower(label.clone(), lo.order, lo.coeff.clone() * factor.clone());
        }
        out
    }

    /// Operator composition `self ∘ other`, moving derivatives to the right
    /// with the Leibniz rule. Lower-order parts compose into new opaque terms
    /// whose order is the sum of the factors' orders.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n, self.rank, self.algebra);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                self.compose_monomials(m1, c1, m2, c2, &mut out);
            }
        }
        let describe = |m: &Monomial| format!("({})", m.text());
        for (l1, lo1) in &self.lower {
            for (m2, c2) in &other.terms {
                let label = format!("{l1}·{}", describe(m2));
                out.add_lower(label, lo1.order + m2.getzler_order(), lo1.coeff.clone() * c2.trace());
            }
            for (l2, lo2) in &other.lower {
                out.add_lower(format!("{l1}·{l2}"), lo1.order + lo2.order, lo1.coeff.clone() * lo2.coeff.clone());
            }
        }
        for (m1, c1) in &self.terms {
            for (l2, lo2) in &other.lower {
                let label = format!("{}·{l2}", describe(m1));
                out.add_lower(label, m1.getzler_order() + lo2.order, c1.trace() * lo2.coeff.clone());
            }
        }
        Ok(out)
    }

    fn compose_monomials(&self, m1: &Monomial, c1: &DMatrix<S>, m2: &Monomial, c2: &DMatrix<S>, out: &mut Self) {
        let (parity, word) = match self.algebra {
            Algebra::Clifford => clifford_words(m1.word, m2.word),
            Algebra::Exterior => match wedge_words(m1.word, m2.word) {
                Some(pw) => pw,
                None => return,
            },
        };
        let base = c1 * c2;
        let base = if parity == 1 { -base } else { base };
        // ∂^α x^b = Σ_γ C(α,γ) b!/(b−γ)! x^{b−γ} ∂^{α−γ}
        let n = self.n;
        let mut gamma = vec![0u32; n];
        loop {
            let mut factor = S::one();
            let mut x = m1.x.clone();
            let mut dx = m2.dx.clone();
            for j in 0..n {
                let (a, b, g) = (m1.dx[j], m2.x[j], gamma[j]);
                factor *= S::from_i64(binomial(a, g) * falling(b, g));
                x[j] += b - g;
                dx[j] += a - g;
            }
            let monomial = Monomial { x, word, dx, dt: m1.dt + m2.dt };
            out.add_term(monomial, &base * factor);
            let mut j = 0;
            while j < n {
                gamma[j] += 1;
                if gamma[j] <= m1.dx[j].min(m2.x[j]) {
                    break;
                }
                gamma[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.try_sub(&other.compose(self)?)
    }

    /// Maximal Getzler order over all terms, `None` for the zero operator.
    pub fn getzler_order(&self) -> Option<HalfInt> {
        self.terms
            .keys()
            .map(Monomial::getzler_order)
            .chain(self.lower.values().map(|l| l.order))
            .max()
    }

    /// Top-order part with every word read as exterior multiplication.
    pub fn model_operator(&self) -> Self {
        let mut out = Self::zero(self.n, self.rank, Algebra::Exterior);
        let Some(top) = self.getzler_order() else {
            return out;
        };
        for (m, c) in &self.terms {
            if m.getzler_order() == top {
                out.add_term(m.clone(), c.clone());
            }
        }
        for (label, lo) in &self.lower {
            if lo.order == top {
                out.add_lower(label.clone(), lo.order, lo.coeff.clone());
            }
        }
        out
    }

    /// Reinterpret the word factors in the other algebra through the symbol
    /// map (word ↦ word, coefficient unchanged).
    pub fn with_algebra(&self, algebra: Algebra) -> Self {
        Self { algebra, ..self.clone() }
    }

    pub fn to_canonical_text(&self) -> String {
        let algebra = match self.algebra {
            Algebra::Clifford => "clifford",
            Algebra::Exterior => "exterior",
        };
        let mut out = format!("graded-op n={} rank={} algebra={algebra}\n", self.n, self.rank);
        for (m, c) in &self.terms {
            let rows: Vec<String> = (0..c.nrows())
                .map(|i| (0..c.ncols()).map(|j| c[(i, j)].to_string()).collect::<Vec<_>>().join(", "))
                .collect();
            let _ = writeln!(out, "[{}] * {}", rows.join("; "), m.text());
        }
        for (label, lo) in &self.lower {
            let _ = writeln!(out, "lower {} order={} coeff={}", label, lo.order, lo.coeff);
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).map(|i| (n - i) as i64).product()
}
