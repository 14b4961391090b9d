//! `C(V,q) ⊗̂ C(V,−q)` with its representation on `ΛV`.
//!
//! Generators satisfy `c(e_i)c(e_j) + c(e_j)c(e_i) = −2δ_ij` and
//! `ĉ(e_i)ĉ(e_j) + ĉ(e_j)ĉ(e_i) = +2δ_ij`; the two families anticommute.
//! Elements are kept in normal order: every `c` precedes every `ĉ`, indices
//! increasing inside each family. A normal-ordered word is a [`BasisWord`]
//! whose `e` mask selects the `c` generators and whose `ehat` mask selects
//! the `ĉ` generators.
//!
//! On `ΛV` the generators act by `c(e_j) = ε(e_j) − ι(e_j)` and
//! `ĉ(e_j) = ε(e_j) + ι(e_j)`, so every word acts as a signed permutation of
//! the subset basis.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::multivector::{
    full_mask, mask_indices, reorder_parity, word_text, BasisWord, Mask, Multivector, MAX_DIM,
};
use crate::scalar::{parity_sign, Scalar};

/// Product of two normal-ordered words: sign parity and resulting word.
pub fn clifford_words(x: BasisWord, y: BasisWord) -> (u32, BasisWord) {
    let cross = (x.ehat.count_ones() * y.e.count_ones()) & 1;
    // c(e_i)^2 = -1 contributes one sign per repeated c index; ĉ(e_i)^2 = +1.
    let c_parity = reorder_parity(x.e, y.e) ^ ((x.e & y.e).count_ones() & 1);
    let chat_parity = reorder_parity(x.ehat, y.ehat);
    (
        cross ^ c_parity ^ chat_parity,
        BasisWord::new(x.e ^ y.e, x.ehat ^ y.ehat),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupertraceMethod {
    /// `Σ_S (−1)^{|S|} represent(x)[S,S]`.
    Matrix,
    /// `(−1)^{n/2} 2ⁿ T(σ(x))`; even `n` only.
    Berezin,
}

/// Normal-ordered element of `C(V,q) ⊗̂ C(V,−q)`.
#[derive(Clone, PartialEq)]
pub struct CliffordElement<S: Scalar> {
    n: usize,
    terms: BTreeMap<BasisWord, S>,
}

impl<S: Scalar> CliffordElement<S> {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, value: S) -> Self {
        Self::word(n, BasisWord::ONE, value)
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, S::one())
    }

    pub fn word(n: usize, word: BasisWord, coefficient: S) -> Self {
        assert!(word.fits(n), "word {word:?} exceeds dimension {n}");
        let mut out = Self::zero(n);
        out.add_term(word, coefficient);
        out
    }

    /// `c(e_i)`, 0-based.
    pub fn c(n: usize, i: usize) -> Self {
        Self::word(n, BasisWord::new(1 << i, 0), S::one())
    }

    /// `ĉ(e_i)`, 0-based.
    pub fn chat(n: usize, i: usize) -> Self {
        Self::word(n, BasisWord::new(0, 1 << i), S::one())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisWord, &S)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn coefficient(&self, word: BasisWord) -> S {
        self.terms.get(&word).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, word: BasisWord, coefficient: S) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing += coefficient;
                if existing.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, coefficient);
            }
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(*w, c.clone() * factor.clone());
        }
        out
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    /// Clifford product reduced to normal order.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (wx, cx) in &self.terms {
            for (wy, cy) in &other.terms {
                let (parity, w) = clifford_words(*wx, *wy);
                let c = cx.clone() * cy.clone();
                out.add_term(w, if parity == 1 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Parity of the element when it is homogeneous, `None` for mixed parity
    /// (zero counts as even).
    pub fn parity(&self) -> Option<usize> {
        let mut parities = self.terms.keys().map(|w| w.degree() % 2);
        let first = parities.next().unwrap_or(0);
        parities.all(|p| p == first).then_some(first)
    }

    /// The representation `c ⊗ ĉ` on `ΛV`.
    pub fn represent(&self) -> EndMatrix<S> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::from_element(dim, dim, S::zero());
        for (w, coef) in &self.terms {
            for col in 0..dim {
                let (parity, row) = act_word(*w, col as Mask);
                let entry = &mut m[(row as usize, col)];
                if parity == 1 {
                    *entry -= coef.clone();
                } else {
                    *entry += coef.clone();
                }
            }
        }
        EndMatrix { n: self.n, matrix: m }
    }

    /// Symbol map `σ`: normal-ordered word ↦ wedge monomial.
    pub fn symbol(&self) -> Multivector<S> {
        let mut out = Multivector::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(*w, c.clone());
        }
        out
    }

    /// Inverse of [`symbol`](Self::symbol).
    pub fn quantize(x: &Multivector<S>) -> Self {
        let mut out = Self::zero(x.dim());
        for (w, c) in x.terms() {
            out.add_term(w, c.clone());
        }
        out
    }

    pub fn supertrace(&self, method: SupertraceMethod) -> Result<S> {
        match method {
            SupertraceMethod::Matrix => Ok(self.represent().supertrace()),
            SupertraceMethod::Berezin => {
                if self.n % 2 == 1 {
                    return Err(Error::OddDimension(self.n));
                }
                let top = self.coefficient(BasisWord::full(self.n));
                let scale = parity_sign::<S>(self.n / 2) * S::from_i64(1 << self.n);
                Ok(scale * top)
            }
        }
    }

    pub fn to_canonical_text(&self) -> String {
        let mut out = format!("clifford n={}\n", self.n);
        for (w, c) in &self.terms {
            out.push_str(&format!("{} * {}\n", c, word_text(*w, "c", "chat")));
        }
        out
    }
}

/// Action of a generator on a subset basis vector: `(sign parity, image)`.
fn act_generator(j: usize, hat: bool, m: Mask) -> (u32, Mask) {
    let below = (m & ((1 << j) - 1)).count_ones() & 1;
    if m & (1 << j) == 0 {
        // ε(e_j)
        (below, m | (1 << j))
    } else {
        // ∓ι(e_j): minus for c, plus for ĉ
        (below ^ u32::from(!hat), m & !(1 << j))
    }
}

/// Action of a normal-ordered word on a subset basis vector; words act as
/// signed permutations.
fn act_word(word: BasisWord, mut m: Mask) -> (u32, Mask) {
    let mut parity = 0;
    // rightmost generator acts first: ĉ's in decreasing index, then c's
    let chats: Vec<usize> = mask_indices(word.ehat).collect();
    for &j in chats.iter().rev() {
        let (p, next) = act_generator(j, true, m);
        parity ^= p;
        m = next;
    }
    let cs: Vec<usize> = mask_indices(word.e).collect();
    for &j in cs.iter().rev() {
        let (p, next) = act_generator(j, false, m);
        parity ^= p;
        m = next;
    }
    (parity, m)
}

impl<S: Scalar> fmt::Debug for CliffordElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}) {}", word_text(*w, "c", "chat")))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Dense endomorphism of `ΛV`, rows and columns indexed by subset masks.
#[derive(Clone, Debug, PartialEq)]
pub struct EndMatrix<S: Scalar> {
    pub n: usize,
    pub matrix: DMatrix<S>,
}

impl<S: Scalar> EndMatrix<S> {
    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        Self {
            n,
            matrix: DMatrix::from_fn(dim, dim, |i, j| if i == j { S::one() } else { S::zero() }),
        }
    }

    pub fn supertrace(&self) -> S {
        let mut acc = S::zero();
        for m in 0..self.matrix.nrows() {
            let d = self.matrix[(m, m)].clone();
            if (m as Mask).count_ones().is_multiple_of(2) {
                acc += d;
            } else {
                acc -= d;
            }
        }
        acc
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().abs())
            .fold(0.0, f64::max)
    }
}

/// Every normal-ordered basis word of `C(V,q) ⊗̂ C(V,−q)` in dimension `n`.
pub fn all_words(n: usize) -> impl Iterator<Item = BasisWord> {
    let full = full_mask(n);
    (0..=full).flat_map(move |e| (0..=full).map(move |ehat| BasisWord::new(e, ehat)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Cl = CliffordElement<Rational>;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn generator_squares() {
        let c1 = Cl::c(2, 0);
        let h1 = Cl::chat(2, 0);
        assert_eq!(c1.multiply(&c1).unwrap(), Cl::scalar(2, r(-1)));
        assert_eq!(h1.multiply(&h1).unwrap(), Cl::one(2));
        let anti = c1.multiply(&h1).unwrap().try_add(&h1.multiply(&c1).unwrap()).unwrap();
        assert!(anti.is_zero());
    }

    #[test]
    fn distinct_generators_anticommute() {
        for n in 1..=3 {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let a = Cl::c(n, i);
                    let b = Cl::c(n, j);
                    let s = a.multiply(&b).unwrap().try_add(&b.multiply(&a).unwrap()).unwrap();
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn one_dimensional_representation() {
        let c = Cl::c(1, 0).represent().matrix;
        assert_eq!(c, DMatrix::from_row_slice(2, 2, &[r(0), r(-1), r(1), r(0)]));
        let h = Cl::chat(1, 0).represent().matrix;
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[r(0), r(1), r(1), r(0)]));
        assert_eq!(Cl::one(3).represent(), EndMatrix::identity(3));
    }

    #[test]
    fn symbol_map_examples() {
        let c12 = Cl::c(2, 0).multiply(&Cl::c(2, 1)).unwrap();
        assert_eq!(c12.symbol(), Multivector::monomial(2, BasisWord::new(0b11, 0), r(1)));
        assert_eq!(Cl::chat(2, 0).symbol(), Multivector::ehat(2, 0));
        assert_eq!(Cl::one(2).symbol(), Multivector::one(2));
    }

    #[test]
    fn supertrace_examples() {
        let top = Cl::word(2, BasisWord::full(2), r(1));
        for method in [SupertraceMethod::Matrix, SupertraceMethod::Berezin] {
            assert_eq!(top.supertrace(method).unwrap(), r(-4));
            let mixed = Cl::c(2, 0).multiply(&Cl::chat(2, 0)).unwrap();
            assert_eq!(mixed.supertrace(method).unwrap(), r(0));
            assert_eq!(Cl::one(2).supertrace(method).unwrap(), r(0));
        }
        assert_eq!(Cl::one(3).supertrace(SupertraceMethod::Matrix).unwrap(), r(0));
        assert_eq!(
            Cl::one(3).supertrace(SupertraceMethod::Berezin),
            Err(Error::OddDimension(3))
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(Cl::c(2, 0).multiply(&Cl::c(3, 0)).is_err());
    }

    #[test]
    fn canonical_text() {
        let x = Cl::c(2, 1).multiply(&Cl::chat(2, 0)).unwrap().scale(&r(3));
        assert_eq!(x.to_canonical_text(), "clifford n=2\n3 * c{2} ^ chat{1}\n");
    }
}
