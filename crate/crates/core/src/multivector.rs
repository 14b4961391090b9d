//! The bigraded exterior algebra `Λ(n) ⊗̂ Λ(n)`.
//!
//! A basis element is `e^{i_1}∧…∧e^{i_k} ⊗ ê^{j_1}∧…∧ê^{j_l}` with strictly
//! increasing indices, stored as a pair of bitmasks ([`BasisWord`]). All
//! generators `e^i`, `ê^j` anticommute, so the graded tensor product sign
//! `(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd` falls out of plain reordering.
//!
//! Indices are 0-based in the API and 1-based in the text form.
//!
//! The frame is split as tangent `0..a` followed by normal `a..n`; a
//! [`Bigrade`] `((k₁,l̄₁),(k₂,l̄₂))` counts tangent/normal indices in the `e`
//! and `ê` factors respectively.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};

pub type Mask = u32;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 16;

/// A pair of index sets: the `e` (or `c`) part and the `ê` (or `ĉ`) part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BasisWord {
    pub e: Mask,
    pub ehat: Mask,
}

impl BasisWord {
    pub const ONE: BasisWord = BasisWord { e: 0, ehat: 0 };

    pub fn new(e: Mask, ehat: Mask) -> Self {
        Self { e, ehat }
    }

    pub fn from_indices(e: &[usize], ehat: &[usize]) -> Self {
        Self {
            e: indices_to_mask(e),
            ehat: indices_to_mask(ehat),
        }
    }

    /// The word with every index in both factors.
    pub fn full(n: usize) -> Self {
        Self::new(full_mask(n), full_mask(n))
    }

    pub fn degree(self) -> usize {
        (self.e.count_ones() + self.ehat.count_ones()) as usize
    }

    pub fn fits(self, n: usize) -> bool {
        let allowed = full_mask(n);
        self.e & !allowed == 0 && self.ehat & !allowed == 0
    }
}

pub fn full_mask(n: usize) -> Mask {
    if n >= 32 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub fn indices_to_mask(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn mask_indices(mask: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Parity of the number of transpositions needed to sort the concatenation
/// of the ordered sets `a` then `b` (pairs `i ∈ a`, `j ∈ b` with `i > j`).
pub fn reorder_parity(a: Mask, b: Mask) -> u32 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    swaps & 1
}

/// Exterior product of two basis words: `None` when an index repeats,
/// otherwise the parity of the sign and the resulting word.
pub fn wedge_words(x: BasisWord, y: BasisWord) -> Option<(u32, BasisWord)> {
    if x.e & y.e != 0 || x.ehat & y.ehat != 0 {
        return None;
    }
    let parity = reorder_parity(x.e, y.e)
        ^ reorder_parity(x.ehat, y.ehat)
        ^ ((x.ehat.count_ones() * y.e.count_ones()) & 1);
    Some((parity, BasisWord::new(x.e | y.e, x.ehat | y.ehat)))
}

/// Tangent/normal splitting of the frame: indices `0..a` tangent, `a..n` normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameSplit {
    pub a: usize,
    pub b: usize,
}

impl FrameSplit {
    pub fn new(n: usize, a: usize) -> Result<Self> {
        if a > n {
            return Err(Error::InvalidSelector(format!("tangent dimension {a} exceeds n = {n}")));
        }
        Ok(Self { a, b: n - a })
    }

    pub fn n(&self) -> usize {
        self.a + self.b
    }

    pub fn tangent_mask(&self) -> Mask {
        full_mask(self.a)
    }

    pub fn normal_mask(&self) -> Mask {
        full_mask(self.n()) & !full_mask(self.a)
    }

    pub fn bigrade_of(&self, word: BasisWord) -> Bigrade {
        let t = self.tangent_mask();
        let nm = self.normal_mask();
        Bigrade {
            k1: (word.e & t).count_ones() as usize,
            l1: (word.e & nm).count_ones() as usize,
            k2: (word.ehat & t).count_ones() as usize,
            l2: (word.ehat & nm).count_ones() as usize,
        }
    }

    /// Every admissible selector `0 ≤ k ≤ a`, `0 ≤ l̄ ≤ b`.
    pub fn selectors(&self) -> impl Iterator<Item = Bigrade> + '_ {
        let (a, b) = (self.a, self.b);
        (0..=a).flat_map(move |k1| {
            (0..=b).flat_map(move |l1| {
                (0..=a).flat_map(move |k2| (0..=b).map(move |l2| Bigrade { k1, l1, k2, l2 }))
            })
        })
    }

    pub fn with_grade(self, grade: Bigrade) -> Result<BigradeSplit> {
        BigradeSplit::new(self, grade)
    }
}

/// Component selector `((k₁, l̄₁), (k₂, l̄₂))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bigrade {
    pub k1: usize,
    pub l1: usize,
    pub k2: usize,
    pub l2: usize,
}

impl Bigrade {
    pub fn new(k1: usize, l1: usize, k2: usize, l2: usize) -> Self {
        Self { k1, l1, k2, l2 }
    }
}

/// A frame splitting together with a validated component selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BigradeSplit {
    pub frame: FrameSplit,
    pub grade: Bigrade,
}

impl BigradeSplit {
    pub fn new(frame: FrameSplit, grade: Bigrade) -> Result<Self> {
        if grade.k1 > frame.a || grade.k2 > frame.a || grade.l1 > frame.b || grade.l2 > frame.b {
            return Err(Error::InvalidSelector(format!(
                "{grade:?} outside a = {}, b = {}",
                frame.a, frame.b
            )));
        }
        Ok(Self { frame, grade })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BerezinMode {
    /// Coefficient of `ω = e¹∧…∧eⁿ∧ê¹∧…∧êⁿ`.
    Full,
    /// Coefficient of `e¹∧…∧e^a∧ê¹∧…∧ê^a` inside the `((*,0),(*,0))` component.
    Tangent { a: usize },
}

/// Element of `Λ(n) ⊗̂ Λ(n)` in canonical form: no stored zeros.
#[derive(Clone, PartialEq)]
pub struct Multivector<S: Scalar> {
    n: usize,
    terms: BTreeMap<BasisWord, S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, value: S) -> Self {
        Self::monomial(n, BasisWord::ONE, value)
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, S::one())
    }

    pub fn monomial(n: usize, word: BasisWord, coefficient: S) -> Self {
        let mut out = Self::zero(n);
        assert!(word.fits(n), "basis word {word:?} exceeds dimension {n}");
        out.add_term(word, coefficient);
        out
    }

    /// `e^i` (0-based).
    pub fn e(n: usize, i: usize) -> Self {
        Self::monomial(n, BasisWord::new(1 << i, 0), S::one())
    }

    /// `ê^i` (0-based).
    pub fn ehat(n: usize, i: usize) -> Self {
        Self::monomial(n, BasisWord::new(0, 1 << i), S::one())
    }

    /// The volume element `ω`.
    pub fn volume(n: usize) -> Self {
        Self::monomial(n, BasisWord::full(n), S::one())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisWord, &S)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn coefficient(&self, word: BasisWord) -> S {
        self.terms.get(&word).cloned().unwrap_or_else(S::zero)
    }

    pub fn scalar_part(&self) -> S {
        self.coefficient(BasisWord::ONE)
    }

    /// Accumulate `coefficient · word`, dropping the entry if it cancels.
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
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect(),
        }
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (wx, cx) in &self.terms {
            for (wy, cy) in &other.terms {
                if let Some((parity, w)) = wedge_words(*wx, *wy) {
                    let c = cx.clone() * cy.clone();
                    out.add_term(w, if parity == 1 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Keep only the terms accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(BasisWord) -> bool) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(**w))
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// Projection onto the `((k₁,l̄₁),(k₂,l̄₂))` component.
    pub fn grade_component(&self, split: &BigradeSplit) -> Result<Self> {
        if split.frame.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: split.frame.n(),
            });
        }
        Ok(self.filter(|w| split.frame.bigrade_of(w) == split.grade))
    }

    /// Projection onto total degree `deg`.
    pub fn degree_component(&self, deg: usize) -> Self {
        self.filter(|w| w.degree() == deg)
    }

    /// Berezin functional.
    pub fn berezin(&self, mode: BerezinMode) -> S {
        match mode {
            BerezinMode::Full => self.coefficient(BasisWord::full(self.n)),
            BerezinMode::Tangent { a } => {
                let t = full_mask(a.min(self.n));
                self.coefficient(BasisWord::new(t, t))
            }
        }
    }

    /// `exp` of a nilpotent element built from terms of positive even degree.
    /// The series terminates once a power vanishes.
    pub fn exp_even(&self) -> Result<Self> {
        if let Some((w, _)) = self.terms().find(|(w, _)| w.degree() == 0 || w.degree() % 2 == 1) {
            return Err(Error::NotEvenNilpotent { degree: w.degree() });
        }
        let mut out = Self::one(self.n);
        let mut power = Self::one(self.n);
        let mut k = 0usize;
        loop {
            power = power.wedge(self)?;
            k += 1;
            if power.is_zero() {
                break;
            }
            let inv = S::one() / factorial::<S>(k);
            out = out.try_add(&power.scale(&inv))?;
        }
        Ok(out)
    }

    /// Largest absolute coefficient (as f64); zero for the zero element.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        let mut out = Multivector::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(*w, f(c));
        }
        out
    }

    pub fn to_f64(&self) -> Multivector<f64> {
        self.map_scalars(|c| c.to_f64())
    }

    /// Canonical text: a header line then one `coef * e{..} ^ ehat{..}` line
    /// per term, in basis-word order, 1-based indices.
    pub fn to_canonical_text(&self) -> String {
        let mut out = format!("multivector n={}\n", self.n);
        for (w, c) in &self.terms {
            out.push_str(&format!("{} * {}\n", c, word_text(*w, "e", "ehat")));
        }
        out
    }

    pub fn from_canonical_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let n: usize = header
            .trim()
            .strip_prefix("multivector n=")
            .and_then(|v| v.parse().ok())
            .ok_or(Error::Parse {
                line: 1,
                message: format!("bad header `{header}`"),
            })?;
        let mut out = Self::zero(n);
        for (lineno, line) in lines {
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let (coef, word) = line
                .split_once(" * ")
                .ok_or_else(|| err(format!("missing ` * ` in `{line}`")))?;
            let c = S::parse_text(coef).ok_or_else(|| err(format!("bad coefficient `{coef}`")))?;
            let word = parse_word(word, "e", "ehat").ok_or_else(|| err(format!("bad word `{word}`")))?;
            if !word.fits(n) {
                return Err(err(format!("index beyond n = {n}")));
            }
            out.add_term(word, c);
        }
        Ok(out)
    }
}

pub(crate) fn word_text(word: BasisWord, left: &str, right: &str) -> String {
    let list = |m: Mask| {
        mask_indices(m)
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("{left}{{{}}} ^ {right}{{{}}}", list(word.e), list(word.ehat))
}

pub(crate) fn parse_word(text: &str, left: &str, right: &str) -> Option<BasisWord> {
    let (l, r) = text.trim().split_once(" ^ ")?;
    let parse_set = |s: &str, tag: &str| -> Option<Mask> {
        let inner = s.trim().strip_prefix(tag)?.strip_prefix('{')?.strip_suffix('}')?;
        let mut mask = 0;
        for part in inner.split(',').filter(|p| !p.is_empty()) {
            let i: usize = part.trim().parse().ok()?;
            if i == 0 || i > MAX_DIM || mask & (1 << (i - 1)) != 0 {
                return None;
            }
            mask |= 1 << (i - 1);
        }
        Some(mask)
    };
    Some(BasisWord::new(parse_set(l, left)?, parse_set(r, right)?))
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}) {}", word_text(*w, "e", "ehat")))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> std::ops::Add for &Multivector<S> {
    type Output = Multivector<S>;
    fn add(self, rhs: Self) -> Multivector<S> {
        self.try_add(rhs).expect("multivector dimension mismatch")
    }
}

impl<S: Scalar> std::ops::Sub for &Multivector<S> {
    type Output = Multivector<S>;
    fn sub(self, rhs: Self) -> Multivector<S> {
        self.try_sub(rhs).expect("multivector dimension mismatch")
    }
}

impl<S: Scalar> std::ops::Neg for &Multivector<S> {
    type Output = Multivector<S>;
    fn neg(self) -> Multivector<S> {
        self.neg_ref()
    }
}
