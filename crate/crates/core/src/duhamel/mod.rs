//! Matrix surrogates for the commutator expansion of `e^{−sH}B`, the
//! Duhamel series of `e^{−t(H+L)}` and the `σ`-supertrace.

mod simplex;

pub use simplex::SimplexQuadrature;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const SIMPLEX_TOL: f64 = 1e-9;

/// Dense real operator on a finite-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteOperator {
    matrix: DMatrix<f64>,
    /// Eigenvalues and orthonormal eigenvectors when asserted Hermitian.
    spectral: Option<(DVector<f64>, DMatrix<f64>)>,
}

impl FiniteOperator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() == 0 || !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows().max(1), found: matrix.ncols() });
        }
        Ok(Self { matrix, spectral: None })
    }

    /// Asserts symmetry; heat factors then use the eigendecomposition.
    pub fn hermitian(matrix: DMatrix<f64>) -> Result<Self> {
        let mut op = Self::new(matrix)?;
        let scale = op.matrix.amax().max(1.0);
        if (&op.matrix - op.matrix.transpose()).amax() > HERMITIAN_TOL * scale {
            return Err(Error::NotSymmetric);
        }
        let eig = SymmetricEigen::new(op.matrix.clone());
        op.spectral = Some((eig.eigenvalues, eig.eigenvectors));
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.spectral.is_some()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// `e^{−sH}`.
    pub fn heat(&self, s: f64) -> DMatrix<f64> {
        match &self.spectral {
            Some((values, vectors)) => {
                let d = values.map(|l| (-s * l).exp());
                vectors * DMatrix::from_diagonal(&d) * vectors.transpose()
            }
            None => (&self.matrix * -s).exp(),
        }
    }
}

/// Diagonal `±1` involution defining `Str[A] = Σ_i g_i A_ii`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading(Vec<i8>);

impl Grading {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::Unsupported("grading entries must be ±1".into()));
        }
        Ok(Self(signs))
    }

    /// `+1` on the first `even` basis vectors, `−1` on the rest.
    pub fn split(even: usize, odd: usize) -> Self {
        Self(std::iter::repeat_n(1, even).chain(std::iter::repeat_n(-1, odd)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn supertrace(&self, a: &DMatrix<f64>) -> Result<f64> {
        if a.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.nrows() });
        }
        Ok(self.0.iter().enumerate().map(|(i, g)| *g as f64 * a[(i, i)]).sum())
    }
}

/// `B^{[l]} = [H, B^{[l−1]}]`, `B^{[0]} = B`.
pub fn iterated_commutator(h: &FiniteOperator, b: &FiniteOperator, l: usize) -> Result<DMatrix<f64>> {
    h.check(b)?;
    let mut acc = b.matrix.clone();
    for _ in 0..l {
        acc = &h.matrix * &acc - &acc * &h.matrix;
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct CommutatorExpansion {
    /// `Σ_{l<N} ((−1)^l/l!) s^l B^{[l]} e^{−sH}`.
    pub approximation: DMatrix<f64>,
    /// Frobenius norm of `e^{−sH}B − approximation`.
    pub remainder_norm: f64,
}

pub fn commutator_expansion(h: &FiniteOperator, b: &FiniteOperator, s: f64, n: usize) -> Result<CommutatorExpansion> {
    h.check(b)?;
    if !(s > 0.0) {
        return Err(Error::NonPositiveTime(s));
    }
    if n == 0 {
        return Err(Error::InvalidCutoff(0));
    }
    let heat = h.heat(s);
    let mut approximation = DMatrix::zeros(h.dim(), h.dim());
    let mut bl = b.matrix.clone();
    let mut coef = 1.0;
    for l in 0..n {
        if l > 0 {
            bl = &h.matrix * &bl - &bl * &h.matrix;
            coef *= -s / l as f64;
        }
        approximation += &bl * &heat * coef;
    }
    let remainder_norm = (&heat * &b.matrix - &approximation).norm();
    Ok(CommutatorExpansion { approximation, remainder_norm })
}

/// `B^{[N]}(s) = ∫_{Δ_N} e^{−u₁sH} B^{[N]} e^{−(1−u₁)sH}`, `u₁` the first
/// barycentric coordinate, by Grundmann–Möller rules of increasing degree.
pub fn commutator_remainder(h: &FiniteOperator, b: &FiniteOperator, s: f64, n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::InvalidCutoff(0));
    }
    let bn = iterated_commutator(h, b, n)?;
    let integrate = |degree: usize| -> DMatrix<f64> {
        let rule = SimplexQuadrature::grundmann_moller(n, degree);
        let mut acc = DMatrix::zeros(h.dim(), h.dim());
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            acc += h.heat(x[0] * s) * &bn * h.heat((1.0 - x[0]) * s) * *w;
        }
        acc
    };
    let mut prev = integrate(1);
    for degree in 2..=12 {
        let next = integrate(degree);
        if (&next - &prev).amax() < 1e-14 * next.amax().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence("commutator remainder".into()))
}

/// `A + σB` over matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaMatrix {
    pub even: DMatrix<f64>,
    pub odd: DMatrix<f64>,
}

impl SigmaMatrix {
    pub fn even(a: DMatrix<f64>) -> Self {
        let odd = DMatrix::zeros(a.nrows(), a.ncols());
        Self { even: a, odd }
    }

    pub fn odd(b: DMatrix<f64>) -> Self {
        let even = DMatrix::zeros(b.nrows(), b.ncols());
        Self { even, odd: b }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            even: &self.even * &other.even + &self.odd * &other.odd,
            odd: &self.even * &other.odd + &self.odd * &other.even,
        }
    }

    fn left(&self, m: &DMatrix<f64>) -> Self {
        Self { even: m * &self.even, odd: m * &self.odd }
    }

    fn right(&self, m: &DMatrix<f64>) -> Self {
        Self { even: &self.even * m, odd: &self.odd * m }
    }

    /// `exp(−t(A + σB)) = ((E₊ + E₋)/2, (E₊ − E₋)/2)`, `E_± = exp(−t(A ± B))`.
    pub fn heat(&self, t: f64) -> Self {
        let plus = (&(&self.even + &self.odd) * -t).exp();
        let minus = (&(&self.even - &self.odd) * -t).exp();
        Self { even: (&plus + &minus) * 0.5, odd: (plus - minus) * 0.5 }
    }
}

/// `Str^σ[A + σB] = Str[B]`.
pub fn sigma_supertrace(x: &SigmaMatrix, grading: &Grading) -> Result<f64> {
    grading.supertrace(&x.odd)
}

#[derive(Clone, Debug)]
pub struct DuhamelSeries {
    /// `(−t)^k ∫_{Δ_k} …` for `k = 0..=K`.
    pub terms: Vec<f64>,
    pub value: f64,
}

/// Which supertrace closes the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    /// `Str` of the even part.
    Plain,
    /// `Str^σ`, the odd part.
    Sigma,
}

/// `Σ_{k≤K} (−t)^k ∫_{Δ_k} Str[Φ C e^{−t₀tH} L e^{−t₁tH} ⋯ L e^{−t_k tH}]`.
#[allow(clippy::too_many_arguments)]
pub fn duhamel_series(
    h: &FiniteOperator,
    l: &SigmaMatrix,
    c: &DMatrix<f64>,
    phi: &DMatrix<f64>,
    grading: &Grading,
    t: f64,
    k_max: usize,
    kind: TraceKind,
) -> Result<DuhamelSeries> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let d = h.dim();
    for m in [&l.even, &l.odd, c, phi] {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: m.nrows() });
        }
    }
    let prefix = phi * c;
    let heat = |u: f64| h.heat(u * t);
    let mut terms = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let (integral, _) = SimplexQuadrature::adaptive(k, SIMPLEX_TOL, |nodes| {
            let mut chain = SigmaMatrix::even(prefix.clone()).right(&heat(nodes[0]));
            for &u in &nodes[1..] {
                chain = chain.mul(l).right(&heat(u));
            }
            let closing = match kind {
                TraceKind::Plain => &chain.even,
                TraceKind::Sigma => &chain.odd,
            };
            grading.supertrace(closing)
        })?;
        terms.push((-t).powi(k as i32) * integral);
    }
    let value = terms.iter().sum();
    Ok(DuhamelSeries { terms, value })
}

/// Direct value `Str[Φ C e^{−t(H+L)}]` (or `Str^σ`) from the matrix exponential.
pub fn duhamel_direct(
    h: &FiniteOperator,
    l: &SigmaMatrix,
    c: &DMatrix<f64>,
    phi: &DMatrix<f64>,
    grading: &Grading,
    t: f64,
    kind: TraceKind,
) -> Result<f64> {
    let total = SigmaMatrix { even: &h.matrix + &l.even, odd: l.odd.clone() };
    let e = total.heat(t).left(&(phi * c));
    match kind {
        TraceKind::Plain => grading.supertrace(&e.even),
        TraceKind::Sigma => grading.supertrace(&e.odd),
    }
}
