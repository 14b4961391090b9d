//! Pointwise Riemann tensors.
//!
//! Convention: `R_{ijkl} = ⟨R(e_i, e_j) e_k, e_l⟩` with
//! `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}`. Under this convention the unit
//! round sphere has `R_{ijij} = −1` and the scalar curvature is
//! `r = Σ_{ij} R_{ijji}`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::multivector::{BasisWord, Multivector};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<S: Scalar> {
    n: usize,
    components: Vec<S>,
}

impl<S: Scalar> CurvatureTensor<S> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            components: vec![S::zero(); n.pow(4)],
        }
    }

    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    /// Build from a full `n⁴` component array (row-major in `i,j,k,l`),
    /// validating the symmetries.
    pub fn from_components(n: usize, components: Vec<S>) -> Result<Self> {
        if components.len() != n.pow(4) {
            return Err(Error::DimensionMismatch {
                expected: n.pow(4),
                found: components.len(),
            });
        }
        let out = Self { n, components };
        out.validate()?;
        Ok(out)
    }

    /// Build from independent entries; each `(i,j,k,l,v)` sets the whole
    /// symmetry orbit of `R_{ijkl} = v`.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, usize, S)]) -> Result<Self> {
        let mut out = Self::zero(n);
        for (i, j, k, l, v) in entries {
            out.set_orbit(*i, *j, *k, *l, v.clone())?;
        }
        out.validate()?;
        Ok(out)
    }

    fn set_orbit(&mut self, i: usize, j: usize, k: usize, l: usize, v: S) -> Result<()> {
        for idx in [i, j, k, l] {
            if idx >= self.n {
                return Err(Error::IndexOutOfRange { index: idx, n: self.n });
            }
        }
        if (i == j || k == l) && !v.is_zero() {
            return Err(Error::SymmetryViolation { i, j, k, l });
        }
        let neg = -v.clone();
        for (p, q, r, s, val) in [
            (i, j, k, l, &v),
            (j, i, k, l, &neg),
            (i, j, l, k, &neg),
            (j, i, l, k, &v),
            (k, l, i, j, &v),
            (l, k, i, j, &neg),
            (k, l, j, i, &neg),
            (l, k, j, i, &v),
        ] {
            let idx = self.index(p, q, r, s);
            self.components[idx] = val.clone();
        }
        Ok(())
    }

    /// Kulkarni–Nomizu product `h ⊙ k` of two symmetric matrices; always an
    /// algebraic curvature tensor (all symmetries plus first Bianchi).
    pub fn kulkarni_nomizu(h: &DMatrix<S>, k: &DMatrix<S>) -> Result<Self> {
        let n = h.nrows();
        for m in [h, k] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
            }
            if !is_symmetric(m) {
                return Err(Error::NotSymmetric);
            }
        }
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let v = h[(i, a)].clone() * k[(j, b)].clone()
                            + h[(j, b)].clone() * k[(i, a)].clone()
                            - h[(i, b)].clone() * k[(j, a)].clone()
                            - h[(j, a)].clone() * k[(i, b)].clone();
                        let idx = out.index(i, j, a, b);
                        out.components[idx] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Unit round sphere `Sⁿ`: `R = −½ g ⊙ g`.
    pub fn round_sphere(n: usize) -> Self {
        let g = DMatrix::<S>::identity(n, n);
        let half = S::from_ratio(-1, 2);
        Self::kulkarni_nomizu(&g, &g)
            .expect("identity is symmetric")
            .scale(&half)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        &self.components[self.index(i, j, k, l)]
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            n: self.n,
            components: self.components.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(Self {
            n: self.n,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn to_f64(&self) -> CurvatureTensor<f64> {
        CurvatureTensor { n: self.n, components: self.components.iter().map(S::to_f64).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Antisymmetry in each pair and pair-exchange symmetry.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        let ok = v.near(&-self.get(j, i, k, l).clone())
                            && v.near(&-self.get(i, j, l, k).clone())
                            && v.near(self.get(k, l, i, j));
                        if !ok {
                            return Err(Error::SymmetryViolation { i, j, k, l });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// First Bianchi identity `R_{ijkl} + R_{jkil} + R_{kijl} = 0`.
    pub fn satisfies_bianchi(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    (0..n).all(|l| {
                        let s = self.get(i, j, k, l).clone()
                            + self.get(j, k, i, l).clone()
                            + self.get(k, i, j, l).clone();
                        s.near_zero()
                    })
                })
            })
        })
    }

    /// `r = Σ_{ij} R_{ijji}`.
    pub fn scalar_curvature(&self) -> S {
        let mut acc = S::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.get(i, j, j, i).clone();
            }
        }
        acc
    }

    /// Restriction to the leading `a × a × a × a` block (the tangent frame).
    pub fn tangent_block(&self, a: usize) -> Result<Self> {
        if a > self.n {
            return Err(Error::IndexOutOfRange { index: a, n: self.n });
        }
        let mut out = Self::zero(a);
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    for l in 0..a {
                        let idx = out.index(i, j, k, l);
                        out.components[idx] = self.get(i, j, k, l).clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Curvature 2-form matrix `Ω_{kl} = ½ Σ_{ij} R_{ijkl} e^i∧e^j`, as
    /// `e`-only multivectors in dimension `n`.
    pub fn two_form_matrix(&self) -> FormMatrix<S> {
        let n = self.n;
        let mut entries = vec![vec![Multivector::zero(n); n]; n];
        for (k, row) in entries.iter_mut().enumerate() {
            for (l, entry) in row.iter_mut().enumerate() {
                for i in 0..n {
                    for j in (i + 1)..n {
                        entry.add_term(BasisWord::new((1 << i) | (1 << j), 0), self.get(i, j, k, l).clone());
                    }
                }
            }
        }
        FormMatrix { size: n, entries }
    }

    /// Returns the components in `(i, j, k, l, value)` form for `i<j`, `k<l`,
    /// `(i,j) ≤ (k,l)`, skipping zeros.
    pub fn independent_entries(&self) -> Vec<(usize, usize, usize, usize, S)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    for l in (k + 1)..n {
                        if (i, j) <= (k, l) && !self.get(i, j, k, l).is_zero() {
                            out.push((i, j, k, l, self.get(i, j, k, l).clone()));
                        }
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn is_symmetric<S: Scalar>(m: &DMatrix<S>) -> bool {
    m.is_square()
        && (0..m.nrows()).all(|i| (0..i).all(|j| m[(i, j)].near(&m[(j, i)])))
}

pub(crate) fn is_antisymmetric<S: Scalar>(m: &DMatrix<S>) -> bool {
    m.is_square()
        && (0..m.nrows()).all(|i| (0..=i).all(|j| m[(i, j)].near(&-m[(j, i)].clone())))
}

/// Antisymmetric matrix whose entries are even-or-odd forms on `Λ(m)`
/// (`e`-only multivectors).
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix<S: Scalar> {
    size: usize,
    entries: Vec<Vec<Multivector<S>>>,
}

impl<S: Scalar> FormMatrix<S> {
    pub fn new(entries: Vec<Vec<Multivector<S>>>) -> Result<Self> {
        let size = entries.len();
        for row in &entries {
            if row.len() != size {
                return Err(Error::DimensionMismatch { expected: size, found: row.len() });
            }
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, entry) in row.iter().enumerate().take(i + 1) {
                let sum = entry.try_add(&entries[j][i])?;
                let violated = if S::EXACT { !sum.is_zero() } else { sum.max_abs() > 1e-12 };
                if violated {
                    return Err(Error::NotAntisymmetric);
                }
            }
        }
        Ok(Self { size, entries })
    }

    /// The 1-form-valued matrix `Σ_i e^i ⊗ A_i` on `Λ(form_dim)`.
    pub fn from_one_form(form_dim: usize, components: &[DMatrix<S>]) -> Result<Self> {
        if components.len() != form_dim {
            return Err(Error::DimensionMismatch { expected: form_dim, found: components.len() });
        }
        let size = components.first().map_or(0, |c| c.nrows());
        let mut entries = vec![vec![Multivector::zero(form_dim); size]; size];
        for (i, comp) in components.iter().enumerate() {
            if !is_antisymmetric(comp) || comp.nrows() != size {
                return Err(Error::NotAntisymmetric);
            }
            for (p, row) in entries.iter_mut().enumerate() {
                for (q, entry) in row.iter_mut().enumerate() {
                    entry.add_term(BasisWord::new(1 << i, 0), comp[(p, q)].clone());
                }
            }
        }
        Ok(Self { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Dimension of the exterior algebra holding the entries (0 when empty).
    pub fn form_dim(&self) -> usize {
        self.entries.first().and_then(|r| r.first()).map_or(0, |e| e.dim())
    }

    pub fn entry(&self, i: usize, j: usize) -> &Multivector<S> {
        &self.entries[i][j]
    }

    /// Leading `a × a` block.
    pub fn block(&self, a: usize) -> Self {
        Self {
            size: a,
            entries: self.entries[..a].iter().map(|r| r[..a].to_vec()).collect(),
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            size: self.size,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|e| e.scale(factor)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch { expected: self.size, found: other.size });
        }
        let mut entries = self.entries.clone();
        for (row, orow) in entries.iter_mut().zip(&other.entries) {
            for (e, o) in row.iter_mut().zip(orow) {
                *e = e.try_add(o)?;
            }
        }
        Ok(Self { size: self.size, entries })
    }
}
