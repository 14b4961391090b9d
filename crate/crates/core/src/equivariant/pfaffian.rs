//! Pfaffians over commutative rings of even forms, and their first-order
//! variation via dual numbers `x + εy`, `ε² = 0`.

use nalgebra::DMatrix;

use super::curvature::{is_antisymmetric, FormMatrix};
use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::scalar::Scalar;

trait Ring: Clone {
    fn mul(&self, other: &Self) -> Result<Self>;
    fn add(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
}

impl<S: Scalar> Ring for Multivector<S> {
    fn mul(&self, other: &Self) -> Result<Self> {
        self.wedge(other)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// `value + ε·tangent`. Only `value` needs to be even for the product to be
/// order independent.
#[derive(Clone)]
struct Dual<S: Scalar> {
    value: Multivector<S>,
    tangent: Multivector<S>,
}

impl<S: Scalar> Ring for Dual<S> {
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Dual {
            value: self.value.wedge(&other.value)?,
            tangent: self
                .value
                .wedge(&other.tangent)?
                .try_add(&self.tangent.wedge(&other.value)?)?,
        })
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(Dual {
            value: self.value.try_add(&other.value)?,
            tangent: self.tangent.try_add(&other.tangent)?,
        })
    }
    fn neg(&self) -> Self {
        Dual { value: -&self.value, tangent: -&self.tangent }
    }
}

/// Expansion along the first row: `Pf(A) = Σ_j (−1)^{j+1} a_{0j} Pf(A_{0̂ĵ})`.
fn pf_recursive<T: Ring>(m: &[Vec<T>], rows: &[usize], one: &T) -> Result<T> {
    if rows.is_empty() {
        return Ok(one.clone());
    }
    if rows.len() % 2 == 1 {
        return one.add(&one.neg());
    }
    let first = rows[0];
    let mut acc: Option<T> = None;
    for (pos, &j) in rows.iter().enumerate().skip(1) {
        let rest: Vec<usize> = rows[1..].iter().copied().filter(|&r| r != j).collect();
        let mut term = m[first][j].mul(&pf_recursive(m, &rest, one)?)?;
        if pos % 2 == 0 {
            term = term.neg();
        }
        acc = Some(match acc {
            Some(a) => a.add(&term)?,
            None => term,
        });
    }
    Ok(acc.expect("at least two rows"))
}

fn check_even<S: Scalar>(m: &FormMatrix<S>) -> Result<()> {
    for i in 0..m.size() {
        for j in 0..m.size() {
            if let Some((w, _)) = m.entry(i, j).terms().find(|(w, _)| w.degree() % 2 == 1) {
                return Err(Error::NotEvenNilpotent { degree: w.degree() });
            }
        }
    }
    Ok(())
}

/// Pfaffian of an antisymmetric matrix of even forms.
pub fn pfaffian<S: Scalar>(m: &FormMatrix<S>) -> Result<Multivector<S>> {
    check_even(m)?;
    let size = m.size();
    let entries: Vec<Vec<Multivector<S>>> = (0..size)
        .map(|i| (0..size).map(|j| m.entry(i, j).clone()).collect())
        .collect();
    let rows: Vec<usize> = (0..size).collect();
    pf_recursive(&entries, &rows, &Multivector::one(m.form_dim()))
}

/// Directional derivative of `Pf` at `m` in direction `dm`.
pub(crate) fn pfaffian_derivative<S: Scalar>(
    m: &FormMatrix<S>,
    dm: &FormMatrix<S>,
) -> Result<Multivector<S>> {
    check_even(m)?;
    if m.size() != dm.size() {
        return Err(Error::DimensionMismatch { expected: m.size(), found: dm.size() });
    }
    let size = m.size();
    let dim = m.form_dim().max(dm.form_dim());
    let entries: Vec<Vec<Dual<S>>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| Dual { value: m.entry(i, j).clone(), tangent: dm.entry(i, j).clone() })
                .collect()
        })
        .collect();
    let rows: Vec<usize> = (0..size).collect();
    let one = Dual { value: Multivector::one(dim), tangent: Multivector::zero(dim) };
    Ok(pf_recursive(&entries, &rows, &one)?.tangent)
}

/// Pfaffian of a scalar antisymmetric matrix; zero for odd size.
pub fn scalar_pfaffian<S: Scalar>(m: &DMatrix<S>) -> Result<S> {
    if !is_antisymmetric(m) {
        return Err(Error::NotAntisymmetric);
    }
    let size = m.nrows();
    let entries: Vec<Vec<Multivector<S>>> = (0..size)
        .map(|i| (0..size).map(|j| Multivector::scalar(0, m[(i, j)].clone())).collect())
        .collect();
    let rows: Vec<usize> = (0..size).collect();
    Ok(pf_recursive(&entries, &rows, &Multivector::one(0))?.scalar_part())
}
