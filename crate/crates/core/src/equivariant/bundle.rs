//! Pointwise data of a flat bundle `(F, h^F)` under a variation of metrics.

use nalgebra::DMatrix;

use super::curvature::{is_antisymmetric, is_symmetric, FormMatrix};
use crate::clifford::CliffordElement;
use crate::error::{Error, Result};
use crate::multivector::{BasisWord, Multivector};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BundleVariationData<S: Scalar> {
    n: usize,
    rank: usize,
    /// `ω(F,h^F)(e_j)`.
    pub omega: Vec<DMatrix<S>>,
    /// `nabla_omega[i][j]`: `∇_{e_i} ω(F,h^F)(e_j)`.
    pub nabla_omega: Vec<Vec<DMatrix<S>>>,
    pub phi_f: DMatrix<S>,
    /// `(g^{TM})^{-1} ġ^{TM}`.
    pub g_dot: DMatrix<S>,
    /// `(h^F)^{-1} ḣ^F`.
    pub v: DMatrix<S>,
    /// `Ṡ(e_j)`, antisymmetric `n × n` matrices.
    pub s_dot: Vec<DMatrix<S>>,
}

impl<S: Scalar> BundleVariationData<S> {
    pub fn new(
        omega: Vec<DMatrix<S>>,
        nabla_omega: Vec<Vec<DMatrix<S>>>,
        phi_f: DMatrix<S>,
        g_dot: DMatrix<S>,
        v: DMatrix<S>,
        s_dot: Vec<DMatrix<S>>,
    ) -> Result<Self> {
        let n = g_dot.nrows();
        let rank = phi_f.nrows();
        let malformed = |m: &str| Err(Error::MalformedBundleData(m.to_string()));
        if !is_symmetric(&g_dot) {
            return Err(Error::NotSymmetric);
        }
        if omega.len() != n || nabla_omega.len() != n || s_dot.len() != n {
            return malformed("expected one sample per frame direction");
        }
        let square = |m: &DMatrix<S>, k: usize| m.nrows() == k && m.ncols() == k;
        if !square(&phi_f, rank) || !square(&v, rank) {
            return malformed("bundle endomorphisms must be rank × rank");
        }
        if !omega.iter().all(|m| square(m, rank)) {
            return malformed("ω samples must be rank × rank");
        }
        for row in &nabla_omega {
            if row.len() != n || !row.iter().all(|m| square(m, rank)) {
                return malformed("∇ω samples must be an n × n array of rank × rank matrices");
            }
        }
        for m in &s_dot {
            if !square(m, n) {
                return malformed("Ṡ samples must be n × n");
            }
            if !is_antisymmetric(m) {
                return Err(Error::NotAntisymmetric);
            }
        }
        Ok(Self { n, rank, omega, nabla_omega, phi_f, g_dot, v, s_dot })
    }

    /// Flat trivial line bundle with `φ^F = 1` and no variation.
    pub fn trivial(n: usize) -> Self {
        let zero1 = DMatrix::from_element(1, 1, S::zero());
        Self {
            n,
            rank: 1,
            omega: vec![zero1.clone(); n],
            nabla_omega: vec![vec![zero1.clone(); n]; n],
            phi_f: DMatrix::identity(1, 1),
            g_dot: DMatrix::from_element(n, n, S::zero()),
            v: zero1,
            s_dot: vec![DMatrix::from_element(n, n, S::zero()); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `ω²(e_i, e_j) = ω(e_i)ω(e_j) − ω(e_j)ω(e_i)`.
    pub fn omega_squared(&self, i: usize, j: usize) -> DMatrix<S> {
        &self.omega[i] * &self.omega[j] - &self.omega[j] * &self.omega[i]
    }

    /// `Ṡ` as a matrix of 1-forms on `Λ(n)`.
    pub fn s_dot_form(&self) -> FormMatrix<S> {
        FormMatrix::from_one_form(self.n, &self.s_dot).expect("validated on construction")
    }
}

/// `C = −½ Σ_{ij} (ġ e_i, e_j) c(e_i) ĉ(e_j)` together with its symbol.
pub fn hodge_variation_operator<S: Scalar>(
    data: &BundleVariationData<S>,
) -> Result<(CliffordElement<S>, Multivector<S>)> {
    if !is_symmetric(&data.g_dot) {
        return Err(Error::NotSymmetric);
    }
    let n = data.n;
    let half = S::from_ratio(-1, 2);
    let mut c = CliffordElement::zero(n);
    let mut sym = Multivector::zero(n);
    for i in 0..n {
        for j in 0..n {
            let g = data.g_dot[(j, i)].clone();
            if g.is_zero() {
                continue;
            }
            let coef = half.clone() * g;
            let word = CliffordElement::c(n, i).multiply(&CliffordElement::chat(n, j))?;
            c = c.try_add(&word.scale(&coef))?;
            sym.add_term(BasisWord::new(1 << i, 1 << j), coef);
        }
    }
    Ok((c, sym))
}

/// `θ(φ,F,h^F)(e_j) = Tr[φ^F ω(e_j)]` for each frame direction.
pub fn theta_form<S: Scalar>(data: &BundleVariationData<S>) -> Result<Vec<S>> {
    let r = data.rank;
    if data.phi_f.nrows() != r {
        return Err(Error::DimensionMismatch { expected: r, found: data.phi_f.nrows() });
    }
    data.omega
        .iter()
        .map(|w| {
            if w.nrows() != r {
                return Err(Error::DimensionMismatch { expected: r, found: w.nrows() });
            }
            let commutator = &data.phi_f * w - w * &data.phi_f;
            if !commutator.iter().all(|x| x.near_zero()) {
                return Err(Error::MalformedBundleData("φ^F does not commute with ω".into()));
            }
            Ok((&data.phi_f * w).trace())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn q(p: i64) -> Rational {
        Rational::from_i64(p)
    }

    #[test]
    fn identity_metric_variation() {
        let mut d = BundleVariationData::<Rational>::trivial(2);
        d.g_dot = DMatrix::identity(2, 2);
        let (c, sym) = hodge_variation_operator(&d).unwrap();
        let half = Rational::from_ratio(-1, 2);
        let mut expected = CliffordElement::zero(2);
        for i in 0..2 {
            let w = CliffordElement::c(2, i).multiply(&CliffordElement::chat(2, i)).unwrap();
            expected = expected.try_add(&w.scale(&half)).unwrap();
        }
        assert_eq!(c, expected);
        assert_eq!(c.symbol(), sym);
        assert_eq!(sym.coefficient(BasisWord::new(1, 1)), half);
        assert_eq!(sym.coefficient(BasisWord::new(2, 2)), half);
        assert_eq!(sym.len(), 2);
    }

    #[test]
    fn zero_variation() {
        let d = BundleVariationData::<Rational>::trivial(3);
        let (c, sym) = hodge_variation_operator(&d).unwrap();
        assert!(c.is_zero() && sym.is_zero());
        assert!(theta_form(&d).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn theta_rank_two() {
        let mut d = BundleVariationData::<Rational>::trivial(1);
        d.rank = 2;
        d.phi_f = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![q(1), q(-1)]));
        d.omega = vec![DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![q(5), q(2)]))];
        assert_eq!(theta_form(&d).unwrap(), vec![q(3)]);
    }

    #[test]
    fn theta_line_bundle() {
        let mut d = BundleVariationData::<Rational>::trivial(2);
        d.omega = vec![DMatrix::from_element(1, 1, q(4)), DMatrix::from_element(1, 1, q(-7))];
        assert_eq!(theta_form(&d).unwrap(), vec![q(4), q(-7)]);
    }

    #[test]
    fn rejects_asymmetric_metric_variation() {
        let d = BundleVariationData::<Rational>::trivial(2);
        let mut g = DMatrix::from_element(2, 2, q(0));
        g[(0, 1)] = q(1);
        let res = BundleVariationData::new(d.omega, d.nabla_omega, d.phi_f, g, d.v, d.s_dot);
        assert_eq!(res, Err(Error::NotSymmetric));
    }
}
