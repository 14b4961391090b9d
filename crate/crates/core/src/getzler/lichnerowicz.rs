//! Weitzenböck and Lichnerowicz assemblies of `D²` on `ΛT*M ⊗ F`.
//!
//! Operators are written at the center of a normal frame. Connection and
//! Christoffel contributions are carried as opaque terms of Getzler order 1.

use nalgebra::DMatrix;

use super::operator::{Algebra, GradedDiffOp};
use super::order::HalfInt;
use crate::clifford::CliffordElement;
use crate::equivariant::{BundleVariationData, CurvatureTensor};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const CHRISTOFFEL: &str = "christoffel";
const CONNECTION: &str = "connection(E,e)";

/// `A + σB` with `σ² = 1` central.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaExtendedOp<S: Scalar> {
    pub even: GradedDiffOp<S>,
    pub odd: GradedDiffOp<S>,
}

impl<S: Scalar> SigmaExtendedOp<S> {
    pub fn new(even: GradedDiffOp<S>, odd: GradedDiffOp<S>) -> Result<Self> {
        even.try_add(&odd)?;
        Ok(Self { even, odd })
    }

    pub fn from_even(even: GradedDiffOp<S>) -> Self {
        let odd = GradedDiffOp::zero(even.dim(), even.rank(), even.algebra());
        Self { even, odd }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self { even: self.even.try_add(&other.even)?, odd: self.odd.try_add(&other.odd)? })
    }

    /// `(A,B)(A′,B′) = (AA′ + BB′, AB′ + BA′)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            even: self.even.compose(&other.even)?.try_add(&self.odd.compose(&other.odd)?)?,
            odd: self.even.compose(&other.odd)?.try_add(&self.odd.compose(&other.even)?)?,
        })
    }

    /// `σ` has Getzler order 0.
    pub fn getzler_order(&self) -> Option<HalfInt> {
        self.even.getzler_order().max(self.odd.getzler_order())
    }
}

/// `Σ_{ijkl} R_{ijkl} c(e_i)c(e_j)ĉ(e_k)ĉ(e_l)`.
fn curvature_word_sum<S: Scalar>(r: &CurvatureTensor<S>) -> Result<CliffordElement<S>> {
    let n = r.dim();
    let mut out = CliffordElement::zero(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = r.get(i, j, k, l);
                    if v.is_zero() {
                        continue;
                    }
                    let w = CliffordElement::c(n, i)
                        .multiply(&CliffordElement::c(n, j))?
                        .multiply(&CliffordElement::chat(n, k))?
                        .multiply(&CliffordElement::chat(n, l))?;
                    out = out.try_add(&w.scale(v))?;
                }
            }
        }
    }
    Ok(out)
}

/// `D² = −Σ∇²_j + r/4 − ⅛ Σ R_{ijkl} c(e_i)c(e_j)ĉ(e_k)ĉ(e_l)` on forms.
pub fn weitzenbock<S: Scalar>(r: &CurvatureTensor<S>) -> Result<GradedDiffOp<S>> {
    r.validate()?;
    let n = r.dim();
    let id = DMatrix::identity(1, 1);
    let mut op = GradedDiffOp::laplacian(n, 1, Algebra::Clifford).scale(&-S::one());
    let scalar = r.scalar_curvature() * S::from_ratio(1, 4);
    op = op.try_add(&GradedDiffOp::endomorphism(n, &id * scalar)?)?;
    let curv = curvature_word_sum(r)?.scale(&S::from_ratio(-1, 8));
    op = op.try_add(&GradedDiffOp::clifford(&curv, &id))?;
    if !r.is_zero() {
        op = op.try_add(&GradedDiffOp::lower_order(n, 1, Algebra::Clifford, CHRISTOFFEL, HalfInt::from_int(1)))?;
    }
    Ok(op)
}

/// The pieces of `△(F)` and their `σ`-extended regrouping.
#[derive(Clone, Debug)]
pub struct LichnerowiczSplit<S: Scalar> {
    /// `−△^{E,e}`.
    pub neg_connection_laplacian: GradedDiffOp<S>,
    pub e: GradedDiffOp<S>,
    /// `△(F) = −△^{E,e} + E`.
    pub laplacian_f: GradedDiffOp<S>,
    pub d0_squared: GradedDiffOp<S>,
    pub l_omega: GradedDiffOp<S>,
    pub d2_odd: GradedDiffOp<S>,
    pub d2_even: GradedDiffOp<S>,
    pub l_omega_sigma: SigmaExtendedOp<S>,
}

/// Outcome of the term-level identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LichnerowiczCheck {
    /// `△(F) = (D⁰)² + L(ω)`.
    pub laplacian_split: bool,
    /// `(D²)^even + σ(D²)^odd = (D⁰)² + L(ω,σ)`.
    pub sigma_split: bool,
}

impl LichnerowiczCheck {
    pub fn all(&self) -> bool {
        self.laplacian_split && self.sigma_split
    }
}

impl<S: Scalar> LichnerowiczSplit<S> {
    pub fn check(&self) -> Result<LichnerowiczCheck> {
        let rhs = self.d0_squared.try_add(&self.l_omega)?;
        let sigma_lhs = SigmaExtendedOp::new(self.d2_even.clone(), self.d2_odd.clone())?;
        let sigma_rhs = SigmaExtendedOp::from_even(self.d0_squared.clone()).try_add(&self.l_omega_sigma)?;
        Ok(LichnerowiczCheck {
            laplacian_split: self.laplacian_f == rhs,
            sigma_split: sigma_lhs == sigma_rhs,
        })
    }
}

struct Pieces<S: Scalar> {
    curvature: GradedDiffOp<S>,
    scalar: GradedDiffOp<S>,
    c_omega2: GradedDiffOp<S>,
    chat_omega2: GradedDiffOp<S>,
    mixed: GradedDiffOp<S>,
    omega_sq: GradedDiffOp<S>,
    neg_connection_laplacian: GradedDiffOp<S>,
}

fn pieces<S: Scalar>(r: &CurvatureTensor<S>, data: &BundleVariationData<S>) -> Result<Pieces<S>> {
    r.validate()?;
    let n = r.dim();
    if data.dim() != n {
        return Err(Error::MalformedBundleData(format!(
            "bundle data for n = {} with curvature for n = {n}",
            data.dim()
        )));
    }
    let rank = data.rank();
    let id = DMatrix::<S>::identity(rank, rank);
    let zero = || GradedDiffOp::zero(n, rank, Algebra::Clifford);
    let eighth = S::from_ratio(1, 8);

    let curvature = GradedDiffOp::clifford(&curvature_word_sum(r)?.scale(&-eighth.clone()), &id);
    let scalar = GradedDiffOp::endomorphism(n, &id * (r.scalar_curvature() * S::from_ratio(1, 4)))?;

    let mut c_omega2 = zero();
    let mut chat_omega2 = zero();
    let mut mixed = zero();
    let mut omega_sq = zero();
    for i in 0..n {
        for j in 0..n {
            let w2 = data.omega_squared(i, j);
            let cc = CliffordElement::c(n, i).multiply(&CliffordElement::c(n, j))?;
            let hh = CliffordElement::chat(n, i).multiply(&CliffordElement::chat(n, j))?;
            let ch = CliffordElement::c(n, i).multiply(&CliffordElement::chat(n, j))?;
            c_omega2 = c_omega2.try_add(&GradedDiffOp::clifford(&cc, &(&w2 * -eighth.clone())))?;
            chat_omega2 = chat_omega2.try_add(&GradedDiffOp::clifford(&hh, &(&w2 * eighth.clone())))?;
            let bracket = &data.nabla_omega[i][j] + &w2 * S::from_ratio(1, 2);
            mixed = mixed.try_add(&GradedDiffOp::clifford(&ch, &(bracket * S::from_ratio(-1, 2))))?;
        }
        let sq = &data.omega[i] * &data.omega[i] * S::from_ratio(1, 4);
        omega_sq = omega_sq.try_add(&GradedDiffOp::endomorphism(n, sq)?)?;
    }

    let mut neg_connection_laplacian = GradedDiffOp::laplacian(n, rank, Algebra::Clifford).scale(&-S::one());
    let flat = r.is_zero() && data.omega.iter().all(|w| w.iter().all(|x| x.is_zero()));
    if !flat {
        neg_connection_laplacian = neg_connection_laplacian.try_add(&GradedDiffOp::lower_order(
            n,
            rank,
            Algebra::Clifford,
            CONNECTION,
            HalfInt::from_int(1),
        ))?;
    }
    Ok(Pieces { curvature, scalar, c_omega2, chat_omega2, mixed, omega_sq, neg_connection_laplacian })
}

pub fn lichnerowicz_split<S: Scalar>(
    r: &CurvatureTensor<S>,
    data: &BundleVariationData<S>,
) -> Result<LichnerowiczSplit<S>> {
    let p = pieces(r, data)?;
    let e = p
        .curvature
        .try_add(&p.c_omega2)?
        .try_add(&p.chat_omega2)?
        .try_add(&p.mixed)?
        .try_add(&p.omega_sq)?
        .try_add(&p.scalar)?;
    let laplacian_f = p.neg_connection_laplacian.try_add(&e)?;
    let d0_squared = p
        .neg_connection_laplacian
        .try_add(&p.curvature)?
        .try_add(&p.c_omega2)?
        .try_add(&p.scalar)?;
    let l_omega = p.chat_omega2.try_add(&p.mixed)?.try_add(&p.omega_sq)?;
    let d2_odd = p.mixed.clone();
    let d2_even = laplacian_f.try_sub(&d2_odd)?;
    let l_omega_sigma = SigmaExtendedOp::new(p.chat_omega2.try_add(&p.omega_sq)?, p.mixed)?;
    Ok(LichnerowiczSplit {
        neg_connection_laplacian: p.neg_connection_laplacian,
        e,
        laplacian_f,
        d0_squared,
        l_omega,
        d2_odd,
        d2_even,
        l_omega_sigma,
    })
}
