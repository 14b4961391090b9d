//! Fixed-point normal form of an orientation-preserving isometry and its
//! Clifford lift `φ̃`.
//!
//! The frame is ordered tangent-first: `e_0..e_{a-1}` span the fixed space,
//! then each normal rotation block `(e_p, e_{p+1})`, `p = a + 2j`, acts by
//! `e_p ↦ cos θ e_p + sin θ e_{p+1}` and `e_{p+1} ↦ −sin θ e_p + cos θ e_{p+1}`
//! (the rows of the displayed block `[[cos, sin], [−sin, cos]]` are the
//! images). Rotations are stored as `(cos θ, sin θ)` pairs so the exact
//! backend can work with rational points of the circle.

use nalgebra::DMatrix;

use crate::clifford::{CliffordElement, SupertraceMethod};
use crate::error::{Error, Result};
use crate::multivector::{full_mask, BasisWord, Bigrade, FrameSplit, Multivector};
use crate::scalar::{parity_sign, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation<S> {
    pub cos: S,
    pub sin: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryNormalForm<S: Scalar> {
    n: usize,
    a: usize,
    blocks: Vec<Rotation<S>>,
}

impl<S: Scalar> IsometryNormalForm<S> {
    /// Validated normal form: `n`, `a` even, `a + 2·#blocks = n`, every block
    /// a rotation with `θ ≢ 0`.
    pub fn new(n: usize, a: usize, blocks: Vec<Rotation<S>>) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        if a % 2 == 1 {
            return Err(Error::OddDimension(a));
        }
        if a + 2 * blocks.len() != n {
            return Err(Error::InvalidNormalForm(format!(
                "a = {a} plus {} rotation blocks does not fill n = {n}",
                blocks.len()
            )));
        }
        for (j, r) in blocks.iter().enumerate() {
            let norm = r.cos.clone() * r.cos.clone() + r.sin.clone() * r.sin.clone();
            if !norm.near(&S::one()) {
                return Err(Error::InvalidNormalForm(format!("block {j} is not a rotation")));
            }
            if r.cos.near(&S::one()) {
                return Err(Error::DegenerateAngle);
            }
        }
        Ok(Self { n, a, blocks })
    }

    /// The identity on an `n`-dimensional fixed space.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, n, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn fixed_dim(&self) -> usize {
        self.a
    }

    pub fn normal_dim(&self) -> usize {
        self.n - self.a
    }

    pub fn blocks(&self) -> &[Rotation<S>] {
        &self.blocks
    }

    pub fn frame(&self) -> FrameSplit {
        FrameSplit { a: self.a, b: self.n - self.a }
    }

    /// `det(1 − φ^N) = Π (2 − 2 cos θ_j)`.
    pub fn det_one_minus_normal(&self) -> S {
        self.blocks.iter().fold(S::one(), |acc, r| {
            acc * (S::from_i64(2) - S::from_i64(2) * r.cos.clone())
        })
    }

    /// Matrix of `φ` acting on column vectors in the frame `e_0..e_{n-1}`.
    pub fn rotation_matrix(&self) -> DMatrix<S> {
        let mut m = DMatrix::<S>::identity(self.n, self.n);
        for (j, r) in self.blocks.iter().enumerate() {
            let p = self.a + 2 * j;
            m[(p, p)] = r.cos.clone();
            m[(p + 1, p)] = r.sin.clone();
            m[(p, p + 1)] = -r.sin.clone();
            m[(p + 1, p + 1)] = r.cos.clone();
        }
        m
    }

    /// Normal block `φ^N` acting on column vectors.
    pub fn normal_matrix(&self) -> DMatrix<S> {
        let b = self.n - self.a;
        self.rotation_matrix().view((self.a, self.a), (b, b)).into_owned()
    }
}

impl IsometryNormalForm<f64> {
    /// Normal form from rotation angles (radians).
    pub fn from_angles(n: usize, a: usize, angles: &[f64]) -> Result<Self> {
        let blocks = angles
            .iter()
            .map(|t| Rotation { cos: t.cos(), sin: t.sin() })
            .collect();
        Self::new(n, a, blocks)
    }
}

/// `φ̃` for arbitrary rotation blocks (including `θ = 0`) starting at index `a`.
pub fn phi_tilde_blocks<S: Scalar>(n: usize, a: usize, blocks: &[Rotation<S>]) -> CliffordElement<S> {
    let half = S::from_ratio(1, 2);
    let mut out = CliffordElement::one(n);
    for (j, r) in blocks.iter().enumerate() {
        let p = a + 2 * j;
        let pair = (1 << p) | (1 << (p + 1));
        let mut factor = CliffordElement::scalar(n, half.clone() * (S::one() + r.cos.clone()));
        factor.add_term(BasisWord::new(pair, pair), -(half.clone() * (S::one() - r.cos.clone())));
        factor.add_term(BasisWord::new(pair, 0), half.clone() * r.sin.clone());
        factor.add_term(BasisWord::new(0, pair), -(half.clone() * r.sin.clone()));
        out = out.multiply(&factor).expect("same dimension");
    }
    out
}

/// Clifford expansion of the induced action `φ̃ = (φ^{-1})^*` on `ΛV`.
pub fn phi_tilde<S: Scalar>(iso: &IsometryNormalForm<S>) -> CliffordElement<S> {
    phi_tilde_blocks(iso.n, iso.a, &iso.blocks)
}

/// Top normal component `σ[φ̃]^{((0,b),(0,b))} = (−1/4)^{b/2} det(1−φ^N) e^N∧ê^N`.
pub fn sigma_phi_top<S: Scalar>(iso: &IsometryNormalForm<S>) -> Multivector<S> {
    let b = iso.normal_dim();
    let normal = full_mask(iso.n) & !full_mask(iso.a);
    let coef = S::from_ratio(-1, 4).powi((b / 2) as i32) * iso.det_one_minus_normal();
    Multivector::monomial(iso.n, BasisWord::new(normal, normal), coef)
}

/// `Str[φ̃·A]` evaluated two independent ways.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantSupertrace<S> {
    /// Supertrace of the matrix product `represent(φ̃)·represent(A)`.
    pub matrix: S,
    /// `(−1)^{n/2}2ⁿ(−1/4)^{b/2}det(1−φ^N)|σ(A)|^{((a,0),(a,0))}`.
    pub leading: S,
    /// `(−1)^{n/2}2ⁿ Σ_{(l₁,l₂)≠(b,b)} T[σ(φ̃)^{((0,l₁),(0,l₂))} ∧ σ(A)^{((a,b−l₁),(a,b−l₂))}]`.
    pub correction: S,
}

impl<S: Scalar> EquivariantSupertrace<S> {
    pub fn decomposition(&self) -> S {
        self.leading.clone() + self.correction.clone()
    }
}

pub fn equivariant_supertrace<S: Scalar>(
    iso: &IsometryNormalForm<S>,
    operand: &CliffordElement<S>,
) -> Result<EquivariantSupertrace<S>> {
    if operand.dim() != iso.n {
        return Err(Error::DimensionMismatch { expected: iso.n, found: operand.dim() });
    }
    let (n, a, b) = (iso.n, iso.a, iso.normal_dim());
    let phi = phi_tilde(iso);
    let matrix = phi.represent().multiply(&operand.represent())?.supertrace();

    let top_scale = parity_sign::<S>(n / 2) * S::from_i64(1 << n);
    let frame = iso.frame();
    let sigma_a = operand.symbol();
    let sigma_phi = phi.symbol();
    let tangent = frame.with_grade(Bigrade::new(a, 0, a, 0))?;
    let leading = top_scale.clone()
        * S::from_ratio(-1, 4).powi((b / 2) as i32)
        * iso.det_one_minus_normal()
        * sigma_a.grade_component(&tangent)?.berezin(crate::multivector::BerezinMode::Tangent { a });

    let mut correction = S::zero();
    for l1 in 0..=b {
        for l2 in 0..=b {
            if l1 == b && l2 == b {
                continue;
            }
            let phi_part = sigma_phi.grade_component(&frame.with_grade(Bigrade::new(0, l1, 0, l2))?)?;
            let a_part = sigma_a.grade_component(&frame.with_grade(Bigrade::new(a, b - l1, a, b - l2))?)?;
            correction += phi_part.wedge(&a_part)?.berezin(crate::multivector::BerezinMode::Full);
        }
    }
    Ok(EquivariantSupertrace {
        matrix,
        leading,
        correction: top_scale * correction,
    })
}

/// `Str[φ̃]` through the Berezin route; equals `det(1−φ^N)` when `a = 0`.
pub fn phi_tilde_supertrace<S: Scalar>(iso: &IsometryNormalForm<S>) -> Result<S> {
    phi_tilde(iso).supertrace(SupertraceMethod::Berezin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn rot(c: Rational, s: Rational) -> Rotation<Rational> {
        Rotation { cos: c, sin: s }
    }

    #[test]
    fn validation() {
        assert!(IsometryNormalForm::new(3, 1, vec![rot(q(-1, 1), q(0, 1))]).is_err());
        assert!(IsometryNormalForm::new(4, 0, vec![rot(q(-1, 1), q(0, 1))]).is_err());
        assert_eq!(
            IsometryNormalForm::new(2, 0, vec![rot(q(1, 1), q(0, 1))]),
            Err(Error::DegenerateAngle)
        );
        assert!(IsometryNormalForm::new(2, 0, vec![rot(q(1, 2), q(1, 2))]).is_err());
        assert!(IsometryNormalForm::new(2, 0, vec![rot(q(3, 5), q(4, 5))]).is_ok());
    }

    #[test]
    fn phi_tilde_at_half_turn() {
        let iso = IsometryNormalForm::new(2, 0, vec![rot(q(-1, 1), q(0, 1))]).unwrap();
        let phi = phi_tilde(&iso);
        let expected = CliffordElement::word(2, BasisWord::full(2), q(-1, 1));
        assert_eq!(phi, expected);
    }

    #[test]
    fn phi_tilde_at_zero_angle_is_identity() {
        let blocks = vec![rot(q(1, 1), q(0, 1)), rot(q(1, 1), q(0, 1))];
        assert_eq!(phi_tilde_blocks(4, 0, &blocks), CliffordElement::one(4));
        assert_eq!(phi_tilde(&IsometryNormalForm::<Rational>::identity(4).unwrap()), CliffordElement::one(4));
    }

    #[test]
    fn sigma_top_matches_symbol_pipeline() {
        let iso = IsometryNormalForm::new(4, 2, vec![rot(q(3, 5), q(-4, 5))]).unwrap();
        let top = sigma_phi_top(&iso);
        let sel = iso.frame().with_grade(Bigrade::new(0, 2, 0, 2)).unwrap();
        assert_eq!(phi_tilde(&iso).symbol().grade_component(&sel).unwrap(), top);
        // (-1/4)(2 - 2·3/5) = -1/5
        assert_eq!(top.coefficient(BasisWord::new(0b1100, 0b1100)), q(-1, 5));
    }

    #[test]
    fn sigma_top_half_turn_coefficient() {
        let iso = IsometryNormalForm::new(2, 0, vec![rot(q(-1, 1), q(0, 1))]).unwrap();
        assert_eq!(sigma_phi_top(&iso).coefficient(BasisWord::full(2)), q(-1, 1));
    }

    #[test]
    fn supertrace_of_phi_alone() {
        let iso = IsometryNormalForm::new(2, 0, vec![rot(q(3, 5), q(4, 5))]).unwrap();
        let st = equivariant_supertrace(&iso, &CliffordElement::one(2)).unwrap();
        // 2 - 2cos θ
        assert_eq!(st.matrix, q(4, 5));
        assert_eq!(st.decomposition(), q(4, 5));
        assert_eq!(phi_tilde_supertrace(&iso).unwrap(), q(4, 5));
    }

    #[test]
    fn supertrace_paths_agree_on_top_word() {
        let iso = IsometryNormalForm::new(2, 0, vec![rot(q(-3, 5), q(4, 5))]).unwrap();
        let op = CliffordElement::word(2, BasisWord::full(2), q(1, 1));
        let st = equivariant_supertrace(&iso, &op).unwrap();
        assert_eq!(st.matrix, st.decomposition());
    }

    #[test]
    fn vanishing_operand() {
        let iso = IsometryNormalForm::new(4, 2, vec![rot(q(0, 1), q(1, 1))]).unwrap();
        // c(e_0) alone has no tangent-top component and no admissible cross term
        let op = CliffordElement::c(4, 0);
        let st = equivariant_supertrace(&iso, &op).unwrap();
        assert_eq!(st.leading, q(0, 1));
        assert_eq!(st.matrix, q(0, 1));
        assert_eq!(st.decomposition(), q(0, 1));
    }
}
