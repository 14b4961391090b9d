//! Fixed-point data, curvature forms and the local equivariant index density.
//!
//! Quantities that carry powers of `π` are returned as [`PiMultiple`] so the
//! rational backend can compare them exactly.

mod bundle;
mod curvature;
mod isometry;
mod mehler;
mod pfaffian;
mod scenario;

pub use bundle::{hodge_variation_operator, theta_form, BundleVariationData};
pub use curvature::{CurvatureTensor, FormMatrix};
pub use isometry::{
    equivariant_supertrace, phi_tilde, phi_tilde_blocks, phi_tilde_supertrace, sigma_phi_top,
    EquivariantSupertrace, IsometryNormalForm, Rotation,
};
pub use mehler::{fiber_integral, mehler_kernel, FiberIntegral, FiberMode, MehlerKernel};
pub use pfaffian::{pfaffian, scalar_pfaffian};
pub use scenario::Scenario;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::multivector::{BerezinMode, BasisWord, Multivector};
use crate::scalar::{parity_sign, Scalar};

/// `coeff · π^pi_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiMultiple<T> {
    pub coeff: T,
    pub pi_power: i32,
}

impl<S: Scalar> PiMultiple<S> {
    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64() * PI.powi(self.pi_power)
    }
}

impl<S: Scalar> PiMultiple<Multivector<S>> {
    pub fn to_f64(&self) -> Multivector<f64> {
        self.coeff.to_f64().scale(&PI.powi(self.pi_power))
    }
}

/// `Ṙ = ¼ Σ_{ijkl} R_{ijkl} e^i∧e^j∧ê^k∧ê^l`.
pub fn curvature_bivector<S: Scalar>(r: &CurvatureTensor<S>) -> Result<Multivector<S>> {
    r.validate()?;
    let n = r.dim();
    let mut out = Multivector::zero(n);
    // The four orderings of (i,j) and (k,l) contribute equally and cancel the ¼.
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                for l in (k + 1)..n {
                    let v = r.get(i, j, k, l);
                    if v.is_zero() {
                        continue;
                    }
                    let word = Multivector::e(n, i)
                        .wedge(&Multivector::e(n, j))?
                        .wedge(&Multivector::ehat(n, k))?
                        .wedge(&Multivector::ehat(n, l))?;
                    out = out.try_add(&word.scale(v))?;
                }
            }
        }
    }
    Ok(out)
}

/// `Pf[−R/2π]` of the `a`-dimensional block, as the coefficient of `e¹∧…∧e^a`.
pub fn euler_form<S: Scalar>(block: &CurvatureTensor<S>) -> Result<PiMultiple<S>> {
    let a = block.dim();
    if a % 2 == 1 {
        return Err(Error::OddDimension(a));
    }
    block.validate()?;
    let pf = pfaffian(&block.two_form_matrix())?;
    let top = pf.coefficient(BasisWord::new(crate::multivector::full_mask(a), 0));
    Ok(PiMultiple {
        coeff: S::from_ratio(-1, 2).powi((a / 2) as i32) * top,
        pi_power: -((a / 2) as i32),
    })
}

/// `∂_b|_{b=0} Pf[−(R + bṠ)/2π]` on the `a`-dimensional leading block.
///
/// `s_dot` is an antisymmetric matrix of forms on `Λ(a)`; its entries may
/// have any degree since only one of them enters each product.
pub fn transgression<S: Scalar>(
    r: &CurvatureTensor<S>,
    s_dot: &FormMatrix<S>,
    a: usize,
) -> Result<PiMultiple<Multivector<S>>> {
    if a % 2 == 1 {
        return Err(Error::OddDimension(a));
    }
    if s_dot.size() != a {
        return Err(Error::DimensionMismatch { expected: a, found: s_dot.size() });
    }
    let block = r.tangent_block(a)?;
    block.validate()?;
    let omega = block.two_form_matrix();
    let derivative = pfaffian::pfaffian_derivative(&omega, s_dot)?;
    Ok(PiMultiple {
        coeff: derivative.scale(&S::from_ratio(-1, 2).powi((a / 2) as i32)),
        pi_power: -((a / 2) as i32),
    })
}

/// `(−1)^{n/2} 2ⁿ (−¼)^{b/2} (4π)^{−a/2} |e^{Ṙ/2}|^{((a,0),(a,0))}`.
pub fn local_index_density<S: Scalar>(
    r: &CurvatureTensor<S>,
    iso: &IsometryNormalForm<S>,
) -> Result<PiMultiple<S>> {
    let n = iso.dim();
    if r.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: r.dim() });
    }
    let (a, b) = (iso.fixed_dim(), iso.normal_dim());
    let half = S::from_ratio(1, 2);
    let expo = curvature_bivector(r)?.scale(&half).exp_even()?;
    let top = expo.berezin(BerezinMode::Tangent { a });
    let coeff = parity_sign::<S>(n / 2)
        * S::from_i64(1 << n)
        * S::from_ratio(-1, 4).powi((b / 2) as i32)
        * S::from_ratio(1, 4).powi((a / 2) as i32)
        * top;
    Ok(PiMultiple { coeff, pi_power: -((a / 2) as i32) })
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
    fn bivector_of_surface() {
        let r = CurvatureTensor::from_entries(2, &[(0, 1, 0, 1, q(3))]).unwrap();
        let bv = curvature_bivector(&r).unwrap();
        assert_eq!(bv.len(), 1);
        assert_eq!(bv.coefficient(BasisWord::full(2)), q(3));
        assert!(curvature_bivector(&CurvatureTensor::<Rational>::zero(4)).unwrap().is_zero());
    }

    #[test]
    fn bivector_matches_sixteen_term_sum() {
        let r = CurvatureTensor::<Rational>::round_sphere(3);
        let n = 3;
        let mut brute = Multivector::zero(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let w = Multivector::e(n, i)
                            .wedge(&Multivector::e(n, j))
                            .and_then(|x| x.wedge(&Multivector::ehat(n, k)))
                            .and_then(|x| x.wedge(&Multivector::ehat(n, l)))
                            .unwrap();
                        brute = &brute + &w.scale(&(r.get(i, j, k, l).clone() / q(4)));
                    }
                }
            }
        }
        assert_eq!(curvature_bivector(&r).unwrap(), brute);
    }

    #[test]
    fn euler_of_unit_sphere_integrates_to_two() {
        let r = CurvatureTensor::<Rational>::round_sphere(2);
        let e = euler_form(&r).unwrap();
        // 1/(2π) times area 4π
        assert_eq!(e, PiMultiple { coeff: Rational::from_ratio(1, 2), pi_power: -1 });
        assert!((e.to_f64() * 4.0 * PI - 2.0).abs() < 1e-14);
    }

    #[test]
    fn euler_sectional_curvature_reading() {
        // sectional curvature κ corresponds to R_{1212} = −κ
        let r = CurvatureTensor::from_entries(2, &[(0, 1, 0, 1, q(-5))]).unwrap();
        assert_eq!(euler_form(&r).unwrap().coeff, Rational::from_ratio(5, 2));
    }

    #[test]
    fn euler_odd_and_flat() {
        assert_eq!(
            euler_form(&CurvatureTensor::<Rational>::zero(3)),
            Err(Error::OddDimension(3))
        );
        assert!(euler_form(&CurvatureTensor::<Rational>::zero(4)).unwrap().coeff.is_zero());
    }

    #[test]
    fn density_of_point_is_one() {
        let iso = IsometryNormalForm::new(
            2,
            0,
            vec![Rotation { cos: Rational::from_ratio(3, 5), sin: Rational::from_ratio(4, 5) }],
        )
        .unwrap();
        let r = CurvatureTensor::<Rational>::round_sphere(2);
        assert_eq!(
            local_index_density(&r, &iso).unwrap(),
            PiMultiple { coeff: q(1), pi_power: 0 }
        );
    }

    #[test]
    fn density_matches_euler_on_surface() {
        let r = CurvatureTensor::from_entries(2, &[(0, 1, 0, 1, q(7))]).unwrap();
        let iso = IsometryNormalForm::identity(2).unwrap();
        assert_eq!(local_index_density(&r, &iso).unwrap(), euler_form(&r).unwrap());
    }

    #[test]
    fn transgression_in_dimension_two() {
        let r = CurvatureTensor::<Rational>::round_sphere(2);
        let s12 = Multivector::e(2, 0).scale(&q(3));
        let s_dot = FormMatrix::new(vec![
            vec![Multivector::zero(2), s12.clone()],
            vec![-&s12, Multivector::zero(2)],
        ])
        .unwrap();
        let t = transgression(&r, &s_dot, 2).unwrap();
        assert_eq!(t.coeff, s12.scale(&Rational::from_ratio(-1, 2)));
        assert_eq!(t.pi_power, -1);
    }

    #[test]
    fn transgression_homogeneity() {
        let r = CurvatureTensor::from_entries(
            4,
            &[(0, 1, 0, 1, q(2)), (0, 2, 1, 3, q(1)), (2, 3, 2, 3, q(-3)), (0, 1, 2, 3, q(5))],
        )
        .unwrap();
        let t = transgression(&r, &r.two_form_matrix(), 4).unwrap();
        let e = euler_form(&r).unwrap();
        let expected = Multivector::monomial(4, BasisWord::new(0b1111, 0), e.coeff * q(2));
        assert_eq!(t.coeff, expected);
    }
}
