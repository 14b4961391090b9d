mod common;

use common::{dirichlet_moment, gaussian, orthogonal, rng, symmetric_with_spectrum};
use heatkernel::duhamel::{
    commutator_expansion, commutator_remainder, duhamel_direct, duhamel_series, FiniteOperator, Grading,
    SigmaMatrix, SimplexQuadrature, TraceKind,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

/// `A + σB` as the block matrix `[[A, B], [B, A]]`, where `σ` swaps the halves.
fn block(x: &SigmaMatrix) -> DMatrix<f64> {
    let d = x.even.nrows();
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    m.view_mut((0, 0), (d, d)).copy_from(&x.even);
    m.view_mut((d, d), (d, d)).copy_from(&x.even);
    m.view_mut((0, d), (d, d)).copy_from(&x.odd);
    m.view_mut((d, 0), (d, d)).copy_from(&x.odd);
    m
}

fn random_sigma(seed: u64, d: usize, scale: f64) -> SigmaMatrix {
    let mut r = rng(seed);
    SigmaMatrix { even: gaussian(&mut r, d, d) * scale, odd: gaussian(&mut r, d, d) * scale }
}

#[test]
fn simplex_rules_integrate_monomials_exactly() {
    for k in 1..=4 {
        for s in 0..=4 {
            let rule = SimplexQuadrature::grundmann_moller(k, s);
            // every exponent vector of total degree ≤ 2s + 1 on k + 1 coordinates
            let mut alpha = vec![0u32; k + 1];
            loop {
                let total: u32 = alpha.iter().sum();
                if total as usize <= 2 * s + 1 {
                    let got = rule.integrate(|u| u.iter().zip(&alpha).map(|(x, &a)| x.powi(a as i32)).product());
                    let want = dirichlet_moment(&alpha);
                    assert!((got - want).abs() < 1e-13 * want.max(1e-3), "k={k} s={s} α={alpha:?}");
                }
                let mut i = 0;
                loop {
                    if i == alpha.len() {
                        break;
                    }
                    alpha[i] += 1;
                    if alpha[i] as usize <= 2 * s + 1 {
                        break;
                    }
                    alpha[i] = 0;
                    i += 1;
                }
                if i == alpha.len() {
                    break;
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simplex_rules_are_permutation_invariant(seed in any::<u64>(), k in 1usize..=4, s in 0usize..=3) {
        let mut r = rng(seed);
        let coeffs: Vec<f64> = (0..=k).map(|_| r.random_range(-2.0..2.0)).collect();
        let rule = SimplexQuadrature::grundmann_moller(k, s);
        let f = |u: &[f64]| u.iter().zip(&coeffs).map(|(x, c)| (c * x).exp()).sum::<f64>() * u[0];
        let direct = rule.integrate(f);
        let rotated = rule.integrate(|u| {
            let mut v = u.to_vec();
            v.rotate_left(1);
            f(&v)
        });
        let mirrored = rule.integrate(|u| {
            let v: Vec<f64> = u.iter().rev().copied().collect();
            f(&v)
        });
        let tol = 1e-12 * direct.abs().max(1.0);
        prop_assert!((rotated - direct).abs() < tol);
        prop_assert!((mirrored - direct).abs() < tol);
        let volume: f64 = rule.weights().iter().sum::<f64>() * (1..=k).map(|i| i as f64).product::<f64>();
        prop_assert!((volume - 1.0).abs() < 1e-12);
    }

    #[test]
    fn commutator_expansion_remainder_identity(seed in any::<u64>(), n in 1usize..=3, s in 0.05f64..1.0) {
        let mut r = rng(seed);
        let h = FiniteOperator::hermitian(symmetric_with_spectrum(&mut r, 6, 0.0, 1.0)).unwrap();
        let b = FiniteOperator::new(gaussian(&mut r, 6, 6)).unwrap();
        let exp = commutator_expansion(&h, &b, s, n).unwrap();
        let rem = commutator_remainder(&h, &b, s, n).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = h.heat(s) * b.matrix() - &exp.approximation;
        let residual = (&lhs - rem * (sign * s.powi(n as i32))).amax();
        prop_assert!(residual < 1e-10, "residual {residual}");
        prop_assert!((lhs.norm() - exp.remainder_norm).abs() < 1e-12);
    }

    #[test]
    fn sigma_heat_matches_block_exponential(seed in any::<u64>(), t in 0.01f64..2.0) {
        let x = random_sigma(seed, 4, 0.5);
        let heat = x.heat(t);
        let oracle = (block(&x) * -t).exp();
        prop_assert!((block(&heat) - oracle).amax() < 1e-10);
    }

    #[test]
    fn sigma_product_matches_block_product(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (x, y) = (random_sigma(s1, 3, 1.0), random_sigma(s2, 3, 1.0));
        prop_assert!((block(&x.mul(&y)) - block(&x) * block(&y)).amax() < 1e-12);
    }

    #[test]
    fn series_terms_obey_the_factorial_bound(seed in any::<u64>(), t in 0.05f64..0.5) {
        let mut r = rng(seed);
        let d = 4;
        let h = FiniteOperator::hermitian(symmetric_with_spectrum(&mut r, d, 0.0, 2.0)).unwrap();
        let l = random_sigma(seed ^ 1, d, 0.5);
        let c = DMatrix::identity(d, d) + gaussian(&mut r, d, d) * 0.3;
        let phi = orthogonal(&mut r, d);
        let series = duhamel_series(&h, &l, &c, &phi, &Grading::split(2, 2), t, 4, TraceKind::Plain).unwrap();
        let norm = |m: &DMatrix<f64>| m.clone().singular_values().max();
        let base = d as f64 * norm(&(&phi * &c));
        let rate = t * (norm(&l.even) + norm(&l.odd));
        let mut fact = 1.0;
        for (k, term) in series.terms.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            prop_assert!(term.abs() <= base * rate.powi(k as i32) / fact * (1.0 + 1e-9) + 1e-14);
        }
    }

    #[test]
    fn sigma_series_converges_to_the_direct_value(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = 4;
        let h = FiniteOperator::hermitian(symmetric_with_spectrum(&mut r, d, 0.0, 2.0)).unwrap();
        let l = random_sigma(seed ^ 7, d, 0.25);
        let c = DMatrix::identity(d, d) + gaussian(&mut r, d, d) * 0.3;
        let phi = orthogonal(&mut r, d);
        let g = Grading::split(2, 2);
        let t = 0.05;
        for kind in [TraceKind::Plain, TraceKind::Sigma] {
            let series = duhamel_series(&h, &l, &c, &phi, &g, t, 5, kind).unwrap();
            let direct = duhamel_direct(&h, &l, &c, &phi, &g, t, kind).unwrap();
            prop_assert!((series.value - direct).abs() < 1e-9, "{kind:?}: {} vs {direct}", series.value);
        }
    }
}
