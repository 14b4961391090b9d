mod common;

use common::{clifford, decode_words, q, rng};
use heatkernel::clifford::{all_words, CliffordElement, SupertraceMethod};
use heatkernel::multivector::BasisWord;
use heatkernel::scalar::parity_sign;
use heatkernel::{Rational, Scalar};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn homogeneous(seed: u64, n: usize, parity: usize) -> CliffordElement<Rational> {
    let mut r = rng(seed);
    let x = clifford(&mut r, n, 8);
    let mut out = CliffordElement::zero(n);
    for (w, c) in x.terms() {
        if w.degree() % 2 == parity {
            out.add_term(w, c.clone());
        }
    }
    out
}

#[test]
fn generator_relations_in_the_matrix_representation() {
    for n in 1..=4 {
        let dim = 1 << n;
        let id = DMatrix::<Rational>::identity(dim, dim);
        let zero = DMatrix::<Rational>::from_element(dim, dim, q(0));
        let c: Vec<_> = (0..n).map(|i| CliffordElement::<Rational>::c(n, i).represent().matrix).collect();
        let h: Vec<_> = (0..n).map(|i| CliffordElement::<Rational>::chat(n, i).represent().matrix).collect();
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { id.clone() * q(2) } else { zero.clone() };
                assert_eq!(&c[i] * &c[j] + &c[j] * &c[i], -delta.clone());
                assert_eq!(&h[i] * &h[j] + &h[j] * &h[i], delta);
                assert_eq!(&c[i] * &h[j] + &h[j] * &c[i], zero);
            }
        }
    }
}

#[test]
fn only_the_top_word_has_a_supertrace() {
    for n in [2, 4] {
        for w in all_words(n) {
            let x = CliffordElement::word(n, w, q(1));
            let expected = if w == BasisWord::full(n) {
                parity_sign::<Rational>(n / 2) * Rational::from_i64(1 << n)
            } else {
                q(0)
            };
            assert_eq!(x.supertrace(SupertraceMethod::Matrix).unwrap(), expected);
            assert_eq!(x.supertrace(SupertraceMethod::Berezin).unwrap(), expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representation_is_a_homomorphism(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let (x, y) = (clifford(&mut r, n, 6), clifford(&mut r, n, 6));
        let product = x.multiply(&y).unwrap().represent().matrix;
        prop_assert_eq!(product, x.represent().matrix * y.represent().matrix);
    }

    #[test]
    fn product_is_associative(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let (x, y, z) = (clifford(&mut r, n, 5), clifford(&mut r, n, 5), clifford(&mut r, n, 5));
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn supercommutators_have_no_supertrace(seed in any::<u64>(), half in 1usize..=2, px in 0usize..2, py in 0usize..2) {
        let n = 2 * half;
        let x = homogeneous(seed, n, px);
        let y = homogeneous(seed ^ 0x9e37, n, py);
        let sign = if px * py == 1 { q(-1) } else { q(1) };
        let bracket = x.multiply(&y).unwrap().try_sub(&y.multiply(&x).unwrap().scale(&sign)).unwrap();
        prop_assert_eq!(bracket.supertrace(SupertraceMethod::Matrix).unwrap(), q(0));
        prop_assert_eq!(bracket.supertrace(SupertraceMethod::Berezin).unwrap(), q(0));
    }

    #[test]
    fn berezin_and_matrix_supertraces_agree(seed in any::<u64>(), half in 1usize..=3) {
        let n = 2 * half;
        let mut r = rng(seed);
        let x = clifford(&mut r, n, 10);
        prop_assert_eq!(
            x.supertrace(SupertraceMethod::Berezin).unwrap(),
            x.supertrace(SupertraceMethod::Matrix).unwrap()
        );
    }

    #[test]
    fn symbol_matches_matrix_decoding(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let x = clifford(&mut r, n, 8);
        prop_assert_eq!(decode_words(&x), x.symbol());
    }

    #[test]
    fn quantization_inverts_the_symbol(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let x = clifford(&mut r, n, 8);
        prop_assert_eq!(CliffordElement::quantize(&x.symbol()), x);
    }
}
