//! Independent oracles and random instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use heatkernel::clifford::{all_words, CliffordElement};
use heatkernel::equivariant::{BundleVariationData, CurvatureTensor, IsometryNormalForm, Rotation};
use heatkernel::getzler::{SymbolMonomial, VolterraSymbol};
use heatkernel::multivector::{BasisWord, Multivector};
use heatkernel::spectral::{FiniteComplex, MetricPath};
use heatkernel::{Rational, Scalar};
use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(x: i64) -> Rational {
    Rational::from_i64(x)
}

pub fn ratio(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

// ---------------------------------------------------------------------------
// random instances

pub fn symmetric_int(rng: &mut impl Rng, n: usize, bound: i64) -> DMatrix<Rational> {
    let mut m = DMatrix::from_element(n, n, q(0));
    for i in 0..n {
        for j in i..n {
            let v = q(rng.random_range(-bound..=bound));
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// `Σ h_i ⊙ k_i` over random integer symmetric forms; spans the algebraic
/// curvature tensors.
pub fn kn_curvature(rng: &mut impl Rng, n: usize, products: usize) -> CurvatureTensor<Rational> {
    let mut r = CurvatureTensor::zero(n);
    for _ in 0..products {
        let h = symmetric_int(rng, n, 3);
        let k = symmetric_int(rng, n, 3);
        r = r.add(&CurvatureTensor::kulkarni_nomizu(&h, &k).unwrap()).unwrap();
    }
    r
}

pub fn pythagorean_rotation(rng: &mut impl Rng) -> Rotation<Rational> {
    let m: i64 = rng.random_range(2..=7);
    let k: i64 = rng.random_range(1..m);
    let h = m * m + k * k;
    let mut c = m * m - k * k;
    let mut s = 2 * m * k;
    if rng.random_bool(0.5) {
        std::mem::swap(&mut c, &mut s);
    }
    if rng.random_bool(0.5) {
        c = -c;
    }
    if rng.random_bool(0.5) {
        s = -s;
    }
    Rotation { cos: ratio(c, h), sin: ratio(s, h) }
}

pub fn rational_isometry(rng: &mut impl Rng, n: usize, a: usize) -> IsometryNormalForm<Rational> {
    let blocks = (0..(n - a) / 2).map(|_| pythagorean_rotation(rng)).collect();
    IsometryNormalForm::new(n, a, blocks).unwrap()
}

pub fn random_word(rng: &mut impl Rng, n: usize) -> BasisWord {
    let full = (1u32 << n) - 1;
    BasisWord::new(rng.random_range(0..=full), rng.random_range(0..=full))
}

pub fn multivector(rng: &mut impl Rng, n: usize, terms: usize) -> Multivector<Rational> {
    let mut x = Multivector::zero(n);
    for _ in 0..terms {
        x.add_term(random_word(rng, n), q(rng.random_range(-5..=5)));
    }
    x
}

pub fn clifford(rng: &mut impl Rng, n: usize, terms: usize) -> CliffordElement<Rational> {
    let mut x = CliffordElement::zero(n);
    for _ in 0..terms {
        x.add_term(random_word(rng, n), q(rng.random_range(-5..=5)));
    }
    x
}

fn int_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<Rational> {
    DMatrix::from_fn(rows, cols, |_, _| q(rng.random_range(-2..=2)))
}

pub fn bundle_data(rng: &mut impl Rng, n: usize, rank: usize) -> BundleVariationData<Rational> {
    let omega = (0..n).map(|_| int_matrix(rng, rank, rank)).collect();
    let nabla = (0..n).map(|_| (0..n).map(|_| int_matrix(rng, rank, rank)).collect()).collect();
    let s_dot = (0..n)
        .map(|_| {
            let m = int_matrix(rng, n, n);
            &m - m.transpose()
        })
        .collect();
    BundleVariationData::new(
        omega,
        nabla,
        int_matrix(rng, rank, rank),
        symmetric_int(rng, n, 2),
        int_matrix(rng, rank, rank),
        s_dot,
    )
    .unwrap()
}

/// Integer polynomial symbol; each monomial has `x`- and `ξ`-degree at most
/// `degree` and `τ`-degree at most `max_tau`.
pub fn symbol(rng: &mut impl Rng, n: usize, degree: u32, max_tau: u32, terms: usize) -> VolterraSymbol<Rational> {
    let mut out = VolterraSymbol::zero(n);
    for _ in 0..terms {
        let mut m = SymbolMonomial::one(n);
        for _ in 0..rng.random_range(0..=degree) {
            m.x[rng.random_range(0..n)] += 1;
        }
        for _ in 0..rng.random_range(0..=degree) {
            m.xi[rng.random_range(0..n)] += 1;
        }
        m.tau = rng.random_range(0..=max_tau);
        let c = Complex::new(q(rng.random_range(-3..=3)), q(rng.random_range(-3..=3)));
        out = out.try_add(&VolterraSymbol::monomial(n, m, c).unwrap()).unwrap();
    }
    out
}

pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let u: f64 = rng.random_range(f64::EPSILON..1.0);
        let v: f64 = rng.random();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    })
}

pub fn orthogonal(rng: &mut impl Rng, d: usize) -> DMatrix<f64> {
    gaussian(rng, d, d).qr().q()
}

pub fn symmetric_with_spectrum(rng: &mut impl Rng, d: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    let u = orthogonal(rng, d);
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |_, _| rng.random_range(lo..=hi)));
    &u * diag * u.transpose()
}

/// Acyclic `C⁰ → C¹ → C²` with `dim C¹ = k0 + k2`, an orthogonal chain map
/// and the metric path `e^{rate_q ε}·1`.
pub fn acyclic_complex(rng: &mut impl Rng, k0: usize, k2: usize, rates: [f64; 3]) -> FiniteComplex {
    let k1 = k0 + k2;
    let basis = orthogonal(rng, k1);
    let a = orthogonal(rng, k0) * rng.random_range(0.5..2.0);
    let b = orthogonal(rng, k2) * rng.random_range(0.5..2.0);
    let d0 = basis.columns(0, k0) * &a;
    let d1 = &b * basis.columns(k0, k2).transpose();
    let (u0, u2) = (orthogonal(rng, k0), orthogonal(rng, k2));
    let mut middle = DMatrix::zeros(k1, k1);
    middle.view_mut((0, 0), (k0, k0)).copy_from(&(&a * &u0 * a.clone().try_inverse().unwrap()));
    middle.view_mut((k0, k0), (k2, k2)).copy_from(&(b.clone().try_inverse().unwrap() * &u2 * &b));
    let phi1 = &basis * middle * basis.transpose();
    let dims = vec![k0, k1, k2];
    let base = dims.iter().map(|&k| DMatrix::identity(k, k)).collect();
    let metric = MetricPath::Exponential { base, rates: rates.to_vec() };
    FiniteComplex::new(dims, vec![d0, d1], vec![u0, phi1, u2], metric).unwrap()
}

/// The same complex in new orthonormal bases `U_q`, with the constant metric.
pub fn rotate_complex(c: &FiniteComplex, u: &[DMatrix<f64>]) -> FiniteComplex {
    let d = c.differentials().iter().enumerate().map(|(q, d)| &u[q + 1] * d * u[q].transpose()).collect();
    let phi = c.chain_map().iter().enumerate().map(|(q, p)| &u[q] * p * u[q].transpose()).collect();
    FiniteComplex::new(c.dims().to_vec(), d, phi, MetricPath::constant(c.dims())).unwrap()
}

// ---------------------------------------------------------------------------
// oracles

/// Matrix of `Λg` on `ΛV`: the `(T, S)` entry is the minor `det g[T, S]`,
/// subsets indexed by bitmask in increasing order.
pub fn compound(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let dim = 1usize << n;
    let idx = |mask: usize| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>();
    DMatrix::from_fn(dim, dim, |t, s| {
        if t.count_ones() != s.count_ones() {
            return 0.0;
        }
        let (rows, cols) = (idx(t), idx(s));
        if rows.is_empty() {
            return 1.0;
        }
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| g[(rows[i], cols[j])]).determinant()
    })
}

/// Word coefficients of an element recovered from its matrix alone: the
/// represented words are signed permutation matrices, orthogonal under the
/// Frobenius product with norm `2ⁿ`.
pub fn decode_words(x: &CliffordElement<Rational>) -> Multivector<Rational> {
    let n = x.dim();
    let mx = x.represent().matrix;
    let scale = q(1 << n);
    let mut out = Multivector::zero(n);
    for w in all_words(n) {
        let mw = CliffordElement::word(n, w, q(1)).represent().matrix;
        let dot = mw.iter().zip(mx.iter()).fold(q(0), |acc, (a, b)| acc + a.clone() * b.clone());
        out.add_term(w, dot / scale.clone());
    }
    out
}

/// `∫_{Δ_k} Π u_j^{α_j} = Π α_j! / (|α| + k)!` over barycentric coordinates.
pub fn dirichlet_moment(alpha: &[u32]) -> f64 {
    let k = alpha.len() - 1;
    let fact = |m: u32| (1..=m).map(f64::from).product::<f64>();
    let total: u32 = alpha.iter().sum();
    alpha.iter().map(|&a| fact(a)).product::<f64>() / fact(total + k as u32)
}

/// `log T = Σ_q (−1)^{q+1} Σ_i log σ_i(d_q)` for an acyclic complex with
/// standard inner products and trivial action.
pub fn svd_log_torsion(d: &[DMatrix<f64>]) -> f64 {
    d.iter()
        .enumerate()
        .map(|(q, dq)| {
            let sign = if q % 2 == 0 { -1.0 } else { 1.0 };
            let logs: f64 = dq.singular_values().iter().filter(|s| **s > 1e-12).map(|s| s.ln()).sum();
            sign * logs
        })
        .sum()
}

/// Polynomial in `x` with complex rational coefficients.
pub type Poly = BTreeMap<Vec<u32>, Complex<Rational>>;

fn poly_add(p: &mut Poly, e: Vec<u32>, c: Complex<Rational>) {
    let entry = p.entry(e.clone()).or_insert_with(|| Complex::new(q(0), q(0)));
    *entry = entry.clone() + c;
    if entry.re == q(0) && entry.im == q(0) {
        p.remove(&e);
    }
}

pub fn random_poly(rng: &mut impl Rng, n: usize, degree: u32, terms: usize) -> Poly {
    let mut p = Poly::new();
    for _ in 0..terms {
        let mut e = vec![0; n];
        for _ in 0..rng.random_range(0..=degree) {
            e[rng.random_range(0..n)] += 1;
        }
        poly_add(&mut p, e, Complex::new(q(rng.random_range(-4..=4)), q(rng.random_range(-4..=4))));
    }
    p
}

/// `Op(q) f = Σ c x^a D^β f` with `D = −i∂`; `τ` enters as a formal
/// parameter and must be absent.
pub fn apply_symbol(s: &VolterraSymbol<Rational>, f: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in s.terms() {
        assert_eq!(m.tau, 0, "the polynomial oracle has no τ");
        for (e, fc) in f {
            let mut exps = e.clone();
            let mut factor = q(1);
            let mut ok = true;
            for (ej, &b) in exps.iter_mut().zip(&m.xi) {
                if b > *ej {
                    ok = false;
                    break;
                }
                for k in 0..b {
                    factor *= q((*ej - k) as i64);
                }
                *ej -= b;
            }
            if !ok {
                continue;
            }
            let order: u32 = m.xi.iter().sum();
            let phase = match order % 4 {
                0 => Complex::new(q(1), q(0)),
                1 => Complex::new(q(0), q(-1)),
                2 => Complex::new(q(-1), q(0)),
                _ => Complex::new(q(0), q(1)),
            };
            for (ej, &a) in exps.iter_mut().zip(&m.x) {
                *ej += a;
            }
            poly_add(&mut out, exps, c.clone() * fc.clone() * phase * Complex::new(factor, q(0)));
        }
    }
    out
}

/// `R` with frame indices `i` and `j` exchanged.
pub fn swap_indices(r: &CurvatureTensor<Rational>, i: usize, j: usize) -> CurvatureTensor<Rational> {
    let n = r.dim();
    let p = |x: usize| if x == i { j } else if x == j { i } else { x };
    let mut comps = Vec::with_capacity(n.pow(4));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    comps.push(r.get(p(a), p(b), p(c), p(d)).clone());
                }
            }
        }
    }
    CurvatureTensor::from_components(n, comps).unwrap()
}

pub fn word_degree(w: BasisWord) -> usize {
    w.degree()
}
