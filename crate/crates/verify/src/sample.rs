//! Seeded random instances. Every check derives its own stream from the
//! config seed and its name, so records do not depend on evaluation order.

use heatkernel::clifford::CliffordElement;
use heatkernel::equivariant::{BundleVariationData, CurvatureTensor, IsometryNormalForm, Rotation};
use heatkernel::getzler::{SymbolMonomial, VolterraSymbol};
use heatkernel::multivector::BasisWord;
use heatkernel::spectral::{FiniteComplex, MetricPath};
use heatkernel::{Rational, Scalar};
use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(label.as_bytes());
    let bytes: [u8; 32] = h.finalize().into();
    ChaCha8Rng::from_seed(bytes)
}

fn q(x: i64) -> Rational {
    Rational::from_i64(x)
}

pub fn symmetric_int(rng: &mut impl Rng, n: usize, bound: i64) -> DMatrix<Rational> {
    let mut m = DMatrix::from_element(n, n, Rational::zero());
    for i in 0..n {
        for j in i..n {
            let v = q(rng.random_range(-bound..=bound));
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// Sum of two Kulkarni–Nomizu products of small integer symmetric forms.
pub fn curvature(rng: &mut impl Rng, n: usize) -> CurvatureTensor<Rational> {
    let mut r = CurvatureTensor::zero(n);
    for _ in 0..2 {
        let h = symmetric_int(rng, n, 3);
        let k = symmetric_int(rng, n, 3);
        let term = CurvatureTensor::kulkarni_nomizu(&h, &k).expect("symmetric inputs");
        r = r.add(&term).expect("same dimension");
    }
    r
}

/// Rational point `(cos θ, sin θ)` from a Pythagorean triple.
pub fn rotation(rng: &mut impl Rng) -> Rotation<Rational> {
    let m: i64 = rng.random_range(2..=6);
    let k: i64 = rng.random_range(1..m);
    let hyp = m * m + k * k;
    let (mut c, mut s) = (m * m - k * k, 2 * m * k);
    if rng.random_bool(0.5) {
        std::mem::swap(&mut c, &mut s);
    }
    if rng.random_bool(0.5) {
        c = -c;
    }
    if rng.random_bool(0.5) {
        s = -s;
    }
    Rotation { cos: Rational::new(c.into(), hyp.into()), sin: Rational::new(s.into(), hyp.into()) }
}

pub fn isometry(rng: &mut impl Rng, n: usize, a: usize) -> IsometryNormalForm<Rational> {
    let blocks = (0..(n - a) / 2).map(|_| rotation(rng)).collect();
    IsometryNormalForm::new(n, a, blocks).expect("valid normal form")
}

/// Random angle in `[margin, 2π − margin]`.
pub fn angle(rng: &mut impl Rng, margin: f64) -> f64 {
    rng.random_range(margin..(2.0 * std::f64::consts::PI - margin))
}

pub fn clifford_element(rng: &mut impl Rng, n: usize, terms: usize) -> CliffordElement<Rational> {
    let mut x = CliffordElement::zero(n);
    let full = (1u32 << n) - 1;
    for _ in 0..terms {
        let word = BasisWord::new(rng.random_range(0..=full), rng.random_range(0..=full));
        x.add_term(word, q(rng.random_range(-4..=4)));
    }
    x
}

fn int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> DMatrix<Rational> {
    DMatrix::from_fn(rows, cols, |_, _| q(rng.random_range(-bound..=bound)))
}

fn antisymmetric_int(rng: &mut impl Rng, n: usize, bound: i64) -> DMatrix<Rational> {
    let m = int_matrix(rng, n, n, bound);
    &m - m.transpose()
}

pub fn bundle_data(rng: &mut impl Rng, n: usize, rank: usize) -> BundleVariationData<Rational> {
    let omega = (0..n).map(|_| int_matrix(rng, rank, rank, 2)).collect();
    let nabla = (0..n).map(|_| (0..n).map(|_| int_matrix(rng, rank, rank, 2)).collect()).collect();
    let phi = int_matrix(rng, rank, rank, 2);
    let g_dot = symmetric_int(rng, n, 2);
    let v = int_matrix(rng, rank, rank, 2);
    let s_dot = (0..n).map(|_| antisymmetric_int(rng, n, 2)).collect();
    BundleVariationData::new(omega, nabla, phi, g_dot, v, s_dot).expect("shapes are consistent")
}

/// Polynomial symbol with integer coefficients and `|x-degree|, |ξ-degree|, τ-degree ≤ degree`.
pub fn symbol(rng: &mut impl Rng, n: usize, degree: u32, terms: usize) -> VolterraSymbol<Rational> {
    let mut out = VolterraSymbol::zero(n);
    for _ in 0..terms {
        let mut m = SymbolMonomial::one(n);
        for _ in 0..rng.random_range(0..=degree) {
            m.x[rng.random_range(0..n)] += 1;
        }
        for _ in 0..rng.random_range(0..=degree) {
            m.xi[rng.random_range(0..n)] += 1;
        }
        m.tau = rng.random_range(0..=degree / 2);
        let c = num_complex::Complex::new(q(rng.random_range(-3..=3)), q(rng.random_range(-3..=3)));
        let term = VolterraSymbol::monomial(n, m, c).expect("shape is valid");
        out = out.try_add(&term).expect("same dimension");
    }
    out
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        // Box–Muller
        let u: f64 = rng.random_range(f64::EPSILON..1.0);
        let v: f64 = rng.random();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    })
}

pub fn orthogonal(rng: &mut impl Rng, d: usize) -> DMatrix<f64> {
    gaussian_matrix(rng, d, d).qr().q()
}

/// Symmetric matrix with spectrum drawn from `[lo, hi]`.
pub fn hermitian(rng: &mut impl Rng, d: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    let u = orthogonal(rng, d);
    let spectrum = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |_, _| rng.random_range(lo..=hi)));
    &u * spectrum * u.transpose()
}

/// Acyclic `C⁰ → C¹ → C²` with `dim C¹ = k0 + k2`, an orthogonal chain map
/// and an exponential metric path with the given rates.
pub fn acyclic_complex(rng: &mut impl Rng, k0: usize, k2: usize, rates: [f64; 3]) -> FiniteComplex {
    let k1 = k0 + k2;
    let qm = orthogonal(rng, k1);
    let a_scale = rng.random_range(0.5..2.0);
    let b_scale = rng.random_range(0.5..2.0);
    let a = orthogonal(rng, k0) * a_scale;
    let b = orthogonal(rng, k2) * b_scale;
    let q0 = qm.columns(0, k0).into_owned();
    let q2 = qm.columns(k0, k2).into_owned();
    let d0 = &q0 * &a;
    let d1 = &b * q2.transpose();
    let u0 = orthogonal(rng, k0);
    let u2 = orthogonal(rng, k2);
    let a_inv = a.clone().try_inverse().expect("orthogonal");
    let b_inv = b.clone().try_inverse().expect("orthogonal");
    let mut middle = DMatrix::zeros(k1, k1);
    middle.view_mut((0, 0), (k0, k0)).copy_from(&(&a * &u0 * a_inv));
    middle.view_mut((k0, k0), (k2, k2)).copy_from(&(b_inv * &u2 * &b));
    let phi1 = &qm * middle * qm.transpose();
    let dims = vec![k0, k1, k2];
    let base = dims.iter().map(|&k| DMatrix::identity(k, k)).collect();
    let metric = MetricPath::Exponential { base, rates: rates.to_vec() };
    FiniteComplex::new(dims, vec![d0, d1], vec![u0, phi1, u2], metric).expect("acyclic by construction")
}
