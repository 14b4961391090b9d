//! Heat kernel of the model operator `∂_t − Σ∂²_j − ½Ṙ`.

use std::f64::consts::PI;

use gauss_quad::GaussHermite;

use super::curvature::CurvatureTensor;
use super::isometry::IsometryNormalForm;
use super::curvature_bivector;
use crate::error::{Error, Result};
use crate::multivector::Multivector;

/// `K(x, y, t) = (4πt)^{−n/2} exp(−‖x−y‖²/4t) · exp(tṘ/2)` at a fixed `t`.
#[derive(Clone, Debug)]
pub struct MehlerKernel {
    n: usize,
    t: f64,
    curvature_factor: Multivector<f64>,
}

impl MehlerKernel {
    pub fn new(r: &CurvatureTensor<f64>, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTime(t));
        }
        let bivector = curvature_bivector(r)?;
        let curvature_factor = bivector.scale(&(t / 2.0)).exp_even()?;
        Ok(Self { n: r.dim(), t, curvature_factor })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// `exp(tṘ/2)`.
    pub fn curvature_factor(&self) -> &Multivector<f64> {
        &self.curvature_factor
    }

    /// Scalar Gaussian part `(4πt)^{−n/2} exp(−‖x−y‖²/4t)`.
    pub fn gaussian(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        for p in [x, y] {
            if p.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, found: p.len() });
            }
        }
        let dist2: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum();
        Ok((4.0 * PI * self.t).powf(-(self.n as f64) / 2.0) * (-dist2 / (4.0 * self.t)).exp())
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<Multivector<f64>> {
        Ok(self.curvature_factor.scale(&self.gaussian(x, y)?))
    }
}

pub fn mehler_kernel(r: &CurvatureTensor<f64>, t: f64, x: &[f64], y: &[f64]) -> Result<Multivector<f64>> {
    MehlerKernel::new(r, t)?.eval(x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberMode {
    ClosedForm,
    Quadrature,
}

#[derive(Clone, Debug)]
pub struct FiberIntegral {
    pub value: Multivector<f64>,
    /// Gauss-Hermite order per axis at convergence (0 for the closed form).
    pub order: usize,
}

const QUADRATURE_TOL: f64 = 1e-8;
const MAX_ORDER: usize = 200;

/// `∫_{N} K((0,v), (0,φ^N v), t) dv`, restricted to the fixed point `x = 0`.
pub fn fiber_integral(
    r: &CurvatureTensor<f64>,
    iso: &IsometryNormalForm<f64>,
    t: f64,
    mode: FiberMode,
) -> Result<FiberIntegral> {
    if r.dim() != iso.dim() {
        return Err(Error::DimensionMismatch { expected: iso.dim(), found: r.dim() });
    }
    let det = iso.det_one_minus_normal();
    if det.abs() < 1e-14 {
        return Err(Error::DegenerateAngle);
    }
    let kernel = MehlerKernel::new(r, t)?;
    match mode {
        FiberMode::ClosedForm => {
            let a = iso.fixed_dim() as f64;
            let scale = (4.0 * PI * t).powf(-a / 2.0) / det;
            Ok(FiberIntegral { value: kernel.curvature_factor().scale(&scale), order: 0 })
        }
        FiberMode::Quadrature => {
            let (scalar, order) = gaussian_fiber_quadrature(&kernel, iso)?;
            Ok(FiberIntegral { value: kernel.curvature_factor().scale(&scalar), order })
        }
    }
}

/// Tensor Gauss-Hermite of `v ↦ gaussian((0,v), (0,φv))` with each axis
/// rescaled to the width of the integrand, raising the order until two
/// successive orders agree.
fn gaussian_fiber_quadrature(kernel: &MehlerKernel, iso: &IsometryNormalForm<f64>) -> Result<(f64, usize)> {
    let (n, a, b) = (iso.dim(), iso.fixed_dim(), iso.normal_dim());
    let t = kernel.time();
    let phi = iso.normal_matrix();
    let diff = nalgebra::DMatrix::<f64>::identity(b, b) - &phi;
    let gram = diff.transpose() * &diff;
    let widths: Vec<f64> = (0..b).map(|k| (4.0 * t / gram[(k, k)]).sqrt()).collect();

    let evaluate = |order: usize| -> Result<f64> {
        let rule = GaussHermite::new(order)
            .map_err(|e| Error::QuadratureNonConvergence(e.to_string()))?;
        let pairs = rule.as_node_weight_pairs();
        let mut total = 0.0;
        let mut idx = vec![0usize; b];
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        loop {
            let mut weight = 1.0;
            let mut v = nalgebra::DVector::<f64>::zeros(b);
            for (k, &i) in idx.iter().enumerate() {
                let (node, w) = pairs[i];
                v[k] = widths[k] * node;
                weight *= w * widths[k] * (node * node).exp();
            }
            let pv = &phi * &v;
            for k in 0..b {
                x[a + k] = v[k];
                y[a + k] = pv[k];
            }
            total += weight * kernel.gaussian(&x, &y)?;
            // odometer over the tensor grid
            let mut k = 0;
            while k < b {
                idx[k] += 1;
                if idx[k] < order {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == b {
                break;
            }
        }
        Ok(total)
    };

    let mut order = 4;
    let mut prev = evaluate(order)?;
    while order < MAX_ORDER {
        let next_order = order * 2;
        let next = evaluate(next_order)?;
        if (next - prev).abs() < QUADRATURE_TOL * next.abs().max(1.0) {
            return Ok((next, next_order));
        }
        order = next_order;
        prev = next;
    }
    Err(Error::QuadratureNonConvergence(format!("no agreement up to order {MAX_ORDER}")))
}
