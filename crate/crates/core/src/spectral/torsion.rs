//! Equivariant analytic torsion of a finite acyclic cochain complex with a
//! one-parameter family of inner products.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Inner products `h_q(ε)` on each cochain space.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricPath {
    /// `h_q(ε) = base_q + ε·velocity_q`.
    Affine { base: Vec<DMatrix<f64>>, velocity: Vec<DMatrix<f64>> },
    /// `h_q(ε) = e^{rate_q ε}·base_q`.
    Exponential { base: Vec<DMatrix<f64>>, rates: Vec<f64> },
}

impl MetricPath {
    pub fn constant(dims: &[usize]) -> Self {
        MetricPath::Exponential {
            base: dims.iter().map(|&d| DMatrix::identity(d, d)).collect(),
            rates: vec![0.0; dims.len()],
        }
    }

    fn len(&self) -> usize {
        match self {
            MetricPath::Affine { base, .. } | MetricPath::Exponential { base, .. } => base.len(),
        }
    }

    pub fn metric(&self, q: usize, eps: f64) -> DMatrix<f64> {
        match self {
            MetricPath::Affine { base, velocity } => &base[q] + &velocity[q] * eps,
            MetricPath::Exponential { base, rates } => &base[q] * (rates[q] * eps).exp(),
        }
    }

    /// `V_q = h_q⁻¹ ∂_ε h_q`.
    pub fn variation(&self, q: usize, eps: f64) -> Result<DMatrix<f64>> {
        match self {
            MetricPath::Affine { velocity, .. } => {
                let h = self.metric(q, eps);
                let inv = h.cholesky().ok_or_else(not_positive)?.inverse();
                Ok(inv * &velocity[q])
            }
            MetricPath::Exponential { base, rates } => {
                let d = base[q].nrows();
                Ok(DMatrix::identity(d, d) * rates[q])
            }
        }
    }
}

fn not_positive() -> Error {
    Error::MalformedComplex("inner product is not positive definite".into())
}

/// `C⁰ → C¹ → … → C^m` with an isometric chain map `φ`.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    dims: Vec<usize>,
    d: Vec<DMatrix<f64>>,
    phi: Vec<DMatrix<f64>>,
    metric: MetricPath,
}

const CHAIN_TOL: f64 = 1e-10;

impl FiniteComplex {
    /// `d[q]` maps `C^q → C^{q+1}` and has shape `dims[q+1] × dims[q]`.
    pub fn new(
        dims: Vec<usize>,
        d: Vec<DMatrix<f64>>,
        phi: Vec<DMatrix<f64>>,
        metric: MetricPath,
    ) -> Result<Self> {
        let m = dims.len();
        if m == 0 || d.len() + 1 != m || phi.len() != m || metric.len() != m {
            return Err(Error::MalformedComplex(format!(
                "{m} spaces, {} differentials, {} chain maps, {} metrics",
                d.len(),
                phi.len(),
                metric.len()
            )));
        }
        for (q, dq) in d.iter().enumerate() {
            if dq.shape() != (dims[q + 1], dims[q]) {
                return Err(Error::MalformedComplex(format!("d_{q} has shape {:?}", dq.shape())));
            }
        }
        for q in 0..m {
            if phi[q].shape() != (dims[q], dims[q]) {
                return Err(Error::MalformedComplex(format!("phi_{q} has shape {:?}", phi[q].shape())));
            }
        }
        if let MetricPath::Affine { base, velocity } = &metric {
            for q in 0..m {
                if base[q].shape() != (dims[q], dims[q]) || velocity[q].shape() != (dims[q], dims[q]) {
                    return Err(Error::MalformedComplex(format!("metric on C^{q} has the wrong shape")));
                }
            }
        }
        if let MetricPath::Exponential { base, .. } = &metric {
            for q in 0..m {
                if base[q].shape() != (dims[q], dims[q]) {
                    return Err(Error::MalformedComplex(format!("metric on C^{q} has the wrong shape")));
                }
            }
        }
        for q in 1..d.len() {
            if (&d[q] * &d[q - 1]).amax() > CHAIN_TOL {
                return Err(Error::MalformedComplex(format!("d_{q} d_{} is nonzero", q - 1)));
            }
        }
        for (q, dq) in d.iter().enumerate() {
            if (dq * &phi[q] - &phi[q + 1] * dq).amax() > CHAIN_TOL {
                return Err(Error::MalformedComplex(format!("phi does not commute with d_{q}")));
            }
        }
        Ok(Self { dims, d, phi, metric })
    }

    /// Two-term complex `ℝ^k → ℝ^k` given by `d` with the standard metric.
    pub fn two_term(d: DMatrix<f64>, phi0: DMatrix<f64>, phi1: DMatrix<f64>) -> Result<Self> {
        let dims = vec![d.ncols(), d.nrows()];
        let metric = MetricPath::constant(&dims);
        Self::new(dims, vec![d], vec![phi0, phi1], metric)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differentials(&self) -> &[DMatrix<f64>] {
        &self.d
    }

    pub fn chain_map(&self) -> &[DMatrix<f64>] {
        &self.phi
    }

    pub fn metric(&self) -> &MetricPath {
        &self.metric
    }

    pub fn with_metric(&self, metric: MetricPath) -> Result<Self> {
        Self::new(self.dims.clone(), self.d.clone(), self.phi.clone(), metric)
    }

    /// Block direct sum of two complexes of the same length.
    pub fn direct_sum(&self, other: &Self, eps: f64) -> Result<Self> {
        if self.dims.len() != other.dims.len() {
            return Err(Error::MalformedComplex("complexes of different length".into()));
        }
        let m = self.dims.len();
        let dims: Vec<usize> = (0..m).map(|q| self.dims[q] + other.dims[q]).collect();
        let d = (0..m - 1).map(|q| block_diag(&self.d[q], &other.d[q])).collect();
        let phi = (0..m).map(|q| block_diag(&self.phi[q], &other.phi[q])).collect();
        let base = (0..m)
            .map(|q| block_diag(&self.metric.metric(q, eps), &other.metric.metric(q, eps)))
            .collect();
        let metric = MetricPath::Exponential { base, rates: vec![0.0; m] };
        Self::new(dims, d, phi, metric)
    }
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// `h^{1/2}` and `h^{-1/2}` of a positive definite matrix.
fn square_roots(h: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if h.nrows() == 0 {
        return Ok((h.clone(), h.clone()));
    }
    let sym = (h + h.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(not_positive());
    }
    let v = &eig.eigenvectors;
    let root = v * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * v.transpose();
    let inv = v * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt())) * v.transpose();
    Ok((root, inv))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Torsion {
    /// `log T_φ = ½ Σ_q (−1)^q q Tr[φ_q log Δ_q]`.
    pub log_torsion: f64,
    /// `Tr[φ_q log Δ_q]` for each degree.
    pub log_det: Vec<f64>,
}

impl Torsion {
    pub fn value(&self) -> f64 {
        self.log_torsion.exp()
    }
}

/// Smallest Laplacian eigenvalue accepted as nonzero, relative to the largest.
const ACYCLIC_TOL: f64 = 1e-12;

pub fn finite_torsion(complex: &FiniteComplex, eps: f64) -> Result<Torsion> {
    let m = complex.dims.len();
    let roots = (0..m)
        .map(|q| square_roots(&complex.metric.metric(q, eps)))
        .collect::<Result<Vec<_>>>()?;
    // d in orthonormal frames: A_q = h_{q+1}^{1/2} d_q h_q^{-1/2}
    let a: Vec<DMatrix<f64>> = (0..m - 1).map(|q| &roots[q + 1].0 * &complex.d[q] * &roots[q].1).collect();
    let mut log_det = Vec::with_capacity(m);
    let mut log_torsion = 0.0;
    for q in 0..m {
        let k = complex.dims[q];
        let mut lap = DMatrix::zeros(k, k);
        if q + 1 < m {
            lap += a[q].transpose() * &a[q];
        }
        if q > 0 {
            lap += &a[q - 1] * a[q - 1].transpose();
        }
        if k == 0 {
            log_det.push(0.0);
            continue;
        }
        let eig = SymmetricEigen::new(lap);
        let scale = eig.eigenvalues.amax().max(1.0);
        if eig.eigenvalues.iter().any(|&l| l <= ACYCLIC_TOL * scale) {
            return Err(Error::NotAcyclic { degree: q });
        }
        let v = &eig.eigenvectors;
        let log_lap = v * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::ln)) * v.transpose();
        let phi = &roots[q].0 * &complex.phi[q] * &roots[q].1;
        let tr = (phi * log_lap).trace();
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        log_torsion += 0.5 * sign * q as f64 * tr;
        log_det.push(tr);
    }
    Ok(Torsion { log_torsion, log_det })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorsionVariation {
    /// Centered difference of `log T_φ`.
    pub finite_difference: f64,
    /// `½ Σ_q (−1)^q Tr[φ_q V_q]`.
    pub trace_formula: f64,
}

impl TorsionVariation {
    pub fn residual(&self) -> f64 {
        (self.finite_difference - self.trace_formula).abs()
    }
}

pub fn torsion_variation(complex: &FiniteComplex, eps: f64, step: f64) -> Result<TorsionVariation> {
    if !(step.abs() >= 1e-12) || eps + step == eps || eps - step == eps {
        return Err(Error::StepUnderflow(step));
    }
    let plus = finite_torsion(complex, eps + step)?.log_torsion;
    let minus = finite_torsion(complex, eps - step)?.log_torsion;
    let mut trace_formula = 0.0;
    for q in 0..complex.dims.len() {
        let v = complex.metric.variation(q, eps)?;
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        trace_formula += 0.5 * sign * (&complex.phi[q] * v).trace();
    }
    Ok(TorsionVariation { finite_difference: (plus - minus) / (2.0 * step), trace_formula })
}
