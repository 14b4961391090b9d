use heatkernel::spectral::{finite_torsion, torsion_variation, FiniteComplex, MetricPath};
use nalgebra::DMatrix;

use super::{err_text, log_log_slope, Outcome, Runner};
use crate::sample;

/// `(U_q)` acting on every cochain space: `d ↦ U d Uᵀ`, `φ ↦ U φ Uᵀ`.
fn rotate(c: &FiniteComplex, u: &[DMatrix<f64>]) -> heatkernel::Result<FiniteComplex> {
    let d = c.differentials().iter().enumerate().map(|(q, d)| &u[q + 1] * d * u[q].transpose()).collect();
    let phi = c.chain_map().iter().enumerate().map(|(q, p)| &u[q] * p * u[q].transpose()).collect();
    let metric = MetricPath::constant(c.dims());
    FiniteComplex::new(c.dims().to_vec(), d, phi, metric)
}

pub(super) fn run(runner: &mut Runner) {
    let cfg = runner.config;
    let tol = &cfg.tolerances;

    runner.check("closed_form/d=2", "", || {
        let one = DMatrix::from_element(1, 1, 1.0);
        let c = FiniteComplex::two_term(DMatrix::from_element(1, 1, 2.0), one.clone(), one).map_err(err_text)?;
        let t = finite_torsion(&c, 0.0).map_err(err_text)?;
        Ok(Outcome::close(0.5, t.value(), 0.0))
    });

    for s in 0..cfg.samples {
        let name = format!("unitary_invariance/sample={s}");
        let mut rng = sample::rng_for(cfg.seed, &name);
        runner.check(&name, "dims=2,5,3", || {
            let c = sample::acyclic_complex(&mut rng, 2, 3, [0.0; 3]);
            let u: Vec<_> = c.dims().iter().map(|&k| sample::orthogonal(&mut rng, k)).collect();
            let a = finite_torsion(&c, 0.0).map_err(err_text)?.log_torsion;
            let b = finite_torsion(&rotate(&c, &u).map_err(err_text)?, 0.0).map_err(err_text)?.log_torsion;
            Ok(Outcome::close(a, b, tol.torsion))
        });

        let name = format!("variation_order/sample={s}");
        let mut rng = sample::rng_for(cfg.seed, &name);
        runner.check(&name, "dims=2,5,3", || {
            // the residual against the exact derivative, here from a finer stencil
            let c = sample::acyclic_complex(&mut rng, 2, 3, [0.5, -1.0, 2.0]);
            let c = c
                .with_metric(MetricPath::Affine {
                    base: c.dims().iter().map(|&k| DMatrix::identity(k, k)).collect(),
                    velocity: c.dims().iter().map(|&k| sample::hermitian(&mut rng, k, -1.0, 1.0)).collect(),
                })
                .map_err(err_text)?;
            let eps = 0.1;
            let reference = richardson(&c, eps).map_err(err_text)?;
            let points = [4e-2, 2e-2, 1e-2, 5e-3]
                .iter()
                .map(|&h| torsion_variation(&c, eps, h).map(|v| (h, (v.finite_difference - reference).abs())))
                .collect::<heatkernel::Result<Vec<_>>>()
                .map_err(err_text)?;
            Ok(Outcome::close(2.0, log_log_slope(&points), tol.slope))
        });

        let name = format!("variation_identity/sample={s}");
        let mut rng = sample::rng_for(cfg.seed, &name);
        runner.check(&name, "dims=2,5,3", || {
            let c = sample::acyclic_complex(&mut rng, 2, 3, [0.5, -1.0, 2.0]);
            let v = torsion_variation(&c, 0.3, 1e-4).map_err(err_text)?;
            Ok(Outcome::close(v.trace_formula, v.finite_difference, 1e-7))
        });
    }
}

/// Fourth-order derivative of `log T` from two centered differences.
fn richardson(c: &FiniteComplex, eps: f64) -> heatkernel::Result<f64> {
    let h = 1e-3;
    let d1 = torsion_variation(c, eps, h)?.finite_difference;
    let d2 = torsion_variation(c, eps, h / 2.0)?.finite_difference;
    Ok((4.0 * d2 - d1) / 3.0)
}
