use heatkernel::duhamel::{
    commutator_expansion, duhamel_direct, duhamel_series, FiniteOperator, Grading, SigmaMatrix, TraceKind,
};

use super::{err_text, log_log_slope, Outcome, Runner};
use crate::sample;

pub(super) fn run(runner: &mut Runner) {
    let cfg = runner.config;
    let tol = &cfg.tolerances;

    for order in 1..=3usize {
        for s in 0..cfg.samples {
            let name = format!("remainder_slope/N={order}/sample={s}");
            let mut rng = sample::rng_for(cfg.seed, &name);
            runner.check(&name, "dim=8", || {
                let h = FiniteOperator::hermitian(sample::hermitian(&mut rng, 8, 0.0, 1.0)).map_err(err_text)?;
                let b = FiniteOperator::new(sample::gaussian_matrix(&mut rng, 8, 8)).map_err(err_text)?;
                let points = (3..=10)
                    .map(|k| {
                        let s = 2f64.powi(-k);
                        commutator_expansion(&h, &b, s, order).map(|e| (s, e.remainder_norm))
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err_text)?;
                Ok(Outcome::close(order as f64, log_log_slope(&points), tol.slope))
            });
        }
    }

    for k in [2usize, 3] {
        for s in 0..cfg.samples {
            let name = format!("series_slope/K={k}/sample={s}");
            let mut rng = sample::rng_for(cfg.seed, &name);
            runner.check(&name, "dim=4", || {
                let (h, l, c, phi, grading) = surrogate(&mut rng).map_err(err_text)?;
                let errors = [0.05, 0.025, 0.0125]
                    .iter()
                    .map(|&t| {
                        let series = duhamel_series(&h, &l, &c, &phi, &grading, t, k, TraceKind::Plain)?;
                        let direct = duhamel_direct(&h, &l, &c, &phi, &grading, t, TraceKind::Plain)?;
                        Ok((series.value - direct).abs())
                    })
                    .collect::<heatkernel::Result<Vec<_>>>()
                    .map_err(err_text)?;
                Ok(Outcome::close((k + 1) as f64, extrapolated_order(&errors), tol.slope))
            });
        }
    }

    for s in 0..cfg.samples {
        let name = format!("series_error/K=3/t=0.05/sample={s}");
        let mut rng = sample::rng_for(cfg.seed, &name);
        runner.check(&name, "dim=4", || {
            let (h, l, c, phi, grading) = surrogate(&mut rng).map_err(err_text)?;
            let t = 0.05;
            let series = duhamel_series(&h, &l, &c, &phi, &grading, t, 3, TraceKind::Plain).map_err(err_text)?;
            let direct = duhamel_direct(&h, &l, &c, &phi, &grading, t, TraceKind::Plain).map_err(err_text)?;
            Ok(Outcome::at_most((series.value - direct).abs() / direct.abs().max(1e-300), tol.duhamel))
        });
    }
}

/// Order `p` of `e(t) ≈ c t^p (1 + d t)` from errors at `t, t/2, t/4`,
/// with the `d t` correction eliminated.
fn extrapolated_order(e: &[f64]) -> f64 {
    let (r1, r2) = (e[0] / e[1], e[1] / e[2]);
    (2.0 * r2 - r1).log2()
}

type Surrogate = (FiniteOperator, SigmaMatrix, nalgebra::DMatrix<f64>, nalgebra::DMatrix<f64>, Grading);

fn surrogate(rng: &mut impl rand::Rng) -> heatkernel::Result<Surrogate> {
    let h = FiniteOperator::hermitian(sample::hermitian(rng, 4, 0.0, 2.0))?;
    // a perturbation of norm about one
    let l = SigmaMatrix {
        even: sample::gaussian_matrix(rng, 4, 4) * 0.25,
        odd: sample::gaussian_matrix(rng, 4, 4) * 0.25,
    };
    let c = nalgebra::DMatrix::identity(4, 4) + sample::gaussian_matrix(rng, 4, 4) * 0.3;
    let phi = sample::orthogonal(rng, 4);
    Ok((h, l, c, phi, Grading::split(2, 2)))
}
