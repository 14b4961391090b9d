use heatkernel::equivariant::curvature_bivector;
use heatkernel::getzler::{
    exactness_threshold, lichnerowicz_split, volterra_compose, weitzenbock, Algebra, GradedDiffOp,
};
use heatkernel::Rational;

use super::{err_text, Outcome, Runner};
use crate::sample;

pub(super) fn run(runner: &mut Runner) {
    let cfg = runner.config;
    for n in [2, 4] {
        for s in 0..cfg.samples {
            let name = format!("model_operator/n={n}/sample={s}");
            let mut rng = sample::rng_for(cfg.seed, &name);
            runner.check(&name, "", || {
                let r = sample::curvature(&mut rng, n);
                let heat = GradedDiffOp::dt(n, 1, Algebra::Clifford)
                    .try_add(&weitzenbock(&r).map_err(err_text)?)
                    .map_err(err_text)?;
                let half = Rational::new((-1).into(), 2.into());
                let expected = GradedDiffOp::dt(n, 1, Algebra::Exterior)
                    .try_sub(&GradedDiffOp::laplacian(n, 1, Algebra::Exterior))
                    .and_then(|op| {
                        op.try_add(&GradedDiffOp::exterior(&curvature_bivector(&r)?, 1).scale(&half))
                    })
                    .map_err(err_text)?;
                Ok(Outcome::exact(expected.to_canonical_text(), heat.model_operator().to_canonical_text()))
            });
        }
    }

    for s in 0..cfg.samples {
        let name = format!("lichnerowicz/n=4/sample={s}");
        let mut rng = sample::rng_for(cfg.seed, &name);
        runner.check(&name, "rank=2", || {
            let r = sample::curvature(&mut rng, 4);
            let data = sample::bundle_data(&mut rng, 4, 2);
            let check = lichnerowicz_split(&r, &data).and_then(|s| s.check()).map_err(err_text)?;
            let show = |a: bool, b: bool| format!("laplacian_split={a} sigma_split={b}");
            Ok(Outcome::exact(show(true, true), show(check.laplacian_split, check.sigma_split)))
        });
    }

    for n in 1..=3 {
        for s in 0..cfg.samples {
            let name = format!("volterra_associativity/n={n}/sample={s}");
            let mut rng = sample::rng_for(cfg.seed, &name);
            runner.check(&name, "degree<=2", || {
                let q: Vec<_> = (0..3).map(|_| sample::symbol(&mut rng, n, 2, 3)).collect();
                let exact = |a, b| volterra_compose(a, b, exactness_threshold(a, b)).map_err(err_text);
                let q01 = exact(&q[0], &q[1])?;
                let q12 = exact(&q[1], &q[2])?;
                let left = exact(&q01, &q[2])?;
                let right = exact(&q[0], &q12)?;
                let show = |x: &heatkernel::getzler::VolterraSymbol<Rational>| {
                    x.terms().map(|(m, c)| format!("{m:?}:{c}")).collect::<Vec<_>>().join(";")
                };
                Ok(Outcome::exact(show(&left), show(&right)))
            });
        }
    }
}
