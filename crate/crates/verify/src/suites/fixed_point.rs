use heatkernel::equivariant::{
    euler_form, fiber_integral, local_index_density, CurvatureTensor, FiberMode, IsometryNormalForm,
};
use heatkernel::scalar::format_rational;
use heatkernel::Rational;

use super::{err_text, CheckResult, Outcome, Runner};
use crate::sample;

fn density_vs_euler(r: &CurvatureTensor<Rational>, iso: &IsometryNormalForm<Rational>) -> CheckResult {
    let density = local_index_density(r, iso).map_err(err_text)?;
    let block = r.tangent_block(iso.fixed_dim()).map_err(err_text)?;
    let euler = euler_form(&block).map_err(err_text)?;
    let show = |c: &Rational, p: i32| format!("{} pi^{p}", format_rational(c));
    Ok(Outcome::exact(show(&euler.coeff, euler.pi_power), show(&density.coeff, density.pi_power)))
}

fn fiber_agreement(r: &CurvatureTensor<f64>, iso: &IsometryNormalForm<f64>, t: f64, tol: f64) -> CheckResult {
    let closed = fiber_integral(r, iso, t, FiberMode::ClosedForm).map_err(err_text)?;
    let quad = fiber_integral(r, iso, t, FiberMode::Quadrature).map_err(err_text)?;
    let scale = closed.value.max_abs().max(1.0);
    let diff = closed.value.try_sub(&quad.value).map_err(err_text)?.max_abs() / scale;
    Ok(Outcome::at_most(diff, tol))
}

pub(super) fn run(runner: &mut Runner) {
    let cfg = runner.config;
    let tol = cfg.tolerances.fiber;

    if let Some((path, scenario)) = &cfg.curvature {
        let inputs = path.display().to_string();
        runner.check("scenario/density_vs_euler", &inputs, || {
            let r = scenario.curvature::<Rational>().map_err(err_text)?;
            let mut rng = sample::rng_for(cfg.seed, "scenario");
            density_vs_euler(&r, &sample::isometry(&mut rng, scenario.n, scenario.a))
        });
        if scenario.a < scenario.n {
            for &t in &cfg.t_grid {
                runner.check(&format!("scenario/fiber/t={t}"), &inputs, || {
                    let r = scenario.curvature::<f64>().map_err(err_text)?;
                    fiber_agreement(&r, &scenario.isometry().map_err(err_text)?, t, tol)
                });
            }
        }
    }

    for (n, a) in [(4, 2), (4, 4), (6, 2), (6, 4), (6, 6)] {
        for s in 0..cfg.samples {
            let name = format!("density_vs_euler/n={n}/a={a}/sample={s}");
            let mut rng = sample::rng_for(cfg.seed, &name);
            runner.check(&name, "", || {
                let r = sample::curvature(&mut rng, n);
                density_vs_euler(&r, &sample::isometry(&mut rng, n, a))
            });
        }
    }

    for b in [2, 4] {
        for t in [0.1, 1.0] {
            for s in 0..cfg.samples {
                let name = format!("fiber/b={b}/t={t}/sample={s}");
                let mut rng = sample::rng_for(cfg.seed, &name);
                runner.check(&name, "", || {
                    let n = b + 2;
                    let angles: Vec<f64> = (0..b / 2).map(|_| sample::angle(&mut rng, 0.1)).collect();
                    let iso = IsometryNormalForm::from_angles(n, 2, &angles).map_err(err_text)?;
                    let r = sample::curvature(&mut rng, n).scale(&Rational::new(1.into(), 4.into())).to_f64();
                    fiber_agreement(&r, &iso, t, tol)
                });
            }
        }
    }
}
