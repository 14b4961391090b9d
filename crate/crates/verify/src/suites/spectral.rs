use std::f64::consts::PI;

use heatkernel::spectral::{
    build_model, cutoff_for, fixed_point_prediction, heat_supertrace, lefschetz_number, variation_supertrace,
    Geometry, IsometryAction, VariationMultiplier,
};

use super::{err_text, Outcome, Runner};
use crate::report::TraceRow;

/// The exactly solvable instances checked when the config names no geometry.
pub(crate) fn standard_cases() -> Vec<(Geometry, IsometryAction)> {
    vec![
        (Geometry::Sphere, IsometryAction::Rotation(0.0)),
        (Geometry::Sphere, IsometryAction::Rotation(0.7)),
        (Geometry::Sphere, IsometryAction::Rotation(PI / 2.0)),
        (Geometry::Sphere, IsometryAction::Rotation(PI)),
        (Geometry::Torus, IsometryAction::Translation([PI, PI])),
        (Geometry::Torus, IsometryAction::Negation),
        (Geometry::Torus, IsometryAction::Identity),
    ]
}

pub(crate) fn case_label(geometry: Geometry, action: &IsometryAction) -> String {
    let g = match geometry {
        Geometry::Sphere => "sphere",
        Geometry::Torus => "torus",
    };
    let a = match action {
        IsometryAction::Identity => "identity".to_string(),
        IsometryAction::Negation => "negation".to_string(),
        IsometryAction::Rotation(theta) => format!("rotation={theta}"),
        IsometryAction::Translation([x, y]) => format!("translation={x},{y}"),
    };
    format!("{g}/{a}")
}

pub(super) fn run(runner: &mut Runner) {
    let cfg = runner.config;
    let tol = &cfg.tolerances;
    let cases = match cfg.geometry {
        None => standard_cases(),
        Some(g) if cfg.actions.is_empty() => vec![(g, IsometryAction::Identity)],
        Some(g) => cfg.actions.iter().map(|a| (g, *a)).collect(),
    };
    let t_min = cfg.t_grid.iter().copied().fold(f64::INFINITY, f64::min);

    for (geometry, action) in cases {
        let label = case_label(geometry, &action);
        let model = cfg
            .cutoff
            .map_or_else(|| cutoff_for(geometry, t_min, tol.tail), Ok)
            .and_then(|c| build_model(geometry, c));
        let model = match model {
            Ok(m) => m,
            Err(e) => {
                runner.check(&format!("{label}/model"), "", || Err(err_text(e)));
                continue;
            }
        };
        let inputs = format!("cutoff={}", model.cutoff());
        let prediction = fixed_point_prediction(geometry, &action);

        let mut values = Vec::new();
        for &t in &cfg.t_grid {
            let result = heat_supertrace(&model, &action, t, tol.tail);
            if let Ok(v) = &result {
                values.push(v.value);
                runner.traces.push(TraceRow { case: label.clone(), t, supertrace: v.value, tail_bound: v.tail_bound });
            }
            runner.check(&format!("{label}/t={t}/supertrace"), &inputs, || {
                let expected = prediction.clone().map_err(err_text)?;
                Ok(Outcome::close(expected, result.map_err(err_text)?.value, tol.spectral))
            });
            runner.check(&format!("{label}/t={t}/variation"), &inputs, || {
                let expected = prediction.clone().map_err(err_text)?;
                let multiplier = VariationMultiplier::Constant(cfg.variation);
                let v = variation_supertrace(&model, &action, &multiplier, t, tol.tail).map_err(err_text)?;
                Ok(Outcome::close(cfg.variation * expected, v.value, tol.spectral))
            });
        }
        runner.check(&format!("{label}/lefschetz"), &inputs, || {
            let expected = prediction.clone().map_err(err_text)?;
            Ok(Outcome::close(expected, lefschetz_number(&model, &action).map_err(err_text)?, tol.spectral))
        });
        runner.check(&format!("{label}/constancy"), &inputs, || {
            if values.len() != cfg.t_grid.len() {
                return Err("supertrace failed on part of the t-grid".into());
            }
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(Outcome::at_most(hi - lo, tol.constancy))
        });
    }
}
