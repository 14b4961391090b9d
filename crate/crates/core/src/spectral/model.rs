//! Hodge spectra of the flat torus `ℝ²/2πℤ²` and the unit sphere `S²`
//! together with the characters of their isometries on each eigenspace.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::equivariant::{euler_form, local_index_density, CurvatureTensor, IsometryNormalForm};
use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Torus,
    Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IsometryAction {
    Identity,
    /// `x ↦ x + v` on the torus.
    Translation([f64; 2]),
    /// `x ↦ −x` on the torus.
    Negation,
    /// Rotation of the sphere by `θ` about a fixed axis.
    Rotation(f64),
}

impl IsometryAction {
    fn validate(&self, geometry: Geometry) -> Result<()> {
        let ok = match (geometry, self) {
            (_, IsometryAction::Identity) => true,
            (Geometry::Torus, IsometryAction::Translation(v)) => v.iter().all(|c| (0.0..2.0 * PI).contains(c)),
            (Geometry::Torus, IsometryAction::Negation) => true,
            (Geometry::Sphere, IsometryAction::Rotation(theta)) => (0.0..2.0 * PI).contains(theta),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{self:?} on {geometry:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeLabel {
    /// Fourier mode `e^{ik·x}`.
    Lattice([i64; 2]),
    /// Spherical-harmonic degree `l`; on 1-forms `exact` picks `d Y` over `⋆d Y`.
    Harmonic { l: u32, exact: bool },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode {
    pub eigenvalue: f64,
    pub degree: usize,
    pub multiplicity: usize,
    pub label: ModeLabel,
}

#[derive(Clone, Debug)]
pub struct SpectralModel {
    geometry: Geometry,
    cutoff: usize,
    modes: Vec<Mode>,
}

/// `χ_l(θ) = Σ_{|m|≤l} e^{imθ}`.
pub fn sphere_character(l: u32, theta: f64) -> f64 {
    1.0 + 2.0 * (1..=l).map(|m| (m as f64 * theta).cos()).sum::<f64>()
}

pub fn build_model(geometry: Geometry, cutoff: usize) -> Result<SpectralModel> {
    if cutoff == 0 {
        return Err(Error::InvalidCutoff(cutoff));
    }
    let mut modes = Vec::new();
    match geometry {
        Geometry::Torus => {
            let k = cutoff as i64;
            for k1 in -k..=k {
                for k2 in -k..=k {
                    let eigenvalue = (k1 * k1 + k2 * k2) as f64;
                    for (degree, multiplicity) in [(0, 1), (1, 2), (2, 1)] {
                        modes.push(Mode { eigenvalue, degree, multiplicity, label: ModeLabel::Lattice([k1, k2]) });
                    }
                }
            }
        }
        Geometry::Sphere => {
            for l in 0..=cutoff as u32 {
                let eigenvalue = (l * (l + 1)) as f64;
                let multiplicity = 2 * l as usize + 1;
                let harmonic = |exact| ModeLabel::Harmonic { l, exact };
                modes.push(Mode { eigenvalue, degree: 0, multiplicity, label: harmonic(false) });
                if l >= 1 {
                    modes.push(Mode { eigenvalue, degree: 1, multiplicity, label: harmonic(true) });
                    modes.push(Mode { eigenvalue, degree: 1, multiplicity, label: harmonic(false) });
                }
                modes.push(Mode { eigenvalue, degree: 2, multiplicity, label: harmonic(false) });
            }
        }
    }
    Ok(SpectralModel { geometry, cutoff, modes })
}

impl SpectralModel {
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Trace of `φ̃` on the eigenspace of `mode`.
    pub fn weight(&self, mode: &Mode, action: &IsometryAction) -> Complex64 {
        let m = mode.multiplicity as f64;
        match (mode.label, action) {
            (_, IsometryAction::Identity) => Complex64::new(m, 0.0),
            (ModeLabel::Lattice(k), IsometryAction::Translation(v)) => {
                Complex64::from_polar(m, k[0] as f64 * v[0] + k[1] as f64 * v[1])
            }
            // k ↦ −k permutes the nonzero modes; dx^i ↦ −dx^i on the k = 0 forms
            (ModeLabel::Lattice(k), IsometryAction::Negation) => {
                if k == [0, 0] {
                    let sign = if mode.degree.is_multiple_of(2) { 1.0 } else { -1.0 };
                    Complex64::new(sign * m, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            (ModeLabel::Harmonic { l, .. }, IsometryAction::Rotation(theta)) => {
                Complex64::new(sphere_character(l, *theta), 0.0)
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Bound on `Σ |weight| e^{−tλ}` over the modes beyond the cutoff.
    pub fn tail_bound(&self, t: f64) -> f64 {
        match self.geometry {
            Geometry::Torus => {
                let k = self.cutoff as f64;
                let head: f64 = (-(self.cutoff as i64)..=self.cutoff as i64)
                    .map(|j| (-t * (j * j) as f64).exp())
                    .sum();
                // both signs of Σ_{j>K} e^{−tj²} ≤ ∫_K^∞ e^{−tx²} dx
                let tail = (-t * k * k).exp() / (t * k);
                4.0 * (2.0 * head * tail + tail * tail)
            }
            Geometry::Sphere => {
                let l = self.cutoff as f64;
                if (2.0 * l + 1.0).powi(2) * t <= 2.0 {
                    return f64::INFINITY;
                }
                4.0 * (-t * l * (l + 1.0)).exp() / t
            }
        }
    }
}

/// Smallest cutoff whose tail bound at every `t ≥ t_min` is below `tol`.
pub fn cutoff_for(geometry: Geometry, t_min: f64, tol: f64) -> Result<usize> {
    if !(t_min > 0.0) {
        return Err(Error::NonPositiveTime(t_min));
    }
    for cutoff in 1..=10_000 {
        let model = SpectralModel { geometry, cutoff, modes: Vec::new() };
        if model.tail_bound(t_min) < tol {
            return Ok(cutoff);
        }
    }
    Err(Error::TailTooLarge { bound: f64::INFINITY, tolerance: tol })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatSupertrace {
    pub value: f64,
    pub tail_bound: f64,
}

/// Per-degree multiplier `V` acting on each form degree.
#[derive(Clone, Debug, PartialEq)]
pub enum VariationMultiplier {
    Zero,
    Constant(f64),
    PerDegree(Vec<f64>),
}

impl VariationMultiplier {
    fn factor(&self, degree: usize) -> Result<f64> {
        match self {
            VariationMultiplier::Zero => Ok(0.0),
            VariationMultiplier::Constant(v) => Ok(*v),
            VariationMultiplier::PerDegree(v) => {
                if v.len() != 3 {
                    return Err(Error::Unsupported(format!("{} per-degree factors on a surface", v.len())));
                }
                Ok(v[degree])
            }
        }
    }
}

fn weighted_supertrace(
    model: &SpectralModel,
    action: &IsometryAction,
    t: f64,
    tail_tol: f64,
    multiplier: &VariationMultiplier,
) -> Result<HeatSupertrace> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    action.validate(model.geometry)?;
    let tail = model.tail_bound(t);
    if !(tail <= tail_tol) {
        return Err(Error::TailTooLarge { bound: tail, tolerance: tail_tol });
    }
    let scale = match multiplier {
        VariationMultiplier::Zero => 0.0,
        VariationMultiplier::Constant(v) => v.abs(),
        VariationMultiplier::PerDegree(v) => v.iter().fold(0.0f64, |a, b| a.max(b.abs())),
    };
    let mut value = 0.0;
    for mode in &model.modes {
        let sign = if mode.degree % 2 == 0 { 1.0 } else { -1.0 };
        let w = model.weight(mode, action).re;
        value += sign * multiplier.factor(mode.degree)? * w * (-t * mode.eigenvalue).exp();
    }
    Ok(HeatSupertrace { value, tail_bound: tail * scale })
}

/// `Str[φ̃ e^{−tΔ}]` from the truncated spectrum.
pub fn heat_supertrace(model: &SpectralModel, action: &IsometryAction, t: f64, tail_tol: f64) -> Result<HeatSupertrace> {
    weighted_supertrace(model, action, t, tail_tol, &VariationMultiplier::Constant(1.0))
}

/// `Str[φ̃ V e^{−tΔ}]` for a multiplier acting degreewise.
pub fn variation_supertrace(
    model: &SpectralModel,
    action: &IsometryAction,
    multiplier: &VariationMultiplier,
    t: f64,
    tail_tol: f64,
) -> Result<HeatSupertrace> {
    weighted_supertrace(model, action, t, tail_tol, multiplier)
}

/// Supertrace of the action on harmonic forms.
pub fn lefschetz_number(model: &SpectralModel, action: &IsometryAction) -> Result<f64> {
    action.validate(model.geometry)?;
    Ok(model
        .modes
        .iter()
        .filter(|m| m.eigenvalue == 0.0)
        .map(|m| {
            let sign = if m.degree % 2 == 0 { 1.0 } else { -1.0 };
            sign * model.weight(m, action).re
        })
        .sum())
}

/// `Σ_{components F of M^φ} ∫_F e(TF)` evaluated with the local index density.
pub fn fixed_point_prediction(geometry: Geometry, action: &IsometryAction) -> Result<f64> {
    action.validate(geometry)?;
    // an isolated fixed point of a surface isometry is a rotation of its tangent plane
    let isolated = |cos: i64, sin: i64, den: i64| -> Result<f64> {
        let iso = IsometryNormalForm::new(
            2,
            0,
            vec![crate::equivariant::Rotation {
                cos: Rational::new(cos.into(), den.into()),
                sin: Rational::new(sin.into(), den.into()),
            }],
        )?;
        Ok(local_index_density(&CurvatureTensor::<Rational>::zero(2), &iso)?.to_f64())
    };
    match (geometry, action) {
        (Geometry::Sphere, IsometryAction::Identity) => {
            Ok(euler_form(&CurvatureTensor::<Rational>::round_sphere(2))?.to_f64() * 4.0 * PI)
        }
        (Geometry::Sphere, IsometryAction::Rotation(theta)) => {
            if theta.rem_euclid(2.0 * PI) == 0.0 {
                return fixed_point_prediction(geometry, &IsometryAction::Identity);
            }
            // the density at an isolated fixed point does not depend on the angle;
            // evaluate it at the rational point (3/5, 4/5) of the circle
            Ok(2.0 * isolated(3, 4, 5)?)
        }
        (Geometry::Torus, IsometryAction::Identity) => {
            Ok(euler_form(&CurvatureTensor::<Rational>::zero(2))?.to_f64() * 4.0 * PI * PI)
        }
        (Geometry::Torus, IsometryAction::Translation(v)) => {
            if v.iter().all(|c| *c == 0.0) {
                fixed_point_prediction(geometry, &IsometryAction::Identity)
            } else {
                Ok(0.0)
            }
        }
        // four half-periods (0|π, 0|π), each a half-turn of the tangent plane
        (Geometry::Torus, IsometryAction::Negation) => Ok(4.0 * isolated(-1, 0, 1)?),
        _ => Err(Error::Unsupported(format!("{action:?} on {geometry:?}"))),
    }
}
