//! Heat supertraces on model surfaces and torsion of finite complexes.

mod model;
mod torsion;

pub use model::{
    build_model, cutoff_for, fixed_point_prediction, heat_supertrace, lefschetz_number, sphere_character,
    variation_supertrace, Geometry, HeatSupertrace, IsometryAction, Mode, ModeLabel, SpectralModel,
    VariationMultiplier,
};
pub use torsion::{finite_torsion, torsion_variation, FiniteComplex, MetricPath, Torsion, TorsionVariation};
