//! Getzler-order bookkeeping, model operators, the Weitzenböck and
//! Lichnerowicz assemblies, and polynomial Volterra symbols.
//!
//! Getzler order: `∂_j ↦ 1`, `∂_t ↦ 2`, `c(e_j), ĉ(e_j) ↦ ½`, `x_j ↦ −1`.

mod lichnerowicz;
mod operator;
mod order;
mod volterra;

pub use lichnerowicz::{
    lichnerowicz_split, weitzenbock, LichnerowiczCheck, LichnerowiczSplit, SigmaExtendedOp,
};
pub use operator::{Algebra, GradedDiffOp, LowerOrder, Monomial};
pub use order::HalfInt;
pub use volterra::{exactness_threshold, volterra_compose, SymbolMonomial, VolterraSymbol};

use crate::scalar::Scalar;

pub fn getzler_order<S: Scalar>(op: &GradedDiffOp<S>) -> Option<HalfInt> {
    op.getzler_order()
}

pub fn model_operator<S: Scalar>(op: &GradedDiffOp<S>) -> GradedDiffOp<S> {
    op.model_operator()
}
