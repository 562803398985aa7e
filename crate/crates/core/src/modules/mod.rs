//! Finitely presented modules and the linear-algebra engines behind them.
//!
//! The layering is: [`matrix`] provides dense matrices over any ring;
//! [`smith`] diagonalizes over Euclidean coefficient rings; [`modgb`]
//! computes module Gröbner bases over polynomial rings; [`engine`] dispatches
//! syzygy and solving questions to whichever backend fits the ring; and
//! [`presentation`] builds the user-facing module calculus on top.

pub mod matrix;
pub mod smith;
pub(crate) mod modgb;
pub(crate) mod engine;
pub mod presentation;

pub use matrix::Matrix;
pub use presentation::{ModuleMap, ModulePresentation, ShortExactSequence};
pub use smith::{smith_normal_form, SmithForm};
