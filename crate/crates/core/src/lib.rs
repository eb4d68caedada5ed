//! Kernel for Cartesian cubical type theory: core syntax, cofibration
//! solver, normalization by evaluation and a bidirectional elaborator.

pub mod builtins;
pub mod check;
pub mod cofib;
pub mod domain;
pub mod error;
#[cfg(feature = "testing")]
pub mod gen;
pub mod kan;
pub mod nbe;
pub mod normal;
pub mod surface;
pub mod syntax;

pub use error::{Error, Result, ScopeProblem};
pub use syntax::{Binding, Cofib, Context, Dim, Term, TypeExpr};
