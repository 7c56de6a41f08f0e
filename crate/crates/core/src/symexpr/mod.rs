//! Exact symbolic scalars over chart coordinates.

mod coord;
mod parse;
mod poly;
mod scalar;

pub use coord::{CoordId, Role};
pub use parse::{parse_in_scope, parse_scalar, CoordLookup, Scope};
pub use poly::{Func, Kernel, Monomial, Poly, Var};
pub use scalar::{Bindings, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier '{name}' at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("zero denominator")]
    ZeroDenominator,
}

/// Canonical-form equality. Complete on rational expressions; kernel
/// applications count as independent variables, so e.g.
/// `sin(y)^2 + cos(y)^2` and `1` compare unequal.
pub fn equals(a: &Scalar, b: &Scalar) -> bool {
    a == b
}
