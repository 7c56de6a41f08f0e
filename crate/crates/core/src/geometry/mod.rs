//! Charts, transitions, exterior algebra and connections.

pub mod canonical;
mod chart;
mod connection;
mod forms;
mod transition;

pub use chart::{BundleKind, Chart};
pub use connection::{
    horizontal_differential, transverse_component, Connection, HorizontalOneForm,
};
pub use forms::{contract, schouten_nijenhuis, DiffForm, MultiVector, TangentValuedForm};
pub use transition::{induced_transition, pull_tangent_valued, Transition};

use thiserror::Error;

use crate::linear::LinearError;
use crate::symexpr::{ExprError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("operation not available on {0} charts")]
    UnsupportedKind(BundleKind),
    #[error("'{0}' is not a coordinate of the chart")]
    ForeignCoordinate(String),
    #[error("'{0}' depends on jet coordinates")]
    JetDependence(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("multivector is not transverse to the base")]
    NotTransverse,
    #[error("multivector is not decomposable")]
    NotDecomposable,
    #[error("transition not verified: {0}")]
    UnverifiedTransition(String),
    #[error("symbolically singular jacobian")]
    SingularJacobian,
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

pub fn wedge(a: &DiffForm, b: &DiffForm) -> DiffForm {
    a.wedge(b)
}

pub fn exterior_derivative(a: &DiffForm) -> DiffForm {
    a.d()
}

pub fn connection_to_nvector(g: &Connection) -> MultiVector {
    g.to_nvector()
}

pub fn nvector_to_connection(chart: &Chart, w: &MultiVector) -> Result<Connection, GeometryError> {
    Connection::from_nvector(chart, w)
}

pub fn evolution_operator(g: &Connection, f: &Scalar) -> Result<HorizontalOneForm, GeometryError> {
    g.evolution_operator(f)
}
