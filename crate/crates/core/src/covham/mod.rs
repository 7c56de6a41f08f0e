//! Hamiltonian constructions on Legendre bundles: forms, brackets,
//! Hamiltonian connections and evolution operators.

mod brackets;
mod connections;
mod evolution;
mod problem;
mod vector_fields;

pub use brackets::{canonical_bracket, vertical_bracket};
pub use connections::{
    hamilton_equations, hamiltonian_connection_polysymplectic, is_dynamic_equation,
    solve_hamiltonian_connection, ConnectionFamily, Equation,
};
pub use evolution::{
    evolution_operator_poly, evolution_operator_t, evolution_operator_v, EvolutionReport,
    TIdentities,
};
pub use problem::{
    energy_function, hamiltonian_form, homogeneous_chart, legendre_bundle_chart, legendre_map,
    liouville_form, multisymplectic_form, multisymplectic_hamiltonian_density, polysymplectic_form,
    zeta_pullback, HamiltonianSpec, LagrangianSpec,
};
pub use vector_fields::{
    hamiltonian_vector_field, horizontality_check, solve_hamiltonian_multivector, Horizontality,
    MultivectorOutcome,
};

use thiserror::Error;

use crate::geometry::{BundleKind, GeometryError};
use crate::linear::LinearError;
use crate::symexpr::ExprError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CovhamError {
    #[error("expected a {expected} chart, got {found}")]
    WrongChart {
        expected: &'static str,
        found: BundleKind,
    },
    #[error("requires a one-dimensional base")]
    NeedsOneDimensionalBase,
    #[error("'{0}' is not allowed here")]
    ForbiddenCoordinate(String),
    #[error("function depends on the homogeneous momentum")]
    DependsOnHomogeneousMomentum,
    #[error("density must be a nonzero function on the base")]
    BadDensity,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}
