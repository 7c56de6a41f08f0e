//! Symbolic toolkit for covariant Hamiltonian field theory on fibre bundles
//! `Y → X`: Legendre bundles, canonical forms, Hamiltonian connections,
//! brackets, evolution operators and chart-gluing checks.

pub mod covham;
pub mod geometry;
pub mod globality;
pub mod linear;
pub mod symexpr;
