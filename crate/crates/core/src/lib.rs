//! Finite limits and codensity monads, with exhaustive checks of density facts.
//!
//! Two concrete categories are supported: finite sets ([`finset::FinSet`]) and
//! finite-dimensional spaces over a small prime field ([`finvec::FinVec`]).
//! Diagrams are graph shaped; limits are computed exactly, either by
//! enumerating compatible families or as the kernel of the stacked edge
//! constraints.

pub mod codensity;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod finset;
pub mod finvec;
pub mod io;
pub mod report;
pub mod set_density;

pub use diagram::{
    check_cone, compute_limit, is_limit_cone, mediating_morphism, Budget, Carrier, Category,
    Cone, Diagram, DiagramBuilder, Edge, FiniteHoms, FiniteLimits, LimitData, ShapeGraph,
};
pub use error::{Error, Result};
