//! Collision-free macroscopic lattice Boltzmann solver.
//!
//! Density and velocity are advanced directly by pull-streaming local
//! equilibrium values on D2Q9 or D3Q19 lattices; no distribution functions
//! are stored and no collision operator exists. Choosing the lattice
//! spacing `dx` fixes everything else: the particle speed follows from the
//! viscosity as `e = 6 nu / dx` and the time step as `dt = dx / e`.
//!
//! The crate also carries a classical single-relaxation-time solver
//! ([`oracle`]) whose `tau = 1` moment trajectory coincides with the
//! collision-free stepper, closed-form reference solutions ([`analytic`]),
//! the benchmark scenarios with their reference datasets ([`scenario`]),
//! and field/profile writers ([`output`]).

pub mod analytic;
pub mod equilibrium;
mod error;
pub mod grid;
pub mod lattice;
pub mod oracle;
pub mod output;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{BoundarySpec, Grid, NodeClass};
pub use lattice::{LatticeModel, Stencil, D2Q9, D3Q19};
pub use solver::{derive_kinetics, Field, Kinetics, MacLabSolver, StabilityDiagnostic};
