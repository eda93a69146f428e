//! Two-dimensional Ising model toolkit: lattice topologies and the
//! nearest-neighbour Hamiltonian, a single-flip Metropolis engine, an exact
//! enumeration oracle for tiny lattices, and a generator for labeled
//! microstate image corpora.

// `!(x >= lo)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agreement;
pub mod dataset;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod metropolis;
pub mod observables;
pub mod rng;

pub use error::{Error, Result};
pub use lattice::{BoundaryCondition, Bond, Lattice, LatticeSpec, Spin};
pub use metropolis::{MetropolisChain, RunRecord, SimulationParams, TracePoint};
pub use rng::RngStream;
