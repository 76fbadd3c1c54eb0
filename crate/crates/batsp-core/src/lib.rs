//! Bottleneck asymmetric TSP approximation pipeline: threshold search over
//! the Held-Karp relaxation, certified thin spanning trees, vertex-capacitated
//! integral circulations, Eulerian circuits, and transversal shortcutting,
//! together with exact small-instance oracles and the explicit worst-case
//! constructions used to validate the pipeline.
//!
//! The crate is `no_std` (alloc only); IO, file formats, and the CLI live in
//! the companion `batsp` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circulation;
pub mod constructions;
pub mod heldkarp;
pub mod instance;
pub mod maxflow;
pub mod oracle;
pub mod shortcut;
pub mod simplex;
pub mod solver;
pub mod thintree;

pub use instance::{MetricInstance, MetricError, ThresholdGraph, ValidationMode};
pub use solver::{solve_batsp, verify_solution, PipelineReport, SolverConfig, SolverError};
pub use thintree::CertifiedThinTree;

