//! Phase analysis on directed graphs.
//!
//! A directed graph's adjacency operator is in general neither
//! diagonalizable nor invertible, which blocks the graph Fourier transform
//! and any notion of phase. This crate makes such graphs analyzable:
//!
//! 1. [`perturb`](perturb::perturb) adds a minimal set of single edges that
//!    dismantles non-trivial Jordan blocks and removes zero eigenvalues;
//! 2. [`spectral`] decomposes the repaired operator with enforced
//!    conjugate-pair structure and provides the graph Fourier transform;
//! 3. [`hilbert`] applies the spectral Hilbert filter, builds the analytic
//!    graph signal, and extracts instantaneous amplitude, phase, and
//!    frequency;
//! 4. [`cycles`] exposes the cycle-cover structure that the repaired graph
//!    is guaranteed to have.
//!
//! Graph generators for the synthetic experiments (directed cycles, the
//! rosace, twisted grids) and edge-list/signal file formats live in
//! [`graph`] and [`io`]. The `graphphase` binary wires everything into a
//! command-line pipeline.

pub mod cycles;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod hilbert;
pub mod io;
mod lapack;
pub mod perturb;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{DiGraph, GraphSignal, GridSpec, RosaceSpec};
pub use hilbert::{AnalyticGraphSignal, GhtOperator};
pub use perturb::PerturbationResult;
pub use spectral::{SpectralDecomposition, SpectralDiagnostics, ToleranceSet};
