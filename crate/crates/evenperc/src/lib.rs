//! Even (Eulerian) bond percolation on finite boxes of the square lattice.
//!
//! Bernoulli bond percolation conditioned on every vertex having even open
//! degree coincides, through the contour map of the dual-lattice Ising model,
//! with the contours of that Ising model at inverse temperature
//! `beta(p) = log((1-p)/p) / 2`. This crate provides both sides of that
//! correspondence and the machinery to check it:
//!
//! - [`lattice`]: finite boxes of Z^2, their dual sites, edge indexing and
//!   the even-sublattice square decomposition;
//! - [`ising`]: exact finite-volume Ising distributions on tiny windows and
//!   Glauber / cluster samplers on large boxes;
//! - [`contour`]: the two-to-one contour map between spin colorings and even
//!   edge configurations, plus star-chain extraction along open paths;
//! - [`measure`]: the even percolation measure itself, exactly (by GF(2)
//!   enumeration of even completions) and by contour sampling;
//! - [`coupling`]: the square-by-square coupling between parameters `p` and
//!   `1-p` that preserves evenness and increases connectivity;
//! - [`fk`]: the q = 2 random-cluster model, the spin/bond erasure coupling,
//!   planar duality, and stochastic-ordering comparisons;
//! - [`clusters`]: union-find component labeling, crossing events and
//!   threshold scans;
//! - [`exact_graph`]: exact even-subgraph enumeration and event polynomials
//!   on arbitrary finite multigraphs;
//! - [`poly`]: exact integer polynomial arithmetic and Sturm positive-root
//!   counting;
//! - [`monotone`]: enumeration of monotone boolean functions and the
//!   monotonicity certificate for the built-in demonstration graph.
//!
//! The `examples/` directory exercises each capability end to end; the
//! `evenperc` binary exposes the same operations as subcommands.

pub mod cli;
pub mod clusters;
pub mod contour;
pub mod coupling;
pub mod exact_graph;
pub mod fk;
pub mod ising;
pub mod lattice;
pub mod measure;
pub mod monotone;
pub mod poly;
pub mod seeding;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("site {0:?} is outside the box")]
    SiteOutsideBox((i32, i32)),
    #[error("window of {n_edges} edges exceeds the exact-enumeration limit ({limit})")]
    WindowTooLarge { n_edges: usize, limit: usize },
    #[error("no even completion is compatible with the boundary")]
    UnsatisfiableBoundary,
    #[error("edge configuration is not even on the required sites")]
    NotEven,
    #[error("edge sequence is not an open self-avoiding path: {0}")]
    InvalidPath(String),
    #[error("interior of {n_sites} sites exceeds the exact-enumeration limit ({limit})")]
    InteriorTooLarge { n_sites: usize, limit: usize },
    #[error("{0}")]
    GraphFormat(String),
    #[error("zero polynomial has no root count")]
    ZeroPolynomial,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
