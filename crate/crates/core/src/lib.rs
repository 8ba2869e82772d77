//! Optimal deployment of omnidirectional sensors over planar networks.
//!
//! The environment is a set of straight segments embedded in the plane. Sensors
//! maximise a Voronoi-based multi-center objective: every environment point is
//! credited with the performance of its nearest sensor, weighted by a density
//! field. Optimisation is a discrete-time gradient ascent run in two steps:
//!
//! 1. cluster centers move freely in the plane over a *collapsed* network (one
//!    weighted barycenter per short sub-segment) while the sensing radius is
//!    annealed;
//! 2. sensors spread around the centers are projected onto the network and
//!    move along its edges, over either the collapsed or the full network.
//!
//! Module map:
//!
//! * [`geometry`]: points, segments and exact primitives.
//! * [`network`]: the environment graph, its validation and the collapsed model.
//! * [`voronoi`]: lexicographic Voronoi allocation and the Delaunay neighbor graph.
//! * [`objective`]: performance profiles, density fields and the multi-center objective.
//! * [`gradient`]: lexicographic gradients, network-constrained directional
//!   derivatives and the segment-integral derivative kernel.
//! * [`optimizer`]: line search, synchronous ascent iterations, clustering and
//!   the two-step pipeline.
//! * [`scenario`]: configuration files, the benchmark generator, traces and SVG output.
//! * [`gradcheck`]: finite-difference verification of the derivative code.

pub mod error;
pub mod geometry;
pub mod gradcheck;
pub mod gradient;
pub mod network;
pub mod objective;
pub mod optimizer;
pub mod quadrature;
pub mod scenario;
pub mod voronoi;

pub use error::{Error, Result};
pub use geometry::{Point2, Segment};
pub use network::{CollapsedNetwork, Network, Violation};
pub use objective::{Density, DensityField, Gaussian, PerformanceFunction, Piece, UniformDensity};
pub use voronoi::{CollapsedAllocation, NeighborGraph, NetworkCells, SensorSet};

/// Absolute tolerance for geometric equality tests, in scenario length units.
pub const GEOM_EPS: f64 = 1e-9;
