//! Continuous-time random walks on finite weighted graphs.
//!
//! The crate builds the graphs of interest (hypercubes, Cayley graphs, the
//! lamplighter graph over a hypercube, clique blowups, a cube with two square
//! pyramids attached), evaluates heat kernels `H_t = exp(-tL)` exactly through
//! a dense symmetric eigendecomposition, and studies the relative mass
//!
//! ```text
//! r_{u,v}(t) = p_{u,v}(t) / p_{u,u}(t)
//! ```
//!
//! together with the conditioned origin local time `C_d(t)` of the hypercube
//! walk, both in closed form and by Monte Carlo.
//!
//! Laplacian convention: `L[u][v] = -w(u,v)` off the diagonal and
//! `L[u][u] = sum_v w(u,v)`. Unweighted `d`-regular graphs carry edge weight
//! `1/d`, so the walk jumps at total rate one.

pub mod cayley;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod heat;
pub mod hypercube;
pub mod lab;
pub mod lamplighter;
pub mod montecarlo;
pub mod output;
pub mod quad;
pub mod scan;

pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use heat::{CurveQuantity, CurveSamples, SpectralDecomposition};
pub use scan::Witness;
