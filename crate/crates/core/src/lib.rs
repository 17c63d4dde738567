//! Joint Euclidean mirror estimation for parameterized families of
//! probability distributions.
//!
//! The pipeline takes equal-size sample sets, each drawn from a distribution
//! indexed by a parameter vector, and
//!
//! 1. computes exact empirical Wasserstein distances between every pair of
//!    sets ([`transport`]),
//! 2. embeds the distance matrix with classical multidimensional scaling
//!    ([`embedding`]),
//! 3. interpolates the embedded points over the parameter space with a
//!    Delaunay interpolant or a penalized B-spline ([`surface`]),
//! 4. recovers the parameter of an unlabeled sample set by minimizing the
//!    distance between its embedded position and the fitted surface
//!    ([`recovery`]).
//!
//! [`sim`] reproduces the Gaussian simulation studies that exercise the
//! full pipeline against closed-form distances, and [`cli`] wires every
//! stage to CSV artifacts.

pub mod cli;
pub mod dataset;
pub mod embedding;
pub mod error;
pub mod parallel;
pub mod recovery;
pub mod sim;
pub mod surface;
pub mod transport;

pub use dataset::{Dataset, Format, ParameterVector, SampleSet};
pub use embedding::{MirrorEmbedding, ProcrustesAlignment, RealizabilityReport};
pub use error::{MirrorError, Result};
pub use recovery::RecoveryResult;
pub use surface::{BSplineConfig, BSplineSurface, MirrorSurface, Triangulation};
pub use transport::{DistanceMatrix, Metric, TransportPlan};
