//! Wavelet analysis on finite higher-rank graphs.
//!
//! The crate covers k-graph presentations and path arithmetic, the
//! Perron-Frobenius measure on the infinite path space, Cuntz-Krieger
//! operators on finite cylinder levels, rectangular path-space wavelets,
//! Markov (Bernoulli) wavelets on the full shift, vertex traffic wavelets
//! and spectral wavelets built from the k-graph Laplacian.

pub mod complement;
pub mod degree;
pub mod error;
pub mod fixtures;
pub mod kernel;
pub mod kgraph;
pub mod linalg;
pub mod measure;
pub mod path;
pub mod pf;
pub mod sbfs;
pub mod spectral;
pub mod traffic;
pub mod wavelets;

pub use degree::Degree;
pub use error::{Error, ErrorClass, Result, ValidationError};
pub use kgraph::{EdgeId, GraphDocument, KGraph, VertexId};
pub use measure::{CylinderFn, MeasureSpec};
pub use path::Path;
pub use pf::PfData;
