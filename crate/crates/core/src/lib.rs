//! Random group presentations, their link graphs, and the spectral
//! criterion for property (T).

pub mod eigen;
pub mod embed;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod linkgraph;
pub mod matching;
pub mod models;
pub mod spectral;
pub mod words;

pub use error::{Error, Result};
pub use graph::Multigraph;
pub use models::Presentation;
pub use words::{Letter, Word};
