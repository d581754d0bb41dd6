//! Graph products of finite groups: classification verdicts, Cayley-graph
//! ball enumeration, and cut-growth experiments on thickened spheres.

pub mod adjacency;
pub mod cayley;
pub mod classify;
pub mod cli;
pub mod cuts;
pub mod error;
pub mod graph;
pub mod stats;
pub mod words;

pub use error::{Error, Result};
