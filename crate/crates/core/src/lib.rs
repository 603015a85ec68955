//! Classical and quantum bounds for exclusivity graphs, rank-restricted
//! Lovász theta heuristics, and quantum dimension witnesses.

pub mod error;
pub mod graph;
pub mod heuristic;
pub mod numerics;
pub mod representation;
pub mod sdp;
pub mod theta;
pub mod witness;

pub use error::{Error, Result};
