//! Exhaustive search for the largest contextuality gap ϑ(G) − α(G) among
//! small exclusivity graphs, with certified SDP values, dimension-restricted
//! quantum values and exact algebraic verification.

pub mod algebra;
pub mod alpha;
pub mod eta;
pub mod graph;
pub mod noise;
pub mod pipeline;
pub mod theta;

pub use graph::{Graph, GraphError};
