//! Deterministic negative-weight single-source shortest paths built on
//! clustered path covers, with the oracles and validators used to check it.

pub mod ball;
pub mod barrier;
pub mod cover;
pub mod dimacs;
pub mod error;
pub mod generate;
pub mod graph;
pub mod karp;
pub mod restricted;
pub mod scaling;
pub mod sssp;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Dist, Edge, Graph, Potential};
