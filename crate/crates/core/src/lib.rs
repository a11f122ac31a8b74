//! Toolkit for ±1-edge-labeled complete graphs: embeddings of bounded-degree
//! spanning patterns, plus-edge-rich Hamiltonian cycles and triangle factors,
//! exhaustive small-order oracles, and closed-form bound evaluators.

pub mod bounds;
pub mod embedder;
pub mod error;
pub mod exec;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod pathsearch;
pub mod trianglesearch;

pub use error::{Error, Result};
pub use graph::{plus_subgraph, score, Embedding, EmbeddingScore, Pattern, SignedCompleteGraph};
