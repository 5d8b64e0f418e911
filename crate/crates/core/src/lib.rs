//! Graphs explained by the exactly-k relation of edge-weighted trees.
//!
//! A tree with non-negative integer edge weights *explains* a graph on its
//! leaves when two leaves are adjacent exactly if the weights along their
//! path sum to `k`. For `k = 2` the explainable graphs are those whose
//! false-twin quotient is a block graph; [`recognize`] decides membership
//! and builds a witness tree.

pub mod dot;
pub mod graph;
pub mod oracle;
pub mod oriented;
pub mod recognize;
pub mod tree;

pub use graph::{BlockDecomposition, Graph, GraphError, OrientedGraph, ParseError, TwinPartition};
pub use oracle::{EnumerationBudget, OracleError};
pub use oriented::{OrientedCertificate, OrientedError, RootedLabeledTree};
pub use recognize::{recognize, verify, RecognitionOutcome, RecognizeError};
pub use tree::{DistanceMatrix, LabeledTree, TreeBuilder, TreeError, Weight};
