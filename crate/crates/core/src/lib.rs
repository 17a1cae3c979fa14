//! Exact graph edit distance similarity search.
//!
//! Graphs are embedded into sparse ℓ1 vectors whose distances lower-bound
//! the edit distance. A cover tree over the vectors answers filter queries,
//! and surviving candidates are verified with an exact branch-and-bound
//! solver. Range queries and optimal multi-step k-nearest-neighbor queries
//! are supported.

pub mod assignment;
pub mod bounds;
pub mod cli;
pub mod cost;
pub mod dataset;
pub mod embedding;
pub mod error;
pub mod exact;
pub mod graph;
pub mod index;
pub mod synth;
pub mod tree;

pub use bounds::{BoundKind, BoundReport, BoundTrees};
pub use cost::{CostModel, LabelCostTable};
pub use dataset::{Dataset, Format};
pub use embedding::{CompositeEmbedding, Embedding};
pub use error::{Error, Result};
pub use exact::{exact_ged, EditPath, GedOutcome};
pub use graph::{Graph, Label, SymbolTable};
pub use index::{SearchIndex, Searcher};
pub use tree::{AnchorKey, MetricTree};
