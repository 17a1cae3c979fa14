//! Metric index over graph embeddings and the filter-verification engine.

mod cover_tree;
mod persist;
mod search;

pub use cover_tree::{CoverTree, PointArena, Ranking, PRUNE_SLACK};
pub use persist::{FORMAT_VERSION, MAGIC};
pub use search::{
    within, Answer, DistanceKind, ExtraFilter, IndexConfig, QueryResult, RangeOptions, SearchIndex,
    Searcher, Verify,
};
