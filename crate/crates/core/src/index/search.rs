use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::cover_tree::{CoverTree, PointArena, PRUNE_SLACK};
use crate::bounds::{self, BoundKind, BoundTrees};
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::exact::{exact_ged_with, induced_cost, ExactConfig, GedOutcome};
use crate::graph::Graph;

/// Whether a distance counts as being within radius `r`. Shared by the index
/// and by linear scans so both agree on boundary cases.
pub fn within(d: f64, r: f64) -> bool {
    d <= r + PRUNE_SLACK
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexConfig {
    pub base: f64,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig { base: 2.0 }
    }
}

/// Embeddings of a graph database under one bound, with a cover tree over
/// them. Graphs themselves are not stored; see [`Searcher`].
#[derive(Clone, Debug)]
pub struct SearchIndex {
    pub(super) cost: CostModel,
    pub(super) bound: BoundKind,
    pub(super) trees: BoundTrees,
    pub(super) ids: Vec<usize>,
    pub(super) points: PointArena,
    pub(super) cover: CoverTree,
    pub(super) config: IndexConfig,
}

impl SearchIndex {
    pub fn build(db: &[Graph], cost: &CostModel, bound: BoundKind) -> Result<Self> {
        SearchIndex::build_with(db, cost, bound, IndexConfig::default())
    }

    /// Trees come from the database alphabet and maximum degree. Embeddings
    /// are computed in parallel; the cover tree is built sequentially in
    /// database order.
    pub fn build_with(
        db: &[Graph],
        cost: &CostModel,
        bound: BoundKind,
        config: IndexConfig,
    ) -> Result<Self> {
        cost.validate()?;
        let trees = BoundTrees::for_graphs(db, cost)?;
        let embedded = db
            .par_iter()
            .map(|g| trees.embed(g, bound))
            .collect::<Result<Vec<_>>>()?;
        let mut points = PointArena::new();
        for e in &embedded {
            points.push(e.flat_entries());
        }
        let ids = db.iter().map(Graph::id).collect();
        SearchIndex::assemble(cost.clone(), bound, trees, ids, points, config)
    }

    pub(super) fn assemble(
        cost: CostModel,
        bound: BoundKind,
        trees: BoundTrees,
        ids: Vec<usize>,
        points: PointArena,
        config: IndexConfig,
    ) -> Result<Self> {
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(
                "graph ids in the database are not unique".into(),
            ));
        }
        if config.base.partial_cmp(&1.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Usage(format!(
                "cover tree base must exceed 1, got {}",
                config.base
            )));
        }
        let cover = CoverTree::build(&points, config.base);
        Ok(SearchIndex {
            cost,
            bound,
            trees,
            ids,
            points,
            cover,
            config,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost
    }

    pub fn bound_kind(&self) -> BoundKind {
        self.bound
    }

    pub fn trees(&self) -> &BoundTrees {
        &self.trees
    }

    pub fn config(&self) -> IndexConfig {
        self.config
    }

    pub fn cover_tree(&self) -> &CoverTree {
        &self.cover
    }

    pub fn points(&self) -> &PointArena {
        &self.points
    }

    /// Graph ids in point order.
    pub fn graph_ids(&self) -> &[usize] {
        &self.ids
    }

    /// Flat embedding of a query graph under the index trees.
    pub fn embed_query(&self, q: &Graph) -> Result<Vec<(u64, f64)>> {
        Ok(self.trees.embed(q, self.bound)?.flat_entries().collect())
    }

    /// Index distance between two stored points.
    pub fn point_distance(&self, i: usize, j: usize) -> f64 {
        self.points.distance(i, j)
    }

    /// Points whose lower bound to `q` is within `r`, as `(point, bound)`
    /// sorted by bound then graph id.
    pub fn candidates(&self, q: &[(u64, f64)], r: f64) -> Vec<(usize, f64)> {
        let mut out = self.cover.range(&self.points, q, r, |d| within(d, r));
        self.sort_by_bound(&mut out);
        out
    }

    /// The same set as [`SearchIndex::candidates`] by scanning every point.
    pub fn linear_candidates(&self, q: &[(u64, f64)], r: f64) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = (0..self.points.len())
            .map(|i| (i, self.points.distance_to(i, q)))
            .filter(|&(_, d)| within(d, r))
            .collect();
        self.sort_by_bound(&mut out);
        out
    }

    fn sort_by_bound(&self, v: &mut [(usize, f64)]) {
        v.sort_by(|a, b| a.1.total_cmp(&b.1).then(self.ids[a.0].cmp(&self.ids[b.0])));
    }

    /// Every point by ascending lower bound to `q`, ties by graph id.
    pub fn ranking<'a>(&'a self, q: &'a [(u64, f64)]) -> impl Iterator<Item = (usize, f64)> + 'a {
        self.cover
            .ranking(&self.points, q, move |p| self.ids[p] as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Verify {
    None,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExtraFilter {
    Branch,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeOptions {
    pub verify: Verify,
    pub extra_filter: Option<ExtraFilter>,
}

impl Default for RangeOptions {
    fn default() -> Self {
        RangeOptions {
            verify: Verify::Exact,
            extra_filter: None,
        }
    }
}

/// What an answer's distance means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Exact,
    /// Unverified candidate; the distance is its lower bound.
    LowerBound,
    /// Accepted because an upper bound is within the radius.
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Answer {
    pub id: usize,
    pub distance: f64,
    pub kind: DistanceKind,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct QueryResult {
    /// Sorted by distance, then id.
    pub answers: Vec<Answer>,
    /// Candidates that passed the index filter.
    pub candidates: usize,
    pub exact_computations: usize,
    #[serde(with = "secs")]
    pub filter_time: Duration,
    #[serde(with = "secs")]
    pub verify_time: Duration,
}

impl QueryResult {
    pub fn ids(&self) -> Vec<usize> {
        self.answers.iter().map(|a| a.id).collect()
    }
}

mod secs {
    use std::time::Duration;

    pub fn serialize<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }
}

fn sort_answers(answers: &mut [Answer]) {
    answers.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.id.cmp(&b.id)));
}

/// An index together with the graphs it was built from, for verification.
#[derive(Clone, Copy)]
pub struct Searcher<'a> {
    index: &'a SearchIndex,
    db: &'a [Graph],
    exact: ExactConfig,
}

impl<'a> Searcher<'a> {
    /// `db` must list the indexed graphs in build order.
    pub fn new(index: &'a SearchIndex, db: &'a [Graph]) -> Result<Self> {
        let matches =
            db.len() == index.len() && db.iter().zip(&index.ids).all(|(g, &id)| g.id() == id);
        if !matches {
            return Err(Error::Usage(
                "the supplied graphs do not match the indexed database".into(),
            ));
        }
        Ok(Searcher {
            index,
            db,
            exact: ExactConfig::default(),
        })
    }

    pub fn with_exact_config(mut self, config: ExactConfig) -> Self {
        self.exact = config;
        self
    }

    pub fn index(&self) -> &'a SearchIndex {
        self.index
    }

    pub fn graphs(&self) -> &'a [Graph] {
        self.db
    }

    fn cost(&self) -> &'a CostModel {
        &self.index.cost
    }

    /// All graphs within edit distance `r` of `q`, or with `verify = none`
    /// the filter candidates.
    pub fn range(&self, q: &Graph, r: f64, options: RangeOptions) -> Result<QueryResult> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Usage(format!(
                "radius must be non-negative, got {r}"
            )));
        }
        let start = Instant::now();
        let qe = self.index.embed_query(q)?;
        let candidates = self.index.candidates(&qe, r);
        let filter_time = start.elapsed();

        let mut result = QueryResult {
            candidates: candidates.len(),
            filter_time,
            ..QueryResult::default()
        };
        if options.verify == Verify::None {
            result.answers = candidates
                .iter()
                .map(|&(p, lb)| Answer {
                    id: self.index.ids[p],
                    distance: lb,
                    kind: DistanceKind::LowerBound,
                })
                .collect();
            return Ok(result);
        }

        let start = Instant::now();
        let cost = self.cost();
        let verified = candidates
            .par_iter()
            .map(|&(p, _)| -> Result<(Option<Answer>, bool)> {
                let g = &self.db[p];
                let id = g.id();
                if options.extra_filter == Some(ExtraFilter::Branch) {
                    let b = bounds::branch(q, g, cost)?;
                    if !within(b.lower, r) {
                        return Ok((None, false));
                    }
                    let ub = induced_cost(q, g, cost, &b.mapping);
                    if ub <= r {
                        let kind = if ub <= b.lower {
                            DistanceKind::Exact
                        } else {
                            DistanceKind::UpperBound
                        };
                        return Ok((
                            Some(Answer {
                                id,
                                distance: ub,
                                kind,
                            }),
                            false,
                        ));
                    }
                }
                let answer = match exact_ged_with(q, g, cost, Some(r), &self.exact)? {
                    GedOutcome::Exact { distance, .. } if distance <= r => Some(Answer {
                        id,
                        distance,
                        kind: DistanceKind::Exact,
                    }),
                    _ => None,
                };
                Ok((answer, true))
            })
            .collect::<Result<Vec<_>>>()?;
        result.exact_computations = verified.iter().filter(|v| v.1).count();
        result.answers = verified.into_iter().filter_map(|v| v.0).collect();
        sort_answers(&mut result.answers);
        result.verify_time = start.elapsed();
        Ok(result)
    }

    /// The `k` nearest graphs with all ties at the k-th distance.
    ///
    /// Candidates arrive by ascending lower bound. Once `k` exact distances
    /// are known, each further candidate is verified against the current
    /// k-th distance as threshold, and the scan stops at the first lower
    /// bound beyond it.
    pub fn knn(&self, q: &Graph, k: usize) -> Result<QueryResult> {
        if k == 0 {
            return Err(Error::Usage("k must be at least 1".into()));
        }
        let cost = self.cost();
        let mut filter_time = Duration::ZERO;
        let mut verify_time = Duration::ZERO;
        let start = Instant::now();
        let qe = self.index.embed_query(q)?;
        let mut ranking = self.index.ranking(&qe);
        filter_time += start.elapsed();

        let mut found: Vec<Answer> = Vec::new();
        let mut dists: Vec<f64> = Vec::new();
        let mut kth = f64::INFINITY;
        let mut candidates = 0;
        let mut exact_computations = 0;
        loop {
            let t = Instant::now();
            let next = ranking.next();
            filter_time += t.elapsed();
            let Some((p, lb)) = next else { break };
            if dists.len() >= k && !within(lb, kth) {
                break;
            }
            candidates += 1;
            let t = Instant::now();
            let threshold = (dists.len() >= k).then_some(kth);
            exact_computations += 1;
            let outcome = exact_ged_with(q, &self.db[p], cost, threshold, &self.exact)?;
            verify_time += t.elapsed();
            if let GedOutcome::Exact { distance, .. } = outcome {
                found.push(Answer {
                    id: self.index.ids[p],
                    distance,
                    kind: DistanceKind::Exact,
                });
                let at = dists.partition_point(|&d| d <= distance);
                dists.insert(at, distance);
                if dists.len() >= k {
                    kth = dists[k - 1];
                }
            }
        }
        found.retain(|a| a.distance <= kth);
        sort_answers(&mut found);
        Ok(QueryResult {
            answers: found,
            candidates,
            exact_computations,
            filter_time,
            verify_time,
        })
    }
}
