//! Pairwise bounds on graph edit distance.
//!
//! LLB, DLB and CLB are optimal assignment costs under tree-metric ground
//! costs and are evaluated as ℓ1 distances between embeddings. BranchLB sums
//! both ground costs, which is no longer a tree metric, and needs the dense
//! solver. Edge labels are ignored by every bound here.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::assignment::{solve_hungarian, CostMatrix};
use crate::cost::{CostModel, RelabelCost};
use crate::embedding::{CompositeEmbedding, Embedding};
use crate::error::Result;
use crate::exact::{self, induced_cost, VertexMapping};
use crate::graph::{dataset_max_degree, Graph, Label};
use crate::tree::MetricTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Llb,
    Dlb,
    Clb,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Llb => "llb",
            BoundKind::Dlb => "dlb",
            BoundKind::Clb => "clb",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            BoundKind::Llb => 0,
            BoundKind::Dlb => 1,
            BoundKind::Clb => 2,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(BoundKind::Llb),
            1 => Some(BoundKind::Dlb),
            2 => Some(BoundKind::Clb),
            _ => None,
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The label and degree trees shared by a collection of graphs.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTrees {
    pub label: MetricTree,
    pub degree: MetricTree,
}

impl BoundTrees {
    /// Trees over the alphabet and maximum degree of `graphs`. Graphs outside
    /// that extent still embed through the virtual extension of the star and
    /// path trees.
    pub fn for_graphs<'a>(
        graphs: impl IntoIterator<Item = &'a Graph> + Clone,
        cost: &CostModel,
    ) -> Result<Self> {
        let mut labels: Vec<Label> = graphs
            .clone()
            .into_iter()
            .flat_map(|g| g.labels().iter().copied())
            .collect();
        labels.sort_unstable();
        labels.dedup();
        Ok(BoundTrees {
            label: MetricTree::for_labels(&labels, cost)?,
            degree: MetricTree::degree_tree(dataset_max_degree(graphs), cost),
        })
    }

    pub fn embed(&self, g: &Graph, kind: BoundKind) -> Result<CompositeEmbedding> {
        let parts = match kind {
            BoundKind::Llb => vec![Embedding::of_labels(g, &self.label)?],
            BoundKind::Dlb => vec![Embedding::of_degrees(g, &self.degree)?],
            BoundKind::Clb => vec![
                Embedding::of_labels(g, &self.label)?,
                Embedding::of_degrees(g, &self.degree)?,
            ],
        };
        Ok(CompositeEmbedding::new(parts))
    }

    pub fn bound(&self, g: &Graph, h: &Graph, kind: BoundKind) -> Result<f64> {
        self.embed(g, kind)?.l1_distance(&self.embed(h, kind)?)
    }
}

/// Simple label filter: vertex label mismatches plus the edge count
/// difference. A lower bound under unit costs only.
pub fn slf(g: &Graph, h: &Graph) -> f64 {
    let mut counts: HashMap<Label, isize> = HashMap::new();
    for &l in g.labels() {
        *counts.entry(l).or_default() += 1;
    }
    let mut common = 0usize;
    for &l in h.labels() {
        if let Some(c) = counts.get_mut(&l) {
            if *c > 0 {
                *c -= 1;
                common += 1;
            }
        }
    }
    let vertices = g.vertex_count().max(h.vertex_count()) - common;
    (vertices + g.edge_count().abs_diff(h.edge_count())) as f64
}

pub fn llb(g: &Graph, h: &Graph, cost: &CostModel) -> Result<f64> {
    BoundTrees::for_graphs([g, h], cost)?.bound(g, h, BoundKind::Llb)
}

pub fn dlb(g: &Graph, h: &Graph, cost: &CostModel) -> Result<f64> {
    BoundTrees::for_graphs([g, h], cost)?.bound(g, h, BoundKind::Dlb)
}

pub fn clb(g: &Graph, h: &Graph, cost: &CostModel) -> Result<f64> {
    BoundTrees::for_graphs([g, h], cost)?.bound(g, h, BoundKind::Clb)
}

/// Label ground cost used by BranchLB. Pairs a label table cannot relabel
/// are priced as a deletion plus an insertion.
fn label_ground_cost(cost: &CostModel, a: Option<Label>, b: Option<Label>) -> f64 {
    match (a, b) {
        (Some(a), Some(b)) => {
            let c = cost.vertex_relabel_cost(a, b);
            if c.is_finite() {
                c.min(2.0 * cost.vertex_indel)
            } else {
                2.0 * cost.vertex_indel
            }
        }
        (None, None) => 0.0,
        _ => cost.vertex_indel,
    }
}

/// Optimum of the BranchLB assignment and the vertex mapping it induces.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub lower: f64,
    pub mapping: VertexMapping,
}

/// Solves the padded assignment under `c_llb + c_dlb`.
pub fn branch(g: &Graph, h: &Graph, cost: &CostModel) -> Result<Branch> {
    let (n, m) = (g.vertex_count(), h.vertex_count());
    let left: Vec<usize> = (0..n).collect();
    let right: Vec<usize> = (0..m).collect();
    let half_edge = 0.5 * cost.edge_indel;
    let matrix = CostMatrix::padded(&left, &right, |u, v| {
        let labels = label_ground_cost(cost, u.map(|&u| g.label(u)), v.map(|&v| h.label(v)));
        let du = u.map_or(0, |&u| g.degree(u));
        let dv = v.map_or(0, |&v| h.degree(v));
        labels + half_edge * du.abs_diff(dv) as f64
    });
    let solution = solve_hungarian(&matrix)?;
    let map = (0..n)
        .map(|u| {
            let v = solution.matching[u];
            // Relabels the table forbids become a deletion and an insertion.
            (v < m && cost.vertex_relabel_cost(g.label(u), h.label(v)).is_finite()).then_some(v)
        })
        .collect();
    Ok(Branch {
        lower: solution.cost,
        mapping: VertexMapping::new(map, m)?,
    })
}

pub fn branch_lb(g: &Graph, h: &Graph, cost: &CostModel) -> Result<f64> {
    Ok(branch(g, h, cost)?.lower)
}

/// Cost of the edit path induced by the BranchLB matching.
pub fn branch_ub(g: &Graph, h: &Graph, cost: &CostModel) -> Result<f64> {
    let b = branch(g, h, cost)?;
    Ok(induced_cost(g, h, cost, &b.mapping))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub slf: f64,
    pub llb: f64,
    pub dlb: f64,
    pub clb: f64,
    pub branch_lb: f64,
    pub branch_ub: Option<f64>,
    pub exact: Option<f64>,
}

impl BoundReport {
    /// Checks `slf ≤ clb ≤ branchLb ≤ exact ≤ branchUb` on the present
    /// fields, up to `tol`. The `slf` link only holds for unit costs.
    pub fn chain_holds(&self, tol: f64) -> bool {
        let mut chain = vec![self.slf, self.clb, self.branch_lb];
        chain.extend(self.exact);
        chain.extend(self.branch_ub);
        chain.windows(2).all(|w| w[0] <= w[1] + tol)
    }
}

/// Every bound for one pair. The exact distance is computed only on request.
pub fn bound_report(
    g: &Graph,
    h: &Graph,
    cost: &CostModel,
    with_exact: bool,
) -> Result<BoundReport> {
    let trees = BoundTrees::for_graphs([g, h], cost)?;
    let llb = trees.bound(g, h, BoundKind::Llb)?;
    let dlb = trees.bound(g, h, BoundKind::Dlb)?;
    let b = branch(g, h, cost)?;
    let exact = if with_exact {
        exact::exact_ged(g, h, cost, None)?.distance()
    } else {
        None
    };
    Ok(BoundReport {
        slf: slf(g, h),
        llb,
        dlb,
        clb: llb + dlb,
        branch_lb: b.lower,
        branch_ub: Some(induced_cost(g, h, cost, &b.mapping)),
        exact,
    })
}

/// Whether the label part of the cost model uses the ultrametric tree.
pub fn uses_label_table(cost: &CostModel) -> bool {
    matches!(cost.vertex_relabel, RelabelCost::Table(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::LabelCostTable;
    use crate::exact::brute_force_ged;
    use crate::synth;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Triangle with a pendant vertex, labels a, b, c, c.
    fn paw() -> Graph {
        Graph::from_parts(0, vec![0, 1, 2, 2], &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    /// Four-cycle, labels a, b, b, c.
    fn four_cycle() -> Graph {
        Graph::from_parts(1, vec![0, 1, 1, 2], &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn label_and_degree_figures() {
        for (cv, ce, cvl) in [(1.0, 1.0, 1.0), (2.0, 3.0, 0.5), (1.5, 0.25, 3.0)] {
            let cost = CostModel::new(cv, ce, cvl, 1.0);
            let (g, h) = (paw(), four_cycle());
            let trees = BoundTrees::for_graphs([&g, &h], &cost).unwrap();
            let w1 = cv - 0.5 * cvl;
            let w2 = 0.5 * cvl;
            let eg = Embedding::of_labels(&g, &trees.label).unwrap();
            let eh = Embedding::of_labels(&h, &trees.label).unwrap();
            assert_eq!(eg.dense(&[1, 2, 3, 4]), vec![4.0 * w1, w2, w2, 2.0 * w2]);
            assert_eq!(eh.dense(&[1, 2, 3, 4]), vec![4.0 * w1, w2, 2.0 * w2, w2]);
            assert_eq!(llb(&g, &h, &cost).unwrap(), cvl);

            let step = 0.5 * ce;
            let dg = Embedding::of_degrees(&g, &trees.degree).unwrap();
            let dh = Embedding::of_degrees(&h, &trees.degree).unwrap();
            assert_eq!(dg.dense(&[1, 2, 3]), vec![4.0 * step, 3.0 * step, step]);
            assert_eq!(dh.dense(&[1, 2, 3]), vec![4.0 * step, 4.0 * step, 0.0]);
            assert_eq!(dlb(&g, &h, &cost).unwrap(), ce);
        }
    }

    #[test]
    fn path_versus_edge_degree_bound() {
        let p3 = Graph::from_parts(0, vec![0, 0, 0], &[(0, 1), (1, 2)]).unwrap();
        let edge = Graph::from_parts(1, vec![0, 0], &[(0, 1)]).unwrap();
        assert_eq!(dlb(&p3, &edge, &CostModel::uniform()).unwrap(), 1.0);
    }

    #[test]
    fn simple_label_filter() {
        let g = Graph::from_parts(0, vec![0, 0, 1], &[(0, 1), (1, 2)]).unwrap();
        let h = Graph::from_parts(1, vec![0, 1], &[(0, 1)]).unwrap();
        assert_eq!(slf(&g, &g), 0.0);
        assert_eq!(slf(&g, &h), 2.0);
        assert!(slf(&g, &h) <= brute_force_ged(&g, &h, &CostModel::uniform()).unwrap());
        let sparse = Graph::from_parts(2, vec![0, 0, 1, 1], &[]).unwrap();
        let dense = Graph::from_parts(3, vec![1, 0, 1, 0], &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(slf(&sparse, &dense), 3.0);
    }

    #[test]
    fn report_on_path_pair() {
        let g = Graph::from_parts(0, vec![0, 1, 0], &[(0, 1), (1, 2)]).unwrap();
        let h = Graph::from_parts(1, vec![0, 1], &[(0, 1)]).unwrap();
        let r = bound_report(&g, &h, &CostModel::uniform(), true).unwrap();
        assert_eq!(r.exact, Some(2.0));
        assert!(r.branch_ub.unwrap() >= 2.0);
        assert!(r.chain_holds(1e-9), "{r:?}");
        let same = bound_report(&g, &g, &CostModel::uniform(), true).unwrap();
        assert_eq!(
            (
                same.slf,
                same.clb,
                same.branch_lb,
                same.branch_ub,
                same.exact
            ),
            (0.0, 0.0, 0.0, Some(0.0), Some(0.0))
        );
    }

    #[test]
    fn chain_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cost = CostModel::uniform();
        for _ in 0..300 {
            let g = {
                let n = rng.gen_range(0..=6);
                synth::random_graph(&mut rng, 0, n, 3, 0.4)
            };
            let h = {
                let n = rng.gen_range(0..=6);
                synth::random_graph(&mut rng, 1, n, 3, 0.4)
            };
            let mut r = bound_report(&g, &h, &cost, false).unwrap();
            r.exact = Some(brute_force_ged(&g, &h, &cost).unwrap());
            assert!(r.chain_holds(1e-9), "{r:?}");
            assert_eq!(r.clb, r.llb + r.dlb);
        }
    }

    #[test]
    fn branch_can_exceed_combined_bound() {
        // Label optimum matches the leaf to the centre; degree optimum does not.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cost = CostModel::uniform();
        let found = (0..2000).any(|_| {
            let g = {
                let n = rng.gen_range(2..=6);
                synth::random_graph(&mut rng, 0, n, 3, 0.5)
            };
            let h = {
                let n = rng.gen_range(2..=6);
                synth::random_graph(&mut rng, 1, n, 3, 0.5)
            };
            branch_lb(&g, &h, &cost).unwrap() > clb(&g, &h, &cost).unwrap() + 1e-9
        });
        assert!(found);
    }

    #[test]
    fn bounds_are_pseudometrics() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cost = CostModel::new(1.0, 1.0, 0.5, 1.0);
        for _ in 0..100 {
            let gs: Vec<Graph> = (0..3)
                .map(|i| {
                    let n = rng.gen_range(0..=8);
                    synth::random_graph(&mut rng, i, n, 4, 0.4)
                })
                .collect();
            let trees = BoundTrees::for_graphs(&gs, &cost).unwrap();
            for kind in [BoundKind::Llb, BoundKind::Dlb, BoundKind::Clb] {
                let d = |a: usize, b: usize| trees.bound(&gs[a], &gs[b], kind).unwrap();
                assert_eq!(d(0, 1), d(1, 0));
                assert_eq!(d(0, 0), 0.0);
                assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9);
            }
        }
    }

    #[test]
    fn table_costs_stay_below_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..60 {
            let k = 3;
            let mut rows = vec![vec![0.0; k]; k];
            for i in 0..k {
                for j in i + 1..k {
                    let c = rng.gen_range(0.1..2.0);
                    rows[i][j] = c;
                    rows[j][i] = c;
                }
            }
            let table = LabelCostTable::new((0..k as u32).collect(), rows).unwrap();
            let cost = CostModel::new(1.5, 1.0, 1.0, 1.0).with_label_costs(table);
            let g = {
                let n = rng.gen_range(0..=5);
                synth::random_graph(&mut rng, 0, n, k as u32, 0.4)
            };
            let h = {
                let n = rng.gen_range(0..=5);
                synth::random_graph(&mut rng, 1, n, k as u32, 0.4)
            };
            let truth = brute_force_ged(&g, &h, &cost).unwrap();
            let r = bound_report(&g, &h, &cost, false).unwrap();
            assert!(r.llb <= truth + 1e-9);
            assert!(r.clb <= r.branch_lb + 1e-9);
            assert!(r.branch_lb <= truth + 1e-9);
            assert!(truth <= r.branch_ub.unwrap() + 1e-9);
        }
    }
}
