//! Exact graph edit distance for verification.
//!
//! Every edit path is induced by a vertex mapping: an injective partial map
//! from the source graph's vertices to the target's, with unmapped source
//! vertices deleted and unmapped target vertices inserted. The distance is the
//! minimum induced cost over all mappings.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::bounds;
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::graph::{Graph, Label};

/// Default cap on `|V(g)| + |V(h)|` for unthresholded exact computation.
pub const DEFAULT_SIZE_CAP: usize = 40;

/// Vertex cap per graph for [`brute_force_ged`].
pub const BRUTE_FORCE_CAP: usize = 7;

const EPS: f64 = 1e-9;

/// Source vertex `u` maps to `map[u]`; `None` means deletion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMapping {
    map: Vec<Option<usize>>,
    target_size: usize,
}

impl VertexMapping {
    pub fn new(map: Vec<Option<usize>>, target_size: usize) -> Result<Self> {
        let mut seen = vec![false; target_size];
        for t in map.iter().flatten() {
            if *t >= target_size || std::mem::replace(&mut seen[*t], true) {
                return Err(Error::InvalidGraph(format!(
                    "vertex mapping is not injective into 0..{target_size}"
                )));
            }
        }
        Ok(VertexMapping { map, target_size })
    }

    pub fn identity(n: usize) -> Self {
        VertexMapping {
            map: (0..n).map(Some).collect(),
            target_size: n,
        }
    }

    pub fn get(&self, u: usize) -> Option<usize> {
        self.map[u]
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.map
    }

    /// Target vertices not hit by the mapping, ascending.
    pub fn inserted(&self) -> Vec<usize> {
        let mut hit = vec![false; self.target_size];
        for t in self.map.iter().flatten() {
            hit[*t] = true;
        }
        (0..self.target_size).filter(|&v| !hit[v]).collect()
    }

    /// Target-to-source view.
    pub fn inverse(&self) -> Vec<Option<usize>> {
        let mut inv = vec![None; self.target_size];
        for (u, t) in self.map.iter().enumerate() {
            if let Some(t) = t {
                inv[*t] = Some(u);
            }
        }
        inv
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditOp {
    /// Source vertex `v` gets the label of target vertex `target`.
    RelabelVertex {
        v: usize,
        target: usize,
        from: Label,
        to: Label,
    },
    DeleteVertex {
        v: usize,
    },
    /// Target vertex `target` is inserted with its label.
    InsertVertex {
        target: usize,
        label: Label,
    },
    /// Source edge `(u, v)` is deleted.
    DeleteEdge {
        u: usize,
        v: usize,
    },
    /// Target edge `(u, v)` is inserted with its label.
    InsertEdge {
        u: usize,
        v: usize,
        label: Option<Label>,
    },
    /// Source edge `(u, v)` gets the label of its image.
    RelabelEdge {
        u: usize,
        v: usize,
        from: Option<Label>,
        to: Option<Label>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EditStep {
    pub op: EditOp,
    pub cost: f64,
}

/// An edit path with the vertex mapping that induces it.
#[derive(Clone, Debug, PartialEq)]
pub struct EditPath {
    pub steps: Vec<EditStep>,
    pub mapping: VertexMapping,
}

impl EditPath {
    pub fn total_cost(&self) -> f64 {
        self.steps.iter().map(|s| s.cost).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the path to `g`. Returns the edited graph and, for each of its
    /// vertices, the target vertex it stands for.
    pub fn apply(&self, g: &Graph) -> Result<(Graph, Vec<usize>)> {
        let mut labels: Vec<Option<Label>> = g.labels().iter().map(|&l| Some(l)).collect();
        let mut edges: HashMap<(usize, usize), Option<Label>> =
            g.edges().iter().map(|e| ((e.u, e.v), e.label)).collect();
        // Inserted vertices are appended after the source vertices.
        let mut witness: Vec<Option<usize>> = self.mapping.as_slice().to_vec();
        let mut slot_of_target: HashMap<usize, usize> = self
            .mapping
            .as_slice()
            .iter()
            .enumerate()
            .filter_map(|(u, t)| t.map(|t| (t, u)))
            .collect();
        let inserted_labels: HashMap<usize, Label> = self
            .steps
            .iter()
            .filter_map(|s| match s.op {
                EditOp::InsertVertex { target, label } => Some((target, label)),
                _ => None,
            })
            .collect();
        let mut targets: Vec<_> = inserted_labels.keys().copied().collect();
        targets.sort_unstable();
        for t in targets {
            slot_of_target.insert(t, labels.len());
            labels.push(Some(inserted_labels[&t]));
            witness.push(Some(t));
        }
        let slot = |t: usize| {
            slot_of_target
                .get(&t)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("target vertex {t} has no preimage")))
        };
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        for step in &self.steps {
            match step.op {
                EditOp::RelabelVertex { v, to, .. } => labels[v] = Some(to),
                EditOp::DeleteVertex { v } => labels[v] = None,
                EditOp::InsertVertex { .. } => {}
                EditOp::DeleteEdge { u, v } => {
                    edges.remove(&key(u, v));
                }
                EditOp::InsertEdge { u, v, label } => {
                    let (a, b) = (slot(u)?, slot(v)?);
                    edges.insert(key(a, b), label);
                }
                EditOp::RelabelEdge { u, v, to, .. } => {
                    edges.insert(key(u, v), to);
                }
            }
        }
        let kept: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].is_some()).collect();
        let mut compact = vec![usize::MAX; labels.len()];
        for (new, &old) in kept.iter().enumerate() {
            compact[old] = new;
        }
        let mut edge_list = Vec::with_capacity(edges.len());
        for ((a, b), l) in edges {
            if compact[a] == usize::MAX || compact[b] == usize::MAX {
                return Err(Error::InvalidGraph(
                    "edit path keeps an edge of a deleted vertex".into(),
                ));
            }
            edge_list.push((compact[a], compact[b], l));
        }
        let graph = Graph::new(
            g.id(),
            kept.iter().map(|&i| labels[i].expect("kept")).collect(),
            edge_list,
        )?;
        let witness = kept
            .iter()
            .map(|&i| witness[i].expect("kept vertices are mapped"))
            .collect();
        Ok((graph, witness))
    }
}

/// Cost of the edit path induced by `mapping` from `g` to `h`.
pub fn induced_cost(g: &Graph, h: &Graph, cost: &CostModel, mapping: &VertexMapping) -> f64 {
    let mut total = 0.0;
    for u in 0..g.vertex_count() {
        total += match mapping.get(u) {
            Some(v) => cost.vertex_relabel_cost(g.label(u), h.label(v)),
            None => cost.vertex_indel,
        };
    }
    total += cost.vertex_indel * mapping.inserted().len() as f64;
    let mut matched_target_edges = 0usize;
    for e in g.edges() {
        match (mapping.get(e.u), mapping.get(e.v)) {
            (Some(a), Some(b)) => match h.edge_label(a, b) {
                Some(l) => {
                    matched_target_edges += 1;
                    total += cost.edge_relabel_cost(e.label, l);
                }
                None => total += cost.edge_indel,
            },
            _ => total += cost.edge_indel,
        }
    }
    total += cost.edge_indel * (h.edge_count() - matched_target_edges) as f64;
    total
}

/// The edit path induced by `mapping`, with zero-cost steps omitted.
pub fn induced_path(g: &Graph, h: &Graph, cost: &CostModel, mapping: &VertexMapping) -> EditPath {
    let mut steps = Vec::new();
    for u in 0..g.vertex_count() {
        match mapping.get(u) {
            Some(v) if g.label(u) != h.label(v) => steps.push(EditStep {
                op: EditOp::RelabelVertex {
                    v: u,
                    target: v,
                    from: g.label(u),
                    to: h.label(v),
                },
                cost: cost.vertex_relabel_cost(g.label(u), h.label(v)),
            }),
            Some(_) => {}
            None => steps.push(EditStep {
                op: EditOp::DeleteVertex { v: u },
                cost: cost.vertex_indel,
            }),
        }
    }
    for v in mapping.inserted() {
        steps.push(EditStep {
            op: EditOp::InsertVertex {
                target: v,
                label: h.label(v),
            },
            cost: cost.vertex_indel,
        });
    }
    for e in g.edges() {
        match (mapping.get(e.u), mapping.get(e.v)) {
            (Some(a), Some(b)) if h.has_edge(a, b) => {
                let to = h.edge_label(a, b).flatten();
                if to != e.label {
                    steps.push(EditStep {
                        op: EditOp::RelabelEdge {
                            u: e.u,
                            v: e.v,
                            from: e.label,
                            to,
                        },
                        cost: cost.edge_relabel_cost(e.label, to),
                    });
                }
            }
            _ => steps.push(EditStep {
                op: EditOp::DeleteEdge { u: e.u, v: e.v },
                cost: cost.edge_indel,
            }),
        }
    }
    let inverse = mapping.inverse();
    for e in h.edges() {
        let covered = match (inverse[e.u], inverse[e.v]) {
            (Some(a), Some(b)) => g.has_edge(a, b),
            _ => false,
        };
        if !covered {
            steps.push(EditStep {
                op: EditOp::InsertEdge {
                    u: e.u,
                    v: e.v,
                    label: e.label,
                },
                cost: cost.edge_indel,
            });
        }
    }
    EditPath {
        steps,
        mapping: mapping.clone(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GedOutcome {
    Exact {
        distance: f64,
        path: EditPath,
    },
    /// Every edit path costs more than the threshold.
    Exceeded,
}

impl GedOutcome {
    pub fn distance(&self) -> Option<f64> {
        match self {
            GedOutcome::Exact { distance, .. } => Some(*distance),
            GedOutcome::Exceeded => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExactConfig {
    /// Cap on combined vertex count when no threshold is given.
    pub size_cap: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

pub fn exact_ged(
    g: &Graph,
    h: &Graph,
    cost: &CostModel,
    threshold: Option<f64>,
) -> Result<GedOutcome> {
    exact_ged_with(g, h, cost, threshold, &ExactConfig::default())
}

/// Depth-first branch and bound over vertex mappings.
///
/// Source vertices are mapped by descending degree, then ascending label
/// frequency, then id. A node is pruned when its cost so far plus a lower
/// bound on the unmapped remainder cannot beat the incumbent or exceeds the
/// threshold. The incumbent starts from the branch upper bound.
pub fn exact_ged_with(
    g: &Graph,
    h: &Graph,
    cost: &CostModel,
    threshold: Option<f64>,
    config: &ExactConfig,
) -> Result<GedOutcome> {
    let size = g.vertex_count() + h.vertex_count();
    if threshold.is_none() && size > config.size_cap {
        return Err(Error::SizeCapExceeded {
            size,
            cap: config.size_cap,
        });
    }
    let (mut best, mut best_map) = match bounds::branch(g, h, cost) {
        Ok(b) => {
            let ub = induced_cost(g, h, cost, &b.mapping);
            (ub, b.mapping)
        }
        Err(Error::InstanceTooLarge { .. }) => {
            let all_deleted = VertexMapping::new(vec![None; g.vertex_count()], h.vertex_count())?;
            (induced_cost(g, h, cost, &all_deleted), all_deleted)
        }
        Err(e) => return Err(e),
    };
    let limit = threshold.unwrap_or(f64::INFINITY);

    let mut search = Search::new(g, h, cost);
    search.run(&mut best, &mut best_map, limit);

    if best > limit + EPS {
        return Ok(GedOutcome::Exceeded);
    }
    Ok(GedOutcome::Exact {
        distance: best,
        path: induced_path(g, h, cost, &best_map),
    })
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    cost: &'a CostModel,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    relabel_floor: f64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, h: &'a Graph, cost: &'a CostModel) -> Self {
        let mut freq: HashMap<Label, usize> = HashMap::new();
        for &l in g.labels() {
            *freq.entry(l).or_default() += 1;
        }
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        order.sort_by(|&a, &b| {
            g.degree(b)
                .cmp(&g.degree(a))
                .then(freq[&g.label(a)].cmp(&freq[&g.label(b)]))
                .then(a.cmp(&b))
        });
        Search {
            g,
            h,
            cost,
            order,
            map: vec![None; g.vertex_count()],
            used: vec![false; h.vertex_count()],
            relabel_floor: cost.min_vertex_relabel().min(2.0 * cost.vertex_indel),
        }
    }

    fn run(&mut self, best: &mut f64, best_map: &mut VertexMapping, limit: f64) {
        self.descend(0, 0.0, best, best_map, limit);
    }

    /// Cost of the pairs between `u -> target` and every already mapped
    /// source vertex, plus the vertex operation itself.
    fn step_cost(&self, depth: usize, u: usize, target: Option<usize>) -> f64 {
        let (g, h, c) = (self.g, self.h, self.cost);
        let mut total = match target {
            Some(v) => c.vertex_relabel_cost(g.label(u), h.label(v)),
            None => c.vertex_indel,
        };
        for &w in &self.order[..depth] {
            let g_edge = g.edge_label(u, w);
            let h_edge = match (target, self.map[w]) {
                (Some(a), Some(b)) => h.edge_label(a, b),
                _ => None,
            };
            total += match (g_edge, h_edge) {
                (Some(x), Some(y)) => c.edge_relabel_cost(x, y),
                (Some(_), None) | (None, Some(_)) => c.edge_indel,
                (None, None) => 0.0,
            };
        }
        total
    }

    /// Cost of finishing once every source vertex is placed: unused target
    /// vertices and the target edges touching them are inserted.
    fn completion_cost(&self) -> f64 {
        let h = self.h;
        let unused = self.used.iter().filter(|u| !**u).count();
        let edges = h
            .edges()
            .iter()
            .filter(|e| !self.used[e.u] || !self.used[e.v])
            .count();
        self.cost.vertex_indel * unused as f64 + self.cost.edge_indel * edges as f64
    }

    /// Label and degree assignment bounds on the unmapped remainder.
    fn remainder_bound(&self, depth: usize) -> f64 {
        let (g, h, c) = (self.g, self.h, self.cost);
        let rest_g = &self.order[depth..];
        let mut labels_g: Vec<Label> = rest_g.iter().map(|&u| g.label(u)).collect();
        let mut labels_h: Vec<Label> = (0..h.vertex_count())
            .filter(|&v| !self.used[v])
            .map(|v| h.label(v))
            .collect();
        labels_g.sort_unstable();
        labels_h.sort_unstable();
        let common = sorted_intersection(&labels_g, &labels_h);
        let (n, m) = (labels_g.len(), labels_h.len());
        let vertex_part =
            c.vertex_indel * n.abs_diff(m) as f64 + self.relabel_floor * (n.min(m) - common) as f64;

        let mut deg_g: Vec<usize> = rest_g.iter().map(|&u| g.degree(u)).collect();
        let mut deg_h: Vec<usize> = (0..h.vertex_count())
            .filter(|&v| !self.used[v])
            .map(|v| h.degree(v))
            .collect();
        deg_g.sort_unstable_by(|a, b| b.cmp(a));
        deg_h.sort_unstable_by(|a, b| b.cmp(a));
        let len = deg_g.len().max(deg_h.len());
        let mismatch: usize = (0..len)
            .map(|i| {
                deg_g
                    .get(i)
                    .copied()
                    .unwrap_or(0)
                    .abs_diff(deg_h.get(i).copied().unwrap_or(0))
            })
            .sum();
        vertex_part + 0.5 * c.edge_indel * mismatch as f64
    }

    fn descend(
        &mut self,
        depth: usize,
        so_far: f64,
        best: &mut f64,
        best_map: &mut VertexMapping,
        limit: f64,
    ) {
        if depth == self.order.len() {
            let total = so_far + self.completion_cost();
            if total < *best - EPS {
                *best = total;
                *best_map = VertexMapping {
                    map: self.map.clone(),
                    target_size: self.h.vertex_count(),
                };
            }
            return;
        }
        let u = self.order[depth];
        let mut children: Vec<(f64, Option<usize>)> = (0..self.h.vertex_count())
            .filter(|&v| !self.used[v])
            .map(Some)
            .chain(std::iter::once(None))
            .map(|t| (so_far + self.step_cost(depth, u, t), t))
            .collect();
        children.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| match (a.1, b.1) {
                    (Some(x), Some(y)) => x.cmp(&y),
                    (Some(_), None) => Ordering::Less,
                    (None, Some(_)) => Ordering::Greater,
                    (None, None) => Ordering::Equal,
                })
        });
        for (cost, target) in children {
            if cost >= *best - EPS || cost > limit + EPS {
                continue;
            }
            self.map[u] = target;
            if let Some(v) = target {
                self.used[v] = true;
            }
            let bound = cost + self.remainder_bound(depth + 1);
            if bound < *best - EPS && bound <= limit + EPS {
                self.descend(depth + 1, cost, best, best_map, limit);
            }
            if let Some(v) = target {
                self.used[v] = false;
            }
            self.map[u] = None;
        }
    }
}

fn sorted_intersection(a: &[Label], b: &[Label]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Ground truth by enumerating every injective partial vertex map.
/// Both graphs may have at most [`BRUTE_FORCE_CAP`] vertices.
pub fn brute_force_ged(g: &Graph, h: &Graph, cost: &CostModel) -> Result<f64> {
    Ok(brute_force_mapping(g, h, cost)?.0)
}

/// As [`brute_force_ged`], also returning a minimizing mapping.
pub fn brute_force_mapping(g: &Graph, h: &Graph, cost: &CostModel) -> Result<(f64, VertexMapping)> {
    for x in [g, h] {
        if x.vertex_count() > BRUTE_FORCE_CAP {
            return Err(Error::SizeCapExceeded {
                size: x.vertex_count(),
                cap: BRUTE_FORCE_CAP,
            });
        }
    }
    fn rec(
        u: usize,
        g: &Graph,
        h: &Graph,
        cost: &CostModel,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        best: &mut (f64, Vec<Option<usize>>),
    ) {
        if u == g.vertex_count() {
            let m = VertexMapping {
                map: map.clone(),
                target_size: h.vertex_count(),
            };
            let c = induced_cost(g, h, cost, &m);
            if c < best.0 {
                *best = (c, map.clone());
            }
            return;
        }
        for v in 0..h.vertex_count() {
            if !used[v] {
                used[v] = true;
                map[u] = Some(v);
                rec(u + 1, g, h, cost, map, used, best);
                used[v] = false;
            }
        }
        map[u] = None;
        rec(u + 1, g, h, cost, map, used, best);
    }
    let mut best = (f64::INFINITY, vec![None; g.vertex_count()]);
    rec(
        0,
        g,
        h,
        cost,
        &mut vec![None; g.vertex_count()],
        &mut vec![false; h.vertex_count()],
        &mut best,
    );
    let mapping = VertexMapping {
        map: best.1,
        target_size: h.vertex_count(),
    };
    Ok((best.0, mapping))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn p3() -> Graph {
        Graph::from_parts(0, vec![0, 1, 0], &[(0, 1), (1, 2)]).unwrap()
    }

    fn p2() -> Graph {
        Graph::from_parts(1, vec![0, 1], &[(0, 1)]).unwrap()
    }

    /// Brute-force isomorphism check for tiny graphs.
    fn isomorphic(a: &Graph, b: &Graph) -> bool {
        if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
            return false;
        }
        let n = a.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let ok = (0..n).all(|i| a.label(i) == b.label(perm[i]))
                && a.edges()
                    .iter()
                    .all(|e| b.edge_label(perm[e.u], perm[e.v]) == Some(e.label));
            if ok {
                return true;
            }
            // next permutation
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| perm[i] < perm[i + 1])
            else {
                return false;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
    }

    fn check_path(g: &Graph, h: &Graph, cost: &CostModel, path: &EditPath, distance: f64) {
        assert!((path.total_cost() - distance).abs() < 1e-9);
        let (edited, witness) = path.apply(g).unwrap();
        assert_eq!(edited.vertex_count(), h.vertex_count());
        for (i, &t) in witness.iter().enumerate() {
            assert_eq!(edited.label(i), h.label(t));
        }
        for e in edited.edges() {
            assert_eq!(h.edge_label(witness[e.u], witness[e.v]), Some(e.label));
        }
        assert_eq!(edited.edge_count(), h.edge_count());
        if h.vertex_count() <= 7 {
            assert!(isomorphic(&edited, h));
        }
        let _ = cost;
    }

    #[test]
    fn identical_graphs() {
        let g = p3();
        match exact_ged(&g, &g, &CostModel::uniform(), None).unwrap() {
            GedOutcome::Exact { distance, path } => {
                assert_eq!(distance, 0.0);
                assert!(path.is_empty());
            }
            GedOutcome::Exceeded => panic!("no threshold given"),
        }
    }

    #[test]
    fn path_three_vs_path_two() {
        let c = CostModel::uniform();
        assert_eq!(brute_force_ged(&p3(), &p2(), &c).unwrap(), 2.0);
        let out = exact_ged(&p3(), &p2(), &c, None).unwrap();
        assert_eq!(out.distance(), Some(2.0));
        if let GedOutcome::Exact { distance, path } = out {
            check_path(&p3(), &p2(), &c, &path, distance);
        }
    }

    #[test]
    fn brute_force_small_cases() {
        let c = CostModel::uniform();
        assert_eq!(
            brute_force_ged(&Graph::empty(0), &Graph::empty(1), &c).unwrap(),
            0.0
        );
        let a = Graph::from_parts(0, vec![0], &[]).unwrap();
        let b = Graph::from_parts(1, vec![1], &[]).unwrap();
        assert_eq!(brute_force_ged(&a, &b, &c).unwrap(), 1.0);
        let triangle = Graph::from_parts(0, vec![0, 0, 0], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let path = Graph::from_parts(1, vec![0, 0, 0], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(brute_force_ged(&triangle, &path, &c).unwrap(), 1.0);
        let eight = Graph::from_parts(0, vec![0; 8], &[]).unwrap();
        assert!(matches!(
            brute_force_ged(&eight, &a, &c),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn size_cap_applies_without_threshold() {
        let big = Graph::from_parts(0, vec![0; 21], &[]).unwrap();
        let c = CostModel::uniform();
        assert!(matches!(
            exact_ged(&big, &big, &c, None),
            Err(Error::SizeCapExceeded { .. })
        ));
        assert_eq!(
            exact_ged(&big, &big, &c, Some(0.0)).unwrap().distance(),
            Some(0.0)
        );
    }

    #[test]
    fn edge_labels_cost_relabels() {
        let c = CostModel::new(1.0, 1.0, 1.0, 0.25);
        let g = Graph::new(0, vec![0, 0], [(0, 1, Some(1))]).unwrap();
        let h = Graph::new(1, vec![0, 0], [(0, 1, Some(2))]).unwrap();
        assert_eq!(brute_force_ged(&g, &h, &c).unwrap(), 0.25);
        let out = exact_ged(&g, &h, &c, None).unwrap();
        assert_eq!(out.distance(), Some(0.25));
        if let GedOutcome::Exact { distance, path } = out {
            check_path(&g, &h, &c, &path, distance);
        }
    }

    #[test]
    fn matches_brute_force_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = CostModel::uniform();
        for _ in 0..300 {
            let g = {
                let n = rng.gen_range(0..=6);
                synth::random_graph(&mut rng, 0, n, 3, 0.4)
            };
            let h = {
                let n = rng.gen_range(0..=6);
                synth::random_graph(&mut rng, 1, n, 3, 0.4)
            };
            let truth = brute_force_ged(&g, &h, &c).unwrap();
            match exact_ged(&g, &h, &c, None).unwrap() {
                GedOutcome::Exact { distance, path } => {
                    assert_eq!(distance, truth);
                    check_path(&g, &h, &c, &path, distance);
                }
                GedOutcome::Exceeded => panic!("no threshold"),
            }
            let tau = rng.gen_range(0..=6) as f64;
            let thresholded = exact_ged(&g, &h, &c, Some(tau)).unwrap();
            assert_eq!(thresholded == GedOutcome::Exceeded, truth > tau);
            if let Some(d) = thresholded.distance() {
                assert_eq!(d, truth);
            }
        }
    }

    #[test]
    fn non_uniform_costs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let c = CostModel::new(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..1.0),
            );
            let g = {
                let n = rng.gen_range(0..=5);
                synth::random_graph(&mut rng, 0, n, 3, 0.5)
            };
            let h = {
                let n = rng.gen_range(0..=5);
                synth::random_graph(&mut rng, 1, n, 3, 0.5)
            };
            let truth = brute_force_ged(&g, &h, &c).unwrap();
            let got = exact_ged(&g, &h, &c, None).unwrap().distance().unwrap();
            assert!((got - truth).abs() < 1e-9, "{got} vs {truth}");
        }
    }

    #[test]
    fn graph_level_metric_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = CostModel::uniform();
        for _ in 0..40 {
            let gs: Vec<Graph> = (0..3)
                .map(|i| {
                    let n = rng.gen_range(0..=5);
                    synth::random_graph(&mut rng, i, n, 2, 0.5)
                })
                .collect();
            let d = |a: &Graph, b: &Graph| brute_force_ged(a, b, &c).unwrap();
            assert_eq!(d(&gs[0], &gs[1]), d(&gs[1], &gs[0]));
            assert!(d(&gs[0], &gs[2]) <= d(&gs[0], &gs[1]) + d(&gs[1], &gs[2]));
        }
    }
}
