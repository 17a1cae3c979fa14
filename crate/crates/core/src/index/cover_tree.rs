//! Cover tree over sparse ℓ1 vectors.
//!
//! Vectors live in a flat arena; tree nodes refer to them by index. A node
//! at level `i` covers its descendants within `base^i`, and children of one
//! node are pairwise further apart than `base^(i-1)`. Exact duplicates are
//! attached to the node they coincide with instead of becoming children.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::embedding::sparse_l1;

/// Slack applied when pruning by the triangle inequality, so rounding never
/// causes a false dismissal.
pub const PRUNE_SLACK: f64 = 1e-9;

/// Sparse vectors stored back to back.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointArena {
    offsets: Vec<usize>,
    entries: Vec<(u64, f64)>,
}

impl PointArena {
    pub fn new() -> Self {
        PointArena {
            offsets: vec![0],
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, point: impl IntoIterator<Item = (u64, f64)>) -> usize {
        if self.offsets.is_empty() {
            self.offsets.push(0);
        }
        self.entries.extend(point);
        self.offsets.push(self.entries.len());
        self.offsets.len() - 2
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[(u64, f64)] {
        &self.entries[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        sparse_l1(self.get(i), self.get(j))
    }

    pub fn distance_to(&self, i: usize, q: &[(u64, f64)]) -> f64 {
        sparse_l1(self.get(i), q)
    }
}

#[derive(Clone, Debug)]
struct Node {
    point: usize,
    level: i32,
    children: Vec<usize>,
    duplicates: Vec<usize>,
    /// Largest distance from this node's point to any point below it.
    maxdist: f64,
}

#[derive(Clone, Debug)]
pub struct CoverTree {
    base: f64,
    nodes: Vec<Node>,
}

impl CoverTree {
    /// Inserts every arena point in index order. The root is point 0, placed
    /// at the smallest level whose radius covers the whole set.
    pub fn build(points: &PointArena, base: f64) -> Self {
        assert!(base > 1.0, "cover tree base must exceed 1");
        let mut tree = CoverTree {
            base,
            nodes: Vec::new(),
        };
        if points.is_empty() {
            return tree;
        }
        let far = (1..points.len())
            .map(|i| points.distance(0, i))
            .fold(0.0, f64::max);
        let level = if far > 0.0 {
            far.log(base).ceil() as i32
        } else {
            0
        };
        let mut level = level;
        while base.powi(level) < far {
            level += 1;
        }
        tree.nodes.push(Node {
            point: 0,
            level,
            children: Vec::new(),
            duplicates: Vec::new(),
            maxdist: 0.0,
        });
        for i in 1..points.len() {
            tree.insert(points, i);
        }
        tree
    }

    fn radius(&self, level: i32) -> f64 {
        self.base.powi(level)
    }

    fn insert(&mut self, points: &PointArena, x: usize) {
        let mut p = 0usize;
        let mut d = points.distance(self.nodes[p].point, x);
        loop {
            let node = &mut self.nodes[p];
            node.maxdist = node.maxdist.max(d);
            if d == 0.0 {
                node.duplicates.push(x);
                return;
            }
            let next = self.nodes[p].children.iter().find_map(|&c| {
                let dc = points.distance(self.nodes[c].point, x);
                (dc <= self.radius(self.nodes[c].level)).then_some((c, dc))
            });
            match next {
                Some((c, dc)) => {
                    p = c;
                    d = dc;
                }
                None => {
                    let level = self.nodes[p].level - 1;
                    let id = self.nodes.len();
                    self.nodes.push(Node {
                        point: x,
                        level,
                        children: Vec::new(),
                        duplicates: Vec::new(),
                        maxdist: 0.0,
                    });
                    self.nodes[p].children.push(id);
                    return;
                }
            }
        }
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Points within `radius` of `q`, ascending by index. `keep` decides
    /// membership from the computed distance.
    pub fn range(
        &self,
        points: &PointArena,
        q: &[(u64, f64)],
        radius: f64,
        mut keep: impl FnMut(f64) -> bool,
    ) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let mut stack = vec![(0usize, points.distance_to(self.nodes[0].point, q))];
        while let Some((n, d)) = stack.pop() {
            let node = &self.nodes[n];
            if d - node.maxdist > radius + PRUNE_SLACK {
                continue;
            }
            if keep(d) {
                out.push((node.point, d));
                out.extend(node.duplicates.iter().map(|&p| (p, d)));
            }
            for &c in &node.children {
                stack.push((c, points.distance_to(self.nodes[c].point, q)));
            }
        }
        out.sort_unstable_by_key(|&(p, _)| p);
        out
    }

    /// Lazily yields every point by ascending distance to `q`, ties by
    /// `tie_key` of the point.
    pub fn ranking<'a, F>(
        &'a self,
        points: &'a PointArena,
        q: &'a [(u64, f64)],
        tie_key: F,
    ) -> Ranking<'a, F>
    where
        F: Fn(usize) -> u64,
    {
        let mut heap = BinaryHeap::new();
        if !self.nodes.is_empty() {
            let d = points.distance_to(self.nodes[0].point, q);
            heap.push(Entry::node(0, d, self.nodes[0].maxdist));
        }
        Ranking {
            tree: self,
            points,
            q,
            heap,
            tie_key,
        }
    }

    /// Checks the covering, separation and maxdist invariants and that every
    /// point appears exactly once. Returns a description of the first
    /// violation.
    pub fn check_invariants(&self, points: &PointArena) -> Result<(), String> {
        let mut seen = vec![0u32; points.len()];
        for (n, node) in self.nodes.iter().enumerate() {
            seen[node.point] += 1;
            for &dup in &node.duplicates {
                seen[dup] += 1;
                if points.distance(node.point, dup) != 0.0 {
                    return Err(format!("node {n} holds a non-duplicate {dup}"));
                }
            }
            for &c in &node.children {
                let child = &self.nodes[c];
                if child.level != node.level - 1 {
                    return Err(format!("child {c} of node {n} skips a level"));
                }
                if points.distance(node.point, child.point) > self.radius(node.level) {
                    return Err(format!("child {c} lies outside the cover of node {n}"));
                }
            }
            for (i, &a) in node.children.iter().enumerate() {
                for &b in &node.children[i + 1..] {
                    let d = points.distance(self.nodes[a].point, self.nodes[b].point);
                    if d <= self.radius(node.level - 1) {
                        return Err(format!(
                            "children {a} and {b} of node {n} are not separated"
                        ));
                    }
                }
            }
            let mut stack = node.children.clone();
            while let Some(c) = stack.pop() {
                let far = points.distance(node.point, self.nodes[c].point);
                if far > node.maxdist {
                    return Err(format!("descendant {c} of node {n} exceeds its maxdist"));
                }
                stack.extend(&self.nodes[c].children);
            }
        }
        if let Some(p) = seen.iter().position(|&s| s != 1) {
            return Err(format!("point {p} appears {} times", seen[p]));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Node,
    Point,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    key: f64,
    kind: Kind,
    tie: u64,
    index: usize,
    distance: f64,
}

impl Entry {
    fn node(index: usize, distance: f64, maxdist: f64) -> Self {
        Entry {
            key: (distance - maxdist).max(0.0),
            kind: Kind::Node,
            tie: 0,
            index,
            distance,
        }
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl Ord for Entry {
    /// Reversed so the max-heap pops the smallest key first. Nodes precede
    /// points at equal keys so tied points are all queued before any is
    /// emitted.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then(other.kind.cmp(&self.kind))
            .then(other.tie.cmp(&self.tie))
            .then(other.index.cmp(&self.index))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct Ranking<'a, F> {
    tree: &'a CoverTree,
    points: &'a PointArena,
    q: &'a [(u64, f64)],
    heap: BinaryHeap<Entry>,
    tie_key: F,
}

impl<F: Fn(usize) -> u64> Iterator for Ranking<'_, F> {
    /// `(point index, distance)`.
    type Item = (usize, f64);

    fn next(&mut self) -> Option<Self::Item> {
        while let Some(e) = self.heap.pop() {
            match e.kind {
                Kind::Point => return Some((e.index, e.key)),
                Kind::Node => {
                    let node = &self.tree.nodes[e.index];
                    for &p in std::iter::once(&node.point).chain(&node.duplicates) {
                        self.heap.push(Entry {
                            key: e.distance,
                            kind: Kind::Point,
                            tie: (self.tie_key)(p),
                            index: p,
                            distance: e.distance,
                        });
                    }
                    for &c in &node.children {
                        let child = &self.tree.nodes[c];
                        let d = self.points.distance_to(child.point, self.q);
                        self.heap.push(Entry::node(c, d, child.maxdist));
                    }
                }
            }
        }
        None
    }
}
