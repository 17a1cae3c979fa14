//! Weighted rooted trees that realize ground costs as path lengths.
//!
//! Every tree is rooted at the node that hosts the dummy element, so the
//! embedding of a vertex set never counts dummies. Three shapes are built:
//!
//! * the label star: root `ε`, hub `r`, one leaf per label,
//! * the degree path `0 – 1 – … – Δ`,
//! * an ultrametric dendrogram from single-linkage clustering of a label cost
//!   table, with the dummy attached above its root.
//!
//! The star and the path are parameterized only by edit costs, so they extend
//! logically to labels or degrees that were not present at construction time.
//! Such nodes are *virtual*: they have ids beyond [`MetricTree::node_count`]
//! and their parent and edge weight follow from the layout.

use std::collections::HashMap;
use std::fmt;

use crate::cost::{CostModel, LabelCostTable, RelabelCost};
use crate::error::{Error, Result};
use crate::graph::Label;

pub type NodeId = u32;

/// What a graph vertex (or the dummy) is mapped to in a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnchorKey {
    Dummy,
    Label(Label),
    Degree(u32),
}

impl fmt::Display for AnchorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnchorKey::Dummy => write!(f, "the dummy element"),
            AnchorKey::Label(l) => write!(f, "label {l}"),
            AnchorKey::Degree(d) => write!(f, "degree {d}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    Label,
    Degree,
    Ultrametric,
}

#[derive(Clone, Debug, PartialEq)]
enum Layout {
    /// Leaf for label `l` is node `2 + l` under hub `1`.
    Star { hub_weight: f64, leaf_weight: f64 },
    /// Node `d` hosts degree `d`; node 0 is the root.
    Path { step: f64 },
    General {
        anchors: HashMap<AnchorKey, NodeId>,
        height: f64,
    },
}

const STAR_HUB: NodeId = 1;
const STAR_FIRST_LEAF: NodeId = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct MetricTree {
    parent: Vec<Option<NodeId>>,
    weight: Vec<f64>,
    depth: Vec<u32>,
    layout: Layout,
    fingerprint: u64,
}

impl MetricTree {
    /// Star tree for uniform vertex costs: `w(ε r) = c_v - c_vl/2`,
    /// `w(r l) = c_vl/2`.
    pub fn label_tree(labels: &[Label], cost: &CostModel) -> Result<Self> {
        cost.validate()?;
        let relabel = match cost.vertex_relabel {
            RelabelCost::Uniform(c) => c,
            RelabelCost::Table(_) => {
                return Err(Error::InvalidCost(
                    "the label star needs a uniform relabel cost; use the ultrametric tree for label tables".into(),
                ))
            }
        };
        let hub_weight = cost.vertex_indel - 0.5 * relabel;
        let leaf_weight = 0.5 * relabel;
        let leaves = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let n = STAR_FIRST_LEAF as usize + leaves;
        let mut parent = vec![None, Some(0)];
        let mut weight = vec![0.0, hub_weight];
        parent.resize(n, Some(STAR_HUB));
        weight.resize(n, leaf_weight);
        Ok(MetricTree::assemble(
            parent,
            weight,
            Layout::Star {
                hub_weight,
                leaf_weight,
            },
        ))
    }

    /// Path tree `0 – 1 – … – max_degree` with every edge weighing `c_e/2`.
    pub fn degree_tree(max_degree: usize, cost: &CostModel) -> Self {
        let step = 0.5 * cost.edge_indel;
        let n = max_degree + 1;
        let parent = (0..n)
            .map(|d| d.checked_sub(1).map(|p| p as NodeId))
            .collect();
        let mut weight = vec![step; n];
        weight[0] = 0.0;
        MetricTree::assemble(parent, weight, Layout::Path { step })
    }

    /// Dendrogram of single-linkage clustering over `table`, realizing the
    /// subdominant ultrametric of the table on its labels.
    ///
    /// A merge at linkage height `h` places both clusters under a node of
    /// depth `h/2`, so every leaf sits at depth `u` below the dendrogram
    /// root. The dummy is attached above the root with weight `c_v - u`.
    pub fn ultrametric_tree(table: &LabelCostTable, cost: &CostModel) -> Result<Self> {
        let merges = single_linkage(table);
        let n = table.len();

        // Dendrogram nodes: 0..n leaves, then one per merge.
        let total = n + merges.len();
        let mut height = vec![0.0f64; total];
        let mut dparent: Vec<Option<usize>> = vec![None; total];
        for (k, m) in merges.iter().enumerate() {
            let node = n + k;
            height[node] = 0.5 * m.height;
            dparent[m.left] = Some(node);
            dparent[m.right] = Some(node);
        }
        let dendro_root = if total == 0 { None } else { Some(total - 1) };
        let u = dendro_root.map_or(0.0, |r| height[r]);
        if cost.vertex_indel < u {
            return Err(Error::DeletionTooCheap {
                indel: cost.vertex_indel,
                height: u,
            });
        }
        if !cost.vertex_indel.is_finite() {
            return Err(Error::InvalidCost(
                "vertex indel cost must be finite".into(),
            ));
        }

        // Renumber breadth-first from the dummy so parents precede children.
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); total];
        for (c, p) in dparent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(c);
            }
        }
        let mut parent = vec![None];
        let mut weight = vec![0.0];
        let mut new_id = vec![0 as NodeId; total];
        let mut queue = std::collections::VecDeque::new();
        if let Some(r) = dendro_root {
            new_id[r] = 1;
            parent.push(Some(0));
            weight.push(cost.vertex_indel - u);
            queue.push_back(r);
        }
        while let Some(x) = queue.pop_front() {
            for &c in &children[x] {
                new_id[c] = parent.len() as NodeId;
                parent.push(Some(new_id[x]));
                weight.push(height[x] - height[c]);
                queue.push_back(c);
            }
        }
        let mut anchors = HashMap::with_capacity(n + 1);
        anchors.insert(AnchorKey::Dummy, 0);
        for (i, &l) in table.labels().iter().enumerate() {
            anchors.insert(AnchorKey::Label(l), new_id[i]);
        }
        Ok(MetricTree::assemble(
            parent,
            weight,
            Layout::General { anchors, height: u },
        ))
    }

    /// Label tree matching the cost model: the star for a uniform relabel
    /// cost, the ultrametric dendrogram for a label table.
    pub fn for_labels(labels: &[Label], cost: &CostModel) -> Result<Self> {
        match &cost.vertex_relabel {
            RelabelCost::Uniform(_) => MetricTree::label_tree(labels, cost),
            RelabelCost::Table(t) => {
                cost.validate()?;
                MetricTree::ultrametric_tree(t, cost)
            }
        }
    }

    fn assemble(parent: Vec<Option<NodeId>>, weight: Vec<f64>, layout: Layout) -> Self {
        let mut depth = vec![0u32; parent.len()];
        for i in 0..parent.len() {
            if let Some(p) = parent[i] {
                debug_assert!((p as usize) < i, "parents must precede children");
                depth[i] = depth[p as usize] + 1;
            }
        }
        let mut tree = MetricTree {
            parent,
            weight,
            depth,
            layout,
            fingerprint: 0,
        };
        tree.fingerprint = tree.compute_fingerprint();
        tree
    }

    fn compute_fingerprint(&self) -> u64 {
        let mut h = Fnv::new();
        match &self.layout {
            Layout::Star {
                hub_weight,
                leaf_weight,
            } => {
                h.write(b"star");
                h.write(&hub_weight.to_le_bytes());
                h.write(&leaf_weight.to_le_bytes());
            }
            Layout::Path { step } => {
                h.write(b"path");
                h.write(&step.to_le_bytes());
            }
            Layout::General { anchors, .. } => {
                h.write(b"general");
                for (p, w) in self.parent.iter().zip(&self.weight) {
                    h.write(&p.map_or(-1i64, i64::from).to_le_bytes());
                    h.write(&w.to_le_bytes());
                }
                let mut sorted: Vec<_> = anchors.iter().collect();
                sorted.sort();
                for (k, n) in sorted {
                    h.write(format!("{k:?}").as_bytes());
                    h.write(&n.to_le_bytes());
                }
            }
        }
        h.finish()
    }

    pub fn kind(&self) -> TreeKind {
        match self.layout {
            Layout::Star { .. } => TreeKind::Label,
            Layout::Path { .. } => TreeKind::Degree,
            Layout::General { .. } => TreeKind::Ultrametric,
        }
    }

    /// Identifies the realized metric; embeddings are comparable iff their
    /// trees share a fingerprint.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Number of materialized nodes.
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    /// Weighted depth of the label leaves below the dendrogram root, for
    /// ultrametric trees; `c_vl/2` for the star.
    pub fn leaf_height(&self) -> f64 {
        match &self.layout {
            Layout::Star { leaf_weight, .. } => *leaf_weight,
            Layout::Path { .. } => 0.0,
            Layout::General { height, .. } => *height,
        }
    }

    pub fn anchor(&self, key: AnchorKey) -> Option<NodeId> {
        match (&self.layout, key) {
            (_, AnchorKey::Dummy) => Some(self.root()),
            (Layout::Star { .. }, AnchorKey::Label(l)) => Some(STAR_FIRST_LEAF + l),
            (Layout::Path { .. }, AnchorKey::Degree(d)) => Some(d),
            (Layout::General { anchors, .. }, k) => anchors.get(&k).copied(),
            _ => None,
        }
    }

    pub fn try_anchor(&self, key: AnchorKey) -> Result<NodeId> {
        self.anchor(key)
            .ok_or_else(|| Error::UnanchoredVertex(key.to_string()))
    }

    /// Parent of `node`, `None` at the root. Virtual nodes resolve through
    /// the layout.
    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        match self.parent.get(node as usize) {
            Some(p) => *p,
            None => match self.layout {
                Layout::Star { .. } => Some(STAR_HUB),
                Layout::Path { .. } => Some(node - 1),
                Layout::General { .. } => None,
            },
        }
    }

    /// Weight of the edge from `node` to its parent (0 at the root).
    pub fn weight(&self, node: NodeId) -> f64 {
        match self.weight.get(node as usize) {
            Some(w) => *w,
            None => match self.layout {
                Layout::Star { leaf_weight, .. } => leaf_weight,
                Layout::Path { step } => step,
                Layout::General { .. } => 0.0,
            },
        }
    }

    /// Unweighted depth of `node`.
    pub fn depth(&self, node: NodeId) -> u32 {
        match self.depth.get(node as usize) {
            Some(d) => *d,
            None => match self.layout {
                Layout::Star { .. } => 2,
                Layout::Path { .. } => node,
                Layout::General { .. } => 0,
            },
        }
    }

    /// Whether `node` exists, materialized or virtual.
    pub fn contains(&self, node: NodeId) -> bool {
        (node as usize) < self.parent.len() || !matches!(self.layout, Layout::General { .. })
    }

    /// Weighted length of the path between two nodes.
    pub fn node_distance(&self, mut a: NodeId, mut b: NodeId) -> f64 {
        let mut total = 0.0;
        while self.depth(a) > self.depth(b) {
            total += self.weight(a);
            a = self.parent(a).expect("non-root node has a parent");
        }
        while self.depth(b) > self.depth(a) {
            total += self.weight(b);
            b = self.parent(b).expect("non-root node has a parent");
        }
        while a != b {
            total += self.weight(a) + self.weight(b);
            a = self.parent(a).expect("non-root node has a parent");
            b = self.parent(b).expect("non-root node has a parent");
        }
        total
    }

    /// Tree distance between the nodes anchoring two keys.
    pub fn distance(&self, x: AnchorKey, y: AnchorKey) -> Result<f64> {
        Ok(self.node_distance(self.try_anchor(x)?, self.try_anchor(y)?))
    }

    /// Materialized nodes as `(node, parent, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i as NodeId, p, self.weight[i])))
    }

    pub(crate) fn raw_parts(&self) -> RawTree<'_> {
        RawTree {
            parent: &self.parent,
            weight: &self.weight,
            layout: match &self.layout {
                Layout::Star {
                    hub_weight,
                    leaf_weight,
                } => RawLayout::Star {
                    hub_weight: *hub_weight,
                    leaf_weight: *leaf_weight,
                },
                Layout::Path { step } => RawLayout::Path { step: *step },
                Layout::General { anchors, height } => {
                    let mut a: Vec<_> = anchors.iter().map(|(k, n)| (*k, *n)).collect();
                    a.sort();
                    RawLayout::General {
                        anchors: a,
                        height: *height,
                    }
                }
            },
        }
    }

    /// Arbitrary tree from a parent array. Node 0 is the root and hosts the
    /// dummy; every other node's parent must have a smaller id. `anchors`
    /// maps keys to nodes.
    pub fn from_parents(
        parent: Vec<Option<NodeId>>,
        weight: Vec<f64>,
        anchors: Vec<(AnchorKey, NodeId)>,
    ) -> Result<Self> {
        MetricTree::from_raw(
            parent,
            weight,
            RawLayout::General {
                anchors,
                height: 0.0,
            },
        )
    }

    pub(crate) fn from_raw(
        parent: Vec<Option<NodeId>>,
        weight: Vec<f64>,
        layout: RawLayout,
    ) -> Result<Self> {
        let invalid = |m: &str| Err(Error::InvalidTree(m.to_owned()));
        if parent.is_empty() {
            return invalid("a tree needs at least a root");
        }
        if parent.len() != weight.len() {
            return invalid("parent and weight arrays differ in length");
        }
        if parent[0].is_some() {
            return invalid("node 0 must be the root");
        }
        for (i, p) in parent.iter().enumerate().skip(1) {
            match p {
                None => return invalid("tree has several roots"),
                Some(p) if *p as usize >= i => return invalid("parents must precede children"),
                _ => {}
            }
        }
        if weight.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return invalid("edge weights must be finite and non-negative");
        }
        let layout = match layout {
            RawLayout::Star {
                hub_weight,
                leaf_weight,
            } => Layout::Star {
                hub_weight,
                leaf_weight,
            },
            RawLayout::Path { step } => Layout::Path { step },
            RawLayout::General { anchors, height } => {
                if anchors.iter().any(|&(_, n)| n as usize >= parent.len()) {
                    return invalid("anchor refers to a node outside the tree");
                }
                Layout::General {
                    anchors: anchors.into_iter().collect(),
                    height,
                }
            }
        };
        Ok(MetricTree::assemble(parent, weight, layout))
    }
}

pub(crate) struct RawTree<'a> {
    pub parent: &'a [Option<NodeId>],
    pub weight: &'a [f64],
    pub layout: RawLayout,
}

pub(crate) enum RawLayout {
    Star {
        hub_weight: f64,
        leaf_weight: f64,
    },
    Path {
        step: f64,
    },
    General {
        anchors: Vec<(AnchorKey, NodeId)>,
        height: f64,
    },
}

/// One agglomeration step: clusters `left` and `right` (dendrogram node ids)
/// merge at linkage `height`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
}

/// Single-linkage clustering in `O(n²)` via Prim's minimum spanning tree.
///
/// Leaves are `0..n` in table order; merge `k` creates node `n + k`. Ties are
/// broken by the lowest label position.
pub fn single_linkage(table: &LabelCostTable) -> Vec<Merge> {
    let n = table.len();
    if n < 2 {
        return Vec::new();
    }
    // Prim from position 0.
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut link = vec![0usize; n];
    let mut mst = Vec::with_capacity(n - 1);
    in_tree[0] = true;
    for (j, b) in best.iter_mut().enumerate().skip(1) {
        *b = table.at(0, j);
    }
    for _ in 1..n {
        let mut next = usize::MAX;
        for j in 0..n {
            if !in_tree[j] && (next == usize::MAX || best[j] < best[next]) {
                next = j;
            }
        }
        in_tree[next] = true;
        mst.push((best[next], link[next].min(next), link[next].max(next)));
        for j in 0..n {
            if !in_tree[j] {
                let c = table.at(next, j);
                if c < best[j] {
                    best[j] = c;
                    link[j] = next;
                }
            }
        }
    }
    mst.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    // Union-find over positions; `cluster[root]` is the dendrogram node.
    let mut uf: Vec<usize> = (0..n).collect();
    let mut cluster: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut merges = Vec::with_capacity(n - 1);
    for (h, a, b) in mst {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        let (left, right) = (cluster[ra].min(cluster[rb]), cluster[ra].max(cluster[rb]));
        let keep = ra.min(rb);
        uf[ra.max(rb)] = keep;
        cluster[keep] = n + merges.len();
        merges.push(Merge {
            left,
            right,
            height: h,
        });
    }
    merges
}

/// Pairwise distances realized by an ultrametric tree on the table's labels,
/// in table order.
pub fn realized_label_distances(tree: &MetricTree, labels: &[Label]) -> Result<Vec<Vec<f64>>> {
    let nodes: Vec<NodeId> = labels
        .iter()
        .map(|&l| tree.try_anchor(AnchorKey::Label(l)))
        .collect::<Result<_>>()?;
    Ok(nodes
        .iter()
        .map(|&a| nodes.iter().map(|&b| tree.node_distance(a, b)).collect())
        .collect())
}

/// 64-bit FNV-1a, used for stable tree fingerprints.
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}
