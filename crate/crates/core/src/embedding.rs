//! ℓ1 embeddings of vertex multisets under a tree metric.
//!
//! For a tree rooted at the dummy node, the entry of a set `S` on the edge
//! above node `n` is `|{s ∈ S : ρ(s) in subtree(n)}| · w(n)`. The ℓ1 distance
//! between two such vectors is the optimal assignment cost between the sets
//! under the tree metric, with dummies padding the smaller side.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::{AnchorKey, MetricTree, NodeId};

/// Sparse vector keyed by the child node of each tree edge.
///
/// Zero entries are not stored. Keys are strictly ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    entries: Vec<(NodeId, f64)>,
    tree: u64,
}

impl Embedding {
    /// Embeds the multiset of anchors. Runs in `O(k log k)` for a relevant
    /// subtree of `k` nodes, which is `O(|anchors| · height)` at worst.
    pub fn compute<I>(anchors: I, tree: &MetricTree) -> Result<Self>
    where
        I: IntoIterator<Item = AnchorKey>,
    {
        let mut nodes = anchors
            .into_iter()
            .map(|k| tree.try_anchor(k))
            .collect::<Result<Vec<_>>>()?;
        nodes.sort_unstable();

        let root = tree.root();
        let mut heap = BinaryHeap::with_capacity(nodes.len());
        for chunk in nodes.chunk_by(|a, b| a == b) {
            let node = chunk[0];
            if node != root {
                heap.push(Pending {
                    depth: tree.depth(node),
                    node,
                    count: chunk.len() as u64,
                });
            }
        }

        let mut entries = Vec::with_capacity(heap.len());
        while let Some(mut top) = heap.pop() {
            while let Some(next) = heap.peek() {
                if next.node != top.node {
                    break;
                }
                top.count += next.count;
                heap.pop();
            }
            let w = tree.weight(top.node);
            if w != 0.0 {
                entries.push((top.node, top.count as f64 * w));
            }
            let parent = tree.parent(top.node).expect("non-root node has a parent");
            if parent != root {
                heap.push(Pending {
                    depth: top.depth - 1,
                    node: parent,
                    count: top.count,
                });
            }
        }
        entries.sort_unstable_by_key(|&(k, _)| k);
        Ok(Embedding {
            entries,
            tree: tree.fingerprint(),
        })
    }

    /// Embedding of a graph's vertex labels.
    pub fn of_labels(g: &Graph, tree: &MetricTree) -> Result<Self> {
        Embedding::compute(g.labels().iter().map(|&l| AnchorKey::Label(l)), tree)
    }

    /// Embedding of a graph's vertex degrees.
    pub fn of_degrees(g: &Graph, tree: &MetricTree) -> Result<Self> {
        Embedding::compute(g.degrees().map(|d| AnchorKey::Degree(d as u32)), tree)
    }

    pub fn zero(tree: &MetricTree) -> Self {
        Embedding {
            entries: Vec::new(),
            tree: tree.fingerprint(),
        }
    }

    pub(crate) fn from_raw(entries: Vec<(NodeId, f64)>, tree: u64) -> Result<Self> {
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::CorruptIndex("embedding keys not ascending".into()));
        }
        if entries.iter().any(|&(_, v)| !(v.is_finite() && v >= 0.0)) {
            return Err(Error::CorruptIndex(
                "embedding entry is not a finite non-negative number".into(),
            ));
        }
        Ok(Embedding { entries, tree })
    }

    pub fn entries(&self) -> &[(NodeId, f64)] {
        &self.entries
    }

    pub fn get(&self, node: NodeId) -> f64 {
        self.entries
            .binary_search_by_key(&node, |&(k, _)| k)
            .map_or(0.0, |i| self.entries[i].1)
    }

    /// Number of stored (non-zero) entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    pub fn tree_fingerprint(&self) -> u64 {
        self.tree
    }

    /// Values at the given edge keys, zero where absent.
    pub fn dense(&self, keys: &[NodeId]) -> Vec<f64> {
        keys.iter().map(|&k| self.get(k)).collect()
    }

    /// Manhattan distance; equals the optimal assignment cost between the
    /// embedded multisets.
    pub fn l1_distance(&self, other: &Embedding) -> Result<f64> {
        if self.tree != other.tree {
            return Err(Error::TreeMismatch);
        }
        Ok(sparse_l1(&self.entries, &other.entries))
    }

    /// Appends `len:u64`, then `(key:u32, value:f64)` pairs, little-endian.
    pub fn write_le(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.entries.len() as u64).to_le_bytes());
        for &(k, v) in &self.entries {
            out.extend_from_slice(&k.to_le_bytes());
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
}

struct Pending {
    depth: u32,
    node: NodeId,
    count: u64,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.depth, self.node).cmp(&(other.depth, other.node))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// ℓ1 distance between two sparse vectors with ascending keys.
pub fn sparse_l1<K: Ord + Copy>(a: &[(K, f64)], b: &[(K, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                sum += a[i].1;
                i += 1;
            }
            Ordering::Greater => {
                sum += b[j].1;
                j += 1;
            }
            Ordering::Equal => {
                sum += (a[i].1 - b[j].1).abs();
                i += 1;
                j += 1;
            }
        }
    }
    sum += a[i..].iter().map(|e| e.1).sum::<f64>();
    sum += b[j..].iter().map(|e| e.1).sum::<f64>();
    sum
}

/// Concatenation of embeddings under several trees, e.g. labels then degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeEmbedding {
    parts: Vec<Embedding>,
}

impl CompositeEmbedding {
    pub fn new(parts: Vec<Embedding>) -> Self {
        assert!(
            !parts.is_empty(),
            "a composite embedding needs at least one part"
        );
        CompositeEmbedding { parts }
    }

    pub fn parts(&self) -> &[Embedding] {
        &self.parts
    }

    /// Sum of part-wise ℓ1 distances.
    pub fn l1_distance(&self, other: &CompositeEmbedding) -> Result<f64> {
        if self.parts.len() != other.parts.len() {
            return Err(Error::TreeMismatch);
        }
        self.parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.l1_distance(b))
            .sum()
    }

    /// Entries with part-qualified keys `(part << 32) | node`, ascending.
    pub fn flat_entries(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.parts.iter().enumerate().flat_map(|(p, e)| {
            e.entries()
                .iter()
                .map(move |&(k, v)| (((p as u64) << 32) | u64::from(k), v))
        })
    }

    pub fn fingerprints(&self) -> Vec<u64> {
        self.parts.iter().map(Embedding::tree_fingerprint).collect()
    }
}

impl From<Embedding> for CompositeEmbedding {
    fn from(e: Embedding) -> Self {
        CompositeEmbedding::new(vec![e])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostModel;

    /// The six-node tree `s,t → u → v ← w,x` rooted at `v` with unit weights.
    /// Node ids: v=0, u=1, s=2, t=3, w=4, x=5.
    fn six_node_tree() -> MetricTree {
        use crate::tree::RawLayout;
        let parent = vec![None, Some(0), Some(1), Some(1), Some(0), Some(0)];
        let weight = vec![0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let anchors = (0..6).map(|n| (AnchorKey::Degree(n), n)).collect();
        MetricTree::from_raw(
            parent,
            weight,
            RawLayout::General {
                anchors,
                height: 0.0,
            },
        )
        .unwrap()
    }

    const S: u32 = 2;
    const T: u32 = 3;
    const U: u32 = 1;
    const W: u32 = 4;
    const X: u32 = 5;

    fn anchors(nodes: &[u32]) -> Vec<AnchorKey> {
        nodes.iter().map(|&n| AnchorKey::Degree(n)).collect()
    }

    #[test]
    fn reproduces_six_node_example() {
        let tree = six_node_tree();
        let a = Embedding::compute(anchors(&[T, T, W, W, W]), &tree).unwrap();
        let b = Embedding::compute(anchors(&[S, S, T, W, X]), &tree).unwrap();
        let order = [S, T, U, W, X];
        assert_eq!(a.dense(&order), vec![0.0, 2.0, 2.0, 3.0, 0.0]);
        assert_eq!(b.dense(&order), vec![2.0, 1.0, 3.0, 1.0, 1.0]);
        assert_eq!(a.l1_distance(&b).unwrap(), 7.0);
    }

    #[test]
    fn empty_graph_is_zero_vector() {
        let c = CostModel::uniform();
        let tree = MetricTree::label_tree(&[0, 1], &c).unwrap();
        let e = Embedding::of_labels(&Graph::empty(0), &tree).unwrap();
        assert!(e.is_zero());
        assert_eq!(e, Embedding::zero(&tree));
    }

    #[test]
    fn carbon_oxygen_example() {
        let c = CostModel::uniform();
        let (carbon, oxygen) = (0, 1);
        let tree = MetricTree::label_tree(&[carbon, oxygen], &c).unwrap();
        let g = Graph::from_parts(0, vec![carbon], &[]).unwrap();
        let h = Graph::from_parts(1, vec![carbon, oxygen], &[]).unwrap();
        let eg = Embedding::of_labels(&g, &tree).unwrap();
        let eh = Embedding::of_labels(&h, &tree).unwrap();
        let hub = 1;
        let (leaf_c, leaf_o) = (2, 3);
        assert_eq!(eg.entries(), &[(hub, 0.5), (leaf_c, 0.5)]);
        assert_eq!(eh.entries(), &[(hub, 1.0), (leaf_c, 0.5), (leaf_o, 0.5)]);
        assert_eq!(eg.l1_distance(&eh).unwrap(), 1.0);
        assert_eq!(eg.l1_distance(&eg).unwrap(), 0.0);
    }

    #[test]
    fn label_embedding_sparsity() {
        let c = CostModel::uniform();
        let labels: Vec<u32> = (0..100).collect();
        let tree = MetricTree::label_tree(&labels, &c).unwrap();
        let g = Graph::from_parts(0, vec![3, 3, 7, 50, 3], &[]).unwrap();
        let e = Embedding::of_labels(&g, &tree).unwrap();
        assert_eq!(e.len(), 3 + 1);
    }

    #[test]
    fn unanchored_label_is_an_error() {
        let table =
            crate::cost::LabelCostTable::new(vec![0, 1], vec![vec![0.0, 1.0], vec![1.0, 0.0]])
                .unwrap();
        let c = CostModel::uniform().with_label_costs(table.clone());
        let tree = MetricTree::ultrametric_tree(&table, &c).unwrap();
        let g = Graph::from_parts(0, vec![0, 2], &[]).unwrap();
        assert!(matches!(
            Embedding::of_labels(&g, &tree),
            Err(Error::UnanchoredVertex(_))
        ));
    }

    #[test]
    fn mismatched_trees_are_rejected() {
        let c = CostModel::uniform();
        let lt = MetricTree::label_tree(&[0], &c).unwrap();
        let dt = MetricTree::degree_tree(2, &c);
        let g = Graph::from_parts(0, vec![0, 0], &[(0, 1)]).unwrap();
        let a = Embedding::of_labels(&g, &lt).unwrap();
        let b = Embedding::of_degrees(&g, &dt).unwrap();
        assert!(matches!(a.l1_distance(&b), Err(Error::TreeMismatch)));
    }

    #[test]
    fn composite_is_additive() {
        let c = CostModel::uniform();
        let lt = MetricTree::label_tree(&[0, 1], &c).unwrap();
        let dt = MetricTree::degree_tree(2, &c);
        let g = Graph::from_parts(0, vec![0, 1, 0], &[(0, 1), (1, 2)]).unwrap();
        let h = Graph::from_parts(1, vec![0, 1], &[(0, 1)]).unwrap();
        let embed = |x: &Graph| {
            CompositeEmbedding::new(vec![
                Embedding::of_labels(x, &lt).unwrap(),
                Embedding::of_degrees(x, &dt).unwrap(),
            ])
        };
        let (eg, eh) = (embed(&g), embed(&h));
        let llb = eg.parts()[0].l1_distance(&eh.parts()[0]).unwrap();
        let dlb = eg.parts()[1].l1_distance(&eh.parts()[1]).unwrap();
        assert_eq!(llb, 1.0);
        assert_eq!(dlb, 1.0);
        assert_eq!(eg.l1_distance(&eh).unwrap(), 2.0);
        let single: CompositeEmbedding = eg.parts()[0].clone().into();
        assert_eq!(
            single.l1_distance(&eh.parts()[0].clone().into()).unwrap(),
            llb
        );
        let flat: Vec<_> = eg.flat_entries().collect();
        assert!(flat.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(
            sparse_l1(&flat, &eh.flat_entries().collect::<Vec<_>>()),
            2.0
        );
    }

    #[test]
    fn degree_embedding_beyond_materialized_path() {
        let c = CostModel::uniform();
        let small = MetricTree::degree_tree(1, &c);
        let big = MetricTree::degree_tree(6, &c);
        let star =
            Graph::from_parts(0, vec![0; 6], &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert_eq!(
            Embedding::of_degrees(&star, &small).unwrap(),
            Embedding::of_degrees(&star, &big).unwrap()
        );
    }
}
