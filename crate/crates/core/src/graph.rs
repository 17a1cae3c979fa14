//! Undirected labeled graphs.
//!
//! Vertex and edge labels are interned integers; the original symbols live in
//! a [`SymbolTable`] owned by the dataset. Graphs are immutable once built.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interned label symbol.
pub type Label = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: Option<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    id: usize,
    labels: Vec<Label>,
    /// Sorted by `(u, v)` with `u < v`.
    edges: Vec<Edge>,
    /// Per vertex, neighbors sorted ascending with the connecting edge label.
    adjacency: Vec<Vec<(usize, Option<Label>)>>,
}

impl Graph {
    /// Builds a graph from vertex labels and an edge list.
    ///
    /// Edge endpoints may be given in either order. Self-loops, duplicate
    /// edges and endpoints outside `0..labels.len()` are rejected.
    pub fn new<I>(id: usize, labels: Vec<Label>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Option<Label>)>,
    {
        let n = labels.len();
        let mut list = Vec::new();
        for (a, b, label) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "graph {id}: edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!(
                    "graph {id}: self-loop on vertex {a}"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { u, v, label });
        }
        list.sort();
        for pair in list.windows(2) {
            if (pair[0].u, pair[0].v) == (pair[1].u, pair[1].v) {
                return Err(Error::InvalidGraph(format!(
                    "graph {id}: duplicate edge ({}, {})",
                    pair[0].u, pair[0].v
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &list {
            adjacency[e.u].push((e.v, e.label));
            adjacency[e.v].push((e.u, e.label));
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        Ok(Graph {
            id,
            labels,
            edges: list,
            adjacency,
        })
    }

    /// Graph with labeled vertices and unlabeled edges.
    pub fn from_parts(id: usize, labels: Vec<Label>, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::new(id, labels, edges.iter().map(|&(u, v)| (u, v, None)))
    }

    pub fn empty(id: usize) -> Self {
        Graph {
            id,
            labels: Vec::new(),
            edges: Vec::new(),
            adjacency: Vec::new(),
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge_labels(&self) -> bool {
        self.edges.iter().any(|e| e.label.is_some())
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0)
    }

    /// `None` if `u` and `v` are not adjacent, otherwise the edge label.
    pub fn edge_label(&self, u: usize, v: usize) -> Option<Option<Label>> {
        let nb = &self.adjacency[u];
        nb.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| nb[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_label(u, v).is_some()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile::of(self)
    }
}

/// Vertex degrees of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    /// Degrees in vertex order.
    pub degrees: Vec<usize>,
    pub max_degree: usize,
}

impl DegreeProfile {
    pub fn of(g: &Graph) -> Self {
        let degrees: Vec<usize> = g.degrees().collect();
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        DegreeProfile {
            degrees,
            max_degree,
        }
    }

    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// The degrees as a sorted multiset.
    pub fn sorted(&self) -> Vec<usize> {
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d
    }
}

/// Largest vertex degree over a collection of graphs.
pub fn dataset_max_degree<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> usize {
    graphs.into_iter().map(Graph::max_degree).max().unwrap_or(0)
}

/// Interns label strings to dense [`Label`] ids in first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, Label>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Label {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as Label;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<Label> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: Label) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

impl FromIterator<String> for SymbolTable {
    fn from_iter<T: IntoIterator<Item = String>>(iter: T) -> Self {
        let mut table = SymbolTable::new();
        for name in iter {
            table.intern(&name);
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_profiles() {
        let empty = Graph::empty(0);
        let p = empty.degree_profile();
        assert!(p.degrees.is_empty());
        assert_eq!(p.max_degree, 0);

        let triangle = Graph::from_parts(0, vec![0, 0, 0], &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(triangle.degree_profile().degrees, vec![2, 2, 2]);

        let path = Graph::from_parts(0, vec![0, 0, 0], &[(0, 1), (1, 2)]).unwrap();
        let p = path.degree_profile();
        assert_eq!(p.degrees, vec![1, 2, 1]);
        assert_eq!(p.sum(), 2 * path.edge_count());
        assert_eq!(p.max_degree, 2);
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(matches!(
            Graph::from_parts(0, vec![0, 0], &[(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::from_parts(0, vec![0, 0], &[(0, 1), (1, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::from_parts(0, vec![0, 0], &[(0, 2)]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn disconnected_graphs_are_valid() {
        let g = Graph::from_parts(3, vec![1, 2, 3, 4], &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(1, 2));
        assert_eq!(g.id(), 3);
    }

    #[test]
    fn edge_labels_are_symmetric() {
        let g = Graph::new(0, vec![0, 1], [(1, 0, Some(7))]).unwrap();
        assert_eq!(g.edge_label(0, 1), Some(Some(7)));
        assert_eq!(g.edge_label(1, 0), Some(Some(7)));
        assert!(g.has_edge_labels());
    }

    #[test]
    fn symbols_intern_in_first_seen_order() {
        let mut t = SymbolTable::new();
        assert_eq!(t.intern("C"), 0);
        assert_eq!(t.intern("O"), 1);
        assert_eq!(t.intern("C"), 0);
        assert_eq!(t.name(1), Some("O"));
        assert_eq!(t.get("N"), None);
    }
}
