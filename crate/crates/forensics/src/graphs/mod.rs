//! The four graph views over the dataset and their shared machinery:
//! a directed multigraph core, k-hop neighborhood extraction, per-step
//! slicing, user-entity clustering, and text exports.

pub mod addr_tx;
pub mod actor;
pub mod export;
pub mod money_flow;
pub mod users;

pub use addr_tx::{build_addr_tx_graph, AddressTxGraph, NodeKind};
pub use actor::{build_actor_graph, ActorInteractionGraph};
pub use money_flow::{build_money_flow, MoneyFlowGraph};
pub use users::{cluster_users, user_stats, UserEntityGraph, UserStats};

use std::collections::{BTreeSet, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge endpoint {0} does not exist")]
    DanglingEdge(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("id {0} appears as both an address and a transaction")]
    NonBipartiteEdge(String),
}

/// Traversal direction for neighborhood expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
    Both,
}

/// A directed multigraph over string node ids. Parallel edges and self-loops
/// are kept; nodes and edges preserve insertion order.
#[derive(Debug, Clone, Default)]
pub struct DiGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl DiGraph {
    pub fn new() -> Self {
        DiGraph::default()
    }

    pub fn add_node(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        i
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node_id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    /// Adds an edge between existing nodes.
    pub fn add_edge(&mut self, src: &str, dst: &str) -> Result<usize, GraphError> {
        let s = self
            .node_index(src)
            .ok_or_else(|| GraphError::DanglingEdge(src.to_string()))?;
        let d = self
            .node_index(dst)
            .ok_or_else(|| GraphError::DanglingEdge(dst.to_string()))?;
        let e = self.edges.len();
        self.edges.push((s, d));
        self.out_adj[s].push(e);
        self.in_adj[d].push(e);
        Ok(e)
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .map(|&(s, d)| (self.ids[s].as_str(), self.ids[d].as_str()))
    }

    pub fn out_degree(&self, id: &str) -> Option<usize> {
        self.node_index(id).map(|i| self.out_adj[i].len())
    }

    pub fn in_degree(&self, id: &str) -> Option<usize> {
        self.node_index(id).map(|i| self.in_adj[i].len())
    }

    fn step_neighbors(&self, node: usize, dir: Direction, mut visit: impl FnMut(usize)) {
        if matches!(dir, Direction::Out | Direction::Both) {
            for &e in &self.out_adj[node] {
                visit(self.edges[e].1);
            }
        }
        if matches!(dir, Direction::In | Direction::Both) {
            for &e in &self.in_adj[node] {
                visit(self.edges[e].0);
            }
        }
    }

    /// Breadth-first neighborhood of `seed` within `k` hops under `dir`,
    /// with the edges induced on the reached node set. `k = 0` yields the
    /// seed alone.
    pub fn k_hop(&self, seed: &str, k: usize, dir: Direction) -> Result<Subgraph, GraphError> {
        let start = self
            .node_index(seed)
            .ok_or_else(|| GraphError::UnknownNode(seed.to_string()))?;
        let mut dist: HashMap<usize, usize> = HashMap::new();
        dist.insert(start, 0);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            let d = dist[&node];
            if d == k {
                continue;
            }
            let mut next = Vec::new();
            self.step_neighbors(node, dir, |n| next.push(n));
            for n in next {
                if !dist.contains_key(&n) {
                    dist.insert(n, d + 1);
                    queue.push_back(n);
                }
            }
        }
        Ok(self.induced(dist.keys().copied()))
    }

    /// Subgraph induced by a node set: the nodes plus every edge whose both
    /// endpoints are in the set.
    pub fn induced(&self, nodes: impl IntoIterator<Item = usize>) -> Subgraph {
        let keep: BTreeSet<usize> = nodes.into_iter().collect();
        let mut edges: Vec<(String, String)> = self
            .edges
            .iter()
            .filter(|(s, d)| keep.contains(s) && keep.contains(d))
            .map(|&(s, d)| (self.ids[s].clone(), self.ids[d].clone()))
            .collect();
        edges.sort();
        let mut node_ids: Vec<String> = keep.into_iter().map(|i| self.ids[i].clone()).collect();
        node_ids.sort();
        Subgraph {
            nodes: node_ids,
            edges,
        }
    }
}

/// An extracted subgraph with nodes and edges sorted for stable comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(ids: &[&str]) -> DiGraph {
        let mut g = DiGraph::new();
        for id in ids {
            g.add_node(id);
        }
        for w in ids.windows(2) {
            g.add_edge(w[0], w[1]).unwrap();
        }
        g
    }

    #[test]
    fn k_zero_is_the_seed_alone() {
        let g = chain(&["A", "B", "C"]);
        let sub = g.k_hop("B", 0, Direction::Both).unwrap();
        assert_eq!(sub.nodes, vec!["B"]);
        assert!(sub.edges.is_empty());
    }

    #[test]
    fn four_hops_out_on_a_chain() {
        let g = chain(&["A", "B", "C", "D", "E", "F"]);
        let sub = g.k_hop("A", 4, Direction::Out).unwrap();
        assert_eq!(sub.nodes, vec!["A", "B", "C", "D", "E"]);
        assert_eq!(sub.edges.len(), 4);
    }

    #[test]
    fn in_direction_walks_backwards() {
        let g = chain(&["A", "B", "C"]);
        let sub = g.k_hop("C", 1, Direction::In).unwrap();
        assert_eq!(sub.nodes, vec!["B", "C"]);
    }

    #[test]
    fn unknown_seed_is_an_error() {
        let g = chain(&["A"]);
        assert_eq!(
            g.k_hop("Z", 1, Direction::Out),
            Err(GraphError::UnknownNode("Z".into()))
        );
    }

    #[test]
    fn k_hop_grows_monotonically() {
        let g = chain(&["A", "B", "C", "D"]);
        let mut previous = 0;
        for k in 0..5 {
            let n = g.k_hop("A", k, Direction::Out).unwrap().nodes.len();
            assert!(n >= previous);
            previous = n;
        }
    }
}
