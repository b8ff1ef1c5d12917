//! Address-to-address actor interaction graph.

use super::{DiGraph, Direction, GraphError, Subgraph};
use crate::domain::{Address, TxId};

/// Directed multigraph of input-address to output-address interactions.
/// Multiple transactions between the same pair keep multiple parallel edges;
/// self-transfers keep their self-loops. Each edge can carry the transaction
/// it came from when the source material knows it.
#[derive(Debug, Clone)]
pub struct ActorInteractionGraph {
    graph: DiGraph,
    provenance: Vec<Option<TxId>>,
}

/// Builds the actor graph from bare address pairs (the edge-list file has no
/// transaction column, so provenance is unknown).
pub fn build_actor_graph(addr_addr_edges: &[(Address, Address)]) -> ActorInteractionGraph {
    let mut graph = DiGraph::new();
    let mut provenance = Vec::with_capacity(addr_addr_edges.len());
    for (a, b) in addr_addr_edges {
        graph.add_node(a.as_str());
        graph.add_node(b.as_str());
        graph.add_edge(a.as_str(), b.as_str()).expect("nodes just added");
        provenance.push(None);
    }
    ActorInteractionGraph { graph, provenance }
}

impl ActorInteractionGraph {
    /// Builds the graph with per-edge transaction provenance.
    pub fn with_provenance(edges: &[(Address, Address, TxId)]) -> ActorInteractionGraph {
        let mut graph = DiGraph::new();
        let mut provenance = Vec::with_capacity(edges.len());
        for (a, b, txid) in edges {
            graph.add_node(a.as_str());
            graph.add_node(b.as_str());
            graph.add_edge(a.as_str(), b.as_str()).expect("nodes just added");
            provenance.push(Some(txid.clone()));
        }
        ActorInteractionGraph { graph, provenance }
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, Option<&TxId>)> {
        self.graph
            .edges()
            .zip(self.provenance.iter())
            .map(|((s, d), p)| (s, d, p.as_ref()))
    }

    /// Parallel edges between a pair, counted with multiplicity.
    pub fn multiplicity(&self, from: &Address, to: &Address) -> usize {
        self.graph
            .edges()
            .filter(|(s, d)| *s == from.as_str() && *d == to.as_str())
            .count()
    }

    pub fn k_hop(&self, seed: &Address, k: usize, dir: Direction) -> Result<Subgraph, GraphError> {
        self.graph.k_hop(seed.as_str(), k, dir)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(s: &str) -> Address {
        Address::new(s).unwrap()
    }

    #[test]
    fn repeated_pairs_stay_parallel() {
        let edges = vec![(addr("A"), addr("B")), (addr("A"), addr("B"))];
        let g = build_actor_graph(&edges);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.multiplicity(&addr("A"), &addr("B")), 2);
    }

    #[test]
    fn self_transfer_keeps_its_loop() {
        let g = build_actor_graph(&[(addr("A"), addr("A"))]);
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_count_equals_row_count() {
        let edges = vec![
            (addr("A"), addr("B")),
            (addr("B"), addr("C")),
            (addr("A"), addr("C")),
        ];
        let g = build_actor_graph(&edges);
        assert_eq!(g.edge_count(), edges.len());
    }
}
