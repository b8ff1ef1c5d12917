//! Transaction-to-transaction money flow graph.

use super::{DiGraph, Direction, GraphError, Subgraph};
use crate::domain::{TimeStep, TxId};
use std::collections::BTreeMap;

/// Directed graph whose nodes are transactions and whose edges are BTC flows
/// from one transaction to the next.
#[derive(Debug, Clone)]
pub struct MoneyFlowGraph {
    graph: DiGraph,
    steps: Vec<TimeStep>,
}

/// Builds the money flow graph from the edge list. Every node named in
/// `tx_time_steps` is added, including edgeless ones; edges pointing outside
/// that set are rejected.
pub fn build_money_flow(
    tx_edges: &[(TxId, TxId)],
    tx_time_steps: &BTreeMap<TxId, TimeStep>,
) -> Result<MoneyFlowGraph, GraphError> {
    let mut graph = DiGraph::new();
    let mut steps = Vec::with_capacity(tx_time_steps.len());
    for (txid, step) in tx_time_steps {
        graph.add_node(txid.as_str());
        steps.push(*step);
    }
    for (a, b) in tx_edges {
        if graph.node_index(a.as_str()).is_none() {
            return Err(GraphError::DanglingEdge(a.to_string()));
        }
        if graph.node_index(b.as_str()).is_none() {
            return Err(GraphError::DanglingEdge(b.to_string()));
        }
        graph.add_edge(a.as_str(), b.as_str())?;
    }
    Ok(MoneyFlowGraph { graph, steps })
}

impl MoneyFlowGraph {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn in_degree(&self, txid: &TxId) -> Option<usize> {
        self.graph.in_degree(txid.as_str())
    }

    pub fn out_degree(&self, txid: &TxId) -> Option<usize> {
        self.graph.out_degree(txid.as_str())
    }

    /// Money-flow degrees of one transaction: (in, out).
    pub fn degrees(&self, txid: &TxId) -> (u32, u32) {
        (
            self.in_degree(txid).unwrap_or(0) as u32,
            self.out_degree(txid).unwrap_or(0) as u32,
        )
    }

    pub fn time_step(&self, txid: &TxId) -> Option<TimeStep> {
        self.graph.node_index(txid.as_str()).map(|i| self.steps[i])
    }

    pub fn k_hop(&self, seed: &TxId, k: usize, dir: Direction) -> Result<Subgraph, GraphError> {
        self.graph.k_hop(seed.as_str(), k, dir)
    }

    /// Subgraph of the transactions at one time step with induced edges.
    pub fn step_subgraph(&self, step: TimeStep) -> Subgraph {
        let nodes = (0..self.graph.node_count()).filter(|&i| self.steps[i] == step);
        self.graph.induced(nodes)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.graph.edges()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &str> {
        (0..self.graph.node_count()).map(|i| self.graph.node_id(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn txid(s: &str) -> TxId {
        TxId::new(s).unwrap()
    }

    fn steps(ids: &[(&str, u32)]) -> BTreeMap<TxId, TimeStep> {
        ids.iter().map(|(s, t)| (txid(s), TimeStep(*t))).collect()
    }

    #[test]
    fn chain_degrees() {
        let nodes = steps(&[("A", 1), ("B", 1), ("C", 2)]);
        let edges = vec![(txid("A"), txid("B")), (txid("B"), txid("C"))];
        let g = build_money_flow(&edges, &nodes).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.out_degree(&txid("A")), Some(1));
        assert_eq!(g.in_degree(&txid("C")), Some(1));
        assert_eq!(g.degrees(&txid("B")), (1, 1));
    }

    #[test]
    fn empty_edge_list_gives_an_edgeless_graph() {
        let nodes = steps(&[("A", 1)]);
        let g = build_money_flow(&[], &nodes).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dangling_edge_is_rejected() {
        let nodes = steps(&[("A", 1)]);
        let edges = vec![(txid("A"), txid("ghost"))];
        assert_eq!(
            build_money_flow(&edges, &nodes).unwrap_err(),
            GraphError::DanglingEdge("ghost".into())
        );
    }

    #[test]
    fn step_subgraph_keeps_only_in_step_edges() {
        let nodes = steps(&[("A", 1), ("B", 1), ("C", 2)]);
        let edges = vec![(txid("A"), txid("B")), (txid("B"), txid("C"))];
        let g = build_money_flow(&edges, &nodes).unwrap();
        let sub = g.step_subgraph(TimeStep(1));
        assert_eq!(sub.nodes, vec!["A", "B"]);
        assert_eq!(sub.edges, vec![("A".into(), "B".into())]);
    }
}
