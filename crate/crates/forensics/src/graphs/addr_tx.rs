//! Bipartite address-transaction graph.

use super::{DiGraph, Direction, GraphError, Subgraph};
use crate::domain::{Address, TxId};
use std::collections::HashMap;

/// Node kind in the heterogeneous graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Address,
    Transaction,
}

/// Two node kinds, two edge kinds: sender-to-transaction and
/// transaction-to-receiver. An id may not appear as both kinds.
#[derive(Debug, Clone)]
pub struct AddressTxGraph {
    graph: DiGraph,
    kinds: Vec<NodeKind>,
    n_sender_edges: usize,
}

/// Builds the bipartite graph from the two edge lists. Node sets are derived
/// from the edges; any token used both as an address and as a transaction id
/// breaks the bipartite invariant.
pub fn build_addr_tx_graph(
    addr_tx_edges: &[(Address, TxId)],
    tx_addr_edges: &[(TxId, Address)],
) -> Result<AddressTxGraph, GraphError> {
    let mut graph = DiGraph::new();
    let mut kinds: Vec<NodeKind> = Vec::new();
    let mut kind_of: HashMap<String, NodeKind> = HashMap::new();
    let mut intern = |graph: &mut DiGraph,
                      kinds: &mut Vec<NodeKind>,
                      kind_of: &mut HashMap<String, NodeKind>,
                      id: &str,
                      kind: NodeKind|
     -> Result<(), GraphError> {
        match kind_of.get(id) {
            Some(k) if *k != kind => Err(GraphError::NonBipartiteEdge(id.to_string())),
            Some(_) => Ok(()),
            None => {
                kind_of.insert(id.to_string(), kind);
                let idx = graph.add_node(id);
                debug_assert_eq!(idx, kinds.len());
                kinds.push(kind);
                Ok(())
            }
        }
    };
    for (a, t) in addr_tx_edges {
        intern(&mut graph, &mut kinds, &mut kind_of, a.as_str(), NodeKind::Address)?;
        intern(&mut graph, &mut kinds, &mut kind_of, t.as_str(), NodeKind::Transaction)?;
        graph.add_edge(a.as_str(), t.as_str())?;
    }
    let n_sender_edges = graph.edge_count();
    for (t, a) in tx_addr_edges {
        intern(&mut graph, &mut kinds, &mut kind_of, t.as_str(), NodeKind::Transaction)?;
        intern(&mut graph, &mut kinds, &mut kind_of, a.as_str(), NodeKind::Address)?;
        graph.add_edge(t.as_str(), a.as_str())?;
    }
    Ok(AddressTxGraph {
        graph,
        kinds,
        n_sender_edges,
    })
}

impl AddressTxGraph {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn kind(&self, id: &str) -> Option<NodeKind> {
        self.graph.node_index(id).map(|i| self.kinds[i])
    }

    /// Sender-to-transaction edges, in input order.
    pub fn sender_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.graph.edges().take(self.n_sender_edges)
    }

    /// Transaction-to-receiver edges, in input order.
    pub fn receiver_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.graph.edges().skip(self.n_sender_edges)
    }

    /// Distinct input-address set per transaction, keyed by transaction id,
    /// in first-seen transaction order.
    pub fn input_sets(&self) -> Vec<(&str, Vec<&str>)> {
        let mut order: Vec<&str> = Vec::new();
        let mut sets: HashMap<&str, Vec<&str>> = HashMap::new();
        for (a, t) in self.sender_edges() {
            let entry = sets.entry(t).or_insert_with(|| {
                order.push(t);
                Vec::new()
            });
            if !entry.contains(&a) {
                entry.push(a);
            }
        }
        order
            .into_iter()
            .map(|t| (t, sets.remove(t).unwrap_or_default()))
            .collect()
    }

    pub fn out_degree(&self, id: &str) -> Option<usize> {
        self.graph.out_degree(id)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &str> {
        (0..self.graph.node_count()).map(|i| self.graph.node_id(i))
    }

    pub fn k_hop(&self, seed: &str, k: usize, dir: Direction) -> Result<Subgraph, GraphError> {
        self.graph.k_hop(seed, k, dir)
    }

    /// Checks that no edge connects two nodes of the same kind.
    pub fn is_bipartite(&self) -> bool {
        self.graph.edges().all(|(s, d)| {
            let ks = self.kind(s);
            let kd = self.kind(d);
            ks.is_some() && kd.is_some() && ks != kd
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(s: &str) -> Address {
        Address::new(s).unwrap()
    }

    fn txid(s: &str) -> TxId {
        TxId::new(s).unwrap()
    }

    #[test]
    fn sender_and_receiver_edges_have_distinct_kinds() {
        // One address spending into one transaction, another transaction
        // paying the same address.
        let g = build_addr_tx_graph(
            &[(addr("39sfuA8pY4UfybgEZi7uvA13jkGzZpsg5K"), txid("272145560"))],
            &[(txid("322554634"), addr("39sfuA8pY4UfybgEZi7uvA13jkGzZpsg5K"))],
        )
        .unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.sender_edges().count(), 1);
        assert_eq!(g.receiver_edges().count(), 1);
        assert_eq!(
            g.kind("39sfuA8pY4UfybgEZi7uvA13jkGzZpsg5K"),
            Some(NodeKind::Address)
        );
        assert_eq!(g.kind("272145560"), Some(NodeKind::Transaction));
        assert!(g.is_bipartite());
    }

    #[test]
    fn empty_is_empty() {
        let g = build_addr_tx_graph(&[], &[]).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn fan_out_transaction_has_matching_out_degree() {
        let outs: Vec<(TxId, Address)> = (0..5)
            .map(|i| (txid("T"), addr(&format!("r{i}"))))
            .collect();
        let g = build_addr_tx_graph(&[], &outs).unwrap();
        assert_eq!(g.out_degree("T"), Some(5));
    }

    #[test]
    fn shared_token_breaks_bipartiteness() {
        let err = build_addr_tx_graph(
            &[(addr("X"), txid("T"))],
            &[(txid("X"), addr("Y"))],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::NonBipartiteEdge("X".into()));
    }
}
