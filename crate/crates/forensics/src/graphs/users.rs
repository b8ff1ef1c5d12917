//! User-entity clustering via the multiple-input-address heuristic.
//!
//! All input addresses of one transaction are attributed to one key holder;
//! the transitive closure over shared inputs yields the user partition.
//! Addresses only ever seen on the output side become singleton users.

use super::addr_tx::AddressTxGraph;
use crate::domain::Address;
use std::collections::{BTreeSet, HashMap};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// The clustered user partition plus deduplicated user-to-user edges
/// directed by BTC flow (spending user to receiving user).
#[derive(Debug, Clone, PartialEq)]
pub struct UserEntityGraph {
    /// Disjoint clusters covering every address in the graph. Each cluster
    /// is sorted; clusters are sorted by their first address.
    pub users: Vec<Vec<Address>>,
    user_of: HashMap<Address, usize>,
    /// Deduplicated (spender user, receiver user) pairs, no self loops.
    pub edges: Vec<(usize, usize)>,
}

impl UserEntityGraph {
    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn user_of(&self, addr: &Address) -> Option<usize> {
        self.user_of.get(addr).copied()
    }

    /// Sorted clusters as plain address vectors, for partition comparisons.
    pub fn partition(&self) -> Vec<Vec<Address>> {
        self.users.clone()
    }
}

/// Clusters the addresses of a bipartite address-transaction graph into
/// users and derives the user-entity graph.
pub fn cluster_users(graph: &AddressTxGraph) -> UserEntityGraph {
    // Index every address node.
    let mut addresses: Vec<&str> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for id in graph.node_ids() {
        if graph.kind(id) == Some(super::NodeKind::Address) {
            index.entry(id).or_insert_with(|| {
                addresses.push(id);
                addresses.len() - 1
            });
        }
    }

    // Merge the input-address set of each transaction.
    let mut uf = UnionFind::new(addresses.len());
    let input_sets = graph.input_sets();
    for (_, inputs) in &input_sets {
        for pair in inputs.windows(2) {
            uf.union(index[pair[0]], index[pair[1]]);
        }
    }

    // Collect clusters; output-only addresses fall out as singletons.
    let mut by_root: HashMap<usize, Vec<&str>> = HashMap::new();
    for (i, id) in addresses.iter().enumerate() {
        by_root.entry(uf.find(i)).or_default().push(id);
    }
    let mut users: Vec<Vec<Address>> = by_root
        .into_values()
        .map(|mut members| {
            members.sort_unstable();
            members
                .into_iter()
                .map(|m| Address::new(m).expect("non-empty id"))
                .collect::<Vec<_>>()
        })
        .collect();
    users.sort_by(|a, b| a[0].cmp(&b[0]));

    let mut user_of: HashMap<Address, usize> = HashMap::new();
    for (u, members) in users.iter().enumerate() {
        for m in members {
            user_of.insert(m.clone(), u);
        }
    }

    // One edge per (spending user, receiving user) pair reachable through a
    // transaction, deduplicated, self-loops dropped.
    let mut receivers_of: HashMap<&str, Vec<&str>> = HashMap::new();
    for (t, a) in graph.receiver_edges() {
        receivers_of.entry(t).or_default().push(a);
    }
    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (t, inputs) in &input_sets {
        let Some(first) = inputs.first() else { continue };
        let spender = user_of[&Address::new(*first).expect("non-empty id")];
        for r in receivers_of.get(t).into_iter().flatten() {
            let receiver = user_of[&Address::new(*r).expect("non-empty id")];
            if receiver != spender {
                edge_set.insert((spender, receiver));
            }
        }
    }

    UserEntityGraph {
        users,
        user_of,
        edges: edge_set.into_iter().collect(),
    }
}

/// Cluster-size statistics of a user partition.
#[derive(Debug, Clone, PartialEq)]
pub struct UserStats {
    pub n_users: usize,
    pub min_addresses: usize,
    pub median_addresses: f64,
    pub mean_addresses: f64,
    pub max_addresses: usize,
    /// Fraction of users with 1..=10 addresses.
    pub share_1_to_10: f64,
    /// Fraction with 11..=1000 addresses.
    pub share_11_to_1000: f64,
    /// Fraction with more than 1000 addresses.
    pub share_over_1000: f64,
}

pub fn user_stats(graph: &UserEntityGraph) -> UserStats {
    let mut sizes: Vec<usize> = graph.users.iter().map(|u| u.len()).collect();
    sizes.sort_unstable();
    let n = sizes.len();
    if n == 0 {
        return UserStats {
            n_users: 0,
            min_addresses: 0,
            median_addresses: 0.0,
            mean_addresses: 0.0,
            max_addresses: 0,
            share_1_to_10: 0.0,
            share_11_to_1000: 0.0,
            share_over_1000: 0.0,
        };
    }
    let total: usize = sizes.iter().sum();
    let median = if n % 2 == 1 {
        sizes[n / 2] as f64
    } else {
        (sizes[n / 2 - 1] + sizes[n / 2]) as f64 / 2.0
    };
    let band = |lo: usize, hi: usize| sizes.iter().filter(|&&s| s >= lo && s <= hi).count();
    UserStats {
        n_users: n,
        min_addresses: sizes[0],
        median_addresses: median,
        mean_addresses: total as f64 / n as f64,
        max_addresses: sizes[n - 1],
        share_1_to_10: band(1, 10) as f64 / n as f64,
        share_11_to_1000: band(11, 1000) as f64 / n as f64,
        share_over_1000: band(1001, usize::MAX) as f64 / n as f64,
    }
}
