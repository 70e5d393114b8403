//! The network model: a weighted directed graph, per-node product sets,
//! per-(node, product) adoption thresholds and the source payoff constant.
//!
//! A network is immutable once built. Structural impossibilities (duplicate
//! edges, thresholds for unlisted products, unknown ids) are rejected at
//! construction; value-range requirements (weights in `[0, 1]`, in-weight
//! sums at most 1, thresholds in `(0, 1]`, no self loops, at least two
//! nodes) are reported by [`Network::validate`] as diagnostics so that a
//! malformed file can be described in full rather than rejected at the
//! first problem.

use crate::graph;
use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Dense node identifier, `0..n`.
pub type NodeId = usize;

/// Interned product identifier. The interned order (order of first
/// registration) is the canonical product order used when enumerating
/// strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProductId(pub u32);

impl ProductId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Structural error raised while assembling a network.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: NodeId, dst: NodeId },
    #[error("edge references unknown node {node}")]
    UnknownNode { node: NodeId },
    #[error("threshold for unlisted product `{product}` at node {node}")]
    ThetaForUnlistedProduct { node: NodeId, product: String },
    #[error("node {node} has an empty product set")]
    EmptyProductSet { node: NodeId },
    #[error("duplicate product `{product}` at node {node}")]
    DuplicateProduct { node: NodeId, product: String },
}

/// A single validation finding, tied to the offending node or edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

/// Graph classification: which structural classes apply, with canonical
/// witnesses. Classes overlap (a simple cycle is also source free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphClass {
    /// Node order such that an earlier node is never reachable from a later
    /// one; present exactly when the graph is acyclic.
    pub dag_rank: Option<Vec<NodeId>>,
    /// Cyclic node order `v0 -> v1 -> ... -> v0`, starting at the smallest
    /// node id; present exactly when the graph is one simple cycle.
    pub cycle_order: Option<Vec<NodeId>>,
    /// Every node has at least one in-edge.
    pub source_free: bool,
}

impl GraphClass {
    pub fn is_dag(&self) -> bool {
        self.dag_rank.is_some()
    }

    pub fn is_simple_cycle(&self) -> bool {
        self.cycle_order.is_some()
    }

    pub fn is_source_free(&self) -> bool {
        self.source_free
    }

    /// No special class applies.
    pub fn is_general(&self) -> bool {
        !self.is_dag() && !self.is_simple_cycle() && !self.source_free
    }
}

/// A social network: graph, products, product sets, thresholds, `c0`.
#[derive(Debug, Clone)]
pub struct Network {
    product_names: Vec<String>,
    /// Per node: product ids in interned order.
    products: Vec<Vec<ProductId>>,
    /// Per node: thresholds parallel to `products`.
    thetas: Vec<Vec<Rational>>,
    /// Canonical edge list, sorted by (src, dst).
    edges: Vec<(NodeId, NodeId, Rational)>,
    /// Per node: in-edges as (neighbour, weight).
    in_edges: Vec<Vec<(NodeId, Rational)>>,
    out_adj: Vec<Vec<NodeId>>,
    /// Per node: global product id -> position in `products[i]`.
    product_pos: Vec<Vec<Option<u32>>>,
    source_payoff: Rational,
}

impl PartialEq for Network {
    /// Structural equality: same node count, product names per node, same
    /// thresholds, edges and constant. Intern order is irrelevant.
    fn eq(&self, other: &Self) -> bool {
        if self.node_count() != other.node_count() || self.source_payoff != other.source_payoff {
            return false;
        }
        let by_name = |net: &Network, i: NodeId| -> BTreeMap<String, Rational> {
            net.products[i]
                .iter()
                .zip(&net.thetas[i])
                .map(|(p, th)| (net.product_names[p.index()].clone(), th.clone()))
                .collect()
        };
        (0..self.node_count()).all(|i| by_name(self, i) == by_name(other, i))
            && self.edges == other.edges
    }
}

impl Eq for Network {}

impl Network {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    pub fn node_count(&self) -> usize {
        self.products.len()
    }

    pub fn product_count(&self) -> usize {
        self.product_names.len()
    }

    pub fn product_name(&self, p: ProductId) -> &str {
        &self.product_names[p.index()]
    }

    pub fn product_id(&self, name: &str) -> Option<ProductId> {
        self.product_names
            .iter()
            .position(|n| n == name)
            .map(|i| ProductId(i as u32))
    }

    /// All products, in interned order.
    pub fn all_products(&self) -> impl Iterator<Item = ProductId> + '_ {
        (0..self.product_names.len()).map(|i| ProductId(i as u32))
    }

    /// The product set `P(i)`, in interned order.
    pub fn products_of(&self, node: NodeId) -> &[ProductId] {
        &self.products[node]
    }

    /// Whether `t` is in `P(i)`.
    pub fn node_has_product(&self, node: NodeId, t: ProductId) -> bool {
        self.product_pos[node][t.index()].is_some()
    }

    /// Threshold for `t` at `node`; panics when `t` is not in `P(node)`.
    pub fn theta(&self, node: NodeId, t: ProductId) -> &Rational {
        let pos = self.product_pos[node][t.index()]
            .unwrap_or_else(|| panic!("theta for product outside P({node})"));
        &self.thetas[node][pos as usize]
    }

    /// Position of `t` inside `products_of(node)`, if listed.
    pub fn product_position(&self, node: NodeId, t: ProductId) -> Option<usize> {
        self.product_pos[node][t.index()].map(|p| p as usize)
    }

    /// In-neighbours of `node` with edge weights. Weight-0 edges count as
    /// neighbours: they shape the neighbourhood without contributing weight.
    pub fn neighbours(&self, node: NodeId) -> &[(NodeId, Rational)] {
        &self.in_edges[node]
    }

    pub fn is_source(&self, node: NodeId) -> bool {
        self.in_edges[node].is_empty()
    }

    pub fn sources(&self) -> Vec<NodeId> {
        (0..self.node_count())
            .filter(|&i| self.is_source(i))
            .collect()
    }

    /// Canonical edge list sorted by (src, dst).
    pub fn edges(&self) -> &[(NodeId, NodeId, Rational)] {
        &self.edges
    }

    pub fn edge_weight(&self, src: NodeId, dst: NodeId) -> Option<&Rational> {
        self.in_edges[dst]
            .iter()
            .find(|(j, _)| *j == src)
            .map(|(_, w)| w)
    }

    /// The constant payoff a source node earns for adopting any product.
    pub fn source_payoff(&self) -> &Rational {
        &self.source_payoff
    }

    /// Out-adjacency view of the underlying graph.
    pub fn out_adjacency(&self) -> &[Vec<NodeId>] {
        &self.out_adj
    }

    /// Report every violated model requirement. An empty list means valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |subject: String, message: String| out.push(Diagnostic { subject, message });

        if self.node_count() < 2 {
            push(
                "network".into(),
                format!("needs at least 2 nodes, has {}", self.node_count()),
            );
        }
        if !self.source_payoff.is_positive() {
            push(
                "c0".into(),
                format!("source payoff must be positive, is {}", self.source_payoff),
            );
        }
        for (src, dst, w) in &self.edges {
            if src == dst {
                push(format!("edge {src} -> {dst}"), "self loop".into());
            }
            if w.is_negative() || *w > Rational::one() {
                push(
                    format!("edge {src} -> {dst}"),
                    format!("weight out of range: {w}"),
                );
            }
        }
        for i in 0..self.node_count() {
            if self.products[i].is_empty() {
                push(format!("node {i}"), "empty product set".into());
            }
            for (t, th) in self.products[i].iter().zip(&self.thetas[i]) {
                if !th.is_positive() || *th > Rational::one() {
                    push(
                        format!("node {i}"),
                        format!(
                            "threshold out of range for `{}`: {th}",
                            self.product_name(*t)
                        ),
                    );
                }
            }
            if !self.in_edges[i].is_empty() {
                let total: Rational = self.in_edges[i].iter().map(|(_, w)| w).sum();
                if total > Rational::one() {
                    push(
                        format!("node {i}"),
                        format!("in-weight sum exceeds 1: {total}"),
                    );
                }
            }
        }
        out
    }

    /// Classify the underlying graph, producing canonical witnesses.
    pub fn classify(&self) -> GraphClass {
        let n = self.node_count();
        let dag_rank = graph::topological_order(&self.out_adj);
        let source_free = (0..n).all(|i| !self.in_edges[i].is_empty());

        let cycle_order = self.simple_cycle_order();
        GraphClass {
            dag_rank,
            cycle_order,
            source_free,
        }
    }

    fn simple_cycle_order(&self) -> Option<Vec<NodeId>> {
        let n = self.node_count();
        if n < 2 {
            return None;
        }
        let one_in_one_out =
            (0..n).all(|i| self.in_edges[i].len() == 1 && self.out_adj[i].len() == 1);
        if !one_in_one_out {
            return None;
        }
        // Follow successors from node 0; one cycle must cover all nodes.
        let mut order = vec![0];
        let mut cur = 0;
        loop {
            let next = self.out_adj[cur][0];
            if next == 0 {
                break;
            }
            if order.len() > n {
                return None;
            }
            order.push(next);
            cur = next;
        }
        (order.len() == n).then_some(order)
    }

    /// Predecessor of `node` on a simple cycle (its unique in-neighbour).
    pub fn cycle_predecessor(&self, node: NodeId) -> Option<NodeId> {
        match self.in_edges[node].as_slice() {
            [(j, _)] => Some(*j),
            _ => None,
        }
    }
}

/// Assembles a [`Network`]; structural errors are rejected eagerly.
#[derive(Default)]
pub struct NetworkBuilder {
    product_names: Vec<String>,
    node_products: Vec<Vec<u32>>,
    thetas: Vec<BTreeMap<u32, Rational>>,
    edges: Vec<(NodeId, NodeId, Rational)>,
    source_payoff: Option<Rational>,
}

impl NetworkBuilder {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(i) = self.product_names.iter().position(|n| n == name) {
            return i as u32;
        }
        self.product_names.push(name.to_owned());
        (self.product_names.len() - 1) as u32
    }

    /// Add the next node (ids are assigned densely in call order) with its
    /// product set.
    pub fn node<S: AsRef<str>>(&mut self, products: &[S]) -> Result<NodeId, BuildError> {
        let id = self.node_products.len();
        if products.is_empty() {
            return Err(BuildError::EmptyProductSet { node: id });
        }
        let mut ids = Vec::with_capacity(products.len());
        for p in products {
            let pid = self.intern(p.as_ref());
            if ids.contains(&pid) {
                return Err(BuildError::DuplicateProduct {
                    node: id,
                    product: p.as_ref().to_owned(),
                });
            }
            ids.push(pid);
        }
        self.node_products.push(ids);
        self.thetas.push(BTreeMap::new());
        Ok(id)
    }

    /// Set the threshold for `(node, product)`. The product must be listed
    /// in the node's product set.
    pub fn theta(
        &mut self,
        node: NodeId,
        product: &str,
        value: Rational,
    ) -> Result<(), BuildError> {
        if node >= self.node_products.len() {
            return Err(BuildError::UnknownNode { node });
        }
        let pid = self
            .product_names
            .iter()
            .position(|n| n == product)
            .map(|i| i as u32)
            .filter(|pid| self.node_products[node].contains(pid))
            .ok_or_else(|| BuildError::ThetaForUnlistedProduct {
                node,
                product: product.to_owned(),
            })?;
        self.thetas[node].insert(pid, value);
        Ok(())
    }

    /// Set one threshold value for every product of `node`.
    pub fn theta_all(&mut self, node: NodeId, value: Rational) -> Result<(), BuildError> {
        if node >= self.node_products.len() {
            return Err(BuildError::UnknownNode { node });
        }
        for pid in self.node_products[node].clone() {
            self.thetas[node].insert(pid, value.clone());
        }
        Ok(())
    }

    pub fn edge(&mut self, src: NodeId, dst: NodeId, weight: Rational) -> Result<(), BuildError> {
        let n = self.node_products.len();
        for node in [src, dst] {
            if node >= n {
                return Err(BuildError::UnknownNode { node });
            }
        }
        if self.edges.iter().any(|(s, d, _)| (*s, *d) == (src, dst)) {
            return Err(BuildError::DuplicateEdge { src, dst });
        }
        self.edges.push((src, dst, weight));
        Ok(())
    }

    /// Source payoff constant `c0`; defaults to 1.
    pub fn source_payoff(&mut self, c0: Rational) {
        self.source_payoff = Some(c0);
    }

    /// Finish. Missing thresholds are filled with 1 (in range, so
    /// `validate` stays quiet about them); range violations of supplied
    /// values are `validate`'s job, not the builder's.
    pub fn build(mut self) -> Network {
        let n = self.node_products.len();
        let mut edges = std::mem::take(&mut self.edges);
        edges.sort_by_key(|(s, d, _)| (*s, *d));

        let mut in_edges = vec![Vec::new(); n];
        let mut out_adj = vec![Vec::new(); n];
        for (s, d, w) in &edges {
            in_edges[*d].push((*s, w.clone()));
            out_adj[*s].push(*d);
        }
        for l in &mut in_edges {
            l.sort_by_key(|(j, _)| *j);
        }
        for l in &mut out_adj {
            l.sort_unstable();
        }

        let pcount = self.product_names.len();
        let mut products = Vec::with_capacity(n);
        let mut thetas = Vec::with_capacity(n);
        let mut product_pos = Vec::with_capacity(n);
        for i in 0..n {
            let mut ids = self.node_products[i].clone();
            ids.sort_unstable();
            let mut pos = vec![None; pcount];
            let mut ths = Vec::with_capacity(ids.len());
            for (k, pid) in ids.iter().enumerate() {
                pos[*pid as usize] = Some(k as u32);
                ths.push(
                    self.thetas[i]
                        .get(pid)
                        .cloned()
                        .unwrap_or_else(Rational::one),
                );
            }
            products.push(ids.into_iter().map(ProductId).collect());
            thetas.push(ths);
            product_pos.push(pos);
        }

        Network {
            product_names: self.product_names,
            products,
            thetas,
            edges,
            in_edges,
            out_adj,
            product_pos,
            source_payoff: self.source_payoff.unwrap_or_else(Rational::one),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    // analyses share networks across threads; keep the auto-traits pinned
    const _: fn() = || {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Network>();
        assert_send_sync::<crate::game::JointStrategy>();
        assert_send_sync::<Rational>();
    };

    fn two_chain(w: Rational, th: Rational) -> Network {
        let mut b = Network::builder();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.theta(1, "t", th).unwrap();
        b.edge(0, 1, w).unwrap();
        b.build()
    }

    #[test]
    fn boundary_values_are_valid() {
        // weight 1 and threshold 1 sit exactly on the permitted boundary
        let net = two_chain(rat(1, 1), rat(1, 1));
        assert!(net.validate().is_empty());
    }

    #[test]
    fn weight_out_of_range_is_diagnosed() {
        let net = two_chain(rat(3, 2), rat(1, 2));
        let diags = net.validate();
        // an oversized weight also pushes the in-weight sum over 1
        assert!(diags
            .iter()
            .any(|d| d.message.contains("weight out of range")));
        assert!(diags
            .iter()
            .any(|d| d.message.contains("in-weight sum exceeds 1")));
    }

    #[test]
    fn in_weight_sum_excess_is_diagnosed() {
        let mut b = Network::builder();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.theta_all(2, rat(1, 2)).unwrap();
        b.edge(0, 2, rat(3, 4)).unwrap();
        b.edge(1, 2, rat(1, 2)).unwrap();
        let net = b.build();
        let diags = net.validate();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("in-weight sum exceeds 1"));
        assert!(diags[0].message.contains("5/4"));
    }

    #[test]
    fn duplicate_edges_rejected_weight_zero_allowed() {
        let mut b = Network::builder();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.edge(0, 1, rat(0, 1)).unwrap();
        assert_eq!(
            b.edge(0, 1, rat(1, 2)),
            Err(BuildError::DuplicateEdge { src: 0, dst: 1 })
        );
    }

    #[test]
    fn theta_for_unlisted_product_rejected() {
        let mut b = Network::builder();
        b.node(&["t1"]).unwrap();
        b.node(&["t2"]).unwrap();
        assert!(matches!(
            b.theta(0, "t2", rat(1, 2)),
            Err(BuildError::ThetaForUnlistedProduct { .. })
        ));
    }

    #[test]
    fn classify_chain_cycle_general() {
        // chain is a DAG with a source
        let chain = two_chain(rat(1, 2), rat(1, 2));
        let class = chain.classify();
        assert!(class.is_dag());
        assert!(!class.is_source_free());
        assert!(!class.is_simple_cycle());

        // 3-cycle is a simple cycle and source free
        let mut b = Network::builder();
        for _ in 0..3 {
            b.node(&["t"]).unwrap();
        }
        for i in 0..3 {
            b.theta_all(i, rat(1, 2)).unwrap();
            b.edge(i, (i + 1) % 3, rat(1, 2)).unwrap();
        }
        let cyc = b.build();
        let class = cyc.classify();
        assert_eq!(class.cycle_order, Some(vec![0, 1, 2]));
        assert!(class.is_source_free());
        assert!(!class.is_dag());
    }

    #[test]
    fn weight_zero_edge_still_counts_as_neighbour() {
        let net = two_chain(rat(0, 1), rat(1, 2));
        assert_eq!(net.neighbours(1).len(), 1);
        assert!(!net.is_source(1));
    }
}
