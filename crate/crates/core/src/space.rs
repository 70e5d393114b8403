//! Enumeration of joint strategies.
//!
//! States are ordered lexicographically by node id, with each node's
//! strategies ordered products-first (interned order) and the null strategy
//! last. All exhaustive procedures (equilibrium scans, state graphs, social
//! optima) share this space so indices and orderings agree everywhere.

use crate::game::{Choice, JointStrategy};
use crate::network::{Network, NodeId};
use thiserror::Error;

/// Default cap on exhaustively scanned state counts.
pub const DEFAULT_STATE_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("state space has {states} states, exceeding the budget of {budget}")]
pub struct BudgetExceeded {
    pub states: u128,
    pub budget: u64,
}

/// The product of per-node strategy lists.
#[derive(Debug, Clone)]
pub struct StateSpace {
    /// Per node: admissible strategies in canonical order.
    strategies: Vec<Vec<Choice>>,
    count: u128,
}

impl StateSpace {
    /// The full space: every node may play any product of its set or null.
    pub fn full(net: &Network) -> Self {
        Self::build(net, false)
    }

    /// Space with source nodes owning a single product pinned to it. Sound
    /// and complete for equilibrium existence: a source playing null always
    /// has a better response (any product pays `c0 > 0`), and no other
    /// node's deviation test depends on states outside this restriction.
    pub fn sources_dominant(net: &Network) -> Self {
        Self::build(net, true)
    }

    fn build(net: &Network, pin_singleton_sources: bool) -> Self {
        let strategies: Vec<Vec<Choice>> = (0..net.node_count())
            .map(|i| {
                let products = net.products_of(i);
                if pin_singleton_sources && net.is_source(i) && products.len() == 1 {
                    vec![Some(products[0])]
                } else {
                    let mut list: Vec<Choice> = products.iter().map(|t| Some(*t)).collect();
                    list.push(None);
                    list
                }
            })
            .collect();
        let count = strategies.iter().map(|l| l.len() as u128).product();
        StateSpace { strategies, count }
    }

    pub fn state_count(&self) -> u128 {
        self.count
    }

    pub fn node_count(&self) -> usize {
        self.strategies.len()
    }

    pub fn check_budget(&self, budget: u64) -> Result<usize, BudgetExceeded> {
        if self.count > budget as u128 {
            Err(BudgetExceeded {
                states: self.count,
                budget,
            })
        } else {
            Ok(self.count as usize)
        }
    }

    /// Strategies available to `node`, in canonical order.
    pub fn strategies_of(&self, node: NodeId) -> &[Choice] {
        &self.strategies[node]
    }

    /// Position of `choice` in `strategies_of(node)`.
    pub fn choice_index(&self, node: NodeId, choice: Choice) -> Option<usize> {
        self.strategies[node].iter().position(|c| *c == choice)
    }

    /// Decode a state index (node 0 varies slowest).
    pub fn state_at(&self, mut index: usize) -> JointStrategy {
        let mut choices = vec![None; self.strategies.len()];
        for i in (0..self.strategies.len()).rev() {
            let len = self.strategies[i].len();
            choices[i] = self.strategies[i][index % len];
            index /= len;
        }
        JointStrategy(choices)
    }

    /// Encode a joint strategy back to its index. Returns `None` when some
    /// choice is outside this space.
    pub fn index_of(&self, s: &JointStrategy) -> Option<usize> {
        let mut index = 0usize;
        for (i, choice) in s.0.iter().enumerate() {
            let pos = self.choice_index(i, *choice)?;
            index = index * self.strategies[i].len() + pos;
        }
        Some(index)
    }

    /// Visit every state in canonical order. The closure receives the state
    /// index and the current joint strategy; the strategy buffer is reused
    /// across calls.
    pub fn for_each_state<F: FnMut(usize, &JointStrategy)>(&self, mut f: F) {
        let n = self.strategies.len();
        let mut digits = vec![0usize; n];
        let mut state = JointStrategy(self.strategies.iter().map(|l| l[0]).collect::<Vec<_>>());
        let mut index = 0usize;
        loop {
            f(index, &state);
            index += 1;
            // odometer increment, least significant digit at node n-1
            let mut pos = n;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < self.strategies[pos].len() {
                    state.0[pos] = self.strategies[pos][digits[pos]];
                    break;
                }
                digits[pos] = 0;
                state.0[pos] = self.strategies[pos][0];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn chain() -> Network {
        let mut b = Network::builder();
        b.node(&["t1", "t2"]).unwrap();
        b.node(&["t1"]).unwrap();
        b.theta(1, "t1", rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        b.build()
    }

    #[test]
    fn counts_and_round_trip() {
        let net = chain();
        let space = StateSpace::full(&net);
        assert_eq!(space.state_count(), 6);
        for idx in 0..6 {
            let s = space.state_at(idx);
            assert_eq!(space.index_of(&s), Some(idx));
        }
    }

    #[test]
    fn sources_dominant_pins_singleton_sources() {
        let net = chain();
        let space = StateSpace::sources_dominant(&net);
        // node 0 is a source with two products, so it stays free
        assert_eq!(space.state_count(), 6);

        let mut b = Network::builder();
        b.node(&["t1"]).unwrap();
        b.node(&["t1"]).unwrap();
        b.theta(1, "t1", rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        let net = b.build();
        let space = StateSpace::sources_dominant(&net);
        assert_eq!(space.state_count(), 2);
        assert!(space.strategies_of(0).len() == 1 && space.strategies_of(0)[0].is_some());
    }

    #[test]
    fn iteration_is_lexicographic() {
        let net = chain();
        let space = StateSpace::full(&net);
        let mut seen = Vec::new();
        space.for_each_state(|idx, s| seen.push((idx, s.clone())));
        assert_eq!(seen.len(), 6);
        for (idx, s) in &seen {
            assert_eq!(&space.state_at(*idx), s);
        }
        // first state: both nodes on their first product; last: all null
        let t1 = net.product_id("t1").unwrap();
        assert_eq!(seen[0].1 .0, vec![Some(t1), Some(t1)]);
        assert_eq!(seen[5].1 .0, vec![None, None]);
    }

    #[test]
    fn budget_errors_report_counts() {
        let net = chain();
        let space = StateSpace::full(&net);
        assert_eq!(
            space.check_budget(4),
            Err(BudgetExceeded {
                states: 6,
                budget: 4
            })
        );
        assert_eq!(space.check_budget(6), Ok(6));
    }
}
