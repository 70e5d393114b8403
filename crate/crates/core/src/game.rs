//! Payoffs, best and better responses, and Nash classification for the
//! strategic game induced by a network.
//!
//! Players are the nodes. Each node picks a product from its product set or
//! abstains (the null strategy, written `_` in text form). A source node
//! earns the constant `c0` for any product and 0 for abstaining. Any other
//! node earns, for a chosen product, the accumulated weight of in-neighbours
//! that chose the same product minus its threshold for that product; the
//! payoff of each player grows weakly as more players join its choice.

use crate::network::{Network, NodeId, ProductId};
use crate::rational::Rational;
use std::fmt::Write as _;
use thiserror::Error;

/// A node's strategy: `Some(product)` or `None` for the null strategy.
pub type Choice = Option<ProductId>;

/// One strategy per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointStrategy(pub Vec<Choice>);

impl JointStrategy {
    pub fn all_null(n: usize) -> Self {
        JointStrategy(vec![None; n])
    }

    pub fn get(&self, node: NodeId) -> Choice {
        self.0[node]
    }

    pub fn set(&mut self, node: NodeId, choice: Choice) {
        self.0[node] = choice;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every choice lies in the owner's product set (or is null).
    pub fn well_formed(&self, net: &Network) -> bool {
        self.len() == net.node_count()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, c)| c.is_none_or(|t| net.node_has_product(i, t)))
    }

    /// Text form: `state 0=t1 1=_ 2=t2`.
    pub fn to_text(&self, net: &Network) -> String {
        let mut out = String::from("state");
        for (i, c) in self.0.iter().enumerate() {
            match c {
                Some(t) => write!(out, " {i}={}", net.product_name(*t)).unwrap(),
                None => write!(out, " {i}=_").unwrap(),
            }
        }
        out
    }

    /// Parse the text form; the optional `state` prefix is accepted. Every
    /// node must be assigned exactly once.
    pub fn parse_text(net: &Network, text: &str) -> Result<Self, StateParseError> {
        let mut tokens = text.split_whitespace().peekable();
        if tokens.peek() == Some(&"state") {
            tokens.next();
        }
        let mut choices: Vec<Option<Choice>> = vec![None; net.node_count()];
        for tok in tokens {
            let (node, val) = tok
                .split_once('=')
                .ok_or_else(|| StateParseError::Malformed(tok.to_owned()))?;
            let node: NodeId = node
                .parse()
                .map_err(|_| StateParseError::Malformed(tok.to_owned()))?;
            if node >= net.node_count() {
                return Err(StateParseError::UnknownNode(node));
            }
            let choice = if val == "_" {
                None
            } else {
                let t = net
                    .product_id(val)
                    .filter(|t| net.node_has_product(node, *t))
                    .ok_or_else(|| StateParseError::BadProduct {
                        node,
                        product: val.to_owned(),
                    })?;
                Some(t)
            };
            if choices[node].replace(choice).is_some() {
                return Err(StateParseError::DuplicateNode(node));
            }
        }
        choices
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or(StateParseError::MissingNode(i)))
            .collect::<Result<Vec<_>, _>>()
            .map(JointStrategy)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateParseError {
    #[error("malformed assignment `{0}`")]
    Malformed(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {node} cannot play `{product}`")]
    BadProduct { node: NodeId, product: String },
    #[error("node {0} assigned twice")]
    DuplicateNode(NodeId),
    #[error("node {0} not assigned")]
    MissingNode(NodeId),
}

/// Classification of a joint strategy with respect to equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum NEKind {
    /// Not a Nash equilibrium.
    NotNE,
    /// Equilibrium where every node abstains.
    Trivial,
    /// Equilibrium where some node adopts a product.
    NonTrivial,
    /// Equilibrium where every node adopts a product.
    Determined,
}

impl NEKind {
    pub fn is_equilibrium(self) -> bool {
        self != NEKind::NotNE
    }
}

/// Filter for equilibrium queries. `NonTrivial` includes determined
/// equilibria (every determined equilibrium is non-trivial).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindFilter {
    Any,
    NonTrivial,
    Determined,
}

impl KindFilter {
    pub fn accepts(self, kind: NEKind) -> bool {
        match self {
            KindFilter::Any => kind.is_equilibrium(),
            KindFilter::NonTrivial => matches!(kind, NEKind::NonTrivial | NEKind::Determined),
            KindFilter::Determined => kind == NEKind::Determined,
        }
    }
}

/// Neighbours of `i` that adopted `t` in `s`.
pub fn adopters(net: &Network, s: &JointStrategy, i: NodeId, t: ProductId) -> Vec<NodeId> {
    net.neighbours(i)
        .iter()
        .filter(|(j, _)| s.get(*j) == Some(t))
        .map(|(j, _)| *j)
        .collect()
}

/// Accumulated in-weight at `i` of neighbours playing `t` in `s`.
pub fn support(net: &Network, s: &JointStrategy, i: NodeId, t: ProductId) -> Rational {
    let mut total = Rational::zero();
    for (j, w) in net.neighbours(i) {
        if s.get(*j) == Some(t) {
            total += w;
        }
    }
    total
}

/// Supports for every product of `P(i)` in one pass, parallel to
/// `net.products_of(i)`.
fn product_supports(net: &Network, s: &JointStrategy, i: NodeId) -> Vec<Rational> {
    let mut sums = vec![Rational::zero(); net.products_of(i).len()];
    for (j, w) in net.neighbours(i) {
        if let Some(t) = s.get(*j) {
            if let Some(pos) = net.product_position(i, t) {
                sums[pos] += w;
            }
        }
    }
    sums
}

/// Payoff node `i` would earn for each candidate strategy in `strategies`,
/// holding everyone else fixed at `s`. Shared by the state-graph builder
/// and simulators so edge conditions agree with `payoff` by construction.
pub(crate) fn strategy_values(
    net: &Network,
    s: &JointStrategy,
    i: NodeId,
    strategies: &[Choice],
) -> Vec<Rational> {
    if net.is_source(i) {
        return strategies
            .iter()
            .map(|c| match c {
                Some(_) => net.source_payoff().clone(),
                None => Rational::zero(),
            })
            .collect();
    }
    let supports = product_supports(net, s, i);
    strategies
        .iter()
        .map(|c| match c {
            Some(t) => {
                let pos = net
                    .product_position(i, *t)
                    .expect("strategy in product set");
                &supports[pos] - net.theta(i, *t)
            }
            None => Rational::zero(),
        })
        .collect()
}

/// The payoff of node `i` under `s`.
pub fn payoff(net: &Network, s: &JointStrategy, i: NodeId) -> Rational {
    match s.get(i) {
        None => Rational::zero(),
        Some(t) => {
            debug_assert!(net.node_has_product(i, t), "ill-formed joint strategy");
            if net.is_source(i) {
                net.source_payoff().clone()
            } else {
                support(net, s, i, t) - net.theta(i, t)
            }
        }
    }
}

/// Sum of all payoffs.
pub fn social_welfare(net: &Network, s: &JointStrategy) -> Rational {
    (0..net.node_count()).map(|i| payoff(net, s, i)).sum()
}

/// The set of best responses of `i` to the neighbour strategies in `s`
/// (only entries of in-neighbours are consulted). For a source node every
/// product ties at `c0 > 0`, so the whole product set is returned. For any
/// other node: the products of maximal strictly positive margin if one
/// exists, otherwise the null strategy together with every product of
/// margin exactly zero. Products come in interned order, null last.
pub fn best_responses(net: &Network, s: &JointStrategy, i: NodeId) -> Vec<Choice> {
    if net.is_source(i) {
        return net.products_of(i).iter().map(|t| Some(*t)).collect();
    }
    let products = net.products_of(i);
    let supports = product_supports(net, s, i);
    let mut best: Option<Rational> = None;
    for (pos, t) in products.iter().enumerate() {
        let margin = &supports[pos] - net.theta(i, *t);
        if margin.is_positive() && best.as_ref().is_none_or(|b| margin > *b) {
            best = Some(margin);
        }
    }
    match best {
        Some(best) => products
            .iter()
            .enumerate()
            .filter(|(pos, t)| &supports[*pos] - net.theta(i, **t) == best)
            .map(|(_, t)| Some(*t))
            .collect(),
        None => {
            let mut out: Vec<Choice> = products
                .iter()
                .enumerate()
                .filter(|(pos, t)| (&supports[*pos] - net.theta(i, **t)).is_zero())
                .map(|(_, t)| Some(*t))
                .collect();
            out.push(None);
            out
        }
    }
}

/// Strategies of `i` that strictly improve on `s`, in interned order with
/// null last.
pub fn better_responses(net: &Network, s: &JointStrategy, i: NodeId) -> Vec<Choice> {
    let current = payoff(net, s, i);
    let mut out = Vec::new();
    if net.is_source(i) {
        if s.get(i).is_none() {
            out.extend(net.products_of(i).iter().map(|t| Some(*t)));
        }
        return out;
    }
    let supports = product_supports(net, s, i);
    for (pos, t) in net.products_of(i).iter().enumerate() {
        if s.get(i) == Some(*t) {
            continue;
        }
        if &supports[pos] - net.theta(i, *t) > current {
            out.push(Some(*t));
        }
    }
    if s.get(i).is_some() && current.is_negative() {
        out.push(None);
    }
    out
}

/// Fast test for "player `i` has some strictly better response".
pub fn has_better_response(net: &Network, s: &JointStrategy, i: NodeId) -> bool {
    if net.is_source(i) {
        // any product beats abstention; products tie among themselves
        return s.get(i).is_none();
    }
    let current = payoff(net, s, i);
    if s.get(i).is_some() && current.is_negative() {
        return true;
    }
    let supports = product_supports(net, s, i);
    net.products_of(i)
        .iter()
        .enumerate()
        .any(|(pos, t)| s.get(i) != Some(*t) && &supports[pos] - net.theta(i, *t) > current)
}

/// Classify `s`: an equilibrium kind, or `NotNE` when some player can
/// strictly improve.
pub fn is_nash(net: &Network, s: &JointStrategy) -> NEKind {
    debug_assert!(s.well_formed(net), "ill-formed joint strategy");
    for i in 0..net.node_count() {
        if has_better_response(net, s, i) {
            return NEKind::NotNE;
        }
    }
    let adopted = s.0.iter().filter(|c| c.is_some()).count();
    if adopted == 0 {
        NEKind::Trivial
    } else if adopted == s.len() {
        NEKind::Determined
    } else {
        NEKind::NonTrivial
    }
}
