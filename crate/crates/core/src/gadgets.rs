//! Parametric generator networks.
//!
//! These constructions are the regression anchors of the crate: small
//! networks with hand-checkable equilibrium and dynamics behaviour, plus
//! the reduction families that tie equilibrium existence, finite
//! improvement and scheduler questions to subset-sum splits of a partition
//! instance. Every generator is deterministic in its parameters.
//!
//! Node ids are assigned canonically: partition sources first, then the
//! named hub nodes, then any attached triangle blocks with their own
//! sources. Product names are `t1`, `t2`, `t3`, `t4` and `t1p` (the primed
//! twin of `t1`).

use crate::network::{Network, NetworkBuilder, NodeId};
use crate::rational::{rat, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("parameter ordering violated: {0}")]
    ParamOrdering(String),
    #[error("partition instance must sum to {expected}, sums to {actual}")]
    WrongNormalization { expected: String, actual: String },
    #[error("partition values must be positive")]
    NonPositiveValue,
    #[error("twin target {node} is not a source node")]
    TwinTargetNotSource { node: NodeId },
    #[error("twin target {node} does not exist (network has {nodes} nodes)")]
    UnknownTwinTarget { node: NodeId, nodes: usize },
    #[error("twin target {node} listed twice")]
    DuplicateTwinTarget { node: NodeId },
    #[error("pair weight {weight} is below the pair threshold {theta}")]
    PairBelowThreshold { weight: String, theta: String },
    #[error("cycle gadgets need at least 3 nodes, got {0}")]
    TooFewNodes(usize),
}

/// Required total of a partition instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    SumToOne,
    SumToHalf,
}

impl Normalization {
    fn target(self) -> Rational {
        match self {
            Normalization::SumToOne => Rational::one(),
            Normalization::SumToHalf => rat(1, 2),
        }
    }

    /// An equal split must hit half the total.
    fn split_target(self) -> Rational {
        match self {
            Normalization::SumToOne => rat(1, 2),
            Normalization::SumToHalf => rat(1, 4),
        }
    }
}

/// Positive rationals with a fixed total, the input of every reduction
/// gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    values: Vec<Rational>,
    normalization: Normalization,
}

impl PartitionInstance {
    pub fn new(values: Vec<Rational>, normalization: Normalization) -> Result<Self, GadgetError> {
        if values.iter().any(|v| !v.is_positive()) {
            return Err(GadgetError::NonPositiveValue);
        }
        let total: Rational = values.iter().sum();
        if total != normalization.target() {
            return Err(GadgetError::WrongNormalization {
                expected: normalization.target().to_string(),
                actual: total.to_string(),
            });
        }
        Ok(PartitionInstance {
            values,
            normalization,
        })
    }

    pub fn sum_to_one(values: &[Rational]) -> Result<Self, GadgetError> {
        Self::new(values.to_vec(), Normalization::SumToOne)
    }

    pub fn sum_to_half(values: &[Rational]) -> Result<Self, GadgetError> {
        Self::new(values.to_vec(), Normalization::SumToHalf)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Whether some subset reaches exactly half the total. Exponential
    /// enumeration; instances here are tiny.
    pub fn has_equal_split(&self) -> bool {
        let target = self.normalization.split_target();
        let n = self.values.len();
        (0..(1u64 << n)).any(|mask| {
            let mut sum = Rational::zero();
            for (i, v) in self.values.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    sum += v;
                }
            }
            sum == target
        })
    }
}

/// Granularity constant of an instance: a positive rational such that
/// every value and a quarter are integer multiples of it. Any subset sum
/// that misses 1/4 therefore misses it by at least this much.
pub fn compute_tau(values: &[Rational]) -> Rational {
    let mut denom_product = rat(4, 1);
    for v in values {
        let denom: Rational = v.denom().to_string().parse().expect("integer denominator");
        denom_product = denom_product * denom;
    }
    denom_product.recip()
}

fn ensure_ordering(cond: bool, message: &str) -> Result<(), GadgetError> {
    if cond {
        Ok(())
    } else {
        Err(GadgetError::ParamOrdering(message.to_owned()))
    }
}

fn check_normalization(
    inst: &PartitionInstance,
    expected: Normalization,
) -> Result<(), GadgetError> {
    if inst.normalization() == expected {
        Ok(())
    } else {
        Err(GadgetError::WrongNormalization {
            expected: expected.target().to_string(),
            actual: inst.values().iter().sum::<Rational>().to_string(),
        })
    }
}

/// A three-node directed triangle fed by three single-product sources,
/// with `theta < w1 < w2`; each triangle node then prefers following its
/// triangle predecessor over its source, and chasing the predecessor never
/// settles: the game has no equilibrium at all.
///
/// Nodes: 0 `{t1,t2}`, 1 `{t1,t3}`, 2 `{t2,t3}` on the cycle
/// `0 -> 1 -> 2 -> 0` (weight `w2`); sources 3 `{t1}` -> 0,
/// 4 `{t2}` -> 2, 5 `{t3}` -> 1 (weight `w1`).
pub fn gen_triangle_no_ne(
    w1: &Rational,
    w2: &Rational,
    theta: &Rational,
) -> Result<Network, GadgetError> {
    ensure_ordering(
        theta.is_positive() && theta < w1 && w1 < w2 && *w2 <= Rational::one(),
        "need 0 < theta < w1 < w2 <= 1",
    )?;
    ensure_ordering((w1 + w2) <= Rational::one(), "need w1 + w2 <= 1")?;

    let mut b = Network::builder();
    b.node(&["t1", "t2"]).unwrap();
    b.node(&["t1", "t3"]).unwrap();
    b.node(&["t2", "t3"]).unwrap();
    b.node(&["t1"]).unwrap();
    b.node(&["t2"]).unwrap();
    b.node(&["t3"]).unwrap();
    for i in 0..3 {
        b.theta_all(i, theta.clone()).unwrap();
        b.edge(i, (i + 1) % 3, w2.clone()).unwrap();
    }
    b.edge(3, 0, w1.clone()).unwrap();
    b.edge(4, 2, w1.clone()).unwrap();
    b.edge(5, 1, w1.clone()).unwrap();
    Ok(b.build())
}

fn triangle_defaults() -> (Rational, Rational, Rational) {
    (rat(1, 4), rat(1, 3), rat(1, 8))
}

/// Add one source node per instance value, all with product set
/// `products`.
fn partition_sources(b: &mut NetworkBuilder, inst: &PartitionInstance, products: &[&str]) {
    for _ in inst.values() {
        b.node(products).unwrap();
    }
}

/// Attach one triangle block (as in [`gen_triangle_no_ne`]) whose entry
/// source for `entry_product` is the existing node `entry`.
fn attach_triangle(
    b: &mut NetworkBuilder,
    entry: NodeId,
    entry_product: &str,
    w1: &Rational,
    w2: &Rational,
    theta: &Rational,
) {
    let n0 = b.node(&[entry_product, "t2"]).unwrap();
    let n1 = b.node(&[entry_product, "t3"]).unwrap();
    let n2 = b.node(&["t2", "t3"]).unwrap();
    let s2 = b.node(&["t2"]).unwrap();
    let s3 = b.node(&["t3"]).unwrap();
    for i in [n0, n1, n2] {
        b.theta_all(i, theta.clone()).unwrap();
    }
    b.edge(n0, n1, w2.clone()).unwrap();
    b.edge(n1, n2, w2.clone()).unwrap();
    b.edge(n2, n0, w2.clone()).unwrap();
    b.edge(entry, n0, w1.clone()).unwrap();
    b.edge(s2, n2, w1.clone()).unwrap();
    b.edge(s3, n1, w1.clone()).unwrap();
}

/// Reduction network tying non-trivial equilibrium existence to an equal
/// split: sources `0..n` with products `{t1, t1p}` feed the hubs `a` and
/// `b` (threshold 1/2), and each hub doubles as the entry source of its
/// own no-equilibrium triangle block. A non-trivial equilibrium exists iff
/// the instance splits evenly.
pub fn gen_partition_ne(inst: &PartitionInstance) -> Result<Network, GadgetError> {
    check_normalization(inst, Normalization::SumToOne)?;
    let (w1, w2, theta) = triangle_defaults();
    let mut b = Network::builder();
    partition_sources(&mut b, inst, &["t1", "t1p"]);
    let a = b.node(&["t1"]).unwrap();
    b.theta(a, "t1", rat(1, 2)).unwrap();
    let hub_b = b.node(&["t1p"]).unwrap();
    b.theta(hub_b, "t1p", rat(1, 2)).unwrap();
    for (i, v) in inst.values().iter().enumerate() {
        b.edge(i, a, v.clone()).unwrap();
        b.edge(i, hub_b, v.clone()).unwrap();
    }
    attach_triangle(&mut b, a, "t1", &w1, &w2, &theta);
    attach_triangle(&mut b, hub_b, "t1p", &w1, &w2, &theta);
    Ok(b.build())
}

/// The bare two-hub network: determined equilibrium existence is exactly
/// equal-split existence (each hub needs accumulated weight 1/2 to hold
/// its product at payoff zero).
pub fn gen_partition_determined(inst: &PartitionInstance) -> Result<Network, GadgetError> {
    check_normalization(inst, Normalization::SumToOne)?;
    let mut b = Network::builder();
    partition_sources(&mut b, inst, &["t1", "t1p"]);
    let a = b.node(&["t1"]).unwrap();
    b.theta(a, "t1", rat(1, 2)).unwrap();
    let hub_b = b.node(&["t1p"]).unwrap();
    b.theta(hub_b, "t1p", rat(1, 2)).unwrap();
    for (i, v) in inst.values().iter().enumerate() {
        b.edge(i, a, v.clone()).unwrap();
        b.edge(i, hub_b, v.clone()).unwrap();
    }
    Ok(b.build())
}

/// Best-response cycling gadget: sources `0..n` `{t1,t2}` feed `a` and
/// `b`, which sit on the 1/2-weight triangle `a -> b -> c -> a`, with
/// raised thresholds for `t1` at `a` and `t2` at `b`. Finite best-response
/// behaviour fails iff the instance splits evenly.
pub fn gen_fbrp(inst: &PartitionInstance) -> Result<Network, GadgetError> {
    check_normalization(inst, Normalization::SumToHalf)?;
    let mut b = Network::builder();
    partition_sources(&mut b, inst, &["t1", "t2"]);
    let a = b.node(&["t1", "t2"]).unwrap();
    let hub_b = b.node(&["t1", "t2"]).unwrap();
    let c = b.node(&["t1", "t2"]).unwrap();
    b.theta(a, "t1", rat(3, 4)).unwrap();
    b.theta(a, "t2", rat(1, 2)).unwrap();
    b.theta(hub_b, "t1", rat(1, 2)).unwrap();
    b.theta(hub_b, "t2", rat(3, 4)).unwrap();
    b.theta_all(c, rat(1, 2)).unwrap();
    for (i, v) in inst.values().iter().enumerate() {
        b.edge(i, a, v.clone()).unwrap();
        b.edge(i, hub_b, v.clone()).unwrap();
    }
    b.edge(a, hub_b, rat(1, 2)).unwrap();
    b.edge(hub_b, c, rat(1, 2)).unwrap();
    b.edge(c, a, rat(1, 2)).unwrap();
    Ok(b.build())
}

/// Improvement cycling gadget. Sources `0..n` `{t1,t2}` feed `a` and `b`;
/// the 3/4-weight triangle `a -> b -> c -> a` carries product sets
/// `{t2,t3}`, `{t1,t2}`, `{t1,t3}`, and a `{t3}` source feeds `c` with
/// weight 1/2. Thresholds are offset by the granularity constant so that a
/// missed split forces termination while an exact split closes a six-step
/// improvement cycle.
///
/// The triangle nodes deliberately carry in-weight sums above 1: payoffs
/// stay well defined and the exact payoff ladder of the construction needs
/// these weights. `validate` reports exactly those three findings.
pub fn gen_fip(inst: &PartitionInstance) -> Result<Network, GadgetError> {
    check_normalization(inst, Normalization::SumToHalf)?;
    let tau = compute_tau(inst.values());
    let mut b = Network::builder();
    partition_sources(&mut b, inst, &["t1", "t2"]);
    let a = b.node(&["t2", "t3"]).unwrap();
    let hub_b = b.node(&["t1", "t2"]).unwrap();
    let c = b.node(&["t1", "t3"]).unwrap();
    let d = b.node(&["t3"]).unwrap();
    b.theta(a, "t2", rat(1, 2)).unwrap();
    b.theta(a, "t3", rat(1, 4) + &tau).unwrap();
    b.theta(hub_b, "t1", rat(1, 2)).unwrap();
    b.theta(hub_b, "t2", rat(1, 2) + &tau).unwrap();
    b.theta(c, "t1", rat(1, 4)).unwrap();
    b.theta(c, "t3", rat(1, 4)).unwrap();
    for (i, v) in inst.values().iter().enumerate() {
        b.edge(i, a, v.clone()).unwrap();
        b.edge(i, hub_b, v.clone()).unwrap();
    }
    b.edge(a, hub_b, rat(3, 4)).unwrap();
    b.edge(hub_b, c, rat(3, 4)).unwrap();
    b.edge(c, a, rat(3, 4)).unwrap();
    b.edge(d, c, rat(1, 2)).unwrap();
    Ok(b.build())
}

/// Scheduler-hardness gadget: sources `0..n` `{t1,t2}` feed `a` `{t1}` and
/// `b` `{t2}` (threshold 1/2), which act as the `t1`/`t2` sources of a
/// no-equilibrium triangle `c -> e -> d -> c` completed by the `{t3}`
/// source `g`. With an equal split the hubs can be frozen onto their
/// products and the triangle chases forever; without one, scheduling the
/// sources first resolves a hub and the triangle settles.
pub fn gen_ufip(inst: &PartitionInstance) -> Result<Network, GadgetError> {
    let (w1, w2, theta) = triangle_defaults();
    gen_ufip_with(inst, &theta, &w1, &w2)
}

/// [`gen_ufip`] with explicit triangle parameters `theta < w1 < w2`,
/// `w1 + w2 <= 1`.
pub fn gen_ufip_with(
    inst: &PartitionInstance,
    theta: &Rational,
    w1: &Rational,
    w2: &Rational,
) -> Result<Network, GadgetError> {
    check_normalization(inst, Normalization::SumToOne)?;
    ensure_ordering(
        theta.is_positive() && theta < w1 && w1 < w2 && *w2 <= Rational::one(),
        "need 0 < theta < w1 < w2 <= 1",
    )?;
    ensure_ordering((w1 + w2) <= Rational::one(), "need w1 + w2 <= 1")?;

    let mut b = Network::builder();
    partition_sources(&mut b, inst, &["t1", "t2"]);
    let a = b.node(&["t1"]).unwrap();
    b.theta(a, "t1", rat(1, 2)).unwrap();
    let hub_b = b.node(&["t2"]).unwrap();
    b.theta(hub_b, "t2", rat(1, 2)).unwrap();
    let c = b.node(&["t1", "t2"]).unwrap();
    let d = b.node(&["t2", "t3"]).unwrap();
    let e = b.node(&["t1", "t3"]).unwrap();
    let g = b.node(&["t3"]).unwrap();
    for i in [c, d, e] {
        b.theta_all(i, theta.clone()).unwrap();
    }
    for (i, v) in inst.values().iter().enumerate() {
        b.edge(i, a, v.clone()).unwrap();
        b.edge(i, hub_b, v.clone()).unwrap();
    }
    b.edge(a, c, w1.clone()).unwrap();
    b.edge(hub_b, d, w1.clone()).unwrap();
    b.edge(g, e, w1.clone()).unwrap();
    b.edge(c, e, w2.clone()).unwrap();
    b.edge(e, d, w2.clone()).unwrap();
    b.edge(d, c, w2.clone()).unwrap();
    Ok(b.build())
}

/// Twin every node of `targets` (which must be sources) with a fresh copy
/// of itself: same product set, mutual edges of weight `w_pair`,
/// thresholds `theta_pair` for every product of both pair members. A pair
/// adopting a common product earns `w_pair - theta_pair >= 0`, so the
/// transformed targets stop being sources without changing the reduction
/// behaviour of the host gadget.
pub fn twin_transform(
    net: &Network,
    targets: &[NodeId],
    w_pair: &Rational,
    theta_pair: &Rational,
) -> Result<Network, GadgetError> {
    if w_pair < theta_pair {
        return Err(GadgetError::PairBelowThreshold {
            weight: w_pair.to_string(),
            theta: theta_pair.to_string(),
        });
    }
    for (k, &t) in targets.iter().enumerate() {
        if t >= net.node_count() {
            return Err(GadgetError::UnknownTwinTarget {
                node: t,
                nodes: net.node_count(),
            });
        }
        if targets[..k].contains(&t) {
            return Err(GadgetError::DuplicateTwinTarget { node: t });
        }
        if !net.is_source(t) {
            return Err(GadgetError::TwinTargetNotSource { node: t });
        }
    }

    let n = net.node_count();
    let mut b = Network::builder();
    b.source_payoff(net.source_payoff().clone());
    for i in 0..n {
        let names: Vec<&str> = net
            .products_of(i)
            .iter()
            .map(|t| net.product_name(*t))
            .collect();
        b.node(&names).unwrap();
    }
    for &t in targets {
        let names: Vec<&str> = net
            .products_of(t)
            .iter()
            .map(|p| net.product_name(*p))
            .collect();
        b.node(&names).unwrap();
    }
    for i in 0..n {
        if targets.contains(&i) {
            b.theta_all(i, theta_pair.clone()).unwrap();
        } else {
            for t in net.products_of(i) {
                b.theta(i, net.product_name(*t), net.theta(i, *t).clone())
                    .unwrap();
            }
        }
    }
    for k in 0..targets.len() {
        b.theta_all(n + k, theta_pair.clone()).unwrap();
    }
    for (src, dst, w) in net.edges() {
        b.edge(*src, *dst, w.clone()).unwrap();
    }
    for (k, &t) in targets.iter().enumerate() {
        b.edge(t, n + k, w_pair.clone()).unwrap();
        b.edge(n + k, t, w_pair.clone()).unwrap();
    }
    Ok(b.build())
}

/// Chain `i -> j -> k...` where only the source earns in equilibrium but
/// the social optimum pays the whole tail: both price ratios exceed `r`.
/// When one tail node suffices within the weight cap the three-node chain
/// is emitted; otherwise `j` feeds `ceil(r * c0 + 1)` tail nodes.
pub fn gen_poa_dag(r: &Rational, c0: &Rational) -> Result<Network, GadgetError> {
    ensure_ordering(r.is_positive(), "need r > 0")?;
    ensure_ordering(c0.is_positive(), "need c0 > 0")?;
    let rc0 = r * c0;
    let mut b = Network::builder();
    b.source_payoff(c0.clone());
    b.node(&["t1"]).unwrap();
    b.node(&["t2"]).unwrap();

    if rc0 < Rational::one() {
        // single tail node; thresholds small enough that 1 - 2*delta > r*c0
        let delta = (Rational::one() - &rc0) * rat(1, 4);
        b.node(&["t2"]).unwrap();
        b.theta(1, "t2", delta.clone()).unwrap();
        b.theta(2, "t2", delta).unwrap();
        b.edge(0, 1, Rational::one()).unwrap();
        b.edge(1, 2, Rational::one()).unwrap();
    } else {
        // ceil(r*c0 + 1) tail nodes of weight one each
        let m = ceil_to_usize(&(rc0 + Rational::one()));
        let delta = Rational::new(1, 2 * (m as i64 + 1));
        b.theta(1, "t2", delta.clone()).unwrap();
        for _ in 0..m {
            let id = b.node(&["t2"]).unwrap();
            b.theta(id, "t2", delta.clone()).unwrap();
            b.edge(1, id, Rational::one()).unwrap();
        }
        b.edge(0, 1, Rational::one()).unwrap();
    }
    Ok(b.build())
}

fn ceil_to_usize(r: &Rational) -> usize {
    use num::{bigint::BigInt, Integer, ToPrimitive};
    let one = BigInt::from(1);
    let ceil = (r.numer() + (r.denom() - one)).div_floor(r.denom());
    ceil.to_usize().expect("gadget size fits usize")
}

/// Two-node cycle on `{t1,t2}` where the mutual-`t1` equilibrium earns
/// `2*eps` while the optimum at mutual `t2` earns `1 - 2*eps`; with the
/// all-null equilibrium the price of anarchy is infinite and the price of
/// stability is `(1 - 2*eps) / (2*eps)`. Requires `0 < eps < 1/4`.
pub fn gen_poa_cycle(eps: &Rational) -> Result<Network, GadgetError> {
    ensure_ordering(eps.is_positive() && *eps < rat(1, 4), "need 0 < eps < 1/4")?;
    let mut b = Network::builder();
    b.node(&["t1", "t2"]).unwrap();
    b.node(&["t1", "t2"]).unwrap();
    b.theta(0, "t1", eps.clone()).unwrap();
    b.theta(0, "t2", rat(3, 1) * eps).unwrap();
    b.theta(1, "t1", Rational::one() - eps).unwrap();
    b.theta(1, "t2", eps.clone()).unwrap();
    b.edge(0, 1, Rational::one()).unwrap();
    b.edge(1, 0, rat(2, 1) * eps).unwrap();
    Ok(b.build())
}

/// The no-equilibrium triangle augmented with a `{t4}` escape source of
/// weight `w3` into node 0 and `t4` added to every triangle product set:
/// every state can still reach the mutual-`t4` equilibrium, but along the
/// triangle chase there is always exactly one scheduleable player, so no
/// scheduler can force termination. Requires `theta < w3 < w1 < w2`.
pub fn gen_weakly_acyclic_with(
    theta: &Rational,
    w3: &Rational,
    w1: &Rational,
    w2: &Rational,
) -> Result<Network, GadgetError> {
    ensure_ordering(
        theta.is_positive() && theta < w3 && w3 < w1 && w1 < w2 && *w2 <= Rational::one(),
        "need 0 < theta < w3 < w1 < w2 <= 1",
    )?;
    ensure_ordering(
        (&(w1 + w2) + w3) <= Rational::one(),
        "need w1 + w2 + w3 <= 1",
    )?;

    let mut b = Network::builder();
    b.node(&["t1", "t2", "t4"]).unwrap();
    b.node(&["t1", "t3", "t4"]).unwrap();
    b.node(&["t2", "t3", "t4"]).unwrap();
    b.node(&["t1"]).unwrap();
    b.node(&["t2"]).unwrap();
    b.node(&["t3"]).unwrap();
    b.node(&["t4"]).unwrap();
    for i in 0..3 {
        b.theta_all(i, theta.clone()).unwrap();
        b.edge(i, (i + 1) % 3, w2.clone()).unwrap();
    }
    b.edge(3, 0, w1.clone()).unwrap();
    b.edge(4, 2, w1.clone()).unwrap();
    b.edge(5, 1, w1.clone()).unwrap();
    b.edge(6, 0, w3.clone()).unwrap();
    Ok(b.build())
}

/// [`gen_weakly_acyclic_with`] at the standard parameters.
pub fn gen_weakly_acyclic() -> Network {
    gen_weakly_acyclic_with(&rat(1, 16), &rat(1, 8), &rat(1, 4), &rat(1, 3))
        .expect("standard parameters are ordered")
}

/// The weakly acyclic fixture with its `{t4}` source twinned: reaching the
/// mutual-`t4` state now needs the pair's consent, which it never gives,
/// so an equilibrium exists yet the game is not weakly acyclic.
pub fn gen_not_weakly_acyclic() -> Network {
    let base = gen_weakly_acyclic();
    twin_transform(&base, &[6], &rat(1, 4), &rat(1, 16)).expect("node 6 is a source")
}

/// Kind of cycle fixture carrying an unavoidable best-response cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrCycleKind {
    /// One shared product whose mutual adoption pays strictly positive.
    SingleProduct,
    /// Two shared products, each a (zero-payoff) determined equilibrium.
    TwoProduct,
}

/// Simple cycle of `n >= 3` nodes on which best-response improvement can
/// rotate forever: either one product held at strictly positive payoff, or
/// two products both forming determined equilibria.
pub fn gen_br_cycle(kind: BrCycleKind, n: usize) -> Result<Network, GadgetError> {
    if n < 3 {
        return Err(GadgetError::TooFewNodes(n));
    }
    let mut b = Network::builder();
    let (products, theta): (&[&str], Rational) = match kind {
        BrCycleKind::SingleProduct => (&["t1"], rat(1, 4)),
        BrCycleKind::TwoProduct => (&["t1", "t2"], rat(1, 2)),
    };
    for _ in 0..n {
        b.node(products).unwrap();
    }
    for i in 0..n {
        b.theta_all(i, theta.clone()).unwrap();
        b.edge(i, (i + 1) % n, rat(1, 2)).unwrap();
    }
    Ok(b.build())
}

/// The no-equilibrium triangle with every source twinned: the resulting
/// network has no sources (so the all-null equilibrium exists), but from
/// the state where the pairs hold their products and the triangle plays
/// `(t1, t1, t2)` every improvement path is infinite.
pub fn gen_no_source_infinite() -> Network {
    let (w1, w2, theta) = triangle_defaults();
    let base = gen_triangle_no_ne(&w1, &w2, &theta).expect("default parameters are ordered");
    twin_transform(&base, &[3, 4, 5], &w1, &theta).expect("3, 4, 5 are the sources")
}

/// Six-node double triangle with equitable weights `1/|N(i)|` and
/// thresholds `1/(|N(i)|+1)`. Its structure admits sets satisfying the
/// self-sustaining reachability condition without being equilibria.
pub fn gen_equitable_example() -> Network {
    let mut b = Network::builder();
    b.node(&["t1", "t2"]).unwrap();
    b.node(&["t1", "t2"]).unwrap();
    b.node(&["t1", "t2", "t3", "t4"]).unwrap();
    b.node(&["t3", "t4"]).unwrap();
    b.node(&["t3", "t4"]).unwrap();
    b.node(&["t3", "t4"]).unwrap();
    let edges: [(NodeId, NodeId); 9] = [
        (0, 1),
        (2, 0),
        (1, 2),
        (1, 3),
        (3, 4),
        (3, 2),
        (5, 3),
        (5, 2),
        (4, 5),
    ];
    let mut indeg = [0usize; 6];
    for (_, dst) in edges {
        indeg[dst] += 1;
    }
    for (src, dst) in edges {
        b.edge(src, dst, Rational::new(1, indeg[dst] as i64))
            .unwrap();
    }
    for i in 0..6 {
        b.theta_all(i, Rational::new(1, indeg[i] as i64 + 1))
            .unwrap();
    }
    b.build()
}
