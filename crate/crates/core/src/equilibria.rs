//! Equilibrium existence, enumeration and construction.
//!
//! Exhaustive scans decide any equilibrium question at desk scale. On top
//! of those sit the polynomial procedures: the product sweep on simple
//! cycles, the threshold fixed point on source-free graphs, the rank-order
//! assignment on acyclic graphs, and the phase-based construction that
//! covers all source nodes with at most two products. Every constructive
//! result is a witness that passes [`crate::game::is_nash`].

use crate::game::{
    self, best_responses, is_nash, payoff, social_welfare, Choice, JointStrategy, KindFilter,
    NEKind,
};
use crate::graph;
use crate::network::{Network, NodeId, ProductId};
use crate::rational::Rational;
use crate::space::{BudgetExceeded, StateSpace};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NeError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("operation requires a {expected} network")]
    WrongGraphClass { expected: &'static str },
    #[error("product cover violated: {reason}")]
    CoverViolated { reason: String },
    #[error("the game has no Nash equilibrium")]
    NoEquilibrium,
    #[error("joint strategy is not a Nash equilibrium")]
    NotAnEquilibrium,
    #[error("phase alternation failed to stabilize within {rounds} rounds")]
    PhaseDivergence { rounds: usize },
}

/// How an existence report was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeMethod {
    Brute,
    Cycle,
    SourceFree,
    TwoProduct,
    DagOrder,
}

/// Existence answer with witnesses. A flag is `None` when the method used
/// does not decide that kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeReport {
    pub method: NeMethod,
    pub any: Option<bool>,
    pub non_trivial: Option<bool>,
    pub determined: Option<bool>,
    pub witnesses: Vec<(NEKind, JointStrategy)>,
    pub states_scanned: Option<u128>,
}

impl NeReport {
    fn new(method: NeMethod) -> Self {
        NeReport {
            method,
            any: None,
            non_trivial: None,
            determined: None,
            witnesses: Vec::new(),
            states_scanned: None,
        }
    }

    /// The flag corresponding to a kind filter.
    pub fn exists(&self, filter: KindFilter) -> Option<bool> {
        match filter {
            KindFilter::Any => self.any,
            KindFilter::NonTrivial => self.non_trivial,
            KindFilter::Determined => self.determined,
        }
    }
}

/// Which state space an exhaustive scan runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanSpace {
    Full,
    /// Pin every single-product source to its product. Sound and complete
    /// for equilibrium enumeration: no dropped state is an equilibrium and
    /// no kept state changes its equilibrium status.
    SourcesDominant,
}

impl ScanSpace {
    fn build(self, net: &Network) -> StateSpace {
        match self {
            ScanSpace::Full => StateSpace::full(net),
            ScanSpace::SourcesDominant => StateSpace::sources_dominant(net),
        }
    }
}

/// Exhaustively enumerate equilibria of the requested kind, in canonical
/// state order. `limit` caps the number of collected witnesses; the scan
/// stops classifying once the cap is reached.
pub fn brute_force_nash(
    net: &Network,
    filter: KindFilter,
    scan: ScanSpace,
    budget: u64,
    limit: Option<usize>,
) -> Result<NeReport, NeError> {
    let space = scan.build(net);
    space.check_budget(budget)?;
    let mut report = NeReport::new(NeMethod::Brute);
    let mut scanned: u128 = 0;
    let limit = limit.unwrap_or(usize::MAX);
    let mut found_any = false;
    let mut found_non_trivial = false;
    let mut found_determined = false;

    let total = space.state_count();
    space.for_each_state(|_, s| {
        if report.witnesses.len() >= limit {
            return;
        }
        scanned += 1;
        let kind = is_nash(net, s);
        if kind.is_equilibrium() {
            found_any = true;
            found_non_trivial |= KindFilter::NonTrivial.accepts(kind);
            found_determined |= KindFilter::Determined.accepts(kind);
            if filter.accepts(kind) {
                report.witnesses.push((kind, s.clone()));
            }
        }
    });

    report.states_scanned = Some(scanned);
    if scanned == total {
        report.any = Some(found_any);
        report.non_trivial = Some(found_non_trivial);
        report.determined = Some(found_determined);
    } else {
        // truncated scan still certifies whatever was found
        report.any = found_any.then_some(true);
        report.non_trivial = found_non_trivial.then_some(true);
        report.determined = found_determined.then_some(true);
    }
    Ok(report)
}

/// Decide non-trivial (equivalently, determined) equilibrium existence on
/// a simple cycle by sweeping the products of the first node: `t̄` works
/// iff every node lists `t` and its unique in-weight covers its threshold.
/// Time is linear in products times nodes.
pub fn verify_nash_cycle(net: &Network) -> Result<NeReport, NeError> {
    let class = net.classify();
    let order = class.cycle_order.ok_or(NeError::WrongGraphClass {
        expected: "simple cycle",
    })?;

    let mut report = NeReport::new(NeMethod::Cycle);
    // a cycle has no sources, so all-null is always an equilibrium
    report.any = Some(true);

    let mut found = None;
    for &t in net.products_of(order[0]) {
        let ok = order.iter().all(|&i| {
            net.node_has_product(i, t) && {
                let (_, w) = &net.neighbours(i)[0];
                w >= net.theta(i, t)
            }
        });
        if ok {
            found = Some(t);
            break;
        }
    }
    report.non_trivial = Some(found.is_some());
    report.determined = Some(found.is_some());
    match found {
        Some(t) => {
            let witness = JointStrategy(vec![Some(t); net.node_count()]);
            debug_assert_eq!(is_nash(net, &witness), NEKind::Determined);
            report.witnesses.push((NEKind::Determined, witness));
        }
        None => {
            report
                .witnesses
                .push((NEKind::Trivial, JointStrategy::all_null(net.node_count())));
        }
    }
    Ok(report)
}

/// Result of the threshold fixed point for one product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xt {
    pub product: ProductId,
    /// Nodes that can sustain `t` collectively, sorted ascending.
    pub members: Vec<NodeId>,
    /// Refinement rounds until stable (bounded by the node count).
    pub rounds: usize,
}

/// Greatest fixed point of "lists `t` and draws enough in-weight for `t`
/// from inside the set", started from all nodes listing `t`. On a
/// source-free network a non-trivial equilibrium on `t` exists iff this
/// set is non-empty.
pub fn compute_xt(net: &Network, t: ProductId) -> Result<Xt, NeError> {
    if !net.classify().source_free {
        return Err(NeError::WrongGraphClass {
            expected: "source-free",
        });
    }
    Ok(xt_fixed_point(net, t))
}

fn xt_fixed_point(net: &Network, t: ProductId) -> Xt {
    let n = net.node_count();
    let candidates = vec![true; n];
    let mut inside: Vec<bool> = (0..n).map(|i| net.node_has_product(i, t)).collect();
    let mut rounds = 0;
    loop {
        let next = refine_once(net, t, &inside, &candidates);
        if next == inside {
            break;
        }
        inside = next;
        rounds += 1;
        debug_assert!(rounds <= n, "fixed point must settle within n rounds");
    }
    Xt {
        product: t,
        members: (0..n).filter(|&i| inside[i]).collect(),
        rounds,
    }
}

/// One refinement step: keep members whose in-weight from current members
/// covers their threshold for `t`.
fn refine_once(net: &Network, t: ProductId, inside: &[bool], candidates: &[bool]) -> Vec<bool> {
    let n = net.node_count();
    let mut next = vec![false; n];
    for i in 0..n {
        if !inside[i] || !candidates[i] {
            continue;
        }
        let mut sum = Rational::zero();
        for (j, w) in net.neighbours(i) {
            if inside[*j] {
                sum += w;
            }
        }
        next[i] = sum >= *net.theta(i, t);
    }
    next
}

/// Decide non-trivial equilibrium existence on a source-free network by
/// trying the threshold fixed point of every product. The witness plays
/// the product on the fixed point and null elsewhere.
pub fn verify_nash_source_free(net: &Network) -> Result<NeReport, NeError> {
    if !net.classify().source_free {
        return Err(NeError::WrongGraphClass {
            expected: "source-free",
        });
    }
    let mut report = NeReport::new(NeMethod::SourceFree);
    report.any = Some(true); // all-null is an equilibrium without sources

    for t in net.all_products() {
        let xt = xt_fixed_point(net, t);
        if !xt.members.is_empty() {
            let mut witness = JointStrategy::all_null(net.node_count());
            for &i in &xt.members {
                witness.set(i, Some(t));
            }
            let kind = is_nash(net, &witness);
            debug_assert!(kind.is_equilibrium() && kind != NEKind::Trivial);
            report.non_trivial = Some(true);
            report.witnesses.push((kind, witness));
            return Ok(report);
        }
    }
    report.non_trivial = Some(false);
    report
        .witnesses
        .push((NEKind::Trivial, JointStrategy::all_null(net.node_count())));
    Ok(report)
}

/// A strongly connected node set whose members all list `product` and draw
/// enough in-weight for it from inside the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfSustainingScs {
    pub product: ProductId,
    /// Sorted ascending; non-empty and strongly connected in the induced
    /// subgraph.
    pub members: Vec<NodeId>,
}

/// Check the defining conditions of a self-sustaining strongly connected
/// subgraph directly.
pub fn is_self_sustaining(net: &Network, t: ProductId, members: &[NodeId]) -> bool {
    if members.is_empty() {
        return false;
    }
    for &i in members {
        if !net.node_has_product(i, t) {
            return false;
        }
        let mut sum = Rational::zero();
        for (j, w) in net.neighbours(i) {
            if members.contains(j) {
                sum += w;
            }
        }
        if sum < *net.theta(i, t) {
            return false;
        }
    }
    // strong connectivity of the induced subgraph
    let index_of = |j: NodeId| members.iter().position(|&m| m == j);
    let mut adj = vec![Vec::new(); members.len()];
    for (pos, &i) in members.iter().enumerate() {
        for &dst in &net.out_adjacency()[i] {
            if let Some(d) = index_of(dst) {
                adj[pos].push(d);
            }
        }
    }
    graph::strongly_connected_components(&adj).len() == 1
}

/// Prune candidates for `t` down to the set whose members keep enough
/// in-weight from surviving candidates. Any self-sustaining set inside the
/// candidates survives whole, so the result is non-empty exactly when one
/// exists.
fn sustaining_residue(net: &Network, t: ProductId, candidates: &[bool]) -> Vec<bool> {
    let n = net.node_count();
    let mut inside: Vec<bool> = (0..n)
        .map(|i| candidates[i] && net.node_has_product(i, t))
        .collect();
    loop {
        let next = refine_once(net, t, &inside, candidates);
        if next == inside {
            return inside;
        }
        inside = next;
    }
}

/// Strongly connected components of the residue that satisfy the
/// self-sustaining condition internally, in canonical order. Components
/// without in-edges from the rest of the residue always qualify.
fn sustaining_components(net: &Network, t: ProductId, residue: &[bool]) -> Vec<Vec<NodeId>> {
    let members: Vec<NodeId> = (0..net.node_count()).filter(|&i| residue[i]).collect();
    if members.is_empty() {
        return Vec::new();
    }
    let index_of = |j: NodeId| members.binary_search(&j).ok();
    let mut adj = vec![Vec::new(); members.len()];
    for (pos, &i) in members.iter().enumerate() {
        for &dst in &net.out_adjacency()[i] {
            if let Some(d) = index_of(dst) {
                adj[pos].push(d);
            }
        }
    }
    graph::strongly_connected_components(&adj)
        .into_iter()
        .map(|comp| {
            comp.into_iter()
                .map(|p| members[p])
                .collect::<Vec<NodeId>>()
        })
        .filter(|comp| is_self_sustaining(net, t, comp))
        .collect()
}

/// Find some self-sustaining strongly connected subgraph for `t`, if one
/// exists; the canonical first qualifying component of the pruned residue
/// is returned, not an enumeration of all witnesses.
pub fn find_self_sustaining(net: &Network, t: ProductId) -> Option<SelfSustainingScs> {
    let candidates = vec![true; net.node_count()];
    let residue = sustaining_residue(net, t, &candidates);
    sustaining_components(net, t, &residue)
        .into_iter()
        .next()
        .map(|members| SelfSustainingScs {
            product: t,
            members,
        })
}

/// The structural condition satisfied by every non-trivial equilibrium of
/// a source-free network: for each adopted product `t` and each adopter
/// `i`, some self-sustaining set inside the adopters of `t` reaches `i`.
/// The converse does not hold.
pub fn ne_structure_holds(net: &Network, s: &JointStrategy) -> bool {
    for t in net.all_products() {
        let adopters: Vec<bool> = (0..net.node_count()).map(|i| s.get(i) == Some(t)).collect();
        if !adopters.iter().any(|&a| a) {
            continue;
        }
        let residue = sustaining_residue(net, t, &adopters);
        let seeds: Vec<NodeId> = sustaining_components(net, t, &residue)
            .into_iter()
            .flatten()
            .collect();
        if seeds.is_empty() {
            return false;
        }
        let reach = graph::reachable_from(net.out_adjacency(), &seeds);
        if (0..net.node_count()).any(|i| adopters[i] && !reach[i]) {
            return false;
        }
    }
    true
}

/// Verify the structural condition for a strategy that must be an
/// equilibrium of a source-free network.
pub fn check_ne_structure(net: &Network, s: &JointStrategy) -> Result<bool, NeError> {
    if !net.classify().source_free {
        return Err(NeError::WrongGraphClass {
            expected: "source-free",
        });
    }
    if !is_nash(net, s).is_equilibrium() {
        return Err(NeError::NotAnEquilibrium);
    }
    Ok(ne_structure_holds(net, s))
}

/// Outcome of one maximal phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseResult {
    pub state: JointStrategy,
    /// Switches performed; at most one per node.
    pub switches: usize,
}

/// Run a maximal `target`-phase from `s`: repeatedly, in ascending node
/// order, switch any node for which `target` is both a best response and a
/// strict improvement, until no such node remains. Nodes only ever switch
/// onto `target`, so a phase performs at most `n` switches and is
/// idempotent.
pub fn run_phase(net: &Network, s: &JointStrategy, target: Choice) -> PhaseResult {
    let n = net.node_count();
    let mut state = s.clone();
    let mut switches = 0usize;
    loop {
        let mut moved = false;
        for i in 0..n {
            if state.get(i) == target {
                continue;
            }
            if let Some(t) = target {
                if !net.node_has_product(i, t) {
                    continue;
                }
            }
            let current = payoff(net, &state, i);
            let after = match target {
                None => Rational::zero(),
                Some(t) => {
                    if net.is_source(i) {
                        net.source_payoff().clone()
                    } else {
                        game::support(net, &state, i, t) - net.theta(i, t)
                    }
                }
            };
            if after > current && best_responses(net, &state, i).contains(&target) {
                state.set(i, target);
                switches += 1;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    debug_assert!(switches <= n);
    PhaseResult { state, switches }
}

/// Result of the covering-products construction, with loop counters
/// backing the termination guarantees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructedNe {
    pub state: JointStrategy,
    pub kind: NEKind,
    /// Alternation rounds in the two-product case (0 when one product).
    pub rounds: usize,
    /// Largest switch count seen in any single phase.
    pub max_phase_switches: usize,
}

/// Construct an equilibrium when at most two products cover all sources:
/// every source must list a product of `cover`. One product: a single
/// phase from all-null. Two products: a phase for the first product on the
/// subnetwork without the sources lacking it, then alternating phases of
/// the second product and the null strategy until a full round changes
/// nothing.
pub fn construct_ne_two_products(
    net: &Network,
    cover: &[ProductId],
) -> Result<ConstructedNe, NeError> {
    if cover.is_empty() || cover.len() > 2 {
        return Err(NeError::CoverViolated {
            reason: format!("need 1 or 2 products, got {}", cover.len()),
        });
    }
    if cover.len() == 2 && cover[0] == cover[1] {
        return Err(NeError::CoverViolated {
            reason: "duplicate product".into(),
        });
    }
    for t in cover {
        if t.index() >= net.product_count() {
            return Err(NeError::CoverViolated {
                reason: format!("product id {} outside this network", t.index()),
            });
        }
    }
    for i in net.sources() {
        if !cover.iter().any(|t| net.node_has_product(i, *t)) {
            return Err(NeError::CoverViolated {
                reason: format!("source {i} lists no cover product"),
            });
        }
    }

    let n = net.node_count();
    let t1 = cover[0];
    let mut max_phase_switches = 0usize;

    if cover.len() == 1 {
        let phase = run_phase(net, &JointStrategy::all_null(n), Some(t1));
        let kind = is_nash(net, &phase.state);
        debug_assert!(kind.is_equilibrium());
        return Ok(ConstructedNe {
            state: phase.state,
            kind,
            rounds: 0,
            max_phase_switches: phase.switches,
        });
    }
    let t2 = cover[1];

    // induced subnetwork without the sources that cannot play t1
    let keep: Vec<NodeId> = (0..n)
        .filter(|&i| !(net.is_source(i) && !net.node_has_product(i, t1)))
        .collect();
    let sub = induced_subnetwork(net, &keep);
    let sub_t1 = sub
        .product_id(net.product_name(t1))
        .expect("t1 kept in subnetwork");
    let sub_phase = run_phase(&sub, &JointStrategy::all_null(keep.len()), Some(sub_t1));
    max_phase_switches = max_phase_switches.max(sub_phase.switches);

    let mut state = JointStrategy::all_null(n);
    for (sub_i, &orig) in keep.iter().enumerate() {
        let choice = sub_phase.state.get(sub_i).map(|t| {
            net.product_id(sub.product_name(t))
                .expect("shared product name")
        });
        state.set(orig, choice);
    }

    // alternate t2-phases and null-phases until a full round is a no-op
    let mut rounds = 0usize;
    let round_cap = 4 * n + 4;
    loop {
        let p2 = run_phase(net, &state, Some(t2));
        max_phase_switches = max_phase_switches.max(p2.switches);
        let p0 = run_phase(net, &p2.state, None);
        max_phase_switches = max_phase_switches.max(p0.switches);
        let stable = p0.state == state;
        state = p0.state;
        if stable {
            break;
        }
        rounds += 1;
        if rounds > round_cap {
            return Err(NeError::PhaseDivergence { rounds });
        }
    }

    let kind = is_nash(net, &state);
    debug_assert!(kind.is_equilibrium());
    Ok(ConstructedNe {
        state,
        kind,
        rounds,
        max_phase_switches,
    })
}

/// Induced subnetwork on `keep` (sorted ascending): nodes are renumbered
/// densely, edges inside `keep` survive, product sets and thresholds carry
/// over. Nodes losing all in-edges become sources of the subnetwork.
fn induced_subnetwork(net: &Network, keep: &[NodeId]) -> Network {
    let mut b = Network::builder();
    b.source_payoff(net.source_payoff().clone());
    for &i in keep {
        let names: Vec<&str> = net
            .products_of(i)
            .iter()
            .map(|t| net.product_name(*t))
            .collect();
        b.node(&names).expect("non-empty product set");
    }
    for (new_i, &i) in keep.iter().enumerate() {
        for t in net.products_of(i) {
            b.theta(new_i, net.product_name(*t), net.theta(i, *t).clone())
                .expect("listed product");
        }
    }
    let index_of = |j: NodeId| keep.binary_search(&j).ok();
    for (src, dst, w) in net.edges() {
        if let (Some(s), Some(d)) = (index_of(*src), index_of(*dst)) {
            b.edge(s, d, w.clone())
                .expect("no duplicates in source network");
        }
    }
    b.build()
}

/// Equilibrium on an acyclic graph: assign along the rank order, giving
/// each node a canonical best response to its already-fixed neighbours.
/// Sources pick their first product, so the result is never all-null.
pub fn construct_ne_dag(net: &Network) -> Result<ConstructedNe, NeError> {
    let class = net.classify();
    let rank = class.dag_rank.ok_or(NeError::WrongGraphClass {
        expected: "acyclic",
    })?;
    let mut state = JointStrategy::all_null(net.node_count());
    for &i in &rank {
        let choice = best_responses(net, &state, i)
            .into_iter()
            .next()
            .expect("best response set is never empty");
        state.set(i, choice);
    }
    let kind = is_nash(net, &state);
    debug_assert!(kind.is_equilibrium());
    Ok(ConstructedNe {
        state,
        kind,
        rounds: 0,
        max_phase_switches: 0,
    })
}

/// Exhaustive social optimum over the full state space.
pub fn social_optimum(net: &Network, budget: u64) -> Result<(JointStrategy, Rational), NeError> {
    let space = StateSpace::full(net);
    space.check_budget(budget)?;
    let mut best: Option<(JointStrategy, Rational)> = None;
    space.for_each_state(|_, s| {
        let w = social_welfare(net, s);
        match &best {
            Some((_, bw)) if *bw >= w => {}
            _ => best = Some((s.clone(), w)),
        }
    });
    Ok(best.expect("state space is never empty"))
}

/// A price ratio: finite, infinite (zero denominator), or undefined (the
/// reference equilibrium welfare is negative, which no sign convention
/// covers; the raw welfares accompany the report).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriceRatio {
    Finite(Rational),
    Infinite,
    Undefined,
}

impl std::fmt::Display for PriceRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PriceRatio::Finite(r) => write!(f, "{r}"),
            PriceRatio::Infinite => write!(f, "inf"),
            PriceRatio::Undefined => write!(f, "undefined"),
        }
    }
}

fn price_ratio(optimum: &Rational, reference: &Rational) -> PriceRatio {
    if reference.is_zero() {
        PriceRatio::Infinite
    } else if reference.is_negative() {
        PriceRatio::Undefined
    } else {
        PriceRatio::Finite(optimum / reference)
    }
}

/// Price of anarchy and stability from exhaustive scans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceMetrics {
    pub optimum: JointStrategy,
    pub optimum_welfare: Rational,
    pub worst_ne: JointStrategy,
    pub worst_ne_welfare: Rational,
    pub best_ne: JointStrategy,
    pub best_ne_welfare: Rational,
    pub ne_count: u128,
    pub poa: PriceRatio,
    pub pos: PriceRatio,
}

/// Compute the social optimum, the welfare range over all equilibria, and
/// the prices of anarchy and stability. Errors when no equilibrium exists.
pub fn price_metrics(net: &Network, budget: u64) -> Result<PriceMetrics, NeError> {
    let space = StateSpace::full(net);
    space.check_budget(budget)?;

    let mut optimum: Option<(JointStrategy, Rational)> = None;
    let mut worst: Option<(JointStrategy, Rational)> = None;
    let mut best: Option<(JointStrategy, Rational)> = None;
    let mut ne_count: u128 = 0;
    space.for_each_state(|_, s| {
        let w = social_welfare(net, s);
        match &optimum {
            Some((_, bw)) if *bw >= w => {}
            _ => optimum = Some((s.clone(), w.clone())),
        }
        if is_nash(net, s).is_equilibrium() {
            ne_count += 1;
            match &worst {
                Some((_, ww)) if *ww <= w => {}
                _ => worst = Some((s.clone(), w.clone())),
            }
            match &best {
                Some((_, bw)) if *bw >= w => {}
                _ => best = Some((s.clone(), w)),
            }
        }
    });

    let (optimum, optimum_welfare) = optimum.expect("state space is never empty");
    let (worst_ne, worst_ne_welfare) = worst.ok_or(NeError::NoEquilibrium)?;
    let (best_ne, best_ne_welfare) = best.expect("worst implies best");
    let poa = price_ratio(&optimum_welfare, &worst_ne_welfare);
    let pos = price_ratio(&optimum_welfare, &best_ne_welfare);
    Ok(PriceMetrics {
        optimum,
        optimum_welfare,
        worst_ne,
        worst_ne_welfare,
        best_ne,
        best_ne_welfare,
        ne_count,
        poa,
        pos,
    })
}

/// Route an existence query by graph class: the cycle sweep on simple
/// cycles, the fixed-point procedure on source-free graphs (non-trivial
/// kind), rank-order construction on acyclic graphs, exhaustive scan
/// otherwise.
pub fn decide_existence(
    net: &Network,
    filter: KindFilter,
    budget: u64,
) -> Result<NeReport, NeError> {
    let class = net.classify();
    if class.is_simple_cycle() {
        return verify_nash_cycle(net);
    }
    match filter {
        KindFilter::Any if class.source_free => {
            let mut report = NeReport::new(NeMethod::SourceFree);
            report.any = Some(true);
            report
                .witnesses
                .push((NEKind::Trivial, JointStrategy::all_null(net.node_count())));
            Ok(report)
        }
        KindFilter::NonTrivial if class.source_free => verify_nash_source_free(net),
        KindFilter::Any | KindFilter::NonTrivial if class.is_dag() => {
            let built = construct_ne_dag(net)?;
            let mut report = NeReport::new(NeMethod::DagOrder);
            report.any = Some(true);
            // on an acyclic graph sources adopt products in any equilibrium
            report.non_trivial = Some(true);
            report.witnesses.push((built.kind, built.state));
            Ok(report)
        }
        _ => brute_force_nash(net, filter, ScanSpace::SourcesDominant, budget, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::space::DEFAULT_STATE_BUDGET;

    /// Simple cycle with per-node product sets and thresholds, one weight.
    fn cycle(product_sets: &[&[&str]], w: Rational, thetas: &[Rational]) -> Network {
        let mut b = Network::builder();
        for products in product_sets {
            b.node(products).unwrap();
        }
        for i in 0..product_sets.len() {
            b.theta_all(i, thetas[i].clone()).unwrap();
            b.edge(i, (i + 1) % product_sets.len(), w.clone()).unwrap();
        }
        b.build()
    }

    #[test]
    fn brute_small_cycle_two_equilibria() {
        // one product, weight covers threshold: all-null and all-t
        let net = cycle(
            &[&["t"], &["t"], &["t"]],
            rat(1, 2),
            &[rat(1, 4), rat(1, 4), rat(1, 4)],
        );
        let report = brute_force_nash(
            &net,
            KindFilter::Any,
            ScanSpace::Full,
            DEFAULT_STATE_BUDGET,
            None,
        )
        .unwrap();
        assert_eq!(report.states_scanned, Some(8));
        assert_eq!(report.witnesses.len(), 2);
        assert_eq!(report.any, Some(true));
        assert_eq!(report.determined, Some(true));
        let kinds: Vec<NEKind> = report.witnesses.iter().map(|(k, _)| *k).collect();
        assert!(kinds.contains(&NEKind::Trivial) && kinds.contains(&NEKind::Determined));
    }

    #[test]
    fn brute_weak_cycle_only_trivial() {
        let net = cycle(&[&["t"], &["t"]], rat(1, 4), &[rat(1, 2), rat(1, 2)]);
        let report = brute_force_nash(
            &net,
            KindFilter::Any,
            ScanSpace::Full,
            DEFAULT_STATE_BUDGET,
            None,
        )
        .unwrap();
        assert_eq!(report.witnesses.len(), 1);
        assert_eq!(report.witnesses[0].0, NEKind::Trivial);
    }

    #[test]
    fn budget_violation_reports_count() {
        let net = cycle(
            &[&["t"], &["t"], &["t"]],
            rat(1, 2),
            &[rat(1, 4), rat(1, 4), rat(1, 4)],
        );
        let err = brute_force_nash(&net, KindFilter::Any, ScanSpace::Full, 4, None).unwrap_err();
        assert_eq!(
            err,
            NeError::Budget(BudgetExceeded {
                states: 8,
                budget: 4
            })
        );
    }

    #[test]
    fn cycle_procedure_finds_shared_product() {
        let net = cycle(
            &[&["a", "b"], &["a", "c"], &["a"]],
            rat(1, 2),
            &[rat(1, 2), rat(1, 4), rat(1, 2)],
        );
        let report = verify_nash_cycle(&net).unwrap();
        assert_eq!(report.non_trivial, Some(true));
        assert_eq!(report.determined, Some(true));
        let (kind, witness) = &report.witnesses[0];
        assert_eq!(*kind, NEKind::Determined);
        assert_eq!(is_nash(&net, witness), NEKind::Determined);
    }

    #[test]
    fn cycle_procedure_rejects_when_some_threshold_too_high() {
        let net = cycle(
            &[&["a"], &["a"], &["a"]],
            rat(1, 4),
            &[rat(1, 4), rat(1, 2), rat(1, 4)],
        );
        let report = verify_nash_cycle(&net).unwrap();
        assert_eq!(report.non_trivial, Some(false));
    }

    #[test]
    fn cycle_procedure_requires_cycle() {
        let mut b = Network::builder();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.theta_all(1, rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        let chain = b.build();
        assert!(matches!(
            verify_nash_cycle(&chain),
            Err(NeError::WrongGraphClass { .. })
        ));
    }

    #[test]
    fn xt_fixed_points() {
        let mut b = Network::builder();
        b.node(&["a", "zz"]).unwrap();
        b.node(&["a"]).unwrap();
        b.theta_all(0, rat(1, 2)).unwrap();
        b.theta_all(1, rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        b.edge(1, 0, rat(1, 2)).unwrap();
        let net = b.build();
        // nobody can sustain zz: only node 0 lists it, no zz in-weight
        let zz = net.product_id("zz").unwrap();
        assert!(compute_xt(&net, zz).unwrap().members.is_empty());
        // both sustain a, already stable at round zero
        let a = net.product_id("a").unwrap();
        let xt = compute_xt(&net, a).unwrap();
        assert_eq!(xt.members, vec![0, 1]);
        assert_eq!(xt.rounds, 0);
    }

    #[test]
    fn xt_requires_source_free() {
        let mut b = Network::builder();
        b.node(&["a"]).unwrap();
        b.node(&["a"]).unwrap();
        b.theta_all(1, rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        let net = b.build();
        let a = net.product_id("a").unwrap();
        assert!(matches!(
            compute_xt(&net, a),
            Err(NeError::WrongGraphClass { .. })
        ));
    }

    #[test]
    fn source_free_witness_passes_is_nash() {
        let net = cycle(
            &[&["a"], &["a"], &["a"]],
            rat(1, 2),
            &[rat(1, 4), rat(1, 4), rat(1, 4)],
        );
        let report = verify_nash_source_free(&net).unwrap();
        assert_eq!(report.non_trivial, Some(true));
        let (kind, witness) = &report.witnesses[0];
        assert_eq!(is_nash(&net, witness), *kind);
    }

    #[test]
    fn source_free_all_thresholds_too_high() {
        let net = cycle(
            &[&["a"], &["a"], &["a"]],
            rat(1, 4),
            &[rat(1, 2), rat(1, 2), rat(1, 2)],
        );
        let report = verify_nash_source_free(&net).unwrap();
        assert_eq!(report.non_trivial, Some(false));
        assert_eq!(report.witnesses[0].0, NEKind::Trivial);
    }

    #[test]
    fn self_sustaining_two_cycle() {
        let net = cycle(&[&["a"], &["a"]], rat(1, 2), &[rat(1, 2), rat(1, 2)]);
        let a = net.product_id("a").unwrap();
        let scs = find_self_sustaining(&net, a).unwrap();
        assert_eq!(scs.members, vec![0, 1]);
        assert!(is_self_sustaining(&net, a, &scs.members));
    }

    #[test]
    fn self_sustaining_absent_on_acyclic_candidates() {
        let mut b = Network::builder();
        b.node(&["a"]).unwrap();
        b.node(&["a"]).unwrap();
        b.theta_all(0, rat(1, 2)).unwrap();
        b.theta_all(1, rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 1)).unwrap();
        let net = b.build();
        let a = net.product_id("a").unwrap();
        assert!(find_self_sustaining(&net, a).is_none());
    }

    #[test]
    fn phase_is_idempotent_and_bounded() {
        let net = cycle(
            &[&["a"], &["a"], &["a"]],
            rat(1, 2),
            &[rat(1, 4), rat(1, 4), rat(1, 4)],
        );
        let a = net.product_id("a");
        let s0 = JointStrategy::all_null(3);
        let once = run_phase(&net, &s0, a);
        let twice = run_phase(&net, &once.state, a);
        assert_eq!(once.state, twice.state);
        assert_eq!(twice.switches, 0);
        assert!(once.switches <= 3);
    }

    #[test]
    fn two_product_construction_shared_pair() {
        // chain: source -> middle -> sink, all share {a, b}
        let mut b = Network::builder();
        b.node(&["a", "b"]).unwrap();
        b.node(&["a", "b"]).unwrap();
        b.node(&["a", "b"]).unwrap();
        b.theta_all(1, rat(1, 2)).unwrap();
        b.theta_all(2, rat(1, 2)).unwrap();
        b.edge(0, 1, rat(3, 4)).unwrap();
        b.edge(1, 2, rat(3, 4)).unwrap();
        let net = b.build();
        let a = net.product_id("a").unwrap();
        let bb = net.product_id("b").unwrap();
        let built = construct_ne_two_products(&net, &[a, bb]).unwrap();
        assert!(built.kind.is_equilibrium());
        assert!(built.max_phase_switches <= 3);
    }

    #[test]
    fn cover_violation_is_rejected() {
        let mut b = Network::builder();
        b.node(&["a"]).unwrap();
        b.node(&["b"]).unwrap();
        b.node(&["c", "b"]).unwrap();
        b.theta_all(2, rat(1, 2)).unwrap();
        b.edge(0, 2, rat(1, 2)).unwrap();
        b.edge(1, 2, rat(1, 2)).unwrap();
        let net = b.build();
        let a = net.product_id("a").unwrap();
        let c = net.product_id("c").unwrap();
        assert!(matches!(
            construct_ne_two_products(&net, &[a, c]),
            Err(NeError::CoverViolated { .. })
        ));
    }

    #[test]
    fn dag_construction_yields_non_trivial_ne() {
        let mut b = Network::builder();
        b.node(&["t1"]).unwrap();
        b.node(&["t2"]).unwrap();
        b.node(&["t2"]).unwrap();
        b.theta(1, "t2", rat(1, 2)).unwrap();
        b.theta(2, "t2", rat(1, 4)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        b.edge(1, 2, rat(1, 2)).unwrap();
        let net = b.build();
        let built = construct_ne_dag(&net).unwrap();
        assert!(built.kind.is_equilibrium());
        assert!(built.state.get(0).is_some());
    }

    #[test]
    fn metrics_where_only_nontrivial_ne_is_optimum() {
        let net = cycle(&[&["a"], &["a"]], rat(1, 2), &[rat(1, 4), rat(1, 4)]);
        let m = price_metrics(&net, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(m.optimum_welfare, rat(1, 2));
        // equilibria: all-null (welfare 0) and all-a (welfare 1/2)
        assert_eq!(m.poa, PriceRatio::Infinite);
        assert_eq!(m.pos, PriceRatio::Finite(rat(1, 1)));
    }

    #[test]
    fn auto_routing_matches_manual() {
        let net = cycle(
            &[&["a"], &["a"], &["a"]],
            rat(1, 2),
            &[rat(1, 4), rat(1, 4), rat(1, 4)],
        );
        let auto = decide_existence(&net, KindFilter::NonTrivial, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(auto.method, NeMethod::Cycle);
        let brute =
            brute_force_nash(&net, KindFilter::NonTrivial, ScanSpace::Full, 1 << 20, None).unwrap();
        assert_eq!(auto.non_trivial, brute.non_trivial);
    }
}
