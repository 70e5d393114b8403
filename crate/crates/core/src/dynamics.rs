//! Improvement-path dynamics over explicit state graphs.
//!
//! The state graph has one node per joint strategy and one edge per legal
//! unilateral deviation: in improvement mode any strictly improving switch,
//! in best-response mode only switches onto a best response (such a switch
//! is improving exactly when the player was not already best-responding).
//! Terminal states coincide with the Nash equilibria in both modes, so on
//! a finite game:
//!
//! - finite improvement / finite best-response behaviour is acyclicity of
//!   the respective graph;
//! - scheduler-forced termination is an attractor fixed point (grow the
//!   good set by states where some player's every deviation lands in it);
//! - weak acyclicity is backward reachability from the terminals.
//!
//! Certificates re-verify: a cycle is replayed move by move, and a
//! scheduler witness induces a single-player restriction of the graph
//! that must be acyclic.

use crate::game::{self, better_responses, is_nash, payoff, Choice, JointStrategy};
use crate::graph;
use crate::network::{Network, NodeId};
use crate::rational::Rational;
use crate::space::{BudgetExceeded, StateSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("operation requires a {expected} network")]
    WrongGraphClass { expected: &'static str },
    #[error("scheduler has no applicable player in a non-equilibrium state")]
    SchedulerStuck { state: String },
    #[error("scheduler selected player {player}, who has no better response")]
    SchedulerContract { state: String, player: NodeId },
}

/// Deviation discipline of a state graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepMode {
    /// Any strictly improving unilateral switch.
    Improvement,
    /// Strictly improving switches onto best responses only.
    BestResponse,
}

/// One outgoing deviation edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateEdge {
    pub player: NodeId,
    pub to: usize,
}

/// Explicit graph over all joint strategies.
pub struct StateGraph {
    space: StateSpace,
    mode: StepMode,
    edges: Vec<Vec<StateEdge>>,
    edge_count: usize,
}

impl StateGraph {
    pub fn mode(&self) -> StepMode {
        self.mode
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn state_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn edges_of(&self, state: usize) -> &[StateEdge] {
        &self.edges[state]
    }

    /// Terminal states have no outgoing deviation; they are exactly the
    /// equilibria.
    pub fn is_terminal(&self, state: usize) -> bool {
        self.edges[state].is_empty()
    }

    pub fn state_at(&self, index: usize) -> JointStrategy {
        self.space.state_at(index)
    }

    pub fn index_of(&self, s: &JointStrategy) -> Option<usize> {
        self.space.index_of(s)
    }

    /// Longest path length in edges; `None` when the graph has a cycle.
    pub fn longest_path_edges(&self) -> Option<usize> {
        let adj: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|es| es.iter().map(|e| e.to).collect())
            .collect();
        let order = graph::topological_order(&adj)?;
        let mut dist = vec![0usize; adj.len()];
        for &v in order.iter().rev() {
            for &w in &adj[v] {
                dist[v] = dist[v].max(dist[w] + 1);
            }
        }
        Some(dist.into_iter().max().unwrap_or(0))
    }

    /// Find a deviation cycle, deterministic depth-first order. The
    /// returned certificate closes: the last player moves the last state
    /// back onto the first.
    pub fn find_cycle(&self) -> Option<CycleCert> {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let n = self.state_count();
        let mut color = vec![Color::White; n];
        for start in 0..n {
            if color[start] != Color::White {
                continue;
            }
            // stack entries: (state, incoming player from stack parent)
            let mut stack: Vec<(usize, NodeId, usize)> = vec![(start, usize::MAX, 0)];
            color[start] = Color::Gray;
            while let Some(&mut (state, _, ref mut next)) = stack.last_mut() {
                if *next < self.edges[state].len() {
                    let edge = self.edges[state][*next];
                    *next += 1;
                    match color[edge.to] {
                        Color::White => {
                            color[edge.to] = Color::Gray;
                            stack.push((edge.to, edge.player, 0));
                        }
                        Color::Gray => {
                            // closing edge found: cycle from edge.to up to state
                            let from = stack
                                .iter()
                                .position(|&(s, _, _)| s == edge.to)
                                .expect("gray states are on the stack");
                            let mut states = Vec::new();
                            let mut players = Vec::new();
                            for k in from..stack.len() {
                                states.push(self.state_at(stack[k].0));
                                if k + 1 < stack.len() {
                                    players.push(stack[k + 1].1);
                                }
                            }
                            players.push(edge.player);
                            return Some(CycleCert { states, players });
                        }
                        Color::Black => {}
                    }
                } else {
                    color[state] = Color::Black;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// A closed deviation walk: `players[k]` moves `states[k]` to
/// `states[k + 1]` (wrapping).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCert {
    pub states: Vec<JointStrategy>,
    pub players: Vec<NodeId>,
}

impl CycleCert {
    pub fn len(&self) -> usize {
        self.players.len()
    }

    pub fn is_empty(&self) -> bool {
        self.players.is_empty()
    }

    /// Replay every move against the payoff definition.
    pub fn verify(&self, net: &Network, mode: StepMode) -> bool {
        if self.states.len() != self.players.len() || self.states.is_empty() {
            return false;
        }
        for k in 0..self.states.len() {
            let from = &self.states[k];
            let to = &self.states[(k + 1) % self.states.len()];
            if !verify_step(net, mode, from, self.players[k], to) {
                return false;
            }
        }
        true
    }
}

/// Check that `to` differs from `from` in exactly the mover's entry and
/// that the move is legal under `mode`.
fn verify_step(
    net: &Network,
    mode: StepMode,
    from: &JointStrategy,
    mover: NodeId,
    to: &JointStrategy,
) -> bool {
    if from.len() != to.len() || from.get(mover) == to.get(mover) {
        return false;
    }
    if (0..from.len()).any(|i| i != mover && from.get(i) != to.get(i)) {
        return false;
    }
    let improved = payoff(net, to, mover) > payoff(net, from, mover);
    match mode {
        StepMode::Improvement => improved,
        StepMode::BestResponse => {
            improved && game::best_responses(net, from, mover).contains(&to.get(mover))
        }
    }
}

/// Build the complete deviation graph within the state budget.
pub fn build_state_graph(
    net: &Network,
    mode: StepMode,
    budget: u64,
) -> Result<StateGraph, DynError> {
    let space = StateSpace::full(net);
    let total = space.check_budget(budget)?;
    let n = net.node_count();

    // place-value strides for O(1) successor indices
    let mut stride = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * space.strategies_of(i + 1).len();
    }

    let mut edges: Vec<Vec<StateEdge>> = vec![Vec::new(); total];
    let mut edge_count = 0usize;
    space.for_each_state(|idx, s| {
        let mut out = Vec::new();
        for i in 0..n {
            let strategies = space.strategies_of(i);
            let values = game::strategy_values(net, s, i, strategies);
            let cur = space
                .choice_index(i, s.get(i))
                .expect("state drawn from this space");
            let best = values.iter().max().expect("strategy list is never empty");
            for (k, v) in values.iter().enumerate() {
                if k == cur || *v <= values[cur] {
                    continue;
                }
                if mode == StepMode::BestResponse && v != best {
                    continue;
                }
                // replace digit `cur` by `k` at node i's place value
                let to = idx + k * stride[i] - cur * stride[i];
                out.push(StateEdge { player: i, to });
            }
        }
        edge_count += out.len();
        edges[idx] = out;
    });

    Ok(StateGraph {
        space,
        mode,
        edges,
        edge_count,
    })
}

/// Property being decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynProperty {
    Fip,
    Fbrp,
    UniformFip,
    WeaklyAcyclic,
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    None,
    /// Closed deviation walk disproving finiteness.
    Cycle(CycleCert),
    /// Per-state player choices forcing termination from everywhere.
    Scheduler(Vec<(JointStrategy, NodeId)>),
    /// A state outside the attractor: no scheduler terminates from here.
    BadState(JointStrategy),
    /// A state from which no equilibrium is reachable.
    UnreachableState(JointStrategy),
}

/// Outcome of a dynamics decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynVerdict {
    pub property: DynProperty,
    pub holds: bool,
    pub certificate: Certificate,
    pub states: usize,
    pub edges: usize,
}

/// Every improvement path is finite, i.e. the improvement graph is
/// acyclic. A failure carries a replayable cycle.
pub fn has_fip(net: &Network, budget: u64) -> Result<DynVerdict, DynError> {
    acyclicity_verdict(net, StepMode::Improvement, DynProperty::Fip, budget)
}

/// Every best-response improvement path is finite.
pub fn has_fbrp(net: &Network, budget: u64) -> Result<DynVerdict, DynError> {
    acyclicity_verdict(net, StepMode::BestResponse, DynProperty::Fbrp, budget)
}

fn acyclicity_verdict(
    net: &Network,
    mode: StepMode,
    property: DynProperty,
    budget: u64,
) -> Result<DynVerdict, DynError> {
    let g = build_state_graph(net, mode, budget)?;
    let certificate = match g.find_cycle() {
        Some(cycle) => {
            debug_assert!(cycle.verify(net, mode));
            Certificate::Cycle(cycle)
        }
        None => Certificate::None,
    };
    Ok(DynVerdict {
        property,
        holds: matches!(certificate, Certificate::None),
        certificate,
        states: g.state_count(),
        edges: g.edge_count(),
    })
}

/// Core attractor computation: grow the good set from the terminals by
/// adding any state where some deviating player's every `mode`-edge lands
/// in the good set; that player choice is the scheduler. All states good
/// means some scheduler forces termination from everywhere; a state left
/// outside defeats every scheduler.
fn uniform_attractor(g: &StateGraph) -> (Vec<bool>, Vec<Option<NodeId>>) {
    let n = g.state_count();
    let mut good: Vec<bool> = (0..n).map(|s| g.is_terminal(s)).collect();
    let mut choice: Vec<Option<NodeId>> = vec![None; n];
    loop {
        let mut changed = false;
        for s in 0..n {
            if good[s] {
                continue;
            }
            let es = g.edges_of(s);
            let mut k = 0;
            while k < es.len() {
                let player = es[k].player;
                let mut all_good = true;
                let mut j = k;
                while j < es.len() && es[j].player == player {
                    all_good &= good[es[j].to];
                    j += 1;
                }
                if all_good {
                    good[s] = true;
                    choice[s] = Some(player);
                    changed = true;
                    break;
                }
                k = j;
            }
        }
        if !changed {
            return (good, choice);
        }
    }
}

/// Decide whether some scheduler makes every respecting improvement path
/// finite. The witness scheduler is memoryless; the scheduled player may
/// answer with any better response, so the attractor quantifies over all
/// of them.
pub fn has_uniform_fip(net: &Network, budget: u64) -> Result<DynVerdict, DynError> {
    uniform_fip_mode(net, StepMode::Improvement, budget)
}

/// Attractor decision over a chosen successor discipline. Restricting the
/// scheduled player to best responses yields the same verdict on every
/// finite game; both directions are exercised in tests.
pub fn uniform_fip_mode(
    net: &Network,
    mode: StepMode,
    budget: u64,
) -> Result<DynVerdict, DynError> {
    let g = build_state_graph(net, mode, budget)?;
    let (good, choice) = uniform_attractor(&g);
    let verdict = match good.iter().position(|ok| !ok) {
        None => {
            let witness: Vec<(JointStrategy, NodeId)> = choice
                .iter()
                .enumerate()
                .filter_map(|(s, c)| c.map(|p| (g.state_at(s), p)))
                .collect();
            DynVerdict {
                property: DynProperty::UniformFip,
                holds: true,
                certificate: Certificate::Scheduler(witness),
                states: g.state_count(),
                edges: g.edge_count(),
            }
        }
        Some(bad) => DynVerdict {
            property: DynProperty::UniformFip,
            holds: false,
            certificate: Certificate::BadState(g.state_at(bad)),
            states: g.state_count(),
            edges: g.edge_count(),
        },
    };
    Ok(verdict)
}

/// Restrict the graph to the witness player per state and check
/// acyclicity; validates scheduler certificates independently of the
/// attractor run.
pub fn scheduler_witness_is_acyclic(
    net: &Network,
    witness: &[(JointStrategy, NodeId)],
    budget: u64,
) -> Result<bool, DynError> {
    let g = build_state_graph(net, StepMode::Improvement, budget)?;
    let mut chosen: Vec<Option<NodeId>> = vec![None; g.state_count()];
    for (state, player) in witness {
        match g.index_of(state) {
            Some(idx) => chosen[idx] = Some(*player),
            None => return Ok(false),
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.state_count()];
    for s in 0..g.state_count() {
        // non-terminal states must carry a choice that can actually move
        let Some(player) = chosen[s] else {
            if !g.is_terminal(s) {
                return Ok(false);
            }
            continue;
        };
        let mut any = false;
        for e in g.edges_of(s) {
            if e.player == player {
                adj[s].push(e.to);
                any = true;
            }
        }
        if !any {
            return Ok(false);
        }
    }
    Ok(graph::topological_order(&adj).is_some())
}

/// Every state can reach some equilibrium along improvement steps,
/// decided by backward reachability from the terminals.
pub fn is_weakly_acyclic(net: &Network, budget: u64) -> Result<DynVerdict, DynError> {
    let g = build_state_graph(net, StepMode::Improvement, budget)?;
    let n = g.state_count();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seeds = Vec::new();
    for s in 0..n {
        if g.is_terminal(s) {
            seeds.push(s);
        }
        for e in g.edges_of(s) {
            rev[e.to].push(s);
        }
    }
    let can_reach = graph::reachable_from(&rev, &seeds);
    let verdict = match can_reach.iter().position(|ok| !ok) {
        None => DynVerdict {
            property: DynProperty::WeaklyAcyclic,
            holds: true,
            certificate: Certificate::None,
            states: n,
            edges: g.edge_count(),
        },
        Some(stuck) => DynVerdict {
            property: DynProperty::WeaklyAcyclic,
            holds: false,
            certificate: Certificate::UnreachableState(g.state_at(stuck)),
            states: n,
            edges: g.edge_count(),
        },
    };
    Ok(verdict)
}

/// No equilibrium is reachable from `start` in the improvement graph.
pub fn no_ne_reachable_from(
    net: &Network,
    start: &JointStrategy,
    budget: u64,
) -> Result<bool, DynError> {
    let g = build_state_graph(net, StepMode::Improvement, budget)?;
    let adj: Vec<Vec<usize>> = g
        .edges
        .iter()
        .map(|es| es.iter().map(|e| e.to).collect())
        .collect();
    let idx = g.index_of(start).expect("start belongs to the state space");
    let reach = graph::reachable_from(&adj, &[idx]);
    Ok((0..g.state_count()).all(|s| !reach[s] || !g.is_terminal(s)))
}

/// True when every strongly connected component of the underlying graph
/// has at most two nodes (a two-node component always carries the mutual
/// edge pair). Such games always terminate, so exhaustive analysis can be
/// skipped for them.
pub fn check_scc2_fip(net: &Network) -> bool {
    graph::strongly_connected_components(net.out_adjacency())
        .iter()
        .all(|c| c.len() <= 2)
}

/// Finite best-response behaviour on a simple cycle, decided without the
/// state graph: with at least three nodes it fails exactly when some
/// product is unanimously held at strictly positive payoff, or two
/// products are unanimously held at non-negative payoff (rotating such a
/// profile never ends). Two-node cycles always terminate.
pub fn fbrp_cycle_decision(net: &Network) -> Result<bool, DynError> {
    let class = net.classify();
    let order = class.cycle_order.ok_or(DynError::WrongGraphClass {
        expected: "simple cycle",
    })?;
    if order.len() == 2 {
        return Ok(true);
    }
    let mut determined = 0usize;
    let mut strict = false;
    for t in net.all_products() {
        let mut all_ok = true;
        let mut all_strict = true;
        for &i in &order {
            if !net.node_has_product(i, t) {
                all_ok = false;
                break;
            }
            let (_, w) = &net.neighbours(i)[0];
            if w < net.theta(i, t) {
                all_ok = false;
                break;
            }
            all_strict &= w > net.theta(i, t);
        }
        if all_ok {
            determined += 1;
            strict |= all_strict;
        }
    }
    Ok(!(strict || determined >= 2))
}

/// Scheduling policy: maps a non-equilibrium state to a player who is not
/// best-responding. Ordered policies scan a fixed priority list; round
/// robin remembers a cursor; the seeded policy draws uniformly among
/// deviating players; explicit maps are exact.
#[derive(Debug, Clone)]
pub enum Scheduler {
    /// First player in the order with a better response.
    OrderedFirstUnsatisfied(Vec<NodeId>),
    /// First player in the order with strictly negative payoff. Such a
    /// player always has a better response (the null strategy). On
    /// networks where non-equilibrium states can have all payoffs
    /// non-negative this policy can be stuck.
    FirstNegativePayoff(Vec<NodeId>),
    /// Cyclic scan resuming after the previously scheduled player.
    RoundRobin,
    /// Uniform draw among players with a better response.
    SeededRandom(u64),
    /// Exact assignment; simulation fails on a missing state.
    Explicit(HashMap<JointStrategy, NodeId>),
}

impl Scheduler {
    /// Identity order 0..n.
    pub fn ordered(net: &Network) -> Self {
        Scheduler::OrderedFirstUnsatisfied((0..net.node_count()).collect())
    }
}

/// How the scheduled player answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResponseRule {
    /// First better response in canonical order (products first, null
    /// last).
    AnyBetter,
    /// Best response, ties broken towards products in interned order,
    /// null last.
    Best,
}

/// One simulated deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimStep {
    pub player: NodeId,
    pub from: Choice,
    pub to: Choice,
    pub payoff_before: Rational,
    pub payoff_after: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum SimOutcome {
    /// Terminated in an equilibrium.
    ReachedNe,
    /// Step limit hit first.
    Cutoff,
    /// A joint strategy repeated; the certificate of the closed walk is
    /// the trace segment since its first visit.
    CycleDetected { first_seen_at: usize },
}

/// Full simulation record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimTrace {
    pub start: JointStrategy,
    pub steps: Vec<SimStep>,
    pub outcome: SimOutcome,
}

impl SimTrace {
    /// Text form, one line per step:
    /// `<k> player=<i> <from> -> <to> payoff <p>/<p'>`.
    pub fn to_text(&self, net: &Network) -> String {
        use std::fmt::Write as _;
        let name = |c: &Choice| match c {
            Some(t) => net.product_name(*t).to_owned(),
            None => "_".to_owned(),
        };
        let mut out = String::new();
        for (k, step) in self.steps.iter().enumerate() {
            writeln!(
                out,
                "{k} player={} {} -> {} payoff {}/{}",
                step.player,
                name(&step.from),
                name(&step.to),
                step.payoff_before,
                step.payoff_after
            )
            .unwrap();
        }
        let outcome = match &self.outcome {
            SimOutcome::ReachedNe => "reached-ne".to_owned(),
            SimOutcome::Cutoff => "cutoff".to_owned(),
            SimOutcome::CycleDetected { first_seen_at } => {
                format!("cycle-detected first-seen-at={first_seen_at}")
            }
        };
        writeln!(out, "outcome {outcome}").unwrap();
        out
    }
}

/// Follow the scheduler from `start` until an equilibrium, a repeated
/// state, or the step cap. Deterministic for a fixed scheduler seed.
pub fn simulate(
    net: &Network,
    start: &JointStrategy,
    scheduler: &Scheduler,
    rule: ResponseRule,
    max_steps: usize,
) -> Result<SimTrace, DynError> {
    assert!(start.well_formed(net), "ill-formed start state");
    let mut state = start.clone();
    let mut steps = Vec::new();
    let mut seen: HashMap<JointStrategy, usize> = HashMap::new();
    seen.insert(state.clone(), 0);

    let mut cursor = 0usize; // round-robin position
    let mut rng = match scheduler {
        Scheduler::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };

    loop {
        if is_nash(net, &state).is_equilibrium() {
            return Ok(SimTrace {
                start: start.clone(),
                steps,
                outcome: SimOutcome::ReachedNe,
            });
        }
        if steps.len() >= max_steps {
            return Ok(SimTrace {
                start: start.clone(),
                steps,
                outcome: SimOutcome::Cutoff,
            });
        }

        let player = pick_player(net, &state, scheduler, &mut cursor, &mut rng)?;
        let options = better_responses(net, &state, player);
        if options.is_empty() {
            return Err(DynError::SchedulerContract {
                state: state.to_text(net),
                player,
            });
        }
        let to = match rule {
            ResponseRule::AnyBetter => options[0],
            ResponseRule::Best => *game::best_responses(net, &state, player)
                .iter()
                .find(|c| options.contains(c))
                .expect("a non-best-responding player improves onto any best response"),
        };

        let payoff_before = payoff(net, &state, player);
        let from = state.get(player);
        state.set(player, to);
        let payoff_after = payoff(net, &state, player);
        debug_assert!(payoff_after > payoff_before);
        steps.push(SimStep {
            player,
            from,
            to,
            payoff_before,
            payoff_after,
        });

        let step_no = steps.len();
        if let Some(first) = seen.insert(state.clone(), step_no) {
            return Ok(SimTrace {
                start: start.clone(),
                steps,
                outcome: SimOutcome::CycleDetected {
                    first_seen_at: first,
                },
            });
        }
    }
}

fn pick_player(
    net: &Network,
    state: &JointStrategy,
    scheduler: &Scheduler,
    cursor: &mut usize,
    rng: &mut Option<ChaCha8Rng>,
) -> Result<NodeId, DynError> {
    let stuck = || DynError::SchedulerStuck {
        state: state.to_text(net),
    };
    match scheduler {
        Scheduler::OrderedFirstUnsatisfied(order) => order
            .iter()
            .copied()
            .find(|&i| game::has_better_response(net, state, i))
            .ok_or_else(stuck),
        Scheduler::FirstNegativePayoff(order) => order
            .iter()
            .copied()
            .find(|&i| payoff(net, state, i).is_negative())
            .ok_or_else(stuck),
        Scheduler::RoundRobin => {
            let n = net.node_count();
            for k in 0..n {
                let i = (*cursor + k) % n;
                if game::has_better_response(net, state, i) {
                    *cursor = (i + 1) % n;
                    return Ok(i);
                }
            }
            Err(stuck())
        }
        Scheduler::SeededRandom(_) => {
            let candidates: Vec<NodeId> = (0..net.node_count())
                .filter(|&i| game::has_better_response(net, state, i))
                .collect();
            if candidates.is_empty() {
                return Err(stuck());
            }
            let rng = rng.as_mut().expect("rng initialised for seeded scheduler");
            Ok(candidates[rng.gen_range(0..candidates.len())])
        }
        Scheduler::Explicit(map) => {
            let player = *map.get(state).ok_or_else(stuck)?;
            Ok(player)
        }
    }
}

/// Draw a uniformly random well-formed joint strategy.
pub fn random_state(net: &Network, seed: u64) -> JointStrategy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = StateSpace::full(net);
    let choices = (0..net.node_count())
        .map(|i| {
            let options = space.strategies_of(i);
            options[rng.gen_range(0..options.len())]
        })
        .collect();
    JointStrategy(choices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets;
    use crate::network::Network;
    use crate::rational::rat;
    use crate::space::DEFAULT_STATE_BUDGET;

    fn two_cycle() -> Network {
        let mut b = Network::builder();
        b.node(&["t1", "t2"]).unwrap();
        b.node(&["t1", "t2"]).unwrap();
        b.theta_all(0, rat(1, 4)).unwrap();
        b.theta_all(1, rat(1, 4)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        b.edge(1, 0, rat(1, 2)).unwrap();
        b.build()
    }

    #[test]
    fn two_cycle_graph_matches_hand_enumeration() {
        // 3 strategies each: 9 states; hand count of improvement moves
        let net = two_cycle();
        let g = build_state_graph(&net, StepMode::Improvement, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(g.state_count(), 9);
        // hand enumeration: per state and player, moves with strict gain:
        //   (t1,t1): none for either player (payoff 1/4; others negative)
        //   (t1,t2): both players may switch product (-1/4 -> 1/4) or
        //            leave (-1/4 -> 0): 4 edges; symmetric for (t2,t1)
        //   (t2,t2): none
        //   (t1,_): player 0 leaves (-1/4 -> 0); player 1 joins t1
        //           (0 -> 1/4): 2 edges; same for the other three
        //           product/null states
        //   (_,_): terminal
        assert_eq!(g.edge_count(), 4 + 4 + 2 * 4);
        let ne_states: Vec<usize> = (0..9).filter(|&s| g.is_terminal(s)).collect();
        // terminals: (t1,t1), (t2,t2), (_,_)
        assert_eq!(ne_states.len(), 3);
        for s in 0..9 {
            let kind = is_nash(&net, &g.state_at(s));
            assert_eq!(kind.is_equilibrium(), g.is_terminal(s));
        }
        // two-player games always terminate
        assert!(g.find_cycle().is_none());
        assert!(g.longest_path_edges().is_some());

        // with a single shared product the space shrinks to 4 states
        let mut b = Network::builder();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.theta_all(0, rat(1, 4)).unwrap();
        b.theta_all(1, rat(1, 4)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        b.edge(1, 0, rat(1, 2)).unwrap();
        let single = b.build();
        let g1 = build_state_graph(&single, StepMode::Improvement, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(g1.state_count(), 4);
    }

    #[test]
    fn fip_holds_on_two_cycle_and_fails_on_triangle_gadget() {
        let net = two_cycle();
        assert!(has_fip(&net, DEFAULT_STATE_BUDGET).unwrap().holds);

        let tri = gadgets::gen_triangle_no_ne(&rat(1, 4), &rat(1, 3), &rat(1, 8)).unwrap();
        let verdict = has_fip(&tri, DEFAULT_STATE_BUDGET).unwrap();
        assert!(!verdict.holds);
        match verdict.certificate {
            Certificate::Cycle(cycle) => {
                assert!(cycle.verify(&tri, StepMode::Improvement));
            }
            other => panic!("expected cycle certificate, got {other:?}"),
        }
    }

    #[test]
    fn uniform_fip_on_simple_cycle_with_witness() {
        let net = gadgets::gen_br_cycle(gadgets::BrCycleKind::TwoProduct, 3).unwrap();
        // best-response cycling exists, so finiteness fails outright
        assert!(!has_fbrp(&net, DEFAULT_STATE_BUDGET).unwrap().holds);
        // yet a scheduler can force termination on any simple cycle
        let verdict = has_uniform_fip(&net, DEFAULT_STATE_BUDGET).unwrap();
        assert!(verdict.holds);
        let Certificate::Scheduler(witness) = &verdict.certificate else {
            panic!("expected scheduler witness");
        };
        assert!(scheduler_witness_is_acyclic(&net, witness, DEFAULT_STATE_BUDGET).unwrap());
    }

    #[test]
    fn weak_acyclicity_separations() {
        let wa = gadgets::gen_weakly_acyclic();
        assert!(is_weakly_acyclic(&wa, DEFAULT_STATE_BUDGET).unwrap().holds);
        assert!(!has_uniform_fip(&wa, DEFAULT_STATE_BUDGET).unwrap().holds);

        let nwa = gadgets::gen_not_weakly_acyclic();
        let verdict = is_weakly_acyclic(&nwa, DEFAULT_STATE_BUDGET).unwrap();
        assert!(!verdict.holds);
        match verdict.certificate {
            Certificate::UnreachableState(state) => {
                assert!(no_ne_reachable_from(&nwa, &state, DEFAULT_STATE_BUDGET).unwrap());
            }
            other => panic!("expected unreachable state, got {other:?}"),
        }
    }

    #[test]
    fn scc2_routing() {
        let mut b = Network::builder();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.theta_all(1, rat(1, 2)).unwrap();
        b.theta_all(2, rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 4)).unwrap();
        b.edge(1, 2, rat(1, 4)).unwrap();
        let dag = b.build();
        assert!(check_scc2_fip(&dag));

        let tri = gadgets::gen_triangle_no_ne(&rat(1, 4), &rat(1, 3), &rat(1, 8)).unwrap();
        assert!(!check_scc2_fip(&tri));

        let twinned = gadgets::gen_no_source_infinite();
        // pairs are two-node components, but the triangle is a three-cycle
        assert!(!check_scc2_fip(&twinned));
    }

    #[test]
    fn simulate_ordered_reaches_ne_on_cycle() {
        let net = gadgets::gen_br_cycle(gadgets::BrCycleKind::SingleProduct, 4).unwrap();
        let t1 = net.product_id("t1").unwrap();
        // the rotating profile: everyone on the product except the last
        let mut start = JointStrategy(vec![Some(t1); 4]);
        start.set(3, None);
        let trace = simulate(
            &net,
            &start,
            &Scheduler::ordered(&net),
            ResponseRule::Best,
            10_000,
        )
        .unwrap();
        assert_eq!(trace.outcome, SimOutcome::ReachedNe);
    }

    #[test]
    fn simulate_detects_cycles() {
        let tri = gadgets::gen_triangle_no_ne(&rat(1, 4), &rat(1, 3), &rat(1, 8)).unwrap();
        let start = random_state(&tri, 7);
        let trace = simulate(
            &tri,
            &start,
            &Scheduler::ordered(&tri),
            ResponseRule::Best,
            10_000,
        )
        .unwrap();
        assert!(matches!(trace.outcome, SimOutcome::CycleDetected { .. }));
        let text = trace.to_text(&tri);
        assert!(text.contains("player="));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn negative_payoff_scheduler_can_be_stuck() {
        // a source abstaining is not best-responding yet earns zero
        let mut b = Network::builder();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.theta_all(1, rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        let net = b.build();
        let start = JointStrategy::all_null(2);
        let order: Vec<NodeId> = vec![0, 1];
        let err = simulate(
            &net,
            &start,
            &Scheduler::FirstNegativePayoff(order),
            ResponseRule::Best,
            100,
        )
        .unwrap_err();
        assert!(matches!(err, DynError::SchedulerStuck { .. }));
    }

    #[test]
    fn fbrp_cycle_decision_matches_examples() {
        // strictly positive determined profile: fails
        let pos = gadgets::gen_br_cycle(gadgets::BrCycleKind::SingleProduct, 3).unwrap();
        assert!(!fbrp_cycle_decision(&pos).unwrap());
        // two zero-payoff determined profiles: fails
        let two = gadgets::gen_br_cycle(gadgets::BrCycleKind::TwoProduct, 3).unwrap();
        assert!(!fbrp_cycle_decision(&two).unwrap());
        // single zero-payoff determined profile: holds
        let mut b = Network::builder();
        for _ in 0..3 {
            b.node(&["t"]).unwrap();
        }
        for i in 0..3 {
            b.theta_all(i, rat(1, 2)).unwrap();
            b.edge(i, (i + 1) % 3, rat(1, 2)).unwrap();
        }
        let zero = b.build();
        assert!(fbrp_cycle_decision(&zero).unwrap());
        assert!(has_fbrp(&zero, DEFAULT_STATE_BUDGET).unwrap().holds);
    }
}
