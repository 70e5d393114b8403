//! Machine-readable analysis reports.
//!
//! Every command surface renders either a human text form or a stable
//! JSON document; the JSON documents round-trip through [`parse_report`],
//! so downstream tooling can consume results without scraping text.
//! Joint strategies appear in their `state <node>=<product|_>` form.

use crate::dynamics::{Certificate, DynProperty, DynVerdict, SimOutcome, SimTrace};
use crate::equilibria::{NeMethod, NeReport, PriceMetrics, PriceRatio};
use crate::game::{JointStrategy, NEKind};
use crate::network::{Diagnostic, Network};
use crate::polymatrix::{EquivalenceReport, PolymatrixGame};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Any report emitted by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "kebab-case")]
pub enum Report {
    Validate(ValidateDoc),
    Ne(NeDoc),
    Dynamics(DynamicsDoc),
    Simulation(SimDoc),
    Polymatrix(PolyDoc),
    Metrics(MetricsDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateDoc {
    pub valid: bool,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub kind: NEKind,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeDoc {
    pub method: NeMethod,
    pub any: Option<bool>,
    pub non_trivial: Option<bool>,
    pub determined: Option<bool>,
    pub witnesses: Vec<WitnessDoc>,
    pub states_scanned: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchedulerEntryDoc {
    pub state: String,
    pub player: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateDoc {
    None,
    Cycle {
        states: Vec<String>,
        players: Vec<usize>,
    },
    Scheduler {
        assignments: Vec<SchedulerEntryDoc>,
    },
    BadState {
        state: String,
    },
    UnreachableState {
        state: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsDoc {
    pub property: DynProperty,
    pub holds: bool,
    pub states: usize,
    pub edges: usize,
    pub certificate: CertificateDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimStepDoc {
    pub player: usize,
    pub from: String,
    pub to: String,
    pub payoff_before: Rational,
    pub payoff_after: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimDoc {
    pub start: String,
    pub steps: Vec<SimStepDoc>,
    #[serde(flatten)]
    pub outcome: SimOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    pub state: String,
    pub player: usize,
    pub direct: Rational,
    pub polymatrix: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceDoc {
    pub holds: bool,
    pub states_checked: u64,
    pub counterexample: Option<CounterexampleDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub players: usize,
    /// Canonical table export (own text format).
    pub tables: String,
    pub verify: Option<EquivalenceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsDoc {
    pub optimum: String,
    pub optimum_welfare: Rational,
    pub worst_ne: String,
    pub worst_ne_welfare: Rational,
    pub best_ne: String,
    pub best_ne_welfare: Rational,
    pub ne_count: u64,
    pub poa: PriceRatio,
    pub pos: PriceRatio,
}

/// Serialize a report as stable, pretty-printed JSON.
pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

/// Parse a machine-format report back.
pub fn parse_report(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

fn saturate(count: u128) -> u64 {
    u64::try_from(count).unwrap_or(u64::MAX)
}

fn state_text(net: &Network, s: &JointStrategy) -> String {
    s.to_text(net)
}

pub fn validate_doc(diagnostics: Vec<Diagnostic>) -> ValidateDoc {
    ValidateDoc {
        valid: diagnostics.is_empty(),
        diagnostics,
    }
}

pub fn ne_doc(net: &Network, report: &NeReport) -> NeDoc {
    NeDoc {
        method: report.method,
        any: report.any,
        non_trivial: report.non_trivial,
        determined: report.determined,
        witnesses: report
            .witnesses
            .iter()
            .map(|(kind, s)| WitnessDoc {
                kind: *kind,
                state: state_text(net, s),
            })
            .collect(),
        states_scanned: report.states_scanned.map(saturate),
    }
}

pub fn dynamics_doc(net: &Network, verdict: &DynVerdict) -> DynamicsDoc {
    let certificate = match &verdict.certificate {
        Certificate::None => CertificateDoc::None,
        Certificate::Cycle(cycle) => CertificateDoc::Cycle {
            states: cycle.states.iter().map(|s| state_text(net, s)).collect(),
            players: cycle.players.clone(),
        },
        Certificate::Scheduler(map) => CertificateDoc::Scheduler {
            assignments: map
                .iter()
                .map(|(s, p)| SchedulerEntryDoc {
                    state: state_text(net, s),
                    player: *p,
                })
                .collect(),
        },
        Certificate::BadState(s) => CertificateDoc::BadState {
            state: state_text(net, s),
        },
        Certificate::UnreachableState(s) => CertificateDoc::UnreachableState {
            state: state_text(net, s),
        },
    };
    DynamicsDoc {
        property: verdict.property,
        holds: verdict.holds,
        states: verdict.states,
        edges: verdict.edges,
        certificate,
    }
}

pub fn sim_doc(net: &Network, trace: &SimTrace) -> SimDoc {
    let name = |c: &Option<crate::network::ProductId>| match c {
        Some(t) => net.product_name(*t).to_owned(),
        None => "_".to_owned(),
    };
    SimDoc {
        start: state_text(net, &trace.start),
        steps: trace
            .steps
            .iter()
            .map(|s| SimStepDoc {
                player: s.player,
                from: name(&s.from),
                to: name(&s.to),
                payoff_before: s.payoff_before.clone(),
                payoff_after: s.payoff_after.clone(),
            })
            .collect(),
        outcome: trace.outcome.clone(),
    }
}

pub fn poly_doc(
    net: &Network,
    game: &PolymatrixGame,
    verify: Option<&EquivalenceReport>,
) -> PolyDoc {
    PolyDoc {
        players: game.player_count(),
        tables: crate::polymatrix::serialize(net, game),
        verify: verify.map(|eq| EquivalenceDoc {
            holds: eq.holds(),
            states_checked: saturate(eq.states_checked),
            counterexample: eq.counterexample.as_ref().map(|(s, i, direct, poly)| {
                CounterexampleDoc {
                    state: state_text(net, s),
                    player: *i,
                    direct: direct.clone(),
                    polymatrix: poly.clone(),
                }
            }),
        }),
    }
}

pub fn metrics_doc(net: &Network, metrics: &PriceMetrics) -> MetricsDoc {
    MetricsDoc {
        optimum: state_text(net, &metrics.optimum),
        optimum_welfare: metrics.optimum_welfare.clone(),
        worst_ne: state_text(net, &metrics.worst_ne),
        worst_ne_welfare: metrics.worst_ne_welfare.clone(),
        best_ne: state_text(net, &metrics.best_ne),
        best_ne_welfare: metrics.best_ne_welfare.clone(),
        ne_count: saturate(metrics.ne_count),
        poa: metrics.poa.clone(),
        pos: metrics.pos.clone(),
    }
}

impl Report {
    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Validate(doc) => {
                writeln!(out, "valid: {}", doc.valid).unwrap();
                for d in &doc.diagnostics {
                    writeln!(out, "  {d}").unwrap();
                }
            }
            Report::Ne(doc) => {
                writeln!(out, "method: {}", kebab(&doc.method)).unwrap();
                let flag = |v: Option<bool>| match v {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "undecided",
                };
                writeln!(out, "any: {}", flag(doc.any)).unwrap();
                writeln!(out, "non-trivial: {}", flag(doc.non_trivial)).unwrap();
                writeln!(out, "determined: {}", flag(doc.determined)).unwrap();
                if let Some(n) = doc.states_scanned {
                    writeln!(out, "states-scanned: {n}").unwrap();
                }
                for w in &doc.witnesses {
                    writeln!(out, "witness[{}]: {}", kebab(&w.kind), w.state).unwrap();
                }
            }
            Report::Dynamics(doc) => {
                writeln!(out, "property: {}", kebab(&doc.property)).unwrap();
                writeln!(out, "holds: {}", doc.holds).unwrap();
                writeln!(out, "states: {}", doc.states).unwrap();
                writeln!(out, "edges: {}", doc.edges).unwrap();
                match &doc.certificate {
                    CertificateDoc::None => {}
                    CertificateDoc::Cycle { states, players } => {
                        writeln!(out, "certificate: cycle of length {}", players.len()).unwrap();
                        for (k, s) in states.iter().enumerate() {
                            writeln!(out, "  {k}: {s} (player {} moves)", players[k]).unwrap();
                        }
                    }
                    CertificateDoc::Scheduler { assignments } => {
                        writeln!(
                            out,
                            "certificate: scheduler over {} states",
                            assignments.len()
                        )
                        .unwrap();
                    }
                    CertificateDoc::BadState { state } => {
                        writeln!(out, "certificate: bad state {state}").unwrap();
                    }
                    CertificateDoc::UnreachableState { state } => {
                        writeln!(out, "certificate: no equilibrium reachable from {state}")
                            .unwrap();
                    }
                }
            }
            Report::Simulation(doc) => {
                writeln!(out, "start: {}", doc.start).unwrap();
                for (k, s) in doc.steps.iter().enumerate() {
                    writeln!(
                        out,
                        "{k} player={} {} -> {} payoff {}/{}",
                        s.player, s.from, s.to, s.payoff_before, s.payoff_after
                    )
                    .unwrap();
                }
                match &doc.outcome {
                    SimOutcome::ReachedNe => writeln!(out, "outcome reached-ne").unwrap(),
                    SimOutcome::Cutoff => writeln!(out, "outcome cutoff").unwrap(),
                    SimOutcome::CycleDetected { first_seen_at } => {
                        writeln!(out, "outcome cycle-detected first-seen-at={first_seen_at}")
                            .unwrap()
                    }
                }
            }
            Report::Polymatrix(doc) => {
                out.push_str(&doc.tables);
                if let Some(v) = &doc.verify {
                    writeln!(out, "equivalent: {}", v.holds).unwrap();
                    writeln!(out, "states-checked: {}", v.states_checked).unwrap();
                    if let Some(c) = &v.counterexample {
                        writeln!(
                            out,
                            "counterexample: {} player {} direct {} polymatrix {}",
                            c.state, c.player, c.direct, c.polymatrix
                        )
                        .unwrap();
                    }
                }
            }
            Report::Metrics(doc) => {
                writeln!(out, "optimum-welfare: {}", doc.optimum_welfare).unwrap();
                writeln!(out, "optimum: {}", doc.optimum).unwrap();
                writeln!(out, "ne-count: {}", doc.ne_count).unwrap();
                writeln!(out, "worst-ne-welfare: {}", doc.worst_ne_welfare).unwrap();
                writeln!(out, "best-ne-welfare: {}", doc.best_ne_welfare).unwrap();
                writeln!(out, "poa: {}", doc.poa).unwrap();
                writeln!(out, "pos: {}", doc.pos).unwrap();
            }
        }
        out
    }
}

fn kebab<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value).expect("enum serializes") {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria;
    use crate::game::KindFilter;
    use crate::rational::rat;

    fn net() -> Network {
        let mut b = Network::builder();
        b.node(&["t"]).unwrap();
        b.node(&["t"]).unwrap();
        b.theta_all(0, rat(1, 4)).unwrap();
        b.theta_all(1, rat(1, 4)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        b.edge(1, 0, rat(1, 2)).unwrap();
        b.build()
    }

    #[test]
    fn ne_report_round_trips_through_json() {
        let net = net();
        let inner = equilibria::brute_force_nash(
            &net,
            KindFilter::Any,
            equilibria::ScanSpace::Full,
            1 << 20,
            None,
        )
        .unwrap();
        let report = Report::Ne(ne_doc(&net, &inner));
        let json = render_json(&report);
        let parsed = parse_report(&json).unwrap();
        assert_eq!(parsed, report);
        assert!(report.to_text().contains("method: brute"));
    }

    #[test]
    fn dynamics_report_round_trips() {
        let net = net();
        let verdict = crate::dynamics::has_fip(&net, 1 << 20).unwrap();
        let report = Report::Dynamics(dynamics_doc(&net, &verdict));
        let parsed = parse_report(&render_json(&report)).unwrap();
        assert_eq!(parsed, report);
    }
}
