//! File-driven analysis of product-adoption games on weighted directed
//! networks.
//!
//! Exit codes: 0 when the queried property holds (equilibrium exists,
//! network valid, simulation reached an equilibrium, payoffs equivalent);
//! 1 when it fails; 2 on usage, parse or budget errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sngame_core::dynamics::{self, ResponseRule, Scheduler};
use sngame_core::equilibria::{self, NeError, NeReport, ScanSpace};
use sngame_core::gadgets::{self, BrCycleKind, PartitionInstance};
use sngame_core::game::KindFilter;
use sngame_core::polymatrix;
use sngame_core::report::{self, Report};
use sngame_core::{format, JointStrategy, Network, NodeId, Rational, DEFAULT_STATE_BUDGET};
use std::io::Read as _;

const EXIT_HOLDS: i32 = 0;
const EXIT_FAILS: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "sngame",
    version,
    about = "Analyze product-adoption games on networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Machine,
}

#[derive(Args)]
struct Common {
    /// Output format: human text or a stable JSON report.
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Any,
    Nontrivial,
    Determined,
}

impl From<KindArg> for KindFilter {
    fn from(value: KindArg) -> Self {
        match value {
            KindArg::Any => KindFilter::Any,
            KindArg::Nontrivial => KindFilter::NonTrivial,
            KindArg::Determined => KindFilter::Determined,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Cycle,
    Sourcefree,
    TwoProduct,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Fip,
    Fbrp,
    Ufip,
    Weak,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchedulerArg {
    /// First node in the order without a best response.
    Ordered,
    /// First node in the order with strictly negative payoff.
    Negative,
    /// Cyclic scan resuming after the last scheduled node.
    RoundRobin,
    /// Seeded uniform choice among deviating nodes.
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ResponseArg {
    Best,
    AnyBetter,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network file against the model requirements.
    Validate {
        /// Network file (`-` for stdin).
        path: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide Nash equilibrium existence.
    Ne {
        path: String,
        #[arg(long, value_enum, default_value = "any")]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Products for the two-product method (comma separated); found
        /// automatically when omitted.
        #[arg(long)]
        products: Option<String>,
        /// Pin single-product sources during brute-force scans.
        #[arg(long)]
        sources_dominant: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide an improvement-path property.
    Dynamics {
        path: String,
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Follow a scheduler from a start state and trace the path.
    Simulate {
        path: String,
        /// Start state, e.g. `0=t1 1=_ 2=t2` (the `state` prefix is
        /// optional).
        #[arg(long, conflicts_with = "random")]
        start: Option<String>,
        /// Draw a random start state instead.
        #[arg(long)]
        random: bool,
        #[arg(long, value_enum, default_value = "ordered")]
        scheduler: SchedulerArg,
        /// Node priority order for the ordered schedulers, comma
        /// separated; defaults to ascending ids.
        #[arg(long)]
        order: Option<String>,
        #[arg(long, value_enum, default_value = "best")]
        response: ResponseArg,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Export the payoff-equivalent polymatrix game.
    Polymatrix {
        path: String,
        /// Also check payoff equality (exhaustive within budget).
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a generator network.
    Gen {
        #[command(subcommand)]
        gadget: GadgetCommand,
    },
    /// Price of anarchy and stability via exhaustive scans.
    Metrics {
        path: String,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Triangle fed by three sources; no equilibrium exists.
    TriangleNoNe {
        #[arg(long, value_parser = parse_rational)]
        w1: Rational,
        #[arg(long, value_parser = parse_rational)]
        w2: Rational,
        #[arg(long, value_parser = parse_rational)]
        theta: Rational,
        #[arg(long)]
        out: Option<String>,
    },
    /// Equal-split reduction for non-trivial equilibria (sum 1).
    PartitionNe {
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        a: Vec<Rational>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Equal-split reduction for determined equilibria (sum 1).
    PartitionDetermined {
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        a: Vec<Rational>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Equal-split reduction for finite best-response behaviour (sum 1/2).
    Fbrp {
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        a: Vec<Rational>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Equal-split reduction for finite improvement behaviour (sum 1/2).
    Fip {
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        a: Vec<Rational>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Equal-split reduction for scheduler-forced termination (sum 1).
    Ufip {
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        a: Vec<Rational>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Chain with unbounded price of anarchy and stability.
    PoaDag {
        #[arg(long, value_parser = parse_rational)]
        r: Rational,
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        c0: Rational,
        #[arg(long)]
        out: Option<String>,
    },
    /// Two-node cycle with unbounded price of anarchy and stability.
    PoaCycle {
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(long)]
        out: Option<String>,
    },
    /// Weakly acyclic fixture defeating every scheduler.
    WeaklyAcyclic {
        #[arg(long)]
        out: Option<String>,
    },
    /// Fixture with an equilibrium that is not weakly acyclic.
    NotWeaklyAcyclic {
        #[arg(long)]
        out: Option<String>,
    },
    /// Simple cycle with an unavoidable best-response cycle.
    BrCycle {
        #[arg(long, value_enum)]
        kind: BrCycleArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Source-free fixture with a state all of whose paths are infinite.
    NoSourceInfinite {
        #[arg(long)]
        out: Option<String>,
    },
    /// Equitable double triangle (weights 1/indegree).
    Equitable {
        #[arg(long)]
        out: Option<String>,
    },
    /// Twin the given source nodes of an existing network.
    Twin {
        #[arg(long)]
        input: String,
        #[arg(long, value_delimiter = ',')]
        targets: Vec<NodeId>,
        #[arg(long, value_parser = parse_rational)]
        w: Rational,
        #[arg(long, value_parser = parse_rational)]
        theta: Rational,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BrCycleArg {
    SingleProduct,
    TwoProduct,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_USAGE
        }
    };
    std::process::exit(code);
}

fn read_network(path: &str) -> Result<Network> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading network from stdin")?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    let net = format::parse(&text).map_err(|e| anyhow!("{e}"))?;
    Ok(net)
}

fn budget_or_env(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("SNGAME_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_STATE_BUDGET)
}

fn emit(common: &Common, report: &Report) -> Result<()> {
    let payload = match common.format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Machine => {
            let mut json = report::render_json(report);
            json.push('\n');
            json
        }
    };
    match &common.out {
        Some(path) => std::fs::write(path, payload).with_context(|| format!("writing {path}"))?,
        None => print!("{payload}"),
    }
    Ok(())
}

fn emit_network(net: &Network, out: &Option<String>) -> Result<i32> {
    let text = format::serialize(net);
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path}"))?,
        None => print!("{text}"),
    }
    Ok(EXIT_HOLDS)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate { path, common } => {
            let net = read_network(&path)?;
            let diagnostics = net.validate();
            let valid = diagnostics.is_empty();
            emit(
                &common,
                &Report::Validate(report::validate_doc(diagnostics)),
            )?;
            Ok(if valid { EXIT_HOLDS } else { EXIT_FAILS })
        }
        Command::Ne {
            path,
            kind,
            method,
            products,
            sources_dominant,
            budget,
            common,
        } => {
            let net = read_network(&path)?;
            let filter: KindFilter = kind.into();
            let budget = budget_or_env(budget);
            let result = run_ne(
                &net,
                filter,
                method,
                products.as_deref(),
                sources_dominant,
                budget,
            )?;
            emit(&common, &Report::Ne(report::ne_doc(&net, &result)))?;
            match result.exists(filter) {
                Some(true) => Ok(EXIT_HOLDS),
                Some(false) => Ok(EXIT_FAILS),
                None => bail!("method did not decide existence for the requested kind"),
            }
        }
        Command::Dynamics {
            path,
            check,
            budget,
            common,
        } => {
            let net = read_network(&path)?;
            let budget = budget_or_env(budget);
            let verdict = match check {
                CheckArg::Fip => dynamics::has_fip(&net, budget),
                CheckArg::Fbrp => dynamics::has_fbrp(&net, budget),
                CheckArg::Ufip => dynamics::has_uniform_fip(&net, budget),
                CheckArg::Weak => dynamics::is_weakly_acyclic(&net, budget),
            }
            .map_err(|e| anyhow!("{e}"))?;
            emit(
                &common,
                &Report::Dynamics(report::dynamics_doc(&net, &verdict)),
            )?;
            Ok(if verdict.holds {
                EXIT_HOLDS
            } else {
                EXIT_FAILS
            })
        }
        Command::Simulate {
            path,
            start,
            random,
            scheduler,
            order,
            response,
            max_steps,
            seed,
            common,
        } => {
            let net = read_network(&path)?;
            let start = match (start, random) {
                (Some(spec), false) => {
                    JointStrategy::parse_text(&net, &spec).map_err(|e| anyhow!("{e}"))?
                }
                (None, true) => dynamics::random_state(&net, seed),
                (None, false) => bail!("either --start or --random is required"),
                (Some(_), true) => unreachable!("clap enforces the conflict"),
            };
            let order = match order {
                Some(spec) => parse_order(&net, &spec)?,
                None => (0..net.node_count()).collect(),
            };
            let scheduler = match scheduler {
                SchedulerArg::Ordered => Scheduler::OrderedFirstUnsatisfied(order),
                SchedulerArg::Negative => Scheduler::FirstNegativePayoff(order),
                SchedulerArg::RoundRobin => Scheduler::RoundRobin,
                SchedulerArg::Random => Scheduler::SeededRandom(seed),
            };
            let rule = match response {
                ResponseArg::Best => ResponseRule::Best,
                ResponseArg::AnyBetter => ResponseRule::AnyBetter,
            };
            let trace = dynamics::simulate(&net, &start, &scheduler, rule, max_steps)
                .map_err(|e| anyhow!("{e}"))?;
            let reached = matches!(trace.outcome, dynamics::SimOutcome::ReachedNe);
            emit(&common, &Report::Simulation(report::sim_doc(&net, &trace)))?;
            Ok(if reached { EXIT_HOLDS } else { EXIT_FAILS })
        }
        Command::Polymatrix {
            path,
            verify,
            budget,
            common,
        } => {
            let net = read_network(&path)?;
            let game = polymatrix::to_polymatrix(&net).map_err(|e| anyhow!("{e}"))?;
            let equivalence = if verify {
                let budget = budget_or_env(budget);
                Some(
                    polymatrix::check_equivalence(
                        &net,
                        &game,
                        polymatrix::Coverage::Exhaustive { budget },
                    )
                    .map_err(|e| anyhow!("{e}"))?,
                )
            } else {
                None
            };
            let ok = equivalence.as_ref().is_none_or(|eq| eq.holds());
            emit(
                &common,
                &Report::Polymatrix(report::poly_doc(&net, &game, equivalence.as_ref())),
            )?;
            Ok(if ok { EXIT_HOLDS } else { EXIT_FAILS })
        }
        Command::Gen { gadget } => run_gen(gadget),
        Command::Metrics {
            path,
            budget,
            common,
        } => {
            let net = read_network(&path)?;
            let budget = budget_or_env(budget);
            match equilibria::price_metrics(&net, budget) {
                Ok(metrics) => {
                    emit(
                        &common,
                        &Report::Metrics(report::metrics_doc(&net, &metrics)),
                    )?;
                    Ok(EXIT_HOLDS)
                }
                Err(NeError::NoEquilibrium) => {
                    eprintln!("no Nash equilibrium: price ratios are undefined");
                    Ok(EXIT_FAILS)
                }
                Err(e) => Err(anyhow!("{e}")),
            }
        }
    }
}

fn parse_order(net: &Network, spec: &str) -> Result<Vec<NodeId>> {
    let order: Vec<NodeId> = spec
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<NodeId>()
                .map_err(|_| anyhow!("bad node id `{tok}`"))
        })
        .collect::<Result<_>>()?;
    for &i in &order {
        if i >= net.node_count() {
            bail!("order references unknown node {i}");
        }
    }
    Ok(order)
}

fn run_ne(
    net: &Network,
    filter: KindFilter,
    method: MethodArg,
    products: Option<&str>,
    sources_dominant: bool,
    budget: u64,
) -> Result<NeReport> {
    let map_err = |e: NeError| anyhow!("{e}");
    match method {
        MethodArg::Auto => equilibria::decide_existence(net, filter, budget).map_err(map_err),
        MethodArg::Brute => {
            let scan = if sources_dominant {
                ScanSpace::SourcesDominant
            } else {
                ScanSpace::Full
            };
            equilibria::brute_force_nash(net, filter, scan, budget, None).map_err(map_err)
        }
        MethodArg::Cycle => equilibria::verify_nash_cycle(net).map_err(map_err),
        MethodArg::Sourcefree => equilibria::verify_nash_source_free(net).map_err(map_err),
        MethodArg::TwoProduct => {
            let cover = match products {
                Some(spec) => spec
                    .split(',')
                    .map(|name| {
                        net.product_id(name.trim())
                            .ok_or_else(|| anyhow!("unknown product `{name}`"))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => find_cover(net).ok_or_else(|| {
                    anyhow!("no product pair covers all sources; pass --products")
                })?,
            };
            let built = equilibria::construct_ne_two_products(net, &cover).map_err(map_err)?;
            let mut report = NeReport {
                method: equilibria::NeMethod::TwoProduct,
                any: Some(true),
                non_trivial: None,
                determined: None,
                witnesses: vec![(built.kind, built.state)],
                states_scanned: None,
            };
            match built.kind {
                sngame_core::NEKind::Determined => {
                    report.determined = Some(true);
                    report.non_trivial = Some(true);
                }
                sngame_core::NEKind::NonTrivial => report.non_trivial = Some(true),
                _ => {}
            }
            Ok(report)
        }
    }
}

/// Smallest product set (singleton, then pair, interned order) covering
/// all sources.
fn find_cover(net: &Network) -> Option<Vec<sngame_core::ProductId>> {
    let sources = net.sources();
    let covered = |cover: &[sngame_core::ProductId]| {
        sources
            .iter()
            .all(|&i| cover.iter().any(|t| net.node_has_product(i, *t)))
    };
    let all: Vec<_> = net.all_products().collect();
    for &t in &all {
        if covered(&[t]) {
            return Some(vec![t]);
        }
    }
    for (i, &t1) in all.iter().enumerate() {
        for &t2 in &all[i + 1..] {
            if covered(&[t1, t2]) {
                return Some(vec![t1, t2]);
            }
        }
    }
    None
}

fn run_gen(gadget: GadgetCommand) -> Result<i32> {
    let map_err = |e: gadgets::GadgetError| anyhow!("{e}");
    match gadget {
        GadgetCommand::TriangleNoNe { w1, w2, theta, out } => {
            let net = gadgets::gen_triangle_no_ne(&w1, &w2, &theta).map_err(map_err)?;
            emit_network(&net, &out)
        }
        GadgetCommand::PartitionNe { a, out } => {
            let inst = PartitionInstance::sum_to_one(&a).map_err(map_err)?;
            emit_network(&gadgets::gen_partition_ne(&inst).map_err(map_err)?, &out)
        }
        GadgetCommand::PartitionDetermined { a, out } => {
            let inst = PartitionInstance::sum_to_one(&a).map_err(map_err)?;
            emit_network(
                &gadgets::gen_partition_determined(&inst).map_err(map_err)?,
                &out,
            )
        }
        GadgetCommand::Fbrp { a, out } => {
            let inst = PartitionInstance::sum_to_half(&a).map_err(map_err)?;
            emit_network(&gadgets::gen_fbrp(&inst).map_err(map_err)?, &out)
        }
        GadgetCommand::Fip { a, out } => {
            let inst = PartitionInstance::sum_to_half(&a).map_err(map_err)?;
            emit_network(&gadgets::gen_fip(&inst).map_err(map_err)?, &out)
        }
        GadgetCommand::Ufip { a, out } => {
            let inst = PartitionInstance::sum_to_one(&a).map_err(map_err)?;
            emit_network(&gadgets::gen_ufip(&inst).map_err(map_err)?, &out)
        }
        GadgetCommand::PoaDag { r, c0, out } => {
            emit_network(&gadgets::gen_poa_dag(&r, &c0).map_err(map_err)?, &out)
        }
        GadgetCommand::PoaCycle { eps, out } => {
            emit_network(&gadgets::gen_poa_cycle(&eps).map_err(map_err)?, &out)
        }
        GadgetCommand::WeaklyAcyclic { out } => emit_network(&gadgets::gen_weakly_acyclic(), &out),
        GadgetCommand::NotWeaklyAcyclic { out } => {
            emit_network(&gadgets::gen_not_weakly_acyclic(), &out)
        }
        GadgetCommand::BrCycle { kind, n, out } => {
            let kind = match kind {
                BrCycleArg::SingleProduct => BrCycleKind::SingleProduct,
                BrCycleArg::TwoProduct => BrCycleKind::TwoProduct,
            };
            emit_network(&gadgets::gen_br_cycle(kind, n).map_err(map_err)?, &out)
        }
        GadgetCommand::NoSourceInfinite { out } => {
            emit_network(&gadgets::gen_no_source_infinite(), &out)
        }
        GadgetCommand::Equitable { out } => emit_network(&gadgets::gen_equitable_example(), &out),
        GadgetCommand::Twin {
            input,
            targets,
            w,
            theta,
            out,
        } => {
            let net = read_network(&input)?;
            let twinned = gadgets::twin_transform(&net, &targets, &w, &theta).map_err(map_err)?;
            emit_network(&twinned, &out)
        }
    }
}
