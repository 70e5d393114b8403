//! Translation into payoff-equivalent polymatrix games.
//!
//! A polymatrix game decomposes every payoff into a sum of pairwise
//! partial payoffs `a[i][j](s_i, s_j)`. A network game fits: spread the
//! threshold of a chosen product evenly over the other `n - 1` players and
//! let actual neighbours contribute their edge weight on a match. Sources
//! collect `c0 / (n - 1)` from everyone. The translation is payoff-exact
//! on every joint strategy, so best responses and equilibria transfer
//! verbatim.

use crate::game::{payoff, Choice, JointStrategy};
use crate::network::{Network, NodeId};
use crate::rational::Rational;
use crate::space::{BudgetExceeded, StateSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolymatrixError {
    #[error("polymatrix translation needs at least 2 players, got {0}")]
    TooFewPlayers(usize),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("line {line}: malformed polymatrix file: {reason}")]
    Parse { line: usize, reason: String },
}

/// Dense pairwise payoff tables. Strategy indices follow the canonical
/// per-node order (products interned-first, null last).
pub struct PolymatrixGame {
    /// Per player: canonical strategy list.
    strategies: Vec<Vec<Choice>>,
    /// `tables[i][j]` for `j != i`: row per strategy of `i`, column per
    /// strategy of `j`. The diagonal holds an empty table.
    tables: Vec<Vec<Vec<Vec<Rational>>>>,
}

impl PolymatrixGame {
    pub fn player_count(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategies_of(&self, i: NodeId) -> &[Choice] {
        &self.strategies[i]
    }

    /// Partial payoff `a[i][j](s_i, s_j)`.
    pub fn partial(&self, i: NodeId, j: NodeId, si: usize, sj: usize) -> &Rational {
        assert_ne!(i, j, "partial payoffs are defined for ordered pairs");
        &self.tables[i][j][si][sj]
    }

    /// Payoff of player `i`: the sum of its partial payoffs against every
    /// other player.
    pub fn payoff(&self, s: &JointStrategy, i: NodeId) -> Rational {
        let si = self.strategy_index(i, s.get(i));
        let mut total = Rational::zero();
        for j in 0..self.player_count() {
            if j == i {
                continue;
            }
            let sj = self.strategy_index(j, s.get(j));
            total += &self.tables[i][j][si][sj];
        }
        total
    }

    fn strategy_index(&self, i: NodeId, c: Choice) -> usize {
        self.strategies[i]
            .iter()
            .position(|x| *x == c)
            .expect("choice outside the player's strategy set")
    }
}

/// Translate a network game into its polymatrix form.
pub fn to_polymatrix(net: &Network) -> Result<PolymatrixGame, PolymatrixError> {
    let n = net.node_count();
    if n < 2 {
        return Err(PolymatrixError::TooFewPlayers(n));
    }
    let share = Rational::new(1, (n - 1) as i64);
    let space = StateSpace::full(net);
    let strategies: Vec<Vec<Choice>> = (0..n).map(|i| space.strategies_of(i).to_vec()).collect();

    let mut tables = Vec::with_capacity(n);
    for i in 0..n {
        let mut row_i = Vec::with_capacity(n);
        let source = net.is_source(i);
        for j in 0..n {
            if j == i {
                row_i.push(Vec::new());
                continue;
            }
            let weight = net.edge_weight(j, i);
            let mut table = Vec::with_capacity(strategies[i].len());
            for &si in &strategies[i] {
                let mut row = Vec::with_capacity(strategies[j].len());
                for &sj in &strategies[j] {
                    let value = match si {
                        None => Rational::zero(),
                        Some(_) if source => net.source_payoff() * &share,
                        Some(t) => {
                            let theta_share = net.theta(i, t) * &share;
                            match (weight, sj) {
                                (Some(w), Some(u)) if u == t => w - theta_share,
                                _ => -theta_share,
                            }
                        }
                    };
                    row.push(value);
                }
                table.push(row);
            }
            row_i.push(table);
        }
        tables.push(row_i);
    }
    Ok(PolymatrixGame { strategies, tables })
}

/// Result of a payoff-equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub states_checked: u128,
    /// First `(state, player, direct, polymatrix)` mismatch, if any.
    pub counterexample: Option<(JointStrategy, NodeId, Rational, Rational)>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Coverage of the equivalence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// Every joint strategy, within the state budget.
    Exhaustive { budget: u64 },
    /// Uniformly sampled joint strategies from a seeded generator.
    Sample { count: u64, seed: u64 },
}

/// Compare direct payoffs against the polymatrix decomposition for every
/// player on the covered states, reporting the first mismatch.
pub fn check_equivalence(
    net: &Network,
    game: &PolymatrixGame,
    coverage: Coverage,
) -> Result<EquivalenceReport, PolymatrixError> {
    let n = net.node_count();
    let mut states_checked: u128 = 0;
    let mut counterexample = None;

    let mut check = |s: &JointStrategy| {
        if counterexample.is_some() {
            return;
        }
        states_checked += 1;
        for i in 0..n {
            let direct = payoff(net, s, i);
            let poly = game.payoff(s, i);
            if direct != poly {
                counterexample = Some((s.clone(), i, direct, poly));
                return;
            }
        }
    };

    match coverage {
        Coverage::Exhaustive { budget } => {
            let space = StateSpace::full(net);
            space.check_budget(budget)?;
            space.for_each_state(|_, s| check(s));
        }
        Coverage::Sample { count, seed } => {
            let space = StateSpace::full(net);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let choices = (0..n)
                    .map(|i| {
                        let options = space.strategies_of(i);
                        options[rng.gen_range(0..options.len())]
                    })
                    .collect();
                check(&JointStrategy(choices));
            }
        }
    }
    Ok(EquivalenceReport {
        states_checked,
        counterexample,
    })
}

fn choice_token(net: &Network, c: Choice) -> String {
    match c {
        Some(t) => net.product_name(t).to_owned(),
        None => "_".to_owned(),
    }
}

/// Canonical text form: header, per-player strategy lists, then one
/// `a <i> <j> <s_i> <s_j> <value>` line per ordered pair and strategy
/// combination, in index order.
pub fn serialize(net: &Network, game: &PolymatrixGame) -> String {
    let n = game.player_count();
    let mut out = String::new();
    writeln!(out, "polymatrix v1").unwrap();
    writeln!(out, "players {n}").unwrap();
    for i in 0..n {
        let tokens: Vec<String> = game
            .strategies_of(i)
            .iter()
            .map(|c| choice_token(net, *c))
            .collect();
        writeln!(out, "strategies {i} {}", tokens.join(",")).unwrap();
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for (si, ci) in game.strategies_of(i).iter().enumerate() {
                for (sj, cj) in game.strategies_of(j).iter().enumerate() {
                    writeln!(
                        out,
                        "a {i} {j} {} {} {}",
                        choice_token(net, *ci),
                        choice_token(net, *cj),
                        game.partial(i, j, si, sj)
                    )
                    .unwrap();
                }
            }
        }
    }
    out
}

/// Raw parsed form of a polymatrix file: strategy tokens per player and
/// the table values in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymatrixDoc {
    pub strategies: Vec<Vec<String>>,
    /// `(i, j, s_i token, s_j token, value)` lines in file order.
    pub entries: Vec<(usize, usize, String, String, Rational)>,
}

/// Parse the canonical polymatrix format back into its raw document.
pub fn parse(text: &str) -> Result<PolymatrixDoc, PolymatrixError> {
    let err = |line: usize, reason: &str| PolymatrixError::Parse {
        line,
        reason: reason.to_owned(),
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "polymatrix v1")) => {}
        _ => return Err(err(1, "expected header `polymatrix v1`")),
    }
    let players = match lines.next() {
        Some((line, l)) => l
            .strip_prefix("players ")
            .and_then(|rest| rest.parse::<usize>().ok())
            .ok_or_else(|| err(line, "expected `players <n>`"))?,
        None => return Err(err(2, "expected `players <n>`")),
    };
    let mut strategies: Vec<Vec<String>> = vec![Vec::new(); players];
    let mut entries = Vec::new();
    for (line, raw) in lines {
        if raw.is_empty() {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            ["strategies", id, list] => {
                let id: usize = id.parse().map_err(|_| err(line, "bad player id"))?;
                if id >= players {
                    return Err(err(line, "player id out of range"));
                }
                strategies[id] = list.split(',').map(str::to_owned).collect();
            }
            ["a", i, j, si, sj, value] => {
                let i: usize = i.parse().map_err(|_| err(line, "bad player id"))?;
                let j: usize = j.parse().map_err(|_| err(line, "bad player id"))?;
                if i >= players || j >= players || i == j {
                    return Err(err(line, "bad player pair"));
                }
                let value: Rational = value.parse().map_err(|_| err(line, "malformed rational"))?;
                entries.push((i, j, (*si).to_owned(), (*sj).to_owned(), value));
            }
            _ => return Err(err(line, "unknown directive")),
        }
    }
    Ok(PolymatrixDoc {
        strategies,
        entries,
    })
}

/// Re-emit the canonical text of a parsed document; together with
/// [`parse`] this gives the byte-exact round trip of canonical files.
pub fn serialize_doc(doc: &PolymatrixDoc) -> String {
    let mut out = String::new();
    writeln!(out, "polymatrix v1").unwrap();
    writeln!(out, "players {}", doc.strategies.len()).unwrap();
    for (i, tokens) in doc.strategies.iter().enumerate() {
        writeln!(out, "strategies {i} {}", tokens.join(",")).unwrap();
    }
    for (i, j, si, sj, value) in &doc.entries {
        writeln!(out, "a {i} {j} {si} {sj} {value}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn two_cycle() -> Network {
        let mut b = Network::builder();
        b.node(&["t1", "t2"]).unwrap();
        b.node(&["t1"]).unwrap();
        b.theta_all(0, rat(1, 4)).unwrap();
        b.theta(1, "t1", rat(1, 2)).unwrap();
        b.edge(0, 1, rat(1, 2)).unwrap();
        b.edge(1, 0, rat(3, 4)).unwrap();
        b.build()
    }

    #[test]
    fn two_players_match_weight_minus_theta() {
        // with two players the threshold share is the whole threshold
        let net = two_cycle();
        let game = to_polymatrix(&net).unwrap();
        let t1 = net.product_id("t1").unwrap();
        let s = JointStrategy(vec![Some(t1), Some(t1)]);
        assert_eq!(game.payoff(&s, 0), rat(3, 4) - rat(1, 4));
        assert_eq!(game.payoff(&s, 1), rat(1, 2) - rat(1, 2));
    }

    #[test]
    fn all_null_pays_zero() {
        let net = two_cycle();
        let game = to_polymatrix(&net).unwrap();
        let s = JointStrategy::all_null(2);
        assert!(game.payoff(&s, 0).is_zero());
        assert!(game.payoff(&s, 1).is_zero());
    }

    #[test]
    fn source_rows_sum_to_constant() {
        let mut b = Network::builder();
        b.node(&["t1"]).unwrap();
        b.node(&["t1"]).unwrap();
        b.node(&["t1"]).unwrap();
        b.theta_all(2, rat(1, 2)).unwrap();
        b.edge(0, 2, rat(1, 2)).unwrap();
        b.edge(1, 2, rat(1, 2)).unwrap();
        b.source_payoff(rat(5, 2));
        let net = b.build();
        let game = to_polymatrix(&net).unwrap();
        let t1 = net.product_id("t1").unwrap();
        let s = JointStrategy(vec![Some(t1), None, None]);
        assert_eq!(game.payoff(&s, 0), rat(5, 2));
    }

    #[test]
    fn exhaustive_equivalence_on_small_net() {
        let net = two_cycle();
        let game = to_polymatrix(&net).unwrap();
        let report =
            check_equivalence(&net, &game, Coverage::Exhaustive { budget: 1 << 20 }).unwrap();
        assert!(
            report.holds(),
            "counterexample: {:?}",
            report.counterexample
        );
        assert_eq!(report.states_checked, 6);
    }

    #[test]
    fn export_parses_back() {
        let net = two_cycle();
        let game = to_polymatrix(&net).unwrap();
        let text = serialize(&net, &game);
        let doc = parse(&text).unwrap();
        assert_eq!(doc.strategies.len(), 2);
        assert_eq!(doc.strategies[0], vec!["t1", "t2", "_"]);
        // one entry per ordered pair and strategy combination
        assert_eq!(doc.entries.len(), 3 * 2 + 2 * 3);
        // byte-exact round trip of the canonical form
        assert_eq!(serialize_doc(&doc), text);
    }

    #[test]
    fn single_player_rejected() {
        let mut b = Network::builder();
        b.node(&["t1"]).unwrap();
        let net = b.build();
        assert!(matches!(
            to_polymatrix(&net),
            Err(PolymatrixError::TooFewPlayers(1))
        ));
    }
}
