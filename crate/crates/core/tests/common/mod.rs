//! Shared helpers for integration suites: seeded random network
//! generators and independent oracles. The oracles re-derive payoffs,
//! best responses and equilibrium status directly from the definitions,
//! bypassing the library's batched support computations, so disagreements
//! surface implementation bugs rather than shared mistakes.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sngame_core::game::Choice;
use sngame_core::{JointStrategy, NEKind, Network, ProductId, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const POOL: [&str; 3] = ["t1", "t2", "t3"];

/// Random weight `k/d`, `0 <= k <= cap_num`, `d <= 12`.
fn random_weight(rng: &mut ChaCha8Rng, cap: &Rational) -> Rational {
    loop {
        let den = rng.gen_range(1..=12i64);
        let num = rng.gen_range(0..=den);
        let w = Rational::new(num, den);
        if w <= *cap {
            return w;
        }
    }
}

/// Random threshold `k/d` in `(0, 1]`, `d <= 12`.
fn random_theta(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.gen_range(1..=12i64);
    let num = rng.gen_range(1..=den);
    Rational::new(num, den)
}

/// Random non-empty product subset of the pool, at most `max_len` names.
fn random_products(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<&'static str> {
    let mut pool = POOL.to_vec();
    let len = rng.gen_range(1..=max_len.min(pool.len()));
    for i in 0..len {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(len);
    pool
}

fn fill_thetas(
    b: &mut sngame_core::NetworkBuilder,
    node: usize,
    products: &[&'static str],
    rng: &mut ChaCha8Rng,
) {
    for p in products {
        b.theta(node, p, random_theta(rng)).unwrap();
    }
}

/// Simple cycle `0 -> 1 -> ... -> 0` with random products, weights and
/// thresholds (denominators at most 12).
pub fn random_cycle(rng: &mut ChaCha8Rng, n: usize, max_products: usize) -> Network {
    let mut b = Network::builder();
    let mut product_sets = Vec::new();
    for _ in 0..n {
        let products = random_products(rng, max_products);
        b.node(&products).unwrap();
        product_sets.push(products);
    }
    for (i, products) in product_sets.iter().enumerate() {
        fill_thetas(&mut b, i, products, rng);
        b.edge(i, (i + 1) % n, random_weight(rng, &Rational::one()))
            .unwrap();
    }
    b.build()
}

/// Source-free network: every node gets one to three in-edges; per-node
/// weights are capped so the in-weight sum stays at most 1.
pub fn random_source_free(rng: &mut ChaCha8Rng, n: usize) -> Network {
    assert!(n >= 2);
    let mut b = Network::builder();
    let mut product_sets = Vec::new();
    for _ in 0..n {
        let products = random_products(rng, 2);
        b.node(&products).unwrap();
        product_sets.push(products);
    }
    for (i, products) in product_sets.iter().enumerate() {
        fill_thetas(&mut b, i, products, rng);
        let deg = rng.gen_range(1..=3.min(n - 1));
        let mut candidates: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        for k in 0..deg {
            let j = rng.gen_range(k..candidates.len());
            candidates.swap(k, j);
        }
        let cap = Rational::new(1, deg as i64);
        for &j in &candidates[..deg] {
            b.edge(j, i, random_weight(rng, &cap)).unwrap();
        }
    }
    b.build()
}

/// Acyclic network: edges only from lower to higher positions of a random
/// permutation.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize) -> Network {
    assert!(n >= 2);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let j = rng.gen_range(i..n);
        perm.swap(i, j);
    }
    let mut rank = vec![0usize; n];
    for (pos, &v) in perm.iter().enumerate() {
        rank[v] = pos;
    }

    let mut b = Network::builder();
    let mut product_sets = Vec::new();
    for _ in 0..n {
        let products = random_products(rng, 2);
        b.node(&products).unwrap();
        product_sets.push(products);
    }
    for (i, products) in product_sets.iter().enumerate() {
        fill_thetas(&mut b, i, products, rng);
        let earlier: Vec<usize> = (0..n).filter(|&j| rank[j] < rank[i]).collect();
        if earlier.is_empty() {
            continue;
        }
        let deg = rng.gen_range(0..=earlier.len().min(3));
        let mut candidates = earlier;
        for k in 0..deg {
            let j = rng.gen_range(k..candidates.len());
            candidates.swap(k, j);
        }
        if deg > 0 {
            let cap = Rational::new(1, deg as i64);
            for &j in &candidates[..deg] {
                b.edge(j, i, random_weight(rng, &cap)).unwrap();
            }
        }
    }
    b.build()
}

/// Network whose strongly connected components all have at most two
/// nodes: a random acyclic order over blocks, where a block is a single
/// node or a mutually linked pair.
pub fn random_scc2(rng: &mut ChaCha8Rng, n: usize) -> Network {
    assert!(n >= 2);
    let mut b = Network::builder();
    let mut product_sets = Vec::new();
    for _ in 0..n {
        let products = random_products(rng, 2);
        b.node(&products).unwrap();
        product_sets.push(products);
    }

    // partition nodes into blocks of size 1 or 2, in id order
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && rng.gen_bool(0.5) {
            blocks.push(vec![i, i + 1]);
            i += 2;
        } else {
            blocks.push(vec![i]);
            i += 1;
        }
    }

    // reserve half the weight budget for the pair edge
    let mut pair_edges = Vec::new();
    for block in &blocks {
        if let [x, y] = block.as_slice() {
            pair_edges.push((*x, *y));
            pair_edges.push((*y, *x));
        }
    }

    // cross-block edges follow the block order
    let mut cross: Vec<(usize, usize)> = Vec::new();
    for (bi, block) in blocks.iter().enumerate() {
        for target in block {
            for earlier in &blocks[..bi] {
                for src in earlier {
                    if rng.gen_bool(0.3) {
                        cross.push((*src, *target));
                    }
                }
            }
        }
    }

    let mut indeg = vec![0usize; n];
    for (_, dst) in pair_edges.iter().chain(cross.iter()) {
        indeg[*dst] += 1;
    }
    for (src, dst) in pair_edges.into_iter().chain(cross) {
        let cap = Rational::new(1, indeg[dst] as i64);
        b.edge(src, dst, random_weight(rng, &cap)).unwrap();
    }
    for (i, products) in product_sets.iter().enumerate() {
        fill_thetas(&mut b, i, products, rng);
    }
    b.build()
}

/// Arbitrary small network (may contain sources and cycles).
pub fn random_general(rng: &mut ChaCha8Rng, n: usize, max_products: usize) -> Network {
    assert!(n >= 2);
    let mut b = Network::builder();
    let mut product_sets = Vec::new();
    for _ in 0..n {
        let products = random_products(rng, max_products);
        b.node(&products).unwrap();
        product_sets.push(products);
    }
    for (i, products) in product_sets.iter().enumerate() {
        fill_thetas(&mut b, i, products, rng);
        let deg = rng.gen_range(0..=2.min(n - 1));
        if deg == 0 {
            continue;
        }
        let mut candidates: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        for k in 0..deg {
            let j = rng.gen_range(k..candidates.len());
            candidates.swap(k, j);
        }
        let cap = Rational::new(1, deg as i64);
        for &j in &candidates[..deg] {
            b.edge(j, i, random_weight(rng, &cap)).unwrap();
        }
    }
    b.build()
}

/// Random state drawn from the full strategy space.
pub fn random_joint_strategy(rng: &mut ChaCha8Rng, net: &Network) -> JointStrategy {
    let choices = (0..net.node_count())
        .map(|i| {
            let products = net.products_of(i);
            let pick = rng.gen_range(0..=products.len());
            if pick == products.len() {
                None
            } else {
                Some(products[pick])
            }
        })
        .collect();
    JointStrategy(choices)
}

// ---------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------

/// Payoff recomputed from the raw definition.
pub fn oracle_payoff(net: &Network, s: &JointStrategy, i: usize) -> Rational {
    let Some(t) = s.get(i) else {
        return Rational::zero();
    };
    if net.neighbours(i).is_empty() {
        return net.source_payoff().clone();
    }
    let mut sum = Rational::zero();
    for (j, w) in net.neighbours(i) {
        if s.get(*j) == Some(t) {
            sum += w;
        }
    }
    sum - net.theta(i, t)
}

/// All strategies of `i` (products then null).
pub fn oracle_strategies(net: &Network, i: usize) -> Vec<Choice> {
    let mut out: Vec<Choice> = net.products_of(i).iter().map(|t| Some(*t)).collect();
    out.push(None);
    out
}

/// Best responses by direct argmax over every alternative payoff.
pub fn oracle_best_responses(net: &Network, s: &JointStrategy, i: usize) -> Vec<Choice> {
    let mut best = None;
    let mut values = Vec::new();
    for c in oracle_strategies(net, i) {
        let mut probe = s.clone();
        probe.set(i, c);
        let v = oracle_payoff(net, &probe, i);
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v.clone());
        }
        values.push((c, v));
    }
    let best = best.expect("non-empty strategy set");
    values
        .into_iter()
        .filter(|(_, v)| *v == best)
        .map(|(c, _)| c)
        .collect()
}

/// Nash test by trying every unilateral deviation.
pub fn oracle_is_nash(net: &Network, s: &JointStrategy) -> bool {
    for i in 0..net.node_count() {
        let current = oracle_payoff(net, s, i);
        for c in oracle_strategies(net, i) {
            if c == s.get(i) {
                continue;
            }
            let mut probe = s.clone();
            probe.set(i, c);
            if oracle_payoff(net, &probe, i) > current {
                return false;
            }
        }
    }
    true
}

pub fn oracle_kind(net: &Network, s: &JointStrategy) -> NEKind {
    if !oracle_is_nash(net, s) {
        return NEKind::NotNE;
    }
    let adopted = (0..net.node_count())
        .filter(|&i| s.get(i).is_some())
        .count();
    if adopted == 0 {
        NEKind::Trivial
    } else if adopted == net.node_count() {
        NEKind::Determined
    } else {
        NEKind::NonTrivial
    }
}

/// Exhaustive equilibrium enumeration by own recursion over product sets.
pub fn oracle_enumerate_ne(net: &Network) -> Vec<(NEKind, JointStrategy)> {
    let n = net.node_count();
    let mut found = Vec::new();
    let mut state = JointStrategy::all_null(n);
    fn recurse(
        net: &Network,
        node: usize,
        state: &mut JointStrategy,
        found: &mut Vec<(NEKind, JointStrategy)>,
    ) {
        if node == net.node_count() {
            let kind = oracle_kind(net, state);
            if kind != NEKind::NotNE {
                found.push((kind, state.clone()));
            }
            return;
        }
        for c in oracle_strategies(net, node) {
            state.set(node, c);
            recurse(net, node + 1, state, found);
        }
        state.set(node, None);
    }
    recurse(net, 0, &mut state, &mut found);
    found
}

/// Product ids for the shared pool names present in a network.
pub fn pool_products(net: &Network) -> Vec<ProductId> {
    net.all_products().collect()
}
