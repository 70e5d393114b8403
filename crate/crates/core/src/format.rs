//! Text file format for networks.
//!
//! ```text
//! sngame v1
//! c0 1
//! node 0 products t1,t2
//! node 1 products t2
//! theta 0 t1 1/8
//! theta 0 t2 1/8
//! theta 1 t2 1/4
//! edge 0 1 1/3
//! ```
//!
//! Rationals are `p/q` or integer literals. Serialization is canonical
//! (nodes ascending, products and thresholds in lexicographic product
//! order, edges sorted by source then target), so serializing a parsed
//! canonical file reproduces it byte for byte. Blank lines and `#` comments are accepted
//! on input and never emitted.

use crate::network::{Network, NodeId};
use crate::rational::Rational;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

pub const HEADER: &str = "sngame v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line 1: expected header `{HEADER}`")]
    BadHeader,
    #[error("line {line}: unknown directive `{directive}`")]
    UnknownDirective { line: usize, directive: String },
    #[error("line {line}: malformed `{directive}` line")]
    MalformedLine {
        line: usize,
        directive: &'static str,
    },
    #[error("line {line}: malformed rational `{token}`")]
    MalformedRational { line: usize, token: String },
    #[error("line {line}: bad node id `{token}`")]
    BadNodeId { line: usize, token: String },
    #[error("line {line}: node {id} declared twice")]
    DuplicateNode { line: usize, id: NodeId },
    #[error("node ids must be dense 0..{expected}, missing {missing}")]
    NonDenseNodeIds { expected: usize, missing: NodeId },
    #[error("line {line}: unknown node {id}")]
    UnknownNode { line: usize, id: NodeId },
    #[error("line {line}: threshold for unlisted product `{product}` at node {node}")]
    ThetaForUnlistedProduct {
        line: usize,
        node: NodeId,
        product: String,
    },
    #[error("line {line}: duplicate threshold for node {node}, product `{product}`")]
    DuplicateTheta {
        line: usize,
        node: NodeId,
        product: String,
    },
    #[error("line {line}: duplicate edge {src} -> {dst}")]
    DuplicateEdge {
        line: usize,
        src: NodeId,
        dst: NodeId,
    },
    #[error("missing threshold for node {node}, product `{product}`")]
    MissingTheta { node: NodeId, product: String },
    #[error("line {line}: empty product list")]
    EmptyProducts { line: usize },
    #[error("line {line}: bad product name `{name}`")]
    BadProductName { line: usize, name: String },
    #[error("line {line}: duplicate product `{name}` in node line")]
    DuplicateProductInNode { line: usize, name: String },
    #[error("line {line}: `c0` given twice")]
    DuplicateC0 { line: usize },
}

fn product_name_ok(name: &str) -> bool {
    !name.is_empty()
        && name != "_"
        && name
            .chars()
            .all(|c| !c.is_whitespace() && c != ',' && c != '=')
}

fn parse_rational(tok: &str, line: usize) -> Result<Rational, ParseError> {
    tok.parse().map_err(|_| ParseError::MalformedRational {
        line,
        token: tok.to_owned(),
    })
}

fn parse_node_id(tok: &str, line: usize) -> Result<NodeId, ParseError> {
    tok.parse().map_err(|_| ParseError::BadNodeId {
        line,
        token: tok.to_owned(),
    })
}

/// Parse a network from its text form.
pub fn parse(text: &str) -> Result<Network, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, first)) if first == HEADER => {}
        _ => return Err(ParseError::BadHeader),
    }

    struct NodeLine {
        products: Vec<String>,
    }
    let mut nodes: BTreeMap<NodeId, NodeLine> = BTreeMap::new();
    let mut thetas: Vec<(usize, NodeId, String, Rational)> = Vec::new();
    let mut edges: Vec<(usize, NodeId, NodeId, Rational)> = Vec::new();
    let mut c0: Option<Rational> = None;

    for (line, raw) in lines {
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let mut toks = raw.split_whitespace();
        let directive = toks.next().unwrap();
        let rest: Vec<&str> = toks.collect();
        match directive {
            "c0" => {
                let [tok] = rest.as_slice() else {
                    return Err(ParseError::MalformedLine {
                        line,
                        directive: "c0",
                    });
                };
                if c0.is_some() {
                    return Err(ParseError::DuplicateC0 { line });
                }
                c0 = Some(parse_rational(tok, line)?);
            }
            "node" => {
                let [id_tok, kw, list] = rest.as_slice() else {
                    return Err(ParseError::MalformedLine {
                        line,
                        directive: "node",
                    });
                };
                if *kw != "products" {
                    return Err(ParseError::MalformedLine {
                        line,
                        directive: "node",
                    });
                }
                let id = parse_node_id(id_tok, line)?;
                let mut products = Vec::new();
                for name in list.split(',') {
                    if !product_name_ok(name) {
                        return Err(ParseError::BadProductName {
                            line,
                            name: name.to_owned(),
                        });
                    }
                    if products.iter().any(|p| p == name) {
                        return Err(ParseError::DuplicateProductInNode {
                            line,
                            name: name.to_owned(),
                        });
                    }
                    products.push(name.to_owned());
                }
                if products.is_empty() {
                    return Err(ParseError::EmptyProducts { line });
                }
                if nodes.insert(id, NodeLine { products }).is_some() {
                    return Err(ParseError::DuplicateNode { line, id });
                }
            }
            "theta" => {
                let [id_tok, product, value] = rest.as_slice() else {
                    return Err(ParseError::MalformedLine {
                        line,
                        directive: "theta",
                    });
                };
                let id = parse_node_id(id_tok, line)?;
                thetas.push((
                    line,
                    id,
                    (*product).to_owned(),
                    parse_rational(value, line)?,
                ));
            }
            "edge" => {
                let [src_tok, dst_tok, value] = rest.as_slice() else {
                    return Err(ParseError::MalformedLine {
                        line,
                        directive: "edge",
                    });
                };
                let src = parse_node_id(src_tok, line)?;
                let dst = parse_node_id(dst_tok, line)?;
                edges.push((line, src, dst, parse_rational(value, line)?));
            }
            other => {
                return Err(ParseError::UnknownDirective {
                    line,
                    directive: other.to_owned(),
                })
            }
        }
    }

    let n = nodes.len();
    for expected in 0..n {
        if !nodes.contains_key(&expected) {
            return Err(ParseError::NonDenseNodeIds {
                expected: n,
                missing: expected,
            });
        }
    }

    let mut builder = Network::builder();
    if let Some(c0) = c0 {
        builder.source_payoff(c0);
    }
    for node_line in nodes.values() {
        builder.node(&node_line.products).expect("validated above");
    }

    let mut seen_theta: Vec<Vec<String>> = vec![Vec::new(); n];
    for (line, id, product, value) in thetas {
        if id >= n {
            return Err(ParseError::UnknownNode { line, id });
        }
        if seen_theta[id].contains(&product) {
            return Err(ParseError::DuplicateTheta {
                line,
                node: id,
                product,
            });
        }
        builder
            .theta(id, &product, value)
            .map_err(|_| ParseError::ThetaForUnlistedProduct {
                line,
                node: id,
                product: product.clone(),
            })?;
        seen_theta[id].push(product);
    }
    for (id, node_line) in nodes.iter() {
        for product in &node_line.products {
            if !seen_theta[*id].contains(product) {
                return Err(ParseError::MissingTheta {
                    node: *id,
                    product: product.clone(),
                });
            }
        }
    }
    for (line, src, dst, weight) in edges {
        for id in [src, dst] {
            if id >= n {
                return Err(ParseError::UnknownNode { line, id });
            }
        }
        builder
            .edge(src, dst, weight)
            .map_err(|_| ParseError::DuplicateEdge { line, src, dst })?;
    }
    Ok(builder.build())
}

/// Canonical text form of a network.
pub fn serialize(net: &Network) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "c0 {}", net.source_payoff()).unwrap();
    for i in 0..net.node_count() {
        let mut names: Vec<&str> = net
            .products_of(i)
            .iter()
            .map(|t| net.product_name(*t))
            .collect();
        names.sort_unstable();
        writeln!(out, "node {i} products {}", names.join(",")).unwrap();
    }
    for i in 0..net.node_count() {
        let mut pairs: Vec<(&str, &Rational)> = net
            .products_of(i)
            .iter()
            .map(|t| (net.product_name(*t), net.theta(i, *t)))
            .collect();
        pairs.sort_unstable_by_key(|(name, _)| *name);
        for (name, value) in pairs {
            writeln!(out, "theta {i} {name} {value}").unwrap();
        }
    }
    for (src, dst, w) in net.edges() {
        writeln!(out, "edge {src} {dst} {w}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sample() -> Network {
        let mut b = Network::builder();
        b.node(&["t2", "t1"]).unwrap();
        b.node(&["t1"]).unwrap();
        b.theta(0, "t1", rat(1, 8)).unwrap();
        b.theta(0, "t2", rat(1, 4)).unwrap();
        b.theta(1, "t1", rat(1, 2)).unwrap();
        b.edge(1, 0, rat(1, 3)).unwrap();
        b.source_payoff(rat(2, 1));
        b.build()
    }

    #[test]
    fn round_trip_network_equality() {
        let net = sample();
        let text = serialize(&net);
        let parsed = parse(&text).unwrap();
        assert_eq!(parsed, net);
    }

    #[test]
    fn canonical_text_is_stable() {
        let text = serialize(&sample());
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn weight_token_parses_as_fraction() {
        let net = parse(
            "sngame v1\nc0 1\nnode 0 products t\nnode 1 products t\ntheta 0 t 1\ntheta 1 t 1\nedge 0 1 1/3\n",
        )
        .unwrap();
        assert_eq!(net.edge_weight(0, 1), Some(&rat(1, 3)));
    }

    #[test]
    fn distinct_parse_errors() {
        let base = "sngame v1\nnode 0 products t\nnode 1 products t\ntheta 0 t 1\ntheta 1 t 1\n";
        // malformed rational
        let err = parse(&format!("{base}edge 0 1 1/x\n")).unwrap_err();
        assert!(matches!(err, ParseError::MalformedRational { line: 6, .. }));
        // threshold for a product the node does not list
        let err =
            parse("sngame v1\nnode 0 products t\nnode 1 products t\ntheta 0 u 1\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::ThetaForUnlistedProduct { node: 0, .. }
        ));
        // duplicate edge
        let err = parse(&format!("{base}edge 0 1 1/3\nedge 0 1 1/2\n")).unwrap_err();
        assert!(matches!(
            err,
            ParseError::DuplicateEdge {
                line: 7,
                src: 0,
                dst: 1
            }
        ));
        // missing threshold
        let err =
            parse("sngame v1\nnode 0 products t\nnode 1 products t\ntheta 0 t 1\n").unwrap_err();
        assert!(matches!(err, ParseError::MissingTheta { node: 1, .. }));
        // bad header
        assert!(matches!(parse("sngame v2\n"), Err(ParseError::BadHeader)));
    }

    #[test]
    fn comments_and_blank_lines_accepted() {
        let net = parse(
            "sngame v1\n\n# a comment\nc0 1\nnode 0 products t\nnode 1 products t\ntheta 0 t 1\ntheta 1 t 1\n",
        )
        .unwrap();
        assert_eq!(net.node_count(), 2);
    }
}
