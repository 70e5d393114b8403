//! Exact analysis of product-adoption games on weighted directed networks.
//!
//! A network couples a weighted directed graph with per-node product sets,
//! adoption thresholds and a constant payoff for source nodes. Every node
//! simultaneously picks a product or abstains; a node's payoff depends only
//! on its own choice and on which in-neighbours made the same choice. This
//! crate provides:
//!
//! - exact rational arithmetic for all weights, thresholds and payoffs;
//! - parsing, validation and classification of networks ([`network`],
//!   [`mod@format`]);
//! - payoffs, best responses and Nash tests ([`game`]);
//! - equilibrium existence and enumeration, including the polynomial
//!   procedures for simple cycles and source-free graphs, a constructive
//!   two-product procedure, and price of anarchy / stability metrics
//!   ([`equilibria`]);
//! - improvement-path dynamics over explicit state graphs: finite
//!   improvement and best-response properties, scheduler-forced
//!   termination, weak acyclicity, and path simulation ([`dynamics`]);
//! - translation to payoff-equivalent polymatrix games ([`polymatrix`]);
//! - parametric generator networks used as fixtures and regression anchors
//!   ([`gadgets`]).

pub mod dynamics;
pub mod equilibria;
pub mod format;
pub mod gadgets;
pub mod game;
mod graph;
pub mod network;
pub mod polymatrix;
pub mod rational;
pub mod report;
pub mod space;

pub use game::{Choice, JointStrategy, KindFilter, NEKind};
pub use network::{Diagnostic, GraphClass, Network, NetworkBuilder, NodeId, ProductId};
pub use rational::{rat, Rational};
pub use space::{StateSpace, DEFAULT_STATE_BUDGET};
