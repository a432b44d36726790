//! Maximization of regularized submodular objectives `f(S) = g(S) − ℓ(S)`
//! under a cardinality constraint `|S| ≤ k`, where `g` is monotone submodular
//! and `ℓ` is a non-negative modular cost.
//!
//! The crate provides
//!
//! * value oracles for common summarization objectives ([`objectives`]),
//! * one-pass threshold streaming algorithms ([`streaming`]),
//! * a simulated multi-round distributed greedy ([`distributed`]),
//! * offline baselines and exhaustive search ([`baselines`]),
//! * the reduction from weakly submodular mode finding ([`modefinding`]),
//! * dataset loaders and an experiment runner ([`experiment`]).

pub mod baselines;
pub mod distributed;
mod error;
pub mod experiment;
pub mod modefinding;
pub mod objectives;
pub mod streaming;
pub mod synth;
pub mod validate;

pub use error::{Error, Result};
pub use objectives::{
    CountingOracle, ElementId, ModularCost, RegularizedInstance, Solution, SubmodularOracle,
};
