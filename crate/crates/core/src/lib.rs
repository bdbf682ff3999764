//! Higher-order pattern rewriting over the simply typed lambda calculus
//! with products and unit: typing, canonical normal forms, pattern
//! unification, rewriting with traces, critical pairs, local confluence,
//! and the homological lower bound on the size of equivalent equation
//! systems computed from the second boundary matrix.

pub mod critical;
pub mod homology;
pub mod normalize;
pub mod parse;
pub mod pattern;
pub mod report;
pub mod rewrite;
pub mod subst;
pub mod term;
pub mod typing;

#[cfg(test)]
pub(crate) mod fixtures;

pub use rewrite::{Prs, Rule, Strategy};
pub use subst::Subst;
pub use term::{Context, Position, Proj, Signature, Term, Type};
