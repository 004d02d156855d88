//! Unification, belief storage and query resolution.

mod beliefs;
mod query;
mod unify;

pub use beliefs::{BeliefBase, BeliefChange};
pub use query::{holds, query, query_with, Solutions, DEFAULT_DEPTH};
pub use unify::{eval_int, unify, unify_in, Substitution};
