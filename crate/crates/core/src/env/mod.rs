//! Discrete-time worlds shared by agents.

mod care;
mod intervals;

pub use care::{CareParams, CareWorld};
pub use intervals::{joint_overlap, Interval, IntervalHistory};

use crate::lang::Term;

/// World side of a simulation: actions in, percepts out.
pub trait Environment {
    fn tick(&self) -> i64;

    /// Applies one action; `false` leaves the world unchanged.
    fn execute(&mut self, actor: &str, action: &Term) -> bool;

    /// Facts visible to `agent`, including notifications addressed to it.
    fn percepts(&self, agent: &str) -> Vec<Term>;

    /// Advances the clock by one tick, firing effects that fall due.
    fn advance(&mut self);
}
