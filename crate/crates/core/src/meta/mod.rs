//! Metainterpreter: solve frames, plan trying, durative loops and path guidance.

mod durative;
mod solve;

pub use durative::{DurativeFrame, DurativePhase, DurativeSpec};
pub use solve::{SolveFrame, TryFrame};

use std::fmt;

use crate::lang::Term;

/// One hop of a goal-plan path: solve `goal` with plan `label`, continuing at body step `step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathEntry {
    pub goal: Term,
    pub label: String,
    pub step: usize,
}

/// A pre-selected route through the goal-plan tree ending at an action occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GoalPlanPath {
    pub entries: Vec<PathEntry>,
}

impl fmt::Display for GoalPlanPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "!{} @{}[{}]", e.goal, e.label, e.step)?;
        }
        Ok(())
    }
}
