//! Agents, intentions and the reasoning cycle.

mod agent;
mod ebdg;
mod intention;
mod internal;

pub use agent::{apply_ebdg, ActionRequest, Agent, AgentConfig, TraceItem, TraceKind};
pub use ebdg::ebdg_transform;
pub use intention::{Frame, Intention, IntentionId, IntentionStatus, PlanFrame, Wait};
pub use internal::{IaResult, InternalActionFn, InternalActions};

use crate::lang::Term;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RuntimeError {
    #[error("a guard plan for {0} is already installed")]
    DuplicateGuard(Term),
    #[error("no guard plan labelled {0}")]
    UnknownGuard(String),
    #[error("no plan labelled {0}")]
    UnknownPlan(String),
    #[error("duplicate plan label @{0}")]
    DuplicateLabel(String),
    #[error("ebdg declared for {0} but no plans achieve it")]
    NoPlansForEbdg(Term),
    #[error("practice declarations: {0}")]
    Practice(String),
}
