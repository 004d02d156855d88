//! Registry of internal actions (dotted functors).

use std::collections::BTreeMap;

use serde_json::json;

use crate::lang::Term;

use super::agent::{Agent, TraceKind};
use super::intention::{Intention, IntentionStatus, Wait};

pub enum IaResult {
    Done,
    Fail(String),
    Block(Wait),
}

/// Receives the agent, the calling intention (detached from the agent while
/// it runs) and the instantiated arguments.
pub type InternalActionFn = fn(&mut Agent, &mut Intention, &[Term]) -> IaResult;

#[derive(Clone)]
pub struct InternalActions {
    table: BTreeMap<String, InternalActionFn>,
}

impl InternalActions {
    pub fn empty() -> InternalActions {
        InternalActions {
            table: BTreeMap::new(),
        }
    }

    pub fn standard() -> InternalActions {
        let mut r = InternalActions::empty();
        r.register(".print", ia_print);
        r.register(".fail", |_, _, _| IaResult::Fail(".fail".into()));
        r.register(".wait", ia_wait);
        r.register(".sleep", ia_sleep);
        r.register(".suspend_self", ia_suspend_self);
        r.register(".abolish", ia_abolish);
        r.register(".metadeliberate", crate::practice::ia_metadeliberate);
        r
    }

    pub fn register(&mut self, name: &str, f: InternalActionFn) {
        self.table.insert(name.to_string(), f);
    }

    pub fn get(&self, name: &str) -> Option<InternalActionFn> {
        self.table.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.table.keys().map(String::as_str)
    }
}

fn ia_print(agent: &mut Agent, _: &mut Intention, args: &[Term]) -> IaResult {
    let text: Vec<String> = args
        .iter()
        .map(|a| match a {
            Term::Str(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    tracing::info!(agent = %agent.name, "{}", text.join(""));
    IaResult::Done
}

/// `.wait(Cond)` or `.wait(Cond, Ticks)`.
fn ia_wait(agent: &mut Agent, _: &mut Intention, args: &[Term]) -> IaResult {
    let Some(cond) = args.first() else {
        return IaResult::Fail(".wait needs a condition".into());
    };
    if agent.holds(cond) {
        return IaResult::Done;
    }
    let deadline = match args.get(1) {
        None => None,
        Some(Term::Int(n)) => Some(agent.now() + n),
        Some(other) => {
            return IaResult::Fail(format!(".wait timeout must be an integer, got {other}"))
        }
    };
    IaResult::Block(Wait::Condition {
        cond: cond.clone(),
        deadline,
    })
}

fn ia_sleep(agent: &mut Agent, _: &mut Intention, args: &[Term]) -> IaResult {
    match args.first() {
        Some(Term::Int(n)) if *n <= 0 => IaResult::Done,
        Some(Term::Int(n)) => IaResult::Block(Wait::Until(agent.now() + n)),
        _ => IaResult::Fail(".sleep needs an integer".into()),
    }
}

/// Body of guard plans: suspends the calling intention on behalf of a purpose.
fn ia_suspend_self(agent: &mut Agent, int: &mut Intention, args: &[Term]) -> IaResult {
    let purpose = args.first().cloned().unwrap_or_else(Term::truth);
    int.status = IntentionStatus::Suspended(purpose.clone());
    agent.trace(
        TraceKind::Intention,
        json!({ "intention": int.id, "status": "suspended", "reason": purpose.to_string(), "guard": true }),
    );
    if let Some(engine) = agent.practice.as_mut() {
        engine.record_suspension(purpose, int.id);
    }
    IaResult::Done
}

fn ia_abolish(agent: &mut Agent, int: &mut Intention, args: &[Term]) -> IaResult {
    for pattern in args {
        agent.del_beliefs(pattern, Some(int.id));
    }
    IaResult::Done
}
