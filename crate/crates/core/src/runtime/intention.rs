//! Intentions as stacks of frames.

use crate::lang::{BodyStep, Plan, Term, TriggerKind};
use crate::logic::Substitution;
use crate::meta::{DurativeFrame, SolveFrame, TryFrame};

pub type IntentionId = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntentionStatus {
    Active,
    /// Suspended with the purpose or reason that caused it.
    Suspended(Term),
    Succeeded,
    Failed,
}

/// What a blocked intention is waiting for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Wait {
    /// Reply to an environment action.
    Action(u64),
    /// A condition to become true, failing at `deadline` if given.
    Condition { cond: Term, deadline: Option<i64> },
    /// Simulation time to reach.
    Until(i64),
}

/// A native plan instance.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanFrame {
    pub plan: Plan,
    pub subst: Substitution,
    pub step: usize,
    /// Set when a goal-deletion handler is running above this frame.
    pub failed: bool,
}

impl PlanFrame {
    pub fn new(plan: Plan, subst: Substitution) -> PlanFrame {
        PlanFrame {
            plan,
            subst,
            step: 0,
            failed: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Frame {
    Plan(PlanFrame),
    Solve(SolveFrame),
    Try(TryFrame),
    Durative(DurativeFrame),
}

impl Frame {
    /// The achievement goal this frame works on, instantiated.
    pub fn goal(&self) -> Option<Term> {
        match self {
            Frame::Plan(p) if p.plan.trigger.kind == TriggerKind::GoalAdd => {
                Some(p.subst.apply(&p.plan.trigger.literal))
            }
            Frame::Try(t) => Some(t.goal.clone()),
            _ => None,
        }
    }

    /// Remaining body and bindings for frames that execute steps.
    pub fn body(&self) -> Option<(&[BodyStep], &Substitution, usize)> {
        match self {
            Frame::Plan(p) => Some((&p.plan.body, &p.subst, p.step)),
            Frame::Solve(s) => Some((&s.steps, &s.subst, s.step)),
            _ => None,
        }
    }

    pub fn body_mut(&mut self) -> Option<(&[BodyStep], &mut Substitution, &mut usize)> {
        match self {
            Frame::Plan(p) => Some((&p.plan.body, &mut p.subst, &mut p.step)),
            Frame::Solve(s) => Some((&s.steps, &mut s.subst, &mut s.step)),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Frame::Plan(p) if p.plan.atomic)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Intention {
    pub id: IntentionId,
    pub frames: Vec<Frame>,
    pub status: IntentionStatus,
    pub wait: Option<Wait>,
    /// Steps run as a fresh intention if this one fails.
    pub fallback: Option<Vec<BodyStep>>,
}

impl Intention {
    pub fn new(id: IntentionId, frame: Frame) -> Intention {
        Intention {
            id,
            frames: vec![frame],
            status: IntentionStatus::Active,
            wait: None,
            fallback: None,
        }
    }

    pub fn is_active(&self) -> bool {
        self.status == IntentionStatus::Active
    }

    pub fn is_suspended(&self) -> bool {
        matches!(self.status, IntentionStatus::Suspended(_))
    }

    pub fn is_finished(&self) -> bool {
        matches!(
            self.status,
            IntentionStatus::Succeeded | IntentionStatus::Failed
        )
    }

    /// Ready for a regular execution step.
    pub fn is_runnable(&self) -> bool {
        self.is_active()
            && self.wait.is_none()
            && matches!(
                self.frames.last(),
                Some(Frame::Plan(_) | Frame::Solve(_) | Frame::Try(_))
            )
    }

    pub fn has_atomic_frame(&self) -> bool {
        self.frames.iter().any(Frame::is_atomic)
    }

    /// Index of the lowest frame whose goal matches `purpose`, ignoring annotations.
    pub fn lowest_frame_for(&self, purpose: &Term) -> Option<usize> {
        let purpose = purpose.strip_annots();
        self.frames.iter().position(|f| {
            f.goal()
                .is_some_and(|g| crate::logic::unify(&purpose, &g.strip_annots()).is_some())
        })
    }

    /// Trigger of the bottom frame, for display.
    pub fn root_description(&self) -> String {
        match self.frames.first() {
            Some(Frame::Plan(p)) => format!(
                "{}{}",
                p.plan.trigger.kind.prefix(),
                p.subst.apply(&p.plan.trigger.literal)
            ),
            Some(Frame::Solve(s)) => {
                let steps: Vec<String> = s.steps.iter().map(|b| b.to_string()).collect();
                format!("solve([{}])", steps.join(","))
            }
            Some(Frame::Try(t)) => format!("+!{}", t.goal),
            Some(Frame::Durative(d)) => d.action.to_string(),
            None => String::new(),
        }
    }
}
