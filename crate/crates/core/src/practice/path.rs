//! Search for a goal-plan path that reaches a given action.

use crate::lang::{StepKind, Term, TriggerKind};
use crate::logic::unify;
use crate::meta::{GoalPlanPath, PathEntry};
use crate::runtime::Agent;

/// Depth-first over plans in library order and body steps in order. Only the
/// first plan's context is checked; deeper choices are made at run time.
/// Paths are at most `depth` entries long.
pub fn find_guided_path(
    agent: &mut Agent,
    goal: &Term,
    action: &Term,
    depth: usize,
) -> Option<GoalPlanPath> {
    let target = action.strip_annots();
    search(agent, goal, &target, depth, true).map(|entries| GoalPlanPath { entries })
}

fn search(
    agent: &mut Agent,
    goal: &Term,
    action: &Term,
    depth: usize,
    top: bool,
) -> Option<Vec<PathEntry>> {
    if depth == 0 {
        return None;
    }
    for plan in agent.relevant_plans(TriggerKind::GoalAdd, goal, true) {
        let Some((renamed, subst)) = agent.instantiate(&plan, goal, top) else {
            continue;
        };
        for (i, step) in renamed.body.iter().enumerate() {
            let term = subst.apply(&step.term);
            let entry = || PathEntry {
                goal: goal.clone(),
                label: plan.label.clone(),
                step: i,
            };
            match step.kind {
                StepKind::Action if unify(&term.strip_annots(), action).is_some() => {
                    return Some(vec![entry()]);
                }
                StepKind::Achieve => {
                    if let Some(rest) = search(agent, &term, action, depth - 1, false) {
                        let mut out = vec![entry()];
                        out.extend(rest);
                        return Some(out);
                    }
                }
                _ => {}
            }
        }
    }
    None
}
