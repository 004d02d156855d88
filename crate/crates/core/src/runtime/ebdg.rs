//! Exclusive backtracking declarative goals.

use crate::lang::{BodyStep, Plan, StepKind, Term, Trigger, TriggerKind};

fn tried(label: &str) -> Term {
    Term::compound("tried", vec![Term::atom(label)])
}

/// Rewrites the plans for one goal so each is tried at most once, in order,
/// until the goal holds or every plan has failed.
///
/// With `declarative` off, there is no entry plan and plan success does not
/// re-check the goal; the plans are then simply tried in order until one completes.
pub fn ebdg_transform(goal: &Term, plans: &[Plan], declarative: bool) -> Vec<Plan> {
    let base = goal.functor().unwrap_or("goal");
    let labels: Vec<&str> = plans.iter().map(|p| p.label.as_str()).collect();
    let clear: Vec<BodyStep> = labels
        .iter()
        .map(|l| BodyStep::new(StepKind::DelBelief, tried(l)))
        .collect();
    let mut out = Vec::new();

    if declarative {
        out.push(Plan::new(
            format!("{base}_ebdg_entry"),
            Trigger::goal_add(goal.clone()),
            goal.clone(),
            Vec::new(),
        ));
    }

    for plan in plans {
        let mut body = vec![BodyStep::new(StepKind::AddBelief, tried(&plan.label))];
        body.extend(plan.body.iter().cloned());
        if declarative {
            body.push(BodyStep::new(StepKind::Test, plan.trigger.literal.clone()));
        }
        body.extend(clear.iter().cloned());
        out.push(Plan {
            label: plan.label.clone(),
            atomic: plan.atomic,
            trigger: plan.trigger.clone(),
            context: Term::and(Term::not(tried(&plan.label)), plan.context.clone()),
            body,
        });
    }

    // retry while some untried plan is applicable to the failed goal
    let alternatives = plans.iter().enumerate().map(|(i, plan)| {
        let p = plan.rename(&format!("_{i}"));
        Term::conjunction([
            Term::compound("=", vec![goal.clone(), p.trigger.literal.clone()]),
            Term::not(tried(&plan.label)),
            p.context,
        ])
    });
    let retry_ctx = Term::disjunction(alternatives).expect("at least one plan");
    let retry_ctx = if declarative {
        Term::or(goal.clone(), retry_ctx)
    } else {
        retry_ctx
    };
    out.push(Plan::new(
        format!("{base}_ebdg_retry"),
        Trigger::new(TriggerKind::GoalDel, goal.clone()),
        retry_ctx,
        vec![BodyStep::achieve(goal.clone())],
    ));

    let mut giveup = clear;
    giveup.push(BodyStep::action(Term::atom(".fail")));
    out.push(Plan::new(
        format!("{base}_ebdg_giveup"),
        Trigger::new(TriggerKind::GoalDel, goal.clone()),
        Term::truth(),
        giveup,
    ));
    out
}
