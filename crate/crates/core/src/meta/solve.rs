//! Solving step lists with explicit plan trying.

use crate::lang::{BodyStep, Term, TriggerKind};
use crate::logic::Substitution;
use crate::runtime::{Agent, Frame, Intention};

use super::{GoalPlanPath, PathEntry};

/// Executes a list of steps; achievement goals inside it are solved by [`TryFrame`]s.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveFrame {
    pub steps: Vec<BodyStep>,
    pub subst: Substitution,
    pub step: usize,
    /// Position of this list in the solve tree; step `i` sits at `position ++ [i]`.
    pub position: Vec<Term>,
    /// Label and trigger literal of the plan whose body this is.
    pub plan: Option<(String, Term)>,
    /// Step index that continues the guided path, with the path from there.
    pub guide: Option<(usize, Vec<PathEntry>)>,
}

impl SolveFrame {
    /// `position` keeps tried-beliefs of separate solves apart.
    pub fn root(
        steps: Vec<BodyStep>,
        path: Option<GoalPlanPath>,
        position: Vec<Term>,
    ) -> SolveFrame {
        SolveFrame {
            steps,
            subst: Substitution::new(),
            step: 0,
            position,
            plan: None,
            guide: path
                .filter(|p| !p.entries.is_empty())
                .map(|p| (0, p.entries)),
        }
    }
}

/// Tries the relevant plans for a goal in library order, each at most once.
#[derive(Clone, Debug, PartialEq)]
pub struct TryFrame {
    pub goal: Term,
    pub position: Vec<Term>,
    pub path: Option<Vec<PathEntry>>,
    pub check_context: bool,
    pub attempting: Option<String>,
}

impl TryFrame {
    pub fn is_guided(&self) -> bool {
        self.path.is_some()
    }

    pub fn position_term(&self) -> Term {
        Term::List(self.position.clone())
    }

    pub fn tried(&self, label: &str) -> Term {
        Term::compound("tried", vec![self.position_term(), Term::atom(label)])
    }

    /// Matches every tried-belief at this position.
    pub fn tried_pattern(&self) -> Term {
        Term::compound("tried", vec![self.position_term(), Term::var("_")])
    }
}

impl Agent {
    pub(crate) fn push_try(&mut self, int: &mut Intention, goal: Term) {
        let Some(Frame::Solve(parent)) = int.frames.last() else {
            return;
        };
        let mut position = parent.position.clone();
        position.push(Term::Int(parent.step as i64));
        let path = match &parent.guide {
            Some((idx, path)) if *idx == parent.step => Some(path.clone()),
            _ => None,
        };
        // contexts below the first guided choice are not re-checked
        let check_context = path.is_none() || parent.plan.is_none();
        int.frames.push(Frame::Try(TryFrame {
            goal,
            position,
            path,
            check_context,
            attempting: None,
        }));
    }

    pub(crate) fn step_try(&mut self, int: &mut Intention) {
        let Some(Frame::Try(t)) = int.frames.last() else {
            return;
        };
        let t = t.clone();
        let chosen = match &t.path {
            Some(path) => {
                let entry = &path[0];
                let plan = self
                    .plans
                    .iter()
                    .find(|p| {
                        p.label == entry.label
                            && p.trigger.kind == TriggerKind::GoalAdd
                            && !self.is_guard(&p.label)
                    })
                    .cloned();
                match plan.and_then(|p| self.instantiate(&p, &t.goal, t.check_context)) {
                    Some(found) => {
                        let guide = (path.len() > 1).then(|| (entry.step, path[1..].to_vec()));
                        Some((found, guide))
                    }
                    None => {
                        self.fail(
                            int,
                            &format!("guided plan @{} not applicable to {}", entry.label, t.goal),
                        );
                        return;
                    }
                }
            }
            None => {
                let relevant = self.relevant_plans(TriggerKind::GoalAdd, &t.goal, true);
                if relevant.is_empty() {
                    self.fail(int, &format!("no relevant plan for {}", t.goal));
                    return;
                }
                let mut found = None;
                for plan in relevant {
                    if self.beliefs.holds_fact(&t.tried(&plan.label)) {
                        continue;
                    }
                    if let Some(f) = self.instantiate(&plan, &t.goal, true) {
                        found = Some((f, None));
                        break;
                    }
                }
                found
            }
        };
        let Some(((plan, subst), guide)) = chosen else {
            self.del_beliefs(&t.tried_pattern(), Some(int.id));
            int.frames.pop();
            self.fail(int, &format!("all plans for {} tried", t.goal));
            return;
        };
        self.add_belief(t.tried(&plan.label), Some(int.id));
        if let Some(Frame::Try(top)) = int.frames.last_mut() {
            top.attempting = Some(plan.label.clone());
        }
        let mut position = t.position.clone();
        position.push(Term::atom(plan.label.clone()));
        int.frames.push(Frame::Solve(SolveFrame {
            steps: plan.body.clone(),
            subst,
            step: 0,
            position,
            plan: Some((plan.label.clone(), plan.trigger.literal.clone())),
            guide,
        }));
        if self.top_body_done(int) {
            self.complete_top(int);
        }
    }
}
