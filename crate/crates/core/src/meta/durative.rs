//! Durative and joint actions: repeated execution while a continuation holds.

use crate::lang::{Term, TriggerKind};
use crate::runtime::{Agent, Frame, Intention, IntentionId};

/// Looked up from `durative(Act, Cont)`, `durative(Act, Cont, Cleanup)` and
/// `joint(Act, Participants)` beliefs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DurativeSpec {
    /// 0-arity predicate queried before each execution.
    pub cont: Term,
    pub cleanup: Option<Term>,
    pub participants: Option<Vec<Term>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DurativePhase {
    Ready,
    Executing(u64),
    Stopping(u64),
    Cleanup,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DurativeFrame {
    pub action: Term,
    pub spec: DurativeSpec,
    pub executions: u32,
    pub phase: DurativePhase,
    pub failed: bool,
}

impl DurativeFrame {
    pub fn annots(&self) -> Vec<Term> {
        let mut out = vec![Term::atom("durative")];
        if let Some(ps) = &self.spec.participants {
            out.push(Term::compound("participants", vec![Term::List(ps.clone())]));
        }
        out
    }

    pub fn annotated_action(&self) -> Term {
        self.action.clone().with_annots(self.annots())
    }

    pub fn stop_action(&self) -> Term {
        Term::compound("stop", vec![self.action.clone()]).with_annots(self.annots())
    }
}

impl Agent {
    pub fn durative_spec(&self, action: &Term) -> Option<DurativeSpec> {
        let act = action.strip_annots();
        let matches = |decl: &Term| crate::logic::unify(&decl.args()[0], &act).is_some();
        let decl = self
            .beliefs
            .facts_for("durative", 2)
            .iter()
            .chain(self.beliefs.facts_for("durative", 3))
            .find(|d| matches(d))?;
        let participants = self
            .beliefs
            .facts_for("joint", 2)
            .iter()
            .find(|d| matches(d))
            .and_then(|d| d.args()[1].as_list().map(<[Term]>::to_vec));
        Some(DurativeSpec {
            cont: decl.args()[1].clone(),
            cleanup: decl.args().get(2).cloned(),
            participants,
        })
    }

    fn durative_running(&self) -> bool {
        self.intentions
            .values()
            .any(|i| i.frames.iter().any(|f| matches!(f, Frame::Durative(_))))
    }

    pub(crate) fn start_durative(&mut self, int: &mut Intention, action: Term, spec: DurativeSpec) {
        let act = action.strip_annots();
        if self.durative_running() || int.frames.iter().any(|f| matches!(f, Frame::Durative(_))) {
            self.fail(
                int,
                &format!("cannot start {act}: another durative action is running"),
            );
            return;
        }
        self.del_beliefs(
            &Term::compound("started", vec![act.clone(), Term::var("_")]),
            Some(int.id),
        );
        self.add_belief(
            Term::compound("started", vec![act.clone(), Term::Int(self.now())]),
            Some(int.id),
        );
        int.frames.push(Frame::Durative(DurativeFrame {
            action: act,
            spec,
            executions: 0,
            phase: DurativePhase::Ready,
            failed: false,
        }));
    }

    /// One loop iteration for every durative action ready to continue.
    pub(crate) fn durative_iteration(&mut self) {
        let ready: Vec<IntentionId> = self
            .intentions
            .values()
            .filter(|i| {
                i.is_active()
                    && matches!(i.frames.last(), Some(Frame::Durative(d)) if d.phase == DurativePhase::Ready)
            })
            .map(|i| i.id)
            .collect();
        for iid in ready {
            self.with_intention(iid, |ag, int| {
                let Some(Frame::Durative(d)) = int.frames.last() else {
                    return;
                };
                let (cont, exec, stop) =
                    (d.spec.cont.clone(), d.annotated_action(), d.stop_action());
                if ag.holds(&cont) {
                    let id = ag.emit_action(int.id, exec);
                    set_phase(int, DurativePhase::Executing(id));
                } else {
                    let id = ag.emit_action(int.id, stop);
                    set_phase(int, DurativePhase::Stopping(id));
                }
            });
        }
    }

    pub(crate) fn durative_outcome(&mut self, int: &mut Intention, id: u64, ok: bool) {
        let Some(Frame::Durative(d)) = int.frames.last_mut() else {
            return;
        };
        match d.phase {
            DurativePhase::Executing(x) if x == id => {
                if ok {
                    d.executions += 1;
                    d.phase = DurativePhase::Ready;
                } else {
                    d.failed = true;
                    let stop = d.stop_action();
                    let sid = self.emit_action(int.id, stop);
                    set_phase(int, DurativePhase::Stopping(sid));
                }
            }
            DurativePhase::Stopping(x) if x == id => {
                // a stop with nothing started has nothing to close
                if !ok && d.executions > 0 {
                    d.failed = true;
                }
                match d.spec.cleanup.clone() {
                    Some(goal) => {
                        d.phase = DurativePhase::Cleanup;
                        match self.select_plan(TriggerKind::GoalAdd, &goal, true) {
                            Some((plan, subst)) => self.push_plan(int, plan, subst),
                            None => self.finish_durative(int),
                        }
                    }
                    None => self.finish_durative(int),
                }
            }
            _ => {}
        }
    }

    fn finish_durative(&mut self, int: &mut Intention) {
        let failed = matches!(int.frames.last(), Some(Frame::Durative(d)) if d.failed);
        if failed {
            self.fail(int, "durative action failed");
        } else {
            self.complete_top(int);
        }
    }
}

fn set_phase(int: &mut Intention, phase: DurativePhase) {
    if let Some(Frame::Durative(d)) = int.frames.last_mut() {
        d.phase = phase;
    }
}
