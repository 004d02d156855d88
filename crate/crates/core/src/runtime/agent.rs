//! The agent state and its reasoning cycle.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use serde_json::{json, Value};

use crate::lang::{AgentProgram, BodyStep, Plan, StepKind, Term, Trigger, TriggerKind};
use crate::logic::{
    query_with, unify, unify_in, BeliefBase, BeliefChange, Substitution, DEFAULT_DEPTH,
};
use crate::meta::{GoalPlanPath, SolveFrame};
use crate::practice::PracticeEngine;

use super::ebdg::ebdg_transform;
use super::intention::{Frame, Intention, IntentionId, IntentionStatus, PlanFrame, Wait};
use super::internal::{IaResult, InternalActions};
use super::RuntimeError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentConfig {
    pub query_depth: usize,
    /// Depth bound for goal-plan path search.
    pub path_depth: usize,
    /// Ticks slept between metadeliberation passes.
    pub meta_period: i64,
    /// Load declared social practices.
    pub practice: bool,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            query_depth: DEFAULT_DEPTH,
            path_depth: 3,
            meta_period: 2,
            practice: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Event,
    Action,
    Intention,
    Landmark,
    Practice,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceItem {
    pub kind: TraceKind,
    pub payload: Value,
}

/// An action handed to the environment; the reply arrives at the next step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionRequest {
    pub id: u64,
    pub intention: IntentionId,
    pub action: Term,
}

#[derive(Clone)]
pub struct Agent {
    pub name: String,
    pub config: AgentConfig,
    pub beliefs: BeliefBase,
    /// Plan library in selection order.
    pub plans: Vec<Plan>,
    pub events: VecDeque<Trigger>,
    pub intentions: BTreeMap<IntentionId, Intention>,
    pub practice: Option<PracticeEngine>,
    /// Guard plan label to purpose.
    guards: BTreeMap<String, Term>,
    internal: InternalActions,
    next_intention: IntentionId,
    next_action: u64,
    renames: u64,
    last_run: Option<IntentionId>,
    pending_actions: BTreeMap<u64, IntentionId>,
    outbox: Vec<ActionRequest>,
    trace: Vec<TraceItem>,
    now: i64,
}

pub(crate) fn percept_source() -> Term {
    Term::compound("source", vec![Term::atom("percept")])
}

impl Agent {
    pub fn new(
        name: &str,
        program: AgentProgram,
        config: AgentConfig,
    ) -> Result<Agent, RuntimeError> {
        Agent::with_internal_actions(name, program, config, InternalActions::standard())
    }

    pub fn with_internal_actions(
        name: &str,
        program: AgentProgram,
        config: AgentConfig,
        internal: InternalActions,
    ) -> Result<Agent, RuntimeError> {
        let mut agent = Agent {
            name: name.to_string(),
            config,
            beliefs: BeliefBase::new(),
            plans: Vec::new(),
            events: VecDeque::new(),
            intentions: BTreeMap::new(),
            practice: None,
            guards: BTreeMap::new(),
            internal,
            next_intention: 1,
            next_action: 1,
            renames: 0,
            last_run: None,
            pending_actions: BTreeMap::new(),
            outbox: Vec::new(),
            trace: Vec::new(),
            now: 0,
        };
        let ebdg_goals: Vec<Term> = program
            .beliefs
            .iter()
            .filter(|b| b.is_functor("ebdg", 1))
            .map(|b| b.args()[0].clone())
            .collect();
        let mut plans = program.plans;
        for goal in &ebdg_goals {
            plans = apply_ebdg(plans, goal, true)?;
        }
        agent.plans = plans;
        for rule in program.rules {
            agent.beliefs.add_rule(rule);
        }
        for b in program.beliefs {
            if let Some(change) = agent.beliefs.assert(b) {
                agent.post_belief_event(&change);
            }
        }
        for g in program.goals {
            agent.events.push_back(Trigger::goal_add(g));
        }
        if agent.config.practice && !program.practices.is_empty() {
            let engine = PracticeEngine::new(&program.practices, &program.landmarks)?;
            for plan in PracticeEngine::plans(agent.config.meta_period) {
                if agent.plans.iter().any(|p| p.label == plan.label) {
                    return Err(RuntimeError::DuplicateLabel(plan.label));
                }
                agent.plans.push(plan);
            }
            agent.practice = Some(engine);
            agent
                .events
                .push_back(Trigger::goal_add(Term::atom("metadeliberate")));
        }
        Ok(agent)
    }

    pub fn now(&self) -> i64 {
        self.now
    }

    /// One reasoning step: free bookkeeping, then one event or one intention step,
    /// then one iteration of any running durative action.
    pub fn step(&mut self, now: i64, outcomes: &[(u64, bool)]) -> Vec<ActionRequest> {
        self.now = now;
        for &(id, ok) in outcomes {
            self.process_outcome(id, ok);
        }
        self.check_waits();
        if let Some(iid) = self.atomic_candidate() {
            self.execute(iid);
        } else if !self.handle_one_event() {
            if let Some(iid) = self.next_round_robin() {
                self.execute(iid);
            }
        }
        self.durative_iteration();
        std::mem::take(&mut self.outbox)
    }

    /// Replaces the set of perceived facts, posting belief events for the differences.
    pub fn perceive(&mut self, percepts: &[Term]) {
        let src = percept_source();
        let fresh: BTreeSet<Term> = percepts.iter().map(Term::strip_outer_annots).collect();
        let current: Vec<Term> = self
            .beliefs
            .iter()
            .filter(|b| b.annots().contains(&src))
            .cloned()
            .collect();
        let mut have = BTreeSet::new();
        for b in current {
            let bare = b.strip_outer_annots();
            if fresh.contains(&bare) {
                have.insert(bare);
            } else if let Some(change) = self.beliefs.retract(&b) {
                self.post_belief_event(&change);
            }
        }
        for p in percepts {
            let bare = p.strip_outer_annots();
            if have.insert(bare.clone()) {
                if let Some(change) = self.beliefs.assert(bare.add_annot(src.clone())) {
                    self.post_belief_event(&change);
                }
            }
        }
    }

    pub fn drain_trace(&mut self) -> Vec<TraceItem> {
        std::mem::take(&mut self.trace)
    }

    pub(crate) fn trace(&mut self, kind: TraceKind, payload: Value) {
        self.trace.push(TraceItem { kind, payload });
    }

    pub fn holds(&self, goal: &Term) -> bool {
        query_with(
            &self.beliefs,
            goal,
            Substitution::new(),
            self.config.query_depth,
        )
        .next()
        .is_some()
    }

    pub fn query_first(&self, goal: &Term, subst: Substitution) -> Option<Substitution> {
        query_with(&self.beliefs, goal, subst, self.config.query_depth).next()
    }

    // ---- beliefs ----

    fn post_belief_event(&mut self, change: &BeliefChange) {
        let kind = if change.is_addition() {
            TriggerKind::BeliefAdd
        } else {
            TriggerKind::BeliefDel
        };
        self.events
            .push_back(Trigger::new(kind, change.literal().clone()));
    }

    /// Asserts a belief on the agent's own behalf, posting and tracing the change.
    pub fn add_belief(&mut self, literal: Term, intention: Option<IntentionId>) -> bool {
        match self.beliefs.assert(literal) {
            Some(change) => {
                self.record_change(&change, intention);
                true
            }
            None => false,
        }
    }

    /// Retracts the first match, returning the removed literal.
    pub fn del_belief(&mut self, pattern: &Term, intention: Option<IntentionId>) -> Option<Term> {
        let change = self.beliefs.retract(pattern)?;
        self.record_change(&change, intention);
        Some(change.literal().clone())
    }

    pub fn del_beliefs(&mut self, pattern: &Term, intention: Option<IntentionId>) -> usize {
        let mut n = 0;
        while self.del_belief(pattern, intention).is_some() {
            n += 1;
        }
        n
    }

    fn record_change(&mut self, change: &BeliefChange, intention: Option<IntentionId>) {
        let sign = if change.is_addition() { "+" } else { "-" };
        self.trace(
            TraceKind::Event,
            json!({ "belief": format!("{sign}{}", change.literal()), "intention": intention }),
        );
        self.post_belief_event(change);
    }

    // ---- plan library ----

    pub fn is_guard(&self, label: &str) -> bool {
        self.guards.contains_key(label)
    }

    pub fn guard_for(&self, purpose: &Term) -> Option<&str> {
        let bare = purpose.strip_annots();
        self.guards
            .iter()
            .find(|(_, p)| **p == bare)
            .map(|(l, _)| l.as_str())
    }

    /// Installs a plan that suspends any new intention for `purpose`, ahead of all other plans.
    pub fn install_guard_plan(&mut self, purpose: &Term) -> Result<String, RuntimeError> {
        let bare = purpose.strip_annots();
        if self.guard_for(&bare).is_some() {
            return Err(RuntimeError::DuplicateGuard(bare));
        }
        let mut n = self.guards.len();
        let label = loop {
            let candidate = format!("guard_{}_{n}", bare.functor().unwrap_or("goal"));
            if !self.plans.iter().any(|p| p.label == candidate) {
                break candidate;
            }
            n += 1;
        };
        let body = vec![
            BodyStep::action(Term::compound(".suspend_self", vec![bare.clone()])),
            BodyStep::achieve(bare.clone()),
        ];
        let plan = Plan::new(
            label.clone(),
            Trigger::goal_add(bare.clone()),
            Term::truth(),
            body,
        );
        self.plans.insert(0, plan);
        self.guards.insert(label.clone(), bare);
        Ok(label)
    }

    pub fn remove_guard_plan(&mut self, label: &str) -> Result<(), RuntimeError> {
        if self.guards.remove(label).is_none() {
            return Err(RuntimeError::UnknownGuard(label.to_string()));
        }
        self.plans.retain(|p| p.label != label);
        Ok(())
    }

    /// Plans whose trigger unifies with the event, in library order.
    pub fn relevant_plans(
        &self,
        kind: TriggerKind,
        literal: &Term,
        skip_guards: bool,
    ) -> Vec<Plan> {
        self.plans
            .iter()
            .filter(|p| p.trigger.kind == kind && !(skip_guards && self.is_guard(&p.label)))
            .filter(|p| unify(&p.trigger.literal.rename("~r"), literal).is_some())
            .cloned()
            .collect()
    }

    pub(crate) fn fresh_suffix(&mut self) -> String {
        self.renames += 1;
        format!("#{}", self.renames)
    }

    /// Renames `plan` apart and checks it against the event and its context.
    pub(crate) fn instantiate(
        &mut self,
        plan: &Plan,
        literal: &Term,
        check_context: bool,
    ) -> Option<(Plan, Substitution)> {
        let renamed = plan.rename(&self.fresh_suffix());
        let subst = unify(&renamed.trigger.literal, literal)?;
        let subst = if check_context {
            self.query_first(&renamed.context, subst)?
        } else {
            subst
        };
        Some((renamed, subst))
    }

    /// First applicable plan for the event.
    pub fn select_plan(
        &mut self,
        kind: TriggerKind,
        literal: &Term,
        skip_guards: bool,
    ) -> Option<(Plan, Substitution)> {
        for plan in self.relevant_plans(kind, literal, skip_guards) {
            if let Some(found) = self.instantiate(&plan, literal, true) {
                return Some(found);
            }
        }
        None
    }

    // ---- intentions ----

    fn new_intention_id(&mut self) -> IntentionId {
        let id = self.next_intention;
        self.next_intention += 1;
        id
    }

    fn add_intention(&mut self, frame: Frame, fallback: Option<Vec<BodyStep>>) -> IntentionId {
        let id = self.new_intention_id();
        let mut int = Intention::new(id, frame);
        int.fallback = fallback;
        self.trace(
            TraceKind::Intention,
            json!({ "intention": id, "status": "created", "goal": int.root_description() }),
        );
        self.intentions.insert(id, int);
        id
    }

    /// Starts an intention executing `steps` through the metainterpreter.
    pub fn spawn_solve(
        &mut self,
        steps: Vec<BodyStep>,
        path: Option<GoalPlanPath>,
        fallback: Option<Vec<BodyStep>>,
    ) -> Result<IntentionId, RuntimeError> {
        if let Some(path) = &path {
            for entry in &path.entries {
                if !self.plans.iter().any(|p| p.label == entry.label) {
                    return Err(RuntimeError::UnknownPlan(entry.label.clone()));
                }
            }
        }
        let root = vec![Term::Int(self.next_intention as i64)];
        Ok(self.add_intention(Frame::Solve(SolveFrame::root(steps, path, root)), fallback))
    }

    /// Runs `f` on an intention taken out of the set, putting it back unless it finished.
    pub(crate) fn with_intention<R>(
        &mut self,
        iid: IntentionId,
        f: impl FnOnce(&mut Agent, &mut Intention) -> R,
    ) -> Option<R> {
        let mut int = self.intentions.remove(&iid)?;
        let r = f(self, &mut int);
        if int.is_finished() {
            let status = if int.status == IntentionStatus::Succeeded {
                "succeeded"
            } else {
                "failed"
            };
            self.trace(
                TraceKind::Intention,
                json!({ "intention": iid, "status": status }),
            );
            if int.status == IntentionStatus::Failed {
                if let Some(steps) = int.fallback.take() {
                    let root = vec![Term::Int(self.next_intention as i64)];
                    self.add_intention(Frame::Solve(SolveFrame::root(steps, None, root)), None);
                }
            }
        } else {
            self.intentions.insert(iid, int);
        }
        Some(r)
    }

    fn atomic_candidate(&self) -> Option<IntentionId> {
        self.intentions
            .values()
            .find(|i| i.is_runnable() && i.has_atomic_frame())
            .map(|i| i.id)
    }

    fn next_round_robin(&mut self) -> Option<IntentionId> {
        let after = self.last_run.unwrap_or(0);
        let runnable = |i: &&Intention| i.is_runnable();
        let pick = self
            .intentions
            .range(after + 1..)
            .map(|(_, i)| i)
            .find(runnable)
            .or_else(|| self.intentions.values().find(runnable))
            .map(|i| i.id);
        if pick.is_some() {
            self.last_run = pick;
        }
        pick
    }

    fn handle_one_event(&mut self) -> bool {
        while let Some(trigger) = self.events.pop_front() {
            let skip_guards = false;
            let relevant = self.relevant_plans(trigger.kind, &trigger.literal, skip_guards);
            if relevant.is_empty() && trigger.kind != TriggerKind::GoalAdd {
                continue;
            }
            let mut chosen = None;
            for plan in &relevant {
                if let Some(found) = self.instantiate(plan, &trigger.literal, true) {
                    chosen = Some(found);
                    break;
                }
            }
            match chosen {
                Some((plan, subst)) => {
                    let label = plan.label.clone();
                    let id = self.add_intention(Frame::Plan(PlanFrame::new(plan, subst)), None);
                    self.trace(
                        TraceKind::Event,
                        json!({ "event": trigger.to_string(), "plan": label, "intention": id }),
                    );
                    self.with_intention(id, |ag, int| {
                        if ag.top_body_done(int) {
                            ag.complete_top(int);
                        }
                    });
                }
                None => {
                    tracing::debug!(agent = %self.name, event = %trigger, "no applicable plan");
                    self.trace(
                        TraceKind::Event,
                        json!({ "event": trigger.to_string(), "plan": Value::Null }),
                    );
                }
            }
            return true;
        }
        false
    }

    fn execute(&mut self, iid: IntentionId) {
        self.with_intention(iid, |ag, int| ag.exec_top(int));
    }

    fn exec_top(&mut self, int: &mut Intention) {
        match int.frames.last() {
            Some(Frame::Plan(_) | Frame::Solve(_)) => {
                let (steps, subst, idx) =
                    int.frames.last().and_then(Frame::body).expect("body frame");
                let raw = steps[idx].clone();
                let subst = subst.clone();
                self.exec_body_step(int, raw, subst);
            }
            Some(Frame::Try(_)) => self.step_try(int),
            _ => {}
        }
    }

    fn exec_body_step(&mut self, int: &mut Intention, raw: BodyStep, subst: Substitution) {
        let term = subst.apply(&raw.term);
        let in_solve = matches!(int.frames.last(), Some(Frame::Solve(_)));
        match raw.kind {
            StepKind::Action => {
                if let Some(spec) = self.durative_spec(&term) {
                    self.start_durative(int, term, spec);
                } else {
                    let id = self.emit_action(int.id, term);
                    int.wait = Some(Wait::Action(id));
                }
            }
            StepKind::InternalAction => self.internal_action(int, term),
            StepKind::Achieve => {
                if term.is_functor("solve", 1) {
                    match term.args()[0].as_list() {
                        Some(items) => {
                            let steps = items.iter().cloned().map(BodyStep::from_term).collect();
                            let root =
                                vec![Term::Int(int.id as i64), Term::Int(int.frames.len() as i64)];
                            int.frames
                                .push(Frame::Solve(SolveFrame::root(steps, None, root)));
                            if self.top_body_done(int) {
                                self.complete_top(int);
                            }
                        }
                        None => self.fail(int, "solve expects a list of steps"),
                    }
                } else if in_solve {
                    self.push_try(int, term);
                } else {
                    match self.select_plan(TriggerKind::GoalAdd, &term, false) {
                        Some((plan, s)) => self.push_plan(int, plan, s),
                        None => self.fail(int, &format!("no applicable plan for +!{term}")),
                    }
                }
            }
            StepKind::AchieveNew => {
                self.events.push_back(Trigger::goal_add(term));
                self.advance(int, None);
            }
            StepKind::Test => match self.query_first(&raw.term, subst) {
                Some(s) => self.advance(int, Some(s)),
                None => self.fail(int, &format!("test ?{term} failed")),
            },
            StepKind::AddBelief => {
                self.add_belief(term, Some(int.id));
                self.advance(int, None);
            }
            StepKind::DelBelief => {
                let bound = self.del_belief(&term, Some(int.id)).and_then(|removed| {
                    let mut s = subst.clone();
                    unify_in(&raw.term, &removed, &mut s).then_some(s)
                });
                self.advance(int, bound);
            }
        }
    }

    fn internal_action(&mut self, int: &mut Intention, term: Term) {
        let name = term.functor().unwrap_or_default().to_string();
        let Some(f) = self.internal.get(&name) else {
            self.fail(int, &format!("unknown internal action {name}"));
            return;
        };
        match f(self, int, term.args()) {
            IaResult::Done => self.advance(int, None),
            IaResult::Fail(reason) => self.fail(int, &reason),
            IaResult::Block(wait) => int.wait = Some(wait),
        }
    }

    pub(crate) fn emit_action(&mut self, iid: IntentionId, action: Term) -> u64 {
        let id = self.next_action;
        self.next_action += 1;
        self.pending_actions.insert(id, iid);
        self.outbox.push(ActionRequest {
            id,
            intention: iid,
            action,
        });
        id
    }

    fn process_outcome(&mut self, id: u64, ok: bool) {
        let Some(iid) = self.pending_actions.remove(&id) else {
            return;
        };
        self.with_intention(iid, |ag, int| {
            if int.wait == Some(Wait::Action(id)) {
                int.wait = None;
                if ok {
                    ag.advance(int, None);
                } else {
                    ag.fail(int, "action failed");
                }
            } else if matches!(int.frames.last(), Some(Frame::Durative(_))) {
                ag.durative_outcome(int, id, ok);
            }
        });
    }

    fn check_waits(&mut self) {
        let waiting: Vec<IntentionId> = self
            .intentions
            .values()
            .filter(|i| {
                i.is_active() && matches!(i.wait, Some(Wait::Condition { .. } | Wait::Until(_)))
            })
            .map(|i| i.id)
            .collect();
        for iid in waiting {
            self.with_intention(iid, |ag, int| match int.wait.clone() {
                Some(Wait::Condition { cond, deadline }) => {
                    if ag.holds(&cond) {
                        int.wait = None;
                        ag.advance(int, None);
                    } else if deadline.is_some_and(|d| ag.now >= d) {
                        int.wait = None;
                        ag.fail(int, &format!("timed out waiting for {cond}"));
                    }
                }
                Some(Wait::Until(t)) if ag.now >= t => {
                    int.wait = None;
                    ag.advance(int, None);
                }
                _ => {}
            });
        }
    }

    // ---- frame transitions ----

    pub(crate) fn top_body_done(&self, int: &Intention) -> bool {
        matches!(int.frames.last().and_then(Frame::body), Some((steps, _, idx)) if idx >= steps.len())
    }

    pub(crate) fn push_plan(&mut self, int: &mut Intention, plan: Plan, subst: Substitution) {
        int.frames.push(Frame::Plan(PlanFrame::new(plan, subst)));
        if self.top_body_done(int) {
            self.complete_top(int);
        }
    }

    /// Moves the top body frame past its current step.
    pub(crate) fn advance(&mut self, int: &mut Intention, subst: Option<Substitution>) {
        let Some((steps, s, idx)) = int.frames.last_mut().and_then(Frame::body_mut) else {
            return;
        };
        if let Some(new) = subst {
            *s = new;
        }
        *idx += 1;
        if *idx >= steps.len() {
            self.complete_top(int);
        }
    }

    fn frame_result(frame: &Frame) -> Option<Term> {
        match frame {
            Frame::Plan(p) => match p.plan.trigger.kind {
                TriggerKind::GoalAdd | TriggerKind::GoalDel => {
                    Some(p.subst.apply(&p.plan.trigger.literal))
                }
                _ => None,
            },
            Frame::Solve(s) => s.plan.as_ref().map(|(_, trigger)| s.subst.apply(trigger)),
            _ => None,
        }
    }

    /// Pops the finished top frame and resumes its parents.
    pub(crate) fn complete_top(&mut self, int: &mut Intention) {
        let Some(done) = int.frames.pop() else {
            return;
        };
        let result = Agent::frame_result(&done);
        self.resume_parent(int, result);
    }

    fn resume_parent(&mut self, int: &mut Intention, mut result: Option<Term>) {
        loop {
            let Some(parent) = int.frames.last_mut() else {
                int.status = IntentionStatus::Succeeded;
                return;
            };
            match parent {
                // the handler achieved the goal this frame failed on
                Frame::Plan(p) if p.failed => {
                    int.frames.pop();
                }
                Frame::Plan(_) | Frame::Solve(_) => {
                    let (steps, subst, idx) = parent.body_mut().expect("body frame");
                    if let Some(r) = &result {
                        let pending = &steps[*idx];
                        if pending.kind == StepKind::Achieve {
                            unify_in(&pending.term, r, subst);
                        }
                    }
                    *idx += 1;
                    if *idx < steps.len() {
                        return;
                    }
                    let done = int.frames.pop().expect("parent");
                    result = Agent::frame_result(&done);
                }
                Frame::Try(t) => {
                    let pattern = t.tried_pattern();
                    int.frames.pop();
                    self.del_beliefs(&pattern, Some(int.id));
                }
                Frame::Durative(d) => {
                    let failed = d.failed;
                    int.frames.pop();
                    if failed {
                        self.fail(int, "durative action failed");
                        return;
                    }
                    result = None;
                }
            }
        }
    }

    /// Propagates failure down the stack until a handler or plan alternative takes over.
    pub(crate) fn fail(&mut self, int: &mut Intention, reason: &str) {
        tracing::debug!(agent = %self.name, intention = int.id, reason, "step failed");
        int.wait = None;
        loop {
            let Some(top) = int.frames.last_mut() else {
                int.status = IntentionStatus::Failed;
                self.trace(
                    TraceKind::Intention,
                    json!({ "intention": int.id, "status": "failing", "reason": reason }),
                );
                return;
            };
            match top {
                Frame::Plan(p) if p.failed => {
                    int.frames.pop();
                }
                Frame::Plan(p) if p.plan.trigger.kind == TriggerKind::GoalAdd => {
                    let goal = p.subst.apply(&p.plan.trigger.literal);
                    match self.select_plan(TriggerKind::GoalDel, &goal, false) {
                        Some((handler, s)) => {
                            p.failed = true;
                            self.trace(
                                TraceKind::Event,
                                json!({ "event": format!("-!{goal}"), "plan": handler.label, "intention": int.id }),
                            );
                            self.push_plan(int, handler, s);
                            return;
                        }
                        None => {
                            int.frames.pop();
                        }
                    }
                }
                Frame::Try(t) if !t.is_guided() => {
                    t.attempting = None;
                    return;
                }
                Frame::Try(t) => {
                    let pattern = t.tried_pattern();
                    int.frames.pop();
                    self.del_beliefs(&pattern, Some(int.id));
                }
                _ => {
                    int.frames.pop();
                }
            }
        }
    }

    // ---- suspension controls ----

    pub fn intentions_for(&self, goal: &Term) -> Vec<IntentionId> {
        self.intentions
            .values()
            .filter(|i| i.lowest_frame_for(goal).is_some())
            .map(|i| i.id)
            .collect()
    }

    pub fn suspend(&mut self, iid: IntentionId, reason: Term) -> bool {
        let Some(int) = self.intentions.get_mut(&iid) else {
            return false;
        };
        if int.is_finished() {
            return false;
        }
        int.status = IntentionStatus::Suspended(reason.clone());
        self.trace(
            TraceKind::Intention,
            json!({ "intention": iid, "status": "suspended", "reason": reason.to_string() }),
        );
        true
    }

    pub fn resume(&mut self, iid: IntentionId) -> bool {
        let Some(int) = self.intentions.get_mut(&iid) else {
            return false;
        };
        if !int.is_suspended() {
            return false;
        }
        int.status = IntentionStatus::Active;
        self.trace(
            TraceKind::Intention,
            json!({ "intention": iid, "status": "resumed" }),
        );
        true
    }

    /// Treats the lowest frame working on `goal` as completed and resumes its parent.
    pub fn succeed(&mut self, iid: IntentionId, goal: &Term) -> bool {
        let done = self.with_intention(iid, |ag, int| {
            let Some(idx) = int.lowest_frame_for(goal) else {
                return false;
            };
            let result = int.frames[idx].goal();
            int.frames.truncate(idx);
            int.wait = None;
            int.status = IntentionStatus::Active;
            ag.trace(
                TraceKind::Intention,
                json!({ "intention": int.id, "status": "goal-succeeded", "goal": goal.to_string() }),
            );
            ag.resume_parent(int, result);
            true
        });
        done.unwrap_or(false)
    }

    pub fn suspend_intentions(&mut self, goal: &Term) -> Vec<IntentionId> {
        let ids = self.intentions_for(goal);
        ids.into_iter()
            .filter(|id| self.suspend(*id, goal.clone()))
            .collect()
    }

    pub fn resume_intentions(&mut self, goal: &Term) -> usize {
        let ids = self.intentions_for(goal);
        ids.into_iter().filter(|id| self.resume(*id)).count()
    }

    pub fn succeed_intentions(&mut self, goal: &Term) -> usize {
        let ids = self.intentions_for(goal);
        ids.into_iter().filter(|id| self.succeed(*id, goal)).count()
    }
}

/// Replaces the plans for `goal` with their ebdg form, at the position of the first one.
pub fn apply_ebdg(
    plans: Vec<Plan>,
    goal: &Term,
    declarative: bool,
) -> Result<Vec<Plan>, RuntimeError> {
    let matches = |p: &Plan| {
        p.trigger.kind == TriggerKind::GoalAdd
            && p.trigger.literal.indicator() == goal.indicator()
            && unify(&p.trigger.literal, &goal.rename("~g")).is_some()
    };
    let group: Vec<Plan> = plans.iter().filter(|p| matches(p)).cloned().collect();
    if group.is_empty() {
        return Err(RuntimeError::NoPlansForEbdg(goal.clone()));
    }
    let first = plans.iter().position(matches).expect("group is nonempty");
    let transformed = ebdg_transform(goal, &group, declarative);
    let mut out: Vec<Plan> = Vec::new();
    for (i, p) in plans.into_iter().enumerate() {
        if i == first {
            out.extend(transformed.iter().cloned());
        }
        if !matches(&p) {
            out.push(p);
        }
    }
    let mut seen = BTreeSet::new();
    for p in &out {
        if !seen.insert(p.label.clone()) {
            return Err(RuntimeError::DuplicateLabel(p.label.clone()));
        }
    }
    Ok(out)
}
