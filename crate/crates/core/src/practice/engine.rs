//! Practice selection and landmark monitoring.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::lang::{BodyStep, LandmarkDecl, Plan, SocialPracticeDecl, Term, Trigger};
use crate::runtime::{Agent, IaResult, Intention, IntentionId, RuntimeError, TraceKind};

use super::graph::LandmarkGraph;
use super::path::find_guided_path;
use super::PracticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LandmarkStatus {
    Inactive,
    Monitored,
    Completed,
    Abandoned,
}

impl LandmarkStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LandmarkStatus::Inactive => "inactive",
            LandmarkStatus::Monitored => "monitored",
            LandmarkStatus::Completed => "completed",
            LandmarkStatus::Abandoned => "abandoned",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Practice {
    pub name: String,
    pub requirements: Vec<Term>,
    pub graph: LandmarkGraph,
}

impl Practice {
    pub fn requirement(&self) -> Term {
        Term::conjunction(self.requirements.clone())
    }
}

#[derive(Clone, Debug, Default)]
pub struct PracticeEngine {
    pub practices: Vec<Practice>,
    pub selected: Option<String>,
    pub status: BTreeMap<String, LandmarkStatus>,
    /// Intentions suspended on behalf of a purpose.
    pub suspensions: Vec<(Term, IntentionId)>,
    /// Purpose to guard plan label.
    pub guards: Vec<(Term, String)>,
    pub passes: u64,
    practice_done: bool,
}

impl PracticeEngine {
    pub fn new(
        decls: &[SocialPracticeDecl],
        landmarks: &[LandmarkDecl],
    ) -> Result<PracticeEngine, RuntimeError> {
        Self::build(decls, landmarks).map_err(|e| RuntimeError::Practice(e.to_string()))
    }

    fn build(
        decls: &[SocialPracticeDecl],
        landmarks: &[LandmarkDecl],
    ) -> Result<PracticeEngine, PracticeError> {
        for lm in landmarks {
            if !decls.iter().any(|d| d.name == lm.practice) {
                return Err(PracticeError::UnknownPractice {
                    landmark: lm.id.clone(),
                    practice: lm.practice.clone(),
                });
            }
        }
        let mut practices = Vec::new();
        for d in decls {
            if practices.iter().any(|p: &Practice| p.name == d.name) {
                return Err(PracticeError::DuplicatePractice(d.name.clone()));
            }
            let own: Vec<&LandmarkDecl> =
                landmarks.iter().filter(|l| l.practice == d.name).collect();
            if own.is_empty() {
                return Err(PracticeError::NoLandmarks(d.name.clone()));
            }
            let graph = LandmarkGraph::from_decls(&own)?;
            practices.push(Practice {
                name: d.name.clone(),
                requirements: d.requirements.clone(),
                graph,
            });
        }
        Ok(PracticeEngine::from_practices(practices))
    }

    pub fn from_practices(practices: Vec<Practice>) -> PracticeEngine {
        PracticeEngine {
            practices,
            ..PracticeEngine::default()
        }
    }

    /// The atomic deliberation plan and the delay that re-posts it.
    pub fn plans(period: i64) -> Vec<Plan> {
        let mut deliberate = Plan::new(
            "metadeliberate",
            Trigger::goal_add(Term::atom("metadeliberate")),
            Term::truth(),
            vec![BodyStep::action(Term::atom(".metadeliberate"))],
        );
        deliberate.atomic = true;
        let next = Plan::new(
            "metadeliberate_next",
            Trigger::goal_add(Term::atom("metadeliberate_next")),
            Term::truth(),
            vec![
                BodyStep::action(Term::compound(".sleep", vec![Term::Int(period)])),
                BodyStep::new(
                    crate::lang::StepKind::AchieveNew,
                    Term::atom("metadeliberate"),
                ),
            ],
        );
        vec![deliberate, next]
    }

    pub fn practice(&self, name: &str) -> Option<&Practice> {
        self.practices.iter().find(|p| p.name == name)
    }

    pub fn selected_practice(&self) -> Option<&Practice> {
        self.selected.as_deref().and_then(|n| self.practice(n))
    }

    pub fn landmark_status(&self, id: &str) -> Option<LandmarkStatus> {
        self.status.get(id).copied()
    }

    pub fn completed(&self) -> BTreeSet<String> {
        self.ids_with(LandmarkStatus::Completed)
            .into_iter()
            .collect()
    }

    pub fn monitored(&self) -> Vec<String> {
        self.ids_with(LandmarkStatus::Monitored)
    }

    fn ids_with(&self, status: LandmarkStatus) -> Vec<String> {
        let Some(p) = self.selected_practice() else {
            return Vec::new();
        };
        p.graph
            .landmarks
            .iter()
            .filter(|l| self.status.get(&l.id) == Some(&status))
            .map(|l| l.id.clone())
            .collect()
    }

    pub fn record_suspension(&mut self, purpose: Term, iid: IntentionId) {
        let purpose = purpose.strip_annots();
        if !self
            .suspensions
            .iter()
            .any(|(p, i)| *p == purpose && *i == iid)
        {
            self.suspensions.push((purpose, iid));
        }
    }

    /// Practices whose requirements currently hold, in declaration order.
    pub fn relevant_practices(&self, agent: &Agent) -> Vec<String> {
        self.practices
            .iter()
            .filter(|p| agent.holds(&p.requirement()))
            .map(|p| p.name.clone())
            .collect()
    }

    /// One pass: (re)select a practice, then check monitored landmarks.
    pub fn metadeliberate(&mut self, agent: &mut Agent) {
        self.passes += 1;
        let choice = self.relevant_practices(agent).into_iter().next();
        if self.selected != choice {
            if self.selected.is_some() {
                self.deselect(agent);
            }
            if let Some(name) = choice {
                self.select(agent, name);
            }
        }
        if let Some(p) = self.selected_practice().cloned() {
            for lm in &p.graph.landmarks {
                if self.status.get(&lm.id) == Some(&LandmarkStatus::Monitored)
                    && agent.holds(&lm.purpose)
                {
                    self.complete(agent, &p, &lm.id);
                }
            }
        }
        agent.trace(
            TraceKind::Practice,
            json!({
                "pass": self.passes,
                "selected": self.selected,
                "monitored": self.monitored(),
                "completed": self.completed(),
            }),
        );
    }

    fn select(&mut self, agent: &mut Agent, name: String) {
        let Some(p) = self.practice(&name).cloned() else {
            return;
        };
        self.selected = Some(name.clone());
        self.practice_done = false;
        self.status = p
            .graph
            .landmarks
            .iter()
            .map(|l| (l.id.clone(), LandmarkStatus::Inactive))
            .collect();
        agent.add_belief(
            Term::compound("selected_practice", vec![Term::atom(name.clone())]),
            None,
        );
        agent.trace(
            TraceKind::Practice,
            json!({ "practice": name, "status": "selected" }),
        );
        for lm in &p.graph.landmarks {
            let purpose = lm.purpose.strip_annots();
            for iid in agent.intentions_for(&purpose) {
                if agent.suspend(iid, purpose.clone()) {
                    self.record_suspension(purpose.clone(), iid);
                }
            }
            if agent.guard_for(&purpose).is_none() {
                if let Ok(label) = agent.install_guard_plan(&purpose) {
                    self.guards.push((purpose, label));
                }
            }
        }
        for lm in &p.graph.landmarks {
            if lm.priors.is_empty() {
                self.activate(agent, &p, &lm.id);
            }
        }
    }

    fn set_status(&mut self, agent: &mut Agent, practice: &str, id: &str, status: LandmarkStatus) {
        self.status.insert(id.to_string(), status);
        agent.trace(
            TraceKind::Landmark,
            json!({ "practice": practice, "landmark": id, "status": status.as_str() }),
        );
    }

    fn monitoring_belief(practice: &str, id: &str) -> Term {
        Term::compound("monitoring", vec![Term::atom(practice), Term::atom(id)])
    }

    fn activate(&mut self, agent: &mut Agent, p: &Practice, id: &str) {
        let Some(lm) = p.graph.get(id).cloned() else {
            return;
        };
        self.set_status(agent, &p.name, id, LandmarkStatus::Monitored);
        agent.add_belief(Self::monitoring_belief(&p.name, id), None);
        let Some((actor, action)) = lm.actions.first() else {
            return;
        };
        if *actor != agent.name {
            return;
        }
        let purpose = lm.purpose.strip_annots();
        let depth = agent.config.path_depth;
        let (steps, path, fallback, mode) = match find_guided_path(agent, &purpose, action, depth) {
            Some(path) => (
                vec![BodyStep::achieve(purpose.clone())],
                Some(path),
                None,
                "guided",
            ),
            None => (
                vec![BodyStep::action(action.clone())],
                None,
                Some(vec![BodyStep::achieve(purpose.clone())]),
                "direct",
            ),
        };
        let path_text = path.as_ref().map(ToString::to_string);
        match agent.spawn_solve(steps, path, fallback) {
            Ok(iid) => agent.trace(
                TraceKind::Landmark,
                json!({ "practice": p.name, "landmark": id, "dispatch": mode, "action": action.to_string(),
                        "path": path_text, "intention": iid }),
            ),
            Err(e) => tracing::warn!(landmark = id, "could not dispatch {action}: {e}"),
        }
    }

    fn complete(&mut self, agent: &mut Agent, p: &Practice, id: &str) {
        let Some(lm) = p.graph.get(id).cloned() else {
            return;
        };
        self.set_status(agent, &p.name, id, LandmarkStatus::Completed);
        agent.del_beliefs(&Self::monitoring_belief(&p.name, id), None);
        agent.add_belief(
            Term::compound(
                "completed_landmark",
                vec![Term::atom(p.name.clone()), Term::atom(id)],
            ),
            None,
        );
        let purpose = lm.purpose.strip_annots();
        let (done, rest): (Vec<_>, Vec<_>) = self
            .suspensions
            .drain(..)
            .partition(|(sp, _)| crate::logic::unify(sp, &purpose).is_some());
        self.suspensions = rest;
        for (sp, iid) in done {
            agent.succeed(iid, &sp);
        }
        self.drop_guard(agent, &purpose);
        if let Some(group) = p.graph.group_of(id) {
            for other in group {
                match self.status.get(other) {
                    Some(LandmarkStatus::Monitored) => {
                        agent.del_beliefs(&Self::monitoring_belief(&p.name, other), None);
                        self.set_status(agent, &p.name, other, LandmarkStatus::Abandoned);
                    }
                    Some(LandmarkStatus::Inactive) => {
                        self.set_status(agent, &p.name, other, LandmarkStatus::Abandoned)
                    }
                    _ => {}
                }
            }
        }
        let completed = self.completed();
        for next in &p.graph.landmarks {
            if self.status.get(&next.id) == Some(&LandmarkStatus::Inactive)
                && p.graph.priors_satisfied(&next.id, &completed)
            {
                self.activate(agent, p, &next.id);
            }
        }
        let finished = p.graph.landmarks.iter().all(|l| {
            matches!(
                self.status.get(&l.id),
                Some(LandmarkStatus::Completed | LandmarkStatus::Abandoned)
            )
        });
        if finished && !self.practice_done {
            self.practice_done = true;
            agent.add_belief(
                Term::compound("practice_completed", vec![Term::atom(p.name.clone())]),
                None,
            );
            agent.trace(
                TraceKind::Practice,
                json!({ "practice": p.name, "status": "completed" }),
            );
        }
    }

    fn drop_guard(&mut self, agent: &mut Agent, purpose: &Term) {
        if let Some(pos) = self.guards.iter().position(|(p, _)| p == purpose) {
            let (_, label) = self.guards.remove(pos);
            let _ = agent.remove_guard_plan(&label);
        }
    }

    fn deselect(&mut self, agent: &mut Agent) {
        let Some(p) = self.selected_practice().cloned() else {
            return;
        };
        for lm in &p.graph.landmarks {
            if self.status.get(&lm.id) == Some(&LandmarkStatus::Monitored) {
                agent.del_beliefs(&Self::monitoring_belief(&p.name, &lm.id), None);
                self.set_status(agent, &p.name, &lm.id, LandmarkStatus::Abandoned);
            }
        }
        for (_, label) in std::mem::take(&mut self.guards) {
            let _ = agent.remove_guard_plan(&label);
        }
        for (_, iid) in std::mem::take(&mut self.suspensions) {
            agent.resume(iid);
        }
        agent.del_beliefs(
            &Term::compound("selected_practice", vec![Term::var("_")]),
            None,
        );
        agent.trace(
            TraceKind::Practice,
            json!({ "practice": p.name, "status": "deselected" }),
        );
        self.selected = None;
        self.status.clear();
    }
}

/// `.metadeliberate`: runs one pass of the agent's practice engine and
/// schedules the next one as a separate intention.
pub fn ia_metadeliberate(agent: &mut Agent, _: &mut Intention, _: &[Term]) -> IaResult {
    let Some(mut engine) = agent.practice.take() else {
        return IaResult::Done;
    };
    engine.metadeliberate(agent);
    agent.practice = Some(engine);
    agent
        .events
        .push_back(Trigger::goal_add(Term::atom("metadeliberate_next")));
    IaResult::Done
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;
    use crate::runtime::AgentConfig;

    const SRC: &str = "
        ready.
        sp(demo, [ready]).
        lm(demo, a, [], [(bot, do_a)], done_a).
        lm(demo, b, [a], [(bot, do_b)], done_b).
        @pa +!done_a <- do_a.
        @pb +!done_b <- do_b.
    ";

    fn agent() -> Agent {
        Agent::new("bot", parse_program(SRC).unwrap(), AgentConfig::default()).unwrap()
    }

    #[test]
    fn selects_and_activates_roots() {
        let mut ag = agent();
        let mut engine = ag.practice.take().unwrap();
        engine.metadeliberate(&mut ag);
        assert_eq!(engine.selected.as_deref(), Some("demo"));
        assert_eq!(engine.landmark_status("a"), Some(LandmarkStatus::Monitored));
        assert_eq!(engine.landmark_status("b"), Some(LandmarkStatus::Inactive));
        assert!(ag.guard_for(&Term::atom("done_b")).is_some());
    }

    #[test]
    fn completion_activates_successor() {
        let mut ag = agent();
        let mut engine = ag.practice.take().unwrap();
        engine.metadeliberate(&mut ag);
        ag.add_belief(Term::atom("done_a"), None);
        engine.metadeliberate(&mut ag);
        assert_eq!(engine.landmark_status("a"), Some(LandmarkStatus::Completed));
        assert_eq!(engine.landmark_status("b"), Some(LandmarkStatus::Monitored));
        assert!(ag.guard_for(&Term::atom("done_a")).is_none());
    }

    #[test]
    fn deselect_when_requirements_fail() {
        let mut ag = agent();
        let mut engine = ag.practice.take().unwrap();
        engine.metadeliberate(&mut ag);
        ag.del_belief(&Term::atom("ready"), None);
        engine.metadeliberate(&mut ag);
        assert_eq!(engine.selected, None);
        assert!(ag.guard_for(&Term::atom("done_b")).is_none());
    }

    #[test]
    fn bad_declarations() {
        let prog = parse_program("sp(x, [true]). lm(y, a, [], [], p).").unwrap();
        assert!(PracticeEngine::new(&prog.practices, &prog.landmarks).is_err());
        let prog =
            parse_program("sp(x, [true]). lm(x, a, [b], [], p). lm(x, b, [a], [], q).").unwrap();
        assert!(PracticeEngine::new(&prog.practices, &prog.landmarks).is_err());
    }
}
