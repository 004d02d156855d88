//! The care-robot domain: waking, coffee, pills and joint newspaper reading.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::lang::Term;

use super::intervals::{joint_overlap, IntervalHistory};
use super::Environment;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CareParams {
    /// Ticks between opening the curtains and the patient waking.
    pub curtain_delay: i64,
    /// Consecutive brewing ticks for pod coffee.
    pub pod_ticks: u32,
    /// Minimum overlap that counts as stimulating.
    pub s_min: i64,
    pub read_good: i64,
    pub read_bad: i64,
    pub end_time: i64,
    pub start_time: i64,
    pub mozart_effective: bool,
}

impl Default for CareParams {
    fn default() -> Self {
        CareParams {
            curtain_delay: 5,
            pod_ticks: 3,
            s_min: 20,
            read_good: 40,
            read_bad: 20,
            end_time: 1200,
            start_time: 800,
            mozart_effective: false,
        }
    }
}

/// A fact change that falls due at a later tick.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delayed {
    pub due: i64,
    pub cause: Term,
}

#[derive(Clone, Debug)]
pub struct CareWorld {
    pub params: CareParams,
    pub tick: i64,
    pub facts: BTreeSet<Term>,
    pub delayed: Vec<Delayed>,
    /// `(due, fired_at, cause)` for every delayed effect applied.
    pub fired: Vec<(i64, i64, Term)>,
    pub history: IntervalHistory,
    /// Standing notifications per agent.
    notices: BTreeMap<String, BTreeSet<Term>>,
    /// Joint action to (start tick, participants) while an episode is running.
    episodes: BTreeMap<Term, (i64, Vec<String>)>,
    brew: Option<(i64, u32)>,
    pub stimulation: Option<i64>,
}

fn mood(m: &str) -> Term {
    Term::compound("mood", vec![Term::atom(m)])
}

impl CareWorld {
    pub fn new(params: CareParams, initial: Vec<Term>) -> CareWorld {
        let mut facts: BTreeSet<Term> = initial.into_iter().collect();
        facts.insert(Term::compound(
            "read_duration",
            vec![Term::atom("good"), Term::Int(params.read_good)],
        ));
        facts.insert(Term::compound(
            "read_duration",
            vec![Term::atom("bad"), Term::Int(params.read_bad)],
        ));
        facts.insert(Term::compound(
            "morning_end",
            vec![Term::Int(params.end_time)],
        ));
        CareWorld {
            tick: params.start_time,
            params,
            facts,
            delayed: Vec::new(),
            fired: Vec::new(),
            history: IntervalHistory::new(),
            notices: BTreeMap::new(),
            episodes: BTreeMap::new(),
            brew: None,
            stimulation: None,
        }
    }

    pub fn holds(&self, fact: &Term) -> bool {
        self.facts.contains(fact)
    }

    pub fn mood(&self) -> Option<String> {
        self.facts
            .iter()
            .find(|f| f.is_functor("mood", 1))
            .and_then(|f| f.args()[0].as_atom())
            .map(str::to_string)
    }

    fn set_mood(&mut self, m: &str) {
        self.facts.retain(|f| !f.is_functor("mood", 1));
        self.facts.insert(mood(m));
    }

    fn wake(&mut self, m: &str) {
        self.facts.insert(Term::atom("awake"));
        self.set_mood(m);
    }

    fn notify(&mut self, to: &[String], except: &str, notice: Term, clears: Term) {
        for p in to.iter().filter(|p| p.as_str() != except) {
            let set = self.notices.entry(p.clone()).or_default();
            set.remove(&clears);
            set.insert(notice.clone());
        }
    }

    fn participants(action: &Term) -> Option<Vec<String>> {
        action
            .annots()
            .iter()
            .find(|a| a.is_functor("participants", 1))
            .and_then(|a| {
                a.args()[0].as_list().map(|l| {
                    l.iter()
                        .filter_map(|p| p.as_atom().map(str::to_string))
                        .collect()
                })
            })
    }

    fn durative_exec(&mut self, actor: &str, action: &Term) -> bool {
        let bare = action.strip_annots();
        let opened = self.history.execute(actor, &bare, self.tick);
        if let Some(ps) = Self::participants(action) {
            self.episodes
                .entry(bare.clone())
                .or_insert_with(|| (self.tick, ps.clone()));
            if opened {
                let started =
                    Term::compound("joint_started", vec![bare.clone(), Term::atom(actor)]);
                let stopped =
                    Term::compound("joint_stopped", vec![bare.clone(), Term::atom(actor)]);
                self.notify(&ps, actor, started, stopped);
            }
        }
        self.effect(actor, &bare)
    }

    fn stop(&mut self, actor: &str, action: &Term) -> bool {
        let bare = action.strip_annots();
        if !self.history.stop(actor, &bare) {
            return false;
        }
        if let Some(ps) =
            Self::participants(action).or_else(|| self.episodes.get(&bare).map(|e| e.1.clone()))
        {
            let started = Term::compound("joint_started", vec![bare.clone(), Term::atom(actor)]);
            let stopped = Term::compound("joint_stopped", vec![bare.clone(), Term::atom(actor)]);
            self.notify(&ps, actor, stopped, started);
        }
        self.close_episode(&bare);
        true
    }

    fn close_episode(&mut self, action: &Term) {
        let Some((start, ps)) = self.episodes.get(action).cloned() else {
            return;
        };
        if ps.iter().any(|p| self.history.is_open(p, action)) {
            return;
        }
        self.episodes.remove(action);
        let per: Vec<_> = ps
            .iter()
            .map(|p| {
                self.history
                    .intervals(p, action)
                    .iter()
                    .filter(|iv| iv.start >= start)
                    .copied()
                    .collect()
            })
            .collect();
        let overlap = joint_overlap(&per);
        if action.is_functor("read_newspaper", 0) {
            self.stimulation = Some(overlap);
            self.facts.retain(|f| !f.is_functor("stimulation", 1));
            self.facts
                .insert(Term::compound("stimulation", vec![Term::Int(overlap)]));
            if overlap >= self.params.s_min {
                self.facts.insert(Term::atom("mentally_stimulated"));
            }
        }
    }

    /// Effect table for plain actions and single durative executions.
    fn effect(&mut self, actor: &str, action: &Term) -> bool {
        let Some(name) = action.functor() else {
            return false;
        };
        match (name, action.arity()) {
            ("talk", 0) | ("read_newspaper", 0) => true,
            ("shake", 0) => {
                self.wake("bad");
                true
            }
            ("open_curtains", 0) => {
                self.facts.insert(Term::atom("curtains_open"));
                self.delayed.push(Delayed {
                    due: self.tick + self.params.curtain_delay,
                    cause: action.clone(),
                });
                true
            }
            ("make_pod_coffee", 0) => {
                let count = match self.brew {
                    Some((last, n)) if last + 1 == self.tick => n + 1,
                    Some((last, n)) if last == self.tick => n,
                    _ => 1,
                };
                self.brew = Some((self.tick, count));
                if count >= self.params.pod_ticks {
                    self.facts
                        .insert(Term::compound("coffee_ready", vec![Term::atom("pod")]));
                }
                true
            }
            ("make_instant_coffee", 0) => {
                self.facts
                    .insert(Term::compound("coffee_ready", vec![Term::atom("instant")]));
                true
            }
            ("serve_coffee", 0) => {
                if !self.facts.iter().any(|f| f.is_functor("coffee_ready", 1)) {
                    return false;
                }
                self.facts
                    .insert(Term::compound("served", vec![Term::atom("coffee")]));
                true
            }
            ("play_mozart", 0) => {
                if self.params.mozart_effective {
                    self.facts.insert(Term::atom("mentally_stimulated"));
                }
                true
            }
            ("take_pills", 0) => {
                self.facts.insert(Term::atom("pills_taken"));
                true
            }
            _ => {
                tracing::debug!(actor, "unknown action {action}");
                false
            }
        }
    }

    fn fire(&mut self, cause: &Term) {
        if cause.is_functor("open_curtains", 0) && !self.holds(&Term::atom("awake")) {
            self.wake("good");
        }
    }

    /// Participant intervals of an action, for overlap queries.
    pub fn overlap(&self, action: &Term, participants: &[&str]) -> i64 {
        let per: Vec<_> = participants
            .iter()
            .map(|p| self.history.intervals(p, action).to_vec())
            .collect();
        joint_overlap(&per)
    }
}

impl Environment for CareWorld {
    fn tick(&self) -> i64 {
        self.tick
    }

    fn execute(&mut self, actor: &str, action: &Term) -> bool {
        if action.is_functor("tick", 0) {
            self.advance();
            return true;
        }
        if action.is_functor("stop", 1) {
            return self.stop(
                actor,
                &action.args()[0]
                    .clone()
                    .with_annots(action.annots().to_vec()),
            );
        }
        if action.annots().iter().any(|a| a.is_functor("durative", 0)) {
            return self.durative_exec(actor, action);
        }
        self.effect(actor, &action.strip_annots())
    }

    fn percepts(&self, agent: &str) -> Vec<Term> {
        let mut out: Vec<Term> = self.facts.iter().cloned().collect();
        out.push(Term::compound("time", vec![Term::Int(self.tick)]));
        if let Some(n) = self.notices.get(agent) {
            out.extend(n.iter().cloned());
        }
        out
    }

    fn advance(&mut self) {
        self.tick += 1;
        let now = self.tick;
        let (due, rest): (Vec<_>, Vec<_>) = std::mem::take(&mut self.delayed)
            .into_iter()
            .partition(|d| d.due <= now);
        self.delayed = rest;
        for d in due {
            self.fire(&d.cause);
            self.fired.push((d.due, now, d.cause));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_term;

    fn world() -> CareWorld {
        CareWorld::new(
            CareParams {
                start_time: 10,
                ..CareParams::default()
            },
            vec![],
        )
    }

    #[test]
    fn curtains_wake_after_delay() {
        let mut w = world();
        assert!(w.execute("robot", &Term::atom("open_curtains")));
        for _ in 0..4 {
            w.advance();
            assert!(!w.holds(&Term::atom("awake")));
        }
        w.advance();
        assert_eq!(w.tick, 15);
        assert!(w.holds(&Term::atom("awake")));
        assert_eq!(w.mood().as_deref(), Some("good"));
    }

    #[test]
    fn serve_needs_coffee() {
        let mut w = world();
        let before = w.facts.clone();
        assert!(!w.execute("robot", &Term::atom("serve_coffee")));
        assert_eq!(w.facts, before);
        assert!(w.execute("robot", &Term::atom("make_instant_coffee")));
        assert!(w.execute("robot", &Term::atom("serve_coffee")));
    }

    #[test]
    fn joint_notifications() {
        let mut w = world();
        let read = parse_term("read_newspaper[durative, participants([robot, patient])]").unwrap();
        assert!(w.execute("robot", &read));
        assert!(w
            .percepts("patient")
            .contains(&parse_term("joint_started(read_newspaper, robot)").unwrap()));
        assert!(!w
            .percepts("robot")
            .iter()
            .any(|p| p.is_functor("joint_started", 2)));
        let stop =
            parse_term("stop(read_newspaper)[durative, participants([robot, patient])]").unwrap();
        assert!(w.execute("robot", &stop));
        assert!(!w.execute("robot", &stop));
        assert!(w
            .percepts("patient")
            .contains(&parse_term("joint_stopped(read_newspaper, robot)").unwrap()));
    }

    #[test]
    fn pod_needs_consecutive_ticks() {
        let mut w = world();
        let brew = parse_term("make_pod_coffee[durative]").unwrap();
        let ready = parse_term("coffee_ready(pod)").unwrap();
        w.execute("robot", &brew);
        w.advance();
        w.execute("robot", &brew);
        assert!(!w.holds(&ready));
        w.advance();
        w.execute("robot", &brew);
        assert!(w.holds(&ready));
    }
}
