//! Synchronous multi-agent simulation over a [`CareWorld`].

mod manifest;

pub use manifest::{AgentSpec, Manifest, DEFAULT_STEPS};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::env::{CareWorld, Environment};
use crate::lang::Term;
use crate::runtime::{Agent, AgentConfig, TraceKind};

pub const TICKER: &str = "ticker";

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("{0}: {1}")]
    Io(PathBuf, String),
    #[error("{0}: {1}")]
    Parse(PathBuf, String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("agent {0}: {1}")]
    Runtime(String, String),
    #[error("invariant violated at step {0}: {1}")]
    Invariant(u64, String),
}

impl SimError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Invariant(..) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub practice: bool,
    pub meta_period: Option<i64>,
    pub steps: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            practice: true,
            meta_period: None,
            steps: None,
        }
    }
}

/// One trace line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub step: u64,
    pub agent: String,
    pub kind: TraceKind,
    pub payload: Value,
}

impl TraceRecord {
    /// JSON with sorted keys.
    pub fn to_line(&self) -> String {
        let v = serde_json::to_value(self).expect("trace records serialize");
        serde_json::to_string(&v).expect("trace records serialize")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub practice: bool,
    pub steps: u64,
    pub final_tick: i64,
    pub mood: Option<String>,
    pub stimulation: Option<i64>,
    pub reading_overlap: i64,
    /// Landmark id to the tick it completed.
    pub landmarks: BTreeMap<String, i64>,
    pub practice_completed: Option<i64>,
    /// Distinct actions each agent attempted, in first-attempt order.
    pub actions: BTreeMap<String, Vec<String>>,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |o: &Option<i64>| o.map_or("-".to_string(), |v| v.to_string());
        writeln!(
            f,
            "practice:      {}",
            if self.practice { "enabled" } else { "disabled" }
        )?;
        writeln!(
            f,
            "steps:         {} (final tick {})",
            self.steps, self.final_tick
        )?;
        writeln!(f, "mood:          {}", self.mood.as_deref().unwrap_or("-"))?;
        writeln!(f, "stimulation:   {}", opt(&self.stimulation))?;
        writeln!(f, "overlap:       {}", self.reading_overlap)?;
        for (id, tick) in &self.landmarks {
            writeln!(f, "landmark {id}:   completed at {tick}")?;
        }
        writeln!(f, "practice done: {}", opt(&self.practice_completed))?;
        for (agent, acts) in &self.actions {
            writeln!(f, "actions {agent}: {}", acts.join(", "))?;
        }
        Ok(())
    }
}

pub struct Simulation {
    pub world: CareWorld,
    pub agents: Vec<Agent>,
    pub step: u64,
    pub trace: Vec<TraceRecord>,
    practice: bool,
    ticker: bool,
    outcomes: Vec<Vec<(u64, bool)>>,
    durative_execs: BTreeMap<(String, Term), i64>,
    /// Per agent: completed landmarks and transitions seen since the last selection.
    lm_completed: BTreeMap<String, BTreeSet<String>>,
    lm_seen: BTreeMap<String, BTreeSet<(String, String)>>,
    landmark_ticks: BTreeMap<String, i64>,
    practice_completed: Option<i64>,
    actions: BTreeMap<String, Vec<String>>,
}

impl Simulation {
    pub fn from_manifest(manifest: &Manifest, config: &SimConfig) -> Result<Simulation, SimError> {
        let mut agents = Vec::new();
        for spec in &manifest.agents {
            let program = manifest.program(spec)?;
            let mut cfg = AgentConfig {
                practice: config.practice,
                ..AgentConfig::default()
            };
            if let Some(p) = config.meta_period {
                cfg.meta_period = p;
            }
            let agent = Agent::new(&spec.name, program, cfg)
                .map_err(|e| SimError::Runtime(spec.name.clone(), e.to_string()))?;
            agents.push(agent);
        }
        let world = CareWorld::new(manifest.params.clone(), manifest.facts.clone());
        Ok(Simulation::new(
            world,
            agents,
            manifest.ticker,
            config.practice,
        ))
    }

    pub fn new(
        world: CareWorld,
        mut agents: Vec<Agent>,
        ticker: bool,
        practice: bool,
    ) -> Simulation {
        for a in &mut agents {
            a.perceive(&world.percepts(&a.name));
        }
        let n = agents.len();
        Simulation {
            world,
            agents,
            step: 0,
            trace: Vec::new(),
            practice,
            ticker,
            outcomes: vec![Vec::new(); n],
            durative_execs: BTreeMap::new(),
            lm_completed: BTreeMap::new(),
            lm_seen: BTreeMap::new(),
            landmark_ticks: BTreeMap::new(),
            practice_completed: None,
            actions: BTreeMap::new(),
        }
    }

    pub fn agent(&self, name: &str) -> Option<&Agent> {
        self.agents.iter().find(|a| a.name == name)
    }

    pub fn agent_mut(&mut self, name: &str) -> Option<&mut Agent> {
        self.agents.iter_mut().find(|a| a.name == name)
    }

    fn record(&mut self, agent: &str, kind: TraceKind, payload: Value) {
        self.trace.push(TraceRecord {
            step: self.step,
            agent: agent.to_string(),
            kind,
            payload,
        });
    }

    /// Every agent reasons once against the same world, then actions apply in
    /// agent order, the ticker ticks last and percepts are redistributed.
    pub fn step(&mut self) -> Result<(), SimError> {
        self.step += 1;
        let tick = self.world.tick();
        let first_record = self.trace.len();
        let mut requests = Vec::new();
        for (i, agent) in self.agents.iter_mut().enumerate() {
            let outcomes = std::mem::take(&mut self.outcomes[i]);
            let reqs = agent.step(tick, &outcomes);
            let items = agent.drain_trace();
            let name = agent.name.clone();
            for item in items {
                self.trace.push(TraceRecord {
                    step: self.step,
                    agent: name.clone(),
                    kind: item.kind,
                    payload: item.payload,
                });
            }
            requests.push((i, name, reqs));
        }
        for (i, name, reqs) in requests {
            for req in reqs {
                let ok = self.world.execute(&name, &req.action);
                self.outcomes[i].push((req.id, ok));
                if ok
                    && req
                        .action
                        .annots()
                        .iter()
                        .any(|a| a.is_functor("durative", 0))
                    && !req.action.is_functor("stop", 1)
                {
                    *self
                        .durative_execs
                        .entry((name.clone(), req.action.strip_annots()))
                        .or_default() += 1;
                }
                let bare = req.action.strip_annots();
                let label = match bare.functor() {
                    Some("stop") => format!("stop({})", bare.args()[0]),
                    _ => bare.to_string(),
                };
                let seen = self.actions.entry(name.clone()).or_default();
                if !seen.contains(&label) {
                    seen.push(label);
                }
                self.record(
                    &name,
                    TraceKind::Action,
                    json!({ "action": req.action.to_string(), "id": req.id, "intention": req.intention,
                            "ok": ok, "tick": tick }),
                );
            }
        }
        if self.ticker {
            self.world.execute(TICKER, &Term::atom("tick"));
            self.record(
                TICKER,
                TraceKind::Action,
                json!({ "action": "tick", "ok": true, "tick": tick }),
            );
        }
        for agent in &mut self.agents {
            agent.perceive(&self.world.percepts(&agent.name));
        }
        self.check_step(first_record, tick)
    }

    pub fn run(&mut self, steps: usize) -> Result<(), SimError> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    fn check_step(&mut self, from: usize, tick: i64) -> Result<(), SimError> {
        let records: Vec<TraceRecord> = self.trace[from..].to_vec();
        for r in &records {
            match r.kind {
                TraceKind::Practice if r.payload["status"] == "selected" => {
                    self.lm_completed.remove(&r.agent);
                    self.lm_seen.remove(&r.agent);
                }
                TraceKind::Practice if r.payload["status"] == "completed" => {
                    self.practice_completed.get_or_insert(tick);
                }
                TraceKind::Landmark => {
                    let (Some(id), Some(status)) =
                        (r.payload["landmark"].as_str(), r.payload["status"].as_str())
                    else {
                        continue;
                    };
                    let seen = self.lm_seen.entry(r.agent.clone()).or_default();
                    if !seen.insert((id.to_string(), status.to_string())) {
                        return Err(SimError::Invariant(
                            self.step,
                            format!("landmark {id} became {status} twice"),
                        ));
                    }
                    match status {
                        "monitored" => self.check_priors(&r.agent, id)?,
                        "completed" => {
                            self.lm_completed
                                .entry(r.agent.clone())
                                .or_default()
                                .insert(id.to_string());
                            self.landmark_ticks.entry(id.to_string()).or_insert(tick);
                        }
                        _ => {}
                    }
                }
                _ => {}
            }
        }
        if let Some((due, at, cause)) = self.world.fired.iter().find(|(due, at, _)| due != at) {
            return Err(SimError::Invariant(
                self.step,
                format!("{cause} due at {due} fired at {at}"),
            ));
        }
        for (actor, action, ivs) in self.world.history.iter() {
            let covered: i64 = ivs.iter().map(|iv| iv.len()).sum();
            let execs = self
                .durative_execs
                .get(&(actor.to_string(), action.clone()))
                .copied()
                .unwrap_or(0);
            if covered != execs {
                return Err(SimError::Invariant(
                    self.step,
                    format!(
                        "{actor} {action}: intervals cover {covered} ticks for {execs} executions"
                    ),
                ));
            }
        }
        Ok(())
    }

    fn check_priors(&self, agent: &str, id: &str) -> Result<(), SimError> {
        let Some(engine) = self.agent(agent).and_then(|a| a.practice.as_ref()) else {
            return Ok(());
        };
        let Some(p) = engine.selected_practice() else {
            return Ok(());
        };
        let done = self.lm_completed.get(agent).cloned().unwrap_or_default();
        if p.graph.priors_satisfied(id, &done) {
            Ok(())
        } else {
            Err(SimError::Invariant(
                self.step,
                format!("landmark {id} monitored before its priors completed"),
            ))
        }
    }

    pub fn summary(&self) -> Summary {
        let read = Term::atom("read_newspaper");
        let readers: Vec<&str> = self.agents.iter().map(|a| a.name.as_str()).collect();
        let active: Vec<&str> = readers
            .into_iter()
            .filter(|r| !self.world.history.intervals(r, &read).is_empty())
            .collect();
        let reading_overlap = if active.len() < 2 {
            0
        } else {
            self.world.overlap(&read, &active)
        };
        Summary {
            practice: self.practice,
            steps: self.step,
            final_tick: self.world.tick(),
            mood: self.world.mood(),
            stimulation: self.world.stimulation,
            reading_overlap,
            landmarks: self.landmark_ticks.clone(),
            practice_completed: self.practice_completed,
            actions: self.actions.clone(),
        }
    }

    pub fn trace_lines(&self) -> Vec<String> {
        self.trace.iter().map(TraceRecord::to_line).collect()
    }
}

pub struct RunOutput {
    pub summary: Summary,
    pub trace: Vec<String>,
}

pub fn run(manifest: &Manifest, config: &SimConfig) -> Result<RunOutput, SimError> {
    let mut sim = Simulation::from_manifest(manifest, config)?;
    sim.run(config.steps.unwrap_or(manifest.steps))?;
    Ok(RunOutput {
        summary: sim.summary(),
        trace: sim.trace_lines(),
    })
}

/// Runs with and without the practice on the same manifest.
pub fn compare(
    manifest: &Manifest,
    config: &SimConfig,
) -> Result<(RunOutput, RunOutput), SimError> {
    let with = run(
        manifest,
        &SimConfig {
            practice: true,
            ..config.clone()
        },
    )?;
    let without = run(
        manifest,
        &SimConfig {
            practice: false,
            ..config.clone()
        },
    )?;
    Ok((with, without))
}

/// Side-by-side table of two summaries.
pub fn compare_table(a: &Summary, b: &Summary) -> String {
    let opt = |o: Option<i64>| o.map_or("-".to_string(), |v| v.to_string());
    let mut rows: Vec<(String, String, String)> = vec![
        (
            "mood".into(),
            a.mood.clone().unwrap_or("-".into()),
            b.mood.clone().unwrap_or("-".into()),
        ),
        ("stimulation".into(), opt(a.stimulation), opt(b.stimulation)),
        (
            "overlap".into(),
            a.reading_overlap.to_string(),
            b.reading_overlap.to_string(),
        ),
        (
            "practice completed".into(),
            opt(a.practice_completed),
            opt(b.practice_completed),
        ),
    ];
    let ids: BTreeSet<&String> = a.landmarks.keys().chain(b.landmarks.keys()).collect();
    for id in ids {
        rows.push((
            format!("landmark {id}"),
            opt(a.landmarks.get(id).copied()),
            opt(b.landmarks.get(id).copied()),
        ));
    }
    let agents: BTreeSet<&String> = a.actions.keys().chain(b.actions.keys()).collect();
    for agent in agents {
        let acts = |s: &Summary| s.actions.get(agent).cloned().unwrap_or_default();
        let (x, y) = (acts(a), acts(b));
        let only = |p: &[String], q: &[String]| {
            p.iter()
                .filter(|v| !q.contains(v))
                .cloned()
                .collect::<Vec<_>>()
                .join(" ")
        };
        rows.push((format!("{agent} only"), only(&x, &y), only(&y, &x)));
    }
    let left = if a.practice {
        "practice"
    } else {
        "no practice"
    };
    let right = if b.practice {
        "practice"
    } else {
        "no practice"
    };
    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(8);
    let w1 = rows
        .iter()
        .map(|r| r.1.len())
        .max()
        .unwrap_or(0)
        .max(left.len());
    let mut out = format!("{:w0$}  {:w1$}  {}\n", "", left, right);
    for (k, x, y) in rows {
        let x = if x.is_empty() { "-".to_string() } else { x };
        let y = if y.is_empty() { "-".to_string() } else { y };
        let mark = if x == y { "" } else { "  *" };
        out.push_str(&format!("{k:w0$}  {x:w1$}  {y}{mark}\n"));
    }
    out
}
