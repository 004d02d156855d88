//! Scenario manifests (`.scn`), written as facts in the agent language:
//!
//! ```text
//! agent(robot, ["robot.asp", "morning.sp"]).
//! param(curtain_delay, 5).
//! fact(at(robot, bedroom)).
//! steps(200).
//! ```

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::env::CareParams;
use crate::lang::{parse_program, AgentProgram, Term};

use super::SimError;

#[derive(Clone, Debug, PartialEq)]
pub struct AgentSpec {
    pub name: String,
    pub files: Vec<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    pub agents: Vec<AgentSpec>,
    pub params: CareParams,
    pub facts: Vec<Term>,
    pub steps: usize,
    pub ticker: bool,
    pub base_dir: PathBuf,
}

pub const DEFAULT_STEPS: usize = 200;

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest, SimError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| SimError::Io(path.to_path_buf(), e.to_string()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Manifest::parse(&src, &base).map_err(|e| match e {
            SimError::Manifest(m) => SimError::Manifest(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(src: &str, base_dir: &Path) -> Result<Manifest, SimError> {
        let prog = parse_program(src).map_err(|e| SimError::Manifest(e.to_string()))?;
        if !prog.rules.is_empty() || !prog.plans.is_empty() || !prog.goals.is_empty() {
            return Err(SimError::Manifest(
                "only facts are allowed in a manifest".into(),
            ));
        }
        let mut agents = Vec::new();
        let mut params = Map::new();
        let mut facts = Vec::new();
        let mut steps = DEFAULT_STEPS;
        let mut ticker = true;
        let bad = |what: &str, t: &Term| SimError::Manifest(format!("malformed {what}: {t}"));
        for t in &prog.beliefs {
            match t.functor() {
                Some("agent") if t.arity() == 2 => {
                    let name = t.args()[0]
                        .as_atom()
                        .ok_or_else(|| bad("agent", t))?
                        .to_string();
                    let files = t.args()[1]
                        .as_list()
                        .ok_or_else(|| bad("agent", t))?
                        .iter()
                        .map(|f| match f {
                            Term::Str(s) => Ok(base_dir.join(s)),
                            _ => Err(bad("agent", t)),
                        })
                        .collect::<Result<_, _>>()?;
                    if agents.iter().any(|a: &AgentSpec| a.name == name) || name == "ticker" {
                        return Err(SimError::Manifest(format!("agent name {name} used twice")));
                    }
                    agents.push(AgentSpec { name, files });
                }
                Some("param") if t.arity() == 2 => {
                    let key = t.args()[0].as_atom().ok_or_else(|| bad("param", t))?;
                    let value = match &t.args()[1] {
                        Term::Int(n) => Value::from(*n),
                        v if v.as_atom() == Some("true") => Value::Bool(true),
                        v if v.as_atom() == Some("false") => Value::Bool(false),
                        _ => return Err(bad("param", t)),
                    };
                    params.insert(key.to_string(), value);
                }
                Some("fact") if t.arity() == 1 => facts.push(t.args()[0].clone()),
                Some("steps") if t.arity() == 1 => {
                    steps = t.args()[0]
                        .as_int()
                        .and_then(|n| usize::try_from(n).ok())
                        .ok_or_else(|| bad("steps", t))?;
                }
                Some("ticker") if t.arity() == 1 => ticker = t.args()[0].as_atom() != Some("off"),
                _ => return Err(SimError::Manifest(format!("unknown manifest entry {t}"))),
            }
        }
        let params: CareParams = serde_json::from_value(Value::Object(params))
            .map_err(|e| SimError::Manifest(e.to_string()))?;
        Ok(Manifest {
            agents,
            params,
            facts,
            steps,
            ticker,
            base_dir: base_dir.to_path_buf(),
        })
    }

    /// Reads and merges the program files of one agent.
    pub fn program(&self, agent: &AgentSpec) -> Result<AgentProgram, SimError> {
        let mut prog = AgentProgram::default();
        for f in &agent.files {
            let src =
                std::fs::read_to_string(f).map_err(|e| SimError::Io(f.clone(), e.to_string()))?;
            let part =
                parse_program(&src).map_err(|e| SimError::Parse(f.clone(), e.to_string()))?;
            prog.merge(part)
                .map_err(|e| SimError::Parse(f.clone(), e))?;
        }
        Ok(prog)
    }
}
