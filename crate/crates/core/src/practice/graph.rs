//! Landmark partial orders, from declarations or compiled plan patterns.

use std::collections::{BTreeMap, BTreeSet};

use crate::lang::{LandmarkDecl, PlanPattern, Term};

use super::PracticeError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Landmark {
    pub id: String,
    pub priors: Vec<String>,
    pub actions: Vec<(String, Term)>,
    pub purpose: Term,
}

/// Landmarks in declaration order, with optional disjunctive completion groups.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LandmarkGraph {
    pub landmarks: Vec<Landmark>,
    pub groups: Vec<Vec<String>>,
}

impl LandmarkGraph {
    pub fn from_decls(decls: &[&LandmarkDecl]) -> Result<LandmarkGraph, PracticeError> {
        let landmarks = decls
            .iter()
            .map(|d| Landmark {
                id: d.id.clone(),
                priors: d.priors.clone(),
                actions: d.actions.clone(),
                purpose: d.purpose.clone(),
            })
            .collect();
        let graph = LandmarkGraph {
            landmarks,
            groups: Vec::new(),
        };
        graph.validate()?;
        Ok(graph)
    }

    pub fn get(&self, id: &str) -> Option<&Landmark> {
        self.landmarks.iter().find(|l| l.id == id)
    }

    pub fn priors_of(&self, id: &str) -> BTreeSet<String> {
        self.get(id)
            .map(|l| l.priors.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn group_of(&self, id: &str) -> Option<&[String]> {
        self.groups
            .iter()
            .find(|g| g.iter().any(|m| m == id))
            .map(Vec::as_slice)
    }

    /// A landmark counts as reached if it, or any member of its group, completed.
    pub fn reached(&self, id: &str, completed: &BTreeSet<String>) -> bool {
        completed.contains(id)
            || self
                .group_of(id)
                .is_some_and(|g| g.iter().any(|m| completed.contains(m)))
    }

    pub fn priors_satisfied(&self, id: &str, completed: &BTreeSet<String>) -> bool {
        self.get(id)
            .is_some_and(|l| l.priors.iter().all(|p| self.reached(p, completed)))
    }

    pub fn successors(&self, id: &str) -> Vec<&str> {
        self.landmarks
            .iter()
            .filter(|l| l.priors.iter().any(|p| p == id))
            .map(|l| l.id.as_str())
            .collect()
    }

    /// Unique ids, known priors, no cycles.
    pub fn validate(&self) -> Result<(), PracticeError> {
        let mut ids = BTreeSet::new();
        for l in &self.landmarks {
            if !ids.insert(l.id.as_str()) {
                return Err(PracticeError::DuplicateLandmark(l.id.clone()));
            }
        }
        for l in &self.landmarks {
            for p in &l.priors {
                if !ids.contains(p.as_str()) {
                    return Err(PracticeError::UnknownPrior {
                        landmark: l.id.clone(),
                        prior: p.clone(),
                    });
                }
            }
        }
        // Kahn's algorithm
        let mut indegree: BTreeMap<&str, usize> = self
            .landmarks
            .iter()
            .map(|l| (l.id.as_str(), l.priors.len()))
            .collect();
        let mut ready: Vec<&str> = indegree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(id, _)| *id)
            .collect();
        let mut seen = 0;
        while let Some(id) = ready.pop() {
            seen += 1;
            for succ in self.successors(id) {
                let d = indegree.get_mut(succ).expect("known id");
                *d -= 1;
                if *d == 0 {
                    ready.push(succ);
                }
            }
        }
        if seen != self.landmarks.len() {
            return Err(PracticeError::Cyclic);
        }
        Ok(())
    }
}

struct Compiled {
    sources: Vec<String>,
    sinks: Vec<String>,
}

/// Compiles a plan pattern into landmarks: sequencing orders the last landmarks
/// of the left part before the first ones of the right part, parallel
/// composition adds no order, and a choice forms a completion group.
pub fn compile_plan_pattern(pp: &PlanPattern) -> Result<LandmarkGraph, PracticeError> {
    let mut graph = LandmarkGraph::default();
    compile(pp, &mut graph)?;
    graph.validate()?;
    Ok(graph)
}

fn push_unique(out: &mut Vec<String>, items: &[String]) {
    for i in items {
        if !out.contains(i) {
            out.push(i.clone());
        }
    }
}

fn compile(pp: &PlanPattern, graph: &mut LandmarkGraph) -> Result<Compiled, PracticeError> {
    match pp {
        PlanPattern::Segment { label, purpose } => {
            if graph.get(label).is_some() {
                return Err(PracticeError::DuplicateLandmark(label.clone()));
            }
            graph.landmarks.push(Landmark {
                id: label.clone(),
                priors: Vec::new(),
                actions: Vec::new(),
                purpose: purpose.clone(),
            });
            Ok(Compiled {
                sources: vec![label.clone()],
                sinks: vec![label.clone()],
            })
        }
        PlanPattern::Par(l, r) => {
            let a = compile(l, graph)?;
            let b = compile(r, graph)?;
            let mut sources = a.sources;
            push_unique(&mut sources, &b.sources);
            let mut sinks = a.sinks;
            push_unique(&mut sinks, &b.sinks);
            Ok(Compiled { sources, sinks })
        }
        PlanPattern::Seq(l, r) => {
            let a = compile(l, graph)?;
            let b = compile(r, graph)?;
            for id in &b.sources {
                let lm = graph
                    .landmarks
                    .iter_mut()
                    .find(|x| &x.id == id)
                    .expect("compiled");
                push_unique(&mut lm.priors, &a.sinks);
            }
            Ok(Compiled {
                sources: a.sources,
                sinks: b.sinks,
            })
        }
        PlanPattern::Choice(..) => {
            let mut members = Vec::new();
            flatten_choice(pp, &mut members)?;
            let mut ids = Vec::new();
            for (label, purpose) in members {
                let c = compile(&PlanPattern::segment(label, purpose.clone()), graph)?;
                ids.extend(c.sources);
            }
            graph.groups.push(ids.clone());
            Ok(Compiled {
                sources: ids.clone(),
                sinks: ids,
            })
        }
    }
}

fn flatten_choice<'a>(
    pp: &'a PlanPattern,
    out: &mut Vec<(&'a str, &'a Term)>,
) -> Result<(), PracticeError> {
    match pp {
        PlanPattern::Segment { label, purpose } => {
            out.push((label, purpose));
            Ok(())
        }
        PlanPattern::Choice(l, r) => {
            flatten_choice(l, out)?;
            flatten_choice(r, out)
        }
        other => Err(PracticeError::NestedChoice(other.to_string())),
    }
}
