//! Program-level syntax: plans, rules, practice declarations.

use std::fmt;

use super::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    Action,
    InternalAction,
    Achieve,
    AchieveNew,
    Test,
    AddBelief,
    DelBelief,
}

/// One step of a plan body. The payload never carries the surface prefix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BodyStep {
    pub kind: StepKind,
    pub term: Term,
}

impl BodyStep {
    pub fn new(kind: StepKind, term: Term) -> BodyStep {
        BodyStep { kind, term }
    }

    pub fn action(term: Term) -> BodyStep {
        let kind = if term.functor().is_some_and(|f| f.starts_with('.')) {
            StepKind::InternalAction
        } else {
            StepKind::Action
        };
        BodyStep { kind, term }
    }

    pub fn achieve(term: Term) -> BodyStep {
        BodyStep::new(StepKind::Achieve, term)
    }

    /// Classifies a parsed expression by its prefix operator.
    pub fn from_term(term: Term) -> BodyStep {
        if let Term::Struct(s) = &term {
            if s.args.len() == 1 && s.annots.is_empty() {
                let kind = match s.functor.as_str() {
                    "!" => Some(StepKind::Achieve),
                    "!!" => Some(StepKind::AchieveNew),
                    "?" => Some(StepKind::Test),
                    "+" => Some(StepKind::AddBelief),
                    "-" => Some(StepKind::DelBelief),
                    _ => None,
                };
                if let Some(kind) = kind {
                    return BodyStep::new(kind, s.args[0].clone());
                }
            }
        }
        BodyStep::action(term)
    }

    /// The inverse of [`BodyStep::from_term`]: prefixed steps become operator terms.
    pub fn to_term(&self) -> Term {
        let op = match self.kind {
            StepKind::Action | StepKind::InternalAction => return self.term.clone(),
            StepKind::Achieve => "!",
            StepKind::AchieveNew => "!!",
            StepKind::Test => "?",
            StepKind::AddBelief => "+",
            StepKind::DelBelief => "-",
        };
        Term::compound(op, vec![self.term.clone()])
    }

    pub fn map_term(&self, f: impl FnOnce(&Term) -> Term) -> BodyStep {
        BodyStep {
            kind: self.kind,
            term: f(&self.term),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriggerKind {
    GoalAdd,
    GoalDel,
    BeliefAdd,
    BeliefDel,
}

impl TriggerKind {
    pub fn prefix(self) -> &'static str {
        match self {
            TriggerKind::GoalAdd => "+!",
            TriggerKind::GoalDel => "-!",
            TriggerKind::BeliefAdd => "+",
            TriggerKind::BeliefDel => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trigger {
    pub kind: TriggerKind,
    pub literal: Term,
}

impl Trigger {
    pub fn new(kind: TriggerKind, literal: Term) -> Trigger {
        Trigger { kind, literal }
    }

    pub fn goal_add(literal: Term) -> Trigger {
        Trigger::new(TriggerKind::GoalAdd, literal)
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.literal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plan {
    pub label: String,
    pub atomic: bool,
    pub trigger: Trigger,
    pub context: Term,
    pub body: Vec<BodyStep>,
}

impl Plan {
    pub fn new(
        label: impl Into<String>,
        trigger: Trigger,
        context: Term,
        body: Vec<BodyStep>,
    ) -> Plan {
        Plan {
            label: label.into(),
            atomic: false,
            trigger,
            context,
            body,
        }
    }

    /// Renames every variable apart with `suffix`.
    pub fn rename(&self, suffix: &str) -> Plan {
        Plan {
            label: self.label.clone(),
            atomic: self.atomic,
            trigger: Trigger::new(self.trigger.kind, self.trigger.literal.rename(suffix)),
            context: self.context.rename(suffix),
            body: self
                .body
                .iter()
                .map(|s| s.map_term(|t| t.rename(suffix)))
                .collect(),
        }
    }
}

/// Horn clause `head :- body`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Term,
    pub body: Term,
}

impl Rule {
    pub fn rename(&self, suffix: &str) -> Rule {
        Rule {
            head: self.head.rename(suffix),
            body: self.body.rename(suffix),
        }
    }
}

/// `sp(Name, Requirements)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocialPracticeDecl {
    pub name: String,
    pub requirements: Vec<Term>,
}

/// `lm(Practice, Id, Priors, Actions, Purpose)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandmarkDecl {
    pub practice: String,
    pub id: String,
    pub priors: Vec<String>,
    pub actions: Vec<(String, Term)>,
    pub purpose: Term,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AgentProgram {
    pub beliefs: Vec<Term>,
    pub rules: Vec<Rule>,
    pub goals: Vec<Term>,
    pub plans: Vec<Plan>,
    pub practices: Vec<SocialPracticeDecl>,
    pub landmarks: Vec<LandmarkDecl>,
}

impl AgentProgram {
    pub fn is_empty(&self) -> bool {
        self.beliefs.is_empty()
            && self.rules.is_empty()
            && self.goals.is_empty()
            && self.plans.is_empty()
            && self.practices.is_empty()
            && self.landmarks.is_empty()
    }

    /// Appends another program; plan labels must stay unique.
    pub fn merge(&mut self, other: AgentProgram) -> Result<(), String> {
        for plan in &other.plans {
            if self.plans.iter().any(|p| p.label == plan.label) {
                return Err(format!("duplicate plan label @{}", plan.label));
            }
        }
        self.beliefs.extend(other.beliefs);
        self.rules.extend(other.rules);
        self.goals.extend(other.goals);
        self.plans.extend(other.plans);
        self.practices.extend(other.practices);
        self.landmarks.extend(other.landmarks);
        Ok(())
    }
}

/// Plan-pattern expression over purpose segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanPattern {
    Segment { label: String, purpose: Term },
    Choice(Box<PlanPattern>, Box<PlanPattern>),
    Par(Box<PlanPattern>, Box<PlanPattern>),
    Seq(Box<PlanPattern>, Box<PlanPattern>),
}

impl PlanPattern {
    pub fn segment(label: impl Into<String>, purpose: Term) -> PlanPattern {
        PlanPattern::Segment {
            label: label.into(),
            purpose,
        }
    }

    pub fn seq(l: PlanPattern, r: PlanPattern) -> PlanPattern {
        PlanPattern::Seq(Box::new(l), Box::new(r))
    }

    pub fn par(l: PlanPattern, r: PlanPattern) -> PlanPattern {
        PlanPattern::Par(Box::new(l), Box::new(r))
    }

    pub fn choice(l: PlanPattern, r: PlanPattern) -> PlanPattern {
        PlanPattern::Choice(Box::new(l), Box::new(r))
    }

    /// Segments in left-to-right order.
    pub fn segments(&self) -> Vec<(&str, &Term)> {
        let mut out = Vec::new();
        self.collect_segments(&mut out);
        out
    }

    fn collect_segments<'a>(&'a self, out: &mut Vec<(&'a str, &'a Term)>) {
        match self {
            PlanPattern::Segment { label, purpose } => out.push((label, purpose)),
            PlanPattern::Choice(l, r) | PlanPattern::Par(l, r) | PlanPattern::Seq(l, r) => {
                l.collect_segments(out);
                r.collect_segments(out);
            }
        }
    }
}
