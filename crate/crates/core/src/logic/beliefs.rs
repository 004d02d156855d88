//! Belief base: annotated literals indexed by predicate, plus Horn rules.

use std::collections::BTreeMap;

use crate::lang::{Rule, Term};

use super::unify::{unify, Substitution};

/// A belief-base mutation. Replaying these in order reconstructs the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BeliefChange {
    /// The literal as asserted (annotations are merged into any existing entry).
    Added(Term),
    /// The literal exactly as it was stored before removal.
    Removed(Term),
}

impl BeliefChange {
    pub fn literal(&self) -> &Term {
        match self {
            BeliefChange::Added(t) | BeliefChange::Removed(t) => t,
        }
    }

    pub fn is_addition(&self) -> bool {
        matches!(self, BeliefChange::Added(_))
    }
}

type Key = (String, usize);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BeliefBase {
    facts: BTreeMap<Key, Vec<Term>>,
    rules: Vec<Rule>,
}

impl BeliefBase {
    pub fn new() -> BeliefBase {
        BeliefBase::default()
    }

    pub fn add_rule(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rules whose head has the given indicator, in source order.
    pub fn rules_for<'a>(
        &'a self,
        functor: &'a str,
        arity: usize,
    ) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules
            .iter()
            .filter(move |r| r.head.is_functor(functor, arity))
    }

    /// Facts with the given indicator, in insertion order.
    pub fn facts_for(&self, functor: &str, arity: usize) -> &[Term] {
        self.facts
            .get(&(functor.to_string(), arity))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Every fact, grouped by predicate.
    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.facts.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.facts.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds a literal. If an entry equal up to annotations exists, the new
    /// annotations are appended to it; when that adds nothing, no change is reported.
    pub fn assert(&mut self, literal: Term) -> Option<BeliefChange> {
        let Some(key) = literal.indicator() else {
            tracing::warn!(%literal, "ignoring non-literal belief");
            return None;
        };
        let entries = self.facts.entry(key).or_default();
        let bare = literal.strip_outer_annots();
        if let Some(existing) = entries.iter_mut().find(|e| e.strip_outer_annots() == bare) {
            let fresh: Vec<Term> = literal
                .annots()
                .iter()
                .filter(|a| !existing.annots().contains(a))
                .cloned()
                .collect();
            if fresh.is_empty() {
                return None;
            }
            let mut merged = existing.annots().to_vec();
            merged.extend(fresh);
            *existing = existing.clone().with_annots(merged);
            return Some(BeliefChange::Added(literal));
        }
        entries.push(literal.clone());
        Some(BeliefChange::Added(literal))
    }

    /// Removes the first fact matching `pattern` (annotation subset semantics).
    pub fn retract(&mut self, pattern: &Term) -> Option<BeliefChange> {
        let key = pattern.indicator()?;
        let entries = self.facts.get_mut(&key)?;
        let idx = entries.iter().position(|e| unify(pattern, e).is_some())?;
        let removed = entries.remove(idx);
        if entries.is_empty() {
            self.facts.remove(&key);
        }
        Some(BeliefChange::Removed(removed))
    }

    /// Removes every fact matching `pattern`, in order.
    pub fn retract_all(&mut self, pattern: &Term) -> Vec<BeliefChange> {
        let mut out = Vec::new();
        while let Some(change) = self.retract(pattern) {
            out.push(change);
        }
        out
    }

    /// Applies a previously emitted change.
    pub fn replay(&mut self, change: &BeliefChange) {
        match change {
            BeliefChange::Added(t) => {
                self.assert(t.clone());
            }
            BeliefChange::Removed(t) => {
                if let Some(entries) = t.indicator().and_then(|k| self.facts.get_mut(&k)) {
                    if let Some(idx) = entries.iter().position(|e| e == t) {
                        entries.remove(idx);
                    }
                }
                if let Some(k) = t.indicator() {
                    if self.facts.get(&k).is_some_and(Vec::is_empty) {
                        self.facts.remove(&k);
                    }
                }
            }
        }
    }

    /// True when some fact (not rule) matches `pattern`.
    pub fn holds_fact(&self, pattern: &Term) -> bool {
        self.first_fact(pattern).is_some()
    }

    pub fn first_fact(&self, pattern: &Term) -> Option<(&Term, Substitution)> {
        let (f, n) = pattern.indicator()?;
        self.facts_for(&f, n)
            .iter()
            .find_map(|e| unify(pattern, e).map(|s| (e, s)))
    }
}
