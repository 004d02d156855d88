//! Per-actor execution intervals of durative actions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::lang::Term;

/// Half-open `[start, end)`. `open` while the actor has not stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub start: i64,
    pub end: i64,
    pub open: bool,
}

impl Interval {
    pub fn len(&self) -> i64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalHistory {
    map: BTreeMap<(String, Term), Vec<Interval>>,
}

impl IntervalHistory {
    pub fn new() -> IntervalHistory {
        IntervalHistory::default()
    }

    /// Records one execution at `tick`. Returns true if this opened a new interval.
    pub fn execute(&mut self, actor: &str, action: &Term, tick: i64) -> bool {
        let list = self
            .map
            .entry((actor.to_string(), action.clone()))
            .or_default();
        match list.last_mut() {
            Some(iv) if iv.open => {
                iv.end = iv.end.max(tick + 1);
                false
            }
            _ => {
                list.push(Interval {
                    start: tick,
                    end: tick + 1,
                    open: true,
                });
                true
            }
        }
    }

    /// Closes the open interval; `false` if there is none.
    pub fn stop(&mut self, actor: &str, action: &Term) -> bool {
        match self
            .map
            .get_mut(&(actor.to_string(), action.clone()))
            .and_then(|l| l.last_mut())
        {
            Some(iv) if iv.open => {
                iv.open = false;
                true
            }
            _ => false,
        }
    }

    pub fn is_open(&self, actor: &str, action: &Term) -> bool {
        self.intervals(actor, action)
            .last()
            .is_some_and(|iv| iv.open)
    }

    pub fn intervals(&self, actor: &str, action: &Term) -> &[Interval] {
        self.map
            .get(&(actor.to_string(), action.clone()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term, &[Interval])> {
        self.map
            .iter()
            .map(|((a, t), l)| (a.as_str(), t, l.as_slice()))
    }
}

/// Length of the intersection of each participant's interval union.
pub fn joint_overlap(per_participant: &[Vec<Interval>]) -> i64 {
    if per_participant.is_empty() {
        return 0;
    }
    let mut acc = union(&per_participant[0]);
    for ivs in &per_participant[1..] {
        acc = intersect(&acc, &union(ivs));
    }
    acc.iter().map(|(s, e)| e - s).sum()
}

fn union(ivs: &[Interval]) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = ivs
        .iter()
        .filter(|iv| !iv.is_empty())
        .map(|iv| (iv.start, iv.end))
        .collect();
    v.sort_unstable();
    let mut out: Vec<(i64, i64)> = Vec::new();
    for (s, e) in v {
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

fn intersect(a: &[(i64, i64)], b: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let s = a[i].0.max(b[j].0);
        let e = a[i].1.min(b[j].1);
        if s < e {
            out.push((s, e));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}
