//! Depth-bounded SLD resolution over a belief base.

use std::rc::Rc;

use crate::lang::Term;

use super::beliefs::BeliefBase;
use super::unify::{eval_int, unify_in, Substitution};

pub const DEFAULT_DEPTH: usize = 64;

struct Node {
    goal: Term,
    depth: usize,
    next: Goals,
}

#[derive(Clone, Default)]
struct Goals(Option<Rc<Node>>);

impl Goals {
    fn push(&self, goal: Term, depth: usize) -> Goals {
        Goals(Some(Rc::new(Node {
            goal,
            depth,
            next: self.clone(),
        })))
    }
}

/// Lazy answer stream for one query. Answers come in proof order: facts before
/// rules, each in source order, leftmost goal first.
pub struct Solutions<'a> {
    bb: &'a BeliefBase,
    max_depth: usize,
    level: usize,
    renames: usize,
    stack: Vec<(Goals, Substitution)>,
    exhausted_logged: bool,
}

impl<'a> Solutions<'a> {
    fn new(
        bb: &'a BeliefBase,
        goal: &Term,
        subst: Substitution,
        max_depth: usize,
        level: usize,
    ) -> Self {
        let goals = Goals::default().push(goal.clone(), 0);
        Solutions {
            bb,
            max_depth,
            level,
            renames: 0,
            stack: vec![(goals, subst)],
            exhausted_logged: false,
        }
    }

    fn expand(&mut self, node: &Node, subst: Substitution) {
        let rest = &node.next;
        let depth = node.depth;
        let goal = subst.walk(&node.goal).clone();
        let Term::Struct(s) = &goal else {
            return;
        };
        let args = &s.args;
        match (s.functor.as_str(), args.len()) {
            ("true", 0) => self.stack.push((rest.clone(), subst)),
            ("false", 0) | ("fail", 0) => {}
            ("&", 2) => {
                let goals = rest
                    .push(args[1].clone(), depth)
                    .push(args[0].clone(), depth);
                self.stack.push((goals, subst));
            }
            ("|", 2) => {
                self.stack
                    .push((rest.push(args[1].clone(), depth), subst.clone()));
                self.stack.push((rest.push(args[0].clone(), depth), subst));
            }
            ("not", 1) => {
                let inner = subst.apply(&args[0]);
                let mut sub = Solutions::new(
                    self.bb,
                    &inner,
                    Substitution::new(),
                    self.max_depth,
                    self.level + 1,
                );
                if sub.next().is_none() {
                    self.stack.push((rest.clone(), subst));
                }
            }
            ("=", 2) => {
                let mut s2 = subst;
                if unify_in(&args[0], &args[1], &mut s2) {
                    self.stack.push((rest.clone(), s2));
                }
            }
            ("==", 2) | ("\\==", 2) => {
                let equal = match (eval_int(&args[0], &subst), eval_int(&args[1], &subst)) {
                    (Some(a), Some(b)) => a == b,
                    _ => subst.apply(&args[0]) == subst.apply(&args[1]),
                };
                if equal == (s.functor == "==") {
                    self.stack.push((rest.clone(), subst));
                }
            }
            ("<", 2) | ("<=", 2) | (">", 2) | (">=", 2) => {
                let (Some(a), Some(b)) = (eval_int(&args[0], &subst), eval_int(&args[1], &subst))
                else {
                    return;
                };
                let ok = match s.functor.as_str() {
                    "<" => a < b,
                    "<=" => a <= b,
                    ">" => a > b,
                    _ => a >= b,
                };
                if ok {
                    self.stack.push((rest.clone(), subst));
                }
            }
            (functor, arity) => {
                let mut next = Vec::new();
                for fact in self.bb.facts_for(functor, arity) {
                    let mut s2 = subst.clone();
                    if unify_in(&goal, fact, &mut s2) {
                        next.push((rest.clone(), s2));
                    }
                }
                let rules: Vec<_> = self.bb.rules_for(functor, arity).collect();
                if !rules.is_empty() {
                    if depth + 1 > self.max_depth {
                        if !self.exhausted_logged {
                            self.exhausted_logged = true;
                            tracing::trace!(%goal, max_depth = self.max_depth, "query depth exhausted");
                        }
                    } else {
                        for rule in rules {
                            self.renames += 1;
                            let renamed = rule.rename(&format!("~{}_{}", self.level, self.renames));
                            let mut s2 = subst.clone();
                            if unify_in(&goal, &renamed.head, &mut s2) {
                                next.push((rest.push(renamed.body, depth + 1), s2));
                            }
                        }
                    }
                }
                self.stack.extend(next.into_iter().rev());
            }
        }
    }
}

impl Iterator for Solutions<'_> {
    type Item = Substitution;

    fn next(&mut self) -> Option<Substitution> {
        while let Some((goals, subst)) = self.stack.pop() {
            match &goals.0 {
                None => return Some(subst),
                Some(node) => {
                    let node = Rc::clone(node);
                    self.expand(&node, subst);
                }
            }
        }
        None
    }
}

/// All answers to `goal`, lazily.
pub fn query<'a>(bb: &'a BeliefBase, goal: &Term, max_depth: usize) -> Solutions<'a> {
    query_with(bb, goal, Substitution::new(), max_depth)
}

/// Answers to `goal` extending an existing substitution.
pub fn query_with<'a>(
    bb: &'a BeliefBase,
    goal: &Term,
    subst: Substitution,
    max_depth: usize,
) -> Solutions<'a> {
    Solutions::new(bb, goal, subst, max_depth.max(1), 0)
}

pub fn holds(bb: &BeliefBase, goal: &Term, max_depth: usize) -> bool {
    query(bb, goal, max_depth).next().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_program, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn base(src: &str) -> BeliefBase {
        let prog = parse_program(src).unwrap();
        let mut bb = BeliefBase::new();
        for b in prog.beliefs {
            bb.assert(b);
        }
        for r in prog.rules {
            bb.add_rule(r);
        }
        bb
    }

    #[test]
    fn relational_over_fact() {
        let bb = base("time(800).");
        let answers: Vec<_> = query(&bb, &t("time(T) & T < 1200"), DEFAULT_DEPTH).collect();
        assert_eq!(answers.len(), 1);
        assert_eq!(answers[0].apply(&t("T")), t("800"));
        assert!(!holds(
            &base("time(1300)."),
            &t("time(T) & T < 1200"),
            DEFAULT_DEPTH
        ));
    }

    #[test]
    fn rule_then_fact() {
        let bb = base("q. p :- q.");
        let answers: Vec<_> = query(&bb, &t("p"), DEFAULT_DEPTH).collect();
        assert_eq!(answers.len(), 1);
    }

    #[test]
    fn source_order() {
        let bb = base("c(1). c(2). c(3).");
        let xs: Vec<_> = query(&bb, &t("c(X)"), DEFAULT_DEPTH)
            .map(|s| s.apply(&t("X")))
            .collect();
        assert_eq!(xs, vec![t("1"), t("2"), t("3")]);
    }

    #[test]
    fn negation_and_disjunction() {
        let bb = base("a. b(2).");
        assert!(holds(&bb, &t("not c"), DEFAULT_DEPTH));
        assert!(!holds(&bb, &t("not a"), DEFAULT_DEPTH));
        let xs: Vec<_> = query(&bb, &t("b(X) | X = 7"), DEFAULT_DEPTH)
            .map(|s| s.apply(&t("X")))
            .collect();
        assert_eq!(xs, vec![t("2"), t("7")]);
    }

    #[test]
    fn arithmetic_in_rule() {
        let bb = base("started(a, 10). time(14). going :- started(a, S) & time(T) & T - S < 6.");
        assert!(holds(&bb, &t("going"), DEFAULT_DEPTH));
    }

    #[test]
    fn depth_bound_cuts_recursion() {
        let bb = base("loop :- loop. p :- q. q :- r. r.");
        assert!(!holds(&bb, &t("loop"), 8));
        assert!(holds(&bb, &t("p"), 2));
        assert!(!holds(&bb, &t("p"), 1));
    }

    #[test]
    fn rule_variables_do_not_leak() {
        let bb =
            base("e(1, 2). e(2, 3). path(X, Y) :- e(X, Y). path(X, Y) :- e(X, Z) & path(Z, Y).");
        let ys: Vec<_> = query(&bb, &t("path(1, Y)"), DEFAULT_DEPTH)
            .map(|s| s.apply(&t("Y")))
            .collect();
        assert_eq!(ys, vec![t("2"), t("3")]);
    }
}
