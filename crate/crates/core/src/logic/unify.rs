//! Substitutions and annotation-aware unification.

use std::collections::BTreeMap;

use crate::lang::{Struct, Term};

/// Variable bindings. Bindings may chain; [`Substitution::apply`] resolves them fully.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    /// Follows variable chains until an unbound variable or non-variable term.
    pub fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.map.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        match self.walk(t) {
            Term::Var(v) => Term::Var(v.clone()),
            Term::Int(n) => Term::Int(*n),
            Term::Str(s) => Term::Str(s.clone()),
            Term::Struct(s) => Term::Struct(Struct {
                functor: s.functor.clone(),
                args: s.args.iter().map(|a| self.apply(a)).collect(),
                annots: s.annots.iter().map(|a| self.apply(a)).collect(),
            }),
            Term::List(items) => Term::List(items.iter().map(|a| self.apply(a)).collect()),
            Term::Tuple(items) => Term::Tuple(items.iter().map(|a| self.apply(a)).collect()),
        }
    }

    fn occurs(&self, var: &str, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(v) => v == var,
            Term::Int(_) | Term::Str(_) => false,
            Term::Struct(s) => s.args.iter().chain(&s.annots).any(|a| self.occurs(var, a)),
            Term::List(items) | Term::Tuple(items) => items.iter().any(|a| self.occurs(var, a)),
        }
    }

    /// Binds `var` (which must be unbound) to `t`, with occurs check.
    pub fn bind(&mut self, var: &str, t: Term) -> bool {
        if let Term::Var(v) = self.walk(&t) {
            if v == var {
                return true;
            }
        }
        if self.occurs(var, &t) {
            return false;
        }
        self.map.insert(var.to_string(), t);
        true
    }

    /// Fully resolved bindings, restricted to `vars`.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a String>) -> Substitution {
        let mut out = Substitution::new();
        for v in vars {
            let resolved = self.apply(&Term::Var(v.clone()));
            if resolved != Term::Var(v.clone()) {
                out.map.insert(v.clone(), resolved);
            }
        }
        out
    }
}

/// Most general unifier of `query` and `data`.
///
/// Arguments unify structurally. Every annotation of `query` must unify with a
/// distinct annotation of `data`; extra annotations on `data` are ignored.
pub fn unify(query: &Term, data: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    if unify_in(query, data, &mut s) {
        Some(s)
    } else {
        None
    }
}

/// Unifies under an existing substitution, extending it in place on success.
/// On failure `subst` is left unchanged.
pub fn unify_in(query: &Term, data: &Term, subst: &mut Substitution) -> bool {
    let mut work = subst.clone();
    if unify_terms(query, data, &mut work) {
        *subst = work;
        true
    } else {
        false
    }
}

fn unify_terms(a: &Term, b: &Term, s: &mut Substitution) -> bool {
    let a = s.walk(a).clone();
    let b = s.walk(b).clone();
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), _) => s.bind(x, b),
        (_, Term::Var(y)) => s.bind(y, a),
        (Term::Int(x), Term::Int(y)) => x == y,
        (Term::Str(x), Term::Str(y)) => x == y,
        (Term::List(xs), Term::List(ys)) | (Term::Tuple(xs), Term::Tuple(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_terms(x, y, s))
        }
        (Term::Struct(x), Term::Struct(y)) => {
            x.functor == y.functor
                && x.args.len() == y.args.len()
                && x.args
                    .iter()
                    .zip(&y.args)
                    .all(|(p, q)| unify_terms(p, q, s))
                && unify_annots(&x.annots, &y.annots, s)
        }
        _ => false,
    }
}

fn unify_annots(query: &[Term], data: &[Term], s: &mut Substitution) -> bool {
    if query.is_empty() {
        return true;
    }
    if query.len() > data.len() {
        return false;
    }
    let mut used = vec![false; data.len()];
    inject(query, data, &mut used, s)
}

fn inject(query: &[Term], data: &[Term], used: &mut [bool], s: &mut Substitution) -> bool {
    let Some((first, rest)) = query.split_first() else {
        return true;
    };
    for i in 0..data.len() {
        if used[i] {
            continue;
        }
        let mut trial = s.clone();
        if unify_terms(first, &data[i], &mut trial) {
            used[i] = true;
            if inject(rest, data, used, &mut trial) {
                *s = trial;
                return true;
            }
            used[i] = false;
        }
    }
    false
}

/// Evaluates integer arithmetic (`+`, `-`) on a term under `subst`.
pub fn eval_int(t: &Term, subst: &Substitution) -> Option<i64> {
    match subst.walk(t) {
        Term::Int(n) => Some(*n),
        Term::Struct(s) if s.args.len() == 2 && (s.functor == "+" || s.functor == "-") => {
            let a = eval_int(&s.args[0], subst)?;
            let b = eval_int(&s.args[1], subst)?;
            if s.functor == "+" {
                a.checked_add(b)
            } else {
                a.checked_sub(b)
            }
        }
        _ => None,
    }
}
