//! Annotated first-order terms.

use std::collections::BTreeSet;

/// A compound term or atom. Atoms are structures with no arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Struct {
    pub functor: String,
    pub args: Vec<Term>,
    pub annots: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Int(i64),
    Str(String),
    Struct(Struct),
    List(Vec<Term>),
    /// Parenthesised tuple such as `(robot, make_pod_coffee)`; always two or more elements.
    Tuple(Vec<Term>),
}

/// Binary operators that print infix.
pub const BINARY_OPS: &[&str] = &["&", "|", "<", "<=", ">", ">=", "==", "\\==", "=", "+", "-"];
/// Unary operators that print prefix.
pub const PREFIX_OPS: &[&str] = &["!!", "!", "?", "+", "-"];

impl Term {
    pub fn atom(name: impl Into<String>) -> Term {
        Term::Struct(Struct {
            functor: name.into(),
            args: Vec::new(),
            annots: Vec::new(),
        })
    }

    pub fn compound(functor: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Struct(Struct {
            functor: functor.into(),
            args,
            annots: Vec::new(),
        })
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn truth() -> Term {
        Term::atom("true")
    }

    pub fn and(a: Term, b: Term) -> Term {
        if a.is_true() {
            return b;
        }
        if b.is_true() {
            return a;
        }
        Term::compound("&", vec![a, b])
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::compound("|", vec![a, b])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Term) -> Term {
        Term::compound("not", vec![a])
    }

    /// Conjunction of all terms; `true` for an empty iterator.
    pub fn conjunction(terms: impl IntoIterator<Item = Term>) -> Term {
        let items: Vec<Term> = terms.into_iter().collect();
        let mut iter = items.into_iter().rev();
        match iter.next() {
            None => Term::truth(),
            Some(last) => iter.fold(last, |acc, t| Term::and(t, acc)),
        }
    }

    pub fn disjunction(terms: impl IntoIterator<Item = Term>) -> Option<Term> {
        let items: Vec<Term> = terms.into_iter().collect();
        let mut iter = items.into_iter().rev();
        let last = iter.next()?;
        Some(iter.fold(last, |acc, t| Term::or(t, acc)))
    }

    pub fn with_annots(mut self, annots: Vec<Term>) -> Term {
        if let Term::Struct(s) = &mut self {
            s.annots = annots;
        }
        self
    }

    pub fn add_annot(mut self, annot: Term) -> Term {
        if let Term::Struct(s) = &mut self {
            if !s.annots.contains(&annot) {
                s.annots.push(annot);
            }
        }
        self
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Term::Struct(s) if s.functor == "true" && s.args.is_empty())
    }

    pub fn as_struct(&self) -> Option<&Struct> {
        match self {
            Term::Struct(s) => Some(s),
            _ => None,
        }
    }

    pub fn functor(&self) -> Option<&str> {
        self.as_struct().map(|s| s.functor.as_str())
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Struct(s) => &s.args,
            _ => &[],
        }
    }

    pub fn annots(&self) -> &[Term] {
        match self {
            Term::Struct(s) => &s.annots,
            _ => &[],
        }
    }

    pub fn arity(&self) -> usize {
        self.args().len()
    }

    /// `name/arity` key used to index beliefs and plans.
    pub fn indicator(&self) -> Option<(String, usize)> {
        self.as_struct().map(|s| (s.functor.clone(), s.args.len()))
    }

    pub fn is_functor(&self, name: &str, arity: usize) -> bool {
        matches!(self, Term::Struct(s) if s.functor == name && s.args.len() == arity)
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Term::Struct(s) if s.args.is_empty() => Some(&s.functor),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Term]> {
        match self {
            Term::List(items) => Some(items),
            _ => None,
        }
    }

    /// Removes annotations at every level.
    pub fn strip_annots(&self) -> Term {
        match self {
            Term::Struct(s) => Term::Struct(Struct {
                functor: s.functor.clone(),
                args: s.args.iter().map(Term::strip_annots).collect(),
                annots: Vec::new(),
            }),
            Term::List(items) => Term::List(items.iter().map(Term::strip_annots).collect()),
            Term::Tuple(items) => Term::Tuple(items.iter().map(Term::strip_annots).collect()),
            other => other.clone(),
        }
    }

    /// Removes only the outermost annotation list.
    pub fn strip_outer_annots(&self) -> Term {
        match self {
            Term::Struct(s) if !s.annots.is_empty() => Term::Struct(Struct {
                functor: s.functor.clone(),
                args: s.args.clone(),
                annots: Vec::new(),
            }),
            other => other.clone(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Int(_) | Term::Str(_) => true,
            Term::Struct(s) => {
                s.args.iter().all(Term::is_ground) && s.annots.iter().all(Term::is_ground)
            }
            Term::List(items) | Term::Tuple(items) => items.iter().all(Term::is_ground),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Int(_) | Term::Str(_) => {}
            Term::Struct(s) => {
                s.args.iter().for_each(|a| a.collect_vars(out));
                s.annots.iter().for_each(|a| a.collect_vars(out));
            }
            Term::List(items) | Term::Tuple(items) => {
                items.iter().for_each(|a| a.collect_vars(out))
            }
        }
    }

    /// Applies `f` to every variable name, rebuilding the term.
    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Int(_) | Term::Str(_) => self.clone(),
            Term::Struct(s) => Term::Struct(Struct {
                functor: s.functor.clone(),
                args: s.args.iter().map(|a| a.map_vars(f)).collect(),
                annots: s.annots.iter().map(|a| a.map_vars(f)).collect(),
            }),
            Term::List(items) => Term::List(items.iter().map(|a| a.map_vars(f)).collect()),
            Term::Tuple(items) => Term::Tuple(items.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Appends `suffix` to every variable name.
    pub fn rename(&self, suffix: &str) -> Term {
        self.map_vars(&mut |v| Term::Var(format!("{v}{suffix}")))
    }

    pub fn is_binary_op(&self) -> bool {
        matches!(self, Term::Struct(s) if s.args.len() == 2 && s.annots.is_empty() && BINARY_OPS.contains(&s.functor.as_str()))
    }

    pub fn is_prefix_op(&self) -> bool {
        matches!(self, Term::Struct(s) if s.args.len() == 1 && s.annots.is_empty() && PREFIX_OPS.contains(&s.functor.as_str()))
    }
}

impl From<i64> for Term {
    fn from(n: i64) -> Term {
        Term::Int(n)
    }
}

impl From<&str> for Term {
    fn from(name: &str) -> Term {
        Term::atom(name)
    }
}
