//! Canonical surface syntax. Everything printed here parses back to an equal value.

use std::fmt::{self, Write as _};

use super::ast::{
    AgentProgram, BodyStep, LandmarkDecl, Plan, PlanPattern, Rule, SocialPracticeDecl,
};
use super::term::{Struct, Term};

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

fn is_plain_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    let plain = match name.strip_prefix('.') {
        Some(rest) => is_plain_ident(rest),
        None => is_plain_ident(name) && name != "not",
    };
    if plain {
        f.write_str(name)
    } else {
        f.write_char('\'')?;
        for c in name.chars() {
            match c {
                '\'' => f.write_str("\\'")?,
                '\\' => f.write_str("\\\\")?,
                c => f.write_char(c)?,
            }
        }
        f.write_char('\'')
    }
}

fn write_seq(f: &mut fmt::Formatter<'_>, items: &[Term]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

fn write_struct(f: &mut fmt::Formatter<'_>, s: &Struct) -> fmt::Result {
    if s.functor == "not" && !s.args.is_empty() {
        // `not(` always parses as a call
        f.write_str("not")?;
    } else {
        write_atom(f, &s.functor)?;
    }
    if !s.args.is_empty() {
        f.write_char('(')?;
        write_seq(f, &s.args)?;
        f.write_char(')')?;
    }
    if !s.annots.is_empty() {
        f.write_char('[')?;
        write_seq(f, &s.annots)?;
        f.write_char(']')?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Int(n) => write!(f, "{n}"),
            Term::Str(s) => {
                f.write_char('"')?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        c => f.write_char(c)?,
                    }
                }
                f.write_char('"')
            }
            Term::List(items) => {
                f.write_char('[')?;
                write_seq(f, items)?;
                f.write_char(']')
            }
            Term::Tuple(items) => {
                f.write_char('(')?;
                write_seq(f, items)?;
                f.write_char(')')
            }
            Term::Struct(s) if self.is_binary_op() => {
                write!(f, "({} {} {})", s.args[0], s.functor, s.args[1])
            }
            Term::Struct(s) if self.is_prefix_op() => {
                let arg = &s.args[0];
                f.write_str(&s.functor)?;
                if matches!(arg, Term::Int(_)) || arg.is_prefix_op() {
                    write!(f, "({arg})")
                } else {
                    write!(f, "{arg}")
                }
            }
            Term::Struct(s) => write_struct(f, s),
        }
    }
}

impl fmt::Display for BodyStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@")?;
        write_atom(f, &self.label)?;
        if self.atomic {
            f.write_str("[atomic]")?;
        }
        write!(f, " {}", self.trigger)?;
        if !self.context.is_true() {
            write!(f, " : {}", self.context)?;
        }
        if !self.body.is_empty() {
            f.write_str(" <- ")?;
            for (i, step) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{step}")?;
            }
        }
        f.write_char('.')
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :- {}.", self.head, self.body)
    }
}

impl fmt::Display for SocialPracticeDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sp({}, {}).",
            Term::atom(self.name.clone()),
            Term::List(self.requirements.clone())
        )
    }
}

impl fmt::Display for LandmarkDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let priors = Term::List(self.priors.iter().map(|p| Term::atom(p.clone())).collect());
        let actions = Term::List(
            self.actions
                .iter()
                .map(|(actor, action)| Term::Tuple(vec![Term::atom(actor.clone()), action.clone()]))
                .collect(),
        );
        write!(
            f,
            "lm({}, {}, {}, {}, {}).",
            Term::atom(self.practice.clone()),
            Term::atom(self.id.clone()),
            priors,
            actions,
            self.purpose
        )
    }
}

impl fmt::Display for AgentProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.beliefs {
            writeln!(f, "{b}.")?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        for g in &self.goals {
            writeln!(f, "!{g}.")?;
        }
        for sp in &self.practices {
            writeln!(f, "{sp}")?;
        }
        for lm in &self.landmarks {
            writeln!(f, "{lm}")?;
        }
        for p in &self.plans {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

impl PlanPattern {
    fn level(&self) -> u8 {
        match self {
            PlanPattern::Seq(..) => 0,
            PlanPattern::Choice(..) => 1,
            PlanPattern::Par(..) => 2,
            PlanPattern::Segment { .. } => 3,
        }
    }
}

fn write_pattern_child(
    f: &mut fmt::Formatter<'_>,
    child: &PlanPattern,
    parens: bool,
) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for PlanPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r, op) = match self {
            PlanPattern::Segment { label, purpose } => {
                write_atom(f, label)?;
                let text = purpose.to_string();
                // `:-` would lex as a rule neck
                let sep = if text.starts_with('-') { ": " } else { ":" };
                return write!(f, "{sep}{text}");
            }
            PlanPattern::Seq(l, r) => (l, r, ";"),
            PlanPattern::Choice(l, r) => (l, r, "+"),
            PlanPattern::Par(l, r) => (l, r, "&"),
        };
        // operators are right-associative
        let level = self.level();
        write_pattern_child(f, l, l.level() <= level)?;
        write!(f, " {op} ")?;
        write_pattern_child(f, r, r.level() < level)
    }
}
