//! Recursive-descent parser for agent programs, practice declarations,
//! scenario manifests and plan patterns. The grammar is documented in
//! `docs/grammar.md`.

use std::collections::BTreeSet;

use super::ast::{
    AgentProgram, BodyStep, LandmarkDecl, Plan, PlanPattern, Rule, SocialPracticeDecl, Trigger,
    TriggerKind,
};
use super::lexer::{tokenize, Tok, Token};
use super::term::{Struct, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}{}", fmt_expected(.expected))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

fn fmt_expected(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

impl From<super::lexer::LexError> for ParseError {
    fn from(e: super::lexer::LexError) -> Self {
        ParseError {
            line: e.line,
            col: e.col,
            message: e.message,
            expected: Vec::new(),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    anon: usize,
    auto_label: usize,
}

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            anon: 0,
            auto_label: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let tok = self.here();
        ParseError {
            line: tok.line,
            col: tok.col,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(format!("unexpected {}", self.peek()), expected)
    }

    fn expect(&mut self, t: Tok, name: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    // ---- terms -------------------------------------------------------------

    fn expr(&mut self) -> PResult<Term> {
        let mut lhs = self.and_expr()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.and_expr()?;
            lhs = Term::compound("|", vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> PResult<Term> {
        let mut lhs = self.rel_expr()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.rel_expr()?;
            lhs = Term::compound("&", vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn rel_expr(&mut self) -> PResult<Term> {
        let lhs = self.add_expr()?;
        let op = match self.peek() {
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::EqEq => "==",
            Tok::NotEq => "\\==",
            Tok::Eq => "=",
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.add_expr()?;
        Ok(Term::compound(op, vec![lhs, rhs]))
    }

    fn add_expr(&mut self) -> PResult<Term> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => "+",
                Tok::Minus => "-",
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Term::compound(op, vec![lhs, rhs]);
        }
    }

    fn unary(&mut self) -> PResult<Term> {
        let op = match self.peek() {
            Tok::BangBang => "!!",
            Tok::Bang => "!",
            Tok::Query => "?",
            Tok::Plus => "+",
            Tok::Minus => {
                if let Tok::Int(n) = *self.peek_at(1) {
                    self.bump();
                    self.bump();
                    return Ok(Term::Int(-n));
                }
                "-"
            }
            Tok::Atom(a) if a == "not" && *self.peek_at(1) != Tok::LParen => {
                self.bump();
                let inner = self.unary()?;
                return Ok(Term::not(inner));
            }
            _ => return self.primary(),
        };
        self.bump();
        let inner = self.unary()?;
        Ok(Term::compound(op, vec![inner]))
    }

    fn primary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                if v == "_" {
                    self.anon += 1;
                    Ok(Term::Var(format!("_{}", self.anon)))
                } else {
                    Ok(Term::Var(v))
                }
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Int(n))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Term::Str(s))
            }
            Tok::Atom(name) | Tok::QAtom(name) => {
                self.bump();
                self.structure(name)
            }
            Tok::LBracket => {
                self.bump();
                let items = self.comma_list(&Tok::RBracket, "`]`")?;
                Ok(Term::List(items))
            }
            Tok::LParen => {
                self.bump();
                let first = self.expr()?;
                if self.eat(&Tok::RParen) {
                    return Ok(first);
                }
                let mut items = vec![first];
                while self.eat(&Tok::Comma) {
                    items.push(self.expr()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(Term::Tuple(items))
            }
            _ => Err(self.unexpected(&["term"])),
        }
    }

    fn structure(&mut self, functor: String) -> PResult<Term> {
        let args = if self.eat(&Tok::LParen) {
            let args = self.comma_list(&Tok::RParen, "`)`")?;
            if args.is_empty() {
                return Err(self.error("empty argument list", &["term"]));
            }
            args
        } else {
            Vec::new()
        };
        let annots = if self.eat(&Tok::LBracket) {
            self.comma_list(&Tok::RBracket, "`]`")?
        } else {
            Vec::new()
        };
        Ok(Term::Struct(Struct {
            functor,
            args,
            annots,
        }))
    }

    fn comma_list(&mut self, close: &Tok, close_name: &str) -> PResult<Vec<Term>> {
        let mut items = Vec::new();
        if self.eat(close) {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.eat(close) {
                return Ok(items);
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.unexpected(&["`,`", close_name]));
            }
        }
    }

    fn literal(&mut self) -> PResult<Term> {
        let tok = self.here().clone();
        let t = self.primary()?;
        if matches!(t, Term::Struct(_)) {
            Ok(t)
        } else {
            Err(ParseError {
                line: tok.line,
                col: tok.col,
                message: format!("expected a literal, found `{t}`"),
                expected: vec!["atom".into()],
            })
        }
    }

    // ---- clauses -----------------------------------------------------------

    fn program(&mut self) -> PResult<AgentProgram> {
        let mut prog = AgentProgram::default();
        let mut labels = BTreeSet::new();
        while !self.at(&Tok::Eof) {
            let start = self.here().clone();
            match self.peek() {
                Tok::At | Tok::Plus | Tok::Minus => {
                    let plan = self.plan()?;
                    if !labels.insert(plan.label.clone()) {
                        return Err(ParseError {
                            line: start.line,
                            col: start.col,
                            message: format!("duplicate plan label @{}", plan.label),
                            expected: Vec::new(),
                        });
                    }
                    prog.plans.push(plan);
                }
                Tok::Bang => {
                    self.bump();
                    let goal = self.literal()?;
                    self.expect(Tok::Dot, "`.`")?;
                    prog.goals.push(goal);
                }
                _ => {
                    let head = self.literal()?;
                    if self.eat(&Tok::Neck) {
                        let body = self.expr()?;
                        self.expect(Tok::Dot, "`.`")?;
                        prog.rules.push(Rule { head, body });
                    } else {
                        if !self.at(&Tok::Dot) {
                            return Err(self.unexpected(&["`.`", "`:-`"]));
                        }
                        self.bump();
                        self.fact(head, &start, &mut prog)?;
                    }
                }
            }
        }
        Ok(prog)
    }

    fn fact(&mut self, fact: Term, at: &Token, prog: &mut AgentProgram) -> PResult<()> {
        let fail = |message: String| ParseError {
            line: at.line,
            col: at.col,
            message,
            expected: Vec::new(),
        };
        if fact.is_functor("sp", 2) && fact.annots().is_empty() {
            let args = fact.args();
            let name = args[0]
                .as_atom()
                .ok_or_else(|| fail("sp/2: practice name must be an atom".into()))?;
            let reqs = args[1]
                .as_list()
                .ok_or_else(|| fail("sp/2: requirements must be a list".into()))?;
            if reqs.is_empty() {
                return Err(fail("sp/2: requirements list must be nonempty".into()));
            }
            prog.practices.push(SocialPracticeDecl {
                name: name.to_string(),
                requirements: reqs.to_vec(),
            });
        } else if fact.is_functor("lm", 5) && fact.annots().is_empty() {
            let args = fact.args();
            let practice = args[0]
                .as_atom()
                .ok_or_else(|| fail("lm/5: practice must be an atom".into()))?;
            let id = args[1]
                .as_atom()
                .ok_or_else(|| fail("lm/5: landmark id must be an atom".into()))?;
            let priors = args[2]
                .as_list()
                .and_then(|l| {
                    l.iter()
                        .map(|p| p.as_atom().map(str::to_string))
                        .collect::<Option<Vec<_>>>()
                })
                .ok_or_else(|| fail("lm/5: priors must be a list of landmark ids".into()))?;
            let actions = args[3]
                .as_list()
                .and_then(|l| {
                    l.iter()
                        .map(|a| match a {
                            Term::Tuple(pair) if pair.len() == 2 => {
                                Some((pair[0].as_atom()?.to_string(), pair[1].clone()))
                            }
                            _ => None,
                        })
                        .collect::<Option<Vec<_>>>()
                })
                .ok_or_else(|| {
                    fail("lm/5: actions must be a list of (actor, action) pairs".into())
                })?;
            prog.landmarks.push(LandmarkDecl {
                practice: practice.to_string(),
                id: id.to_string(),
                priors,
                actions,
                purpose: args[4].clone(),
            });
        } else {
            prog.beliefs.push(fact);
        }
        Ok(())
    }

    fn plan(&mut self) -> PResult<Plan> {
        let mut label = None;
        let mut atomic = false;
        if self.eat(&Tok::At) {
            let name = match self.peek().clone() {
                Tok::Atom(a) | Tok::QAtom(a) => a,
                _ => return Err(self.unexpected(&["plan label"])),
            };
            self.bump();
            if self.eat(&Tok::LBracket) {
                for annot in self.comma_list(&Tok::RBracket, "`]`")? {
                    if annot.as_atom() == Some("atomic") {
                        atomic = true;
                    }
                }
            }
            label = Some(name);
        }
        let kind = match self.peek() {
            Tok::Plus => {
                self.bump();
                if self.eat(&Tok::Bang) {
                    TriggerKind::GoalAdd
                } else {
                    TriggerKind::BeliefAdd
                }
            }
            Tok::Minus => {
                self.bump();
                if self.eat(&Tok::Bang) {
                    TriggerKind::GoalDel
                } else {
                    TriggerKind::BeliefDel
                }
            }
            _ => return Err(self.unexpected(&["`+`", "`-`"])),
        };
        let literal = self.literal()?;
        let context = if self.eat(&Tok::Colon) {
            self.expr()?
        } else {
            Term::truth()
        };
        let mut body = Vec::new();
        if self.eat(&Tok::Arrow) {
            loop {
                body.push(BodyStep::from_term(self.expr()?));
                if !self.eat(&Tok::Semi) {
                    break;
                }
            }
            if body.len() == 1 && body[0].term.is_true() {
                body.clear();
            }
        }
        if !self.at(&Tok::Dot) {
            return Err(self.unexpected(&["`.`", "`;`", "`<-`", "`:`"]));
        }
        self.bump();
        let label = label.unwrap_or_else(|| {
            self.auto_label += 1;
            format!("p__{}", self.auto_label)
        });
        Ok(Plan {
            label,
            atomic,
            trigger: Trigger::new(kind, literal),
            context,
            body,
        })
    }

    // ---- plan patterns -----------------------------------------------------

    fn pattern_seq(&mut self) -> PResult<PlanPattern> {
        let lhs = self.pattern_choice()?;
        if self.eat(&Tok::Semi) {
            Ok(PlanPattern::seq(lhs, self.pattern_seq()?))
        } else {
            Ok(lhs)
        }
    }

    fn pattern_choice(&mut self) -> PResult<PlanPattern> {
        let lhs = self.pattern_par()?;
        if self.eat(&Tok::Plus) {
            Ok(PlanPattern::choice(lhs, self.pattern_choice()?))
        } else {
            Ok(lhs)
        }
    }

    fn pattern_par(&mut self) -> PResult<PlanPattern> {
        let lhs = self.pattern_atom()?;
        if self.eat(&Tok::Amp) {
            Ok(PlanPattern::par(lhs, self.pattern_par()?))
        } else {
            Ok(lhs)
        }
    }

    fn pattern_atom(&mut self) -> PResult<PlanPattern> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.pattern_seq()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Atom(label) | Tok::QAtom(label) => {
                self.bump();
                self.expect(Tok::Colon, "`:`")?;
                let purpose = self.unary()?;
                Ok(PlanPattern::Segment { label, purpose })
            }
            Tok::Eof if self.pos == 0 => Err(self.error("empty plan pattern", &["segment"])),
            _ => Err(self.unexpected(&["segment", "`(`"])),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }
}

/// Parses an agent program, practice declaration file or scenario manifest.
pub fn parse_program(text: &str) -> Result<AgentProgram, ParseError> {
    let mut p = Parser::new(text)?;
    p.program()
}

/// Parses a single term or formula (no trailing `.`).
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.expr()?;
    p.finish()?;
    Ok(t)
}

/// Parses a `;`-separated plan body.
pub fn parse_body(text: &str) -> Result<Vec<BodyStep>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut body = Vec::new();
    if p.at(&Tok::Eof) {
        return Ok(body);
    }
    loop {
        body.push(BodyStep::from_term(p.expr()?));
        if !p.eat(&Tok::Semi) {
            break;
        }
    }
    p.finish()?;
    Ok(body)
}

/// Parses a plan pattern; `&` binds tighter than `+`, which binds tighter than `;`.
pub fn parse_plan_pattern(text: &str) -> Result<PlanPattern, ParseError> {
    let mut p = Parser::new(text)?;
    let pp = p.pattern_seq()?;
    p.finish()?;
    Ok(pp)
}
