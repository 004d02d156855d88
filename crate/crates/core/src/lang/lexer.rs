//! Tokenizer shared by program, practice, manifest and plan-pattern parsers.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lower-case identifier, or an internal-action name starting with `.`.
    Atom(String),
    /// `'quoted atom'`; never treated as a keyword.
    QAtom(String),
    Var(String),
    Int(i64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Semi,
    Colon,
    At,
    Arrow,    // <-
    Neck,     // :-
    Bang,     // !
    BangBang, // !!
    Query,    // ?
    Plus,
    Minus,
    Amp,
    Bar,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    NotEq, // \==
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Atom(a) => return write!(f, "atom `{a}`"),
            Tok::QAtom(a) => return write!(f, "atom '{a}'"),
            Tok::Var(v) => return write!(f, "variable `{v}`"),
            Tok::Int(n) => return write!(f, "integer {n}"),
            Tok::Str(_) => "string",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Semi => "`;`",
            Tok::Colon => "`:`",
            Tok::At => "`@`",
            Tok::Arrow => "`<-`",
            Tok::Neck => "`:-`",
            Tok::Bang => "`!`",
            Tok::BangBang => "`!!`",
            Tok::Query => "`?`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::Lt => "`<`",
            Tok::Le => "`<=`",
            Tok::Gt => "`>`",
            Tok::Ge => "`>=`",
            Tok::EqEq => "`==`",
            Tok::NotEq => "`\\==`",
            Tok::Eq => "`=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident_tail(&mut self, out: &mut String) {
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        chars: src.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '/' && cur.peek2() == Some('/') {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let (line, col) = (cur.line, cur.col);
        let err = |message: String| LexError { line, col, message };
        let Some(c) = cur.bump() else {
            out.push(Token {
                tok: Tok::Eof,
                line,
                col,
            });
            return Ok(out);
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '@' => Tok::At,
            '?' => Tok::Query,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '!' => {
                if cur.eat('!') {
                    Tok::BangBang
                } else {
                    Tok::Bang
                }
            }
            ':' => {
                if cur.eat('-') {
                    Tok::Neck
                } else {
                    Tok::Colon
                }
            }
            '<' => {
                if cur.eat('-') {
                    Tok::Arrow
                } else if cur.eat('=') {
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            '>' => {
                if cur.eat('=') {
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '=' => {
                if cur.eat('=') {
                    Tok::EqEq
                } else {
                    Tok::Eq
                }
            }
            '\\' => {
                if cur.eat('=') && cur.eat('=') {
                    Tok::NotEq
                } else {
                    return Err(err("expected `\\==`".into()));
                }
            }
            '.' => match cur.peek() {
                Some(n) if n.is_ascii_lowercase() => {
                    let mut name = String::from(".");
                    cur.ident_tail(&mut name);
                    Tok::Atom(name)
                }
                _ => Tok::Dot,
            },
            '"' | '\'' => {
                let quote = c;
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        None => return Err(err("unterminated quoted text".into())),
                        Some('\\') => match cur.bump() {
                            Some(e @ ('\\' | '"' | '\'')) => s.push(e),
                            Some('n') => s.push('\n'),
                            Some(other) => {
                                return Err(err(format!("unsupported escape `\\{other}`")))
                            }
                            None => return Err(err("unterminated quoted text".into())),
                        },
                        Some(ch) if ch == quote => break,
                        Some(ch) => s.push(ch),
                    }
                }
                if quote == '"' {
                    Tok::Str(s)
                } else {
                    Tok::QAtom(s)
                }
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::from(c);
                while let Some(d) = cur.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                let n = digits
                    .parse::<i64>()
                    .map_err(|_| err(format!("integer `{digits}` out of range")))?;
                Tok::Int(n)
            }
            c if c.is_ascii_lowercase() => {
                let mut name = String::from(c);
                cur.ident_tail(&mut name);
                Tok::Atom(name)
            }
            c if c.is_ascii_uppercase() || c == '_' => {
                let mut name = String::from(c);
                cur.ident_tail(&mut name);
                Tok::Var(name)
            }
            other => return Err(err(format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, line, col });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn internal_action_vs_clause_end() {
        assert_eq!(
            toks("a. .wait(x)."),
            vec![
                Tok::Atom("a".into()),
                Tok::Dot,
                Tok::Atom(".wait".into()),
                Tok::LParen,
                Tok::Atom("x".into()),
                Tok::RParen,
                Tok::Dot,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn operators() {
        assert_eq!(
            toks("<- :- <= \\== !! ! :"),
            vec![
                Tok::Arrow,
                Tok::Neck,
                Tok::Le,
                Tok::NotEq,
                Tok::BangBang,
                Tok::Bang,
                Tok::Colon,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_and_comments() {
        let t = tokenize("// header\n  foo").unwrap();
        assert_eq!((t[0].line, t[0].col), (2, 3));
    }

    #[test]
    fn bad_character() {
        let e = tokenize("a # b").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
    }
}
